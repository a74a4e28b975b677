use alloc::boxed::Box;
use alloc::string::String;

use num_complex::Complex64;

use crate::rational::RationalFit;

/// Every failure the numerical pipeline can report.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("singularity: evaluation at a pole (s = {0})")]
    Singularity(Complex64),

    #[error("log singularity: the function vanishes at s = {0}")]
    LogSingularity(Complex64),

    #[error("identically reflective load: S(-s)S(s) - 1 vanishes everywhere")]
    IdenticallyReflective,

    #[error("order too low: max relative error {error:.3e} exceeds target {target:.3e}")]
    OrderTooLow {
        error: f64,
        target: f64,
        best: Box<RationalFit>,
    },

    #[error("singular matrix")]
    SingularMatrix,

    #[error("root finder did not converge")]
    RootFinding,

    #[error("lossless load singularity: |S_eq| >= 1 at {0} Hz")]
    LosslessLoad(f64),

    #[error("unsupported root multiplicity {multiplicity} at s = {root}")]
    UnsupportedRoot { root: Complex64, multiplicity: usize },

    #[error("imaginary-axis root at {0} Hz coincides with a zero of the load")]
    RootOnZero(f64),

    #[error("modeling error: nonpositive Bode-Fano bound {0:e}")]
    NonpositiveBound(f64),

    #[error("divergent integral: T(f) = 1 on an interval near {0} Hz")]
    Divergent(f64),

    #[error("unconstrained profile is T = 1; use the ideal benchmark instead")]
    AllMultipliersZero,

    #[error("bisection bracket not found for constraint {0}")]
    BracketNotFound(usize),

    #[error("resonant denominator at {0} Hz")]
    Resonance(f64),

    #[error("unmatchable load: Re Z = {0} ohm at the design frequency")]
    Unmatchable(f64),

    #[error("all ladder restarts diverged")]
    FitDiverged,
}
