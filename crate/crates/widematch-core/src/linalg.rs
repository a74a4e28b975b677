//! Thin helpers over `nalgebra` for the small dense systems used here.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
#[allow(unused_imports)] // inherent float methods shadow it when std is linked
use num_traits::Float;

use crate::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Inverse via LU; fails when the matrix is numerically singular.
pub fn inverse(m: &CMatrix) -> Result<CMatrix> {
    let scale = m.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let lu = m.clone().lu();
    let det = lu.determinant();
    if !(det.norm() > f64::EPSILON * scale.powi(m.nrows() as i32)) {
        return Err(Error::SingularMatrix);
    }
    lu.try_inverse().ok_or(Error::SingularMatrix)
}

/// Largest singular value (spectral norm).
pub fn max_singular_value(m: &CMatrix) -> f64 {
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

/// Minimum-norm least-squares solution of `a x = b` with column equilibration.
/// Singular values below `rcond * sigma_max` are treated as zero.
pub fn lstsq(a: &DMatrix<f64>, b: &DVector<f64>, rcond: f64) -> Result<DVector<f64>> {
    let scales: Vec<f64> = (0..a.ncols())
        .map(|j| {
            let n = a.column(j).norm();
            if n > 0.0 {
                n
            } else {
                1.0
            }
        })
        .collect();
    let mut scaled = a.clone();
    for (j, s) in scales.iter().enumerate() {
        scaled.column_mut(j).scale_mut(1.0 / s);
    }
    let svd = scaled.svd(true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let x = svd
        .solve(b, rcond * smax)
        .map_err(|_| Error::SingularMatrix)?;
    Ok(DVector::from_iterator(
        x.len(),
        x.iter().zip(&scales).map(|(v, s)| v / s),
    ))
}
