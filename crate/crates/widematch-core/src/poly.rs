//! Real-coefficient polynomials stored in ascending order (`p[k]` multiplies `s^k`).

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;
#[allow(unused_imports)] // inherent float methods shadow it when std is linked
use num_traits::Float;

use crate::{Error, Result};

/// Horner evaluation at a complex point.
pub fn eval(p: &[f64], s: Complex64) -> Complex64 {
    p.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * s + c)
}

/// Horner evaluation for complex coefficients.
pub fn eval_complex(p: &[Complex64], s: Complex64) -> Complex64 {
    p.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * s + c)
}

pub fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| a.get(k).copied().unwrap_or(0.0) - b.get(k).copied().unwrap_or(0.0))
        .collect()
}

/// Coefficients of `p(-s)`.
pub fn reflect(p: &[f64]) -> Vec<f64> {
    p.iter()
        .enumerate()
        .map(|(k, &c)| if k % 2 == 1 { -c } else { c })
        .collect()
}

/// Monic-times-`lead` polynomial with the given roots. The roots must be
/// closed under conjugation for the result to be real; the imaginary residue
/// is dropped.
pub fn from_roots(roots: &[Complex64], lead: f64) -> Vec<f64> {
    let mut acc = vec![Complex64::new(lead, 0.0)];
    for &r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); acc.len() + 1];
        for (k, &c) in acc.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= c * r;
        }
        acc = next;
    }
    acc.into_iter().map(|c| c.re).collect()
}

/// Index of the highest coefficient whose magnitude exceeds `tol`, or `None`
/// when every coefficient is below it.
pub fn degree(p: &[f64], tol: f64) -> Option<usize> {
    p.iter().rposition(|c| c.abs() > tol)
}

/// All complex roots of `p`, with leading coefficients of magnitude `<= tol`
/// discarded first. Exact zero low-order coefficients are returned as roots
/// at the origin.
///
/// The remaining polynomial is rescaled so its roots have unit geometric
/// mean magnitude, its companion matrix is diagonalized, and each eigenvalue
/// gets a few Newton steps against the original coefficients.
pub fn roots(p: &[f64], tol: f64) -> Result<Vec<Complex64>> {
    let n = match degree(p, tol) {
        Some(n) => n,
        None => return Err(Error::InvalidInput("roots of the zero polynomial".into())),
    };
    let p = &p[..=n];
    let low = p.iter().position(|&c| c != 0.0).unwrap_or(0);
    let mut out = vec![Complex64::new(0.0, 0.0); low];
    let q = &p[low..];
    let m = q.len() - 1;
    if m == 0 {
        return Ok(out);
    }
    // s = rho * u brings the roots to order one.
    let rho = (q[0].abs() / q[m].abs()).powf(1.0 / m as f64);
    let scaled: Vec<f64> = q
        .iter()
        .enumerate()
        .map(|(k, &c)| c * rho.powi(k as i32) / (q[m] * rho.powi(m as i32)))
        .collect();
    let mut comp = DMatrix::<f64>::zeros(m, m);
    for i in 1..m {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..m {
        comp[(i, m - 1)] = -scaled[i];
    }
    let schur = nalgebra::linalg::Schur::try_new(comp, f64::EPSILON, 10_000)
        .ok_or(Error::RootFinding)?;
    let dscaled: Vec<f64> = (1..=m).map(|k| scaled[k] * k as f64).collect();
    for mut u in schur.complex_eigenvalues().iter().copied() {
        for _ in 0..3 {
            let d = eval(&dscaled, u);
            if d.norm() == 0.0 {
                break;
            }
            let step = eval(&scaled, u) / d;
            if !step.re.is_finite() || !step.im.is_finite() || step.norm() > 1e-3 * (1.0 + u.norm()) {
                break;
            }
            u -= step;
        }
        out.push(u * rho);
    }
    Ok(out)
}

/// A root together with the number of times it occurs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootMultiplicity {
    pub root: Complex64,
    pub multiplicity: usize,
}

/// Merges roots that lie within `tol * (1 + |r|)` of a cluster's running
/// centroid; multiplicities accumulate and the centroid is reported.
pub fn cluster(roots: &[Complex64], tol: f64) -> Vec<RootMultiplicity> {
    let mut groups: Vec<(Complex64, usize)> = Vec::new();
    for &r in roots {
        match groups
            .iter_mut()
            .find(|(c, k)| (*c / *k as f64 - r).norm() <= tol * (1.0 + r.norm()))
        {
            Some(g) => {
                g.0 += r;
                g.1 += 1;
            }
            None => groups.push((r, 1)),
        }
    }
    groups
        .into_iter()
        .map(|(sum, k)| RootMultiplicity {
            root: sum / k as f64,
            multiplicity: k,
        })
        .collect()
}

/// Replaces a nearly conjugate-closed root set with an exactly closed one:
/// near-real roots become real, and each upper-half root is paired with the
/// closest lower-half partner and both are replaced by their symmetric mean.
pub fn symmetrize(roots: &[Complex64], tol: f64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(roots.len());
    let mut lower: Vec<Complex64> = Vec::new();
    for &r in roots {
        if r.im.abs() <= tol * (1.0 + r.norm()) {
            out.push(Complex64::new(r.re, 0.0));
        } else if r.im > 0.0 {
            out.push(r);
        } else {
            lower.push(r);
        }
    }
    let uppers: Vec<Complex64> = out.iter().copied().filter(|r| r.im > 0.0).collect();
    out.retain(|r| r.im == 0.0);
    for u in uppers {
        let best = lower
            .iter()
            .enumerate()
            .min_by(|a, b| {
                (a.1.conj() - u)
                    .norm()
                    .partial_cmp(&(b.1.conj() - u).norm())
                    .unwrap_or(core::cmp::Ordering::Equal)
            })
            .map(|(i, _)| i);
        let avg = match best {
            Some(i) => {
                let l = lower.swap_remove(i);
                (u + l.conj()) * 0.5
            }
            None => u,
        };
        out.push(avg);
        out.push(avg.conj());
    }
    // Unpaired lower roots would break realness; project them onto the axis
    // rather than dropping them.
    out.extend(lower.into_iter().map(|l| Complex64::new(l.re, 0.0)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn quadratic_roots_match_formula() {
        // 2x^2 + 3x + 5
        let r = roots(&[5.0, 3.0, 2.0], 0.0).unwrap();
        let disc = Complex64::new(9.0 - 40.0, 0.0).sqrt();
        let want = [(-3.0 + disc) / 4.0, (-3.0 - disc) / 4.0];
        for w in want {
            assert!(r.iter().any(|x| (x - w).norm() < 1e-13), "{r:?}");
        }
    }

    #[test]
    fn origin_roots_are_exact() {
        let r = roots(&[0.0, 0.0, 0.0, -4.0], 0.0).unwrap();
        assert_eq!(r.len(), 3);
        assert!(r.iter().all(|x| x.norm() == 0.0));
    }

    #[test]
    fn badly_scaled_roots() {
        let want = [c(-3e10, 4e10), c(-3e10, -4e10), c(-1e9, 0.0)];
        let p = from_roots(&want, 2.5e-30);
        let got = roots(&p, 0.0).unwrap();
        for w in want {
            assert!(got.iter().any(|x| (x - w).norm() < 1e-9 * w.norm()));
        }
    }

    #[test]
    fn reflect_and_multiply() {
        let p = [1.0, 2.0, 3.0];
        assert_eq!(reflect(&p), vec![1.0, -2.0, 3.0]);
        assert_eq!(mul(&[1.0, 1.0], &[1.0, -1.0]), vec![1.0, 0.0, -1.0]);
        assert_eq!(sub(&[1.0], &[0.0, 2.0]), vec![1.0, -2.0]);
    }

    #[test]
    fn clustering_merges_smeared_roots() {
        let rs = [c(1.0, 0.0), c(1.0 + 1e-9, 0.0), c(2.0, 0.0)];
        let cl = cluster(&rs, 1e-6);
        assert_eq!(cl.len(), 2);
        assert_eq!(cl[0].multiplicity, 2);
    }

    #[test]
    fn symmetrize_pairs_conjugates() {
        let rs = [c(-1.0, 2.0 + 1e-12), c(-1.0 - 1e-12, -2.0), c(3.0, 1e-14)];
        let s = symmetrize(&rs, 1e-9);
        assert_eq!(s.len(), 3);
        assert!(s.iter().any(|r| *r == c(3.0, 0.0)));
        let up = s.iter().find(|r| r.im > 0.0).unwrap();
        assert!(s.contains(&up.conj()));
    }
}
