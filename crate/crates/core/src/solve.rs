//! Supernodal triangular solves and backward-error evaluation.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::SymmetricSparseMatrix;
use crate::numeric::FactorPanels;

fn check_len(factor: &FactorPanels, len: usize) -> Result<()> {
    if len != factor.n() {
        return Err(Error::Dimension {
            expected: factor.n(),
            found: len,
        });
    }
    Ok(())
}

/// Solves `L y = b`, supernode by supernode from the left.
pub fn forward_solve(factor: &FactorPanels, b: &[f64]) -> Result<Vec<f64>> {
    check_len(factor, b.len())?;
    let mut y = b.to_vec();
    for (sn, panel) in factor.partition().supernodes().iter().zip(factor.panels()) {
        let first = sn.columns.start;
        let width = sn.width();
        for k in 0..width {
            let d = panel[(k, k)];
            if d == 0.0 {
                return Err(Error::SingularFactor { column: first + k });
            }
            let yk = y[first + k] / d;
            y[first + k] = yk;
            for i in k + 1..width {
                y[first + i] -= panel[(i, k)] * yk;
            }
        }
        for (p, &r) in sn.rows.iter().enumerate().skip(width) {
            let mut s = 0.0;
            for k in 0..width {
                s += panel[(p, k)] * y[first + k];
            }
            y[r] -= s;
        }
    }
    Ok(y)
}

/// Solves `Lᵀ x = y`, supernode by supernode from the right.
pub fn backward_solve(factor: &FactorPanels, y: &[f64]) -> Result<Vec<f64>> {
    check_len(factor, y.len())?;
    let mut x = y.to_vec();
    for (sn, panel) in factor
        .partition()
        .supernodes()
        .iter()
        .zip(factor.panels())
        .rev()
    {
        let first = sn.columns.start;
        let width = sn.width();
        for k in 0..width {
            let mut s = 0.0;
            for (p, &r) in sn.rows.iter().enumerate().skip(width) {
                s += panel[(p, k)] * x[r];
            }
            x[first + k] -= s;
        }
        for k in (0..width).rev() {
            let d = panel[(k, k)];
            if d == 0.0 {
                return Err(Error::SingularFactor { column: first + k });
            }
            let mut s = 0.0;
            for i in k + 1..width {
                s += panel[(i, k)] * x[first + i];
            }
            x[first + k] = (x[first + k] - s) / d;
        }
    }
    Ok(x)
}

/// `x = (L Lᵀ)⁻¹ b`.
pub fn solve(factor: &FactorPanels, b: &[f64]) -> Result<Vec<f64>> {
    let y = forward_solve(factor, b)?;
    backward_solve(factor, &y)
}

/// Normwise backward error `‖A x - b‖∞ / (‖A‖∞ ‖x‖∞ + ‖b‖∞)`; the
/// denominator is floored at machine epsilon.
pub fn residual(a: &SymmetricSparseMatrix, x: &[f64], b: &[f64]) -> Result<f64> {
    if b.len() != a.n() {
        return Err(Error::Dimension {
            expected: a.n(),
            found: b.len(),
        });
    }
    let ax = a.mul_vec(x)?;
    let inf = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let r = ax.iter().zip(b).fold(0.0f64, |m, (p, q)| m.max((p - q).abs()));
    let denom = (a.norm_inf() * inf(x) + inf(b)).max(f64::EPSILON);
    Ok(r / denom)
}
