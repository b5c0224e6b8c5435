//! Small dense helpers: entrywise norms and semidefiniteness tests.

use nalgebra::{DMatrix, Matrix3, SymmetricEigen};
use serde::Serialize;

/// Largest absolute entry.
pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

pub fn max_abs3(m: &Matrix3<f64>) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    m.clone()
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

pub fn min_eigenvalue3(m: &Matrix3<f64>) -> f64 {
    SymmetricEigen::new(*m)
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Outcome of a 3×3 semidefiniteness test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PsdCheck {
    /// Smallest of the seven principal minors.
    pub min_minor: f64,
    pub min_eig: f64,
    /// Absolute slack used for both tests.
    pub slack: f64,
    pub psd: bool,
}

/// Relative slack applied to the max entry in [`psd3`].
pub const PSD_SLACK: f64 = 1e-12;

/// Positive semidefiniteness via all principal minors and the smallest
/// eigenvalue, each allowed `PSD_SLACK · max|mᵢⱼ|` (squared/cubed for the
/// higher-order minors).
pub fn psd3(m: &Matrix3<f64>) -> PsdCheck {
    let s = max_abs3(m);
    let slack = PSD_SLACK * s;
    let d = [m[(0, 0)], m[(1, 1)], m[(2, 2)]];
    let m2 = |i: usize, j: usize| m[(i, i)] * m[(j, j)] - m[(i, j)] * m[(j, i)];
    let ones = d.into_iter().fold(f64::INFINITY, f64::min);
    let twos = [m2(0, 1), m2(0, 2), m2(1, 2)]
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    let three = m.determinant();
    let min_eig = min_eigenvalue3(m);
    // compare minors on the scale of the entries
    let scaled = [
        ones,
        if s > 0.0 { twos / s } else { twos },
        if s > 0.0 { three / (s * s) } else { three },
    ];
    let min_minor = scaled.into_iter().fold(f64::INFINITY, f64::min);
    let psd = min_minor >= -slack && min_eig >= -slack;
    PsdCheck {
        min_minor,
        min_eig,
        slack,
        psd,
    }
}

/// Largest `ε ∈ [lo, hi]` with `feasible(ε)`, by bisection, assuming
/// feasibility is monotone decreasing in `ε`. Returns `None` if `lo` fails.
pub fn bisect_max(lo: f64, hi: f64, iters: usize, mut feasible: impl FnMut(f64) -> bool) -> Option<f64> {
    if !feasible(lo) {
        return None;
    }
    if feasible(hi) {
        return Some(hi);
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..iters {
        let mid = 0.5 * (a + b);
        if feasible(mid) {
            a = mid;
        } else {
            b = mid;
        }
    }
    Some(a)
}
