//! Weighted energy, the principal-part cancellation and the differential
//! inequality for the energy.

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use super::mode::{CVec3, EnergyRunConfig, ModeSystem};
use super::trace::EnergyTrace;
use crate::cubic::matrices::s_matrix;
use crate::symbol::CubicValues;

/// `(N, γ, λ)` of a weighted energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyWeights {
    pub n: f64,
    pub gamma: f64,
    pub lambda: f64,
}

impl From<&EnergyRunConfig> for EnergyWeights {
    fn from(c: &EnergyRunConfig) -> Self {
        Self {
            n: c.n,
            gamma: c.gamma,
            lambda: c.lambda,
        }
    }
}

impl EnergyWeights {
    /// `t^{−σN}e^{−σγt}`.
    pub fn weight(&self, t: f64, sign: f64) -> f64 {
        (-sign * (self.n * t.ln() + self.gamma * t)).exp()
    }
}

/// `S̃ = S + λt⁻¹⟨ξ⟩⁻²I`.
pub fn s_tilde(v: &CubicValues, t: f64, bracket_xi: f64, lambda: f64) -> Matrix3<f64> {
    s_matrix(v.a, v.b, v.c) + Matrix3::identity() * (lambda / (t * bracket_xi * bracket_xi))
}

/// `|Im⟨KU,U⟩| / max(1, |U|²)`.
pub fn cancellation_residual(k: &Matrix3<f64>, u: &CVec3) -> f64 {
    let (re, im) = (u.map(|z| z.re), u.map(|z| z.im));
    let imag = re.dot(&(k * im)) - im.dot(&(k * re));
    imag.abs() / u.norm_squared().max(1.0)
}

/// Largest principal-part cancellation residual along a trace.
pub fn cancellation_check(trace: &EnergyTrace) -> f64 {
    trace.records.iter().fold(0.0, |m, r| m.max(r.cancel_resid))
}

/// The same residual with the lower-order matrix included, i.e. for
/// `S(φ⟨ξ⟩I + A⟨ξ⟩ + B)`; this one is of the size of `S·B`.
pub fn cancellation_check_with_b(trace: &EnergyTrace, ms: &ModeSystem) -> f64 {
    trace.records.iter().fold(0.0, |m, r| {
        let c = ms.coefficients(r.t);
        let v = c.values;
        let k = c.principal_product(ms.bracket_xi()) + s_matrix(v.a, v.b, v.c) * c.b;
        m.max(cancellation_residual(&k, &r.u))
    })
}

/// Ingredients of the differential inequality along one trace at fixed `λ`.
///
/// With `q = Re⟨S̃U,U⟩` and `E = w(t)q`, the inequality reads
/// `N* ≥ ν(t) = σtq′/q − γt − t²⟨S̃F,F⟩/q`, independent of `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct KeiyakuProfile {
    pub sign: f64,
    pub t: Vec<f64>,
    pub q: Vec<f64>,
    /// `dq/dt` by fourth-order central differences; NaN at the two nodes next
    /// to each end.
    pub dq: Vec<f64>,
    /// `⟨S̃F,F⟩`.
    pub fsf: Vec<f64>,
}

impl KeiyakuProfile {
    pub fn new(trace: &EnergyTrace, lambda: f64) -> Self {
        let q = trace.quadratic_form(lambda);
        let t: Vec<f64> = trace.times().collect();
        let n = q.len();
        let h = trace.step;
        let map = super::integrate::TimeMap { spacing: trace.spacing };
        let dq = (0..n)
            .map(|k| {
                if k < 2 || k + 2 >= n {
                    return f64::NAN;
                }
                let ds = (-q[k + 2] + 8.0 * q[k + 1] - 8.0 * q[k - 1] + q[k - 2]) / (12.0 * h);
                ds / map.jacobian(t[k])
            })
            .collect();
        let fsf = trace
            .records
            .iter()
            .map(|r| {
                let st = s_tilde(&r.values, r.t, trace.bracket_xi, lambda);
                r.forcing.dot(&(st * r.forcing))
            })
            .collect();
        Self {
            sign: trace.sign(),
            t,
            q,
            dq,
            fsf,
        }
    }

    /// `ν` at node `k`, or `None` at the ends and where `q ≤ 0`.
    pub fn nu(&self, k: usize, gamma: f64) -> Option<f64> {
        let (t, q) = (self.t[k], self.q[k]);
        if self.dq[k].is_nan() || q <= 0.0 {
            return None;
        }
        Some(self.sign * t * self.dq[k] / q - gamma * t - t * t * self.fsf[k] / q)
    }

    /// Measured threshold `sup ν`; `−∞` if no node qualifies.
    pub fn n_star(&self, gamma: f64) -> f64 {
        (0..self.t.len())
            .filter_map(|k| self.nu(k, gamma))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `w·(σq′ − γq − t⟨S̃F,F⟩ − N*q/t)`, the difference of the two sides.
    pub fn residual(&self, k: usize, w: &EnergyWeights, n_star: f64) -> f64 {
        let (t, q) = (self.t[k], self.q[k]);
        w.weight(t, self.sign) * (self.sign * self.dq[k] - w.gamma * q - t * self.fsf[k] - n_star * q / t)
    }

    /// Scale used for the relative slack at node `k`.
    pub fn scale(&self, k: usize, w: &EnergyWeights, n_star: f64) -> f64 {
        let (t, q) = (self.t[k], self.q[k]);
        w.weight(t, self.sign) * (self.dq[k].abs() + w.gamma * q.abs() + t * self.fsf[k].abs() + n_star.abs() * q.abs() / t)
    }

    pub fn residuals(&self, w: &EnergyWeights, n_star: f64) -> Vec<f64> {
        (0..self.t.len()).map(|k| self.residual(k, w, n_star)).collect()
    }
}

/// `min (q − (ε₁t/3)(|U₁|² + |U₂|² + b|U₃|²)) / max(q, |U|²)` over the trace,
/// the lower bound `3S ⪰ ε₁t·diag(1,1,b)` seen along the solution.
pub fn positivity_margin(trace: &EnergyTrace, lambda: f64, eps1: f64) -> f64 {
    trace
        .quadratic_form(lambda)
        .into_iter()
        .zip(&trace.records)
        .map(|(q, r)| {
            let [n1, n2, bu3] = r.component_norms();
            let lower = eps1 * r.t / 3.0 * (n1 * n1 + n2 * n2 + bu3);
            let scale = q.max(r.norm_sq());
            if scale > 0.0 {
                (q - lower) / scale
            } else {
                0.0
            }
        })
        .fold(f64::INFINITY, f64::min)
}
