use nalgebra::Vector3;

use super::quadratic::{s_tilde, EnergyWeights};
use super::mode::{CVec3, Direction};
use crate::grid::Spacing;
use crate::symbol::CubicValues;

/// One node of an integrated mode.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub t: f64,
    pub u: CVec3,
    pub values: CubicValues,
    pub forcing: Vector3<f64>,
    /// Smallest and largest eigenvalue of `S`.
    pub s_eig: [f64; 2],
    /// Distance to the half-step companion at this node.
    pub err_est: f64,
    pub cancel_resid: f64,
    /// Weighted energy for the run's own `(N, γ, λ)`.
    pub energy: f64,
    /// `LHS − RHS` of the differential inequality (`≤ 0` when it holds);
    /// NaN at the two nodes next to each end.
    pub keiyaku_resid: f64,
}

impl TraceRecord {
    pub fn norm_sq(&self) -> f64 {
        self.u.norm_squared()
    }

    /// `(|U₁|, |U₂|, b|U₃|²)`.
    pub fn component_norms(&self) -> [f64; 3] {
        [self.u[0].norm(), self.u[1].norm(), self.values.b * self.u[2].norm_sqr()]
    }
}

/// Time series of one mode; records run in the direction of integration.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyTrace {
    pub xi: Vec<f64>,
    pub bracket_xi: f64,
    pub direction: Direction,
    pub spacing: Spacing,
    /// Signed step in the integration variable (`t` or `ln t`).
    pub step: f64,
    pub records: Vec<TraceRecord>,
    pub err_est: f64,
    pub max_norm: f64,
}

impl EnergyTrace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// `+1` forward, `−1` for the adjoint run.
    pub fn sign(&self) -> f64 {
        match self.direction {
            Direction::Forward => 1.0,
            Direction::BackwardAdjoint => -1.0,
        }
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.t)
    }

    /// `Re⟨S̃U,U⟩` at every node.
    pub fn quadratic_form(&self, lambda: f64) -> Vec<f64> {
        self.records
            .iter()
            .map(|r| {
                let st = s_tilde(&r.values, r.t, self.bracket_xi, lambda);
                quad(&st, &r.u)
            })
            .collect()
    }

    /// `t^{−N}e^{−γt}Re⟨S̃U,U⟩` forward, `t^{N}e^{γt}Re⟨S̃V,V⟩` backward.
    pub fn weighted_energy(&self, w: &EnergyWeights) -> Vec<f64> {
        let sg = self.sign();
        self.quadratic_form(w.lambda)
            .into_iter()
            .zip(self.times())
            .map(|(q, t)| w.weight(t, sg) * q)
            .collect()
    }

    /// Smallest eigenvalue of `S̃` at each node.
    pub fn s_tilde_min_eig(&self, lambda: f64) -> impl Iterator<Item = f64> + '_ {
        let x2 = self.bracket_xi * self.bracket_xi;
        self.records.iter().map(move |r| r.s_eig[0] + lambda / (r.t * x2))
    }

    /// Spectral norm of `S̃` at each node.
    pub fn s_tilde_norm(&self, lambda: f64) -> impl Iterator<Item = f64> + '_ {
        let x2 = self.bracket_xi * self.bracket_xi;
        self.records.iter().map(move |r| {
            let mu = lambda / (r.t * x2);
            (r.s_eig[1] + mu).abs().max((r.s_eig[0] + mu).abs())
        })
    }
}

/// `Re⟨Qu,u⟩` for real symmetric `Q`.
pub fn quad(q: &nalgebra::Matrix3<f64>, u: &CVec3) -> f64 {
    let (re, im) = (u.map(|z| z.re), u.map(|z| z.im));
    re.dot(&(q * re)) + im.dot(&(q * im))
}
