//! A single frequency mode of the reduced system in the multiplier model.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::cubic::matrices::{a_matrix, s_matrix, sa_matrix};
use crate::error::{Error, Result};
use crate::expr::{bracket, Point};
use crate::grid::Spacing;
use crate::poly::Complex64;
use crate::symbol::{CubicSymbol, CubicValues, MatrixExpr, VectorExpr};

pub type CVec3 = Vector3<Complex64>;

/// `∂ₜU = i(φ⟨ξ⟩I + A⟨ξ⟩ + B)U + iF` at a frozen frequency `ξ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSystem {
    xi: Vec<f64>,
    bracket_xi: f64,
    x_dim: usize,
    pub sym: CubicSymbol,
    pub b: MatrixExpr,
    pub f: VectorExpr,
}

/// Coefficients of one mode at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeCoefficients {
    pub t: f64,
    pub values: CubicValues,
    /// `φ⟨ξ⟩I + A⟨ξ⟩ + B`.
    pub generator: Matrix3<f64>,
    pub b: Matrix3<f64>,
    pub forcing: Vector3<f64>,
}

const X_INDEPENDENCE_TOL: f64 = 1e-14;

impl ModeSystem {
    /// Builds a mode, rejecting symbols whose values change with `x`
    /// (sampled at `x = 0` and `x = 1` at three times in `[t0, t1]`).
    pub fn new(xi: Vec<f64>, sym: CubicSymbol, b: MatrixExpr, f: VectorExpr, t0: f64, t1: f64) -> Result<Self> {
        if xi.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("frequency must be finite".into()));
        }
        let x_dim = sym.x_arity().max(xi.len()).max(1);
        let ms = Self {
            bracket_xi: bracket(&xi),
            xi,
            x_dim,
            sym,
            b,
            f,
        };
        for t in [t0, 0.5 * (t0 + t1), t1] {
            let p0 = Point::new(t, vec![0.0; x_dim], ms.xi.clone());
            let p1 = Point::new(t, vec![1.0; x_dim], ms.xi.clone());
            let (v0, v1) = (ms.sym.eval(&p0), ms.sym.eval(&p1));
            let (b0, b1) = (ms.b.eval(&p0), ms.b.eval(&p1));
            let (f0, f1) = (ms.f.eval(&p0), ms.f.eval(&p1));
            let pairs: [(&'static str, f64, f64); 4] =
                [("a", v0.a, v1.a), ("b", v0.b, v1.b), ("c", v0.c, v1.c), ("phi", v0.phi, v1.phi)];
            let extra = b0
                .iter()
                .zip(b1.iter())
                .map(|(&p, &q)| ("B", p, q))
                .chain(f0.iter().zip(f1.iter()).map(|(&p, &q)| ("F", p, q)));
            for (name, p, q) in pairs.into_iter().chain(extra) {
                let diff = (p - q).abs();
                if diff > X_INDEPENDENCE_TOL * (1.0 + p.abs()) || diff.is_nan() {
                    return Err(Error::SymbolNotXIndependent { name, diff, t });
                }
            }
        }
        Ok(ms)
    }

    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    pub fn bracket_xi(&self) -> f64 {
        self.bracket_xi
    }

    pub fn point(&self, t: f64) -> Point {
        Point::new(t, vec![0.0; self.x_dim], self.xi.clone())
    }

    pub fn coefficients(&self, t: f64) -> ModeCoefficients {
        let p = self.point(t);
        let v = self.sym.eval(&p);
        let x = self.bracket_xi;
        let b = self.b.eval(&p);
        let generator = Matrix3::identity() * (v.phi * x) + a_matrix(v.a, v.b, v.c) * x + b;
        ModeCoefficients {
            t,
            values: v,
            generator,
            b,
            forcing: self.f.eval(&p),
        }
    }
}

impl ModeCoefficients {
    /// `S(φ⟨ξ⟩I + A⟨ξ⟩)` assembled from the closed forms of `S` and `SA`, so
    /// that it is symmetric entry for entry.
    pub fn principal_product(&self, bracket_xi: f64) -> Matrix3<f64> {
        let v = &self.values;
        s_matrix(v.a, v.b, v.c) * (v.phi * bracket_xi) + sa_matrix(v.a, v.b, v.c) * bracket_xi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    #[default]
    Forward,
    BackwardAdjoint,
}

/// Parameters of a single energy run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnergyRunConfig {
    /// Weight exponent `N`.
    pub n: f64,
    pub gamma: f64,
    pub lambda: f64,
    pub eps1: f64,
    /// `ε`.
    pub t_start: f64,
    /// `T₀`.
    pub t_end: f64,
    /// Total number of integration steps on `[ε, T₀]`.
    pub steps: usize,
    #[serde(default = "default_spacing")]
    pub spacing: Spacing,
    #[serde(default)]
    pub direction: Direction,
    /// `U(ε)` (forward) or `V(T₀)` (backward) as `[re, im]` pairs.
    pub initial_state: [[f64; 2]; 3],
    /// Candidate `N*` for the differential inequality; the measured value is
    /// used when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_star_guess: Option<f64>,
}

fn default_spacing() -> Spacing {
    Spacing::Log
}

pub const MIN_STEPS: usize = 16;

impl EnergyRunConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(self.t_start > 0.0 && self.t_start < self.t_end && self.t_end.is_finite()) {
            return bad(format!("need 0 < t_start < t_end, got {} and {}", self.t_start, self.t_end));
        }
        if self.steps < MIN_STEPS {
            return bad(format!("steps must be at least {MIN_STEPS}, got {}", self.steps));
        }
        if !(self.n >= 0.0 && self.n.is_finite()) {
            return bad(format!("N must be finite and nonnegative, got {}", self.n));
        }
        if !(self.gamma >= 0.0 && self.lambda >= 0.0 && self.gamma.is_finite() && self.lambda.is_finite()) {
            return bad("gamma and lambda must be finite and nonnegative".into());
        }
        if !(self.eps1 > 0.0 && self.eps1.is_finite()) {
            return bad(format!("eps1 must be positive, got {}", self.eps1));
        }
        if self.initial_state.iter().flatten().any(|v| !v.is_finite()) {
            return bad("initial state must be finite".into());
        }
        Ok(())
    }

    pub fn initial(&self) -> CVec3 {
        CVec3::from_fn(|i, _| Complex64::new(self.initial_state[i][0], self.initial_state[i][1]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn canonical() -> CubicSymbol {
        CubicSymbol::parse("0", "t", "0", "0").unwrap()
    }

    #[test]
    fn rejects_x_dependence() {
        let sym = CubicSymbol::parse("0", "t + x1", "0", "0").unwrap();
        let err = ModeSystem::new(vec![1.0], sym, MatrixExpr::zeros(), VectorExpr::zeros(), 0.1, 1.0).unwrap_err();
        assert!(matches!(err, Error::SymbolNotXIndependent { name: "b", .. }));
    }

    #[test]
    fn generator_and_cancellation_product() {
        let ms = ModeSystem::new(vec![3f64.sqrt()], canonical(), MatrixExpr::zeros(), VectorExpr::zeros(), 0.1, 1.0).unwrap();
        assert!((ms.bracket_xi() - 2.0).abs() < 1e-15);
        let c = ms.coefficients(0.5);
        assert_eq!(c.generator, a_matrix(0.0, 0.5, 0.0) * ms.bracket_xi());
        let k = c.principal_product(ms.bracket_xi());
        assert_eq!(k, k.transpose());
    }

    #[test]
    fn config_validation() {
        let mut cfg = EnergyRunConfig {
            n: 4.0,
            gamma: 1.0,
            lambda: 1.0,
            eps1: 0.1,
            t_start: 1e-3,
            t_end: 1.0,
            steps: 64,
            spacing: Spacing::Log,
            direction: Direction::Forward,
            initial_state: [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]],
            n_star_guess: None,
        };
        assert!(cfg.validate().is_ok());
        cfg.steps = 8;
        assert!(cfg.validate().is_err());
        cfg.steps = 64;
        cfg.t_start = 0.0;
        assert!(cfg.validate().is_err());
    }
}
