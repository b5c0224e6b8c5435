//! Coefficient symbols of the reduced cubic
//! `(τ−φ⟨ξ⟩)³ + a⟨ξ⟩(τ−φ⟨ξ⟩)² − b⟨ξ⟩²(τ−φ⟨ξ⟩) + c⟨ξ⟩³`.

use nalgebra::{Matrix3, Vector3};
use serde::Serialize;

use crate::expr::{Expr, Point};

/// Pointwise values of `(a, b, c, φ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CubicValues {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub phi: f64,
}

impl CubicValues {
    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.b.is_finite() && self.c.is_finite() && self.phi.is_finite()
    }
}

/// `(∂ₜa, ∂ₜb, ∂ₜc)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeDerivatives {
    pub da: f64,
    pub db: f64,
    pub dc: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivativeSource {
    Analytic,
    FiniteDifference,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CubicSymbol {
    pub a: Expr,
    pub b: Expr,
    pub c: Expr,
    pub phi: Expr,
    /// Analytic `(∂ₜa, ∂ₜb, ∂ₜc)`; finite differences are used when absent.
    pub dt: Option<[Expr; 3]>,
}

/// Relative step for `t` finite differences.
pub const T_STEP: f64 = 1e-6;

impl CubicSymbol {
    pub fn new(a: Expr, b: Expr, c: Expr, phi: Expr) -> Self {
        Self {
            a,
            b,
            c,
            phi,
            dt: None,
        }
    }

    pub fn parse(a: &str, b: &str, c: &str, phi: &str) -> Result<Self, crate::expr::ExprError> {
        Ok(Self::new(
            Expr::parse(a)?,
            Expr::parse(b)?,
            Expr::parse(c)?,
            Expr::parse(phi)?,
        ))
    }

    pub fn with_dt(mut self, da: Expr, db: Expr, dc: Expr) -> Self {
        self.dt = Some([da, db, dc]);
        self
    }

    pub fn eval(&self, p: &Point) -> CubicValues {
        CubicValues {
            a: self.a.eval(p),
            b: self.b.eval(p),
            c: self.c.eval(p),
            phi: self.phi.eval(p),
        }
    }

    pub fn derivative_source(&self) -> DerivativeSource {
        if self.dt.is_some() {
            DerivativeSource::Analytic
        } else {
            DerivativeSource::FiniteDifference
        }
    }

    /// `t`-derivatives, analytic if given, else central differences with step
    /// `T_STEP·max(1,|t|)` (one-sided second order when the stencil would
    /// cross `t = 0`).
    pub fn dt(&self, p: &Point) -> TimeDerivatives {
        if let Some([da, db, dc]) = &self.dt {
            return TimeDerivatives {
                da: da.eval(p),
                db: db.eval(p),
                dc: dc.eval(p),
            };
        }
        let h = T_STEP * p.t.abs().max(1.0);
        let f = |t: f64| {
            let v = self.eval(&p.with_t(t));
            [v.a, v.b, v.c]
        };
        let d = if p.t >= h || p.t < 0.0 {
            let (fp, fm) = (f(p.t + h), f(p.t - h));
            [0, 1, 2].map(|k| (fp[k] - fm[k]) / (2.0 * h))
        } else {
            let (f0, f1, f2) = (f(p.t), f(p.t + h), f(p.t + 2.0 * h));
            [0, 1, 2].map(|k| (-3.0 * f0[k] + 4.0 * f1[k] - f2[k]) / (2.0 * h))
        };
        TimeDerivatives {
            da: d[0],
            db: d[1],
            dc: d[2],
        }
    }

    /// Number of `x` coordinates referenced.
    pub fn x_arity(&self) -> usize {
        self.exprs().map(Expr::x_arity).max().unwrap_or(0)
    }

    pub fn xi_arity(&self) -> usize {
        self.exprs().map(Expr::xi_arity).max().unwrap_or(0)
    }

    fn exprs(&self) -> impl Iterator<Item = &Expr> {
        [&self.a, &self.b, &self.c, &self.phi]
            .into_iter()
            .chain(self.dt.iter().flatten())
    }
}

/// `τ³ + q₁τ² + q₂τ + q₃`.
#[derive(Debug, Clone, PartialEq)]
pub struct QForm {
    pub q1: Expr,
    pub q2: Expr,
    pub q3: Expr,
}

impl QForm {
    pub fn eval(&self, p: &Point) -> [f64; 3] {
        [self.q1.eval(p), self.q2.eval(p), self.q3.eval(p)]
    }
}

/// Coefficients of the reduced form obtained by expanding around `τ = φ⟨ξ⟩`:
/// `a = q₁/X + 3φ`, `b = −(q₂/X² + 2φq₁/X + 3φ²)`,
/// `c = q₃/X³ + φq₂/X² + φ²q₁/X + φ³` with `X = ⟨ξ⟩`.
pub fn from_q_form(q: &QForm, phi: &Expr) -> CubicSymbol {
    let x = Expr::bracket_xi;
    let k = Expr::constant;
    let q1x = q.q1.clone() / x();
    let q2x = q.q2.clone() / x().powi(2);
    let q3x = q.q3.clone() / x().powi(3);
    let a = q1x.clone() + k(3.0) * phi.clone();
    let b = -(q2x.clone() + k(2.0) * phi.clone() * q1x.clone() + k(3.0) * phi.clone().powi(2));
    let c = q3x + phi.clone() * q2x + phi.clone().powi(2) * q1x + phi.clone().powi(3);
    CubicSymbol::new(a, b, c, phi.clone())
}

/// Pointwise version of [`from_q_form`].
pub fn reduce_q_values(q: [f64; 3], phi: f64, bracket_xi: f64) -> CubicValues {
    let x = bracket_xi;
    let (q1, q2, q3) = (q[0] / x, q[1] / (x * x), q[2] / (x * x * x));
    CubicValues {
        a: q1 + 3.0 * phi,
        b: -(q2 + 2.0 * phi * q1 + 3.0 * phi * phi),
        c: q3 + phi * q2 + phi * phi * q1 + phi * phi * phi,
        phi,
    }
}

/// Ascending `τ`-coefficients of `(τ−φX)³ + aX(τ−φX)² − bX²(τ−φX) + cX³`,
/// excluding the leading 1: returns `[q₁, q₂, q₃]`.
pub fn expand_reduced(v: &CubicValues, bracket_xi: f64) -> [f64; 3] {
    let x = bracket_xi;
    let s = v.phi * x;
    let (a, b, c) = (v.a * x, v.b * x * x, v.c * x * x * x);
    // (τ−s)³ = τ³ − 3sτ² + 3s²τ − s³ ; (τ−s)² = τ² − 2sτ + s²
    let q1 = -3.0 * s + a;
    let q2 = 3.0 * s * s - 2.0 * a * s - b;
    let q3 = -s * s * s + a * s * s + b * s + c;
    [q1, q2, q3]
}

/// A 3×3 matrix of expressions.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixExpr(pub [[Expr; 3]; 3]);

impl MatrixExpr {
    pub fn zeros() -> Self {
        let z = || Expr::constant(0.0);
        Self([[z(), z(), z()], [z(), z(), z()], [z(), z(), z()]])
    }

    pub fn eval(&self, p: &Point) -> Matrix3<f64> {
        Matrix3::from_fn(|i, j| self.0[i][j].eval(p))
    }

    pub fn is_x_free(&self) -> bool {
        self.0.iter().flatten().all(Expr::is_x_free)
    }
}

/// A 3-vector of expressions.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorExpr(pub [Expr; 3]);

impl VectorExpr {
    pub fn zeros() -> Self {
        let z = || Expr::constant(0.0);
        Self([z(), z(), z()])
    }

    pub fn eval(&self, p: &Point) -> Vector3<f64> {
        Vector3::from_fn(|i, _| self.0[i].eval(p))
    }

    pub fn is_x_free(&self) -> bool {
        self.0.iter().all(Expr::is_x_free)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(t: f64) -> Point {
        Point::new(t, vec![0.3], vec![2.0])
    }

    #[test]
    fn zero_q_form() {
        let z = Expr::constant(0.0);
        let q = QForm {
            q1: z.clone(),
            q2: z.clone(),
            q3: z.clone(),
        };
        let s = from_q_form(&q, &z);
        let v = s.eval(&pt(0.5));
        assert_eq!((v.a, v.b, v.c), (0.0, 0.0, 0.0));
    }

    #[test]
    fn round_trip_expansion() {
        let q = QForm {
            q1: Expr::parse("0.7*bracket_xi + t").unwrap(),
            q2: Expr::parse("-(1 + t)*bracket_xi^2 + x1").unwrap(),
            q3: Expr::parse("0.2*bracket_xi^3 - t*x1").unwrap(),
        };
        let phi = Expr::parse("0.4 - x1").unwrap();
        let s = from_q_form(&q, &phi);
        for t in [0.0, 0.25, 1.0] {
            let p = pt(t);
            let v = s.eval(&p);
            let back = expand_reduced(&v, p.bracket_xi());
            let want = q.eval(&p);
            for k in 0..3 {
                assert!((back[k] - want[k]).abs() <= 1e-12 * (1.0 + want[k].abs()));
            }
            let pv = reduce_q_values(want, phi.eval(&p), p.bracket_xi());
            assert!((pv.c - v.c).abs() < 1e-13);
        }
    }

    #[test]
    fn finite_difference_derivatives() {
        let s = CubicSymbol::parse("t^2", "sqrt(t)+t", "t^3", "0").unwrap();
        let d = s.dt(&pt(0.5));
        assert!((d.da - 1.0).abs() < 1e-8);
        assert!((d.dc - 0.75).abs() < 1e-8);
        // one-sided stencil near zero stays finite for sqrt(t)
        let d0 = s.dt(&pt(0.0));
        assert!(d0.da.is_finite() && d0.db.is_finite());
        assert_eq!(s.derivative_source(), DerivativeSource::FiniteDifference);
        let s = s.with_dt(
            Expr::parse("2*t").unwrap(),
            Expr::parse("1").unwrap(),
            Expr::parse("3*t^2").unwrap(),
        );
        assert_eq!(s.dt(&pt(1.0)).dc, 3.0);
        assert_eq!(s.derivative_source(), DerivativeSource::Analytic);
    }
}
