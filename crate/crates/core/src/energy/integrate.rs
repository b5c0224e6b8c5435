//! Fixed-step classical Runge–Kutta with a streamed half-step companion.

use nalgebra::{Matrix3, Vector3};

use super::quadratic::{cancellation_residual, EnergyWeights, KeiyakuProfile};
use super::mode::{CVec3, Direction, EnergyRunConfig, ModeSystem};
use super::trace::{EnergyTrace, TraceRecord};
use crate::cubic::matrices::s_matrix;
use crate::error::{Error, Result};
use crate::grid::Spacing;
use crate::poly::Complex64;

/// Relative bound on the step-halving error estimate.
pub const STEP_ERROR_LIMIT: f64 = 1e-6;

/// State as real and imaginary parts.
#[derive(Debug, Clone, Copy)]
struct St {
    re: Vector3<f64>,
    im: Vector3<f64>,
}

impl St {
    fn axpy(&self, h: f64, k: &St) -> St {
        St {
            re: self.re + k.re * h,
            im: self.im + k.im * h,
        }
    }

    fn to_complex(self) -> CVec3 {
        CVec3::from_fn(|i, _| Complex64::new(self.re[i], self.im[i]))
    }

    fn dist(&self, o: &St) -> f64 {
        let d = (self.re - o.re).norm_squared() + (self.im - o.im).norm_squared();
        d.sqrt()
    }

    fn norm(&self) -> f64 {
        (self.re.norm_squared() + self.im.norm_squared()).sqrt()
    }
}

/// Right-hand side in the integration variable `s`, already scaled by `dt/ds`.
#[derive(Debug, Clone, Copy)]
struct Slope {
    m: Matrix3<f64>,
    f: Vector3<f64>,
}

impl Slope {
    // i(mU + f) split into real and imaginary parts
    fn apply(&self, u: &St) -> St {
        St {
            re: -(self.m * u.im),
            im: self.m * u.re + self.f,
        }
    }
}

/// Integration variable `s` and `t(s)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct TimeMap {
    pub spacing: Spacing,
}

impl TimeMap {
    pub fn s(&self, t: f64) -> f64 {
        match self.spacing {
            Spacing::Linear => t,
            Spacing::Log => t.ln(),
        }
    }

    pub fn t(&self, s: f64) -> f64 {
        match self.spacing {
            Spacing::Linear => s,
            Spacing::Log => s.exp(),
        }
    }

    /// `dt/ds` at `t`.
    pub fn jacobian(&self, t: f64) -> f64 {
        match self.spacing {
            Spacing::Linear => 1.0,
            Spacing::Log => t,
        }
    }
}

fn rk4(u: &St, h: f64, k0: &Slope, kh: &Slope, k1: &Slope) -> St {
    let a = k0.apply(u);
    let b = kh.apply(&u.axpy(0.5 * h, &a));
    let c = kh.apply(&u.axpy(0.5 * h, &b));
    let d = k1.apply(&u.axpy(h, &c));
    St {
        re: u.re + (a.re + (b.re + c.re) * 2.0 + d.re) * (h / 6.0),
        im: u.im + (a.im + (b.im + c.im) * 2.0 + d.im) * (h / 6.0),
    }
}

/// Integrates one mode over `[t_start, t_end]` (reversed for the adjoint
/// direction) with `cfg.steps` equal steps in `s`, running a companion with
/// half the step alongside. Each record carries the distance between the two
/// runs at that node.
pub fn integrate_mode(ms: &ModeSystem, cfg: &EnergyRunConfig) -> Result<EnergyTrace> {
    integrate_mode_with_limit(ms, cfg, STEP_ERROR_LIMIT)
}

/// [`integrate_mode`] with a caller-chosen relative error limit; an infinite
/// limit disables the check (used for convergence studies on coarse grids).
pub fn integrate_mode_with_limit(ms: &ModeSystem, cfg: &EnergyRunConfig, rel_limit: f64) -> Result<EnergyTrace> {
    cfg.validate()?;
    let map = TimeMap { spacing: cfg.spacing };
    let n = cfg.steps;
    let (t0, t1) = match cfg.direction {
        Direction::Forward => (cfg.t_start, cfg.t_end),
        Direction::BackwardAdjoint => (cfg.t_end, cfg.t_start),
    };
    let (s0, s1) = (map.s(t0), map.s(t1));
    let h = (s1 - s0) / n as f64;
    let node_s = |k: usize| if k == n { s1 } else { s0 + h * k as f64 };
    let x = ms.bracket_xi();

    // the end nodes take the configured times exactly
    let time = |s: f64| {
        if s == s0 {
            t0
        } else if s == s1 {
            t1
        } else {
            map.t(s)
        }
    };
    let slope = |s: f64| {
        let t = time(s);
        let c = ms.coefficients(t);
        let j = map.jacobian(t);
        (
            Slope {
                m: c.generator * j,
                f: c.forcing * j,
            },
            c,
        )
    };

    let start = St {
        re: Vector3::from_fn(|i, _| cfg.initial_state[i][0]),
        im: Vector3::from_fn(|i, _| cfg.initial_state[i][1]),
    };
    let mut coarse = start;
    let mut fine = start;
    let (mut k0, c0) = slope(node_s(0));
    let mut records = Vec::with_capacity(n + 1);
    let mut push = |t: f64, st: &St, err: f64, c: &super::mode::ModeCoefficients| {
        let u = st.to_complex();
        let v = c.values;
        let eig = nalgebra::SymmetricEigen::new(s_matrix(v.a, v.b, v.c)).eigenvalues;
        let (lo, hi) = eig.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &e| (l.min(e), h.max(e)));
        records.push(TraceRecord {
            t,
            u,
            values: v,
            forcing: c.forcing,
            s_eig: [lo, hi],
            err_est: err,
            cancel_resid: cancellation_residual(&c.principal_product(x), &u),
            energy: 0.0,
            keiyaku_resid: f64::NAN,
        });
    };
    push(t0, &coarse, 0.0, &c0);
    let mut max_norm = start.norm();
    let mut max_err: f64 = 0.0;
    for k in 0..n {
        let sa = node_s(k);
        let sb = node_s(k + 1);
        let hk = sb - sa;
        let (kq1, _) = slope(sa + 0.25 * hk);
        let (kh, _) = slope(sa + 0.5 * hk);
        let (kq3, _) = slope(sa + 0.75 * hk);
        let (k1, c1) = slope(sb);
        coarse = rk4(&coarse, hk, &k0, &kh, &k1);
        fine = rk4(&fine, 0.5 * hk, &k0, &kq1, &kh);
        fine = rk4(&fine, 0.5 * hk, &kh, &kq3, &k1);
        let err = coarse.dist(&fine);
        if rel_limit.is_finite() && (!err.is_finite() || !coarse.norm().is_finite()) {
            return Err(Error::StepSizeTooCoarse {
                err_est: f64::INFINITY,
                limit: 0.0,
            });
        }
        max_err = max_err.max(err);
        max_norm = max_norm.max(coarse.norm());
        push(time(sb), &coarse, err, &c1);
        k0 = k1;
    }
    let limit = rel_limit * max_norm;
    if max_err > limit {
        return Err(Error::StepSizeTooCoarse {
            err_est: max_err,
            limit,
        });
    }
    let mut trace = EnergyTrace {
        xi: ms.xi().to_vec(),
        bracket_xi: x,
        direction: cfg.direction,
        spacing: cfg.spacing,
        step: h,
        records,
        err_est: max_err,
        max_norm,
    };
    let w = EnergyWeights::from(cfg);
    let energy = trace.weighted_energy(&w);
    let prof = KeiyakuProfile::new(&trace, w.lambda);
    let n_star = cfg.n_star_guess.unwrap_or_else(|| prof.n_star(w.gamma));
    // no qualifying node (zero data): any threshold works
    let n_star = if n_star.is_finite() { n_star } else { 0.0 };
    let resid = prof.residuals(&w, n_star);
    for ((r, e), k) in trace.records.iter_mut().zip(energy).zip(resid) {
        r.energy = e;
        r.keiyaku_resid = k;
    }
    Ok(trace)
}

/// Integrates every mode with the same configuration, in list order.
pub fn integrate_modes(modes: &[ModeSystem], cfg: &EnergyRunConfig) -> Result<Vec<EnergyTrace>> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        modes.par_iter().map(|m| integrate_mode(m, cfg)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        modes.iter().map(|m| integrate_mode(m, cfg)).collect()
    }
}
