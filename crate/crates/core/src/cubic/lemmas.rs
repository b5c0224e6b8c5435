//! Determinant floor and semidefiniteness checks for the cubic symmetrizer.

use nalgebra::Matrix3;

use super::matrices::{det_s, ds_matrix, j_b, s_matrix};
use super::report::{argmin, ConditionReport, GridPoint};
use crate::error::{Error, Result};
use crate::expr::Point;
use crate::grid::SampleGrid;
use crate::linalg::{bisect_max, psd3};
use crate::symbol::{CubicSymbol, CubicValues, MatrixExpr};

/// `ε̄` used in the determinant lemma when none is given.
pub const DEFAULT_EPS_BAR: f64 = 1.0 / 50.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaOptions {
    pub eps_bar: f64,
    pub bisect_lo: f64,
    pub bisect_hi: f64,
    pub bisect_iters: usize,
}

impl Default for LemmaOptions {
    fn default() -> Self {
        Self {
            eps_bar: DEFAULT_EPS_BAR,
            bisect_lo: 1e-12,
            bisect_hi: 1.0,
            bisect_iters: 60,
        }
    }
}

/// `b > 0`, `|ac| ≤ ε̄b²` and `|c| ≤ ε̄b^{3/2}`.
pub fn side_conditions(v: &CubicValues, eps_bar: f64) -> bool {
    v.b > 0.0 && (v.a * v.c).abs() <= eps_bar * v.b * v.b && v.c.abs() <= eps_bar * v.b.powf(1.5)
}

/// Lower bound for `det S / (b²(a²+b))` under the side conditions with `ε̄`,
/// from `|4a³c| ≤ 4ε̄a²b²`, `|18abc| ≤ 18ε̄b³` and `27c² ≤ 27ε̄²b³`.
pub fn setudo_floor(eps_bar: f64) -> f64 {
    (1.0 - 4.0 * eps_bar).min(4.0 - 18.0 * eps_bar - 27.0 * eps_bar * eps_bar) / 27.0
}

fn check_eps_bar(eps_bar: f64) -> Result<()> {
    if !(eps_bar > 0.0 && eps_bar <= DEFAULT_EPS_BAR) {
        return Err(Error::InvalidParameter(format!(
            "eps_bar must lie in (0, 1/50], got {eps_bar}"
        )));
    }
    Ok(())
}

struct Filtered {
    points: Vec<Point>,
    values: Vec<CubicValues>,
}

fn filter(grid: &SampleGrid, sym: &CubicSymbol, eps_bar: f64, t_max: Option<f64>, check: &'static str) -> Result<Filtered> {
    let vals = grid.map(|p| sym.eval(p));
    let mut out = Filtered {
        points: Vec::new(),
        values: Vec::new(),
    };
    for (p, v) in grid.points().zip(vals) {
        let t_ok = match t_max {
            Some(tm) => p.t > 0.0 && p.t <= tm,
            None => true,
        };
        if t_ok && side_conditions(&v, eps_bar) {
            out.points.push(p);
            out.values.push(v);
        }
    }
    if out.points.is_empty() {
        return Err(Error::EmptyFilteredSet { check });
    }
    Ok(out)
}

/// Largest `δ` with `det S ≥ δb²(a²+b)` over the grid points satisfying the
/// side conditions, compared against [`setudo_floor`].
pub fn check_lemma_setudo(grid: &SampleGrid, sym: &CubicSymbol, eps_bar: f64) -> Result<ConditionReport> {
    check_eps_bar(eps_bar)?;
    let f = filter(grid, sym, eps_bar, None, "det_s_floor")?;
    let ratios = f
        .values
        .iter()
        .map(|v| det_s(v.a, v.b, v.c) / (v.b * v.b * (v.a * v.a + v.b)));
    let (i, delta) = argmin(ratios).expect("nonempty");
    let floor = setudo_floor(eps_bar);
    Ok(
        ConditionReport::new("det_s_floor", delta - floor, Some(GridPoint::from(&f.points[i])), f.points.len())
            .with("delta", delta)
            .with("delta_floor", floor)
            .with("eps_bar", eps_bar),
    )
}

/// `min(min minor, min eigenvalue) + slack` of `base − ε·dir` over a family,
/// with the index of the worst member.
fn family_margin(family: &[(Matrix3<f64>, Matrix3<f64>)], eps: f64) -> (usize, f64) {
    argmin(family.iter().map(|(base, dir)| {
        let c = psd3(&(base - dir * eps));
        c.min_minor.min(c.min_eig) + c.slack
    }))
    .expect("nonempty family")
}

fn psd_report(
    name: &str,
    f: &Filtered,
    family: &[(Matrix3<f64>, Matrix3<f64>)],
    eps: f64,
    eps_key: &str,
    opts: &LemmaOptions,
) -> ConditionReport {
    let (i, margin) = family_margin(family, eps);
    let eps_max = bisect_max(opts.bisect_lo, opts.bisect_hi, opts.bisect_iters, |e| {
        family_margin(family, e).1 >= 0.0
    });
    let delta1 = f
        .points
        .iter()
        .zip(&f.values)
        .filter(|(p, _)| p.t > 0.0)
        .map(|(p, v)| v.b / p.t)
        .fold(f64::INFINITY, f64::min);
    ConditionReport::new(name, margin, Some(GridPoint::from(&f.points[i])), f.points.len())
        .with(eps_key, eps)
        .with(&format!("{eps_key}_max"), eps_max.unwrap_or(0.0))
        .with("delta1", delta1)
}

/// `3S − ε₁t·diag(1,1,b) ⪰ 0` at every grid point with `t > 0` that
/// satisfies the side conditions.
pub fn check_positivity_tj(grid: &SampleGrid, sym: &CubicSymbol, eps1: f64, opts: &LemmaOptions) -> Result<ConditionReport> {
    let f = filter(grid, sym, opts.eps_bar, Some(f64::INFINITY), "positivity_tJ")?;
    let family: Vec<_> = f
        .points
        .iter()
        .zip(&f.values)
        .map(|(p, v)| (s_matrix(v.a, v.b, v.c) * 3.0, j_b(v.b) * p.t))
        .collect();
    Ok(psd_report("positivity_tJ", &f, &family, eps1, "eps1", opts))
}

/// `3S − εt∂ₜS ⪰ 0`, also measuring `sup |∂ₜc| / b`.
pub fn check_positivity_dts(grid: &SampleGrid, sym: &CubicSymbol, eps: f64, opts: &LemmaOptions) -> Result<ConditionReport> {
    let f = filter(grid, sym, opts.eps_bar, Some(f64::INFINITY), "positivity_dtS")?;
    let dts: Vec<_> = f.points.iter().map(|p| sym.dt(p)).collect();
    let family: Vec<_> = f
        .points
        .iter()
        .zip(&f.values)
        .zip(&dts)
        .map(|((p, v), d)| {
            (
                s_matrix(v.a, v.b, v.c) * 3.0,
                ds_matrix(v.a, v.b, v.c, d.da, d.db, d.dc) * p.t,
            )
        })
        .collect();
    let dtc_over_b = f
        .values
        .iter()
        .zip(&dts)
        .map(|(v, d)| d.dc.abs() / v.b)
        .fold(0.0, f64::max);
    Ok(psd_report("positivity_dtS", &f, &family, eps, "eps", opts).with("dtc_over_b", dtc_over_b))
}

/// Largest `ε` on the bisection interval with `3S − εt²·ᵗB·S·B ⪰ 0` for
/// `t ∈ (0, T]`. Holds when such an `ε` exists.
pub fn check_positivity_b(
    grid: &SampleGrid,
    sym: &CubicSymbol,
    b: &MatrixExpr,
    t_max: f64,
    opts: &LemmaOptions,
) -> Result<ConditionReport> {
    let f = filter(grid, sym, opts.eps_bar, Some(t_max), "positivity_B")?;
    let family: Vec<_> = f
        .points
        .iter()
        .zip(&f.values)
        .map(|(p, v)| {
            let s = s_matrix(v.a, v.b, v.c);
            let bm = b.eval(p);
            (s * 3.0, bm.transpose() * s * bm * (p.t * p.t))
        })
        .collect();
    let eps = bisect_max(opts.bisect_lo, opts.bisect_hi, opts.bisect_iters, |e| {
        family_margin(&family, e).1 >= 0.0
    });
    let probe = eps.unwrap_or(opts.bisect_lo);
    let (i, margin) = family_margin(&family, probe);
    Ok(
        ConditionReport::new("positivity_B", margin, Some(GridPoint::from(&f.points[i])), f.points.len())
            .with("eps_T", eps.unwrap_or(0.0))
            .with("T", t_max),
    )
}
