//! Discriminant conditions (E)/(H) and the clause-by-clause check of the
//! structural assumptions on `(a, b, c)`.

use super::matrices::{normalized_delta, normalized_delta0};
use super::report::{argmin, ClauseReport, ConditionReport, GridPoint};
use crate::expr::Point;
use crate::grid::SampleGrid;
use crate::symbol::CubicSymbol;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    E,
    H,
}

fn discriminant_condition(grid: &SampleGrid, sym: &CubicSymbol, delta: f64, kind: Kind) -> ConditionReport {
    let rows = grid.map(|p| {
        let v = sym.eval(p);
        let d = normalized_delta(v.a, v.b, v.c);
        let d0 = normalized_delta0(v.a, v.b);
        // compared in the reduced normalization Δ₀/4 = a² + 3b
        let r = d0 / 4.0;
        let rhs = match kind {
            Kind::E => delta * p.t * r * r,
            Kind::H => delta * p.t * p.t * r,
        };
        (d - rhs, d, d0)
    });
    let (i, margin) = argmin(rows.iter().map(|r| r.0)).expect("grid is nonempty");
    let name = match kind {
        Kind::E => "condition_E",
        Kind::H => "condition_H",
    };
    ConditionReport::new(name, margin, Some(GridPoint::from(&grid.point(i))), grid.len())
        .with("delta", delta)
        .with("Delta_at_worst", rows[i].1)
        .with("Delta0_at_worst", rows[i].2)
}

/// `Δ ≥ δt(Δ₀/4)²` with `Δ = 27 det S` and `Δ₀ = 4(a²+3b)`.
pub fn condition_e(grid: &SampleGrid, sym: &CubicSymbol, delta: f64) -> ConditionReport {
    discriminant_condition(grid, sym, delta, Kind::E)
}

/// `Δ ≥ δt²(Δ₀/4)`.
pub fn condition_h(grid: &SampleGrid, sym: &CubicSymbol, delta: f64) -> ConditionReport {
    discriminant_condition(grid, sym, delta, Kind::H)
}

/// Thresholds for [`check_miki`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MikiOptions {
    pub eps_bar: f64,
    /// Smallest acceptable `δ₁` in `b ≥ δ₁t`.
    pub min_delta1: f64,
    /// Largest acceptable constant in the `O(·)` clauses.
    pub max_constant: f64,
    /// Quantities below this in absolute value count as zero, so `0/0` passes.
    pub zero_floor: f64,
    /// Relative finite-difference steps for derivative orders 1, 2 and 3.
    pub fd_steps: [f64; 3],
}

impl Default for MikiOptions {
    fn default() -> Self {
        Self {
            eps_bar: super::lemmas::DEFAULT_EPS_BAR,
            min_delta1: 1e-2,
            max_constant: 1e6,
            zero_floor: 1e-9,
            fd_steps: [1e-5, 1e-4, 1e-3],
        }
    }
}

const STENCILS: [(&[f64], &[f64]); 3] = [
    (&[-1.0, 1.0], &[-0.5, 0.5]),
    (&[-1.0, 0.0, 1.0], &[1.0, -2.0, 1.0]),
    (&[-2.0, -1.0, 1.0, 2.0], &[-0.5, 1.0, -1.0, 0.5]),
];

/// Coordinates `(x₁..xₙ, ξ₁..ξₙ)` flattened.
fn coords(p: &Point) -> Vec<f64> {
    p.x.iter().chain(&p.xi).copied().collect()
}

fn with_coords(p: &Point, z: &[f64]) -> Point {
    let n = p.x.len();
    Point::new(p.t, z[..n].to_vec(), z[n..].to_vec())
}

/// Mixed partial derivative `∂^counts f` by tensor-product central stencils.
fn mixed_partial(f: &dyn Fn(&Point) -> f64, p: &Point, counts: &[usize], step: f64) -> f64 {
    let base = coords(p);
    let active: Vec<(usize, usize)> = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(k, &c)| (k, c))
        .collect();
    let hs: Vec<f64> = active.iter().map(|&(k, _)| step * (1.0 + base[k].abs())).collect();
    let mut total = 0.0;
    let mut idx = vec![0usize; active.len()];
    loop {
        let mut z = base.clone();
        let mut w = 1.0;
        for (a, &(k, order)) in active.iter().enumerate() {
            let (off, wt) = STENCILS[order - 1];
            z[k] += off[idx[a]] * hs[a];
            w *= wt[idx[a]] / hs[a].powi(order as i32);
        }
        total += w * f(&with_coords(p, &z));
        // odometer over stencil positions
        let mut a = 0;
        loop {
            if a == active.len() {
                return total;
            }
            idx[a] += 1;
            if idx[a] < STENCILS[active[a].1 - 1].0.len() {
                break;
            }
            idx[a] = 0;
            a += 1;
        }
    }
}

/// All multisets of size `order` drawn from `dim` coordinates, as counts.
fn multi_indices(dim: usize, order: usize) -> Vec<Vec<usize>> {
    fn rec(dim: usize, left: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for k in start..dim {
            cur[k] += 1;
            rec(dim, left - 1, k, cur, out);
            cur[k] -= 1;
        }
    }
    let mut out = Vec::new();
    rec(dim, order, 0, &mut vec![0; dim], &mut out);
    out
}

/// `sup ⟨ξ⟩^{|α|}|∂_ξ^α ∂_x^β f|` over `|α+β| = order`.
fn scaled_derivative_sup(f: &dyn Fn(&Point) -> f64, p: &Point, order: usize, step: f64) -> f64 {
    let n = p.x.len();
    let dim = n + p.xi.len();
    if dim == 0 {
        return 0.0;
    }
    let bx = p.bracket_xi();
    multi_indices(dim, order)
        .iter()
        .map(|counts| {
            let xi_order: usize = counts[n..].iter().sum();
            (bx.powi(xi_order as i32) * mixed_partial(f, p, counts, step)).abs()
        })
        .fold(0.0, f64::max)
}

/// `|X| / b^s`, with `|X| ≤ floor` counting as zero and `b ≤ 0` as infinite.
fn ratio(x: f64, b: f64, s: f64, floor: f64) -> f64 {
    if x.abs() <= floor {
        0.0
    } else if b <= 0.0 {
        f64::INFINITY
    } else {
        x.abs() / b.powf(s)
    }
}

const CLAUSES: [&str; 8] = [
    "b >= delta1 t",
    "|ac| <= eps_bar b^2",
    "|c| <= eps_bar b^(3/2)",
    "c = O(b^2)",
    "first derivatives of c = O(b)",
    "second derivatives of c = O(sqrt b)",
    "third derivatives of ac = O(sqrt b)",
    "dt c = O(b)",
];

/// Checks every structural clause on `(a, b, c)`: `b ≥ δ₁t`, `|ac| ≤ ε̄b²`,
/// `|c| ≤ ε̄b^{3/2}`, `c = O(b²)`, `⟨ξ⟩^{|α|}∂_ξ^α∂_x^β c = O(b)` for order 1
/// and `O(√b)` for order 2, the same for `ac` at order 3 with `O(√b)`, and
/// `∂ₜc = O(b)`. Derivatives in `x, ξ` are central differences.
pub fn check_miki(grid: &SampleGrid, sym: &CubicSymbol, opts: &MikiOptions) -> ConditionReport {
    let fl = opts.zero_floor;
    let c_of = |p: &Point| sym.c.eval(p);
    let ac_of = |p: &Point| sym.a.eval(p) * sym.c.eval(p);
    let rows: Vec<[f64; 8]> = grid.map(|p| {
        let v = sym.eval(p);
        let b = v.b;
        let delta1 = if p.t > 0.0 {
            b / p.t
        } else if b >= -fl {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        };
        let d1 = scaled_derivative_sup(&c_of, p, 1, opts.fd_steps[0]);
        let d2 = scaled_derivative_sup(&c_of, p, 2, opts.fd_steps[1]);
        let d3 = scaled_derivative_sup(&ac_of, p, 3, opts.fd_steps[2]);
        let dtc = sym.dt(p).dc;
        [
            delta1,
            ratio(v.a * v.c, b, 2.0, fl),
            ratio(v.c, b, 1.5, fl),
            ratio(v.c, b, 2.0, fl),
            ratio(d1, b, 1.0, fl),
            ratio(d2, b, 0.5, fl),
            ratio(d3, b, 0.5, fl),
            ratio(dtc, b, 1.0, fl),
        ]
    });
    let mut clauses = Vec::with_capacity(CLAUSES.len());
    for (k, name) in CLAUSES.iter().enumerate() {
        let (threshold, lower_bound) = match k {
            0 => (opts.min_delta1, true),
            1 | 2 => (opts.eps_bar, false),
            _ => (opts.max_constant, false),
        };
        // worst point: smallest δ₁, largest ratio otherwise
        let (i, worst) = if lower_bound {
            argmin(rows.iter().map(|r| r[k])).expect("grid is nonempty")
        } else {
            let (i, neg) = argmin(rows.iter().map(|r| -r[k])).expect("grid is nonempty");
            (i, -neg)
        };
        let margin = if lower_bound {
            (worst - threshold) / threshold
        } else {
            (threshold - worst) / threshold
        };
        clauses.push(ClauseReport {
            name: name.to_string(),
            constant: worst,
            threshold,
            holds: margin >= 0.0,
            margin,
            worst_point: Some(GridPoint::from(&grid.point(i))),
        });
    }
    let (wi, margin) = argmin(clauses.iter().map(|c| c.margin)).expect("clauses");
    let mut report = ConditionReport::new("structural_assumptions", margin, clauses[wi].worst_point.clone(), grid.len())
        .with("delta1", clauses[0].constant)
        .with("K_ac", clauses[1].constant)
        .with("K_c", clauses[2].constant)
        .with("C_c_b2", clauses[3].constant)
        .with("C_d1", clauses[4].constant)
        .with("C_d2", clauses[5].constant)
        .with("C_d3_ac", clauses[6].constant)
        .with("C_dt_c", clauses[7].constant)
        .with("eps_bar", opts.eps_bar);
    report.clauses = clauses;
    report
}
