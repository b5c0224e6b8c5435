//! `poly check | symmetrize | nuij`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use hypsym::bezout::{bezout_matrix, exactly_hyperbolic, exactly_strictly_hyperbolic, flipped_symmetrizer, symmetrizer_residual};
use hypsym::linalg::{max_abs, min_eigenvalue};
use hypsym::poly::{self, companion, nuij_smooth, MonicPolynomial, DEFAULT_HYPERBOLIC_TOL, DEFAULT_ROOT_TOL};

use crate::error::CliError;
use crate::report::Report;
use crate::Ctx;

const SYMMETRIZER_TOL: f64 = 1e-10;
const DEFAULT_NUIJ_EPS: f64 = 0.1;

/// Result for one polynomial.
struct Outcome {
    holds: bool,
    margin: f64,
    constants: BTreeMap<String, f64>,
    detail: Value,
}

#[derive(Clone, Copy)]
enum Op {
    Check,
    Symmetrize,
    Nuij,
}

impl Op {
    fn name(self) -> &'static str {
        match self {
            Op::Check => "poly_check",
            Op::Symmetrize => "poly_symmetrize",
            Op::Nuij => "poly_nuij",
        }
    }
}

pub fn check(ctx: &mut Ctx) -> Result<Report, CliError> {
    run(ctx, Op::Check)
}

pub fn symmetrize(ctx: &mut Ctx) -> Result<Report, CliError> {
    run(ctx, Op::Symmetrize)
}

pub fn nuij(ctx: &mut Ctx) -> Result<Report, CliError> {
    run(ctx, Op::Nuij)
}

fn bool_f(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

fn analyse(p: &MonicPolynomial, op: Op, tol: Option<f64>, eps: f64) -> Result<Outcome, CliError> {
    let mut k = BTreeMap::new();
    k.insert("degree".to_string(), p.degree() as f64);
    match op {
        Op::Check => {
            let tol = tol.unwrap_or(DEFAULT_HYPERBOLIC_TOL);
            let rs = poly::roots(p, DEFAULT_ROOT_TOL)?;
            let bound = tol * (1.0 + rs.max_abs_real());
            // exact for the coefficients as given; the tolerance admits inputs
            // whose rounding split a multiple root into a tiny complex pair
            let exact = exactly_hyperbolic(p);
            let hyperbolic = exact || rs.all_real(tol);
            let strict = exactly_strictly_hyperbolic(p);
            k.insert("exactly_hyperbolic".into(), bool_f(exact));
            k.insert("max_imag".into(), rs.max_imag());
            k.insert("min_gap".into(), rs.min_gap());
            k.insert("discriminant".into(), poly::discriminant(p));
            k.insert("root_residual".into(), rs.residual());
            k.insert("strictly_hyperbolic".into(), bool_f(strict));
            let roots: Vec<[f64; 2]> = rs.roots().iter().map(|z| [z.re, z.im]).collect();
            Ok(Outcome {
                holds: hyperbolic,
                margin: if exact { bound } else { bound - rs.max_imag() },
                constants: k,
                detail: json!({ "roots": roots }),
            })
        }
        Op::Symmetrize => {
            let tol = tol.unwrap_or(SYMMETRIZER_TOL);
            let bs = bezout_matrix(p);
            let cp = companion(p);
            let res = symmetrizer_residual(&bs.h, &cp.a_p)?;
            let res_t = symmetrizer_residual(&flipped_symmetrizer(&bs), &cp.a_tilde)?;
            let det_h = bs.h.determinant();
            // Hadamard's bound puts the floating-point determinant error in scale
            let hadamard: f64 = bs.h.row_iter().map(|r| r.norm()).product();
            let det_err = (det_h - bs.delta_sq).abs() / hadamard.max(f64::MIN_POSITIVE);
            let min_eig = min_eigenvalue(&bs.h);
            let scale = max_abs(&bs.h);
            k.insert("det_h".into(), det_h);
            k.insert("discriminant".into(), bs.delta_sq);
            k.insert("det_h_relative_error".into(), det_err);
            k.insert("residual".into(), res);
            k.insert("residual_flipped".into(), res_t);
            k.insert("min_eigenvalue".into(), min_eig);
            if let Ok(rs) = poly::roots(p, DEFAULT_ROOT_TOL) {
                if let Ok(d) = poly::difference_product(&rs) {
                    k.insert("delta_sq_from_roots".into(), d * d);
                }
            }
            let psd_margin = min_eig + 1e-9 * scale;
            let margin = (tol - res).min(tol - res_t).min(tol - det_err).min(psd_margin);
            let rows: Vec<Vec<f64>> = bs.h.row_iter().map(|r| r.iter().copied().collect()).collect();
            Ok(Outcome {
                holds: margin >= 0.0,
                margin,
                constants: k,
                detail: json!({ "h": rows }),
            })
        }
        Op::Nuij => {
            let min_gap = tol.unwrap_or(0.0);
            let q = nuij_smooth(p, eps);
            let rs = poly::roots(&q, DEFAULT_ROOT_TOL)?;
            let strict = exactly_strictly_hyperbolic(&q);
            let gap = if rs.all_real(DEFAULT_HYPERBOLIC_TOL) { rs.min_gap() } else { 0.0 };
            k.insert("eps".into(), eps);
            k.insert("min_gap".into(), gap);
            k.insert("max_imag".into(), rs.max_imag());
            k.insert("strictly_hyperbolic".into(), bool_f(strict));
            k.insert("discriminant".into(), poly::discriminant(&q));
            Ok(Outcome {
                holds: strict && gap > min_gap,
                margin: if strict { gap - min_gap } else { -1.0 },
                constants: k,
                detail: json!({ "smoothed": q.coeffs(), "roots": rs.real_parts() }),
            })
        }
    }
}

/// Roots on the 1/32 grid in [−10, 10], so the expansion is exact; about
/// one polynomial in four gets a repeated root.
fn random_roots(rng: &mut ChaCha8Rng) -> Vec<f64> {
    let m = rng.gen_range(2..=6);
    let mut r: Vec<f64> = (0..m).map(|_| f64::from(rng.gen_range(-320..=320)) / 32.0).collect();
    if rng.gen_bool(0.25) {
        r[1] = r[0];
    }
    r.sort_by(f64::total_cmp);
    r
}

fn run(ctx: &mut Ctx, op: Op) -> Result<Report, CliError> {
    let sec = ctx.cfg.polynomial.clone().unwrap_or_default();
    let eps = sec.eps.unwrap_or(DEFAULT_NUIJ_EPS);
    if !(eps.is_finite() && eps >= 0.0) {
        return Err(CliError::Input(format!("eps must be finite and nonnegative, got {eps}")));
    }
    let model = json!({
        "kind": op.name(),
        "name": ctx.cfg.name,
        "tol": ctx.tol,
        "seed": ctx.seed,
    });
    let config = serde_json::to_value(&ctx.cfg).expect("config serializes");
    let mut report = Report::new(model, config);
    match sec.random {
        None => {
            if sec.coeffs.is_empty() {
                return Err(CliError::Input("give --coeffs, --random or polynomial.coeffs".into()));
            }
            let p = MonicPolynomial::new(sec.coeffs.clone())?;
            let out = analyse(&p, op, ctx.tol, eps)?;
            report.holds = out.holds;
            report.constants = out.constants;
            report.constants.insert("margin".into(), out.margin);
            report.worst_point = Some(json!({ "coeffs": p.coeffs() }));
            report.details = out.detail;
        }
        Some(count) => {
            if count == 0 {
                return Err(CliError::Input("--random needs a positive count".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed.unwrap_or(0));
            let mut failures = 0usize;
            let mut worst: Option<(f64, Vec<f64>, Vec<f64>)> = None;
            for _ in 0..count {
                let roots = random_roots(&mut rng);
                let p = MonicPolynomial::from_roots(&roots)?;
                let out = analyse(&p, op, ctx.tol, eps)?;
                failures += usize::from(!out.holds);
                if worst.as_ref().is_none_or(|w| out.margin < w.0) {
                    worst = Some((out.margin, roots, p.coeffs().to_vec()));
                }
            }
            let (margin, roots, coeffs) = worst.expect("count is positive");
            report.holds = failures == 0;
            report.constants.insert("count".into(), count as f64);
            report.constants.insert("failures".into(), failures as f64);
            report.constants.insert("margin".into(), margin);
            report.worst_point = Some(json!({ "coeffs": coeffs, "roots": roots }));
        }
    }
    Ok(report)
}
