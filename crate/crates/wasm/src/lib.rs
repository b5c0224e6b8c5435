//! Browser bindings. Every export takes plain numbers or strings and returns a
//! JSON document; failures come back as `{"error": "..."}`.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use hypsym::bezout::{bezout_matrix, exactly_hyperbolic, exactly_strictly_hyperbolic, symmetrizer_residual};
use hypsym::cubic::{classify_characteristics, condition_e, condition_h, CharacteristicClass};
use hypsym::energy::{integrate_mode, Direction, EnergyRunConfig, EnergyWeights, KeiyakuProfile, ModeSystem};
use hypsym::grid::{GridRange, SampleGrid, Spacing};
use hypsym::poly::{self, companion, MonicPolynomial};
use hypsym::symbol::{CubicSymbol, MatrixExpr, VectorExpr};

/// Points kept of an energy curve.
const CURVE_POINTS: usize = 200;

fn render(r: Result<Value, String>) -> String {
    r.unwrap_or_else(|e| json!({ "error": e })).to_string()
}

fn parse_coeffs(src: &str) -> Result<Vec<f64>, String> {
    src.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|e| format!("'{s}': {e}")))
        .collect()
}

fn symbol(a: &str, b: &str, c: &str, phi: &str) -> Result<CubicSymbol, String> {
    CubicSymbol::parse(a, b, c, phi).map_err(|e| e.to_string())
}

/// Bézout symmetrizer of `ζ^m + a₁ζ^{m−1} + … + a_m` from `"a₁, …, a_m"`.
pub fn symmetrize_value(coeffs: &str) -> Result<Value, String> {
    let p = MonicPolynomial::new(parse_coeffs(coeffs)?).map_err(|e| e.to_string())?;
    let bs = bezout_matrix(&p);
    let residual = symmetrizer_residual(&bs.h, &companion(&p).a_p).map_err(|e| e.to_string())?;
    let roots = poly::roots(&p, poly::DEFAULT_ROOT_TOL).map_err(|e| e.to_string())?;
    let h: Vec<Vec<f64>> = bs.h.row_iter().map(|r| r.iter().copied().collect()).collect();
    Ok(json!({
        "h": h,
        "det_h": bs.h.determinant(),
        "discriminant": bs.delta_sq,
        "hyperbolic": exactly_hyperbolic(&p),
        "strictly_hyperbolic": exactly_strictly_hyperbolic(&p),
        "residual": residual,
        "roots": roots.roots().iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
    }))
}

/// Margins of conditions (E) and (H) and the characteristic classes along
/// a log-spaced `t` grid at `ξ = 1`.
#[allow(clippy::too_many_arguments)]
pub fn margins_value(
    a: &str,
    b: &str,
    c: &str,
    phi: &str,
    t_min: f64,
    t_max: f64,
    count: usize,
    delta: f64,
) -> Result<Value, String> {
    let sym = symbol(a, b, c, phi)?;
    let t = if t_min > 0.0 {
        GridRange::log(t_min, t_max, count)
    } else {
        GridRange::linear(t_min, t_max, count)
    };
    let grid = SampleGrid::from_ranges(&t, &[], &[GridRange::single(1.0)]).map_err(|e| e.to_string())?;
    let e = condition_e(&grid, &sym, delta);
    let h = condition_h(&grid, &sym, delta);
    let cls = classify_characteristics(&grid, &sym, 1e-12);
    let count_of = |k: CharacteristicClass| cls.iter().filter(|c| c.class == k).count();
    Ok(json!({
        "condition_e": { "holds": e.holds, "margin": e.margin, "worst_t": e.worst_point.map(|p| p.t) },
        "condition_h": { "holds": h.holds, "margin": h.margin, "worst_t": h.worst_point.map(|p| p.t) },
        "classes": {
            "simple": count_of(CharacteristicClass::Simple),
            "double": count_of(CharacteristicClass::Double),
            "triple": count_of(CharacteristicClass::Triple),
            "non_hyperbolic": count_of(CharacteristicClass::NonHyperbolic),
        },
    }))
}

/// Weighted energy of one forward mode with `U(ε) = (1, 1, 1)`, thinned to
/// about [`CURVE_POINTS`] nodes, and the measured threshold.
#[allow(clippy::too_many_arguments)]
pub fn energy_value(
    a: &str,
    b: &str,
    c: &str,
    xi: f64,
    n: f64,
    gamma: f64,
    lambda: f64,
    steps: usize,
) -> Result<Value, String> {
    let sym = symbol(a, b, c, "0")?;
    let (t0, t1) = (1e-3, 1.0);
    let ms = ModeSystem::new(vec![xi], sym, MatrixExpr::zeros(), VectorExpr::zeros(), t0, t1)
        .map_err(|e| e.to_string())?;
    let cfg = EnergyRunConfig {
        n,
        gamma,
        lambda,
        eps1: 0.1,
        t_start: t0,
        t_end: t1,
        steps,
        spacing: Spacing::Log,
        direction: Direction::Forward,
        initial_state: [[1.0, 0.0], [1.0, 0.0], [1.0, 0.0]],
        n_star_guess: None,
    };
    let tr = integrate_mode(&ms, &cfg).map_err(|e| e.to_string())?;
    let energy = tr.weighted_energy(&EnergyWeights::from(&cfg));
    let n_star = KeiyakuProfile::new(&tr, lambda).n_star(gamma);
    let stride = (tr.len() / CURVE_POINTS).max(1);
    let mut keep: Vec<usize> = (0..tr.len()).step_by(stride).chain([tr.len() - 1]).collect();
    keep.dedup();
    Ok(json!({
        "t": keep.iter().map(|&k| tr.records[k].t).collect::<Vec<_>>(),
        "energy": keep.iter().map(|&k| energy[k]).collect::<Vec<_>>(),
        "n_star": n_star,
        "decays": n > n_star,
        "err_est": tr.err_est,
    }))
}

#[wasm_bindgen]
pub fn symmetrize(coeffs: &str) -> String {
    render(symmetrize_value(coeffs))
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn margins(a: &str, b: &str, c: &str, phi: &str, t_min: f64, t_max: f64, count: usize, delta: f64) -> String {
    render(margins_value(a, b, c, phi, t_min, t_max, count, delta))
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn energy_curve(a: &str, b: &str, c: &str, xi: f64, n: f64, gamma: f64, lambda: f64, steps: usize) -> String {
    render(energy_value(a, b, c, xi, n, gamma, lambda, steps))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetrizer_of_x3_minus_x() {
        let v = symmetrize_value("0, -1, 0").unwrap();
        assert_eq!(v["det_h"], 4.0);
        assert_eq!(v["strictly_hyperbolic"], true);
        let bad: Value = serde_json::from_str(&symmetrize("0, x")).unwrap();
        assert!(bad["error"].as_str().unwrap().contains("'x'"));
    }

    #[test]
    fn degenerate_symbol_fails_e_only() {
        let v = margins_value("1", "t", "0", "0", 1e-6, 0.1, 50, 0.5).unwrap();
        assert_eq!(v["condition_e"]["holds"], false);
        assert_eq!(v["condition_h"]["holds"], true);
        assert_eq!(v["classes"]["simple"], 50);
    }

    #[test]
    fn energy_curve_decays_above_threshold() {
        let v = energy_value("0", "t", "0", 4.0, 8.0, 1.0, 1.0, 2048).unwrap();
        assert_eq!(v["decays"], true);
        let e: Vec<f64> = serde_json::from_value(v["energy"].clone()).unwrap();
        assert!(e.len() > 100 && e.last().unwrap() < e.first().unwrap());
        let err: Value = serde_json::from_str(&energy_curve("0", "t +", "0", 1.0, 1.0, 1.0, 1.0, 64)).unwrap();
        assert!(err["error"].is_string());
    }
}
