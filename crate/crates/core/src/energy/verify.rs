//! Numerical checks of the differential inequality, the forward and backward
//! weighted estimates and the duality of the two runs.

use serde::Serialize;

use super::quadratic::{EnergyWeights, KeiyakuProfile};
use super::mode::{Direction, ModeSystem};
use super::trace::EnergyTrace;
use crate::cubic::matrices::{ds_matrix, s_matrix};
use crate::cubic::report::{argmin, ConditionReport, GridPoint};
use crate::error::{Error, Result};
use crate::poly::Complex64;

/// Relative slack for the discrete inequality.
pub const KEIYAKU_SLACK: f64 = 1e-8;

fn point(trace: &EnergyTrace, k: usize) -> GridPoint {
    GridPoint {
        t: trace.records[k].t,
        x: Vec::new(),
        xi: trace.xi.clone(),
    }
}

/// Largest measured threshold over the modes.
pub fn measured_n_star(profiles: &[KeiyakuProfile], gamma: f64) -> f64 {
    profiles.iter().map(|p| p.n_star(gamma)).fold(f64::NEG_INFINITY, f64::max)
}

/// Checks the differential inequality for the energy at every interior node
/// of every trace with threshold `n_star_guess` (the measured one if absent),
/// and `N > N*`.
///
/// `n_min` is the smallest entry of `n_list` above the threshold used, and
/// `gamma_min` the smallest entry of `gamma_list` whose measured threshold is
/// below `w.n`; both are NaN when no entry qualifies.
pub fn verify_keiyaku(
    traces: &[EnergyTrace],
    w: &EnergyWeights,
    n_star_guess: Option<f64>,
    n_list: &[f64],
    gamma_list: &[f64],
) -> ConditionReport {
    let profiles: Vec<KeiyakuProfile> = traces.iter().map(|t| KeiyakuProfile::new(t, w.lambda)).collect();
    let measured = measured_n_star(&profiles, w.gamma);
    let used = n_star_guess.unwrap_or(measured);
    let mut cand = Vec::new();
    for (m, p) in profiles.iter().enumerate() {
        for k in 0..p.t.len() {
            if p.dq[k].is_nan() {
                continue;
            }
            let scale = p.scale(k, w, if used.is_finite() { used } else { 0.0 });
            if scale == 0.0 || !used.is_finite() {
                continue;
            }
            let r = p.residual(k, w, used);
            cand.push(((KEIYAKU_SLACK * scale - r) / scale, m, k));
        }
    }
    let worst = argmin(cand.iter().map(|c| c.0));
    let ineq_margin = worst.map_or(0.0, |(_, v)| v);
    let gap = w.n - used;
    // the binding node: worst inequality node, else where the threshold is attained
    let at_threshold = profiles
        .iter()
        .enumerate()
        .flat_map(|(m, p)| (0..p.t.len()).filter_map(move |k| p.nu(k, w.gamma).map(|v| (-v, m, k))))
        .collect::<Vec<_>>();
    let (margin, wp) = if ineq_margin <= gap || at_threshold.is_empty() {
        (ineq_margin.min(gap), worst.map(|(i, _)| point(&traces[cand[i].1], cand[i].2)))
    } else {
        let (i, _) = argmin(at_threshold.iter().map(|c| c.0)).expect("nonempty");
        (gap, Some(point(&traces[at_threshold[i].1], at_threshold[i].2)))
    };
    let ineq_holds = ineq_margin >= 0.0;
    let n_min = n_list
        .iter()
        .copied()
        .filter(|&n| ineq_holds && n > used)
        .fold(f64::NAN, f64::min);
    let gamma_min = gamma_list
        .iter()
        .copied()
        .filter(|&g| measured_n_star(&profiles, g) < w.n)
        .fold(f64::NAN, f64::min);
    let points = cand.len();
    ConditionReport::new("keiyaku", margin, wp, points)
        .with("N", w.n)
        .with("gamma", w.gamma)
        .with("lambda", w.lambda)
        .with("n_star_measured", measured)
        .with("n_star_used", used)
        .with("inequality_margin", ineq_margin)
        .with("n_min", n_min)
        .with("gamma_min", gamma_min)
}

/// Both sides of a weighted estimate, with `c = C = 1`, and the certified
/// ratio `C/c` from the differential inequality.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateSummary {
    /// `sup_t LHS/RHS`: the smallest `C/c` for which the estimate holds.
    pub measured_ratio: f64,
    pub certified_ratio: f64,
    pub worst_index: usize,
    pub n_star: f64,
    /// `min λ_min(S̃)/t²`.
    pub delta2: f64,
    pub c_lower: f64,
    pub c_upper: f64,
}

impl EstimateSummary {
    pub fn holds(&self) -> bool {
        self.measured_ratio == 0.0 || (self.certified_ratio.is_finite() && self.measured_ratio <= self.certified_ratio)
    }
}

/// Evaluates the estimate in the direction of the traces. Forward:
/// `t^{−N+2}e^{−γt}‖U(t)‖² + ∫_ε^t τ^{−N+1}e^{−γτ}‖U‖²` against
/// `ε^{−N−1}e^{−γε}‖U(ε)‖² + ∫_ε^t τ^{−N+1}e^{−γτ}‖F‖²`; backward the same
/// with `t^{N}e^{γt}` and integrals from `t` to `T₀`. Norms are summed over
/// the modes, integrals use the trapezoid rule on the trace nodes.
pub fn estimate_summary(traces: &[EnergyTrace], profiles: &[KeiyakuProfile], w: &EnergyWeights) -> EstimateSummary {
    let n_star = measured_n_star(profiles, w.gamma);
    let n_nodes = traces.first().map_or(0, EnergyTrace::len);
    let mut lhs = vec![0.0; n_nodes];
    let mut rhs = vec![0.0; n_nodes];
    let mut delta2 = f64::INFINITY;
    let mut c_upper: f64 = 0.0;
    for tr in traces {
        let sg = tr.sign();
        let t0 = tr.records[0].t;
        // weights relative to the first node to stay in range
        let wt = |t: f64| (-sg * (w.n * (t / t0).ln() + w.gamma * (t - t0))).exp();
        let first = &tr.records[0];
        let base = first.norm_sq() / t0;
        let (mut iu, mut ifo) = (0.0, 0.0);
        let mut prev: Option<(f64, f64, f64)> = None;
        for (k, r) in tr.records.iter().enumerate() {
            let wk = wt(r.t);
            let gu = r.t * wk * r.norm_sq();
            let gf = r.t * wk * r.forcing.norm_squared();
            if let Some((tp, pu, pf)) = prev {
                let dt = (r.t - tp).abs();
                iu += 0.5 * dt * (pu + gu);
                ifo += 0.5 * dt * (pf + gf);
            }
            prev = Some((r.t, gu, gf));
            lhs[k] += r.t * r.t * wk * r.norm_sq() + iu;
            rhs[k] += base + ifo;
        }
        for (e, (r, nrm)) in tr.s_tilde_min_eig(w.lambda).zip(tr.records.iter().zip(tr.s_tilde_norm(w.lambda))) {
            delta2 = delta2.min(e / (r.t * r.t));
            c_upper = c_upper.max(nrm);
        }
        let n0 = tr.s_tilde_norm(w.lambda).next().unwrap_or(0.0);
        c_upper = c_upper.max(t0 * n0);
    }
    let ratios = lhs.iter().zip(&rhs).map(|(&l, &r)| match (l, r) {
        (0.0, _) => 0.0,
        (_, 0.0) => f64::INFINITY,
        (l, r) => l / r,
    });
    let (worst_index, measured_ratio) = ratios
        .enumerate()
        .fold((0, 0.0), |(bi, bv), (i, v)| if v > bv { (i, v) } else { (bi, bv) });
    let c_lower = if w.n > n_star { delta2 * (w.n - n_star).min(1.0) } else { 0.0 };
    let certified_ratio = if c_lower > 0.0 { c_upper / c_lower } else { f64::INFINITY };
    EstimateSummary {
        measured_ratio,
        certified_ratio,
        worst_index,
        n_star,
        delta2,
        c_lower,
        c_upper,
    }
}

fn estimate_report(name: &str, traces: &[EnergyTrace], w: &EnergyWeights) -> ConditionReport {
    let profiles: Vec<KeiyakuProfile> = traces.iter().map(|t| KeiyakuProfile::new(t, w.lambda)).collect();
    let s = estimate_summary(traces, &profiles, w);
    let margin = if s.measured_ratio == 0.0 {
        0.0
    } else if s.certified_ratio.is_finite() {
        1.0 - s.measured_ratio / s.certified_ratio
    } else if w.n > s.n_star {
        -1.0
    } else {
        w.n - s.n_star
    };
    let wp = traces.first().map(|t| point(t, s.worst_index));
    ConditionReport::new(name, margin, wp, traces.iter().map(EnergyTrace::len).sum())
        .with("N", w.n)
        .with("gamma", w.gamma)
        .with("lambda", w.lambda)
        .with("n_star_measured", s.n_star)
        .with("measured_ratio", s.measured_ratio)
        .with("certified_ratio", s.certified_ratio)
        .with("c", s.c_lower)
        .with("C", s.c_upper)
        .with("delta2", s.delta2)
}

fn check_direction(traces: &[EnergyTrace], want: Direction) -> Result<()> {
    if traces.is_empty() {
        return Err(Error::InvalidParameter("no traces".into()));
    }
    let n = traces[0].len();
    for t in traces {
        if t.direction != want {
            return Err(Error::InvalidParameter(format!("expected {want:?} traces")));
        }
        if t.len() != n || t.step != traces[0].step {
            return Err(Error::InvalidParameter("traces must share one time grid".into()));
        }
    }
    Ok(())
}

/// Forward weighted estimate; see [`estimate_summary`].
pub fn verify_estimate_forward(traces: &[EnergyTrace], w: &EnergyWeights) -> Result<ConditionReport> {
    check_direction(traces, Direction::Forward)?;
    Ok(estimate_report("estimate_forward", traces, w))
}

/// Backward weighted estimate for adjoint runs; see [`estimate_summary`].
pub fn verify_estimate_backward(traces: &[EnergyTrace], w: &EnergyWeights) -> Result<ConditionReport> {
    check_direction(traces, Direction::BackwardAdjoint)?;
    Ok(estimate_report("estimate_backward", traces, w))
}

/// `P(t) = ⟨S(t)U(t), V(t)⟩` satisfies `P(T₀) − P(ε) = ∫⟨∂ₜS U, V⟩dt` when
/// `B`, `B̃`, `F` and `G` vanish.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualityReport {
    pub pairing_start: [f64; 2],
    pub pairing_end: [f64; 2],
    pub integral: [f64; 2],
    /// `|P(T₀) − P(ε) − ∫| / max(|P(ε)|, |P(T₀)|, ∫|⟨∂ₜS U,V⟩|)`.
    pub drift: f64,
}

/// Pairs a forward and an adjoint trace of the same mode on the same grid.
/// The integral uses Simpson's rule in the integration variable, so the step
/// count must be even.
pub fn duality_drift(fwd: &EnergyTrace, bwd: &EnergyTrace, ms: &ModeSystem) -> Result<DualityReport> {
    if fwd.direction != Direction::Forward || bwd.direction != Direction::BackwardAdjoint {
        return Err(Error::InvalidParameter("need a forward and an adjoint trace".into()));
    }
    let n = fwd.len();
    if n != bwd.len() || fwd.spacing != bwd.spacing || n < 3 || (n - 1) % 2 != 0 {
        return Err(Error::InvalidParameter("traces must share a grid with an even step count".into()));
    }
    let map = super::integrate::TimeMap { spacing: fwd.spacing };
    let pair = |m: &nalgebra::Matrix3<f64>, k: usize| -> Complex64 {
        let u = &fwd.records[k].u;
        let v = &bwd.records[n - 1 - k].u;
        let mu = m.map(|x| Complex64::new(x, 0.0)) * u;
        v.dotc(&mu)
    };
    let mut integrand = Vec::with_capacity(n);
    let mut p = [Complex64::new(0.0, 0.0); 2];
    for k in 0..n {
        let r = &fwd.records[k];
        let tb = bwd.records[n - 1 - k].t;
        if (tb - r.t).abs() > 1e-12 * r.t.abs().max(1.0) {
            return Err(Error::InvalidParameter("forward and adjoint nodes differ".into()));
        }
        let v = r.values;
        let d = ms.sym.dt(&ms.point(r.t));
        let ds = ds_matrix(v.a, v.b, v.c, d.da, d.db, d.dc);
        integrand.push(pair(&ds, k) * map.jacobian(r.t));
        if k == 0 || k == n - 1 {
            p[(k != 0) as usize] = pair(&s_matrix(v.a, v.b, v.c), k);
        }
    }
    let h = fwd.step;
    let mut integral = integrand[0] + integrand[n - 1];
    let mut abs_int = integrand[0].norm() + integrand[n - 1].norm();
    for (k, g) in integrand.iter().enumerate().take(n - 1).skip(1) {
        let c = if k % 2 == 1 { 4.0 } else { 2.0 };
        integral += g * c;
        abs_int += g.norm() * c;
    }
    integral *= h / 3.0;
    abs_int *= h.abs() / 3.0;
    let scale = p[0].norm().max(p[1].norm()).max(abs_int);
    let diff = (p[1] - p[0] - integral).norm();
    Ok(DualityReport {
        pairing_start: [p[0].re, p[0].im],
        pairing_end: [p[1].re, p[1].im],
        integral: [integral.re, integral.im],
        drift: if scale > 0.0 { diff / scale } else { 0.0 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::{integrate_mode, EnergyRunConfig};
    use crate::grid::Spacing;
    use crate::symbol::{CubicSymbol, MatrixExpr, VectorExpr};

    fn canonical(xi: f64) -> ModeSystem {
        let s = CubicSymbol::parse("0", "t", "0", "0").unwrap();
        ModeSystem::new(vec![xi], s, MatrixExpr::zeros(), VectorExpr::zeros(), 1e-3, 1.0).unwrap()
    }

    fn cfg(direction: Direction, u: [[f64; 2]; 3]) -> EnergyRunConfig {
        EnergyRunConfig {
            n: 4.0,
            gamma: 1.0,
            lambda: 1.0,
            eps1: 0.1,
            t_start: 1e-3,
            t_end: 1.0,
            steps: 2048,
            spacing: Spacing::Log,
            direction,
            initial_state: u,
            n_star_guess: None,
        }
    }

    const ONES: [[f64; 2]; 3] = [[1.0, 0.0], [1.0, 0.0], [1.0, 0.0]];
    const E3: [[f64; 2]; 3] = [[0.0, 0.0], [0.0, 0.0], [1.0, 0.0]];

    #[test]
    fn zero_data_holds() {
        let c = cfg(Direction::Forward, [[0.0; 2]; 3]);
        let tr = vec![integrate_mode(&canonical(2.0), &c).unwrap()];
        let w = EnergyWeights::from(&c);
        assert!(verify_keiyaku(&tr, &w, None, &[1.0], &[0.0]).holds);
        let f = verify_estimate_forward(&tr, &w).unwrap();
        assert!(f.holds);
        assert_eq!(f.constants["measured_ratio"], 0.0);
    }

    #[test]
    fn threshold_separates_weights() {
        let c = cfg(Direction::Forward, ONES);
        let tr: Vec<_> = [1.0, 4.0].iter().map(|&x| integrate_mode(&canonical(x), &c).unwrap()).collect();
        let w = EnergyWeights { gamma: 0.0, ..EnergyWeights::from(&c) };
        let rep = verify_keiyaku(&tr, &w, None, &[1.0, 2.0, 4.0, 8.0], &[0.0, 1.0, 10.0]);
        let n_star = rep.constants["n_star_measured"];
        assert!(n_star > 0.0 && n_star < 4.0, "{n_star}");
        assert!(rep.holds);
        assert!(rep.constants["n_min"] > n_star);
        // a guess below the measured threshold breaks the inequality
        let low = verify_keiyaku(&tr, &w, Some(n_star - 0.5), &[], &[]);
        assert!(!low.holds && low.margin < 0.0);
        assert!(low.worst_point.is_some());
        // N below the threshold fails even with the measured N*
        let w0 = EnergyWeights { n: 0.0, ..w };
        assert!(!verify_keiyaku(&tr, &w0, None, &[], &[]).holds);
        assert!(!verify_estimate_forward(&tr, &w0).unwrap().holds);
        let f = verify_estimate_forward(&tr, &w).unwrap();
        assert!(f.holds, "{f:?}");
        assert!(f.constants["measured_ratio"] <= f.constants["certified_ratio"]);
    }

    #[test]
    fn backward_estimate_and_direction_checks() {
        let c = cfg(Direction::BackwardAdjoint, E3);
        let tr = vec![integrate_mode(&canonical(2.0), &c).unwrap()];
        let w = EnergyWeights::from(&c);
        assert!(verify_estimate_forward(&tr, &w).is_err());
        let b = verify_estimate_backward(&tr, &w).unwrap();
        assert!(b.holds, "{b:?}");
        assert!(verify_estimate_backward(&[], &w).is_err());
    }

    #[test]
    fn duality_of_forward_and_adjoint() {
        let ms = canonical(4.0);
        let fwd = integrate_mode(&ms, &cfg(Direction::Forward, ONES)).unwrap();
        let bwd = integrate_mode(&ms, &cfg(Direction::BackwardAdjoint, E3)).unwrap();
        let d = duality_drift(&fwd, &bwd, &ms).unwrap();
        assert!(d.drift < 1e-6, "{d:?}");
        assert!(duality_drift(&bwd, &fwd, &ms).is_err());
    }
}
