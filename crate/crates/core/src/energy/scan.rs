//! Feasibility scan over `(N, γ, λ)` on fixed traces.
//!
//! The state does not depend on the weights, so each mode is integrated once
//! and every cell reuses the traces.

use serde::Serialize;

use super::quadratic::{EnergyWeights, KeiyakuProfile};
use super::integrate::integrate_modes;
use super::mode::{EnergyRunConfig, ModeSystem};
use super::trace::EnergyTrace;
use super::verify::{estimate_summary, measured_n_star};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanCell {
    pub n: f64,
    pub gamma: f64,
    pub lambda: f64,
    pub n_star: f64,
    /// `N` exceeds the measured threshold.
    pub keiyaku: bool,
    /// The weighted estimate holds with the certified constants.
    pub estimate: bool,
    pub measured_ratio: f64,
    pub certified_ratio: f64,
}

impl ScanCell {
    pub fn passes(&self) -> bool {
        self.keiyaku && self.estimate
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanTable {
    /// Ordered by `λ`, then `γ`, then `N`, each as given.
    pub cells: Vec<ScanCell>,
    /// Failing cells that dominate a passing one in both `N` and `γ` at the
    /// same `λ`.
    pub monotone_violations: usize,
}

impl ScanTable {
    pub fn feasible(&self) -> impl Iterator<Item = &ScanCell> {
        self.cells.iter().filter(|c| c.passes())
    }

    pub fn violation_fraction(&self) -> f64 {
        if self.cells.is_empty() {
            0.0
        } else {
            self.monotone_violations as f64 / self.cells.len() as f64
        }
    }
}

/// Evaluates every `(N, γ, λ)` on the given traces, which must share one grid
/// and one direction.
pub fn parameter_scan(traces: &[EnergyTrace], n_list: &[f64], gamma_list: &[f64], lambda_list: &[f64]) -> ScanTable {
    let mut cells = Vec::new();
    if traces.is_empty() {
        return ScanTable {
            cells,
            monotone_violations: 0,
        };
    }
    for &lambda in lambda_list {
        let profiles: Vec<KeiyakuProfile> = traces.iter().map(|t| KeiyakuProfile::new(t, lambda)).collect();
        for &gamma in gamma_list {
            let n_star = measured_n_star(&profiles, gamma);
            for &n in n_list {
                let w = EnergyWeights { n, gamma, lambda };
                let s = estimate_summary(traces, &profiles, &w);
                cells.push(ScanCell {
                    n,
                    gamma,
                    lambda,
                    n_star,
                    keiyaku: n > n_star,
                    estimate: s.holds(),
                    measured_ratio: s.measured_ratio,
                    certified_ratio: s.certified_ratio,
                });
            }
        }
    }
    let monotone_violations = cells
        .iter()
        .filter(|c| {
            !c.passes()
                && cells
                    .iter()
                    .any(|p| p.passes() && p.lambda == c.lambda && p.n <= c.n && p.gamma <= c.gamma)
        })
        .count();
    ScanTable {
        cells,
        monotone_violations,
    }
}

/// Integrates all modes with `cfg` and scans.
pub fn scan_modes(
    modes: &[ModeSystem],
    cfg: &EnergyRunConfig,
    n_list: &[f64],
    gamma_list: &[f64],
    lambda_list: &[f64],
) -> Result<(Vec<EnergyTrace>, ScanTable)> {
    let traces = integrate_modes(modes, cfg)?;
    let table = parameter_scan(&traces, n_list, gamma_list, lambda_list);
    Ok((traces, table))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::{dyadic_xi, Direction};
    use crate::grid::Spacing;
    use crate::symbol::{CubicSymbol, MatrixExpr, VectorExpr};

    fn setup() -> (Vec<ModeSystem>, EnergyRunConfig) {
        let s = CubicSymbol::parse("0", "t", "0", "0").unwrap();
        let modes = dyadic_xi(3)
            .into_iter()
            .map(|xi| ModeSystem::new(xi, s.clone(), MatrixExpr::zeros(), VectorExpr::zeros(), 1e-3, 1.0).unwrap())
            .collect();
        let cfg = EnergyRunConfig {
            n: 4.0,
            gamma: 0.0,
            lambda: 1.0,
            eps1: 0.1,
            t_start: 1e-3,
            t_end: 1.0,
            steps: 1024,
            spacing: Spacing::Log,
            direction: Direction::Forward,
            initial_state: [[1.0, 0.0], [1.0, 0.0], [1.0, 0.0]],
            n_star_guess: None,
        };
        (modes, cfg)
    }

    #[test]
    fn empty_lists() {
        let (modes, cfg) = setup();
        let (_, t) = scan_modes(&modes, &cfg, &[], &[1.0], &[1.0]).unwrap();
        assert!(t.cells.is_empty());
        assert_eq!(t.violation_fraction(), 0.0);
        assert!(parameter_scan(&[], &[1.0], &[1.0], &[1.0]).cells.is_empty());
    }

    #[test]
    fn canonical_region_is_nonempty_and_monotone() {
        let (modes, cfg) = setup();
        let (_, t) = scan_modes(&modes, &cfg, &[4.0, 8.0, 16.0], &[0.0, 1.0, 10.0], &[1.0, 10.0]).unwrap();
        assert_eq!(t.cells.len(), 18);
        assert!(t.feasible().count() > 0);
        assert_eq!(t.monotone_violations, 0);
        let (_, t0) = scan_modes(&modes, &cfg, &[0.0], &[0.0], &[1.0]).unwrap();
        assert!(!t0.cells[0].passes());
    }
}
