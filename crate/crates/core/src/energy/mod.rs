//! Per-frequency simulation of the reduced system with x-independent symbols,
//! where every quantized symbol acts by multiplication, and numerical checks
//! of the weighted energy inequalities.

pub mod quadratic;
pub mod export;
pub mod integrate;
pub mod mode;
pub mod scan;
pub mod trace;
pub mod verify;

pub use quadratic::{cancellation_check, positivity_margin, cancellation_check_with_b, cancellation_residual, s_tilde, EnergyWeights, KeiyakuProfile};
pub use export::{mode_file_name, write_trace_csv, CSV_HEADER};
pub use integrate::{integrate_mode, integrate_mode_with_limit, integrate_modes, STEP_ERROR_LIMIT};
pub use mode::{CVec3, Direction, EnergyRunConfig, ModeCoefficients, ModeSystem, MIN_STEPS};
pub use scan::{parameter_scan, scan_modes, ScanCell, ScanTable};
pub use trace::{EnergyTrace, TraceRecord};
pub use verify::{
    duality_drift, estimate_summary, measured_n_star, verify_estimate_backward, verify_estimate_forward, verify_keiyaku,
    DualityReport, EstimateSummary, KEIYAKU_SLACK,
};

/// Dyadic frequencies `1, 2, …, 2^(count−1)` along the first axis.
pub fn dyadic_xi(count: usize) -> Vec<Vec<f64>> {
    (0..count).map(|k| vec![(1u64 << k) as f64]).collect()
}
