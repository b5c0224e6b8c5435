use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),

    #[error("root finder did not converge (residual {residual:e}, target {target:e})")]
    NonConvergence { residual: f64, target: f64 },

    #[error("polynomial is not hyperbolic (max |Im| = {max_imag:e})")]
    NotHyperbolic { max_imag: f64 },

    #[error("roots are not separated (min gap {min_gap:e} <= tol {tol:e})")]
    RootsNotSeparated { min_gap: f64, tol: f64 },

    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("no grid point satisfies the side conditions of {check}")]
    EmptyFilteredSet { check: &'static str },

    #[error("cutoff pair does not cover: min(chi + chi_tilde) = {min_sum} at t={t}, x={x:?}, xi={xi:?}")]
    CutoffOverlapInvalid {
        min_sum: f64,
        t: f64,
        x: Vec<f64>,
        xi: Vec<f64>,
    },

    #[error("step size too coarse: error estimate {err_est:e} exceeds {limit:e}")]
    StepSizeTooCoarse { err_est: f64, limit: f64 },

    #[error("symbol depends on x ({name} differs by {diff:e} at t={t})")]
    SymbolNotXIndependent { name: &'static str, diff: f64, t: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Expr(#[from] crate::expr::ExprError),
}
