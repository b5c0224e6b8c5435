//! Experiment configuration documents. Every section rejects unknown keys.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use hypsym::cubic::{Cutoffs, LemmaOptions, MikiOptions, DEFAULT_EPS_BAR};
use hypsym::energy::EnergyRunConfig;
use hypsym::expr::Expr;
use hypsym::grid::{GridRange, SampleGrid};
use hypsym::symbol::{from_q_form, CubicSymbol, MatrixExpr, QForm, VectorExpr};

use crate::error::CliError;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Reported as the model name when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polynomial: Option<PolynomialSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol: Option<SymbolSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conditions: Option<ConditionsSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extension: Option<ExtensionSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy: Option<EnergySection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSection>,
}

/// Coefficients below the leading one, highest power first.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolynomialSection {
    #[serde(default)]
    pub coeffs: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    /// Number of random hyperbolic polynomials to test instead of `coeffs`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random: Option<usize>,
}

/// Either the reduced coefficients `a, b, c` or the `q₁, q₂, q₃` form, with `φ`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q1: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q2: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q3: Option<String>,
    #[serde(default = "zero_expr")]
    pub phi: String,
    /// Analytic `(∂ₜa, ∂ₜb, ∂ₜc)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<[String; 3]>,
    /// Named constants substituted into every expression.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub constants: BTreeMap<String, f64>,
}

fn zero_expr() -> String {
    "0".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub t: GridRange,
    #[serde(default)]
    pub x: Vec<GridRange>,
    #[serde(default)]
    pub xi: Vec<GridRange>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConditionsSection {
    /// Which checks to run; all of them by default.
    #[serde(default = "all_checks")]
    pub checks: Vec<CheckKind>,
    #[serde(default = "default_eps_bar")]
    pub eps_bar: f64,
    #[serde(default = "default_delta")]
    pub delta_e: f64,
    #[serde(default = "default_delta")]
    pub delta_h: f64,
    /// `ε₁` in `3S ⪰ ε₁t·diag(1,1,b)`.
    #[serde(default = "default_eps")]
    pub eps1: f64,
    /// `ε` in `3S ⪰ εt∂ₜS`.
    #[serde(default = "default_eps")]
    pub eps_dts: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower_order: Option<[[String; 3]; 3]>,
    #[serde(default = "default_t_max")]
    pub t_max: f64,
    #[serde(default = "default_min_delta1")]
    pub min_delta1: f64,
    #[serde(default = "default_max_constant")]
    pub max_constant: f64,
    #[serde(default = "default_zero_floor")]
    pub zero_floor: f64,
    #[serde(default = "default_fd_steps")]
    pub fd_steps: [f64; 3],
    /// `|Δ|, |Δ₀|` below this count as zero when classifying.
    #[serde(default = "default_classify_tol")]
    pub classify_tol: f64,
}

impl Default for ConditionsSection {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all fields have defaults")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Structural,
    ConditionE,
    ConditionH,
    DeterminantFloor,
    PositivityTj,
    PositivityDts,
    PositivityB,
}

fn all_checks() -> Vec<CheckKind> {
    use CheckKind::*;
    vec![Structural, ConditionE, ConditionH, DeterminantFloor, PositivityTj, PositivityDts, PositivityB]
}
fn default_eps_bar() -> f64 {
    DEFAULT_EPS_BAR
}
fn default_delta() -> f64 {
    1e-3
}
fn default_eps() -> f64 {
    1e-2
}
fn default_t_max() -> f64 {
    1.0
}
fn default_min_delta1() -> f64 {
    MikiOptions::default().min_delta1
}
fn default_max_constant() -> f64 {
    MikiOptions::default().max_constant
}
fn default_zero_floor() -> f64 {
    MikiOptions::default().zero_floor
}
fn default_fd_steps() -> [f64; 3] {
    MikiOptions::default().fd_steps
}
fn default_classify_tol() -> f64 {
    1e-12
}

impl ConditionsSection {
    pub fn miki(&self) -> MikiOptions {
        MikiOptions {
            eps_bar: self.eps_bar,
            min_delta1: self.min_delta1,
            max_constant: self.max_constant,
            zero_floor: self.zero_floor,
            fd_steps: self.fd_steps,
        }
    }

    pub fn lemma(&self) -> LemmaOptions {
        LemmaOptions {
            eps_bar: self.eps_bar,
            ..LemmaOptions::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionSection {
    pub chi: String,
    pub chi_tilde: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi0: Option<String>,
    pub m: f64,
    #[serde(default)]
    pub m_prime: f64,
    /// Grid for the global re-check; the main grid when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check_grid: Option<GridSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnergySection {
    pub run: EnergyRunConfig,
    /// Frequencies; `1, 2, …, 2⁷` along the first axis when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower_order: Option<[[String; 3]; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forcing: Option<[String; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSection {
    pub n_list: Vec<f64>,
    pub gamma_list: Vec<f64>,
    pub lambda_list: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    /// Write one trace file per mode.
    #[serde(default = "yes")]
    pub csv: bool,
    #[serde(default = "yes")]
    pub report: bool,
}

fn yes() -> bool {
    true
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("config: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn writes_csv(&self) -> bool {
        self.output.as_ref().is_none_or(|o| o.csv)
    }

    pub fn writes_report(&self) -> bool {
        self.output.as_ref().is_none_or(|o| o.report)
    }
}

fn parse(src: &str, consts: &BTreeMap<String, f64>, what: &str) -> Result<Expr, CliError> {
    Expr::parse_with(src, consts).map_err(|e| CliError::Input(format!("{what}: {e}")))
}

impl SymbolSection {
    pub fn build(&self) -> Result<CubicSymbol, CliError> {
        let k = &self.constants;
        let phi = parse(&self.phi, k, "symbol.phi")?;
        let reduced = [&self.a, &self.b, &self.c];
        let q = [&self.q1, &self.q2, &self.q3];
        let sym = match (reduced.iter().all(|v| v.is_some()), q.iter().all(|v| v.is_some())) {
            (true, false) if q.iter().all(|v| v.is_none()) => CubicSymbol::new(
                parse(self.a.as_deref().unwrap_or_default(), k, "symbol.a")?,
                parse(self.b.as_deref().unwrap_or_default(), k, "symbol.b")?,
                parse(self.c.as_deref().unwrap_or_default(), k, "symbol.c")?,
                phi,
            ),
            (false, true) if reduced.iter().all(|v| v.is_none()) => {
                let form = QForm {
                    q1: parse(self.q1.as_deref().unwrap_or_default(), k, "symbol.q1")?,
                    q2: parse(self.q2.as_deref().unwrap_or_default(), k, "symbol.q2")?,
                    q3: parse(self.q3.as_deref().unwrap_or_default(), k, "symbol.q3")?,
                };
                from_q_form(&form, &phi)
            }
            _ => {
                return Err(CliError::Input(
                    "symbol: give exactly one of {a, b, c} or {q1, q2, q3}".into(),
                ))
            }
        };
        Ok(match &self.dt {
            Some([da, db, dc]) => sym.with_dt(
                parse(da, k, "symbol.dt[0]")?,
                parse(db, k, "symbol.dt[1]")?,
                parse(dc, k, "symbol.dt[2]")?,
            ),
            None => sym,
        })
    }

    pub fn constants(&self) -> &BTreeMap<String, f64> {
        &self.constants
    }
}

impl GridSection {
    pub fn build(&self) -> Result<SampleGrid, CliError> {
        SampleGrid::from_ranges(&self.t, &self.x, &self.xi).map_err(|e| CliError::Input(format!("grid: {e}")))
    }
}

pub fn matrix_expr(
    rows: &Option<[[String; 3]; 3]>,
    consts: &BTreeMap<String, f64>,
    what: &str,
) -> Result<MatrixExpr, CliError> {
    let Some(rows) = rows else {
        return Ok(MatrixExpr::zeros());
    };
    let mut m = MatrixExpr::zeros();
    for (i, row) in rows.iter().enumerate() {
        for (j, src) in row.iter().enumerate() {
            m.0[i][j] = parse(src, consts, &format!("{what}[{i}][{j}]"))?;
        }
    }
    Ok(m)
}

pub fn vector_expr(v: &Option<[String; 3]>, consts: &BTreeMap<String, f64>, what: &str) -> Result<VectorExpr, CliError> {
    let Some(v) = v else {
        return Ok(VectorExpr::zeros());
    };
    let mut out = VectorExpr::zeros();
    for (i, src) in v.iter().enumerate() {
        out.0[i] = parse(src, consts, &format!("{what}[{i}]"))?;
    }
    Ok(out)
}

impl ExtensionSection {
    pub fn cutoffs(&self, consts: &BTreeMap<String, f64>) -> Result<Cutoffs, CliError> {
        Ok(Cutoffs {
            chi: parse(&self.chi, consts, "extension.chi")?,
            chi_tilde: parse(&self.chi_tilde, consts, "extension.chi_tilde")?,
            chi0: self
                .chi0
                .as_deref()
                .map(|s| parse(s, consts, "extension.chi0"))
                .transpose()?,
        })
    }
}
