use std::collections::BTreeMap;

use serde::Serialize;

use crate::expr::Point;

/// A sample point as reported.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridPoint {
    pub t: f64,
    pub x: Vec<f64>,
    pub xi: Vec<f64>,
}

impl From<&Point> for GridPoint {
    fn from(p: &Point) -> Self {
        Self {
            t: p.t,
            x: p.x.clone(),
            xi: p.xi.clone(),
        }
    }
}

/// One clause of a multi-part condition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClauseReport {
    pub name: String,
    /// Measured constant (for `δ₁`: the infimum, otherwise a supremum).
    pub constant: f64,
    pub threshold: f64,
    pub holds: bool,
    pub margin: f64,
    pub worst_point: Option<GridPoint>,
}

/// Outcome of a pointwise condition over a grid. `holds` is `margin >= 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub name: String,
    pub holds: bool,
    pub margin: f64,
    pub constants: BTreeMap<String, f64>,
    pub worst_point: Option<GridPoint>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub clauses: Vec<ClauseReport>,
    /// Number of grid points that entered the check.
    pub points_checked: usize,
}

impl ConditionReport {
    pub fn new(name: &str, margin: f64, worst_point: Option<GridPoint>, points_checked: usize) -> Self {
        Self {
            name: name.to_string(),
            holds: margin >= 0.0,
            margin,
            constants: BTreeMap::new(),
            worst_point,
            clauses: Vec::new(),
            points_checked,
        }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.constants.insert(key.to_string(), value);
        self
    }
}

/// Index of the smallest value; ties go to the first. NaN counts as smallest.
pub(crate) fn argmin(values: impl IntoIterator<Item = f64>) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in values.into_iter().enumerate() {
        match best {
            None => best = Some((i, v)),
            Some((_, b)) if b.is_nan() => {}
            Some((_, b)) if v.is_nan() || v < b => best = Some((i, v)),
            _ => {}
        }
    }
    best
}
