//! Classification of characteristic points by the normalized discriminants.

use serde::Serialize;

use super::matrices::{normalized_delta, normalized_delta0};
use super::report::GridPoint;
use crate::grid::SampleGrid;
use crate::symbol::CubicSymbol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CharacteristicClass {
    /// Three distinct real characteristic roots.
    Simple,
    Double,
    Triple,
    /// `Δ < 0`: a pair of complex roots.
    NonHyperbolic,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub point: GridPoint,
    pub class: CharacteristicClass,
    pub delta: f64,
    pub delta0: f64,
    /// Only meaningful at triple points: `∂ₜb > 0`.
    pub effective: bool,
}

/// Classifies each grid point by `Δ = 27 det S` and `Δ₀ = 4(a²+3b)`, with
/// `|·| ≤ tol` counting as zero.
pub fn classify_characteristics(grid: &SampleGrid, sym: &CubicSymbol, tol: f64) -> Vec<Classification> {
    grid.map(|p| {
        let v = sym.eval(p);
        let delta = normalized_delta(v.a, v.b, v.c);
        let delta0 = normalized_delta0(v.a, v.b);
        let class = if delta > tol {
            CharacteristicClass::Simple
        } else if delta < -tol {
            CharacteristicClass::NonHyperbolic
        } else if delta0 > tol {
            CharacteristicClass::Double
        } else if delta0 >= -tol {
            CharacteristicClass::Triple
        } else {
            CharacteristicClass::NonHyperbolic
        };
        let effective = class == CharacteristicClass::Triple && sym.dt(p).db > 0.0;
        Classification {
            point: GridPoint::from(p),
            class,
            delta,
            delta0,
            effective,
        }
    })
}
