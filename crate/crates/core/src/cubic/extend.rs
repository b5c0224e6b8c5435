//! Extension of locally given symbols to global ones by cutoffs.

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::grid::SampleGrid;
use crate::symbol::CubicSymbol;

/// The cutoff pair `(χ, χ̃)` and an optional `χ₀(ξ)` for the extra `M′χ₀` term.
#[derive(Debug, Clone, PartialEq)]
pub struct Cutoffs {
    pub chi: Expr,
    pub chi_tilde: Expr,
    pub chi0: Option<Expr>,
}

const COVER_TOL: f64 = 1e-9;

/// `ã = χa`, `b̃ = χ²b + Mχ̃ (+ M′χ₀)`, `c̃ = χ³c`, `φ` unchanged. The cutoffs
/// are sampled on `check_grid`: both must lie in `[0, 1]` and together cover,
/// `χ + χ̃ ≥ 1`.
pub fn extend_symbols(
    sym: &CubicSymbol,
    cut: &Cutoffs,
    m: f64,
    m_prime: f64,
    check_grid: &SampleGrid,
) -> Result<CubicSymbol> {
    if !(m >= 0.0 && m_prime >= 0.0 && m.is_finite() && m_prime.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "extension constants must be finite and nonnegative (M = {m}, M' = {m_prime})"
        )));
    }
    let samples = check_grid.map(|p| (cut.chi.eval(p), cut.chi_tilde.eval(p)));
    for (i, &(chi, chi_t)) in samples.iter().enumerate() {
        let in_unit = |v: f64| (-COVER_TOL..=1.0 + COVER_TOL).contains(&v);
        if !in_unit(chi) || !in_unit(chi_t) {
            let p = check_grid.point(i);
            return Err(Error::InvalidParameter(format!(
                "cutoff values ({chi}, {chi_t}) leave [0, 1] at t={}, x={:?}, xi={:?}",
                p.t, p.x, p.xi
            )));
        }
    }
    let (worst, min_sum) = samples
        .iter()
        .map(|(a, b)| a + b)
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, s)| if s < acc.1 { (i, s) } else { acc });
    if min_sum < 1.0 - COVER_TOL {
        let p = check_grid.point(worst);
        return Err(Error::CutoffOverlapInvalid {
            min_sum,
            t: p.t,
            x: p.x,
            xi: p.xi,
        });
    }
    let chi = || cut.chi.clone();
    let k = Expr::constant;
    let mut b = chi().powi(2) * sym.b.clone() + k(m) * cut.chi_tilde.clone();
    if let Some(chi0) = &cut.chi0 {
        b = b + k(m_prime) * chi0.clone();
    }
    Ok(CubicSymbol::new(
        chi() * sym.a.clone(),
        b,
        chi().powi(3) * sym.c.clone(),
        sym.phi.clone(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubic::conditions::{check_miki, MikiOptions};
    use crate::expr::Point;
    use crate::grid::GridRange;

    fn cut(chi: &str, chi_t: &str) -> Cutoffs {
        Cutoffs {
            chi: Expr::parse(chi).unwrap(),
            chi_tilde: Expr::parse(chi_t).unwrap(),
            chi0: None,
        }
    }

    fn grid() -> SampleGrid {
        SampleGrid::from_ranges(
            &GridRange::linear(0.0, 1.0, 5),
            &[GridRange::linear(-3.0, 3.0, 7)],
            &[GridRange::single(2.0)],
        )
        .unwrap()
    }

    #[test]
    fn identity_and_constant_extensions() {
        let sym = CubicSymbol::parse("x1", "t + 1", "t^2", "0.5").unwrap();
        let p = Point::new(0.3, vec![1.5], vec![2.0]);
        let id = extend_symbols(&sym, &cut("1", "0"), 2.0, 0.0, &grid()).unwrap();
        assert_eq!(id.eval(&p), sym.eval(&p));
        let flat = extend_symbols(&sym, &cut("0", "1"), 2.0, 0.0, &grid()).unwrap();
        let v = flat.eval(&p);
        assert_eq!((v.a, v.b, v.c), (0.0, 2.0, 0.0));
    }

    #[test]
    fn coverage_enforced() {
        let sym = CubicSymbol::parse("0", "t", "0", "0").unwrap();
        let err = extend_symbols(&sym, &cut("0.5", "0.4"), 1.0, 0.0, &grid()).unwrap_err();
        assert!(matches!(err, Error::CutoffOverlapInvalid { min_sum, .. } if (min_sum - 0.9).abs() < 1e-15));
        assert!(extend_symbols(&sym, &cut("2", "0"), 1.0, 0.0, &grid()).is_err());
        assert!(extend_symbols(&sym, &cut("1", "0"), -1.0, 0.0, &grid()).is_err());
    }

    #[test]
    fn extension_of_example_family_passes_globally() {
        // smoothstep cutoffs with χ = 1 on |x| ≤ 1/2 and χ̃ = 1 outside |x| ≥ 1
        let s = "min(1, max(0, 2*abs(x1) - 1))";
        let step = format!("({s})^3*(10 - 15*({s}) + 6*({s})^2)");
        let c = Cutoffs {
            chi: Expr::parse(&format!("1 - {step}")).unwrap(),
            chi_tilde: Expr::parse(&step).unwrap(),
            chi0: None,
        };
        let sym = CubicSymbol::parse("-3*0.005*x1", "t", "-t^2", "-0.005*x1").unwrap();
        let g = SampleGrid::from_ranges(
            &GridRange::linear(0.0, 1e-4, 8),
            &[GridRange::linear(-2.0, 2.0, 17)],
            &[GridRange::log(1.0, 100.0, 4)],
        )
        .unwrap();
        let ext = extend_symbols(&sym, &c, 1e-4, 0.0, &g).unwrap();
        let r = check_miki(&g, &ext, &MikiOptions::default());
        assert!(r.holds, "{:#?}", r.clauses);
    }
}
