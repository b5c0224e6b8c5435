//! `cubic conditions | classify | extend`.

use serde_json::json;

use hypsym::cubic::{
    check_lemma_setudo, check_miki, check_positivity_b, check_positivity_dts, check_positivity_tj,
    classify_characteristics, condition_e, condition_h, extend_symbols, CharacteristicClass, ConditionReport,
};
use hypsym::grid::SampleGrid;
use hypsym::symbol::CubicSymbol;

use crate::config::{matrix_expr, CheckKind, ConditionsSection, SymbolSection};
use crate::error::CliError;
use crate::report::{point_value, Report};
use crate::Ctx;

fn inputs(ctx: &Ctx) -> Result<(SymbolSection, CubicSymbol, SampleGrid), CliError> {
    let sec = ctx
        .cfg
        .symbol
        .clone()
        .ok_or_else(|| CliError::Input("config needs a symbol section".into()))?;
    let sym = sec.build()?;
    let grid = ctx
        .cfg
        .grid
        .as_ref()
        .ok_or_else(|| CliError::Input("config needs a grid section".into()))?
        .build()?;
    Ok((sec, sym, grid))
}

fn new_report(ctx: &Ctx, kind: &str) -> Report {
    let model = json!({
        "kind": kind,
        "name": ctx.cfg.name,
        "tol": ctx.tol,
    });
    Report::new(model, serde_json::to_value(&ctx.cfg).expect("config serializes"))
}

fn conditions_section(ctx: &Ctx) -> ConditionsSection {
    let mut c = ctx.cfg.conditions.clone().unwrap_or_default();
    if let Some(t) = ctx.tol {
        c.zero_floor = t;
    }
    c
}

fn fold(report: &mut Report, reports: &[ConditionReport]) {
    let mut tightest = f64::INFINITY;
    for r in reports {
        report.absorb(r, &mut tightest);
    }
    report.details = serde_json::to_value(reports).expect("reports serialize");
}

pub fn conditions(ctx: &mut Ctx) -> Result<Report, CliError> {
    let (sec, sym, grid) = inputs(ctx)?;
    let c = conditions_section(ctx);
    let lemma = c.lemma();
    let mut out = Vec::new();
    for kind in &c.checks {
        out.push(match kind {
            CheckKind::Structural => check_miki(&grid, &sym, &c.miki()),
            CheckKind::ConditionE => condition_e(&grid, &sym, c.delta_e),
            CheckKind::ConditionH => condition_h(&grid, &sym, c.delta_h),
            CheckKind::DeterminantFloor => check_lemma_setudo(&grid, &sym, c.eps_bar)?,
            CheckKind::PositivityTj => check_positivity_tj(&grid, &sym, c.eps1, &lemma)?,
            CheckKind::PositivityDts => check_positivity_dts(&grid, &sym, c.eps_dts, &lemma)?,
            CheckKind::PositivityB => {
                let b = matrix_expr(&c.lower_order, sec.constants(), "conditions.lower_order")?;
                check_positivity_b(&grid, &sym, &b, c.t_max, &lemma)?
            }
        });
    }
    let mut report = new_report(ctx, "cubic_conditions");
    fold(&mut report, &out);
    Ok(report)
}

pub fn classify(ctx: &mut Ctx) -> Result<Report, CliError> {
    let (_, sym, grid) = inputs(ctx)?;
    let tol = ctx
        .tol
        .unwrap_or_else(|| ctx.cfg.conditions.as_ref().map_or(1e-12, |c| c.classify_tol));
    let cls = classify_characteristics(&grid, &sym, tol);
    let count = |k: CharacteristicClass| cls.iter().filter(|c| c.class == k).count() as f64;
    let bad = |c: &&hypsym::cubic::Classification| {
        c.class == CharacteristicClass::NonHyperbolic || (c.class == CharacteristicClass::Triple && !c.effective)
    };
    let mut report = new_report(ctx, "cubic_classify");
    report.holds = !cls.iter().any(|c| bad(&c));
    let k = &mut report.constants;
    k.insert("simple".into(), count(CharacteristicClass::Simple));
    k.insert("double".into(), count(CharacteristicClass::Double));
    k.insert("triple".into(), count(CharacteristicClass::Triple));
    k.insert("non_hyperbolic".into(), count(CharacteristicClass::NonHyperbolic));
    k.insert(
        "triple_effective".into(),
        cls.iter().filter(|c| c.effective).count() as f64,
    );
    k.insert("min_delta".into(), cls.iter().map(|c| c.delta).fold(f64::INFINITY, f64::min));
    report.worst_point = cls
        .iter()
        .find(bad)
        .or_else(|| cls.iter().min_by(|a, b| a.delta.total_cmp(&b.delta)))
        .map(|c| point_value(&c.point));
    let special: Vec<_> = cls
        .iter()
        .filter(|c| c.class != CharacteristicClass::Simple)
        .collect();
    report.details = json!({ "points": special });
    Ok(report)
}

pub fn extend(ctx: &mut Ctx) -> Result<Report, CliError> {
    let (sec, sym, grid) = inputs(ctx)?;
    let ext = ctx
        .cfg
        .extension
        .clone()
        .ok_or_else(|| CliError::Input("config needs an extension section".into()))?;
    let check_grid = match &ext.check_grid {
        Some(g) => g.build()?,
        None => grid,
    };
    let cut = ext.cutoffs(sec.constants())?;
    let extended = extend_symbols(&sym, &cut, ext.m, ext.m_prime, &check_grid)?;
    let c = conditions_section(ctx);
    let r = check_miki(&check_grid, &extended, &c.miki());
    let mut report = new_report(ctx, "cubic_extend");
    fold(&mut report, &[r]);
    report.constants.insert("m".into(), ext.m);
    report.constants.insert("m_prime".into(), ext.m_prime);
    Ok(report)
}
