//! `energy run | scan | adjoint`.

use serde_json::json;

use hypsym::cubic::{ConditionReport, GridPoint};
use hypsym::energy::{
    cancellation_check, dyadic_xi, integrate_modes, mode_file_name, scan_modes, verify_estimate_backward,
    verify_estimate_forward, verify_keiyaku, Direction, EnergyRunConfig, EnergyTrace, EnergyWeights, ModeSystem,
};

use crate::config::{matrix_expr, vector_expr, EnergySection};
use crate::error::CliError;
use crate::report::Report;
use crate::Ctx;

/// Default bound on the principal-part cancellation residual.
const CANCELLATION_TOL: f64 = 1e-13;
const DEFAULT_MODES: usize = 8;

fn setup(ctx: &Ctx, direction: Direction) -> Result<(EnergySection, EnergyRunConfig, Vec<ModeSystem>), CliError> {
    let sym_sec = ctx
        .cfg
        .symbol
        .clone()
        .ok_or_else(|| CliError::Input("config needs a symbol section".into()))?;
    let sec = ctx
        .cfg
        .energy
        .clone()
        .ok_or_else(|| CliError::Input("config needs an energy section".into()))?;
    let sym = sym_sec.build()?;
    let consts = sym_sec.constants();
    let b = matrix_expr(&sec.lower_order, consts, "energy.lower_order")?;
    let f = vector_expr(&sec.forcing, consts, "energy.forcing")?;
    let mut cfg = sec.run.clone();
    cfg.direction = direction;
    cfg.validate()?;
    let xi = sec.xi.clone().unwrap_or_else(|| dyadic_xi(DEFAULT_MODES));
    if xi.is_empty() {
        return Err(CliError::Input("energy.xi must list at least one frequency".into()));
    }
    let modes = xi
        .into_iter()
        .map(|x| ModeSystem::new(x, sym.clone(), b.clone(), f.clone(), cfg.t_start, cfg.t_end))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((sec, cfg, modes))
}

fn new_report(ctx: &Ctx, kind: &str, cfg: &EnergyRunConfig, modes: usize) -> Report {
    let model = json!({
        "kind": kind,
        "name": ctx.cfg.name,
        "modes": modes,
        "direction": cfg.direction,
        "tol": ctx.tol,
    });
    Report::new(model, serde_json::to_value(&ctx.cfg).expect("config serializes"))
}

fn write_traces(ctx: &mut Ctx, traces: &[EnergyTrace]) -> Result<(), CliError> {
    if !ctx.cfg.writes_csv() {
        return Ok(());
    }
    for (i, tr) in traces.iter().enumerate() {
        let mut buf = Vec::new();
        hypsym::energy::write_trace_csv(tr, &mut buf)?;
        ctx.out.write(&mode_file_name(i), &buf)?;
    }
    Ok(())
}

pub fn run(ctx: &mut Ctx, adjoint: bool) -> Result<Report, CliError> {
    let direction = if adjoint { Direction::BackwardAdjoint } else { Direction::Forward };
    let (sec, cfg, modes) = setup(ctx, direction)?;
    let traces = integrate_modes(&modes, &cfg)?;
    let w = EnergyWeights::from(&cfg);
    let (n_list, gamma_list) = match &sec.scan {
        Some(s) => (s.n_list.clone(), s.gamma_list.clone()),
        None => (vec![cfg.n], vec![cfg.gamma]),
    };
    let keiyaku = verify_keiyaku(&traces, &w, cfg.n_star_guess, &n_list, &gamma_list);
    let estimate = if adjoint {
        verify_estimate_backward(&traces, &w)?
    } else {
        verify_estimate_forward(&traces, &w)?
    };
    let tol = ctx.tol.unwrap_or(CANCELLATION_TOL);
    let cancel = traces.iter().map(cancellation_check).fold(0.0, f64::max);
    let points = traces.iter().map(EnergyTrace::len).sum();
    let at = traces.iter().find_map(|tr| {
        tr.records.iter().find(|r| r.cancel_resid == cancel).map(|r| GridPoint {
            t: r.t,
            x: Vec::new(),
            xi: tr.xi.clone(),
        })
    });
    let cancellation = ConditionReport::new("cancellation", tol - cancel, at, points)
        .with("max_residual", cancel)
        .with("tol", tol);
    let err_est = traces.iter().map(|t| t.err_est).fold(0.0, f64::max);

    let reports = [keiyaku, estimate, cancellation];
    let kind = if adjoint { "energy_adjoint" } else { "energy_run" };
    let mut report = new_report(ctx, kind, &cfg, modes.len());
    let mut tightest = f64::INFINITY;
    for r in &reports {
        report.absorb(r, &mut tightest);
    }
    report.constants.insert("err_est".into(), err_est);
    report.details = json!({ "checks": reports });
    write_traces(ctx, &traces)?;
    Ok(report)
}

pub fn scan(ctx: &mut Ctx) -> Result<Report, CliError> {
    let (sec, cfg, modes) = setup(ctx, Direction::Forward)?;
    let lists = sec
        .scan
        .clone()
        .ok_or_else(|| CliError::Input("energy scan needs energy.scan".into()))?;
    if lists.n_list.is_empty() || lists.gamma_list.is_empty() || lists.lambda_list.is_empty() {
        return Err(CliError::Input("energy.scan lists must be nonempty".into()));
    }
    let (traces, table) = scan_modes(&modes, &cfg, &lists.n_list, &lists.gamma_list, &lists.lambda_list)?;
    let mut report = new_report(ctx, "energy_scan", &cfg, modes.len());
    let feasible: Vec<_> = table.feasible().collect();
    report.holds = !feasible.is_empty();
    let k = &mut report.constants;
    k.insert("cells".into(), table.cells.len() as f64);
    k.insert("feasible".into(), feasible.len() as f64);
    k.insert("monotone_violations".into(), table.monotone_violations as f64);
    k.insert("violation_fraction".into(), table.violation_fraction());
    // the cheapest feasible weight, else the cell closest to passing
    let best = feasible
        .iter()
        .copied()
        .min_by(|a, b| a.n.total_cmp(&b.n).then(a.gamma.total_cmp(&b.gamma)))
        .or_else(|| table.cells.iter().max_by(|a, b| (a.n - a.n_star).total_cmp(&(b.n - b.n_star))));
    if let Some(c) = best {
        k.insert("best.n".into(), c.n);
        k.insert("best.gamma".into(), c.gamma);
        k.insert("best.lambda".into(), c.lambda);
        k.insert("best.n_star".into(), c.n_star);
        report.worst_point = Some(json!({ "n": c.n, "gamma": c.gamma, "lambda": c.lambda }));
    }
    report.details = json!({ "cells": table.cells });
    write_traces(ctx, &traces)?;
    Ok(report)
}
