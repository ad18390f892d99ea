use pesinlab_core::livshitz::{
    coboundary_residual, fit_holder, obstruction_sums, reconstruct_transfer, Observable, ObservableKind,
};
use pesinlab_core::sampling::uniform_point;
use pesinlab_core::shadowing::CensusOptions;
use pesinlab_core::{Error, MapSystem, Result};
use rayon::prelude::*;
use serde_json::Value;

use super::{parallel_census, Outcome};
use crate::config::Config;
use crate::output::{real, Table};

/// `|sum| ≤ SUM_TOL·period` counts as vanishing.
const SUM_TOL: f64 = 1e-9;

pub fn run(cfg: &Config, system: &MapSystem) -> Result<Outcome> {
    let phi = Observable::from_name(system, cfg.observable.as_deref().expect("validated"))?;
    let count = cfg.count.expect("validated");
    let radius_grid = cfg.radius_grid.clone().expect("validated");
    let max_period = cfg.max_period.unwrap_or(4);
    let opts = CensusOptions {
        tol: cfg.tol.unwrap_or(1e-10),
        max_iter: cfg.max_iter.unwrap_or(20),
        ..CensusOptions::default()
    };

    let x = uniform_point(system, cfg.seed, 0);
    let table = reconstruct_transfer(system, &phi, x, count)?;
    let seeds = system.grid_points(cfg.grid_n.unwrap_or(64));
    let censuses: Vec<_> = (1..=max_period)
        .map(|n| parallel_census(system, n, &seeds, &opts))
        .collect();
    let scan = obstruction_sums(system, &phi, &censuses, &opts)?;
    let residuals = radius_grid
        .par_iter()
        .map(|r| match coboundary_residual(system, &table, *r) {
            Ok(res) => Ok(Some(res)),
            Err(Error::NoPairs { .. }) => Ok(None),
            Err(e) => Err(e),
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

    let mut out = Outcome::default();
    let mut transfer = Table::new("transfer", &["n", "x1", "x2", "psi"]);
    for s in &table.samples {
        transfer.push(vec![
            s.n.to_string(),
            real(s.point[0]),
            real(s.point[1]),
            real(s.psi),
        ]);
    }
    let mut obstructions = Table::new("obstructions", &["period", "x", "y", "sum"]);
    for e in &scan.entries {
        obstructions.push(vec![
            e.point.period.to_string(),
            real(e.point.z[0]),
            real(e.point.z[1]),
            real(e.sum),
        ]);
    }
    let mut res_table = Table::new("residuals", &["radius", "residual", "pairs"]);
    let mut fit_samples = Vec::new();
    for (r, res) in radius_grid.iter().zip(&residuals) {
        match res {
            Some(res) => {
                res_table.push(vec![real(*r), real(res.residual), res.pairs.to_string()]);
                fit_samples.push((*r, res.residual));
            }
            None => res_table.push(vec![real(*r), String::new(), "0".into()]),
        }
    }

    out.result("observable", phi.name.clone());
    out.result("periodic_points", scan.entries.len());
    out.result("worst_normalized_sum", scan.worst_normalized());
    out.result(
        "first_obstruction_period",
        scan.first_obstruction(SUM_TOL).map(|e| e.point.period),
    );
    out.result(
        "residuals",
        residuals
            .iter()
            .map(|r| r.as_ref().map_or(Value::Null, |r| r.residual.into()))
            .collect::<Vec<_>>(),
    );
    if let Ok(fit) = fit_holder(&fit_samples) {
        out.result("c_hat", fit.c_hat);
        out.result("kappa_hat", fit.kappa_hat);
        out.result("holder_r2", fit.r2);
        out.result("holder_degenerate", fit.degenerate);
    }

    if let Some(complete) = scan.complete {
        out.check(
            "census_complete",
            complete,
            complete,
            "every period census matches its known count",
        );
    }
    if let ObservableKind::Coboundary(g) = phi.kind {
        let worst = scan.worst_normalized();
        out.check(
            "sums_vanish",
            worst <= SUM_TOL,
            worst,
            format!("|periodic sum| <= {SUM_TOL}·period"),
        );
        let lip = g.lipschitz();
        let mut worst_excess = f64::NEG_INFINITY;
        for (r, res) in radius_grid.iter().zip(&residuals) {
            if let Some(res) = res {
                worst_excess = worst_excess.max(res.residual - lip * r);
            }
        }
        let any = residuals.iter().any(Option::is_some);
        out.check(
            "residual_within_lipschitz",
            any && worst_excess <= 0.0,
            if any { worst_excess.into() } else { Value::Null },
            "near-return residual <= Lip(g)·radius at every radius with pairs",
        );
    }
    out.tables.push(transfer);
    out.tables.push(obstructions);
    out.tables.push(res_table);
    Ok(out)
}
