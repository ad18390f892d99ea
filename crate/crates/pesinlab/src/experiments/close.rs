use pesinlab_core::sampling::uniform_point;
use pesinlab_core::shadowing::{closing_events, closing_rate_samples, fit_rates};
use pesinlab_core::{Domain, Error, MapSystem, Result};
use rayon::prelude::*;

use super::Outcome;
use crate::config::Config;
use crate::output::{real, Table};

const RATE_SEPARATION: usize = 15;

pub fn run(cfg: &Config, system: &MapSystem) -> Result<Outcome> {
    let beta = cfg.delta.expect("validated");
    let range = cfg.return_range();
    let samples = cfg.samples.unwrap_or(300);
    let tol = cfg.tol.unwrap_or(1e-10);
    let max_iter = cfg.max_iter.unwrap_or(20);
    let burn_in = cfg
        .burn_in
        .unwrap_or(if system.domain() == Domain::Plane { 1000 } else { 0 });

    let results: Vec<Result<_>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let x = system.iterate(uniform_point(system, cfg.seed, i as u64), burn_in)?;
            closing_events(system, i, x, beta, range, tol, max_iter)
        })
        .collect();
    let mut events = Vec::new();
    let mut failures = 0usize;
    let mut no_return = 0usize;
    for r in results {
        match r {
            Ok(Some(e)) if e.point.orbit_residual < tol => events.push(e),
            Ok(Some(_)) => failures += 1,
            Ok(None) => no_return += 1,
            Err(Error::InvalidArgument(m)) => return Err(Error::InvalidArgument(m)),
            Err(_) => failures += 1,
        }
    }

    let mut out = Outcome::default();
    let mut table = Table::new(
        "events",
        &[
            "seed",
            "x",
            "y",
            "n",
            "gap",
            "z_x",
            "z_y",
            "max_deviation",
            "log_mod_min",
            "log_mod_max",
        ],
    );
    for e in &events {
        let dev = e.point.closing_deviations.iter().cloned().fold(0.0, f64::max);
        table.push(vec![
            e.seed_index.to_string(),
            real(e.x[0]),
            real(e.x[1]),
            e.n.to_string(),
            real(e.gap),
            real(e.point.z[0]),
            real(e.point.z[1]),
            real(dev),
            real(e.point.floquet_log_moduli[0]),
            real(e.point.floquet_log_moduli[1]),
        ]);
    }
    let rate_samples = closing_rate_samples(&events, RATE_SEPARATION);
    let mut rates = Table::new("rates", &["separation", "normalized_deviation"]);
    for (s, d) in &rate_samples {
        rates.push(vec![s.to_string(), real(*d)]);
    }
    let hyperbolic = events.iter().filter(|e| e.point.is_hyperbolic()).count();
    out.result("events", events.len());
    out.result("failures", failures);
    out.result("no_return", no_return);
    out.result("hyperbolic", hyperbolic);
    out.check(
        "events_found",
        !events.is_empty(),
        events.len(),
        "at least one closing event",
    );
    out.check(
        "all_hyperbolic",
        hyperbolic == events.len(),
        hyperbolic,
        "every closed orbit is hyperbolic",
    );
    match fit_rates(&rate_samples) {
        Ok(fit) => {
            out.result("theta", fit.theta);
            out.result("eta", fit.eta);
            out.result("r2", fit.r2);
            out.check(
                "theta_positive",
                fit.theta > 0.0,
                fit.theta,
                "fitted decay rate > 0",
            );
            if let Some(theta) = cfg.theta {
                out.check(
                    "theta_at_least",
                    fit.theta >= theta,
                    fit.theta,
                    format!("fitted decay rate >= {theta}"),
                );
            }
        }
        Err(_) => out.check(
            "theta_positive",
            false,
            serde_json::Value::Null,
            "fitted decay rate > 0",
        ),
    }
    out.tables.push(table);
    out.tables.push(rates);
    Ok(out)
}
