use pesinlab_core::shadowing::CensusOptions;
use pesinlab_core::{MapSystem, Result};

use super::{cat_log_lambda, is_cat, parallel_census, Outcome};
use crate::config::Config;
use crate::output::{real, Table};

pub fn run(cfg: &Config, system: &MapSystem) -> Result<Outcome> {
    let max_period = cfg.max_period.expect("validated");
    let grid_n = cfg.grid_n.unwrap_or(64);
    let opts = CensusOptions {
        tol: cfg.tol.unwrap_or(1e-10),
        max_iter: cfg.max_iter.unwrap_or(20),
        ..CensusOptions::default()
    };
    let seeds = system.grid_points(grid_n);

    let mut out = Outcome::default();
    let mut points = Table::new(
        "points",
        &["period", "x", "y", "log_mod_min", "log_mod_max", "hyperbolic"],
    );
    let mut summary = Table::new("summary", &["period", "found", "expected", "failures"]);
    let mut total = 0usize;
    let mut distinct: Vec<[f64; 2]> = Vec::new();
    let mut all_complete = true;
    let mut known = true;
    let mut non_hyperbolic = 0usize;
    let mut worst_floquet: f64 = 0.0;
    for n in 1..=max_period {
        let census = parallel_census(system, n, &seeds, &opts);
        for p in &census.points {
            points.push(vec![
                n.to_string(),
                real(p.z[0]),
                real(p.z[1]),
                real(p.floquet_log_moduli[0]),
                real(p.floquet_log_moduli[1]),
                p.is_hyperbolic().to_string(),
            ]);
            if !p.is_hyperbolic() {
                non_hyperbolic += 1;
            }
            if !distinct
                .iter()
                .any(|q| system.distance(*q, p.z) < opts.dedup_radius)
            {
                distinct.push(p.z);
            }
            let l = n as f64 * cat_log_lambda();
            worst_floquet = worst_floquet
                .max((p.floquet_log_moduli[0] + l).abs())
                .max((p.floquet_log_moduli[1] - l).abs());
        }
        match census.is_complete() {
            Some(c) => all_complete &= c,
            None => known = false,
        }
        summary.push(vec![
            n.to_string(),
            census.count().to_string(),
            census.expected.map(|e| e.to_string()).unwrap_or_default(),
            census.failures.to_string(),
        ]);
        total += census.count();
    }
    out.result("count", total);
    out.result("distinct", distinct.len());
    out.result("max_period", max_period);
    out.check(
        "all_hyperbolic",
        non_hyperbolic == 0,
        non_hyperbolic,
        "no non-hyperbolic periodic point found",
    );
    if known {
        out.check(
            "complete",
            all_complete,
            all_complete,
            "found = |det(Aⁿ − I)| for every period",
        );
    }
    if is_cat(system) {
        out.check(
            "floquet_exponents",
            worst_floquet < 1e-8,
            worst_floquet,
            "log|μ| = ±n·log λ within 1e-8",
        );
    }
    out.tables.push(points);
    out.tables.push(summary);
    Ok(out)
}
