use pesinlab_core::cocycle::{finite_time_exponents, orbit_jacobians};
use pesinlab_core::sampling::uniform_point;
use pesinlab_core::{Error, MapSystem, Result};
use rayon::prelude::*;

use super::{cat_log_lambda, is_cat, Outcome};
use crate::config::Config;
use crate::output::{real, Table};

struct Sample {
    point: [f64; 2],
    exponents: [f64; 2],
    log_det: f64,
}

pub fn run(cfg: &Config, system: &MapSystem) -> Result<Outcome> {
    let n = cfg.n.expect("validated");
    let samples = cfg.samples.unwrap_or(1);
    let burn_in = cfg.burn_in.unwrap_or(0);
    let computed: Vec<Result<Option<Sample>>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let x0 = uniform_point(system, cfg.seed, i as u64);
            let x = match system.iterate(x0, burn_in) {
                Ok(x) => x,
                Err(Error::OrbitEscape { .. }) => return Ok(None),
                Err(e) => return Err(e),
            };
            let spec = match finite_time_exponents(system, x, n) {
                Ok(s) => s,
                Err(Error::OrbitEscape { .. }) => return Ok(None),
                Err(e) => return Err(e),
            };
            let log_det: f64 = orbit_jacobians(system, x, n)?
                .iter()
                .map(|j| j.det().abs().ln())
                .sum::<f64>()
                / n as f64;
            Ok(Some(Sample {
                point: x,
                exponents: [spec.bottom(), spec.top()],
                log_det,
            }))
        })
        .collect();
    let computed: Vec<Option<Sample>> = computed.into_iter().collect::<Result<_>>()?;

    let mut out = Outcome::default();
    let mut table = Table::new(
        "exponents",
        &["sample", "x", "y", "lambda_min", "lambda_max", "mean_log_det"],
    );
    let mut worst_sum: f64 = 0.0;
    let mut worst_cat: f64 = 0.0;
    let kept: Vec<&Sample> = computed.iter().flatten().collect();
    for (i, s) in computed.iter().enumerate() {
        let Some(s) = s else { continue };
        table.push(vec![
            i.to_string(),
            real(s.point[0]),
            real(s.point[1]),
            real(s.exponents[0]),
            real(s.exponents[1]),
            real(s.log_det),
        ]);
        worst_sum = worst_sum.max((s.exponents[0] + s.exponents[1] - s.log_det).abs());
        let l = cat_log_lambda();
        worst_cat = worst_cat
            .max((s.exponents[0] + l).abs())
            .max((s.exponents[1] - l).abs());
    }
    out.result("horizon", n);
    out.result("samples", samples);
    out.result("escaped", samples - kept.len());
    if let Some(first) = kept.first() {
        out.result("exponents", vec![first.exponents[0], first.exponents[1]]);
    }
    if !kept.is_empty() {
        let mean = |k: usize| kept.iter().map(|s| s.exponents[k]).sum::<f64>() / kept.len() as f64;
        out.result("mean_exponents", vec![mean(0), mean(1)]);
    }
    out.check(
        "samples_computed",
        !kept.is_empty(),
        kept.len(),
        "at least one non-escaping sample",
    );
    out.check(
        "sum_matches_log_det",
        worst_sum < 1e-9,
        worst_sum,
        "|lambda_min + lambda_max - mean log|det Df|| < 1e-9",
    );
    if is_cat(system) {
        out.check(
            "cat_spectrum",
            worst_cat < 1e-9,
            worst_cat,
            "exponents = ±log((3+√5)/2) within 1e-9",
        );
    }
    out.tables.push(table);
    Ok(out)
}
