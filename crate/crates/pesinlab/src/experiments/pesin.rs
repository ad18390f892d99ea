use pesinlab_core::pesin::{block_fractions, sample_verdict, Sampler};
use pesinlab_core::{MapSystem, Result};
use rayon::prelude::*;

use super::{cat_log_lambda, is_cat, Outcome};
use crate::config::Config;
use crate::output::{real, Table};

pub fn run(cfg: &Config, system: &MapSystem) -> Result<Outcome> {
    let params = cfg.pesin_params()?;
    let k = cfg.k.unwrap_or(1);
    let default_burn_in = if system.domain() == pesinlab_core::Domain::Plane {
        1000
    } else {
        100
    };
    let sampler = Sampler {
        count: cfg.samples.unwrap_or(1000),
        burn_in: cfg.burn_in.unwrap_or(default_burn_in),
        seed: cfg.seed,
    };
    let verdicts = (0..sampler.count)
        .into_par_iter()
        .map(|i| sample_verdict(system, &params, &sampler, i))
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let k_top = params.k_max.max(k.min(params.horizon));
    let fractions = block_fractions(&verdicts, k_top);

    let mut out = Outcome::default();
    let mut table = Table::new(
        "verdicts",
        &["sample", "x", "y", "k", "margin_a", "margin_b", "margin_c"],
    );
    for (i, v) in verdicts.iter().enumerate() {
        let Some(v) = v else {
            table.push(vec![
                i.to_string(),
                String::new(),
                String::new(),
                "escaped".into(),
                String::new(),
                String::new(),
                String::new(),
            ]);
            continue;
        };
        table.push(vec![
            i.to_string(),
            real(v.point[0]),
            real(v.point[1]),
            v.k.map(|k| k.to_string()).unwrap_or_default(),
            real(v.margin_a),
            real(v.margin_b),
            real(v.margin_c),
        ]);
    }
    let mut measure = Table::new("measure", &["k", "fraction"]);
    for m in &fractions {
        measure.push(vec![m.k.to_string(), real(m.fraction)]);
    }
    let at_k = if k == 0 {
        0.0
    } else {
        fractions.get(k - 1).map_or(0.0, |m| m.fraction)
    };
    let classified = fractions.first().map_or(0, |m| m.classified);
    out.result("k", k);
    out.result("block_measure", at_k);
    out.result(
        "fractions",
        fractions.iter().map(|m| m.fraction).collect::<Vec<_>>(),
    );
    out.result("classified", classified);
    out.result("escaped", verdicts.len() - classified);
    if let Some(Some(v)) = verdicts.first() {
        out.result("first_margins", vec![v.margin_a, v.margin_b, v.margin_c]);
    }
    let nested = fractions.windows(2).all(|w| w[1].fraction >= w[0].fraction);
    out.check(
        "nesting",
        nested,
        nested,
        "membership fraction non-decreasing in k",
    );
    out.check(
        "samples_classified",
        classified > 0,
        classified,
        "at least one non-escaping sample",
    );
    if is_cat(system) {
        let l = cat_log_lambda();
        let zeta = params.zeta;
        let worst = verdicts
            .iter()
            .flatten()
            .map(|v| {
                (v.margin_a - (l - zeta))
                    .abs()
                    .max((v.margin_b - (l - zeta)).abs())
                    .max((v.margin_c - 2.0 * (l - zeta)).abs())
            })
            .fold(0.0, f64::max);
        out.check(
            "cat_margins",
            worst < 1e-6,
            worst,
            "margins = (log λ − ζ, log λ − ζ, 2 log λ − 2ζ) within 1e-6",
        );
    }
    out.tables.push(table);
    out.tables.push(measure);
    Ok(out)
}
