//! The eight experiments. Each returns its checks, scalar results and CSV
//! tables; nothing here touches the filesystem.

use std::collections::BTreeMap;

use pesinlab_core::shadowing::{close_orbit, collect_census, Census, CensusOptions, PeriodicPoint};
use pesinlab_core::{MapSystem, Point, Result};
use rayon::prelude::*;
use serde_json::Value;

use crate::config::{Config, Experiment};
use crate::output::Table;
use crate::report::Check;

mod census;
mod close;
mod livshitz;
mod lyapunov;
mod manifolds;
mod pesin;
mod shadow;

#[derive(Debug, Default)]
pub struct Outcome {
    pub checks: Vec<Check>,
    pub results: BTreeMap<String, Value>,
    pub tables: Vec<Table>,
}

impl Outcome {
    fn check(
        &mut self,
        name: impl Into<String>,
        pass: bool,
        value: impl Into<Value>,
        criterion: impl Into<String>,
    ) {
        self.checks.push(Check::new(name, pass, value, criterion));
    }

    fn result(&mut self, key: &str, value: impl Into<Value>) {
        self.results.insert(key.to_string(), value.into());
    }
}

pub fn run_experiment(cfg: &Config, system: &MapSystem) -> Result<Outcome> {
    match cfg.experiment {
        Experiment::Lyapunov => lyapunov::run(cfg, system),
        Experiment::PesinBlock => pesin::run(cfg, system),
        Experiment::Shadow => shadow::run(cfg, system),
        Experiment::Close => close::run(cfg, system),
        Experiment::Census => census::run(cfg, system),
        Experiment::Manifolds => manifolds::run(cfg, system, false),
        Experiment::Coverage => manifolds::run(cfg, system, true),
        Experiment::Livshitz => livshitz::run(cfg, system),
    }
}

pub(crate) fn is_cat(system: &MapSystem) -> bool {
    system.name() == "cat"
}

/// `log λ` for the cat matrix.
pub(crate) fn cat_log_lambda() -> f64 {
    ((3.0 + 5f64.sqrt()) / 2.0).ln()
}

/// Census of period `n` from `seeds`, closing in parallel and deduplicating
/// in seed order.
pub(crate) fn parallel_census(system: &MapSystem, n: usize, seeds: &[Point], opts: &CensusOptions) -> Census {
    let results: Vec<_> = seeds
        .par_iter()
        .map(|s| close_orbit(system, *s, n, opts.tol, opts.max_iter))
        .collect();
    collect_census(system, n, results, opts)
}

/// First hyperbolic fixed point found from an 8×8 grid of seeds.
pub(crate) fn hyperbolic_fixed_point(system: &MapSystem) -> Result<PeriodicPoint> {
    let census = parallel_census(system, 1, &system.grid_points(8), &CensusOptions::default());
    census
        .points
        .into_iter()
        .find(|p| p.is_hyperbolic())
        .ok_or(pesinlab_core::Error::NonHyperbolicAnchor { margin: 0.0 })
}
