//! Runs one configured experiment and writes its outputs.

use std::io;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::config::{Config, ConfigError};
use crate::experiments::run_experiment;
use crate::output::{output_path, write_atomic};
use crate::report::{ErrorReport, RunReport, Status, SCHEMA_VERSION};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot write output: {0}")]
    Io(#[from] io::Error),
    #[error("cannot start thread pool: {0}")]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    /// Worker threads; `None` lets rayon decide.
    pub threads: Option<usize>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            out_dir: PathBuf::from("."),
            threads: None,
        }
    }
}

pub fn run_config_file(path: &Path, opts: &RunOptions) -> Result<RunReport, RunError> {
    let cfg = Config::load(path)?;
    run(&cfg, opts)
}

/// Runs `cfg`. CSV files are written only when the experiment finishes; the
/// JSON report is always written.
pub fn run(cfg: &Config, opts: &RunOptions) -> Result<RunReport, RunError> {
    cfg.validate()?;
    let system = cfg.build_system()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = opts.threads.filter(|n| *n > 0) {
        builder = builder.num_threads(n);
    }
    let pool = builder.build()?;

    let start = Instant::now();
    let outcome = pool.install(|| run_experiment(cfg, &system));
    let duration_seconds = start.elapsed().as_secs_f64();

    let prefix = cfg.output_prefix();
    let mut report = RunReport {
        schema_version: SCHEMA_VERSION,
        status: Status::Error,
        config: cfg.clone(),
        checks: Vec::new(),
        results: Default::default(),
        outputs: Vec::new(),
        error: None,
        threads: pool.current_num_threads(),
        duration_seconds,
    };
    match outcome {
        Ok(outcome) => {
            for table in &outcome.tables {
                let path = output_path(&opts.out_dir, prefix, table.name, "csv");
                write_atomic(&path, &table.to_bytes()?)?;
                report.outputs.push(file_name(&path));
            }
            report.status = if outcome.checks.iter().all(|c| c.pass) {
                Status::Pass
            } else {
                Status::Fail
            };
            report.checks = outcome.checks;
            report.results = outcome.results;
        }
        Err(e) => report.error = Some(ErrorReport::from(&e)),
    }
    let path = output_path(&opts.out_dir, prefix, "report", "json");
    let mut json = serde_json::to_vec_pretty(&report).map_err(io::Error::other)?;
    json.push(b'\n');
    write_atomic(&path, &json)?;
    Ok(report)
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}
