use pesinlab_core::sampling::{task_rng, uniform_point};
use pesinlab_core::shadowing::{newton_shadow, verify_exponential_shadowing, PseudoOrbit};
use pesinlab_core::{Domain, MapSystem, Result};
use rand::Rng;

use super::{is_cat, Outcome};
use crate::config::Config;
use crate::output::{real, Table};

/// Segments of length `T` chained by random jumps of size in `(δ/2, δ)`.
fn random_pseudo_orbit(
    system: &MapSystem,
    cfg: &Config,
    delta: f64,
    t: usize,
    segments: usize,
) -> Result<PseudoOrbit> {
    let burn_in = cfg
        .burn_in
        .unwrap_or(if system.domain() == Domain::Plane { 1000 } else { 0 });
    let mut x = system.iterate(uniform_point(system, cfg.seed, 0), burn_in)?;
    let mut rng = task_rng(cfg.seed, 1);
    let mut segs = Vec::with_capacity(segments);
    for _ in 0..segments {
        segs.push((x, t));
        let end = system.iterate(x, t)?;
        let size = delta * (0.5 + 0.5 * rng.random::<f64>());
        let angle = std::f64::consts::TAU * rng.random::<f64>();
        x = system
            .domain()
            .wrap([end[0] + size * angle.cos(), end[1] + size * angle.sin()]);
    }
    PseudoOrbit::from_segments(system, segs, false, delta)
}

pub fn run(cfg: &Config, system: &MapSystem) -> Result<Outcome> {
    let delta = cfg.delta.expect("validated");
    let t = cfg.min_length.expect("validated");
    let segments = cfg.count.unwrap_or(8);
    let pseudo = random_pseudo_orbit(system, cfg, delta, t, segments)?;
    let result = newton_shadow(
        system,
        &pseudo,
        cfg.tol.unwrap_or(1e-10),
        cfg.max_iter.unwrap_or(20),
    )?;

    let mut out = Outcome::default();
    let mut table = Table::new("deviations", &["segment", "j", "separation", "deviation"]);
    for d in &result.deviations {
        table.push(vec![
            d.segment.to_string(),
            d.j.to_string(),
            d.separation.to_string(),
            real(d.value),
        ]);
    }
    out.result("segments", segments);
    out.result("max_jump", pseudo.max_jump());
    out.result("max_deviation", result.max_deviation());
    out.result("theta_fit", result.theta);
    out.result("orbit_residual", result.orbit_residual);
    out.result("newton_iterations", result.newton_iterations);
    out.check(
        "converged",
        result.converged,
        result.orbit_residual,
        "Newton converged with orbit residual below tol",
    );
    if let (Some(eta), Some(theta)) = (cfg.eta, cfg.theta) {
        let verdict = verify_exponential_shadowing(&result, eta, theta);
        out.check(
            "exponential_shadowing",
            verdict.pass,
            verdict.worst_margin,
            format!("deviation < {eta}·exp(−{theta}·min(j, n−j)) for every pair"),
        );
    }
    if is_cat(system) {
        out.check(
            "single_newton_step",
            result.newton_iterations == 1,
            result.newton_iterations,
            "linear map converges in one Newton step",
        );
    }
    out.tables.push(table);
    Ok(out)
}
