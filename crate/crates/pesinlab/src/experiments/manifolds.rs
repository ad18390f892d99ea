use pesinlab_core::manifolds::{
    closure_coverage, contraction_profile, find_transverse_intersections, fit_contraction, grow_manifold,
    GrowthStatus, ManifoldKind, ManifoldPatch, DEFAULT_MIN_ANGLE,
};
use pesinlab_core::{MapSystem, Result};
use rayon::prelude::*;

use super::{hyperbolic_fixed_point, Outcome};
use crate::config::Config;
use crate::output::{real, Table};

/// Arc length of the stable patch used for the contraction profile.
const PROFILE_PATCH: f64 = 0.5;
const COVERAGE_STEPS: u32 = 5;

fn status_name(s: GrowthStatus) -> String {
    match s {
        GrowthStatus::Complete => "complete".into(),
        GrowthStatus::GenerationCap => "generation_cap".into(),
        GrowthStatus::CurvatureBlowup { vertex } => format!("curvature_blowup@{vertex}"),
    }
}

fn polyline_table(name: &'static str, system: &MapSystem, patch: &ManifoldPatch) -> Table {
    let mut t = Table::new(name, &["index", "x", "y"]);
    for (i, p) in patch.wrapped(system.domain()).iter().enumerate() {
        t.push(vec![i.to_string(), real(p[0]), real(p[1])]);
    }
    t
}

pub fn run(cfg: &Config, system: &MapSystem, coverage: bool) -> Result<Outcome> {
    if coverage {
        run_coverage(cfg, system)
    } else {
        run_manifolds(cfg, system)
    }
}

fn run_manifolds(cfg: &Config, system: &MapSystem) -> Result<Outcome> {
    let target = cfg.target_length.expect("validated");
    let h = cfg.h.unwrap_or(0.01);
    let anchor = hyperbolic_fixed_point(system)?;
    let (unstable, stable) = rayon::join(
        || grow_manifold(system, &anchor, ManifoldKind::Unstable, target, h),
        || grow_manifold(system, &anchor, ManifoldKind::Stable, target, h),
    );
    let (unstable, stable) = (unstable?, stable?);
    let local = grow_manifold(
        system,
        &anchor,
        ManifoldKind::Stable,
        target.min(PROFILE_PATCH),
        h,
    )?;
    let profile = contraction_profile(system, &local, cfg.n.unwrap_or(40))?;
    let fit = fit_contraction(&profile)?;
    let crossings = find_transverse_intersections(system.domain(), &unstable, &stable, DEFAULT_MIN_ANGLE);

    let mut out = Outcome::default();
    let mut prof = Table::new("profile", &["n", "ratio"]);
    for (n, r) in &profile {
        prof.push(vec![n.to_string(), real(*r)]);
    }
    let mut inter = Table::new("intersections", &["x", "y", "angle", "transverse"]);
    for (c, transverse) in crossings
        .transverse
        .iter()
        .map(|c| (c, true))
        .chain(crossings.near_tangent.iter().map(|c| (c, false)))
    {
        inter.push(vec![
            real(c.point[0]),
            real(c.point[1]),
            real(c.angle),
            transverse.to_string(),
        ]);
    }
    out.result("anchor", vec![anchor.z[0], anchor.z[1]]);
    out.result("unstable_length", unstable.total_length);
    out.result("stable_length", stable.total_length);
    out.result("unstable_status", status_name(unstable.status));
    out.result("stable_status", status_name(stable.status));
    out.result("c_bar", fit.c_bar);
    out.result("zeta_bar", fit.zeta_bar);
    out.result("profile_r2", fit.r2);
    out.result("transverse_intersections", crossings.transverse.len());
    out.result("near_tangencies", crossings.near_tangent.len());
    if let Some(c) = crossings
        .transverse
        .iter()
        .max_by(|a, b| a.angle.total_cmp(&b.angle))
    {
        out.result("max_angle", c.angle);
    }

    out.check(
        "contraction_certified",
        fit.zeta_bar > 0.0,
        fit.zeta_bar,
        "distances along the stable patch contract exponentially",
    );
    if let Some(zeta) = cfg.zeta {
        out.check(
            "zeta_bar_at_least",
            fit.zeta_bar >= zeta,
            fit.zeta_bar,
            format!("zeta_bar >= {zeta}"),
        );
    }
    let complete = unstable.status == GrowthStatus::Complete && stable.status == GrowthStatus::Complete;
    out.check(
        "growth_complete",
        complete,
        complete,
        "both branches reached target_length",
    );
    out.check(
        "transverse_homoclinic_found",
        !crossings.transverse.is_empty(),
        crossings.transverse.len(),
        format!("at least one crossing with angle >= {DEFAULT_MIN_ANGLE} rad"),
    );
    out.tables.push(polyline_table("unstable", system, &unstable));
    out.tables.push(polyline_table("stable", system, &stable));
    out.tables.push(prof);
    out.tables.push(inter);
    Ok(out)
}

fn run_coverage(cfg: &Config, system: &MapSystem) -> Result<Outcome> {
    let target = cfg.target_length.expect("validated");
    let grid_n = cfg.grid_n.expect("validated");
    let h = cfg.h.unwrap_or(0.05);
    let anchor = hyperbolic_fixed_point(system)?;
    let lengths: Vec<f64> = (0..COVERAGE_STEPS)
        .rev()
        .map(|k| target / f64::from(1u32 << k))
        .collect();
    let values = lengths
        .par_iter()
        .map(|l| {
            let patch = grow_manifold(system, &anchor, ManifoldKind::Unstable, *l, h)?;
            closure_coverage(system, &patch, grid_n)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;

    let mut out = Outcome::default();
    let mut table = Table::new("coverage", &["target_length", "coverage"]);
    for (l, c) in lengths.iter().zip(&values) {
        table.push(vec![real(*l), real(*c)]);
    }
    let monotone = values.windows(2).all(|w| w[1] >= w[0]);
    out.result("coverage", *values.last().expect("non-empty"));
    out.result("grid_n", grid_n);
    out.check(
        "monotone",
        monotone,
        monotone,
        "coverage non-decreasing in arc length",
    );
    out.tables.push(table);
    Ok(out)
}
