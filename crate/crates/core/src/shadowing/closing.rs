use alloc::vec::Vec;

use super::newton::newton_shadow;
use super::pseudo::PseudoOrbit;
use crate::cocycle::FactoredProduct;
use crate::dynsys::MapSystem;
use crate::error::{invalid, Result};
use crate::linalg::{Mat2, Point};
use crate::spatial::PointIndex;

/// Log-moduli closer to zero than this make a periodic point non-hyperbolic.
pub const HYPERBOLICITY_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicPoint {
    pub z: Point,
    pub period: usize,
    /// `log|μ|` for the eigenvalues of `Dfⁿ(z)`, ascending.
    pub floquet_log_moduli: [f64; 2],
    pub hyperbolicity_margin: f64,
    /// `ρ(f^j(x), f^j(z))` for `0 ≤ j ≤ n`, measured along the refined orbit.
    pub closing_deviations: Vec<f64>,
    /// `z, f(z), …, f^{n−1}(z)`.
    pub orbit: Vec<Point>,
    pub orbit_residual: f64,
    pub newton_iterations: usize,
}

impl PeriodicPoint {
    pub fn is_hyperbolic(&self) -> bool {
        self.hyperbolicity_margin > HYPERBOLICITY_THRESHOLD
    }

    /// `Dfⁿ(z)` as QR factors along the stored orbit.
    pub fn return_product(&self, system: &MapSystem) -> Result<FactoredProduct> {
        let jacs: Vec<Mat2> = self.orbit.iter().map(|p| system.jacobian(*p)).collect();
        FactoredProduct::from_jacobians(&jacs)
    }
}

/// Newton closing of the segment `{x, n}` onto a period-`n` orbit.
pub fn close_orbit(
    system: &MapSystem,
    x: Point,
    n: usize,
    tol: f64,
    max_iter: usize,
) -> Result<PeriodicPoint> {
    if n == 0 {
        return Err(invalid("close_orbit needs n >= 1"));
    }
    let x = system.domain().wrap(x);
    let seed = system.orbit(x, n)?;
    let gap = system.distance(seed[n], x);
    let pseudo =
        PseudoOrbit::from_segments(system, alloc::vec![(x, n)], true, gap * 2.0 + f64::MIN_POSITIVE)?;
    let result = newton_shadow(system, &pseudo, tol, max_iter)?;
    let orbit = result.orbit;
    let jacs: Vec<Mat2> = orbit.iter().map(|p| system.jacobian(*p)).collect();
    let (big, small) = FactoredProduct::from_jacobians(&jacs)?.log_eigen_moduli();
    let closing_deviations = seed
        .iter()
        .enumerate()
        .map(|(j, p)| system.distance(*p, orbit[j % n]))
        .collect();
    Ok(PeriodicPoint {
        z: orbit[0],
        period: n,
        floquet_log_moduli: [small.min(big), small.max(big)],
        hyperbolicity_margin: small.abs().min(big.abs()),
        closing_deviations,
        orbit,
        orbit_residual: result.orbit_residual,
        newton_iterations: result.newton_iterations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CensusOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Converged points closer than this are the same point.
    pub dedup_radius: f64,
}

impl Default for CensusOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 20,
            dedup_radius: 1e-6,
        }
    }
}

/// Distinct points fixed by `fⁿ`, found by closing from many seeds.
#[derive(Debug, Clone, PartialEq)]
pub struct Census {
    pub period: usize,
    pub points: Vec<PeriodicPoint>,
    /// Seeds whose closing failed or did not converge.
    pub failures: usize,
    pub seeds: usize,
    /// `|det(Aⁿ − I)|` when the count is known for the system.
    pub expected: Option<u128>,
}

impl Census {
    pub fn count(&self) -> usize {
        self.points.len()
    }

    pub fn is_complete(&self) -> Option<bool> {
        self.expected.map(|e| e == self.points.len() as u128)
    }
}

/// Deduplicates closing results in seed order. The outcome depends only on
/// the order of `results`, so parallel callers collect by seed index first.
pub fn collect_census<I>(system: &MapSystem, n: usize, results: I, opts: &CensusOptions) -> Census
where
    I: IntoIterator<Item = Result<PeriodicPoint>>,
{
    let mut index = PointIndex::new(system.domain(), opts.dedup_radius);
    let mut points = Vec::new();
    let mut failures = 0;
    let mut seeds = 0;
    for r in results {
        seeds += 1;
        match r {
            Ok(p) if p.orbit_residual < opts.tol => {
                if index.within(p.z, opts.dedup_radius).is_empty() {
                    index.insert(p.z);
                    points.push(p);
                }
            }
            _ => failures += 1,
        }
    }
    Census {
        period: n,
        points,
        failures,
        seeds,
        expected: system.periodic_point_count(n),
    }
}

pub fn periodic_census(system: &MapSystem, n: usize, seeds: &[Point], opts: &CensusOptions) -> Census {
    collect_census(
        system,
        n,
        seeds
            .iter()
            .map(|s| close_orbit(system, *s, n, opts.tol, opts.max_iter)),
        opts,
    )
}

/// A near-return `ρ(fⁿ(x), x) < β` and the periodic point closing it.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosingEvent {
    pub seed_index: usize,
    pub x: Point,
    pub n: usize,
    pub gap: f64,
    pub point: PeriodicPoint,
}

/// Looks for the first return time `n ∈ [n_min, n_max]` with gap below
/// `beta` from `x` and closes it. `Ok(None)` when there is no such return.
pub fn closing_events(
    system: &MapSystem,
    seed_index: usize,
    x: Point,
    beta: f64,
    n_range: (usize, usize),
    tol: f64,
    max_iter: usize,
) -> Result<Option<ClosingEvent>> {
    let (n_min, n_max) = n_range;
    if n_min < 2 || n_min > n_max {
        return Err(invalid("closing needs 2 <= n_min <= n_max"));
    }
    let orbit = system.orbit(x, n_max)?;
    let x = orbit[0];
    for n in n_min..=n_max {
        let gap = system.distance(orbit[n], x);
        if gap < beta {
            let point = close_orbit(system, x, n, tol, max_iter)?;
            return Ok(Some(ClosingEvent {
                seed_index,
                x,
                n,
                gap,
                point,
            }));
        }
    }
    Ok(None)
}

/// `(min(j, n−j), deviation_j / gap)` pairs with separation up to
/// `max_separation`, pooled over events in order.
pub fn closing_rate_samples(events: &[ClosingEvent], max_separation: usize) -> Vec<(usize, f64)> {
    let mut out = Vec::new();
    for e in events {
        for (j, d) in e.point.closing_deviations.iter().enumerate() {
            let s = j.min(e.n - j);
            if s <= max_separation {
                out.push((s, d / e.gap));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn log_lambda() -> f64 {
        ((3.0 + 5f64.sqrt()) / 2.0).ln()
    }

    #[test]
    fn cat_closes_to_origin() {
        let cat = MapSystem::cat();
        let p = close_orbit(&cat, [1e-5, 1e-5], 3, 1e-12, 10).unwrap();
        assert!(cat.distance(p.z, [0.0, 0.0]) < 1e-12);
        assert_eq!(p.period, 3);
        assert!((p.floquet_log_moduli[0] + 3.0 * log_lambda()).abs() < 1e-10);
        assert!((p.floquet_log_moduli[1] - 3.0 * log_lambda()).abs() < 1e-10);
        assert!(p.is_hyperbolic());
        assert_eq!(p.closing_deviations.len(), 4);
    }

    #[test]
    fn periodic_seed_is_kept() {
        let cat = MapSystem::cat();
        let x = [0.8, 0.6];
        let p = close_orbit(&cat, x, 2, 1e-10, 10).unwrap();
        assert_eq!(p.newton_iterations, 0);
        assert!(p.closing_deviations.iter().all(|d| *d < 1e-14));
        assert!(cat.distance(p.z, x) < 1e-14);
    }

    #[test]
    fn small_census() {
        let cat = MapSystem::cat();
        let seeds = cat.grid_points(64);
        for (n, expected) in [(1usize, 1usize), (2, 5), (3, 16)] {
            let c = periodic_census(&cat, n, &seeds, &CensusOptions::default());
            assert_eq!(c.count(), expected, "period {n}");
            assert_eq!(c.is_complete(), Some(true));
            for p in &c.points {
                assert!(cat.distance(cat.iterate(p.z, n).unwrap(), p.z) < 1e-9);
            }
        }
    }

    #[test]
    fn elliptic_point_is_not_hyperbolic() {
        let sys = MapSystem::standard(0.9).unwrap();
        let p = close_orbit(&sys, [0.5, 1e-4], 1, 1e-12, 20).unwrap();
        assert!(sys.distance(p.z, [0.5, 0.0]) < 1e-10);
        assert!(!p.is_hyperbolic());
    }
}
