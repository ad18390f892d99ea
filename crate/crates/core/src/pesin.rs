//! Pesin-block classification over a finite horizon.
//!
//! Both invariant bundles are one-dimensional, so every block norm in the
//! block conditions is a sum of one-step stretches `log‖Df(x_t) e_t‖` along
//! the bundle field. The classifier computes these stretches once over an
//! orbit window and reads all conditions off prefix sums.

use alloc::format;
use alloc::vec::Vec;

use crate::cocycle::{self, estimate_splitting, DEFAULT_SPLITTING_HORIZON};
use crate::dynsys::MapSystem;
use crate::error::{invalid, Error, Result};
use crate::linalg::{self, Point, Vec2};
use crate::math;
use crate::sampling;
use crate::shadowing::PseudoOrbit;

/// Iterates kept outside the tested range so that swept fields settle.
pub const FIELD_PAD: usize = DEFAULT_SPLITTING_HORIZON;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PesinParams {
    pub block: usize,
    pub zeta: f64,
    pub k_max: usize,
    /// Largest `l` tested.
    pub horizon: usize,
}

impl PesinParams {
    pub fn new(block: usize, zeta: f64, k_max: usize, horizon: usize) -> Result<Self> {
        let p = Self {
            block,
            zeta,
            k_max,
            horizon,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.block == 0 {
            return Err(invalid("K must be at least 1"));
        }
        if !(self.zeta > 0.0 && self.zeta.is_finite()) {
            return Err(invalid("zeta must be positive"));
        }
        if self.k_max == 0 || self.horizon < self.k_max {
            return Err(invalid("need 1 <= k_max <= horizon"));
        }
        Ok(())
    }

    /// Iterates needed before the point: the backward sums reach
    /// `−(horizon·K + K − 1)` and condition (c) starts at `−horizon·K`.
    pub fn backward_extent(&self) -> usize {
        self.horizon * self.block + self.block
    }

    /// Iterates needed after the point: condition (c) runs up to
    /// `horizon·K + horizon·K`.
    pub fn forward_extent(&self) -> usize {
        2 * self.horizon * self.block + self.block
    }
}

/// Orbit points `x_t` for `t ∈ [−origin, len − origin)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitWindow {
    pub points: Vec<Point>,
    pub origin: usize,
}

impl OrbitWindow {
    /// Window around `x` built from its backward and forward orbits.
    pub fn around(system: &MapSystem, x: Point, back: usize, forward: usize) -> Result<Self> {
        let past = system.backward_orbit(x, back)?;
        let future = system.orbit(x, forward)?;
        let mut points: Vec<Point> = past.into_iter().rev().collect();
        points.extend_from_slice(&future[1..]);
        Ok(Self { points, origin: back })
    }

    /// Window built forward from `start`; the classified point is
    /// `f^back(start)`. Used where backward iteration is unreliable.
    pub fn from_history(system: &MapSystem, start: Point, back: usize, forward: usize) -> Result<Self> {
        let points = system.orbit(start, back + forward).map_err(|e| match e {
            Error::OrbitEscape { index } => Error::OrbitEscape {
                index: index - back as i64,
            },
            e => e,
        })?;
        Ok(Self { points, origin: back })
    }

    pub fn point(&self) -> Point {
        self.points[self.origin]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn relative(&self, i: usize) -> i64 {
        i as i64 - self.origin as i64
    }
}

/// Supplies `(E^s, E^u)` unit directions at every window point.
pub trait SplittingProvider {
    fn lines(&self, system: &MapSystem, window: &OrbitWindow) -> Result<Vec<(Vec2, Vec2)>>;
}

/// Invariant fields from one backward sweep (stable) and one forward sweep
/// (unstable) over the whole window. Points within [`FIELD_PAD`] of either
/// end carry unsettled directions and are never read by the classifier.
#[derive(Debug, Clone, Copy, Default)]
pub struct SweepSplitting;

impl SplittingProvider for SweepSplitting {
    fn lines(&self, system: &MapSystem, window: &OrbitWindow) -> Result<Vec<(Vec2, Vec2)>> {
        let n = window.len();
        if n < 2 {
            return Err(invalid("window too short"));
        }
        let jacs: Vec<_> = window.points[..n - 1]
            .iter()
            .map(|p| system.jacobian(*p))
            .collect();
        let reindex = |e: Error| match e {
            Error::RankDeficient { step } => Error::DegenerateSplitting {
                index: window.relative(step),
                residual: f64::INFINITY,
            },
            e => e,
        };
        let stable = cocycle::backward_sweep(&jacs).map_err(reindex)?;
        let unstable = cocycle::forward_sweep(&jacs).map_err(reindex)?;
        Ok(stable.into_iter().zip(unstable).collect())
    }
}

/// Independent [`estimate_splitting`] at every window point.
#[derive(Debug, Clone, Copy)]
pub struct EstimatedSplitting {
    pub horizon: usize,
}

impl SplittingProvider for EstimatedSplitting {
    fn lines(&self, system: &MapSystem, window: &OrbitWindow) -> Result<Vec<(Vec2, Vec2)>> {
        window
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| {
                estimate_splitting(system, *p, self.horizon)
                    .map(|s| (s.stable_basis, s.unstable_basis))
                    .map_err(|e| match e {
                        Error::DegenerateSplitting { residual, .. } => Error::DegenerateSplitting {
                            index: window.relative(i),
                            residual,
                        },
                        e => e,
                    })
            })
            .collect()
    }
}

/// The same pair of lines everywhere (linear maps).
#[derive(Debug, Clone, Copy)]
pub struct ConstantSplitting {
    pub stable: Vec2,
    pub unstable: Vec2,
}

impl SplittingProvider for ConstantSplitting {
    fn lines(&self, _: &MapSystem, window: &OrbitWindow) -> Result<Vec<(Vec2, Vec2)>> {
        Ok(alloc::vec![(self.stable, self.unstable); window.len()])
    }
}

/// Prefix sums of one-step stretches along both bundles.
#[derive(Debug, Clone, PartialEq)]
pub struct StretchSeries {
    origin: usize,
    stable: Vec<f64>,
    unstable: Vec<f64>,
}

impl StretchSeries {
    pub fn new(system: &MapSystem, window: &OrbitWindow, provider: &dyn SplittingProvider) -> Result<Self> {
        let lines = provider.lines(system, window)?;
        let n = window.len() - 1;
        let mut stable = Vec::with_capacity(n + 1);
        let mut unstable = Vec::with_capacity(n + 1);
        let (mut ks, mut ku) = (math::KahanSum::new(), math::KahanSum::new());
        stable.push(0.0);
        unstable.push(0.0);
        for t in 0..n {
            let j = system.jacobian(window.points[t]);
            let (e, f) = lines[t];
            let (se, sf) = (linalg::norm(j.apply(e)), linalg::norm(j.apply(f)));
            if !(se > 0.0 && sf > 0.0) {
                return Err(Error::DegenerateSplitting {
                    index: window.relative(t),
                    residual: f64::INFINITY,
                });
            }
            ks.add(math::ln(se) - math::ln(linalg::norm(e)));
            ku.add(math::ln(sf) - math::ln(linalg::norm(f)));
            stable.push(ks.value());
            unstable.push(ku.value());
        }
        Ok(Self {
            origin: window.origin,
            stable,
            unstable,
        })
    }

    fn idx(&self, t: i64) -> usize {
        let i = t + self.origin as i64;
        assert!(
            i >= 0 && (i as usize) < self.stable.len(),
            "index {t} outside the window"
        );
        i as usize
    }

    /// `Σ_{t=from}^{to−1} log‖Df|_E(x_t)‖`.
    pub fn stable_sum(&self, from: i64, to: i64) -> f64 {
        self.stable[self.idx(to)] - self.stable[self.idx(from)]
    }

    /// `Σ_{t=from}^{to−1} log‖Df|_F(x_t)‖`.
    pub fn unstable_sum(&self, from: i64, to: i64) -> f64 {
        self.unstable[self.idx(to)] - self.unstable[self.idx(from)]
    }

    /// `(1/L)(log‖Df^L|_E(x_l)‖ − log m(Df^L|_F(x_l)))`.
    pub fn domination_ratio(&self, l: i64, len: usize) -> f64 {
        let to = l + len as i64;
        (self.stable_sum(l, to) - self.unstable_sum(l, to)) / len as f64
    }
}

/// Per-level slack of the block conditions at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockProfile {
    pub point: Point,
    /// Worst slack of (a) at `l = 1..=horizon` (index `l − 1`).
    pub forward: Vec<f64>,
    /// Worst slack of (b) at `l = 1..=horizon`.
    pub backward: Vec<f64>,
    /// Worst slack of (c) over the sampled `(l, L)` pairs.
    pub domination: f64,
}

impl BlockProfile {
    pub fn from_series(point: Point, series: &StretchSeries, params: &PesinParams) -> Result<Self> {
        params.validate()?;
        let (big_k, h, zeta) = (params.block as i64, params.horizon as i64, params.zeta);
        let mut forward = Vec::with_capacity(params.horizon);
        let mut backward = Vec::with_capacity(params.horizon);
        for l in 1..=h {
            let (mut a, mut b) = (f64::INFINITY, f64::INFINITY);
            for r in 0..big_k {
                let n = l * big_k + r;
                a = a.min(-zeta - series.stable_sum(0, n) / n as f64);
                b = b.min(series.unstable_sum(-n, 0) / n as f64 - zeta);
            }
            forward.push(a);
            backward.push(b);
        }
        let mut domination = f64::INFINITY;
        for l in (-h..=h).map(|i| i * big_k) {
            let mut len = params.block;
            while len <= params.block * params.horizon {
                domination = domination.min(-2.0 * zeta - series.domination_ratio(l, len));
                len *= 2;
            }
        }
        Ok(Self {
            point,
            forward,
            backward,
            domination,
        })
    }

    /// `(margin_a, margin_b, margin_c)` for conditions required from level
    /// `k` on.
    pub fn margins(&self, k: usize) -> (f64, f64, f64) {
        assert!(k >= 1 && k <= self.forward.len(), "k outside 1..=horizon");
        let tail = |v: &[f64]| v[k - 1..].iter().copied().fold(f64::INFINITY, f64::min);
        (tail(&self.forward), tail(&self.backward), self.domination)
    }

    /// Smallest `k ≤ k_max` whose margins are all non-negative.
    pub fn smallest_block(&self, k_max: usize) -> Option<usize> {
        (1..=k_max.min(self.forward.len())).find(|&k| {
            let (a, b, c) = self.margins(k);
            a.min(b).min(c) >= 0.0
        })
    }

    pub fn verdict(&self, k_max: usize) -> BlockVerdict {
        let k = self.smallest_block(k_max);
        let (margin_a, margin_b, margin_c) = self.margins(k.unwrap_or(k_max));
        BlockVerdict {
            point: self.point,
            k,
            margin_a,
            margin_b,
            margin_c,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockVerdict {
    pub point: Point,
    /// Smallest block index within the horizon.
    pub k: Option<usize>,
    /// Slacks at `k`, or at `k_max` when no level passes.
    pub margin_a: f64,
    pub margin_b: f64,
    pub margin_c: f64,
}

impl BlockVerdict {
    pub fn in_block(&self, k: usize) -> bool {
        self.k.is_some_and(|j| j <= k)
    }
}

pub fn block_profile(
    system: &MapSystem,
    window: &OrbitWindow,
    provider: &dyn SplittingProvider,
    params: &PesinParams,
) -> Result<BlockProfile> {
    params.validate()?;
    let need_back = params.backward_extent() + FIELD_PAD;
    let need_fwd = params.forward_extent() + FIELD_PAD;
    if window.origin < need_back || window.len() - window.origin <= need_fwd {
        return Err(invalid("orbit window too short for the horizon"));
    }
    let series = StretchSeries::new(system, window, provider)?;
    BlockProfile::from_series(window.point(), &series, params)
}

fn window_for(system: &MapSystem, x: Point, params: &PesinParams) -> Result<OrbitWindow> {
    params.validate()?;
    OrbitWindow::around(
        system,
        x,
        params.backward_extent() + FIELD_PAD,
        params.forward_extent() + FIELD_PAD + 1,
    )
}

/// Slack of conditions (a), (b), (c) at level `k`.
pub fn check_block_conditions(
    system: &MapSystem,
    x: Point,
    provider: &dyn SplittingProvider,
    params: &PesinParams,
    k: usize,
) -> Result<(f64, f64, f64)> {
    if k == 0 || k > params.horizon {
        return Err(invalid("k must lie in 1..=horizon"));
    }
    let window = window_for(system, x, params)?;
    Ok(block_profile(system, &window, provider, params)?.margins(k))
}

pub fn classify_block(system: &MapSystem, x: Point, params: &PesinParams) -> Result<BlockVerdict> {
    classify_block_with(system, x, &SweepSplitting, params)
}

pub fn classify_block_with(
    system: &MapSystem,
    x: Point,
    provider: &dyn SplittingProvider,
    params: &PesinParams,
) -> Result<BlockVerdict> {
    let window = window_for(system, x, params)?;
    Ok(block_profile(system, &window, provider, params)?.verdict(params.k_max))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sampler {
    pub count: usize,
    pub burn_in: usize,
    pub seed: u64,
}

pub const MIN_SAMPLES: usize = 100;

/// Verdict for sample `index`: a uniform point of the sampling box, iterated
/// `burn_in` steps and then classified from its own forward history.
/// `Ok(None)` when the orbit escapes.
pub fn sample_verdict(
    system: &MapSystem,
    params: &PesinParams,
    sampler: &Sampler,
    index: usize,
) -> Result<Option<BlockVerdict>> {
    params.validate()?;
    let x0 = sampling::uniform_point(system, sampler.seed, index as u64);
    let back = params.backward_extent() + FIELD_PAD;
    let fwd = params.forward_extent() + FIELD_PAD + 1;
    let window = match system
        .iterate(x0, sampler.burn_in)
        .and_then(|s| OrbitWindow::from_history(system, s, back, fwd))
    {
        Ok(w) => w,
        Err(Error::OrbitEscape { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    Ok(Some(
        block_profile(system, &window, &SweepSplitting, params)?.verdict(params.k_max),
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockMeasure {
    pub k: usize,
    /// Fraction of non-escaped samples in `Λ_k`.
    pub fraction: f64,
    pub classified: usize,
    pub escaped: usize,
}

/// Membership fractions for `k = 1..=k_max` from verdicts listed in sample
/// order (`None` = escaped).
pub fn block_fractions(verdicts: &[Option<BlockVerdict>], k_max: usize) -> Vec<BlockMeasure> {
    let kept: Vec<&BlockVerdict> = verdicts.iter().flatten().collect();
    let escaped = verdicts.len() - kept.len();
    (1..=k_max)
        .map(|k| {
            let inside = kept.iter().filter(|v| v.in_block(k)).count();
            BlockMeasure {
                k,
                fraction: if kept.is_empty() {
                    0.0
                } else {
                    inside as f64 / kept.len() as f64
                },
                classified: kept.len(),
                escaped,
            }
        })
        .collect()
}

pub fn estimate_block_measure(
    system: &MapSystem,
    params: &PesinParams,
    k: usize,
    sampler: &Sampler,
) -> Result<BlockMeasure> {
    if sampler.count < MIN_SAMPLES {
        return Err(Error::InsufficientData {
            needed: MIN_SAMPLES,
            got: sampler.count,
        });
    }
    let verdicts = (0..sampler.count)
        .map(|i| sample_verdict(system, params, sampler, i))
        .collect::<Result<Vec<_>>>()?;
    if k == 0 {
        let kept = verdicts.iter().flatten().count();
        return Ok(BlockMeasure {
            k,
            fraction: 0.0,
            classified: kept,
            escaped: verdicts.len() - kept,
        });
    }
    let mut all = block_fractions(&verdicts, k);
    Ok(all.pop().expect("k >= 1"))
}

/// Whether the orbit of `z` stays within `sigma` of every witness segment:
/// `ρ(f^{cᵢ+j}(z), f^j(xᵢ)) < σ` for `0 ≤ j < nᵢ`.
///
/// The witness must have all `nᵢ ≥ 2kK` and both ends of every segment in
/// `Λ_k`; otherwise `WitnessInvalid`.
pub fn extended_block_membership(
    system: &MapSystem,
    z: Point,
    params: &PesinParams,
    k: usize,
    sigma: f64,
    witness: &PseudoOrbit,
) -> Result<bool> {
    params.validate()?;
    if k == 0 || k > params.horizon {
        return Err(invalid("k must lie in 1..=horizon"));
    }
    if !(sigma > 0.0) {
        return Err(invalid("sigma must be positive"));
    }
    let min_len = 2 * k * params.block;
    for (i, (x, n)) in witness.segments.iter().enumerate() {
        if *n < min_len {
            return Err(Error::WitnessInvalid(format!(
                "segment {i} has length {n} < 2kK = {min_len}"
            )));
        }
        for (end, p) in [("start", *x), ("end", system.iterate(*x, *n)?)] {
            if !classify_block(system, p, params)?.in_block(k) {
                return Err(Error::WitnessInvalid(format!(
                    "segment {i} {end} is not in block {k}"
                )));
            }
        }
    }
    let offsets = witness.offsets()?;
    let (lo, hi) = (offsets[0], *offsets.last().expect("non-empty"));
    let past = system.backward_orbit(z, (-lo).max(0) as usize)?;
    let future = system.orbit(z, hi.max(0) as usize)?;
    let z_at = |t: i64| {
        if t >= 0 {
            future[t as usize]
        } else {
            past[(-t) as usize]
        }
    };
    for (i, (x, n)) in witness.segments.iter().enumerate() {
        let seg = system.orbit(*x, *n - 1)?;
        for (j, p) in seg.iter().enumerate() {
            if !(system.distance(z_at(offsets[i] + j as i64), *p) < sigma) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shadowing::close_orbit;
    use proptest::prelude::*;

    fn log_lambda() -> f64 {
        ((3.0 + 5f64.sqrt()) / 2.0).ln()
    }

    fn cat_params(zeta: f64) -> PesinParams {
        PesinParams::new(1, zeta, 5, 10).unwrap()
    }

    #[test]
    fn cat_margins_match_constant_cocycle() {
        let cat = MapSystem::cat();
        let l = log_lambda();
        for x in [[0.1, 0.2], [0.73, 0.41], [0.5, 0.5]] {
            let (a, b, c) = check_block_conditions(&cat, x, &SweepSplitting, &cat_params(0.9), 1).unwrap();
            assert!((a - (l - 0.9)).abs() < 1e-9, "{a}");
            assert!((b - (l - 0.9)).abs() < 1e-9, "{b}");
            assert!((c - (2.0 * l - 1.8)).abs() < 1e-9, "{c}");
            let v = classify_block(&cat, x, &cat_params(0.9)).unwrap();
            assert_eq!(v.k, Some(1));
        }
    }

    #[test]
    fn providers_agree_on_cat() {
        let cat = MapSystem::cat();
        let s = (1.0 + 5f64.sqrt()) / 2.0;
        let constant = ConstantSplitting {
            stable: linalg::normalize([1.0, -s]).unwrap(),
            unstable: linalg::normalize([1.0, s - 1.0]).unwrap(),
        };
        let p = PesinParams::new(2, 0.9, 3, 4).unwrap();
        let x = [0.37, 0.81];
        let m0 = check_block_conditions(&cat, x, &SweepSplitting, &p, 2).unwrap();
        let m1 = check_block_conditions(&cat, x, &constant, &p, 2).unwrap();
        let m2 = check_block_conditions(&cat, x, &EstimatedSplitting { horizon: 30 }, &p, 2).unwrap();
        for m in [m1, m2] {
            assert!((m0.0 - m.0).abs() < 1e-9 && (m0.1 - m.1).abs() < 1e-9 && (m0.2 - m.2).abs() < 1e-9);
        }
    }

    #[test]
    fn zeta_above_exponent_fails() {
        let cat = MapSystem::cat();
        let (a, _, _) =
            check_block_conditions(&cat, [0.3, 0.6], &SweepSplitting, &cat_params(1.0), 1).unwrap();
        assert!(a < 0.0);
        assert_eq!(
            classify_block(&cat, [0.3, 0.6], &cat_params(1.0)).unwrap().k,
            None
        );
    }

    #[test]
    fn shear_has_no_block() {
        let sys = MapSystem::standard(0.0).unwrap();
        let v = classify_block(&sys, [0.3, 0.2], &cat_params(0.05)).unwrap();
        assert_eq!(v.k, None);
    }

    #[test]
    fn cat_block_measure_is_full() {
        let cat = MapSystem::cat();
        let s = Sampler {
            count: 100,
            burn_in: 10,
            seed: 3,
        };
        let m = estimate_block_measure(&cat, &cat_params(0.9), 1, &s).unwrap();
        assert_eq!(m.fraction, 1.0);
        assert_eq!(m.escaped, 0);
        assert_eq!(
            estimate_block_measure(&cat, &cat_params(0.9), 0, &s)
                .unwrap()
                .fraction,
            0.0
        );
    }

    #[test]
    fn henon_escapes_are_counted() {
        let h = MapSystem::henon(1.4, 0.3).unwrap();
        let s = Sampler {
            count: 100,
            burn_in: 1000,
            seed: 1,
        };
        let p = PesinParams::new(5, 0.1, 5, 10).unwrap();
        let m = estimate_block_measure(&h, &p, 5, &s).unwrap();
        assert!(m.escaped > 0);
        assert_eq!(m.escaped + m.classified, 100);
    }

    #[test]
    fn condition_c_matches_domination_margin() {
        let sys = MapSystem::perturbed_cat(0.05).unwrap();
        let p = PesinParams::new(3, 0.5, 4, 6).unwrap();
        let back = p.backward_extent() + FIELD_PAD;
        let window =
            OrbitWindow::from_history(&sys, [0.21, 0.64], back, p.forward_extent() + FIELD_PAD + 1).unwrap();
        let lines = SweepSplitting.lines(&sys, &window).unwrap();
        let series = StretchSeries::new(&sys, &window, &SweepSplitting).unwrap();
        for (l, len) in [(0i64, 3usize), (6, 12), (-9, 6), (-18, 24)] {
            let i = (window.origin as i64 + l) as usize;
            let (e, f) = lines[i];
            let dm = cocycle::domination_margin(&sys, window.points[i], e, f, len, len).unwrap();
            assert!(
                (dm + series.domination_ratio(l, len)).abs() < 1e-9,
                "l={l} L={len}"
            );
        }
    }

    #[test]
    fn exact_orbit_witness() {
        let cat = MapSystem::cat();
        let p = cat_params(0.9);
        let x = [0.123, 0.456];
        let orbit = cat.orbit(x, 12).unwrap();
        let w = PseudoOrbit::from_segments(
            &cat,
            alloc::vec![(orbit[0], 4), (orbit[4], 4), (orbit[8], 4)],
            false,
            1e-9,
        )
        .unwrap();
        assert!(extended_block_membership(&cat, x, &p, 1, 1e-9, &w).unwrap());
        let moved = [x[0] + 2e-3, x[1]];
        assert!(!extended_block_membership(&cat, moved, &p, 1, 1e-3, &w).unwrap());
        let short = PseudoOrbit::from_segments(&cat, alloc::vec![(x, 1)], false, 1e-9).unwrap();
        assert!(matches!(
            extended_block_membership(&cat, x, &p, 1, 1e-3, &short),
            Err(Error::WitnessInvalid(_))
        ));
    }

    #[test]
    fn closed_orbit_witness() {
        let cat = MapSystem::cat();
        let x = [0.3001, 0.1998];
        let n = 8;
        let pp = close_orbit(&cat, x, n, 1e-12, 20).unwrap();
        let gap = cat.distance(cat.iterate(x, n).unwrap(), x);
        let w = PseudoOrbit::from_segments(&cat, alloc::vec![(x, n)], true, 2.0 * gap).unwrap();
        let worst = pp.closing_deviations[..n].iter().copied().fold(0.0, f64::max);
        assert!(extended_block_membership(&cat, pp.z, &cat_params(0.9), 1, 2.0 * worst + 1e-9, &w).unwrap());
    }

    #[test]
    fn cat_image_classifies_at_same_level() {
        let cat = MapSystem::cat();
        let x = [0.61, 0.27];
        let v = classify_block(&cat, x, &cat_params(0.9)).unwrap();
        let w = classify_block(&cat, cat.forward(x), &cat_params(0.9)).unwrap();
        assert_eq!(v.k, w.k);
        assert!((v.margin_a - w.margin_a).abs() < 1e-9);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn margins_are_affine_in_zeta(x in 0.0f64..1.0, y in 0.0f64..1.0, z1 in 0.05f64..1.0, dz in 0.0f64..0.5) {
            let sys = MapSystem::perturbed_cat(0.05).unwrap();
            let p1 = PesinParams::new(2, z1, 3, 5).unwrap();
            let p2 = PesinParams::new(2, z1 + dz, 3, 5).unwrap();
            let m1 = check_block_conditions(&sys, [x, y], &SweepSplitting, &p1, 2).unwrap();
            let m2 = check_block_conditions(&sys, [x, y], &SweepSplitting, &p2, 2).unwrap();
            prop_assert!(m2.0 <= m1.0 + 1e-12 && m2.1 <= m1.1 + 1e-12 && m2.2 <= m1.2 + 1e-12);
            prop_assert!((m1.0 - m2.0 - dz).abs() < 1e-9);
            prop_assert!((m1.2 - m2.2 - 2.0 * dz).abs() < 1e-9);
        }

        #[test]
        fn blocks_are_nested(x in 0.0f64..1.0, y in 0.0f64..1.0) {
            let sys = MapSystem::perturbed_cat(0.05).unwrap();
            let p = PesinParams::new(2, 0.8, 6, 8).unwrap();
            let v = classify_block(&sys, [x, y], &p).unwrap();
            let window = window_for(&sys, [x, y], &p).unwrap();
            let prof = block_profile(&sys, &window, &SweepSplitting, &p).unwrap();
            for k in 1..p.k_max {
                let (a0, b0, c0) = prof.margins(k);
                let (a1, b1, c1) = prof.margins(k + 1);
                prop_assert!(a1 >= a0 && b1 >= b0 && c1 >= c0);
                if v.in_block(k) {
                    prop_assert!(v.in_block(k + 1));
                }
            }
        }
    }
}
