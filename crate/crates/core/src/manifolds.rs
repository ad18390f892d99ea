//! One-dimensional stable and unstable manifolds of hyperbolic periodic
//! points, grown as polylines by iterating a fundamental segment.
//!
//! Polylines live on the universal cover: `polyline[0]` is the anchor and
//! the curve is continuous, so lengths and diameters are plain Euclidean.
//! Torus-aware consumers wrap on the way out.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::dynsys::{Direction, Domain, MapSystem};
use crate::error::{invalid, Error, Result};
use crate::fit;
use crate::linalg::{self, Eigenvalues, Point, Vec2};
use crate::math;
use crate::shadowing::PeriodicPoint;

/// Length of the initial segment along the eigendirection.
pub const SEED_LENGTH: f64 = 1e-6;

pub const GENERATION_CAP: usize = 60;

/// Largest tolerated turning angle between adjacent segments.
pub const MAX_TURN: f64 = math::PI / 3.0;

/// Crossings flatter than this are near-tangencies by default.
pub const DEFAULT_MIN_ANGLE: f64 = 0.1;

/// Diameters below this many ulps of the anchor are not resolved.
pub const RESOLUTION_ULPS: f64 = 64.0;

// Bisection depth limit when re-interpolating one stretched segment.
const MAX_BISECTIONS: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ManifoldKind {
    Stable,
    Unstable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthStatus {
    Complete,
    GenerationCap,
    /// Growth stopped because the next generation turned by more than
    /// [`MAX_TURN`] at this vertex; the patch holds the last good one.
    CurvatureBlowup {
        vertex: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifoldPatch {
    pub anchor: PeriodicPoint,
    pub kind: ManifoldKind,
    /// Lifted vertices, `polyline[0] = anchor.z`.
    pub polyline: Vec<Point>,
    pub generation: usize,
    pub total_length: f64,
    pub max_segment: f64,
    pub status: GrowthStatus,
    /// Untruncated length after each generation, starting with the seed.
    pub generation_lengths: Vec<f64>,
}

impl ManifoldPatch {
    /// Unit tangent of the first segment.
    pub fn tangent(&self) -> Vec2 {
        linalg::normalize(linalg::sub(self.polyline[1], self.polyline[0])).unwrap_or([1.0, 0.0])
    }

    pub fn wrapped(&self, domain: Domain) -> Vec<Point> {
        self.polyline.iter().map(|p| domain.wrap(*p)).collect()
    }
}

pub fn polyline_length(poly: &[Point]) -> f64 {
    let mut s = math::KahanSum::new();
    for w in poly.windows(2) {
        s.add(linalg::norm(linalg::sub(w[1], w[0])));
    }
    s.value()
}

/// Eigendirection of `Dfⁿ(z)` with modulus above 1 (unstable) or below 1
/// (stable).
pub fn floquet_direction(system: &MapSystem, anchor: &PeriodicPoint, kind: ManifoldKind) -> Result<Vec2> {
    if !anchor.is_hyperbolic() {
        return Err(Error::NonHyperbolicAnchor {
            margin: anchor.hyperbolicity_margin,
        });
    }
    let m = anchor.return_product(system)?.evaluate();
    let Eigenvalues::Real(big, small) = m.eigenvalues() else {
        return Err(Error::NonHyperbolicAnchor { margin: 0.0 });
    };
    let (big, small) = if big.abs() >= small.abs() {
        (big, small)
    } else {
        (small, big)
    };
    let mu = match kind {
        ManifoldKind::Unstable => big,
        ManifoldKind::Stable => small,
    };
    let v = m
        .eigenvector(mu)
        .ok_or(Error::NonHyperbolicAnchor { margin: 0.0 })?;
    Ok(linalg::canonical_direction(v))
}

/// The period map `f^n` (unstable) or `f^{−n}` (stable) on the cover,
/// shifted so that the lifted anchor is fixed.
struct PeriodMap<'a> {
    system: &'a MapSystem,
    direction: Direction,
    period: usize,
    shift: Vec2,
}

impl<'a> PeriodMap<'a> {
    fn new(system: &'a MapSystem, anchor: &PeriodicPoint, direction: Direction) -> Self {
        let mut map = Self {
            system,
            direction,
            period: anchor.period,
            shift: [0.0, 0.0],
        };
        if system.domain() == Domain::Torus {
            let img = map.apply(anchor.z);
            map.shift = [
                math::round(img[0] - anchor.z[0]),
                math::round(img[1] - anchor.z[1]),
            ];
        }
        map
    }

    fn apply(&self, p: Point) -> Point {
        let mut q = p;
        for _ in 0..self.period {
            q = self.system.lift_apply(q, self.direction);
        }
        linalg::sub(q, self.shift)
    }
}

/// Grows the stable or unstable manifold branch of `anchor` that leaves
/// along the positive eigendirection, to arc length `target_length` with
/// segments no longer than `h`.
///
/// Each generation maps the previous polyline once by the period map and
/// refines stretched segments through images of preimage midpoints.
pub fn grow_manifold(
    system: &MapSystem,
    anchor: &PeriodicPoint,
    kind: ManifoldKind,
    target_length: f64,
    h: f64,
) -> Result<ManifoldPatch> {
    if !(h > 0.0) || !(target_length >= 0.0) || !target_length.is_finite() {
        return Err(invalid("need h > 0 and a finite target_length >= 0"));
    }
    let dir = floquet_direction(system, anchor, kind)?;
    let direction = match kind {
        ManifoldKind::Unstable => Direction::Forward,
        ManifoldKind::Stable => Direction::Inverse,
    };
    let map = PeriodMap::new(system, anchor, direction);
    let z = anchor.z;
    let mut poly = alloc::vec![z, linalg::add(z, linalg::scale(dir, SEED_LENGTH))];
    let mut length = SEED_LENGTH;
    let mut lengths = alloc::vec![length];
    let mut generation = 0;
    let mut status = GrowthStatus::Complete;
    while length < target_length {
        if generation == GENERATION_CAP {
            status = GrowthStatus::GenerationCap;
            break;
        }
        let next = next_generation(&map, &poly, h)?;
        if let Some(vertex) = sharpest_turn(&next) {
            status = GrowthStatus::CurvatureBlowup { vertex };
            break;
        }
        poly = next;
        length = polyline_length(&poly);
        lengths.push(length);
        generation += 1;
    }
    if length > target_length && generation > 0 {
        poly = truncate(&poly, target_length);
        length = polyline_length(&poly);
    }
    Ok(ManifoldPatch {
        anchor: anchor.clone(),
        kind,
        polyline: poly,
        generation,
        total_length: length,
        max_segment: h,
        status,
        generation_lengths: lengths,
    })
}

fn next_generation(map: &PeriodMap<'_>, poly: &[Point], h: f64) -> Result<Vec<Point>> {
    let images: Vec<Point> = poly.iter().map(|p| map.apply(*p)).collect();
    if images.iter().any(|p| !(p[0].is_finite() && p[1].is_finite())) {
        return Err(Error::OrbitEscape { index: 0 });
    }
    let mut out = Vec::with_capacity(images.len() * 3);
    out.push(images[0]);
    for k in 0..poly.len() - 1 {
        refine(
            map,
            poly[k],
            poly[k + 1],
            images[k],
            images[k + 1],
            h,
            0,
            &mut out,
        );
    }
    Ok(out)
}

// Pushes the image of the open preimage segment (a, b] onto `out`, bisecting
// in the preimage until every image segment is at most `h`.
#[allow(clippy::too_many_arguments)]
fn refine(
    map: &PeriodMap<'_>,
    a: Point,
    b: Point,
    fa: Point,
    fb: Point,
    h: f64,
    depth: usize,
    out: &mut Vec<Point>,
) {
    if depth >= MAX_BISECTIONS || linalg::norm(linalg::sub(fb, fa)) <= h {
        out.push(fb);
        return;
    }
    let m = linalg::scale(linalg::add(a, b), 0.5);
    let fm = map.apply(m);
    refine(map, a, m, fa, fm, h, depth + 1, out);
    refine(map, m, b, fm, fb, h, depth + 1, out);
}

fn sharpest_turn(poly: &[Point]) -> Option<usize> {
    (1..poly.len().saturating_sub(1)).find(|&i| {
        let u = linalg::sub(poly[i], poly[i - 1]);
        let v = linalg::sub(poly[i + 1], poly[i]);
        let (nu, nv) = (linalg::norm(u), linalg::norm(v));
        if nu == 0.0 || nv == 0.0 {
            return false;
        }
        let c = (linalg::dot(u, v) / (nu * nv)).clamp(-1.0, 1.0);
        math::acos(c) > MAX_TURN
    })
}

/// Prefix of `poly` with arc length exactly `len`.
fn truncate(poly: &[Point], len: f64) -> Vec<Point> {
    let mut out = alloc::vec![poly[0]];
    let mut acc = 0.0;
    for w in poly.windows(2) {
        let d = linalg::norm(linalg::sub(w[1], w[0]));
        if acc + d >= len {
            let t = if d > 0.0 { (len - acc) / d } else { 0.0 };
            out.push(linalg::add(w[0], linalg::scale(linalg::sub(w[1], w[0]), t)));
            return out;
        }
        acc += d;
        out.push(w[1]);
    }
    out
}

/// Closest point of `poly` to `p` and its distance, on the cover.
pub fn project_onto_polyline(p: Point, poly: &[Point]) -> (Point, f64) {
    let mut best = (poly[0], linalg::norm(linalg::sub(p, poly[0])));
    for w in poly.windows(2) {
        let q = closest_on_segment(p, w[0], w[1]);
        let d = linalg::norm(linalg::sub(p, q));
        if d < best.1 {
            best = (q, d);
        }
    }
    best
}

fn closest_on_segment(p: Point, a: Point, b: Point) -> Point {
    let ab = linalg::sub(b, a);
    let len2 = linalg::dot(ab, ab);
    if len2 == 0.0 {
        return a;
    }
    let t = (linalg::dot(linalg::sub(p, a), ab) / len2).clamp(0.0, 1.0);
    linalg::add(a, linalg::scale(ab, t))
}

/// `max_{p ∈ points} dist(p, poly)`.
pub fn one_sided_distance(points: &[Point], poly: &[Point]) -> f64 {
    points
        .iter()
        .map(|p| project_onto_polyline(*p, poly).1)
        .fold(0.0, f64::max)
}

/// Symmetric Hausdorff distance between two polylines, measured from the
/// vertices of each to the other.
pub fn hausdorff_distance(a: &[Point], b: &[Point]) -> f64 {
    one_sided_distance(a, b).max(one_sided_distance(b, a))
}

fn diameter(points: &[Point]) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            d = d.max(linalg::norm(linalg::sub(points[i], points[j])));
        }
    }
    d
}

/// `(n, diam fⁿ(patch) / diam(patch))` for `0 ≤ n ≤ n_max`, with `f` for
/// stable patches and `f⁻¹` for unstable ones.
///
/// After every full period the images are projected back onto the patch,
/// which contains them up to round-off. Without this the component of the
/// rounding error transverse to the patch would grow like the expansion rate
/// and swamp the contracting diameter after a few dozen steps.
///
/// The profile stops early once the diameter falls below
/// [`RESOLUTION_ULPS`] units in the last place of the anchor coordinates,
/// where it only measures round-off.
pub fn contraction_profile(
    system: &MapSystem,
    patch: &ManifoldPatch,
    n_max: usize,
) -> Result<Vec<(usize, f64)>> {
    if n_max > GENERATION_CAP {
        return Err(invalid("contraction_profile needs n_max <= 60"));
    }
    let direction = match patch.kind {
        ManifoldKind::Stable => Direction::Forward,
        ManifoldKind::Unstable => Direction::Inverse,
    };
    let d0 = diameter(&patch.polyline);
    if !(d0 > 0.0) {
        return Err(invalid("patch has zero diameter"));
    }
    let z = patch.anchor.z;
    let floor = RESOLUTION_ULPS * f64::EPSILON * z[0].abs().max(z[1].abs()).max(1.0);
    let period = patch.anchor.period;
    let mut pts = patch.polyline.clone();
    let mut anchor = z;
    let mut out = Vec::with_capacity(n_max + 1);
    out.push((0, 1.0));
    for n in 1..=n_max {
        for p in pts.iter_mut() {
            *p = system.lift_apply(*p, direction);
        }
        anchor = system.lift_apply(anchor, direction);
        if n % period == 0 {
            let shift = linalg::sub(anchor, z);
            let shift = if system.domain() == Domain::Torus {
                [math::round(shift[0]), math::round(shift[1])]
            } else {
                [0.0, 0.0]
            };
            for p in pts.iter_mut() {
                let local = linalg::sub(*p, shift);
                *p = project_onto_polyline(local, &patch.polyline).0;
            }
            anchor = z;
        }
        if pts.iter().any(|p| !(p[0].is_finite() && p[1].is_finite())) {
            return Err(Error::OrbitEscape { index: n as i64 });
        }
        let d = diameter(&pts);
        if d < floor {
            break;
        }
        out.push((n, d / d0));
    }
    Ok(out)
}

/// Envelope `ratio(n) ≤ C̄ e^{−ζ̄ n}` over a contraction profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContractionFit {
    pub c_bar: f64,
    pub zeta_bar: f64,
    /// Of the least-squares line through `(n, log ratio)`.
    pub r2: f64,
    /// Largest `|log ratio − fitted line|`.
    pub max_residual: f64,
}

/// `ζ̄` is minus the least-squares slope of `log ratio(n)`; `C̄` is the
/// smallest constant making the bound hold at every measured `n`.
pub fn fit_contraction(profile: &[(usize, f64)]) -> Result<ContractionFit> {
    let pts: Vec<(f64, f64)> = profile
        .iter()
        .filter(|(_, r)| *r > 0.0)
        .map(|(n, r)| (*n as f64, math::ln(*r)))
        .collect();
    if pts.len() < 3 {
        return Err(Error::InsufficientData {
            needed: 3,
            got: pts.len(),
        });
    }
    let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let line = fit::linear_fit(&xs, &ys)?;
    let zeta_bar = -line.slope;
    let log_c = pts
        .iter()
        .map(|(n, y)| y + zeta_bar * n)
        .fold(f64::NEG_INFINITY, f64::max);
    let max_residual = pts
        .iter()
        .map(|(n, y)| (y - line.intercept - line.slope * n).abs())
        .fold(0.0, f64::max);
    Ok(ContractionFit {
        c_bar: math::exp(log_c),
        zeta_bar,
        r2: line.r2,
        max_residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    /// Intersection point, wrapped into the domain.
    pub point: Point,
    /// Acute angle between the crossing segments.
    pub angle: f64,
    pub unstable_segment: usize,
    pub stable_segment: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Intersections {
    pub transverse: Vec<Crossing>,
    /// Crossings flatter than `min_angle`.
    pub near_tangent: Vec<Crossing>,
}

fn segment_crossing(a: Point, b: Point, c: Point, d: Point) -> Option<(Point, f64)> {
    let r = linalg::sub(b, a);
    let s = linalg::sub(d, c);
    let denom = linalg::cross(r, s);
    let scale = linalg::norm(r) * linalg::norm(s);
    if scale == 0.0 || denom.abs() <= 1e-14 * scale {
        return None;
    }
    let ac = linalg::sub(c, a);
    let t = linalg::cross(ac, s) / denom;
    let u = linalg::cross(ac, r) / denom;
    if !(0.0..=1.0).contains(&t) || !(0.0..=1.0).contains(&u) {
        return None;
    }
    Some((linalg::add(a, linalg::scale(r, t)), linalg::acute_angle(r, s)))
}

fn translations(domain: Domain) -> &'static [Vec2] {
    const TORUS: [Vec2; 9] = [
        [0.0, 0.0],
        [-1.0, -1.0],
        [-1.0, 0.0],
        [-1.0, 1.0],
        [0.0, -1.0],
        [0.0, 1.0],
        [1.0, -1.0],
        [1.0, 0.0],
        [1.0, 1.0],
    ];
    match domain {
        Domain::Torus => &TORUS,
        Domain::Plane => &TORUS[..1],
    }
}

/// Segments moved so their start lies in the fundamental domain.
fn canonical_segments(domain: Domain, poly: &[Point]) -> Vec<(Point, Point)> {
    poly.windows(2)
        .map(|w| {
            let a = domain.wrap(w[0]);
            (a, linalg::add(a, linalg::sub(w[1], w[0])))
        })
        .collect()
}

struct Collector {
    domain: Domain,
    min_angle: f64,
    merge: f64,
    exclude: Option<(Point, f64)>,
    out: Intersections,
}

impl Collector {
    fn offer(&mut self, p: Point, angle: f64, iu: usize, is: usize) {
        let p = self.domain.wrap(p);
        if let Some((anchor, r)) = self.exclude {
            if self.domain.distance(p, anchor) <= r {
                return;
            }
        }
        let c = Crossing {
            point: p,
            angle,
            unstable_segment: iu,
            stable_segment: is,
        };
        let list = if angle >= self.min_angle {
            &mut self.out.transverse
        } else {
            &mut self.out.near_tangent
        };
        if list.iter().all(|q| self.domain.distance(q.point, p) > self.merge) {
            list.push(c);
        }
    }

    fn finish(mut self) -> Intersections {
        let key = |c: &Crossing| (c.unstable_segment, c.stable_segment);
        self.out.transverse.sort_by_key(key);
        self.out.near_tangent.sort_by_key(key);
        self.out
    }
}

fn collector(domain: Domain, u: &ManifoldPatch, s: &ManifoldPatch, min_angle: f64) -> Collector {
    // A shared anchor is an intersection of every W^u with its W^s and is
    // not a homoclinic point.
    let shared = domain.distance(u.anchor.z, s.anchor.z) < 1e-9;
    Collector {
        domain,
        min_angle,
        merge: u.max_segment.max(s.max_segment),
        exclude: shared.then_some((u.anchor.z, 2.0 * SEED_LENGTH)),
        out: Intersections::default(),
    }
}

/// Crossings between an unstable and a stable patch, merged within `h`.
/// Segments are bucketed on a grid of cell size `h`; on the torus every
/// candidate pair is tested in all nine neighbouring translates.
pub fn find_transverse_intersections(
    domain: Domain,
    unstable: &ManifoldPatch,
    stable: &ManifoldPatch,
    min_angle: f64,
) -> Intersections {
    let su = canonical_segments(domain, &unstable.polyline);
    let ss = canonical_segments(domain, &stable.polyline);
    let mut col = collector(domain, unstable, stable, min_angle);
    let cell = unstable.max_segment.max(stable.max_segment).max(1e-9);
    let key = |x: f64, y: f64| -> (i64, i64) {
        let (i, j) = (math::floor(x / cell) as i64, math::floor(y / cell) as i64);
        match domain {
            Domain::Torus => {
                let n = (math::floor(1.0 / cell) as i64).max(1);
                (i.rem_euclid(n), j.rem_euclid(n))
            }
            Domain::Plane => (i, j),
        }
    };
    let cells_of = |a: Point, b: Point| {
        let (x0, x1) = (a[0].min(b[0]), a[0].max(b[0]));
        let (y0, y1) = (a[1].min(b[1]), a[1].max(b[1]));
        let (i0, i1) = (math::floor(x0 / cell) as i64, math::floor(x1 / cell) as i64);
        let (j0, j1) = (math::floor(y0 / cell) as i64, math::floor(y1 / cell) as i64);
        let mut v = Vec::new();
        for i in i0 - 1..=i1 + 1 {
            for j in j0 - 1..=j1 + 1 {
                v.push(key(i as f64 * cell + 0.5 * cell, j as f64 * cell + 0.5 * cell));
            }
        }
        v
    };
    let mut grid: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
    for (k, (a, b)) in ss.iter().enumerate() {
        for c in cells_of(*a, *b) {
            grid.entry(c).or_default().push(k);
        }
    }
    let mut candidates = Vec::new();
    for (iu, (a, b)) in su.iter().enumerate() {
        candidates.clear();
        for c in cells_of(*a, *b) {
            if let Some(v) = grid.get(&c) {
                candidates.extend_from_slice(v);
            }
        }
        candidates.sort_unstable();
        candidates.dedup();
        for &is in &candidates {
            let (c, d) = ss[is];
            for t in translations(domain) {
                if let Some((p, ang)) = segment_crossing(*a, *b, linalg::add(c, *t), linalg::add(d, *t)) {
                    col.offer(p, ang, iu, is);
                }
            }
        }
    }
    col.finish()
}

/// All-pairs version of [`find_transverse_intersections`].
pub fn find_transverse_intersections_brute(
    domain: Domain,
    unstable: &ManifoldPatch,
    stable: &ManifoldPatch,
    min_angle: f64,
) -> Intersections {
    let su = canonical_segments(domain, &unstable.polyline);
    let ss = canonical_segments(domain, &stable.polyline);
    let mut col = collector(domain, unstable, stable, min_angle);
    for (iu, (a, b)) in su.iter().enumerate() {
        for (is, (c, d)) in ss.iter().enumerate() {
            for t in translations(domain) {
                if let Some((p, ang)) = segment_crossing(*a, *b, linalg::add(*c, *t), linalg::add(*d, *t)) {
                    col.offer(p, ang, iu, is);
                }
            }
        }
    }
    col.finish()
}

/// Fraction of the `grid_n × grid_n` cells of the torus met by the patch.
pub fn closure_coverage(system: &MapSystem, patch: &ManifoldPatch, grid_n: usize) -> Result<f64> {
    if system.domain() != Domain::Torus {
        return Err(Error::DomainUnsupported);
    }
    if grid_n == 0 {
        return Err(invalid("grid_n must be positive"));
    }
    let n = grid_n as i64;
    let mut hit = alloc::vec![false; grid_n * grid_n];
    let mut mark = |i: i64, j: i64| {
        hit[(i.rem_euclid(n) * n + j.rem_euclid(n)) as usize] = true;
    };
    let g = grid_n as f64;
    let first = patch.polyline[0];
    mark(math::floor(first[0] * g) as i64, math::floor(first[1] * g) as i64);
    for w in patch.polyline.windows(2) {
        traverse_cells([w[0][0] * g, w[0][1] * g], [w[1][0] * g, w[1][1] * g], &mut mark);
    }
    Ok(hit.iter().filter(|h| **h).count() as f64 / (grid_n * grid_n) as f64)
}

// Unit-grid cells met by the segment from a to b (Amanatides-Woo walk).
fn traverse_cells(a: Point, b: Point, mark: &mut impl FnMut(i64, i64)) {
    let mut i = math::floor(a[0]) as i64;
    let mut j = math::floor(a[1]) as i64;
    let (ie, je) = (math::floor(b[0]) as i64, math::floor(b[1]) as i64);
    mark(i, j);
    let d = linalg::sub(b, a);
    let step_i = if d[0] > 0.0 { 1 } else { -1 };
    let step_j = if d[1] > 0.0 { 1 } else { -1 };
    let next = |c: i64, s: i64, p: f64, dp: f64| -> (f64, f64) {
        if dp == 0.0 {
            return (f64::INFINITY, f64::INFINITY);
        }
        let boundary = if s > 0 { (c + 1) as f64 } else { c as f64 };
        ((boundary - p) / dp, 1.0 / dp.abs())
    };
    let (mut tx, dtx) = next(i, step_i, a[0], d[0]);
    let (mut ty, dty) = next(j, step_j, a[1], d[1]);
    let limit = (ie - i).abs() + (je - j).abs();
    for _ in 0..limit {
        if tx.min(ty) > 1.0 {
            break;
        }
        if tx < ty {
            i += step_i;
            tx += dtx;
        } else {
            j += step_j;
            ty += dty;
        }
        mark(i, j);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shadowing::close_orbit;

    fn lambda() -> f64 {
        (3.0 + 5f64.sqrt()) / 2.0
    }

    fn origin(system: &MapSystem) -> PeriodicPoint {
        close_orbit(system, [1e-9, 1e-9], 1, 1e-13, 20).unwrap()
    }

    #[test]
    fn seed_only_when_target_is_tiny() {
        let cat = MapSystem::cat();
        let p = grow_manifold(&cat, &origin(&cat), ManifoldKind::Unstable, 1e-6, 0.01).unwrap();
        assert_eq!(p.generation, 0);
        assert_eq!(p.polyline.len(), 2);
        assert!((p.total_length - 1e-6).abs() < 1e-18);
    }

    #[test]
    fn cat_unstable_is_the_eigenline() {
        let cat = MapSystem::cat();
        let p = grow_manifold(&cat, &origin(&cat), ManifoldKind::Unstable, 10.0, 0.05).unwrap();
        assert_eq!(p.status, GrowthStatus::Complete);
        assert!((p.total_length - 10.0).abs() < 1e-9);
        let slope = (5f64.sqrt() - 1.0) / 2.0;
        let z = p.polyline[0];
        for q in &p.polyline {
            assert!((q[1] - z[1] - slope * (q[0] - z[0])).abs() < 1e-9);
        }
        for w in p.generation_lengths.windows(2) {
            assert!((w[1] / w[0] - lambda()).abs() < 1e-3);
        }
        assert!(p
            .polyline
            .windows(2)
            .all(|w| linalg::norm(linalg::sub(w[1], w[0])) <= 0.05 + 1e-12));
    }

    #[test]
    fn tangent_matches_floquet_direction() {
        let sys = MapSystem::perturbed_cat(0.05).unwrap();
        let a = origin(&sys);
        for kind in [ManifoldKind::Stable, ManifoldKind::Unstable] {
            let p = grow_manifold(&sys, &a, kind, 0.5, 0.01).unwrap();
            let v = floquet_direction(&sys, &a, kind).unwrap();
            assert!(linalg::acute_angle(p.tangent(), v) < 1e-4);
            assert!(sys.distance(p.polyline[0], a.z) < 1e-10);
        }
    }

    #[test]
    fn cat_stable_profile_is_exact() {
        let cat = MapSystem::cat();
        let p = grow_manifold(&cat, &origin(&cat), ManifoldKind::Stable, 0.5, 0.01).unwrap();
        let prof = contraction_profile(&cat, &p, 40).unwrap();
        assert_eq!(prof[0], (0, 1.0));
        for (n, r) in prof {
            assert!((r - lambda().powi(-(n as i32))).abs() < 1e-9, "n={n}");
        }
    }

    #[test]
    fn perturbed_stable_patch_contracts() {
        let sys = MapSystem::perturbed_cat(0.05).unwrap();
        let p = grow_manifold(&sys, &origin(&sys), ManifoldKind::Stable, 0.3, 0.005).unwrap();
        let prof = contraction_profile(&sys, &p, 40).unwrap();
        let f = fit_contraction(&prof).unwrap();
        for (n, r) in &prof {
            assert!(*r <= f.c_bar * (-f.zeta_bar * *n as f64).exp() * (1.0 + 1e-12));
        }
        assert!(f.zeta_bar >= 0.8, "{f:?}");
        assert!(f.c_bar <= 2.0, "{f:?}");
    }

    #[test]
    fn stable_patch_is_locally_invariant() {
        let sys = MapSystem::perturbed_cat(0.05).unwrap();
        let h = 0.01;
        let p = grow_manifold(&sys, &origin(&sys), ManifoldKind::Stable, 0.5, h).unwrap();
        let img: Vec<Point> = p.polyline.iter().map(|q| sys.lift_forward(*q)).collect();
        assert!(one_sided_distance(&img, &p.polyline) <= 2.0 * h);
    }

    #[test]
    fn stable_of_f_is_unstable_of_inverse() {
        let sys = MapSystem::perturbed_cat(0.05).unwrap();
        let inv = sys.inverse_system();
        let h = 0.01;
        let s = grow_manifold(&sys, &origin(&sys), ManifoldKind::Stable, 0.8, h).unwrap();
        let u = grow_manifold(&inv, &origin(&inv), ManifoldKind::Unstable, 0.8, h).unwrap();
        assert!(hausdorff_distance(&s.polyline, &u.polyline) <= 2.0 * h);
    }

    #[test]
    fn cat_homoclinic_crossings_are_orthogonal() {
        let cat = MapSystem::cat();
        let a = origin(&cat);
        let u = grow_manifold(&cat, &a, ManifoldKind::Unstable, 3.0, 0.05).unwrap();
        let s = grow_manifold(&cat, &a, ManifoldKind::Stable, 3.0, 0.05).unwrap();
        let fast = find_transverse_intersections(Domain::Torus, &u, &s, DEFAULT_MIN_ANGLE);
        let slow = find_transverse_intersections_brute(Domain::Torus, &u, &s, DEFAULT_MIN_ANGLE);
        assert!(!fast.transverse.is_empty());
        assert_eq!(fast, slow);
        for c in &fast.transverse {
            assert!((c.angle - math::PI / 2.0).abs() < 1e-6);
            assert!(cat.distance(c.point, a.z) > 1e-3);
        }
    }

    #[test]
    fn identical_and_disjoint_patches() {
        let cat = MapSystem::cat();
        let a = origin(&cat);
        let u = grow_manifold(&cat, &a, ManifoldKind::Unstable, 1.0, 0.05).unwrap();
        let r = find_transverse_intersections(Domain::Torus, &u, &u, DEFAULT_MIN_ANGLE);
        assert!(r.transverse.is_empty());
        let short_u = grow_manifold(&cat, &a, ManifoldKind::Unstable, 0.1, 0.05).unwrap();
        let short_s = grow_manifold(&cat, &a, ManifoldKind::Stable, 0.1, 0.05).unwrap();
        let r = find_transverse_intersections(Domain::Torus, &short_u, &short_s, DEFAULT_MIN_ANGLE);
        assert!(r.transverse.is_empty());
    }

    #[test]
    fn coverage_grows_and_fills() {
        let cat = MapSystem::cat();
        let a = origin(&cat);
        let mut prev = 0.0;
        for len in [1e-6, 10.0, 20.0, 40.0, 80.0] {
            let u = grow_manifold(&cat, &a, ManifoldKind::Unstable, len, 0.1).unwrap();
            let c = closure_coverage(&cat, &u, 64).unwrap();
            assert!(c >= prev);
            prev = c;
        }
        let seed = grow_manifold(&cat, &a, ManifoldKind::Unstable, 1e-6, 0.1).unwrap();
        assert_eq!(closure_coverage(&cat, &seed, 64).unwrap(), 1.0 / 4096.0);
        let u = grow_manifold(&cat, &a, ManifoldKind::Unstable, 1e3, 0.1).unwrap();
        assert!(closure_coverage(&cat, &u, 64).unwrap() >= 0.99);
    }

    #[test]
    fn plane_coverage_is_unsupported() {
        let h = MapSystem::henon(1.4, 0.3).unwrap();
        let a = close_orbit(&h, [0.63, 0.19], 1, 1e-12, 30).unwrap();
        let u = grow_manifold(&h, &a, ManifoldKind::Unstable, 0.5, 0.01).unwrap();
        assert!(matches!(
            closure_coverage(&h, &u, 16),
            Err(Error::DomainUnsupported)
        ));
    }

    #[test]
    fn elliptic_anchor_is_rejected() {
        let sys = MapSystem::standard(0.9).unwrap();
        let a = close_orbit(&sys, [0.5, 1e-4], 1, 1e-12, 20).unwrap();
        assert!(matches!(
            grow_manifold(&sys, &a, ManifoldKind::Unstable, 1.0, 0.01),
            Err(Error::NonHyperbolicAnchor { .. })
        ));
    }
}
