use alloc::boxed::Box;
use alloc::vec::Vec;

use super::pseudo::PseudoOrbit;
use crate::cocycle::{line_log_growth, FactoredProduct};
use crate::dynsys::MapSystem;
use crate::error::{invalid, Error, Result};
use crate::fit::fit_rates;
use crate::linalg::{self, Mat2, Point, Vec2};
use crate::math;
use crate::sparse::SparseSystem;

/// Newton corrections larger than this (max norm per point) count as
/// divergence.
pub const MAX_STEP: f64 = 0.25;

pub const MAX_HALVINGS: usize = 30;

const MAX_WINDOW: usize = 100_000;

/// `ρ(y_{cᵢ+j}, f^j(xᵢ))` for one `(i, j)` pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Deviation {
    pub segment: i64,
    pub j: usize,
    /// `min(j, nᵢ − j)`.
    pub separation: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShadowResult {
    /// `y₀ … y_N`; for periodic windows `y_N = y₀` is not repeated.
    pub orbit: Vec<Point>,
    pub periodic: bool,
    /// Global orbit index of `orbit[0]` (the offset of the first segment).
    pub first_offset: i64,
    /// `max_j ρ(f(y_j), y_{j+1})`, cyclic for periodic windows.
    pub orbit_residual: f64,
    pub deviations: Vec<Deviation>,
    /// Largest deviation.
    pub eta: f64,
    /// Decay rate fitted to the deviations (0 when no fit is possible).
    pub theta: f64,
    pub newton_iterations: usize,
    pub converged: bool,
}

impl ShadowResult {
    pub fn max_deviation(&self) -> f64 {
        self.eta
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShadowVerdict {
    pub pass: bool,
    pub worst_margin: f64,
    /// `η e^{−min(j, nᵢ−j)θ} − deviation(i, j)`, in the order of
    /// `result.deviations`.
    pub margins: Vec<f64>,
}

/// Checks `ρ(f^{cᵢ+j}(y), f^j(xᵢ)) < η e^{−min(j, nᵢ−j)θ}` for every
/// recorded pair.
pub fn verify_exponential_shadowing(result: &ShadowResult, eta: f64, theta: f64) -> ShadowVerdict {
    let margins: Vec<f64> = result
        .deviations
        .iter()
        .map(|d| eta * math::exp(-(d.separation as f64) * theta) - d.value)
        .collect();
    let worst_margin = margins.iter().copied().fold(f64::INFINITY, f64::min);
    ShadowVerdict {
        pass: margins.iter().all(|m| *m > 0.0),
        worst_margin,
        margins,
    }
}

struct Window<'a> {
    system: &'a MapSystem,
    periodic: bool,
}

impl Window<'_> {
    fn equations(&self, y: &[Point]) -> usize {
        if self.periodic {
            y.len()
        } else {
            y.len() - 1
        }
    }

    /// `r_j = f(y_j) − y_{j+1}` as a shortest displacement.
    fn residuals(&self, y: &[Point]) -> Option<Vec<Vec2>> {
        let domain = self.system.domain();
        let n = y.len();
        let mut r = Vec::with_capacity(n);
        for j in 0..self.equations(y) {
            let fy = self.system.forward(y[j]);
            if self.system.escaped(fy) {
                return None;
            }
            r.push(domain.displacement(y[(j + 1) % n], fy));
        }
        Some(r)
    }

    fn column(&self, n_points: usize, j: usize) -> usize {
        if self.periodic {
            // Δ₀ goes last so that the cyclic corner becomes a border column.
            2 * ((j + n_points - 1) % n_points)
        } else {
            2 * j
        }
    }

    fn solve(&self, y: &[Point], r: &[Vec2]) -> Result<Vec<Vec2>> {
        let n = y.len();
        let jacs: Vec<Mat2> = y[..self.equations(y)]
            .iter()
            .map(|p| self.system.jacobian(*p))
            .collect();
        let mut sys = SparseSystem::new(2 * n);
        if !self.periodic {
            let (left, right) = boundary_functionals(&jacs)?;
            let c0 = self.column(n, 0);
            sys.push_row(alloc::vec![(c0, left[0]), (c0 + 1, left[1])], 0.0);
            for (j, jac) in jacs.iter().enumerate() {
                self.push_block(&mut sys, n, j, jac, r[j]);
            }
            let cn = self.column(n, n - 1);
            sys.push_row(alloc::vec![(cn, right[0]), (cn + 1, right[1])], 0.0);
        } else {
            for (j, jac) in jacs.iter().enumerate() {
                self.push_block(&mut sys, n, j, jac, r[j]);
            }
        }
        let x = sys.solve()?;
        Ok((0..n)
            .map(|j| {
                let c = self.column(n, j);
                [x[c], x[c + 1]]
            })
            .collect())
    }

    // Df(y_j) Δ_j − Δ_{j+1} = −r_j
    fn push_block(&self, sys: &mut SparseSystem, n: usize, j: usize, jac: &Mat2, r: Vec2) {
        let cj = self.column(n, j);
        let cn = self.column(n, (j + 1) % n);
        for row in 0..2 {
            sys.push_row(
                alloc::vec![(cj, jac.m[row][0]), (cj + 1, jac.m[row][1]), (cn + row, -1.0),],
                -r[row],
            );
        }
    }
}

// Free-boundary closure of a finite window: the correction at the start has
// no component along the most contracted initial direction, and the
// correction at the end none along the most expanded final direction.
fn boundary_functionals(jacs: &[Mat2]) -> Result<(Vec2, Vec2)> {
    let product = FactoredProduct::from_jacobians(jacs)?;
    let top = product.scaled().normalized.top_right_singular_vector();
    let (_, image) = line_log_growth(jacs, top)?;
    Ok((linalg::perp(top), image))
}

fn max_norm(v: &[Vec2]) -> f64 {
    v.iter().map(|d| linalg::norm(*d)).fold(0.0, f64::max)
}

/// Damped Newton multiple shooting: refines the concatenated pseudo-orbit to
/// a true orbit (periodic when the pseudo-orbit is).
pub fn newton_shadow(
    system: &MapSystem,
    pseudo: &PseudoOrbit,
    tol: f64,
    max_iter: usize,
) -> Result<ShadowResult> {
    let total = pseudo.total_length();
    if total > MAX_WINDOW {
        return Err(invalid("pseudo-orbit window longer than 100000 iterates"));
    }
    let offsets = pseudo.offsets()?;
    let periodic = pseudo.is_periodic();
    let domain = system.domain();

    // Segment orbits f^j(xᵢ), 0 ≤ j ≤ nᵢ.
    let mut pieces = Vec::with_capacity(pseudo.segments.len());
    for (x, n) in &pseudo.segments {
        pieces.push(system.orbit(*x, *n)?);
    }
    let mut y: Vec<Point> = Vec::with_capacity(total + 1);
    for (piece, (_, n)) in pieces.iter().zip(&pseudo.segments) {
        y.extend_from_slice(&piece[..*n]);
    }
    if !periodic {
        let last = pieces.last().expect("non-empty");
        y.push(last[last.len() - 1]);
    }

    let window = Window { system, periodic };
    let mut r = window
        .residuals(&y)
        .ok_or(Error::OrbitEscape { index: offsets[0] })?;
    let mut res = max_norm(&r);
    let mut iterations = 0;
    let finish = |y: Vec<Point>, iterations: usize, converged: bool| {
        assemble(system, pseudo, &pieces, &offsets, y, iterations, converged)
    };
    while !(res < tol) {
        if iterations >= max_iter {
            return Err(diverged(finish(y, iterations, false)));
        }
        let step = window.solve(&y, &r)?;
        iterations += 1;
        if !(max_norm(&step) <= MAX_STEP) {
            return Err(diverged(finish(y, iterations, false)));
        }
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let trial: Vec<Point> = y
                .iter()
                .zip(&step)
                .map(|(p, d)| domain.wrap(linalg::add(*p, linalg::scale(*d, t))))
                .collect();
            if let Some(tr) = window.residuals(&trial) {
                let tres = max_norm(&tr);
                if tres < res {
                    accepted = Some((trial, tr, tres));
                    break;
                }
            }
            t *= 0.5;
        }
        match accepted {
            Some((ny, nr, nres)) => {
                y = ny;
                r = nr;
                res = nres;
            }
            None => return Err(diverged(finish(y, iterations, false))),
        }
    }
    Ok(finish(y, iterations, true))
}

fn diverged(best: ShadowResult) -> Error {
    Error::NewtonDiverged {
        iterations: best.newton_iterations,
        residual: best.orbit_residual,
        best: Box::new(best),
    }
}

fn assemble(
    system: &MapSystem,
    pseudo: &PseudoOrbit,
    pieces: &[Vec<Point>],
    offsets: &[i64],
    y: Vec<Point>,
    iterations: usize,
    converged: bool,
) -> ShadowResult {
    let n = y.len();
    let base = offsets[0];
    let mut deviations = Vec::new();
    for (k, piece) in pieces.iter().enumerate() {
        let len = pseudo.segments[k].1;
        for (j, reference) in piece.iter().enumerate() {
            let pos = (offsets[k] - base) as usize + j;
            let pos = if pseudo.is_periodic() { pos % n } else { pos };
            deviations.push(Deviation {
                segment: pseudo.first_index + k as i64,
                j,
                separation: j.min(len - j),
                value: system.distance(y[pos], *reference),
            });
        }
    }
    let eta = deviations.iter().map(|d| d.value).fold(0.0, f64::max);
    let samples: Vec<(usize, f64)> = deviations.iter().map(|d| (d.separation, d.value)).collect();
    let theta = fit_rates(&samples).map(|f| f.theta).unwrap_or(0.0);
    let orbit_residual = residual_distance(system, &y, pseudo.is_periodic());
    ShadowResult {
        orbit: y,
        periodic: pseudo.is_periodic(),
        first_offset: base,
        orbit_residual,
        deviations,
        eta,
        theta,
        newton_iterations: iterations,
        converged,
    }
}

fn residual_distance(system: &MapSystem, y: &[Point], periodic: bool) -> f64 {
    let n = y.len();
    let m = if periodic { n } else { n - 1 };
    (0..m)
        .map(|j| system.distance(system.forward(y[j]), y[(j + 1) % n]))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shadowing::pseudo::{build_recurrent_pseudo_orbit, RecurrenceOptions};

    fn perturbed_pseudo(system: &MapSystem, x: Point, segs: usize, len: usize, kick: f64) -> PseudoOrbit {
        let mut segments = Vec::new();
        let mut p = x;
        for s in 0..segs {
            if s > 0 {
                p = system.domain().wrap([p[0] + kick, p[1] - 0.5 * kick]);
            }
            segments.push((p, len));
            p = system.iterate(p, len).unwrap();
        }
        PseudoOrbit::from_segments(system, segments, false, 2.0 * kick + 1e-15).unwrap()
    }

    #[test]
    fn exact_orbit_needs_no_correction() {
        let cat = MapSystem::cat();
        let opts = RecurrenceOptions::new(1e-3, 5, 4);
        let p = build_recurrent_pseudo_orbit(&cat, [0.3, 0.4], &|_| true, None, &opts).unwrap();
        let r = newton_shadow(&cat, &p, 1e-10, 10).unwrap();
        assert_eq!(r.newton_iterations, 0);
        assert!(r.deviations.iter().all(|d| d.value == 0.0));
        assert_eq!(r.deviations.len(), 4 * 6);
        let v = verify_exponential_shadowing(&r, 1e-9, 0.3);
        assert!(v.pass);
    }

    #[test]
    fn cat_converges_in_one_step() {
        let cat = MapSystem::cat();
        for kick in [1e-3, 1e-5] {
            let p = perturbed_pseudo(&cat, [0.123, 0.654], 5, 12, kick);
            let r = newton_shadow(&cat, &p, 1e-10, 10).unwrap();
            assert_eq!(r.newton_iterations, 1);
            assert!(r.orbit_residual < 1e-10);
            assert!(r.eta < 5.0 * kick);
        }
    }

    #[test]
    fn perturbed_cat_converges() {
        let sys = MapSystem::perturbed_cat(0.05).unwrap();
        let p = perturbed_pseudo(&sys, [0.81, 0.27], 6, 15, 1e-4);
        let r = newton_shadow(&sys, &p, 1e-11, 20).unwrap();
        assert!(r.converged && r.orbit_residual < 1e-11);
        assert!(r.eta < 1e-3);
        // refining a true orbit again moves nothing
        let segments: Vec<(Point, usize)> = r.orbit[..r.orbit.len() - 1].iter().map(|y| (*y, 1)).collect();
        let again = PseudoOrbit::from_segments(&sys, segments, false, 1e-6).unwrap();
        let r2 = newton_shadow(&sys, &again, 1e-11, 20).unwrap();
        assert_eq!(r2.newton_iterations, 0);
        for (a, b) in r.orbit.iter().zip(&r2.orbit) {
            assert!(sys.distance(*a, *b) <= 1e-11);
        }
    }

    #[test]
    fn too_many_iterations_reports_best() {
        let sys = MapSystem::perturbed_cat(0.05).unwrap();
        let p = perturbed_pseudo(&sys, [0.81, 0.27], 4, 10, 1e-4);
        match newton_shadow(&sys, &p, 1e-300, 2) {
            Err(Error::NewtonDiverged { iterations, best, .. }) => {
                assert_eq!(iterations, 2);
                assert!(best.orbit_residual < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn theta_zero_is_plain_shadowing() {
        let cat = MapSystem::cat();
        let p = perturbed_pseudo(&cat, [0.2, 0.9], 3, 10, 1e-4);
        let r = newton_shadow(&cat, &p, 1e-10, 5).unwrap();
        let v = verify_exponential_shadowing(&r, r.eta * 1.01, 0.0);
        assert!(v.pass);
        let w = verify_exponential_shadowing(&r, r.eta * 0.99, 0.0);
        assert!(!w.pass && w.worst_margin < 0.0);
    }
}
