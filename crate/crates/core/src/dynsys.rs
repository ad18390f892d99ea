//! Built-in surface diffeomorphisms with exact Jacobians and inverses.
//!
//! Torus systems act on the unit square with coordinates taken mod 1; every
//! public entry point wraps its result back into `[0, 1)²`. The `lift_*`
//! functions expose the map on the universal cover `R²`, which the manifold
//! and shadowing code need to keep polylines and corrections continuous.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{self, Mat2, Point, Vec2};
use crate::math;

/// Norm above which a plane orbit is declared to have escaped.
pub const ESCAPE_RADIUS: f64 = 10.0;

const BOUND_GRID: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// Unit square with opposite sides identified.
    Torus,
    Plane,
}

impl Domain {
    /// Canonical representative; torus coordinates land in `[0, 1)`.
    pub fn wrap(&self, p: Point) -> Point {
        match self {
            Domain::Plane => p,
            Domain::Torus => [wrap_unit(p[0]), wrap_unit(p[1])],
        }
    }

    /// Shortest displacement vector from `from` to `to`.
    pub fn displacement(&self, from: Point, to: Point) -> Vec2 {
        let d = linalg::sub(to, from);
        match self {
            Domain::Plane => d,
            Domain::Torus => [d[0] - math::round(d[0]), d[1] - math::round(d[1])],
        }
    }

    pub fn distance(&self, a: Point, b: Point) -> f64 {
        match self {
            Domain::Plane => linalg::norm(linalg::sub(a, b)),
            Domain::Torus => {
                let dx = math::abs(a[0] - b[0]) % 1.0;
                let dy = math::abs(a[1] - b[1]) % 1.0;
                math::hypot(dx.min(1.0 - dx), dy.min(1.0 - dy))
            }
        }
    }
}

fn wrap_unit(x: f64) -> f64 {
    let w = x - math::floor(x);
    // x slightly below an integer can round up to exactly 1.0
    if w >= 1.0 {
        0.0
    } else {
        w
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SystemKind {
    /// Linear automorphism `x ↦ Ax mod 1` for an integer matrix with `|det A| = 1`.
    Cat { matrix: [[i64; 2]; 2] },
    /// `x ↦ Ax + ε (sin 2πx₂, sin 2πx₁) mod 1` with `A = [[2,1],[1,1]]`.
    PerturbedCat { epsilon: f64 },
    /// `(x, y) ↦ (1 + y − a x², b x)` on the plane.
    Henon { a: f64, b: f64 },
    /// Chirikov standard map in unit-square coordinates:
    /// `y' = y + (K/2π) sin 2πx`, `x' = x + y'`.
    Standard { k: f64 },
}

pub const CAT_MATRIX: [[i64; 2]; 2] = [[2, 1], [1, 1]];

/// Names and parameter keys of the built-in systems.
pub const BUILTIN_SYSTEMS: &[(&str, &[&str], &str)] = &[
    (
        "cat",
        &[],
        "linear Anosov automorphism A=[[2,1],[1,1]] of the torus",
    ),
    (
        "perturbed_cat",
        &["epsilon"],
        "A x + epsilon (sin 2pi x2, sin 2pi x1) mod 1, default epsilon 0.05",
    ),
    (
        "henon",
        &["a", "b"],
        "Henon map on the plane, default a=1.4 b=0.3",
    ),
    (
        "standard",
        &["K_param"],
        "Chirikov standard map on the unit torus, default K_param 0.9",
    ),
];

/// An explicit diffeomorphism together with its derivative data.
#[derive(Debug, Clone, PartialEq)]
pub struct MapSystem {
    name: String,
    kind: SystemKind,
    inverted: bool,
    domain: Domain,
    parameters: Vec<(String, f64)>,
    derivative_bound: f64,
    stable_index: usize,
}

impl MapSystem {
    pub fn cat() -> Self {
        Self::build("cat", SystemKind::Cat { matrix: CAT_MATRIX }, Vec::new())
    }

    pub fn cat_with_matrix(matrix: [[i64; 2]; 2]) -> Result<Self> {
        let det = matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0];
        if det.abs() != 1 {
            return Err(Error::InvalidSystem(format!(
                "torus automorphism needs |det| = 1, got {det}"
            )));
        }
        let tr = matrix[0][0] + matrix[1][1];
        // hyperbolic iff no eigenvalue on the unit circle
        if (det == 1 && tr.abs() <= 2) || (det == -1 && tr == 0) {
            return Err(Error::InvalidSystem(
                "torus automorphism is not hyperbolic".to_string(),
            ));
        }
        Ok(Self::build("cat", SystemKind::Cat { matrix }, Vec::new()))
    }

    pub fn perturbed_cat(epsilon: f64) -> Result<Self> {
        if !epsilon.is_finite() || epsilon.abs() > 0.1 {
            return Err(Error::InvalidSystem(format!(
                "perturbed_cat epsilon must lie in [-0.1, 0.1], got {epsilon}"
            )));
        }
        Ok(Self::build(
            "perturbed_cat",
            SystemKind::PerturbedCat { epsilon },
            alloc::vec![("epsilon".to_string(), epsilon)],
        ))
    }

    pub fn henon(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() || b == 0.0 {
            return Err(Error::InvalidSystem(format!(
                "henon needs finite a and nonzero b, got a={a} b={b}"
            )));
        }
        Ok(Self::build(
            "henon",
            SystemKind::Henon { a, b },
            alloc::vec![("a".to_string(), a), ("b".to_string(), b)],
        ))
    }

    pub fn standard(k: f64) -> Result<Self> {
        if !k.is_finite() {
            return Err(Error::InvalidSystem("standard map K must be finite".to_string()));
        }
        Ok(Self::build(
            "standard",
            SystemKind::Standard { k },
            alloc::vec![("K_param".to_string(), k)],
        ))
    }

    /// Looks a system up by identifier. Missing parameters take their
    /// defaults; unknown parameter keys are rejected.
    pub fn from_name(name: &str, params: &[(String, f64)]) -> Result<Self> {
        let Some((_, keys, _)) = BUILTIN_SYSTEMS.iter().find(|(n, _, _)| *n == name) else {
            return Err(Error::InvalidSystem(format!("unknown system '{name}'")));
        };
        for (k, _) in params {
            if !keys.contains(&k.as_str()) {
                return Err(Error::InvalidSystem(format!(
                    "system '{name}' has no parameter '{k}'"
                )));
            }
        }
        let get = |key: &str, default: f64| {
            params
                .iter()
                .find(|(k, _)| k == key)
                .map(|(_, v)| *v)
                .unwrap_or(default)
        };
        match name {
            "cat" => Ok(Self::cat()),
            "perturbed_cat" => Self::perturbed_cat(get("epsilon", 0.05)),
            "henon" => Self::henon(get("a", 1.4), get("b", 0.3)),
            "standard" => Self::standard(get("K_param", 0.9)),
            _ => unreachable!(),
        }
    }

    fn build(name: &str, kind: SystemKind, parameters: Vec<(String, f64)>) -> Self {
        let domain = match kind {
            SystemKind::Henon { .. } => Domain::Plane,
            _ => Domain::Torus,
        };
        let mut sys = Self {
            name: name.to_string(),
            kind,
            inverted: false,
            domain,
            parameters,
            derivative_bound: 1.0,
            stable_index: 1,
        };
        sys.derivative_bound = sys.compute_derivative_bound();
        sys
    }

    /// The same diffeomorphism run backwards: its forward map is `f⁻¹`.
    pub fn inverse_system(&self) -> Self {
        let mut inv = self.clone();
        inv.inverted = !self.inverted;
        inv.name = if self.inverted {
            self.name.trim_end_matches("^-1").to_string()
        } else {
            format!("{}^-1", self.name)
        };
        inv
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &SystemKind {
        &self.kind
    }

    pub fn is_inverted(&self) -> bool {
        self.inverted
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn dimension(&self) -> usize {
        2
    }

    pub fn parameters(&self) -> &[(String, f64)] {
        &self.parameters
    }

    /// `C_f`: at least 1 and at least `max(log‖Df‖, log‖Df⁻¹‖)` over the
    /// sampling grid.
    pub fn derivative_bound(&self) -> f64 {
        self.derivative_bound
    }

    /// Dimension of the stable bundle.
    pub fn stable_index(&self) -> usize {
        self.stable_index
    }

    /// Box used for grid sampling and uniform initial conditions.
    pub fn sampling_box(&self) -> ([f64; 2], [f64; 2]) {
        match self.domain {
            Domain::Torus => ([0.0, 0.0], [1.0, 1.0]),
            Domain::Plane => ([-1.5, -0.45], [1.5, 0.45]),
        }
    }

    pub fn grid_points(&self, n: usize) -> Vec<Point> {
        let (lo, hi) = self.sampling_box();
        let mut pts = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let u = (i as f64 + 0.5) / n as f64;
                let v = (j as f64 + 0.5) / n as f64;
                pts.push([lo[0] + u * (hi[0] - lo[0]), lo[1] + v * (hi[1] - lo[1])]);
            }
        }
        pts
    }

    fn compute_derivative_bound(&self) -> f64 {
        let mut bound: f64 = 1.0;
        for p in self.grid_points(BOUND_GRID) {
            let j = self.jacobian(p);
            let (s_max, s_min) = j.singular_values();
            bound = bound.max(math::ln(s_max)).max(-math::ln(s_min));
        }
        bound
    }

    fn base_forward(&self, p: Point) -> Point {
        match self.kind {
            SystemKind::Cat { matrix } => [
                matrix[0][0] as f64 * p[0] + matrix[0][1] as f64 * p[1],
                matrix[1][0] as f64 * p[0] + matrix[1][1] as f64 * p[1],
            ],
            SystemKind::PerturbedCat { epsilon } => [
                2.0 * p[0] + p[1] + epsilon * math::sin(math::TAU * p[1]),
                p[0] + p[1] + epsilon * math::sin(math::TAU * p[0]),
            ],
            SystemKind::Henon { a, b } => [1.0 + p[1] - a * p[0] * p[0], b * p[0]],
            SystemKind::Standard { k } => {
                let y = p[1] + k / math::TAU * math::sin(math::TAU * p[0]);
                [p[0] + y, y]
            }
        }
    }

    fn base_inverse(&self, q: Point) -> Point {
        match self.kind {
            SystemKind::Cat { matrix } => {
                let det = (matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]) as f64;
                [
                    (matrix[1][1] as f64 * q[0] - matrix[0][1] as f64 * q[1]) / det,
                    (-(matrix[1][0] as f64) * q[0] + matrix[0][0] as f64 * q[1]) / det,
                ]
            }
            SystemKind::PerturbedCat { .. } => self.perturbed_cat_inverse(q),
            SystemKind::Henon { a, b } => {
                let x = q[1] / b;
                [x, q[0] - 1.0 + a * x * x]
            }
            SystemKind::Standard { k } => {
                let x = q[0] - q[1];
                [x, q[1] - k / math::TAU * math::sin(math::TAU * x)]
            }
        }
    }

    // Solves A x + ε g(x) = q on R² by Newton from A⁻¹ q; the lift is a
    // diffeomorphism of the plane so the root is unique.
    fn perturbed_cat_inverse(&self, q: Point) -> Point {
        let mut x = [q[0] - q[1], -q[0] + 2.0 * q[1]];
        for _ in 0..60 {
            let fx = self.base_forward(x);
            let r = linalg::sub(fx, q);
            let j = self.base_jacobian(x);
            let Some(ji) = j.inverse() else { break };
            let step = ji.apply(r);
            x = linalg::sub(x, step);
            if linalg::norm(step) <= 1e-16 * (1.0 + linalg::norm(x)) {
                break;
            }
        }
        x
    }

    fn base_jacobian(&self, p: Point) -> Mat2 {
        match self.kind {
            SystemKind::Cat { matrix } => Mat2::new(
                matrix[0][0] as f64,
                matrix[0][1] as f64,
                matrix[1][0] as f64,
                matrix[1][1] as f64,
            ),
            SystemKind::PerturbedCat { epsilon } => Mat2::new(
                2.0,
                1.0 + math::TAU * epsilon * math::cos(math::TAU * p[1]),
                1.0 + math::TAU * epsilon * math::cos(math::TAU * p[0]),
                1.0,
            ),
            SystemKind::Henon { a, b } => Mat2::new(-2.0 * a * p[0], 1.0, b, 0.0),
            SystemKind::Standard { k } => {
                let c = k * math::cos(math::TAU * p[0]);
                Mat2::new(1.0 + c, 1.0, c, 1.0)
            }
        }
    }

    /// Forward map on the universal cover.
    pub fn lift_forward(&self, p: Point) -> Point {
        if self.inverted {
            self.base_inverse(p)
        } else {
            self.base_forward(p)
        }
    }

    /// Inverse map on the universal cover.
    pub fn lift_inverse(&self, p: Point) -> Point {
        if self.inverted {
            self.base_forward(p)
        } else {
            self.base_inverse(p)
        }
    }

    pub fn lift_apply(&self, p: Point, direction: Direction) -> Point {
        match direction {
            Direction::Forward => self.lift_forward(p),
            Direction::Inverse => self.lift_inverse(p),
        }
    }

    /// `f(x)` or `f⁻¹(x)`, wrapped into the domain.
    pub fn apply(&self, x: Point, direction: Direction) -> Point {
        let x = self.domain.wrap(x);
        self.domain.wrap(self.lift_apply(x, direction))
    }

    pub fn forward(&self, x: Point) -> Point {
        self.apply(x, Direction::Forward)
    }

    pub fn inverse(&self, x: Point) -> Point {
        self.apply(x, Direction::Inverse)
    }

    /// Exact Jacobian of the forward map at `x`.
    pub fn jacobian(&self, x: Point) -> Mat2 {
        if self.inverted {
            let pre = self.base_inverse(x);
            self.base_jacobian(pre)
                .inverse()
                .expect("built-in maps have invertible Jacobians")
        } else {
            self.base_jacobian(x)
        }
    }

    /// Jacobian of the inverse map at `x`, i.e. `Df(f⁻¹x)⁻¹`.
    pub fn inverse_jacobian(&self, x: Point) -> Mat2 {
        if self.inverted {
            self.base_jacobian(x)
        } else {
            let pre = self.base_inverse(x);
            self.base_jacobian(pre)
                .inverse()
                .expect("built-in maps have invertible Jacobians")
        }
    }

    pub fn distance(&self, x: Point, y: Point) -> f64 {
        self.domain.distance(x, y)
    }

    pub fn escaped(&self, p: Point) -> bool {
        match self.domain {
            Domain::Torus => !(p[0].is_finite() && p[1].is_finite()),
            Domain::Plane => !(linalg::norm(p) <= ESCAPE_RADIUS),
        }
    }

    /// `[x, f(x), …, fⁿ(x)]`, or `OrbitEscape` at the first divergent iterate.
    pub fn orbit(&self, x: Point, n: usize) -> Result<Vec<Point>> {
        self.orbit_in(x, n, Direction::Forward)
    }

    /// `[x, f⁻¹(x), …, f⁻ⁿ(x)]`; escape indices are reported as negative.
    pub fn backward_orbit(&self, x: Point, n: usize) -> Result<Vec<Point>> {
        self.orbit_in(x, n, Direction::Inverse)
    }

    fn orbit_in(&self, x: Point, n: usize, direction: Direction) -> Result<Vec<Point>> {
        let sign = if direction == Direction::Forward { 1 } else { -1 };
        let mut out = Vec::with_capacity(n + 1);
        let mut p = self.domain.wrap(x);
        if self.escaped(p) {
            return Err(Error::OrbitEscape { index: 0 });
        }
        out.push(p);
        for i in 1..=n {
            p = self.apply(p, direction);
            if self.escaped(p) {
                return Err(Error::OrbitEscape {
                    index: sign * i as i64,
                });
            }
            out.push(p);
        }
        Ok(out)
    }

    pub fn iterate(&self, x: Point, n: usize) -> Result<Point> {
        let mut p = self.domain.wrap(x);
        for i in 1..=n {
            p = self.forward(p);
            if self.escaped(p) {
                return Err(Error::OrbitEscape { index: i as i64 });
            }
        }
        Ok(p)
    }

    /// Number of points fixed by `fⁿ` when it is determined by the homotopy
    /// class (torus maps conjugate to the cat map): `|det(Aⁿ − I)|`.
    pub fn periodic_point_count(&self, n: usize) -> Option<u128> {
        let matrix = match self.kind {
            SystemKind::Cat { matrix } => matrix,
            SystemKind::PerturbedCat { epsilon } if epsilon.abs() <= 0.05 => CAT_MATRIX,
            _ => return None,
        };
        let a = [
            [matrix[0][0] as i128, matrix[0][1] as i128],
            [matrix[1][0] as i128, matrix[1][1] as i128],
        ];
        let mut p = [[1i128, 0], [0, 1]];
        for _ in 0..n {
            p = [
                [
                    p[0][0] * a[0][0] + p[0][1] * a[1][0],
                    p[0][0] * a[0][1] + p[0][1] * a[1][1],
                ],
                [
                    p[1][0] * a[0][0] + p[1][1] * a[1][0],
                    p[1][0] * a[0][1] + p[1][1] * a[1][1],
                ],
            ];
        }
        let det = (p[0][0] - 1) * (p[1][1] - 1) - p[0][1] * p[1][0];
        Some(det.unsigned_abs())
    }
}

/// The orbit segment `{x, n}` from `x` to `fⁿ(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitSegment {
    pub base: Point,
    pub length: usize,
}

impl OrbitSegment {
    pub fn new(base: Point, length: usize) -> Self {
        Self { base, length }
    }

    /// `f^j(base)` for `0 ≤ j ≤ length`.
    pub fn iterate(&self, system: &MapSystem, j: usize) -> Result<Point> {
        if j > self.length {
            return Err(crate::error::invalid("iterate index beyond segment length"));
        }
        system.iterate(self.base, j)
    }

    pub fn points(&self, system: &MapSystem) -> Result<Vec<Point>> {
        system.orbit(self.base, self.length)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn builtins() -> Vec<MapSystem> {
        alloc::vec![
            MapSystem::cat(),
            MapSystem::perturbed_cat(0.05).unwrap(),
            MapSystem::henon(1.4, 0.3).unwrap(),
            MapSystem::standard(0.9).unwrap(),
        ]
    }

    #[test]
    fn apply_examples() {
        let cat = MapSystem::cat();
        assert_eq!(cat.forward([0.0, 0.0]), [0.0, 0.0]);
        let p = cat.forward([0.1, 0.2]);
        assert!((p[0] - 0.4).abs() < 1e-15 && (p[1] - 0.3).abs() < 1e-15);
        let h = MapSystem::henon(1.4, 0.3).unwrap();
        assert_eq!(h.forward([0.0, 0.0]), [1.0, 0.0]);
    }

    #[test]
    fn jacobian_examples() {
        assert_eq!(
            MapSystem::cat().jacobian([0.3, 0.7]),
            Mat2::new(2.0, 1.0, 1.0, 1.0)
        );
        let h = MapSystem::henon(1.4, 0.3).unwrap();
        let j = h.jacobian([0.5, 0.0]);
        assert!((j.m[0][0] + 1.4).abs() < 1e-15);
        assert_eq!((j.m[0][1], j.m[1][0], j.m[1][1]), (1.0, 0.3, 0.0));
        let s = MapSystem::standard(0.0).unwrap();
        assert_eq!(s.jacobian([0.25, 0.5]), Mat2::new(1.0, 1.0, 0.0, 1.0));
    }

    #[test]
    fn distance_examples() {
        let t = Domain::Torus;
        let d = t.distance([0.1, 0.9], [0.9, 0.1]);
        assert!((d - (0.08f64).sqrt()).abs() < 1e-15);
        assert_eq!(t.distance([0.3, 0.4], [0.3, 0.4]), 0.0);
        assert_eq!(Domain::Plane.distance([0.0, 0.0], [3.0, 4.0]), 5.0);
    }

    #[test]
    fn henon_rejects_zero_b() {
        assert!(matches!(MapSystem::henon(1.4, 0.0), Err(Error::InvalidSystem(_))));
    }

    #[test]
    fn forward_inverse_roundtrip_on_grid() {
        for sys in builtins() {
            for p in sys.grid_points(100) {
                let back = sys.inverse(sys.forward(p));
                let d = sys.distance(back, sys.domain().wrap(p));
                assert!(d < 1e-12, "{} roundtrip error {d:e} at {p:?}", sys.name());
            }
        }
    }

    #[test]
    fn jacobians_invertible_and_bounded() {
        for sys in builtins() {
            let mut worst: f64 = 0.0;
            for p in sys.grid_points(64) {
                let (s_max, s_min) = sys.jacobian(p).singular_values();
                assert!(s_min > 1e-12);
                worst = worst.max(s_max.ln()).max(-s_min.ln());
            }
            assert!(sys.derivative_bound() >= worst);
            assert!(sys.derivative_bound() >= 1.0);
        }
    }

    #[test]
    fn chain_rule_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let h = 1e-6;
        for sys in builtins() {
            for _ in 0..50 {
                let (lo, hi) = sys.sampling_box();
                let p = [
                    lo[0] + rng.random::<f64>() * (hi[0] - lo[0]),
                    lo[1] + rng.random::<f64>() * (hi[1] - lo[1]),
                ];
                let f2 = |q: Point| sys.lift_forward(sys.lift_forward(q));
                let analytic = sys.jacobian(sys.lift_forward(p)).mul(&sys.jacobian(p));
                for col in 0..2 {
                    let mut e = [0.0; 2];
                    e[col] = h;
                    let plus = f2(linalg::add(p, e));
                    let minus = f2(linalg::sub(p, e));
                    for row in 0..2 {
                        let fd = (plus[row] - minus[row]) / (2.0 * h);
                        let exact = analytic.m[row][col];
                        let scale = exact.abs().max(1.0);
                        assert!(
                            (fd - exact).abs() / scale < 1e-5,
                            "{}: fd {fd} vs {exact}",
                            sys.name()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn triangle_inequality_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for domain in [Domain::Torus, Domain::Plane] {
            for _ in 0..1000 {
                let mut pt = || [rng.random::<f64>(), rng.random::<f64>()];
                let (x, y, z) = (pt(), pt(), pt());
                let lhs = domain.distance(x, z);
                let rhs = domain.distance(x, y) + domain.distance(y, z);
                assert!(lhs <= rhs + 1e-14);
                assert_eq!(domain.distance(x, y), domain.distance(y, x));
            }
        }
    }

    #[test]
    fn inverse_system_swaps_directions() {
        let sys = MapSystem::perturbed_cat(0.05).unwrap();
        let inv = sys.inverse_system();
        let p = [0.31, 0.77];
        assert_eq!(inv.forward(p), sys.inverse(p));
        let j = inv.jacobian(p).mul(&sys.jacobian(inv.forward(p)));
        assert!((j.m[0][0] - 1.0).abs() < 1e-12 && j.m[0][1].abs() < 1e-12);
        assert_eq!(inv.inverse_system(), sys);
    }

    #[test]
    fn henon_escape_is_reported() {
        let h = MapSystem::henon(1.4, 0.3).unwrap();
        match h.orbit([3.0, 3.0], 50) {
            Err(Error::OrbitEscape { index }) => assert!(index >= 1),
            other => panic!("expected escape, got {other:?}"),
        }
    }

    #[test]
    fn lefschetz_counts_for_cat_map() {
        let cat = MapSystem::cat();
        let counts: Vec<u128> = (1..=8).map(|n| cat.periodic_point_count(n).unwrap()).collect();
        assert_eq!(counts, [1, 5, 16, 45, 121, 320, 841, 2205]);
    }

    #[test]
    fn orbit_segment_iterates_match_orbit() {
        let sys = MapSystem::standard(0.9).unwrap();
        let seg = OrbitSegment::new([0.2, 0.3], 10);
        let pts = seg.points(&sys).unwrap();
        for j in 0..=10 {
            assert_eq!(seg.iterate(&sys, j).unwrap(), pts[j]);
        }
    }
}
