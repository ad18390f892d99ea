//! Livshitz transfer functions: periodic obstruction sums, telescoping
//! reconstruction of `ψ` along one orbit, and the near-return consistency
//! check that decides whether `ψ` extends continuously.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::dynsys::MapSystem;
use crate::error::{invalid, Error, Result};
use crate::fit;
use crate::linalg::Point;
use crate::math::{self, KahanSum, TAU};
use crate::shadowing::{collect_census, Census, CensusOptions, PeriodicPoint};
use crate::spatial;

/// Orbit residual a periodic point must reach before its sum is trusted.
pub const PERIODIC_RESIDUAL: f64 = 1e-10;

/// Observables `g` whose coboundaries `g∘f − g` are built in. All have
/// Lipschitz constant at most `2π` on the flat torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Potential {
    SinX1,
    CosX2,
    SinX1CosX2,
    HalfSinSum,
    Mixed,
}

pub const POTENTIALS: [Potential; 5] = [
    Potential::SinX1,
    Potential::CosX2,
    Potential::SinX1CosX2,
    Potential::HalfSinSum,
    Potential::Mixed,
];

impl Potential {
    pub fn eval(self, p: Point) -> f64 {
        let (x, y) = (p[0], p[1]);
        match self {
            Potential::SinX1 => math::sin(TAU * x),
            Potential::CosX2 => math::cos(TAU * y),
            Potential::SinX1CosX2 => math::sin(TAU * x) * math::cos(TAU * y),
            Potential::HalfSinSum => 0.5 * math::sin(TAU * (x + y)),
            Potential::Mixed => 0.5 * math::cos(TAU * x) + 0.25 * math::sin(2.0 * TAU * y),
        }
    }

    /// Lipschitz constant for the Euclidean metric.
    pub fn lipschitz(self) -> f64 {
        match self {
            Potential::SinX1 | Potential::CosX2 | Potential::SinX1CosX2 => TAU,
            Potential::HalfSinSum | Potential::Mixed => math::PI * core::f64::consts::SQRT_2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Potential::SinX1 => "sin_x1",
            Potential::CosX2 => "cos_x2",
            Potential::SinX1CosX2 => "sin_x1_cos_x2",
            Potential::HalfSinSum => "half_sin_sum",
            Potential::Mixed => "mixed",
        }
    }
}

#[derive(Clone)]
pub enum ObservableKind {
    Constant(f64),
    /// `sin 2πx₁`.
    SinX1,
    /// `x₁ − 1/2` on the fundamental domain (discontinuous on the torus).
    CenteredX1,
    /// `g∘f − g`.
    Coboundary(Potential),
    Custom(Arc<dyn Fn(Point) -> f64 + Send + Sync>),
}

impl fmt::Debug for ObservableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObservableKind::Constant(c) => write!(f, "Constant({c})"),
            ObservableKind::SinX1 => f.write_str("SinX1"),
            ObservableKind::CenteredX1 => f.write_str("CenteredX1"),
            ObservableKind::Coboundary(g) => write!(f, "Coboundary({g:?})"),
            ObservableKind::Custom(_) => f.write_str("Custom"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Observable {
    pub name: String,
    pub kind: ObservableKind,
    /// `(C, κ)` with `|φ(x) − φ(y)| ≤ C ρ(x, y)^κ`.
    pub holder: Option<(f64, f64)>,
}

/// Names accepted by [`Observable::from_name`].
pub const BUILTIN_OBSERVABLES: &[&str] = &[
    "zero",
    "one",
    "sin_x1",
    "centered_x1",
    "cob_sin_x1",
    "cob_cos_x2",
    "cob_sin_x1_cos_x2",
    "cob_half_sin_sum",
    "cob_mixed",
];

impl Observable {
    pub fn constant(c: f64) -> Self {
        Self {
            name: if c == 0.0 {
                "zero".to_string()
            } else {
                format_name("const", c)
            },
            kind: ObservableKind::Constant(c),
            holder: Some((0.0, 1.0)),
        }
    }

    pub fn sin_x1() -> Self {
        Self {
            name: "sin_x1".to_string(),
            kind: ObservableKind::SinX1,
            holder: Some((TAU, 1.0)),
        }
    }

    pub fn centered_x1() -> Self {
        Self {
            name: "centered_x1".to_string(),
            kind: ObservableKind::CenteredX1,
            holder: None,
        }
    }

    /// `g∘f − g`, with Hölder data `(Lip(g)(e^{C_f} + 1), 1)`.
    pub fn coboundary(system: &MapSystem, g: Potential) -> Self {
        let lip_f = math::exp(system.derivative_bound());
        Self {
            name: ["cob_", g.name()].concat(),
            kind: ObservableKind::Coboundary(g),
            holder: Some((g.lipschitz() * (lip_f + 1.0), 1.0)),
        }
    }

    pub fn custom(name: &str, f: impl Fn(Point) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.to_string(),
            kind: ObservableKind::Custom(Arc::new(f)),
            holder: None,
        }
    }

    pub fn from_name(system: &MapSystem, name: &str) -> Result<Self> {
        Ok(match name {
            "zero" => Self::constant(0.0),
            "one" => Self::constant(1.0),
            "sin_x1" => Self::sin_x1(),
            "centered_x1" => Self::centered_x1(),
            _ => {
                let g = name
                    .strip_prefix("cob_")
                    .and_then(|g| POTENTIALS.iter().find(|p| p.name() == g))
                    .ok_or_else(|| invalid("unknown observable"))?;
                Self::coboundary(system, *g)
            }
        })
    }

    pub fn eval(&self, system: &MapSystem, p: Point) -> f64 {
        match &self.kind {
            ObservableKind::Constant(c) => *c,
            ObservableKind::SinX1 => math::sin(TAU * p[0]),
            ObservableKind::CenteredX1 => system.domain().wrap(p)[0] - 0.5,
            ObservableKind::Coboundary(g) => g.eval(system.forward(p)) - g.eval(p),
            ObservableKind::Custom(f) => f(p),
        }
    }
}

fn format_name(prefix: &str, c: f64) -> String {
    alloc::format!("{prefix}_{c}")
}

/// `Σ_{i<n} φ(f^i z)` over the stored orbit of `p`.
pub fn periodic_sum(system: &MapSystem, phi: &Observable, p: &PeriodicPoint) -> Result<f64> {
    if !(p.orbit_residual < PERIODIC_RESIDUAL) {
        return Err(invalid("periodic point is not verified"));
    }
    let mut s = KahanSum::new();
    for q in &p.orbit {
        s.add(phi.eval(system, *q));
    }
    Ok(s.value())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObstructionEntry {
    pub point: PeriodicPoint,
    pub sum: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObstructionScan {
    /// Points of least period `n` for `n = 1..=max_period`, each listed
    /// once, in census order.
    pub entries: Vec<ObstructionEntry>,
    /// Whether every census matched its known count; `None` if a count is
    /// unknown for the system.
    pub complete: Option<bool>,
    pub failures: usize,
}

impl ObstructionScan {
    /// `max |sum| / period` over the scan.
    pub fn worst_normalized(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.sum.abs() / e.point.period as f64)
            .fold(0.0, f64::max)
    }

    /// First entry whose sum exceeds `tol·period`.
    pub fn first_obstruction(&self, tol: f64) -> Option<&ObstructionEntry> {
        self.entries
            .iter()
            .find(|e| e.sum.abs() > tol * e.point.period as f64)
    }
}

/// Sums over the points of `censuses` (one per period, ascending). A point
/// already found at a smaller period is skipped.
pub fn obstruction_sums(
    system: &MapSystem,
    phi: &Observable,
    censuses: &[Census],
    opts: &CensusOptions,
) -> Result<ObstructionScan> {
    let mut seen = spatial::PointIndex::new(system.domain(), opts.dedup_radius);
    let mut entries = Vec::new();
    let mut complete = Some(true);
    let mut failures = 0;
    for c in censuses {
        failures += c.failures;
        complete = match (complete, c.is_complete()) {
            (Some(a), Some(b)) => Some(a && b),
            _ => None,
        };
        let fresh: Vec<&PeriodicPoint> = c
            .points
            .iter()
            .filter(|p| seen.within(p.z, opts.dedup_radius).is_empty())
            .collect();
        for p in fresh {
            entries.push(ObstructionEntry {
                point: p.clone(),
                sum: periodic_sum(system, phi, p)?,
            });
        }
        for p in &c.points {
            if seen.within(p.z, opts.dedup_radius).is_empty() {
                seen.insert(p.z);
            }
        }
    }
    Ok(ObstructionScan {
        entries,
        complete,
        failures,
    })
}

pub fn obstruction_scan(
    system: &MapSystem,
    phi: &Observable,
    max_period: usize,
    seeds: &[Point],
    opts: &CensusOptions,
) -> Result<ObstructionScan> {
    if max_period == 0 {
        return Err(invalid("max_period must be at least 1"));
    }
    let censuses: Vec<Census> = (1..=max_period)
        .map(|n| {
            collect_census(
                system,
                n,
                seeds
                    .iter()
                    .map(|s| crate::shadowing::close_orbit(system, *s, n, opts.tol, opts.max_iter)),
                opts,
            )
        })
        .collect();
    obstruction_sums(system, phi, &censuses, opts)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferSample {
    pub n: usize,
    pub point: Point,
    pub psi: f64,
}

/// `ψ(fⁿx) = Σ_{k<n} φ(f^k x)` for `0 ≤ n ≤ N`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferTable {
    pub base: Point,
    pub observable: String,
    pub samples: Vec<TransferSample>,
}

impl TransferTable {
    pub fn points(&self) -> Vec<Point> {
        self.samples.iter().map(|s| s.point).collect()
    }
}

/// Running Birkhoff sums with compensated summation.
pub fn reconstruct_transfer(
    system: &MapSystem,
    phi: &Observable,
    x: Point,
    n: usize,
) -> Result<TransferTable> {
    if n == 0 {
        return Err(invalid("reconstruct_transfer needs N >= 1"));
    }
    let orbit = system.orbit(x, n)?;
    let mut sum = KahanSum::new();
    let mut samples = Vec::with_capacity(n + 1);
    for (k, p) in orbit.iter().enumerate() {
        samples.push(TransferSample {
            n: k,
            point: *p,
            psi: sum.value(),
        });
        if k < n {
            sum.add(phi.eval(system, *p));
        }
    }
    Ok(TransferTable {
        base: orbit[0],
        observable: phi.name.clone(),
        samples,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NearReturnResidual {
    pub radius: f64,
    /// `max |ψ_a − ψ_b|` over pairs closer than `radius`.
    pub residual: f64,
    pub pairs: usize,
}

pub fn coboundary_residual(
    system: &MapSystem,
    table: &TransferTable,
    radius: f64,
) -> Result<NearReturnResidual> {
    if table.samples.is_empty() {
        return Err(invalid("empty transfer table"));
    }
    if !(radius > 0.0) {
        return Err(invalid("radius must be positive"));
    }
    let pairs = spatial::pairs_within(system.domain(), &table.points(), radius);
    if pairs.is_empty() {
        return Err(Error::NoPairs { radius });
    }
    let residual = pairs
        .iter()
        .map(|(a, b, _)| (table.samples[*a].psi - table.samples[*b].psi).abs())
        .fold(0.0, f64::max);
    Ok(NearReturnResidual {
        radius,
        residual,
        pairs: pairs.len(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct HolderFit {
    /// `(radius, residual)` used in the fit.
    pub samples: Vec<(f64, f64)>,
    pub c_hat: f64,
    pub kappa_hat: f64,
    pub r2: f64,
    /// All residuals vanished; no exponent can be fitted.
    pub degenerate: bool,
}

/// Log-log fit `residual ≈ C r^κ`.
pub fn fit_holder(samples: &[(f64, f64)]) -> Result<HolderFit> {
    if samples.len() < 3 {
        return Err(Error::InsufficientData {
            needed: 3,
            got: samples.len(),
        });
    }
    if samples.iter().all(|s| s.1 == 0.0) {
        return Ok(HolderFit {
            samples: samples.to_vec(),
            c_hat: 0.0,
            kappa_hat: 0.0,
            r2: 0.0,
            degenerate: true,
        });
    }
    let usable: Vec<(f64, f64)> = samples
        .iter()
        .copied()
        .filter(|s| s.1 > 0.0 && s.0 > 0.0)
        .collect();
    if usable.len() < 3 {
        return Err(Error::InsufficientData {
            needed: 3,
            got: usable.len(),
        });
    }
    let xs: Vec<f64> = usable.iter().map(|s| math::ln(s.0)).collect();
    let ys: Vec<f64> = usable.iter().map(|s| math::ln(s.1)).collect();
    let line = fit::linear_fit(&xs, &ys)?;
    Ok(HolderFit {
        samples: samples.to_vec(),
        c_hat: math::exp(line.intercept),
        kappa_hat: line.slope,
        r2: line.r2,
        degenerate: false,
    })
}

/// Near-return residuals at every radius of the grid, then [`fit_holder`].
/// Radii without pairs are skipped.
pub fn holder_estimate(system: &MapSystem, table: &TransferTable, radius_grid: &[f64]) -> Result<HolderFit> {
    let mut samples = Vec::new();
    for r in radius_grid {
        match coboundary_residual(system, table, *r) {
            Ok(res) => samples.push((res.radius, res.residual)),
            Err(Error::NoPairs { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    fit_holder(&samples)
}
