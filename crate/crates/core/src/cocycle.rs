//! Derivative cocycle over an orbit: QR-factored products, finite-time
//! Lyapunov exponents, splitting estimates, restricted norms and conorms,
//! domination margins and block-averaged Birkhoff sums of log-norms.
//!
//! Everything that grows like `exp(λ n)` is carried as a logarithm. Raw
//! products are only formed on request through [`FactoredProduct::evaluate`].

use alloc::vec::Vec;

use crate::dynsys::MapSystem;
use crate::error::{invalid, Error, Result};
use crate::linalg::{self, Mat2, Point, ScaledMatrix, Vec2};
use crate::math;

/// Default clustering gap for exponent multiplicities.
pub const MULTIPLICITY_GAP: f64 = 0.05;

/// Default push-forward horizon for splitting estimates.
pub const DEFAULT_SPLITTING_HORIZON: usize = 30;

/// Residual below which a splitting estimate counts as converged even if it
/// stopped decreasing (it sits at round-off).
const CONVERGED_RESIDUAL: f64 = 1e-12;

/// Smallest per-step stretch tolerated before a basis is declared degenerate.
const RANK_FLOOR: f64 = 1e-300;

// Arbitrary direction with irrational slope, used to seed power iterations.
pub(crate) const GENERIC_DIRECTION: Vec2 = [0.798_635_510_047_293, 0.601_815_023_152_048];

/// `Dfⁿ(x)` stored as successive QR steps `Df(f^k x) Q_k = Q_{k+1} R_k`
/// with `Q_0 = I`, so that `Dfⁿ(x) = Q_n R_{n−1} ⋯ R_0`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactoredProduct {
    pub r_factors: Vec<Mat2>,
    pub q_final: Mat2,
}

impl FactoredProduct {
    pub fn from_jacobians(jacobians: &[Mat2]) -> Result<Self> {
        let mut q = Mat2::IDENTITY;
        let mut r_factors = Vec::with_capacity(jacobians.len());
        for (step, j) in jacobians.iter().enumerate() {
            let (qn, r) = j.mul(&q).qr().ok_or(Error::RankDeficient { step })?;
            if r.m[1][1] < RANK_FLOOR * r.m[0][0] {
                return Err(Error::RankDeficient { step });
            }
            r_factors.push(r);
            q = qn;
        }
        Ok(Self {
            r_factors,
            q_final: q,
        })
    }

    pub fn len(&self) -> usize {
        self.r_factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r_factors.is_empty()
    }

    /// The triangular part `R_{n−1} ⋯ R_0` in log-scaled form.
    fn triangular(&self) -> ScaledMatrix {
        let mut acc = ScaledMatrix::identity();
        for r in &self.r_factors {
            acc = acc.then(&ScaledMatrix::from_matrix(r));
        }
        acc
    }

    /// The whole product in log-scaled form.
    pub fn scaled(&self) -> ScaledMatrix {
        self.triangular().then(&ScaledMatrix::from_matrix(&self.q_final))
    }

    /// `(log σ_max, log σ_min)` of the product.
    pub fn log_singular_values(&self) -> (f64, f64) {
        // Q is orthogonal, so R carries the singular values.
        self.triangular().log_singular_values()
    }

    /// Log-moduli of the eigenvalues of the product, larger first.
    pub fn log_eigen_moduli(&self) -> (f64, f64) {
        self.scaled().log_eigen_moduli()
    }

    /// Dense product. Overflows for long horizons; intended for short ones.
    pub fn evaluate(&self) -> Mat2 {
        let mut acc = Mat2::IDENTITY;
        for r in &self.r_factors {
            acc = r.mul(&acc);
        }
        self.q_final.mul(&acc)
    }
}

/// Jacobians `Df(x), Df(f x), …, Df(f^{n−1} x)` along the forward orbit.
pub fn orbit_jacobians(system: &MapSystem, x: Point, n: usize) -> Result<Vec<Mat2>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let orbit = system.orbit(x, n - 1)?;
    Ok(orbit.iter().map(|p| system.jacobian(*p)).collect())
}

pub fn cocycle_product(system: &MapSystem, x: Point, n: usize) -> Result<FactoredProduct> {
    if n == 0 {
        return Err(invalid("cocycle_product needs n >= 1"));
    }
    FactoredProduct::from_jacobians(&orbit_jacobians(system, x, n)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LyapunovSpectrum {
    /// Ascending.
    pub exponents: Vec<f64>,
    /// Sizes of the clusters of nearly equal exponents, in ascending order.
    pub multiplicities: Vec<usize>,
    pub horizon: usize,
}

impl LyapunovSpectrum {
    pub fn bottom(&self) -> f64 {
        self.exponents[0]
    }

    pub fn top(&self) -> f64 {
        *self.exponents.last().expect("non-empty spectrum")
    }

    /// Number of distinct exponents.
    pub fn distinct(&self) -> usize {
        self.multiplicities.len()
    }

    fn from_exponents(mut exponents: Vec<f64>, horizon: usize, gap: f64) -> Self {
        exponents.sort_by(f64::total_cmp);
        let mut multiplicities = Vec::new();
        let mut run = 1;
        for w in exponents.windows(2) {
            if w[1] - w[0] < gap {
                run += 1;
            } else {
                multiplicities.push(run);
                run = 1;
            }
        }
        multiplicities.push(run);
        Self {
            exponents,
            multiplicities,
            horizon,
        }
    }
}

pub fn finite_time_exponents(system: &MapSystem, x: Point, n: usize) -> Result<LyapunovSpectrum> {
    finite_time_exponents_with_gap(system, x, n, MULTIPLICITY_GAP)
}

pub fn finite_time_exponents_with_gap(
    system: &MapSystem,
    x: Point,
    n: usize,
    gap: f64,
) -> Result<LyapunovSpectrum> {
    if n < 10 {
        return Err(invalid("finite_time_exponents needs n >= 10"));
    }
    let product = cocycle_product(system, x, n)?;
    let (hi, lo) = product.log_singular_values();
    let inv_n = 1.0 / n as f64;
    Ok(LyapunovSpectrum::from_exponents(
        alloc::vec![lo * inv_n, hi * inv_n],
        n,
        gap,
    ))
}

/// A subspace of the tangent plane: a line, or the whole plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Subspace {
    Line(Vec2),
    Full,
}

/// Pushes `v` through `jacobians` and returns `log(‖Dfⁿ v‖ / ‖v‖)` together
/// with the normalized image direction.
pub fn line_log_growth(jacobians: &[Mat2], v: Vec2) -> Result<(f64, Vec2)> {
    let mut dir = linalg::normalize(v).ok_or(Error::RankDeficient { step: 0 })?;
    let mut total = 0.0;
    for (step, j) in jacobians.iter().enumerate() {
        let w = j.apply(dir);
        let len = linalg::norm(w);
        if !(len > RANK_FLOOR) {
            return Err(Error::RankDeficient { step });
        }
        total += math::ln(len);
        dir = linalg::scale(w, 1.0 / len);
    }
    Ok((total, dir))
}

/// Directions of the unstable field at every point of an orbit, obtained by
/// pushing a generic direction forward from the first point. `jacobians[t]`
/// is `Df` at the `t`-th point; the result has `jacobians.len() + 1` entries.
pub fn forward_sweep(jacobians: &[Mat2]) -> Result<Vec<Vec2>> {
    let mut dirs = Vec::with_capacity(jacobians.len() + 1);
    let mut dir = GENERIC_DIRECTION;
    dirs.push(dir);
    for (step, j) in jacobians.iter().enumerate() {
        let w = j.apply(dir);
        dir = linalg::normalize(w).ok_or(Error::RankDeficient { step })?;
        dirs.push(dir);
    }
    Ok(dirs)
}

/// Directions of the stable field at every point of an orbit, obtained by
/// pulling a generic direction back from the last point.
pub fn backward_sweep(jacobians: &[Mat2]) -> Result<Vec<Vec2>> {
    let n = jacobians.len();
    let mut dirs = alloc::vec![GENERIC_DIRECTION; n + 1];
    let mut dir = GENERIC_DIRECTION;
    for t in (0..n).rev() {
        let inv = jacobians[t].inverse().ok_or(Error::RankDeficient { step: t })?;
        dir = linalg::normalize(inv.apply(dir)).ok_or(Error::RankDeficient { step: t })?;
        dirs[t] = dir;
    }
    Ok(dirs)
}

/// Matching tolerance between a supplied line and the stable field.
const FIELD_MATCH: f64 = 1e-8;

/// Extra forward iterates used to resolve the stable field.
const FIELD_PAD: usize = DEFAULT_SPLITTING_HORIZON;

/// Cumulative `log ‖Df^t v‖`, `t = 1..=n`, for the line through `v`, read
/// as an invariant line field.
///
/// A line that coincides with the stable field at the base point is carried
/// by that field (pulled back from beyond step `n`); pushing it forward
/// instead would amplify its rounding error by `e^{2λt}`. Any other line is
/// pushed forward, which is stable. `jacobians` may extend past `n`; the
/// extra steps only serve to resolve the stable field.
pub fn line_growth_profile(jacobians: &[Mat2], v: Vec2, n: usize) -> Result<Vec<f64>> {
    let v = linalg::normalize(v).ok_or(Error::RankDeficient { step: 0 })?;
    if n > jacobians.len() {
        return Err(invalid("not enough Jacobians for the requested horizon"));
    }
    let mut field = None;
    if jacobians.len() >= n + 10 {
        let stable = backward_sweep(jacobians)?;
        if linalg::line_distance(stable[0], v) < FIELD_MATCH {
            field = Some(stable);
        }
    }
    let mut out = Vec::with_capacity(n);
    let mut total = 0.0;
    let mut dir = v;
    for (step, j) in jacobians[..n].iter().enumerate() {
        let d = field.as_ref().map_or(dir, |f| f[step]);
        let w = j.apply(d);
        let len = linalg::norm(w);
        if !(len > RANK_FLOOR) {
            return Err(Error::RankDeficient { step });
        }
        total += math::ln(len);
        out.push(total);
        dir = linalg::scale(w, 1.0 / len);
    }
    Ok(out)
}

/// `log ‖Dfⁿ(x)|_E‖`.
pub fn restricted_norm(system: &MapSystem, x: Point, n: usize, subspace: Subspace) -> Result<f64> {
    restricted(system, x, n, subspace, true)
}

/// `log m(Dfⁿ(x)|_F)`, the log of the smallest stretch on `F`.
pub fn restricted_conorm(system: &MapSystem, x: Point, n: usize, subspace: Subspace) -> Result<f64> {
    restricted(system, x, n, subspace, false)
}

fn restricted(system: &MapSystem, x: Point, n: usize, subspace: Subspace, largest: bool) -> Result<f64> {
    if n == 0 {
        return Err(invalid("restricted norms need n >= 1"));
    }
    match subspace {
        Subspace::Line(v) => {
            let jacobians = orbit_jacobians(system, x, n + FIELD_PAD)?;
            Ok(line_growth_profile(&jacobians, v, n)?[n - 1])
        }
        Subspace::Full => {
            let jacobians = orbit_jacobians(system, x, n)?;
            let (hi, lo) = FactoredProduct::from_jacobians(&jacobians)?.log_singular_values();
            Ok(if largest { hi } else { lo })
        }
    }
}

/// Numerically estimated stable/unstable lines at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct SplittingEstimate {
    pub point: Point,
    pub stable_basis: Vec2,
    pub unstable_basis: Vec2,
    pub forward_horizon: usize,
    pub backward_horizon: usize,
    /// Drift between the horizon `m` and `m − 1` estimates.
    pub residual: f64,
}

impl SplittingEstimate {
    /// Angle between the two lines, in `[0, π/2]`.
    pub fn angle(&self) -> f64 {
        linalg::acute_angle(self.stable_basis, self.unstable_basis)
    }
}

/// Estimates `E^s(x)` and `E^u(x)` by power iteration: the unstable line is a
/// generic direction pushed `m` steps forward from `f^{−m}(x)`, the stable
/// line a generic direction pushed `m` steps under `f⁻¹` from `f^m(x)`.
pub fn estimate_splitting(system: &MapSystem, x: Point, m: usize) -> Result<SplittingEstimate> {
    if m < 10 {
        return Err(invalid("estimate_splitting needs m >= 10"));
    }
    let x = system.domain().wrap(x);
    let past = system.backward_orbit(x, m)?;
    let future = system.orbit(x, m)?;
    // Jacobians along f^{-m}x … f^{-1}x in forward order.
    let past_jacs: Vec<Mat2> = past[1..].iter().rev().map(|p| system.jacobian(*p)).collect();
    // Inverse Jacobians Df(f^j x)^{-1} for j = m−1 … 0.
    let future_inv: Vec<Mat2> = future[..m]
        .iter()
        .rev()
        .map(|p| {
            system
                .jacobian(*p)
                .inverse()
                .expect("built-in maps have invertible Jacobians")
        })
        .collect();

    let unstable_at =
        |h: usize| -> Result<Vec2> { Ok(line_log_growth(&past_jacs[m - h..], GENERIC_DIRECTION)?.1) };
    let stable_at =
        |h: usize| -> Result<Vec2> { Ok(line_log_growth(&future_inv[m - h..], GENERIC_DIRECTION)?.1) };

    let mut residuals = [0.0; 6];
    let mut prev_u = unstable_at(m - 6)?;
    let mut prev_s = stable_at(m - 6)?;
    let (mut u, mut s) = (prev_u, prev_s);
    for (k, h) in (m - 5..=m).enumerate() {
        u = unstable_at(h)?;
        s = stable_at(h)?;
        residuals[k] = linalg::line_distance(u, prev_u).max(linalg::line_distance(s, prev_s));
        prev_u = u;
        prev_s = s;
    }
    let residual = residuals[5];
    let earlier = residuals[..5].iter().copied().fold(f64::INFINITY, f64::min);
    if residual > CONVERGED_RESIDUAL && residual > 0.5 * earlier {
        return Err(Error::DegenerateSplitting { index: 0, residual });
    }
    Ok(SplittingEstimate {
        point: x,
        stable_basis: linalg::canonical_direction(s),
        unstable_basis: linalg::canonical_direction(u),
        forward_horizon: m,
        backward_horizon: m,
        residual,
    })
}

/// Minimum over `S ∈ [s_min, s_max]` of
/// `−(1/S)(log‖Df^S|_E‖ − log m(Df^S|_F))` for the line fields through `e`
/// and `f`. The splitting is `(s_min, λ)`-dominated on the tested window iff
/// the result is `≥ 2λ`.
pub fn domination_margin(
    system: &MapSystem,
    x: Point,
    e: Vec2,
    f: Vec2,
    s_min: usize,
    s_max: usize,
) -> Result<f64> {
    if s_min == 0 || s_min > s_max {
        return Err(invalid("domination_margin needs 1 <= s_min <= s_max"));
    }
    let jacobians = orbit_jacobians(system, x, s_max + FIELD_PAD)?;
    let pe = line_growth_profile(&jacobians, e, s_max)?;
    let pf = line_growth_profile(&jacobians, f, s_max)?;
    Ok((s_min..=s_max)
        .map(|s| -(pe[s - 1] - pf[s - 1]) / s as f64)
        .fold(f64::INFINITY, f64::min))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BundleSelector {
    Stable,
    Unstable,
}

/// `(1/lK) Σ_{j<l} log‖Df^K|_{E(f^{jK}x)}‖` (stable) or the conorm analogue
/// on the unstable bundle.
///
/// The bundles are one-dimensional and invariant, so each block norm is the
/// sum of one-step stretches along the bundle field; the fields come from
/// sweeps that start `DEFAULT_SPLITTING_HORIZON` iterates outside the orbit
/// piece, i.e. the splitting estimate at every block start.
pub fn birkhoff_block_average(
    system: &MapSystem,
    x: Point,
    block: usize,
    blocks: usize,
    selector: BundleSelector,
) -> Result<f64> {
    birkhoff_block_average_with_horizon(system, x, block, blocks, selector, DEFAULT_SPLITTING_HORIZON)
}

pub fn birkhoff_block_average_with_horizon(
    system: &MapSystem,
    x: Point,
    block: usize,
    blocks: usize,
    selector: BundleSelector,
    horizon: usize,
) -> Result<f64> {
    if block == 0 || blocks == 0 {
        return Err(invalid("birkhoff_block_average needs K >= 1 and l >= 1"));
    }
    let n = block * blocks;
    let (jacobians, origin) = match selector {
        BundleSelector::Stable => (orbit_jacobians(system, x, n + horizon)?, 0),
        BundleSelector::Unstable => {
            let start = *system.backward_orbit(x, horizon)?.last().expect("non-empty");
            (orbit_jacobians(system, start, n + horizon)?, horizon)
        }
    };
    let field = match selector {
        BundleSelector::Stable => backward_sweep(&jacobians)?,
        BundleSelector::Unstable => forward_sweep(&jacobians)?,
    };
    let mut sum = math::KahanSum::new();
    for t in origin..origin + n {
        let len = linalg::norm(jacobians[t].apply(field[t]));
        if !(len > RANK_FLOOR) {
            return Err(Error::RankDeficient { step: t - origin });
        }
        sum.add(math::ln(len));
    }
    Ok(sum.value() / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn log_lambda() -> f64 {
        ((3.0 + 5f64.sqrt()) / 2.0).ln()
    }

    fn cat_eigen() -> (Vec2, Vec2) {
        let s5 = 5f64.sqrt();
        let u = linalg::normalize([1.0, (s5 - 1.0) / 2.0]).unwrap();
        let s = linalg::normalize([1.0, -(1.0 + s5) / 2.0]).unwrap();
        (s, u)
    }

    #[test]
    fn product_examples() {
        let cat = MapSystem::cat();
        let p = cocycle_product(&cat, [0.3, 0.1], 2).unwrap().evaluate();
        let expected = Mat2::new(5.0, 3.0, 3.0, 2.0);
        for i in 0..2 {
            for j in 0..2 {
                assert!((p.m[i][j] - expected.m[i][j]).abs() < 1e-13);
            }
        }
        let one = cocycle_product(&cat, [0.3, 0.1], 1).unwrap().evaluate();
        assert!((one.m[0][0] - 2.0).abs() < 1e-15 && (one.m[1][1] - 1.0).abs() < 1e-15);
        let (hi, _) = cocycle_product(&cat, [0.3, 0.1], 50)
            .unwrap()
            .log_singular_values();
        assert!((hi - 50.0 * log_lambda()).abs() < 1e-10);
        assert!((hi - 48.1212).abs() < 1e-4);
    }

    #[test]
    fn cat_spectrum() {
        let spec = finite_time_exponents(&MapSystem::cat(), [0.123, 0.456], 100).unwrap();
        assert!((spec.exponents[0] + log_lambda()).abs() < 1e-9);
        assert!((spec.exponents[1] - log_lambda()).abs() < 1e-9);
        assert_eq!(spec.multiplicities, [1, 1]);
        assert!((log_lambda() - 0.962424).abs() < 1e-6);
    }

    #[test]
    fn parabolic_standard_map_has_small_exponents() {
        let sys = MapSystem::standard(0.0).unwrap();
        let spec = finite_time_exponents(&sys, [0.2, 0.3], 100).unwrap();
        assert!(spec.exponents.iter().all(|e| e.abs() < 0.05));
    }

    #[test]
    fn multiplicity_clusters() {
        let s = LyapunovSpectrum::from_exponents(alloc::vec![0.01, -0.01], 10, 0.05);
        assert_eq!(s.multiplicities, [2]);
        assert_eq!(s.distinct(), 1);
    }

    #[test]
    fn henon_escape_propagates() {
        let h = MapSystem::henon(1.4, 0.3).unwrap();
        assert!(matches!(
            finite_time_exponents(&h, [2.5, 2.5], 20),
            Err(Error::OrbitEscape { .. })
        ));
    }

    #[test]
    fn cat_splitting_is_eigenbasis() {
        let (s, u) = cat_eigen();
        let est = estimate_splitting(&MapSystem::cat(), [0.37, 0.11], 20).unwrap();
        assert!(linalg::line_distance(est.stable_basis, s) < 1e-12);
        assert!(linalg::line_distance(est.unstable_basis, u) < 1e-12);
        assert!(est.residual < 1e-12);
        assert!((est.angle() - core::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn perturbed_splitting_near_unperturbed() {
        let (s, u) = cat_eigen();
        let sys = MapSystem::perturbed_cat(0.05).unwrap();
        for p in [[0.1, 0.2], [0.7, 0.4], [0.55, 0.95]] {
            let est = estimate_splitting(&sys, p, 30).unwrap();
            assert!(est.residual < 1e-8);
            assert!(linalg::line_distance(est.stable_basis, s) < 0.2);
            assert!(linalg::line_distance(est.unstable_basis, u) < 0.2);
            // brute force at a much longer horizon agrees
            let long = estimate_splitting(&sys, p, 100).unwrap();
            assert!(linalg::line_distance(est.stable_basis, long.stable_basis) < 1e-8);
            assert!(linalg::line_distance(est.unstable_basis, long.unstable_basis) < 1e-8);
        }
    }

    #[test]
    fn splitting_is_equivariant() {
        let sys = MapSystem::perturbed_cat(0.05).unwrap();
        let x = [0.21, 0.64];
        let here = estimate_splitting(&sys, x, 30).unwrap();
        let there = estimate_splitting(&sys, sys.forward(x), 30).unwrap();
        let j = sys.jacobian(x);
        let tol = 10.0 * here.residual.max(there.residual).max(1e-13);
        let pushed_s = linalg::normalize(j.apply(here.stable_basis)).unwrap();
        let pushed_u = linalg::normalize(j.apply(here.unstable_basis)).unwrap();
        assert!(linalg::line_distance(pushed_s, there.stable_basis) <= tol);
        assert!(linalg::line_distance(pushed_u, there.unstable_basis) <= tol);
    }

    #[test]
    fn elliptic_point_is_degenerate() {
        // (0.5, 0) is an elliptic fixed point of the standard map for 0 < K < 4.
        let sys = MapSystem::standard(0.9).unwrap();
        assert!(matches!(
            estimate_splitting(&sys, [0.5, 0.0], 20),
            Err(Error::DegenerateSplitting { .. })
        ));
    }

    #[test]
    fn restricted_norm_examples() {
        let cat = MapSystem::cat();
        let (_, u) = cat_eigen();
        let x = [0.4, 0.9];
        let n = restricted_norm(&cat, x, 10, Subspace::Line(u)).unwrap();
        assert!((n - 10.0 * log_lambda()).abs() < 1e-12);
        let c = restricted_conorm(&cat, x, 10, Subspace::Line(u)).unwrap();
        assert!((c - n).abs() < 1e-15);
        let full = restricted_norm(&cat, x, 1, Subspace::Full).unwrap();
        let (smax, _) = cat.jacobian(x).singular_values();
        assert!((full - smax.ln()).abs() < 1e-14);
        assert!(matches!(
            restricted_norm(&cat, x, 3, Subspace::Line([0.0, 0.0])),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn cat_domination_margin() {
        let cat = MapSystem::cat();
        let (s, u) = cat_eigen();
        let m = domination_margin(&cat, [0.2, 0.2], s, u, 1, 50).unwrap();
        assert!((m - 2.0 * log_lambda()).abs() < 1e-9);
        let swapped = domination_margin(&cat, [0.2, 0.2], u, s, 1, 50).unwrap();
        assert!((swapped + 2.0 * log_lambda()).abs() < 1e-9);
    }

    #[test]
    fn block_average_examples() {
        let cat = MapSystem::cat();
        for (k, l) in [(1, 1), (3, 7), (10, 4)] {
            let v = birkhoff_block_average(&cat, [0.3, 0.6], k, l, BundleSelector::Stable).unwrap();
            assert!((v + log_lambda()).abs() < 1e-12);
        }
        let sys = MapSystem::perturbed_cat(0.05).unwrap();
        let x = [0.3, 0.6];
        let single = birkhoff_block_average(&sys, x, 1, 1, BundleSelector::Stable).unwrap();
        let e = estimate_splitting(&sys, x, DEFAULT_SPLITTING_HORIZON).unwrap();
        let direct = restricted_norm(&sys, x, 1, Subspace::Line(e.stable_basis)).unwrap();
        assert!((single - direct).abs() < 1e-14);
    }
}
