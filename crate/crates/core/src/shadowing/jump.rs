use alloc::vec::Vec;

use super::pseudo::PseudoOrbit;
use crate::dynsys::{MapSystem, SystemKind};
use crate::error::{invalid, Result};
use crate::linalg::{self, Eigenvalues, Mat2, Vec2};
use crate::math;

/// Periodic pseudo-orbit near the fixed point `0` of a linear torus
/// automorphism with exactly one jump `d` (`|d| = δ`), placed where segment
/// `jump_segment − 1` ends. All other segment ends match exactly.
///
/// The points solve `x_{t+1} = A x_t + d·[t = J]` cyclically over
/// `N = segments·segment_length` steps, computed in the eigenbasis of `A`.
pub fn cat_single_jump(
    system: &MapSystem,
    delta: f64,
    direction: Vec2,
    segments: usize,
    segment_length: usize,
    jump_segment: usize,
) -> Result<PseudoOrbit> {
    let SystemKind::Cat { matrix } = *system.kind() else {
        return Err(invalid("single-jump construction needs a linear torus map"));
    };
    if system.is_inverted() || segments == 0 || segment_length == 0 || jump_segment >= segments {
        return Err(invalid("bad single-jump layout"));
    }
    let a = Mat2::new(
        matrix[0][0] as f64,
        matrix[0][1] as f64,
        matrix[1][0] as f64,
        matrix[1][1] as f64,
    );
    let Eigenvalues::Real(lu, ls) = a.eigenvalues() else {
        return Err(invalid("matrix is not hyperbolic"));
    };
    let eu = a
        .eigenvector(lu)
        .ok_or_else(|| invalid("no unstable eigenvector"))?;
    let es = a
        .eigenvector(ls)
        .ok_or_else(|| invalid("no stable eigenvector"))?;
    let dir = linalg::normalize(direction).ok_or_else(|| invalid("zero jump direction"))?;
    let d = linalg::scale(dir, delta);
    let coords = Mat2::from_columns(eu, es)
        .inverse()
        .ok_or_else(|| invalid("degenerate eigenbasis"))?
        .apply(d);

    let n = segments * segment_length;
    let start = jump_segment * segment_length; // index J + 1
    let nf = n as f64;
    let point = |t: usize| {
        let k = ((t + n - start) % n) as f64;
        // λ^k / (1 − λ^N) written to avoid overflow for large N
        let u = -coords[0] * math::powf(lu, k - nf) / (1.0 - math::powf(lu, -nf));
        let s = coords[1] * math::powf(ls, k) / (1.0 - math::powf(ls, nf));
        linalg::add(linalg::scale(eu, u), linalg::scale(es, s))
    };
    let segs: Vec<_> = (0..segments)
        .map(|i| (point(i * segment_length), segment_length))
        .collect();
    // Iterating a segment amplifies round-off by up to λ^length.
    PseudoOrbit::from_segments(system, segs, true, delta * (1.0 + 1e-6) + 1e-10)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_jump_of_requested_size() {
        let cat = MapSystem::cat();
        let p = cat_single_jump(&cat, 1e-4, [1.0, 0.0], 4, 10, 2).unwrap();
        assert_eq!(p.period, Some(4));
        let big: Vec<usize> = (0..4).filter(|k| p.jump_sizes[*k] > 1e-10).collect();
        assert_eq!(big, [1]);
        assert!((p.jump_sizes[1] - 1e-4).abs() < 1e-11);
    }
}
