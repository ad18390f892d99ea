use alloc::format;
use alloc::vec::Vec;

use crate::dynsys::MapSystem;
use crate::error::{invalid, Error, Result};
use crate::linalg::Point;
use crate::spatial::PointIndex;

/// Default number of iterates searched for one return.
pub const RETURN_BUDGET: usize = 1_000_000;

/// Segments `{xᵢ, nᵢ}` labelled `first_index, first_index + 1, …`.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoOrbit {
    pub segments: Vec<(Point, usize)>,
    /// `jump_sizes[k] = ρ(f^{n_k}(x_k), x_{k+1})`; for periodic orbits the
    /// last entry is the jump back to the first segment.
    pub jump_sizes: Vec<f64>,
    /// `Some(m)` when `x_{i+m} = x_i` and `n_{i+m} = n_i`.
    pub period: Option<usize>,
    pub delta: f64,
    pub first_index: i64,
}

/// Offsets `c_i` for segment lengths labelled from `first_index`:
/// `c_0 = 0`, `c_i = Σ_{j<i} n_j` for `i > 0`, `c_i = −Σ_{j=i}^{−1} n_j` for
/// `i < 0`. Returns one offset per segment plus the end of the window.
pub fn offsets_from_lengths(lengths: &[usize], first_index: i64) -> Result<Vec<i64>> {
    let last = first_index + lengths.len() as i64;
    if first_index > 0 || last < 0 {
        return Err(invalid("segment labels must contain index 0"));
    }
    let zero = (-first_index) as usize;
    let mut out = alloc::vec![0i64; lengths.len() + 1];
    for k in zero + 1..=lengths.len() {
        out[k] = out[k - 1] + lengths[k - 1] as i64;
    }
    for k in (0..zero).rev() {
        out[k] = out[k + 1] - lengths[k] as i64;
    }
    Ok(out)
}

impl PseudoOrbit {
    /// Computes the jumps and checks them against `delta`.
    pub fn from_segments(
        system: &MapSystem,
        segments: Vec<(Point, usize)>,
        periodic: bool,
        delta: f64,
    ) -> Result<Self> {
        Self::labelled(system, segments, periodic, delta, 0)
    }

    pub fn labelled(
        system: &MapSystem,
        segments: Vec<(Point, usize)>,
        periodic: bool,
        delta: f64,
        first_index: i64,
    ) -> Result<Self> {
        if segments.is_empty() {
            return Err(invalid("pseudo-orbit needs at least one segment"));
        }
        if segments.iter().any(|s| s.1 == 0) {
            return Err(invalid("segment lengths must be positive"));
        }
        if !(delta > 0.0) {
            return Err(invalid("delta must be positive"));
        }
        let domain = system.domain();
        let segments: Vec<(Point, usize)> = segments.into_iter().map(|(p, n)| (domain.wrap(p), n)).collect();
        let m = segments.len();
        let jumps = if periodic { m } else { m - 1 };
        let mut jump_sizes = Vec::with_capacity(jumps);
        for k in 0..jumps {
            let end = system.iterate(segments[k].0, segments[k].1)?;
            jump_sizes.push(system.distance(end, segments[(k + 1) % m].0));
        }
        if let Some((k, j)) = jump_sizes.iter().enumerate().find(|(_, j)| !(**j < delta)) {
            return Err(Error::InvalidArgument(format!(
                "jump {k} has size {j:.3e}, not below delta {delta:.3e}"
            )));
        }
        let out = Self {
            segments,
            jump_sizes,
            period: periodic.then_some(m),
            delta,
            first_index,
        };
        out.offsets()?;
        Ok(out)
    }

    pub fn is_periodic(&self) -> bool {
        self.period.is_some()
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.segments.iter().map(|s| s.1).collect()
    }

    /// `Σ nᵢ` over the stored window.
    pub fn total_length(&self) -> usize {
        self.segments.iter().map(|s| s.1).sum()
    }

    /// Offsets of the stored segments followed by the window end.
    pub fn offsets(&self) -> Result<Vec<i64>> {
        offsets_from_lengths(&self.lengths(), self.first_index)
    }

    pub fn max_jump(&self) -> f64 {
        self.jump_sizes.iter().copied().fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecurrenceOptions {
    pub delta: f64,
    /// Minimal segment length `T`.
    pub min_return: usize,
    pub max_segments: usize,
    /// Iterates searched per segment before giving up.
    pub budget: usize,
    /// Close the last segment onto `x` to make the pseudo-orbit periodic.
    pub periodic: bool,
}

impl RecurrenceOptions {
    pub fn new(delta: f64, min_return: usize, max_segments: usize) -> Self {
        Self {
            delta,
            min_return,
            max_segments,
            budget: RETURN_BUDGET,
            periodic: false,
        }
    }
}

/// Cuts the forward orbit of `x` at returns `t ≥ T` accepted by `block_test`.
///
/// Without a pool every segment continues from the endpoint of the previous
/// one (all jumps vanish). With a pool the next segment restarts at the pool
/// point nearest to the accepted endpoint, provided it lies within `δ`. In
/// periodic mode the last segment must instead return within `δ` of `x`.
pub fn build_recurrent_pseudo_orbit(
    system: &MapSystem,
    x: Point,
    block_test: &dyn Fn(Point) -> bool,
    pool: Option<&PointIndex>,
    opts: &RecurrenceOptions,
) -> Result<PseudoOrbit> {
    if !(opts.delta > 0.0) || opts.min_return == 0 || opts.max_segments == 0 {
        return Err(invalid("need delta > 0, T >= 1 and at least one segment"));
    }
    let x = system.domain().wrap(x);
    if !block_test(x) {
        return Err(invalid("block_test rejects the starting point"));
    }
    let mut segments = Vec::with_capacity(opts.max_segments);
    let mut cur = x;
    for s in 0..opts.max_segments {
        let closing = opts.periodic && s + 1 == opts.max_segments;
        let mut p = cur;
        let mut accepted = false;
        let mut next = None;
        for t in 1..=opts.budget {
            p = system.forward(p);
            if system.escaped(p) {
                return Err(Error::OrbitEscape { index: t as i64 });
            }
            if t < opts.min_return || !block_test(p) {
                continue;
            }
            accepted = true;
            let target = if closing {
                (system.distance(p, x) < opts.delta).then_some(x)
            } else {
                match pool {
                    None => Some(p),
                    Some(index) => index
                        .nearest_within(p, opts.delta)
                        .map(|(id, _)| index.points()[id]),
                }
            };
            if let Some(q) = target {
                next = Some((t, q));
                break;
            }
        }
        match next {
            Some((t, q)) => {
                segments.push((cur, t));
                cur = q;
            }
            None if accepted => return Err(Error::PoolExhausted { budget: opts.budget }),
            None => return Err(Error::NoRecurrence { budget: opts.budget }),
        }
    }
    PseudoOrbit::from_segments(system, segments, opts.periodic, opts.delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn consecutive_pieces_without_pool() {
        let cat = MapSystem::cat();
        let opts = RecurrenceOptions::new(1e-3, 5, 6);
        let p = build_recurrent_pseudo_orbit(&cat, [0.31, 0.17], &|_| true, None, &opts).unwrap();
        assert_eq!(p.segments.len(), 6);
        assert!(p.segments.iter().all(|s| s.1 == 5));
        assert!(p.jump_sizes.iter().all(|j| *j == 0.0));
        assert_eq!(p.offsets().unwrap(), [0, 5, 10, 15, 20, 25, 30]);
        assert!(!p.is_periodic());
    }

    #[test]
    fn periodic_closure_returns_to_start() {
        let cat = MapSystem::cat();
        let mut opts = RecurrenceOptions::new(0.05, 3, 3);
        opts.periodic = true;
        let x = [0.2, 0.7];
        let p = build_recurrent_pseudo_orbit(&cat, x, &|_| true, None, &opts).unwrap();
        assert_eq!(p.period, Some(3));
        let end = cat.iterate(p.segments[2].0, p.segments[2].1).unwrap();
        assert!(cat.distance(end, x) < 0.05);
        assert_eq!(p.jump_sizes.len(), 3);
    }

    #[test]
    fn rejecting_test_gives_no_recurrence() {
        let cat = MapSystem::cat();
        let mut opts = RecurrenceOptions::new(1e-3, 2, 1);
        opts.budget = 500;
        let x = [0.2, 0.3];
        let r = build_recurrent_pseudo_orbit(&cat, x, &|p| p == x, None, &opts);
        assert!(matches!(r, Err(Error::NoRecurrence { budget: 500 })));
    }

    #[test]
    fn empty_pool_is_exhausted() {
        let cat = MapSystem::cat();
        let mut opts = RecurrenceOptions::new(1e-3, 2, 1);
        opts.budget = 200;
        let mut pool = PointIndex::new(cat.domain(), 1e-3);
        pool.insert([0.5, 0.5]);
        let r = build_recurrent_pseudo_orbit(&cat, [0.11, 0.23], &|_| true, Some(&pool), &opts);
        assert!(matches!(r, Err(Error::PoolExhausted { .. })));
    }

    #[test]
    fn negative_labels() {
        assert_eq!(offsets_from_lengths(&[3, 4, 5], -2).unwrap(), [-7, -4, 0, 5]);
        assert!(offsets_from_lengths(&[3], 2).is_err());
    }

    proptest! {
        #[test]
        fn offsets_follow_definition(
            lengths in proptest::collection::vec(1usize..50, 1..12),
            shift in 0usize..12,
        ) {
            let first = -((shift % (lengths.len() + 1)) as i64);
            let c = offsets_from_lengths(&lengths, first).unwrap();
            let label = |k: usize| first + k as i64;
            for k in 0..lengths.len() {
                let i = label(k);
                let expected: i64 = if i >= 0 {
                    (0..k).filter(|&q| label(q) >= 0).map(|q| lengths[q] as i64).sum()
                } else {
                    -(k..lengths.len()).filter(|&q| label(q) < 0).map(|q| lengths[q] as i64).sum::<i64>()
                };
                prop_assert_eq!(c[k], expected);
                prop_assert_eq!(c[k + 1] - c[k], lengths[k] as i64);
            }
        }
    }
}
