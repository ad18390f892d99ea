//! Per-task random streams derived from one root seed.
//!
//! Task `i` draws from ChaCha8 seeded with the root seed on stream `i`, so
//! results depend only on `(seed, i)` and never on scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dynsys::MapSystem;
use crate::linalg::Point;

pub fn task_rng(seed: u64, task: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(task);
    rng
}

/// Uniform point of the system's sampling box for task `task`.
pub fn uniform_point(system: &MapSystem, seed: u64, task: u64) -> Point {
    let mut rng = task_rng(seed, task);
    let (lo, hi) = system.sampling_box();
    let u: f64 = rng.random();
    let v: f64 = rng.random();
    system
        .domain()
        .wrap([lo[0] + u * (hi[0] - lo[0]), lo[1] + v * (hi[1] - lo[1])])
}
