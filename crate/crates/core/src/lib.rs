//! Finite-horizon numerics for non-uniformly hyperbolic surface maps.
//!
//! The crate is `no_std` (with `alloc`). It covers derivative cocycles and
//! Lyapunov exponents, Pesin-block classification, Newton shadowing and
//! orbit closing, invariant-manifold growth, and Livshitz transfer
//! functions, all on the explicit systems in [`dynsys`].

#![cfg_attr(not(test), no_std)]
// `!(x > y)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

pub mod cocycle;
pub mod dynsys;
pub mod error;
pub mod fit;
pub mod linalg;
pub mod livshitz;
pub mod manifolds;
pub mod math;
pub mod pesin;
pub mod sampling;
pub mod shadowing;
pub mod sparse;
pub mod spatial;

pub use dynsys::{Direction, Domain, MapSystem, OrbitSegment};
pub use error::{Error, Result};
pub use linalg::{Mat2, Point, Vec2};
