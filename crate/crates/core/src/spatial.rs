//! Uniform-grid point index for radius queries on the torus or the plane.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::dynsys::Domain;
use crate::linalg::Point;
use crate::math;

type Cell = (i64, i64);

#[derive(Debug, Clone)]
pub struct PointIndex {
    domain: Domain,
    cell: f64,
    // torus: number of cells per side
    cells_per_side: i64,
    buckets: BTreeMap<Cell, Vec<usize>>,
    points: Vec<Point>,
}

impl PointIndex {
    /// Index whose radius queries are exact for radii up to `cell`.
    pub fn new(domain: Domain, cell: f64) -> Self {
        let cell = cell.max(1e-12);
        let (cell, cells_per_side) = match domain {
            Domain::Torus => {
                let m = math::floor(1.0 / cell).clamp(1.0, 1e6) as i64;
                (1.0 / m as f64, m)
            }
            Domain::Plane => (cell, 0),
        };
        Self {
            domain,
            cell,
            cells_per_side,
            buckets: BTreeMap::new(),
            points: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    fn key(&self, p: Point) -> Cell {
        let p = self.domain.wrap(p);
        let i = math::floor(p[0] / self.cell) as i64;
        let j = math::floor(p[1] / self.cell) as i64;
        match self.domain {
            Domain::Torus => (
                i.rem_euclid(self.cells_per_side),
                j.rem_euclid(self.cells_per_side),
            ),
            Domain::Plane => (i, j),
        }
    }

    fn neighbor_keys(&self, p: Point) -> BTreeSet<Cell> {
        let (i, j) = self.key(p);
        let mut keys = BTreeSet::new();
        for di in -1..=1 {
            for dj in -1..=1 {
                let k = match self.domain {
                    Domain::Torus => (
                        (i + di).rem_euclid(self.cells_per_side),
                        (j + dj).rem_euclid(self.cells_per_side),
                    ),
                    Domain::Plane => (i + di, j + dj),
                };
                keys.insert(k);
            }
        }
        keys
    }

    /// Adds a point and returns its id.
    pub fn insert(&mut self, p: Point) -> usize {
        let id = self.points.len();
        let key = self.key(p);
        self.points.push(self.domain.wrap(p));
        self.buckets.entry(key).or_default().push(id);
        id
    }

    /// Ids of stored points strictly within `radius` of `p`, ascending.
    /// `radius` must not exceed the cell size.
    pub fn within(&self, p: Point, radius: f64) -> Vec<usize> {
        let mut out = Vec::new();
        for key in self.neighbor_keys(p) {
            if let Some(ids) = self.buckets.get(&key) {
                for &id in ids {
                    if self.domain.distance(p, self.points[id]) < radius {
                        out.push(id);
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Nearest stored point within `radius`, ties broken by smaller id.
    pub fn nearest_within(&self, p: Point, radius: f64) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for key in self.neighbor_keys(p) {
            if let Some(ids) = self.buckets.get(&key) {
                for &id in ids {
                    let d = self.domain.distance(p, self.points[id]);
                    if d < radius {
                        best = match best {
                            Some((bid, bd)) if bd < d || (bd == d && bid < id) => Some((bid, bd)),
                            _ => Some((id, d)),
                        };
                    }
                }
            }
        }
        best
    }
}

/// All index pairs `(a, b)`, `a < b`, at distance below `radius`, with their
/// distance, sorted by `(a, b)`.
pub fn pairs_within(domain: Domain, points: &[Point], radius: f64) -> Vec<(usize, usize, f64)> {
    let mut index = PointIndex::new(domain, radius);
    for p in points {
        index.insert(*p);
    }
    let mut out = Vec::new();
    for (a, p) in points.iter().enumerate() {
        for b in index.within(*p, radius) {
            if b > a {
                out.push((a, b, domain.distance(*p, points[b])));
            }
        }
    }
    out
}
