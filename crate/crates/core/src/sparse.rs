//! Gaussian elimination with partial pivoting on sparse square systems.
//!
//! Rows are kept as sorted `(column, value)` lists and bucketed by their
//! leading column, so banded systems with a few dense border columns (the
//! Newton systems of the shadowing solver) factor in linear time.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Pivots below this magnitude make the solve fail.
pub const PIVOT_FLOOR: f64 = 1e-14;

type Row = Vec<(usize, f64)>;

#[derive(Debug, Clone, Default)]
pub struct SparseSystem {
    n: usize,
    rows: Vec<Row>,
    rhs: Vec<f64>,
}

impl SparseSystem {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            rows: Vec::with_capacity(n),
            rhs: Vec::with_capacity(n),
        }
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    /// Adds an equation `Σ value·x[column] = rhs`. Repeated columns are summed.
    pub fn push_row(&mut self, mut entries: Row, rhs: f64) {
        entries.sort_by_key(|e| e.0);
        let mut row: Row = Vec::with_capacity(entries.len());
        for (c, v) in entries {
            debug_assert!(c < self.n);
            match row.last_mut() {
                Some(last) if last.0 == c => last.1 += v,
                _ => row.push((c, v)),
            }
        }
        row.retain(|e| e.1 != 0.0);
        self.rows.push(row);
        self.rhs.push(rhs);
    }

    pub fn solve(self) -> Result<Vec<f64>> {
        self.solve_with_floor(PIVOT_FLOOR)
    }

    pub fn solve_with_floor(mut self, floor: f64) -> Result<Vec<f64>> {
        let n = self.n;
        if self.rows.len() != n {
            return Err(Error::InvalidArgument(alloc::format!(
                "{} equations for {} unknowns",
                self.rows.len(),
                n
            )));
        }
        let mut buckets: Vec<Vec<usize>> = alloc::vec![Vec::new(); n];
        for (r, row) in self.rows.iter().enumerate() {
            match row.first() {
                Some(&(c, _)) => buckets[c].push(r),
                None => return Err(Error::IllConditioned { row: r, pivot: 0.0 }),
            }
        }
        let mut pivot_rows = Vec::with_capacity(n);
        for c in 0..n {
            let mut candidates = core::mem::take(&mut buckets[c]);
            if candidates.is_empty() {
                return Err(Error::IllConditioned { row: c, pivot: 0.0 });
            }
            candidates.sort_unstable();
            let mut best = candidates[0];
            for &r in &candidates[1..] {
                if math::abs(self.rows[r][0].1) > math::abs(self.rows[best][0].1) {
                    best = r;
                }
            }
            let pivot = self.rows[best][0].1;
            if !(math::abs(pivot) >= floor) {
                return Err(Error::IllConditioned {
                    row: c,
                    pivot: math::abs(pivot),
                });
            }
            let pivot_row = core::mem::take(&mut self.rows[best]);
            let pivot_rhs = self.rhs[best];
            for &r in &candidates {
                if r == best {
                    continue;
                }
                let row = core::mem::take(&mut self.rows[r]);
                let m = row[0].1 / pivot;
                let merged = eliminate(&row[1..], &pivot_row[1..], m);
                self.rhs[r] -= m * pivot_rhs;
                match merged.first() {
                    Some(&(lead, _)) => buckets[lead].push(r),
                    None => return Err(Error::IllConditioned { row: c, pivot: 0.0 }),
                }
                self.rows[r] = merged;
            }
            self.rows[best] = pivot_row;
            pivot_rows.push(best);
        }
        let mut x = alloc::vec![0.0; n];
        for c in (0..n).rev() {
            let r = pivot_rows[c];
            let row = &self.rows[r];
            let mut acc = self.rhs[r];
            for &(j, v) in &row[1..] {
                acc -= v * x[j];
            }
            x[c] = acc / row[0].1;
        }
        Ok(x)
    }
}

// row − m·pivot, both sorted by column.
fn eliminate(row: &[(usize, f64)], pivot: &[(usize, f64)], m: f64) -> Row {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let take_row = j >= pivot.len() || (i < row.len() && row[i].0 < pivot[j].0);
        let take_pivot = i >= row.len() || (j < pivot.len() && pivot[j].0 < row[i].0);
        let (c, v) = if take_row {
            i += 1;
            row[i - 1]
        } else if take_pivot {
            j += 1;
            (pivot[j - 1].0, -m * pivot[j - 1].1)
        } else {
            i += 1;
            j += 1;
            (row[i - 1].0, row[i - 1].1 - m * pivot[j - 1].1)
        };
        if v != 0.0 {
            out.push((c, v));
        }
    }
    out
}
