//! Permanents: cycle-cover backtracking on sparse matrices and Gray-code
//! Ryser on dense ones, both generic over the coefficient ring.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::assembly::SparseMatrix;
use crate::error::{Error, Result};
use crate::ring::RingElement;

pub const SYMBOLIC_RYSER_BOUND: usize = 16;
pub const NUMERIC_RYSER_BOUND: usize = 30;

/// A set of vertex-disjoint directed cycles covering every vertex, stored as
/// the successor of each vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleCover {
    pub successor: Vec<usize>,
}

impl CycleCover {
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.successor.len()];
        let mut out = Vec::new();
        for s in 0..self.successor.len() {
            let mut cycle = Vec::new();
            let mut v = s;
            while !seen[v] {
                seen[v] = true;
                cycle.push(v);
                v = self.successor[v];
            }
            if !cycle.is_empty() {
                out.push(cycle);
            }
        }
        out
    }
}

struct Search<'a, T> {
    rows: Vec<Vec<(usize, &'a T)>>,
    cols: Vec<Vec<usize>>,
    row_free: Vec<usize>,
    col_free: Vec<usize>,
    row_done: Vec<bool>,
    col_done: Vec<bool>,
    choice: Vec<usize>,
}

impl<'a, T: RingElement> Search<'a, T> {
    fn new(m: &'a SparseMatrix<T>) -> Self {
        let n = m.dim();
        let rows: Vec<Vec<(usize, &T)>> = (0..n).map(|i| m.row(i).collect()).collect();
        let mut cols = vec![Vec::new(); n];
        for (i, r) in rows.iter().enumerate() {
            for &(j, _) in r {
                cols[j].push(i);
            }
        }
        Self {
            row_free: rows.iter().map(Vec::len).collect(),
            col_free: cols.iter().map(Vec::len).collect(),
            rows,
            cols,
            row_done: vec![false; n],
            col_done: vec![false; n],
            choice: vec![usize::MAX; n],
        }
    }

    /// Marks `i -> j` chosen; returns false if some remaining row or column
    /// is left with no options.
    fn take(&mut self, i: usize, j: usize) -> bool {
        self.row_done[i] = true;
        self.col_done[j] = true;
        self.choice[i] = j;
        let mut ok = true;
        for &(c, _) in &self.rows[i] {
            self.col_free[c] -= 1;
            if !self.col_done[c] && self.col_free[c] == 0 {
                ok = false;
            }
        }
        for &r in &self.cols[j] {
            if r != i {
                self.row_free[r] -= 1;
                if !self.row_done[r] && self.row_free[r] == 0 {
                    ok = false;
                }
            }
        }
        ok
    }

    fn give_back(&mut self, i: usize, j: usize) {
        for &(c, _) in &self.rows[i] {
            self.col_free[c] += 1;
        }
        for &r in &self.cols[j] {
            if r != i {
                self.row_free[r] += 1;
            }
        }
        self.row_done[i] = false;
        self.col_done[j] = false;
        self.choice[i] = usize::MAX;
    }

    fn run(&mut self, acc: &T, visit: &mut dyn FnMut(&[usize], &T)) {
        let next = (0..self.rows.len())
            .filter(|&i| !self.row_done[i])
            .min_by_key(|&i| self.row_free[i]);
        let Some(i) = next else {
            visit(&self.choice, acc);
            return;
        };
        for k in 0..self.rows[i].len() {
            let (j, w) = self.rows[i][k];
            if self.col_done[j] {
                continue;
            }
            if self.take(i, j) {
                self.run(&acc.mul_ref(w), visit);
            }
            self.give_back(i, j);
        }
    }
}

fn walk_covers<T: RingElement>(m: &SparseMatrix<T>, visit: &mut dyn FnMut(&[usize], &T)) {
    let mut s = Search::new(m);
    if s.row_free.contains(&0) || s.col_free.contains(&0) {
        return;
    }
    s.run(&T::one(), visit);
}

/// Sum over all cycle covers of the product of their edge weights.
pub fn permanent_cycle_covers<T: RingElement>(m: &SparseMatrix<T>) -> T {
    let mut total = T::zero();
    walk_covers(m, &mut |_, w| total.add_assign_ref(w));
    total
}

pub fn cycle_covers<T: RingElement>(m: &SparseMatrix<T>) -> Vec<CycleCover> {
    let mut out = Vec::new();
    walk_covers(m, &mut |choice, _| {
        out.push(CycleCover {
            successor: choice.to_vec(),
        })
    });
    out
}

/// Ryser's formula, walking column subsets in Gray-code order. The subset
/// lattice is cut into contiguous segments evaluated in parallel and summed
/// in segment order.
pub fn permanent_ryser<T: RingElement>(m: &[Vec<T>], bound: usize) -> Result<T> {
    let n = m.len();
    if n > bound {
        return Err(Error::DimensionBound { dim: n, bound });
    }
    if n == 0 {
        return Ok(T::one());
    }
    let total: u64 = 1 << n;
    let segments = (rayon::current_num_threads() as u64 * 8).min(total).max(1);
    let step = total.div_ceil(segments);
    let parts: Vec<T> = (0..segments)
        .into_par_iter()
        .map(|s| ryser_segment(m, (s * step).max(1), ((s + 1) * step).min(total)))
        .collect();
    let mut sum = T::zero();
    for p in &parts {
        sum.add_assign_ref(p);
    }
    Ok(if n % 2 == 1 { sum.neg_ref() } else { sum })
}

/// Signed Ryser terms for Gray-code indices `start..end`.
fn ryser_segment<T: RingElement>(m: &[Vec<T>], start: u64, end: u64) -> T {
    let n = m.len();
    let mut acc = T::zero();
    if start >= end {
        return acc;
    }
    let gray = |k: u64| k ^ (k >> 1);
    let first = gray(start);
    let mut sums: Vec<T> = (0..n)
        .map(|i| {
            let mut s = T::zero();
            for j in (0..n).filter(|j| first >> j & 1 == 1) {
                s.add_assign_ref(&m[i][j]);
            }
            s
        })
        .collect();
    let mut subset = first;
    for k in start..end {
        if k > start {
            let j = (k.trailing_zeros()) as usize;
            subset ^= 1 << j;
            let adding = subset >> j & 1 == 1;
            for (s, row) in sums.iter_mut().zip(m) {
                if adding {
                    s.add_assign_ref(&row[j]);
                } else {
                    s.sub_assign_ref(&row[j]);
                }
            }
        }
        let mut prod = sums[0].clone();
        for s in &sums[1..] {
            if prod.is_zero() {
                break;
            }
            prod = prod.mul_ref(s);
        }
        if subset.count_ones() % 2 == 1 {
            acc.sub_assign_ref(&prod);
        } else {
            acc.add_assign_ref(&prod);
        }
    }
    acc
}

pub fn permanent_numeric(m: &[Vec<Complex64>], bound: usize) -> Result<Complex64> {
    permanent_ryser(m, bound)
}
