//! Smith normal form invariants of integer matrices.
//!
//! Boundary matrices of nerves are large, sparse and mostly ±1. Elimination
//! first pivots on unit entries with sparse column operations (each pivot
//! contributes an invariant factor 1), then hands whatever is left to a dense
//! arbitrary-precision reduction.

#![allow(clippy::needless_range_loop)]

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::budget::{Budget, ResourceLimit};

/// Column-major sparse integer matrix.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    /// Each column sorted by row, without zero entries.
    pub columns: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    /// Builds a column from possibly repeated, unsorted entries.
    pub fn set_column(&mut self, col: usize, entries: impl IntoIterator<Item = (usize, i64)>) {
        let mut v: Vec<(usize, i64)> = entries.into_iter().collect();
        v.sort_by_key(|e| e.0);
        let mut out: Vec<(usize, i64)> = Vec::with_capacity(v.len());
        for (r, x) in v {
            assert!(r < self.rows, "row {r} out of range");
            match out.last_mut() {
                Some(last) if last.0 == r => last.1 += x,
                _ => out.push((r, x)),
            }
        }
        out.retain(|e| e.1 != 0);
        self.columns[col] = out;
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::new(nrows, ncols);
        for c in 0..ncols {
            m.set_column(c, (0..nrows).map(|r| (r, rows[r][c])));
        }
        m
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut d = vec![vec![0; self.cols]; self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, x) in col {
                d[r][c] = x;
            }
        }
        d
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    /// `self · other`, exact.
    pub fn mul(&self, other: &SparseMatrix) -> Vec<Vec<i128>> {
        assert_eq!(self.cols, other.rows);
        let mut out = vec![vec![0i128; other.cols]; self.rows];
        for (c, col) in other.columns.iter().enumerate() {
            for &(k, y) in col {
                for &(r, x) in &self.columns[k] {
                    out[r][c] += x as i128 * y as i128;
                }
            }
        }
        out
    }
}

/// Nonzero Smith invariants `d₁ | d₂ | …`, all positive. Their count is the rank.
pub fn invariant_factors(m: &SparseMatrix, budget: &Budget) -> Result<Vec<BigInt>, ResourceLimit> {
    let (ones, rest) = sparse_unit_elimination(m, budget)?;
    let mut out = vec![BigInt::one(); ones];
    out.extend(dense_invariants(rest, budget)?);
    Ok(out)
}

/// Pivots on ±1 entries. Returns the number of pivots and the residual
/// matrix (nonzero rows and columns only) as dense big integers.
fn sparse_unit_elimination(
    m: &SparseMatrix,
    budget: &Budget,
) -> Result<(usize, Vec<Vec<BigInt>>), ResourceLimit> {
    let mut cols = m.columns.clone();
    let mut row_cols: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.rows];
    for (c, col) in cols.iter().enumerate() {
        for &(r, _) in col {
            row_cols[r].insert(c);
        }
    }
    let mut alive = vec![true; m.cols];
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> = cols
        .iter()
        .enumerate()
        .map(|(c, col)| Reverse((col.len(), c)))
        .collect();
    let mut pivots = 0usize;
    let mut overflowed = false;

    while let Some(Reverse((len, c))) = heap.pop() {
        if !alive[c] || cols[c].len() != len {
            continue;
        }
        if cols[c].is_empty() {
            alive[c] = false;
            continue;
        }
        let pivot = cols[c]
            .iter()
            .filter(|e| e.1.abs() == 1)
            .min_by_key(|e| (row_cols[e.0].len(), e.0))
            .copied();
        let Some((r, v)) = pivot else { continue };
        budget.tick(
            "smith normal form",
            row_cols[r].len() as u64 * (len as u64 + 1),
        )?;
        let pivot_col = std::mem::take(&mut cols[c]);
        let others: Vec<usize> = row_cols[r].iter().copied().filter(|&k| k != c).collect();
        for k in others {
            let a = cols[k]
                .iter()
                .find(|e| e.0 == r)
                .map(|e| e.1)
                .expect("row index in sync");
            // col_k -= (a / v) · col_c, with v = ±1.
            let factor = a * v;
            let Some(merged) = axpy(&cols[k], &pivot_col, factor) else {
                overflowed = true;
                cols[c] = pivot_col.clone();
                break;
            };
            for &(rr, _) in &cols[k] {
                row_cols[rr].remove(&k);
            }
            for &(rr, _) in &merged {
                row_cols[rr].insert(k);
            }
            cols[k] = merged;
            heap.push(Reverse((cols[k].len(), k)));
        }
        if overflowed {
            break;
        }
        for &(rr, _) in &pivot_col {
            row_cols[rr].remove(&c);
        }
        alive[c] = false;
        pivots += 1;
    }

    let live_cols: Vec<usize> = (0..m.cols)
        .filter(|&c| alive[c] && !cols[c].is_empty())
        .collect();
    let mut live_rows: Vec<usize> = live_cols
        .iter()
        .flat_map(|&c| cols[c].iter().map(|e| e.0))
        .collect();
    live_rows.sort_unstable();
    live_rows.dedup();
    let mut dense = vec![vec![BigInt::zero(); live_cols.len()]; live_rows.len()];
    for (j, &c) in live_cols.iter().enumerate() {
        for &(r, x) in &cols[c] {
            let i = live_rows.binary_search(&r).unwrap();
            dense[i][j] = BigInt::from(x);
        }
    }
    Ok((pivots, dense))
}

fn axpy(target: &[(usize, i64)], pivot: &[(usize, i64)], factor: i64) -> Option<Vec<(usize, i64)>> {
    let mut out = Vec::with_capacity(target.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < pivot.len() {
        let next = match (target.get(i), pivot.get(j)) {
            (Some(&(ra, a)), Some(&(rb, b))) if ra == rb => {
                i += 1;
                j += 1;
                (ra, a.checked_sub(factor.checked_mul(b)?)?)
            }
            (Some(&(ra, a)), Some(&(rb, _))) if ra < rb => {
                i += 1;
                (ra, a)
            }
            (Some(&(ra, a)), None) => {
                i += 1;
                (ra, a)
            }
            (_, Some(&(rb, b))) => {
                j += 1;
                (rb, factor.checked_mul(b)?.checked_neg()?)
            }
            (None, None) => unreachable!(),
        };
        if next.1 != 0 {
            out.push(next);
        }
    }
    Some(out)
}

/// Nonzero Smith invariants of a matrix given column by column, without
/// holding it in memory.
///
/// Each column is reduced against earlier ones by its lowest entry; it
/// becomes a pivot when that entry is ±1. Columns stuck on a non-unit
/// lowest entry (or overflowing `i64`) are set aside, cleared of every pivot
/// row at the end and finished densely. Pivot columns are then
/// unitriangular on their pivot rows, so each contributes a factor 1.
pub fn streaming_invariants<I>(
    rows: usize,
    columns: I,
    budget: &Budget,
) -> Result<Vec<BigInt>, ResourceLimit>
where
    I: IntoIterator<Item = Vec<(usize, i64)>>,
{
    const NONE: u32 = u32::MAX;
    let mut pivot_of_row = vec![NONE; rows];
    let mut pivots: Vec<Vec<(usize, i64)>> = Vec::new();
    let mut set_aside: Vec<Vec<(usize, i64)>> = Vec::new();
    for col in columns {
        let mut v = col;
        while let Some(&(r, a)) = v.last() {
            let p = pivot_of_row[r];
            if p != NONE {
                let pc = &pivots[p as usize];
                budget.tick("smith normal form", (v.len() + pc.len()) as u64)?;
                // Lowest entry of a pivot column is ±1.
                match axpy(&v, pc, a * pc.last().unwrap().1) {
                    Some(w) => v = w,
                    None => {
                        set_aside.push(v);
                        break;
                    }
                }
                continue;
            }
            budget.tick("smith normal form", 1)?;
            if a.abs() == 1 {
                pivot_of_row[r] = pivots.len() as u32;
                pivots.push(v);
            } else {
                set_aside.push(v);
            }
            break;
        }
    }
    let mut out = vec![BigInt::one(); pivots.len()];
    if set_aside.is_empty() {
        return Ok(out);
    }
    // Clear pivot rows from the set-aside columns, highest row first; a
    // pivot column only touches rows at or below its pivot.
    let mut reduced: Vec<std::collections::BTreeMap<usize, BigInt>> =
        Vec::with_capacity(set_aside.len());
    for v in set_aside {
        let mut w: std::collections::BTreeMap<usize, BigInt> =
            v.into_iter().map(|(r, x)| (r, BigInt::from(x))).collect();
        let mut cursor = rows;
        while let Some((&r, a)) = w.range(..cursor).next_back() {
            let a = a.clone();
            cursor = r;
            let p = pivot_of_row[r];
            if p == NONE {
                continue;
            }
            let pc = &pivots[p as usize];
            budget.tick("smith normal form", pc.len() as u64)?;
            let factor = a * pc.last().unwrap().1;
            for &(rr, x) in pc {
                let e = w.entry(rr).or_insert_with(BigInt::zero);
                *e -= &factor * BigInt::from(x);
                if e.is_zero() {
                    w.remove(&rr);
                }
            }
        }
        if !w.is_empty() {
            reduced.push(w);
        }
    }
    let mut live_rows: Vec<usize> = reduced.iter().flat_map(|w| w.keys().copied()).collect();
    live_rows.sort_unstable();
    live_rows.dedup();
    let mut dense = vec![vec![BigInt::zero(); reduced.len()]; live_rows.len()];
    for (j, w) in reduced.into_iter().enumerate() {
        for (r, x) in w {
            dense[live_rows.binary_search(&r).unwrap()][j] = x;
        }
    }
    out.extend(dense_invariants(dense, budget)?);
    Ok(out)
}

/// Dense Smith normal form over big integers; returns the nonzero diagonal.
pub fn dense_invariants(
    mut a: Vec<Vec<BigInt>>,
    budget: &Budget,
) -> Result<Vec<BigInt>, ResourceLimit> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // Smallest nonzero entry of the trailing block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            budget.tick("smith normal form", ((rows - t) * (cols - t)) as u64)?;
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..cols {
                    let delta = &q * &a[t][j];
                    a[i][j] -= delta;
                }
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for i in t..rows {
                    let delta = &q * &a[i][t];
                    a[i][j] -= delta;
                }
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // Move the smallest nonzero remainder in row/column t to the pivot.
                let mut best = (t, t);
                for i in t..rows {
                    if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t..cols {
                    if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                a.swap(t, best.0);
                for row in a.iter_mut() {
                    row.swap(t, best.1);
                }
                continue;
            }
            // Row and column clear; enforce divisibility on the trailing block.
            let bad =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        let x = a[i][j].clone();
                        a[t][j] += x;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    Ok(diag)
}

/// Free rank and torsion coefficients (> 1) of `Zⁿ / im(M)` where `M` maps
/// into `Zⁿ`, given the invariants of `M`.
pub fn cokernel(n: usize, invariants: &[BigInt]) -> (usize, Vec<BigInt>) {
    let torsion = invariants.iter().filter(|d| !d.is_one()).cloned().collect();
    (n - invariants.len(), torsion)
}
