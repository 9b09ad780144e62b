//! Gauss–Jordan elimination over GF(2) with a replayable row-operation log.
//!
//! Elimination never swaps rows. Each pivot column is reduced to a unit
//! vector at its pivot row, and every XOR performed is appended to the log,
//! so the same transformation can be replayed on any right-hand side.
//!
//! Two front ends share the log representation:
//! * [`row_echelon`] eliminates a whole matrix at once on word-packed rows;
//! * [`IncrementalElimination`] accepts rows and columns one at a time, the
//!   access pattern of a growing LSD cluster.

use crate::error::{Error, Result};
use crate::gf2::{BitVector, SparseBinaryMatrix};

/// `row[dst] ^= row[src]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RowOp {
    pub src: usize,
    pub dst: usize,
}

/// Outcome of eliminating a matrix under a prescribed column order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EliminationResult {
    rows: usize,
    cols: usize,
    pivot_columns: Vec<usize>,
    pivot_rows: Vec<usize>,
    is_pivot_row: Vec<bool>,
    ops: Vec<RowOp>,
}

impl EliminationResult {
    pub fn rank(&self) -> usize {
        self.pivot_columns.len()
    }

    /// Pivot columns in the order they were found.
    pub fn pivot_columns(&self) -> &[usize] {
        &self.pivot_columns
    }

    /// `pivot_rows()[k]` holds the unit entry of `pivot_columns()[k]`.
    pub fn pivot_rows(&self) -> &[usize] {
        &self.pivot_rows
    }

    pub fn ops(&self) -> &[RowOp] {
        &self.ops
    }

    /// Replays the logged row operations on `rhs`.
    pub fn apply(&self, rhs: &mut [bool]) {
        debug_assert_eq!(rhs.len(), self.rows);
        for op in &self.ops {
            if rhs[op.src] {
                rhs[op.dst] ^= true;
            }
        }
    }

    /// Solves `m · x = s`, setting every non-pivot column of `x` to zero.
    pub fn solve(&self, s: &BitVector) -> Result<BitVector> {
        if s.len() != self.rows {
            return Err(Error::dims(format!(
                "syndrome of length {} for a matrix with {} rows",
                s.len(),
                self.rows
            )));
        }
        let mut rhs = s.to_bools();
        self.apply(&mut rhs);
        if rhs
            .iter()
            .zip(&self.is_pivot_row)
            .any(|(&bit, &pivot)| bit && !pivot)
        {
            return Err(Error::Unsolvable);
        }
        let mut support: Vec<usize> = self
            .pivot_columns
            .iter()
            .zip(&self.pivot_rows)
            .filter_map(|(&c, &r)| rhs[r].then_some(c))
            .collect();
        support.sort_unstable();
        Ok(BitVector::from_sorted_unchecked(self.cols, support))
    }
}

/// Word-packed rows for the batch elimination path.
struct PackedRows {
    words: usize,
    data: Vec<u64>,
}

impl PackedRows {
    fn from_matrix(m: &SparseBinaryMatrix) -> Self {
        let words = m.cols().div_ceil(64).max(1);
        let mut data = vec![0u64; words * m.rows()];
        for r in 0..m.rows() {
            for &c in m.row(r) {
                data[r * words + c / 64] |= 1 << (c % 64);
            }
        }
        PackedRows { words, data }
    }

    fn bit(&self, r: usize, c: usize) -> bool {
        self.data[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    fn xor_into(&mut self, src: usize, dst: usize) {
        let w = self.words;
        let (s, d) = (src * w, dst * w);
        if s < d {
            let (lo, hi) = self.data.split_at_mut(d);
            for (x, y) in hi[..w].iter_mut().zip(&lo[s..s + w]) {
                *x ^= *y;
            }
        } else {
            let (lo, hi) = self.data.split_at_mut(s);
            for (x, y) in lo[d..d + w].iter_mut().zip(&hi[..w]) {
                *x ^= *y;
            }
        }
    }
}

fn check_permutation(order: &[usize], n: usize) -> Result<()> {
    if order.len() != n {
        return Err(Error::dims(format!(
            "column order has {} entries for {n} columns",
            order.len()
        )));
    }
    let mut seen = vec![false; n];
    for &c in order {
        if c >= n || std::mem::replace(&mut seen[c], true) {
            return Err(Error::value("column order is not a permutation"));
        }
    }
    Ok(())
}

/// Eliminates `m`, visiting columns in `column_order`. A column becomes a
/// pivot when it is independent of the columns visited before it; its pivot
/// row is the lowest-index unused row with a one in it.
pub fn row_echelon(m: &SparseBinaryMatrix, column_order: &[usize]) -> Result<EliminationResult> {
    check_permutation(column_order, m.cols())?;
    let rows = m.rows();
    let mut packed = PackedRows::from_matrix(m);
    let mut result = EliminationResult {
        rows,
        cols: m.cols(),
        is_pivot_row: vec![false; rows],
        ..Default::default()
    };
    for &c in column_order {
        if result.rank() == rows {
            break;
        }
        let Some(p) = (0..rows).find(|&r| !result.is_pivot_row[r] && packed.bit(r, c)) else {
            continue;
        };
        for r in 0..rows {
            if r != p && packed.bit(r, c) {
                packed.xor_into(p, r);
                result.ops.push(RowOp { src: p, dst: r });
            }
        }
        result.is_pivot_row[p] = true;
        result.pivot_columns.push(c);
        result.pivot_rows.push(p);
    }
    Ok(result)
}

/// Solves `m · x = s` with pivots chosen under `column_order`.
pub fn solve_mod2(
    m: &SparseBinaryMatrix,
    s: &BitVector,
    column_order: &[usize],
) -> Result<BitVector> {
    if s.len() != m.rows() {
        return Err(Error::dims(format!(
            "syndrome of length {} for a matrix with {} rows",
            s.len(),
            m.rows()
        )));
    }
    let x = row_echelon(m, column_order)?.solve(s)?;
    debug_assert_eq!(m.matvec(&x).as_ref().ok(), Some(s));
    Ok(x)
}

/// Whether `v` is a GF(2) combination of the rows of `m`.
pub fn in_rowspace(m: &SparseBinaryMatrix, v: &BitVector) -> Result<bool> {
    if v.len() != m.cols() {
        return Err(Error::dims(format!(
            "vector of length {} against a matrix with {} columns",
            v.len(),
            m.cols()
        )));
    }
    // v ∈ rowspace(m)  ⇔  mᵀ·y = v is solvable.
    let mt = m.transpose();
    let order: Vec<usize> = (0..mt.cols()).collect();
    match row_echelon(&mt, &order)?.solve(v) {
        Ok(_) => Ok(true),
        Err(Error::Unsolvable) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Elimination that grows one row or column at a time, tracking a single
/// right-hand side.
///
/// Rows must be added before any column that touches them, and a new row may
/// only intersect existing columns through the `entries` passed to
/// [`add_row`](Self::add_row). Columns become pivots in the order they are
/// added.
#[derive(Clone, Debug, Default)]
pub struct IncrementalElimination {
    rows: usize,
    cols: usize,
    pivot_row_of_col: Vec<Option<usize>>,
    pivot_columns: Vec<usize>,
    pivot_rows: Vec<usize>,
    is_pivot_row: Vec<bool>,
    ops: Vec<RowOp>,
    rhs: Vec<bool>,
}

impl IncrementalElimination {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.pivot_columns.len()
    }

    pub fn pivot_columns(&self) -> &[usize] {
        &self.pivot_columns
    }

    pub fn ops(&self) -> &[RowOp] {
        &self.ops
    }

    fn push_op(&mut self, src: usize, dst: usize) {
        self.ops.push(RowOp { src, dst });
        if self.rhs[src] {
            self.rhs[dst] ^= true;
        }
    }

    /// Appends a row whose ones in the existing columns are `entries` (local
    /// column indices) and whose right-hand side bit is `rhs`. Returns the
    /// local row index.
    pub fn add_row(&mut self, entries: &[usize], rhs: bool) -> usize {
        let r = self.rows;
        self.rows += 1;
        self.is_pivot_row.push(false);
        self.rhs.push(rhs);
        // Pivot columns are unit vectors, so clearing the new row's entry in
        // pivot column k touches no other pivot column.
        for &c in entries {
            debug_assert!(c < self.cols);
            if let Some(p) = self.pivot_row_of_col[c] {
                self.push_op(p, r);
            }
        }
        r
    }

    /// Appends a column with ones at local rows `entries`. Returns whether it
    /// became a pivot.
    pub fn add_column(&mut self, entries: &[usize]) -> bool {
        let c = self.cols;
        self.cols += 1;
        let mut col = vec![false; self.rows];
        for &r in entries {
            debug_assert!(r < self.rows);
            col[r] = true;
        }
        for op in &self.ops {
            if col[op.src] {
                col[op.dst] ^= true;
            }
        }
        let Some(p) = (0..self.rows).find(|&r| col[r] && !self.is_pivot_row[r]) else {
            self.pivot_row_of_col.push(None);
            return false;
        };
        for (r, &bit) in col.iter().enumerate() {
            if r != p && bit {
                self.push_op(p, r);
            }
        }
        self.is_pivot_row[p] = true;
        self.pivot_row_of_col.push(Some(p));
        self.pivot_columns.push(c);
        self.pivot_rows.push(p);
        true
    }

    /// Block-diagonal union: `other`'s rows and columns are appended after
    /// this one's, keeping their relative order.
    pub fn absorb(&mut self, other: IncrementalElimination) {
        let (dr, dc) = (self.rows, self.cols);
        self.ops.extend(other.ops.iter().map(|op| RowOp {
            src: op.src + dr,
            dst: op.dst + dr,
        }));
        self.pivot_row_of_col
            .extend(other.pivot_row_of_col.iter().map(|p| p.map(|r| r + dr)));
        self.pivot_columns
            .extend(other.pivot_columns.iter().map(|c| c + dc));
        self.pivot_rows
            .extend(other.pivot_rows.iter().map(|r| r + dr));
        self.is_pivot_row.extend(other.is_pivot_row);
        self.rhs.extend(other.rhs);
        self.rows += other.rows;
        self.cols += other.cols;
    }

    /// Whether the tracked right-hand side lies in the column space.
    pub fn is_consistent(&self) -> bool {
        self.rhs
            .iter()
            .zip(&self.is_pivot_row)
            .all(|(&bit, &pivot)| !bit || pivot)
    }

    /// Local columns set in the pivot-only solution. Meaningful only when
    /// [`is_consistent`](Self::is_consistent).
    pub fn solution(&self) -> Vec<usize> {
        self.pivot_columns
            .iter()
            .zip(&self.pivot_rows)
            .filter_map(|(&c, &r)| self.rhs[r].then_some(c))
            .collect()
    }
}
