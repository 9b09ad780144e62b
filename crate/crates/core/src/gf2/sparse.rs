use crate::error::{Error, Result};
use crate::gf2::BitVector;

/// A 0/1 matrix over GF(2) kept in both row and column adjacency form.
///
/// Message passing walks rows (checks) and columns (variables) alike, so both
/// views are materialised at construction and never mutated afterwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseBinaryMatrix {
    rows: usize,
    cols: usize,
    row_adj: Vec<Vec<usize>>,
    col_adj: Vec<Vec<usize>>,
}

impl SparseBinaryMatrix {
    /// Builds a matrix from per-row column lists. Lists may be unordered but
    /// must not repeat an index.
    pub fn from_rows(rows: usize, cols: usize, row_adj: Vec<Vec<usize>>) -> Result<Self> {
        if row_adj.len() != rows {
            return Err(Error::dims(format!(
                "expected {rows} row lists, got {}",
                row_adj.len()
            )));
        }
        let mut checked = Vec::with_capacity(rows);
        for (r, list) in row_adj.into_iter().enumerate() {
            let v = BitVector::from_support(cols, list)
                .map_err(|e| Error::value(format!("row {r}: {e}")))?;
            checked.push(v.support().to_vec());
        }
        Ok(Self::from_sorted_rows(rows, cols, checked))
    }

    /// Builds a matrix from per-column row lists.
    pub fn from_columns(rows: usize, cols: usize, col_adj: Vec<Vec<usize>>) -> Result<Self> {
        Ok(Self::from_rows(cols, rows, col_adj)?.transpose())
    }

    pub fn from_entries(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut row_adj = vec![Vec::new(); rows];
        for (r, c) in entries {
            if r >= rows {
                return Err(Error::dims(format!("row {r} out of range for {rows} rows")));
            }
            row_adj[r].push(c);
        }
        Self::from_rows(rows, cols, row_adj)
    }

    pub(crate) fn from_sorted_rows(rows: usize, cols: usize, row_adj: Vec<Vec<usize>>) -> Self {
        let mut col_adj = vec![Vec::new(); cols];
        for (r, list) in row_adj.iter().enumerate() {
            for &c in list {
                col_adj[c].push(r);
            }
        }
        SparseBinaryMatrix {
            rows,
            cols,
            row_adj,
            col_adj,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_sorted_rows(n, n, (0..n).map(|i| vec![i]).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_sorted_rows(rows, cols, vec![Vec::new(); rows])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.row_adj.iter().map(Vec::len).sum()
    }

    /// Sorted column indices of the ones in row `r`.
    pub fn row(&self, r: usize) -> &[usize] {
        &self.row_adj[r]
    }

    /// Sorted row indices of the ones in column `c`.
    pub fn col(&self, c: usize) -> &[usize] {
        &self.col_adj[c]
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.row_adj[r].binary_search(&c).is_ok()
    }

    pub fn transpose(&self) -> Self {
        SparseBinaryMatrix {
            rows: self.cols,
            cols: self.rows,
            row_adj: self.col_adj.clone(),
            col_adj: self.row_adj.clone(),
        }
    }

    /// `self · x mod 2`.
    pub fn matvec(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() != self.cols {
            return Err(Error::dims(format!(
                "vector of length {} against a matrix with {} columns",
                x.len(),
                self.cols
            )));
        }
        let mut parity = vec![false; self.rows];
        for j in x.iter() {
            for &r in &self.col_adj[j] {
                parity[r] ^= true;
            }
        }
        Ok(BitVector::from_bools(&parity))
    }

    /// The submatrix on the given rows and columns, re-indexed to
    /// `0..rows.len()` × `0..cols.len()` in the order given.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut local_col = vec![usize::MAX; self.cols];
        for (k, &c) in cols.iter().enumerate() {
            local_col[c] = k;
        }
        let row_adj = rows
            .iter()
            .map(|&r| {
                let mut list: Vec<usize> = self.row_adj[r]
                    .iter()
                    .filter_map(|&c| (local_col[c] != usize::MAX).then_some(local_col[c]))
                    .collect();
                list.sort_unstable();
                list
            })
            .collect();
        Self::from_sorted_rows(rows.len(), cols.len(), row_adj)
    }

    pub fn to_dense(&self) -> Vec<Vec<bool>> {
        let mut dense = vec![vec![false; self.cols]; self.rows];
        for (r, list) in self.row_adj.iter().enumerate() {
            for &c in list {
                dense[r][c] = true;
            }
        }
        dense
    }

    pub fn from_dense(dense: &[Vec<bool>], cols: usize) -> Self {
        let row_adj = dense
            .iter()
            .map(|row| {
                debug_assert_eq!(row.len(), cols);
                row.iter()
                    .enumerate()
                    .filter_map(|(c, &b)| b.then_some(c))
                    .collect()
            })
            .collect();
        Self::from_sorted_rows(dense.len(), cols, row_adj)
    }
}

/// `m · x mod 2`.
pub fn matvec_mod2(m: &SparseBinaryMatrix, x: &BitVector) -> Result<BitVector> {
    m.matvec(x)
}
