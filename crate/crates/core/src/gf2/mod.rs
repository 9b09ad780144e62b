//! Sparse linear algebra over GF(2).

mod bitvec;
mod elimination;
mod sparse;

pub use bitvec::BitVector;
pub use elimination::{
    in_rowspace, row_echelon, solve_mod2, EliminationResult, IncrementalElimination, RowOp,
};
pub use sparse::{matvec_mod2, SparseBinaryMatrix};
