//! Exact linear algebra over ℚ and ℤ.

pub mod echelon;
pub mod io;
pub mod lattice;
pub mod matrix;
pub mod smith;

pub use echelon::{
    determinant, independent_rows, kernel, kernel_integer, rank, rank_integer, solve,
    FullColumnRankSolver, Solution,
};
pub use lattice::{saturated_row_basis, unimodular_divisors, HermiteLattice};
pub use matrix::{IntegerMatrix, Matrix, RationalMatrix};
pub use smith::{smith, ElementaryOp, SmithDecomposition, Unimodular};
