//! Exact combinatorics of the torus-orbit stratification of `m x n`
//! matrices into symplectic leaves: orbit indices, rank-condition
//! membership, the tuple bijection, echelon strata and generalized double
//! Bruhat cells, plus seeded verification campaigns tying them together.
//!
//! Everything is 1-based: permutations are one-line arrays over `1..=N`,
//! matrix entries are addressed as `(row, col)` starting at `(1, 1)`, and a
//! permutation `w` is the matrix with a 1 in row `w(j)` of column `j`.

pub mod cells;
pub mod double_bruhat;
pub mod echelon;
pub mod error;
pub mod exact_matrix;
pub mod harness;
pub mod leaves;
pub mod permutations;
pub mod sigma;

pub use cells::{classify, in_cell, Mode, Side};
pub use double_bruhat::DoubleCellIndex;
pub use echelon::EchelonPattern;
pub use error::{Error, Result};
pub use exact_matrix::{ProfileKind, RankProfile, RationalMatrix};
pub use leaves::{classify_leaf, in_leaf, LeafIndex};
pub use permutations::{PartialPermutation, Permutation};
pub use sigma::SigmaTuple;
