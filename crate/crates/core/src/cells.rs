//! Bruhat cells `B⁺wB⁺` and `B⁻wB⁻` of rectangular matrices: rank-condition
//! membership, closure tests and classification.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_matrix::{ProfileKind, RationalMatrix};
use crate::permutations::PartialPermutation;

/// Which Borel pair acts: upper triangular (`B⁺`) or lower triangular (`B⁻`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Upper,
    Lower,
}

impl Side {
    pub fn profile_kind(self) -> ProfileKind {
        match self {
            Side::Upper => ProfileKind::Southwest,
            Side::Lower => ProfileKind::Northeast,
        }
    }
}

/// Membership in the stratum itself or in its Zariski closure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Cell,
    Closure,
}

fn check_shape(x: &RationalMatrix, w: &PartialPermutation) -> Result<()> {
    if x.rows() != w.rows() || x.cols() != w.cols() {
        return Err(Error::DimensionMismatch {
            expected_rows: w.rows(),
            expected_cols: w.cols(),
            found_rows: x.rows(),
            found_cols: x.cols(),
        });
    }
    Ok(())
}

/// Rank-condition test: in cell mode the corner profiles of `x` and `w`
/// coincide, in closure mode the profile of `x` is bounded by that of `w`.
pub fn in_cell(x: &RationalMatrix, w: &PartialPermutation, side: Side, mode: Mode) -> Result<bool> {
    check_shape(x, w)?;
    let kind = side.profile_kind();
    let target = w.rank_profile(kind);
    // Total rank is the cheapest disqualifier.
    let whole = match side {
        Side::Upper => target.get(1, w.cols()),
        Side::Lower => target.get(w.rows(), 1),
    };
    let rank = x.rank();
    match mode {
        Mode::Cell if rank != whole => return Ok(false),
        Mode::Closure if rank > whole => return Ok(false),
        _ => {}
    }
    let profile = x.rank_profile(kind);
    Ok(match mode {
        Mode::Cell => profile == target,
        Mode::Closure => profile.le(&target),
    })
}

/// The partial permutation naming the cell containing `x`.
pub fn classify(x: &RationalMatrix, side: Side) -> PartialPermutation {
    x.rank_profile(side.profile_kind()).to_partial_permutation()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permutations::Permutation;

    #[test]
    fn membership_examples() {
        let id3 = Permutation::identity(3).to_partial();
        assert!(in_cell(&RationalMatrix::identity(3), &id3, Side::Upper, Mode::Cell).unwrap());
        let swap = RationalMatrix::from_ints(&[[0, 1], [1, 0]]);
        let id2 = Permutation::identity(2).to_partial();
        assert!(!in_cell(&swap, &id2, Side::Upper, Mode::Cell).unwrap());
        let i1 = PartialPermutation::partial_identity(2, 2, 1).unwrap();
        assert!(in_cell(&RationalMatrix::zeros(2, 2), &i1, Side::Upper, Mode::Closure).unwrap());
        assert!(!in_cell(&RationalMatrix::zeros(2, 2), &i1, Side::Upper, Mode::Cell).unwrap());
        assert!(in_cell(&RationalMatrix::zeros(2, 3), &i1, Side::Upper, Mode::Cell).is_err());
    }

    #[test]
    fn classification_examples() {
        let id3 = Permutation::identity(3).to_partial();
        assert_eq!(classify(&RationalMatrix::identity(3), Side::Upper), id3);
        assert_eq!(classify(&RationalMatrix::zeros(2, 4), Side::Upper).rank(), 0);
        let x = RationalMatrix::from_ints(&[[1, 0, 2], [3, 0, 6], [2, 0, 4]]);
        assert_eq!(classify(&x, Side::Upper).to_string(), "3x3:1->3");
        assert_eq!(classify(&x, Side::Lower).to_string(), "3x3:3->1");
    }

    #[test]
    fn partition_over_small_grid() {
        let x = RationalMatrix::from_ints(&[[0, 2, 1], [0, 3, 0]]);
        for side in [Side::Upper, Side::Lower] {
            let class = classify(&x, side);
            for w in PartialPermutation::all(2, 3) {
                assert_eq!(in_cell(&x, &w, side, Mode::Cell).unwrap(), w == class);
            }
        }
    }
}
