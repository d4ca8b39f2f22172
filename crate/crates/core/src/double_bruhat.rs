//! Generalized double Bruhat cells `B⁺w₁B⁺ ∩ B⁻w₂B⁻` in `M(m, n)`.

use serde::{Deserialize, Serialize};

use crate::cells::{self, Side};
use crate::error::{Error, Result};
use crate::exact_matrix::RationalMatrix;
use crate::leaves::{lower_block, upper_block, LeafIndex};
use crate::permutations::{subset_leq, PartialPermutation, Permutation};
use crate::sigma::{decompose_partial, phi_to_leaf, Form, SigmaTuple};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DoubleCellIndex {
    pub w1: PartialPermutation,
    pub w2: PartialPermutation,
}

impl DoubleCellIndex {
    pub fn new(w1: PartialPermutation, w2: PartialPermutation) -> Result<Self> {
        if (w1.rows(), w1.cols()) != (w2.rows(), w2.cols()) {
            return Err(Error::DimensionMismatch {
                expected_rows: w1.rows(),
                expected_cols: w1.cols(),
                found_rows: w2.rows(),
                found_cols: w2.cols(),
            });
        }
        Ok(DoubleCellIndex { w1, w2 })
    }

    pub fn m(&self) -> usize {
        self.w1.rows()
    }

    pub fn n(&self) -> usize {
        self.w1.cols()
    }

    fn factors(&self) -> (Permutation, Permutation, Permutation, Permutation) {
        let (y, v0) = decompose_partial(&self.w1, Form::Yv);
        let (z0, u) = decompose_partial(&self.w2, Form::Zu);
        (y, v0, z0, u)
    }
}

/// Nonemptiness through the factorizations `w₁ = y·I_t·v₀⁻¹`,
/// `w₂ = z₀·I_t·u⁻¹`: nonempty iff `z₀ <= y` and `v₀ <= u`.
pub fn nonempty_by_factors(d: &DoubleCellIndex) -> bool {
    if d.w1.rank() != d.w2.rank() {
        return false;
    }
    let (y, v0, z0, u) = d.factors();
    z0.bruhat_leq(&y).unwrap() && v0.bruhat_leq(&u).unwrap()
}

/// Nonemptiness through `dom(w₁) <= dom(w₂)` and `rng(w₁) >= rng(w₂)`.
pub fn nonempty_by_support(d: &DoubleCellIndex) -> bool {
    if d.w1.rank() != d.w2.rank() {
        return false;
    }
    subset_leq(&d.w1.domain(), &d.w2.domain()).unwrap()
        && subset_leq(&d.w2.range(), &d.w1.range()).unwrap()
}

/// Nonemptiness by search: some orbit index among `leaves` has lower-left
/// block `w₁` and upper-right block `w°ⁿ·w₂ᵀ·w°ᵐ`.
pub fn nonempty_by_search(d: &DoubleCellIndex, leaves: &[LeafIndex]) -> bool {
    leaves
        .iter()
        .any(|l| upper_block(l) == d.w1 && lower_block(l) == d.w2)
}

pub fn is_nonempty(d: &DoubleCellIndex) -> bool {
    let by_factors = nonempty_by_factors(d);
    let by_support = nonempty_by_support(d);
    assert_eq!(
        by_factors, by_support,
        "nonemptiness criteria disagree on {} / {}",
        d.w1, d.w2
    );
    by_factors
}

/// The orbits partitioning the cell, as tuples `(y, v₀τ₂, z₀τ₁, u)`, sorted.
pub fn decompose(d: &DoubleCellIndex) -> Result<Vec<SigmaTuple>> {
    if !is_nonempty(d) {
        return Err(Error::EmptyCell);
    }
    let (m, n, t) = (d.m(), d.n(), d.w1.rank());
    let (y, v0, z0, u) = d.factors();
    let zs: Vec<Permutation> = Permutation::all(m - t)
        .map(|tau| z0.compose_unchecked(&tau.embed(m, t)))
        .filter(|z| z.bruhat_leq(&y).unwrap())
        .collect();
    let vs: Vec<Permutation> = Permutation::all(n - t)
        .map(|tau| v0.compose_unchecked(&tau.embed(n, t)))
        .filter(|v| v.bruhat_leq(&u).unwrap())
        .collect();
    let mut out = Vec::with_capacity(zs.len() * vs.len());
    for z in &zs {
        for v in &vs {
            let sigma = SigmaTuple::new(y.clone(), v.clone(), z.clone(), u.clone(), t)?;
            out.push(sigma);
        }
    }
    out.sort();
    Ok(out)
}

/// The orbit open and dense in the cell: `(y, v₀, z₀, u)`.
pub fn dense_orbit(d: &DoubleCellIndex) -> Result<SigmaTuple> {
    if !is_nonempty(d) {
        return Err(Error::EmptyCell);
    }
    let (y, v0, z0, u) = d.factors();
    let dense = SigmaTuple::new(y, v0, z0, u, d.w1.rank())?;
    if cfg!(debug_assertions) {
        let top = phi_to_leaf(&dense)?;
        for s in decompose(d)? {
            debug_assert!(phi_to_leaf(&s)?.w().bruhat_leq(top.w())?);
        }
    }
    Ok(dense)
}

/// `(B⁺ class, B⁻ class)` of `x`.
pub fn classify_double(x: &RationalMatrix) -> DoubleCellIndex {
    DoubleCellIndex {
        w1: cells::classify(x, Side::Upper),
        w2: cells::classify(x, Side::Lower),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(s: &str) -> PartialPermutation {
        s.parse().unwrap()
    }

    fn example_cell() -> DoubleCellIndex {
        DoubleCellIndex::new(pp("3x3:1->3"), pp("3x3:3->1")).unwrap()
    }

    #[test]
    fn nonemptiness_examples() {
        assert!(is_nonempty(&example_cell()));
        let swapped = DoubleCellIndex::new(pp("3x3:3->1"), pp("3x3:1->3")).unwrap();
        assert!(!is_nonempty(&swapped));
        for w in PartialPermutation::all(2, 3) {
            assert!(is_nonempty(&DoubleCellIndex::new(w.clone(), w).unwrap()));
        }
        let rank_gap = DoubleCellIndex::new(pp("2x2:1->1"), pp("2x2:")).unwrap();
        assert!(!is_nonempty(&rank_gap));
        assert!(DoubleCellIndex::new(pp("2x2:"), pp("2x3:")).is_err());
    }

    #[test]
    fn example_decomposition() {
        let d = example_cell();
        let orbits = decompose(&d).unwrap();
        assert_eq!(orbits.len(), 4);
        let dense = dense_orbit(&d).unwrap();
        assert!(orbits.contains(&dense));
        let p = |v: &[usize]| Permutation::new(v.to_vec()).unwrap();
        assert_eq!(
            dense,
            SigmaTuple::new(p(&[3, 1, 2]), p(&[1, 2, 3]), p(&[1, 2, 3]), p(&[3, 1, 2]), 1).unwrap()
        );
        // The generic rank-one member lands in the dense orbit.
        let generic = RationalMatrix::from_ints(&[[1, 2, 3], [2, 4, 6], [3, 6, 9]]);
        let top = phi_to_leaf(&dense).unwrap();
        assert_eq!(crate::leaves::classify_leaf(&generic), top);
        assert_eq!(top.dim(), 5);
        // The middle-column-zero stratum is a proper orbit of dimension 4.
        let reference =
            SigmaTuple::new(p(&[3, 1, 2]), p(&[1, 3, 2]), p(&[1, 2, 3]), p(&[3, 1, 2]), 1).unwrap();
        assert!(orbits.contains(&reference));
        assert_eq!(phi_to_leaf(&reference).unwrap().w().to_string(), "6,2,3,5,4,1");
        assert_eq!(phi_to_leaf(&reference).unwrap().dim(), 4);
        let swapped = DoubleCellIndex::new(pp("3x3:3->1"), pp("3x3:1->3")).unwrap();
        assert_eq!(decompose(&swapped), Err(Error::EmptyCell));
        assert_eq!(dense_orbit(&swapped), Err(Error::EmptyCell));
    }

    #[test]
    fn full_rank_cell_is_single_orbit() {
        let w = pp("2x2:1->2,2->1");
        let d = DoubleCellIndex::new(w.clone(), w).unwrap();
        assert_eq!(decompose(&d).unwrap().len(), 1);
    }

    #[test]
    fn classification_examples() {
        let x = RationalMatrix::from_ints(&[[1, 0, 2], [3, 0, 6], [2, 0, 4]]);
        assert_eq!(classify_double(&x), example_cell());
        let z = classify_double(&RationalMatrix::zeros(2, 3));
        assert_eq!((z.w1.rank(), z.w2.rank()), (0, 0));
        let i = PartialPermutation::partial_identity(3, 2, 2).unwrap();
        let d = classify_double(&i.to_matrix());
        assert_eq!((d.w1, d.w2), (i.clone(), i));
    }
}
