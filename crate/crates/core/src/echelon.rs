//! Column- and row-echelon patterns of full-rank rectangular matrices, their
//! decomposition into orbits, and the echelon factors of an orbit.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact_matrix::{sample, RationalMatrix, SampleKind};
use crate::leaves::{classify_leaf, LeafIndex};
use crate::permutations::{Parabolic, Permutation};
use crate::sigma::{phi_inv, phi_to_leaf, SigmaTuple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PatternKind {
    /// `rows x t` matrices; pivots are row indices.
    Column { rows: usize, t: usize },
    /// `t x cols` matrices; pivots are column indices.
    Row { t: usize, cols: usize },
}

/// The set of rank-`t` matrices in echelon form with the given pivots.
///
/// Column form: `a[r_j][j] != 0` and `a[i][j] = 0` for `i < r_j`.
/// Row form: `a[i][c_i] != 0` and `a[i][j] = 0` for `j < c_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EchelonPattern {
    kind: PatternKind,
    pivots: Vec<usize>,
}

impl EchelonPattern {
    pub fn new(kind: PatternKind, pivots: Vec<usize>) -> Result<Self> {
        let (t, bound) = match kind {
            PatternKind::Column { rows, t } => (t, rows),
            PatternKind::Row { t, cols } => (t, cols),
        };
        if pivots.len() != t {
            return Err(Error::InvalidPattern(format!(
                "{} pivots given for rank {t}",
                pivots.len()
            )));
        }
        if t == 0 || bound == 0 {
            return Err(Error::InvalidPattern("patterns need t >= 1".into()));
        }
        if pivots.windows(2).any(|w| w[0] >= w[1]) || pivots.iter().any(|&p| p == 0 || p > bound) {
            return Err(Error::InvalidPattern(format!(
                "pivots {pivots:?} are not strictly increasing within 1..={bound}"
            )));
        }
        Ok(EchelonPattern { kind, pivots })
    }

    pub fn column(rows: usize, pivots: Vec<usize>) -> Result<Self> {
        EchelonPattern::new(PatternKind::Column { rows, t: pivots.len() }, pivots)
    }

    pub fn row(cols: usize, pivots: Vec<usize>) -> Result<Self> {
        EchelonPattern::new(PatternKind::Row { t: pivots.len(), cols }, pivots)
    }

    pub fn kind(&self) -> PatternKind {
        self.kind
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn t(&self) -> usize {
        self.pivots.len()
    }

    /// `(rows, cols)` of the member matrices.
    pub fn shape(&self) -> (usize, usize) {
        match self.kind {
            PatternKind::Column { rows, t } => (rows, t),
            PatternKind::Row { t, cols } => (t, cols),
        }
    }

    /// The same pivots read as the other kind, matching under transposition.
    pub fn transposed(&self) -> EchelonPattern {
        let kind = match self.kind {
            PatternKind::Column { rows, t } => PatternKind::Row { t, cols: rows },
            PatternKind::Row { t, cols } => PatternKind::Column { rows: cols, t },
        };
        EchelonPattern {
            kind,
            pivots: self.pivots.clone(),
        }
    }

    /// Every pattern of the given kind with `t` pivots out of `bound`.
    pub fn all(column: bool, bound: usize, t: usize) -> Vec<EchelonPattern> {
        crate::permutations::combinations(bound, t)
            .into_iter()
            .map(|pivots| {
                let kind = if column {
                    PatternKind::Column { rows: bound, t }
                } else {
                    PatternKind::Row { t, cols: bound }
                };
                EchelonPattern { kind, pivots }
            })
            .collect()
    }

    pub fn sample_kind(&self) -> SampleKind {
        match self.kind {
            PatternKind::Column { rows, t } => SampleKind::EchelonCol {
                rows,
                t,
                pivots: self.pivots.clone(),
            },
            PatternKind::Row { t, cols } => SampleKind::EchelonRow {
                t,
                cols,
                pivots: self.pivots.clone(),
            },
        }
    }
}

impl fmt::Display for EchelonPattern {
    /// `col:m,t:r1,...` or `row:t,n:c1,...`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let piv: Vec<String> = self.pivots.iter().map(|p| p.to_string()).collect();
        match self.kind {
            PatternKind::Column { rows, t } => write!(f, "col:{rows},{t}:{}", piv.join(",")),
            PatternKind::Row { t, cols } => write!(f, "row:{t},{cols}:{}", piv.join(",")),
        }
    }
}

impl FromStr for EchelonPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let [kind, shape, pivots] = parts[..] else {
            return Err(Error::Parse(format!("expected kind:shape:pivots, got {s:?}")));
        };
        let ints = |text: &str| -> Result<Vec<usize>> {
            text.split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| t.parse().map_err(|e| Error::Parse(format!("bad integer {t:?}: {e}"))))
                .collect()
        };
        let shape = ints(shape)?;
        let [a, b] = shape[..] else {
            return Err(Error::Parse(format!("shape must have two entries in {s:?}")));
        };
        let pivots = ints(pivots)?;
        let kind = match kind.trim() {
            "col" => PatternKind::Column { rows: a, t: b },
            "row" => PatternKind::Row { t: a, cols: b },
            other => return Err(Error::Parse(format!("unknown pattern kind {other:?}"))),
        };
        EchelonPattern::new(kind, pivots)
    }
}

impl Serialize for EchelonPattern {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for EchelonPattern {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

pub fn in_pattern(a: &RationalMatrix, pattern: &EchelonPattern) -> Result<bool> {
    let (rows, cols) = pattern.shape();
    if (a.rows(), a.cols()) != (rows, cols) {
        return Err(Error::DimensionMismatch {
            expected_rows: rows,
            expected_cols: cols,
            found_rows: a.rows(),
            found_cols: a.cols(),
        });
    }
    let zero = |i, j| num_traits::Zero::is_zero(a.get(i, j));
    Ok(match pattern.kind {
        PatternKind::Column { .. } => pattern
            .pivots
            .iter()
            .enumerate()
            .all(|(k, &r)| !zero(r, k + 1) && (1..r).all(|i| zero(i, k + 1))),
        PatternKind::Row { .. } => pattern
            .pivots
            .iter()
            .enumerate()
            .all(|(k, &c)| !zero(k + 1, c) && (1..c).all(|j| zero(k + 1, j))),
    })
}

/// One orbit inside an echelon pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stratum {
    /// `(y, z)` for column patterns, `(u, v)` for row patterns.
    pub pair: (Permutation, Permutation),
    /// The orbit as a tuple: `(y, 1, z, 1)` in `M(m, t)` or `(1, v, 1, u)`
    /// in `M(t, n)`.
    pub sigma: SigmaTuple,
}

/// The orbits making up the pattern, ordered lexicographically by pair.
pub fn stratify_pattern(pattern: &EchelonPattern) -> Vec<Stratum> {
    let t = pattern.t();
    let size = match pattern.kind {
        PatternKind::Column { rows, .. } => rows,
        PatternKind::Row { cols, .. } => cols,
    };
    // `low` is z (column) or v (row): increasing on 1..t with prescribed
    // head. `high` is y or u: increasing on t+1..size, above `low`.
    let lows: Vec<Permutation> = Permutation::all(size)
        .filter(|p| p.images()[..t] == pattern.pivots[..])
        .collect();
    let highs: Vec<Permutation> = Permutation::all(size)
        .filter(|p| p.is_min_rep(Parabolic::last(size - t)).unwrap())
        .collect();
    let id_t = Permutation::identity(t);
    let mut out = Vec::new();
    for high in &highs {
        for low in &lows {
            if !low.bruhat_leq(high).unwrap() {
                continue;
            }
            let (pair, sigma) = match pattern.kind {
                PatternKind::Column { .. } => (
                    (high.clone(), low.clone()),
                    SigmaTuple::new(high.clone(), id_t.clone(), low.clone(), id_t.clone(), t),
                ),
                PatternKind::Row { .. } => (
                    (high.clone(), low.clone()),
                    SigmaTuple::new(id_t.clone(), low.clone(), id_t.clone(), high.clone(), t),
                ),
            };
            out.push(Stratum {
                pair,
                sigma: sigma.expect("stratum tuple satisfies the tuple invariants"),
            });
        }
    }
    out
}

/// The echelon factors of an orbit: the column factor lives in `M(m, t)`,
/// the row factor in `M(t, n)`. Both are absent for the zero orbit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeafFactors {
    pub sigma: SigmaTuple,
    /// `(y, z)`
    pub col: (Permutation, Permutation),
    /// `(u, v)`
    pub row: (Permutation, Permutation),
    pub col_leaf: Option<LeafIndex>,
    pub row_leaf: Option<LeafIndex>,
    pub col_pattern: Option<EchelonPattern>,
    pub row_pattern: Option<EchelonPattern>,
}

pub fn leaf_factors(leaf: &LeafIndex) -> LeafFactors {
    let sigma = phi_inv(leaf);
    let t = sigma.t;
    let (m, n) = (sigma.m(), sigma.n());
    let col = (sigma.y.clone(), sigma.z.clone());
    let row = (sigma.u.clone(), sigma.v.clone());
    if t == 0 {
        return LeafFactors {
            sigma,
            col,
            row,
            col_leaf: None,
            row_leaf: None,
            col_pattern: None,
            row_pattern: None,
        };
    }
    let id_t = Permutation::identity(t);
    let col_sigma = SigmaTuple::new(col.0.clone(), id_t.clone(), col.1.clone(), id_t.clone(), t)
        .expect("column factor tuple is valid");
    let row_sigma = SigmaTuple::new(id_t.clone(), row.1.clone(), id_t, row.0.clone(), t)
        .expect("row factor tuple is valid");
    let col_pattern = EchelonPattern::column(m, sigma.z.images()[..t].to_vec()).ok();
    let row_pattern = EchelonPattern::row(n, sigma.v.images()[..t].to_vec()).ok();
    LeafFactors {
        col_leaf: phi_to_leaf(&col_sigma).ok(),
        row_leaf: phi_to_leaf(&row_sigma).ok(),
        sigma,
        col,
        row,
        col_pattern,
        row_pattern,
    }
}

/// Zeroes a random selection of the free (non-pivot, unconstrained)
/// entries, keeping the matrix inside its pattern.
pub fn degenerate_in_pattern<R: Rng + ?Sized>(a: &mut RationalMatrix, pattern: &EchelonPattern, rng: &mut R) {
    let mut free = Vec::new();
    match pattern.kind {
        PatternKind::Column { rows, .. } => {
            for (k, &r) in pattern.pivots.iter().enumerate() {
                free.extend((r + 1..=rows).map(|i| (i, k + 1)));
            }
        }
        PatternKind::Row { cols, .. } => {
            for (k, &c) in pattern.pivots.iter().enumerate() {
                free.extend((c + 1..=cols).map(|j| (k + 1, j)));
            }
        }
    }
    if free.is_empty() {
        return;
    }
    // Each free entry is dropped with a per-matrix probability, so sparse
    // and dense degenerations are both common.
    let p = rng.gen_range(0.0..1.0);
    for (i, j) in free {
        if rng.gen_bool(p) {
            a.set_int(i, j, 0);
        }
    }
}

/// Rejection-samples a member of the orbit `target` inside `pattern`.
/// Returns `None` when `attempts` draws all land in other orbits.
pub fn sample_in_stratum<R: Rng + ?Sized>(
    pattern: &EchelonPattern,
    target: &LeafIndex,
    attempts: usize,
    rng: &mut R,
) -> Option<RationalMatrix> {
    let kind = pattern.sample_kind();
    for k in 0..attempts {
        let mut a = sample(&kind, rng).expect("pattern is valid");
        // The first draw is generic, which is all the densest orbit needs.
        if k > 0 {
            degenerate_in_pattern(&mut a, pattern, rng);
        }
        if &classify_leaf(&a) == target {
            return Some(a);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_matrix::seeded_rng;

    #[test]
    fn parse_and_display() {
        let p: EchelonPattern = "row:3,6:2,4,5".parse().unwrap();
        assert_eq!(p.shape(), (3, 6));
        assert_eq!(p.to_string(), "row:3,6:2,4,5");
        let c: EchelonPattern = "col:4,3:1,3,4".parse().unwrap();
        assert_eq!(c.transposed().to_string(), "row:3,4:1,3,4");
        assert!("col:4,2:3,3".parse::<EchelonPattern>().is_err());
        assert!("col:4,2:1".parse::<EchelonPattern>().is_err());
        assert!("diag:2,2:1,2".parse::<EchelonPattern>().is_err());
        assert!("col:2,2:1,3".parse::<EchelonPattern>().is_err());
    }

    #[test]
    fn membership_examples() {
        let p: EchelonPattern = "row:3,6:2,4,5".parse().unwrap();
        let mut e = RationalMatrix::zeros(3, 6);
        e.set_int(1, 2, 1);
        e.set_int(2, 4, 1);
        e.set_int(3, 5, 1);
        assert!(in_pattern(&e, &p).unwrap());
        assert!(!in_pattern(&RationalMatrix::zeros(3, 6), &p).unwrap());
        let c = EchelonPattern::column(2, vec![1, 2]).unwrap();
        assert!(in_pattern(&RationalMatrix::identity(2), &c).unwrap());
        assert!(in_pattern(&RationalMatrix::identity(3), &c).is_err());
    }

    #[test]
    fn strata_counts() {
        let p = EchelonPattern::column(1, vec![1]).unwrap();
        assert_eq!(stratify_pattern(&p).len(), 1);
        for m in 1..=4 {
            for t in 1..=m {
                for p in EchelonPattern::all(true, m, t) {
                    let strata = stratify_pattern(&p);
                    assert!(!strata.is_empty());
                    for s in &strata {
                        assert_eq!(&s.pair.1.images()[..t], p.pivots());
                    }
                }
            }
        }
    }

    #[test]
    fn sampled_members_land_in_listed_strata() {
        let mut rng = seeded_rng(3, 0);
        let p = EchelonPattern::column(3, vec![1, 3]).unwrap();
        let strata: Vec<LeafIndex> = stratify_pattern(&p)
            .iter()
            .map(|s| phi_to_leaf(&s.sigma).unwrap())
            .collect();
        for _ in 0..50 {
            let mut a = sample(&p.sample_kind(), &mut rng).unwrap();
            degenerate_in_pattern(&mut a, &p, &mut rng);
            assert!(in_pattern(&a, &p).unwrap());
            assert!(strata.contains(&classify_leaf(&a)));
        }
    }

    #[test]
    fn factors_of_example_orbit() {
        let w = Permutation::new(vec![6, 2, 3, 5, 4, 1]).unwrap();
        let leaf = LeafIndex::new(w, 3, 3).unwrap();
        let f = leaf_factors(&leaf);
        assert_eq!(f.col_pattern.unwrap().to_string(), "col:3,1:1");
        assert_eq!(f.row_pattern.unwrap().to_string(), "row:1,3:1");
        let zero = LeafIndex::minimum(2, 2).unwrap();
        let f0 = leaf_factors(&zero);
        assert!(f0.col_leaf.is_none() && f0.row_leaf.is_none());
    }
}
