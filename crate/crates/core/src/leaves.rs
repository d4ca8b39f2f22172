//! Torus orbits of symplectic leaves in `M(m, n)`.
//!
//! Orbits are indexed by permutations `w` of `S_{m+n}` lying above
//! `(w°ⁿ, w°ᵐ)` in the Bruhat order. A matrix `x` lies in the orbit `P_w`
//! exactly when `[[w°ⁿ, 0], [x, w°ᵐ]]` lies in `B⁺wB⁺`.

use std::fmt::Write as _;

use serde::{Deserialize, Deserializer, Serialize};

use crate::cells::{self, Mode, Side};
use crate::error::{Error, Result};
use crate::exact_matrix::{ProfileKind, RankProfile, RationalMatrix};
use crate::permutations::{block_split, Blocks, PartialPermutation, Permutation};

/// A permutation naming an orbit of `M(m, n)`, with its rank `t` (the rank
/// of the lower-left block) and the orbit dimension.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LeafIndex {
    w: Permutation,
    m: usize,
    n: usize,
    t: usize,
    dim: usize,
}

#[derive(Deserialize)]
struct LeafIndexWire {
    w: Permutation,
    m: usize,
    n: usize,
}

impl<'de> Deserialize<'de> for LeafIndex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = LeafIndexWire::deserialize(d)?;
        LeafIndex::new(wire.w, wire.m, wire.n).map_err(serde::de::Error::custom)
    }
}

/// `n <= w(i) + i - 1 <= m + 2n` for every position.
pub fn in_window(w: &[usize], m: usize, n: usize) -> bool {
    w.iter()
        .enumerate()
        .all(|(k, &v)| v + k >= n && v + k <= m + 2 * n)
}

impl LeafIndex {
    pub fn new(w: Permutation, m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidParameter("m and n must be positive".into()));
        }
        if w.size() != m + n {
            return Err(Error::SizeMismatch {
                expected: m + n,
                found: w.size(),
            });
        }
        if !in_window(w.images(), m, n) {
            return Err(Error::NotALeafIndex {
                w: w.images().to_vec(),
                m,
                n,
            });
        }
        Ok(LeafIndex::from_window_checked(w, m, n))
    }

    fn from_window_checked(w: Permutation, m: usize, n: usize) -> Self {
        let t = (1..=n).filter(|&j| w.image(j) > n).count();
        let dim = w.length() - Permutation::block_longest(n, m).length();
        LeafIndex { w, m, n, t, dim }
    }

    pub fn w(&self) -> &Permutation {
        &self.w
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `[[w11, w12], [w21, w22]]` with `w11` of size `n x n`.
    pub fn blocks(&self) -> Blocks {
        block_split(&self.w, self.n, self.m).expect("leaf index has size m + n")
    }

    /// The smallest index `(w°ⁿ, w°ᵐ)`, naming the zero orbit.
    pub fn minimum(m: usize, n: usize) -> Result<Self> {
        LeafIndex::new(Permutation::block_longest(n, m), m, n)
    }

    /// The largest index `w°ᴺ`, naming the dense orbit.
    pub fn maximum(m: usize, n: usize) -> Result<Self> {
        LeafIndex::new(Permutation::longest(m + n), m, n)
    }
}

/// All leaf indices of `M(m, n)` in lexicographic order of `w`, optionally
/// restricted to rank `t`.
pub fn enumerate(m: usize, n: usize, t_filter: Option<usize>) -> Vec<LeafIndex> {
    fn rec(
        pos: usize,
        size: usize,
        m: usize,
        n: usize,
        used: &mut [bool],
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if pos == size {
            out.push(cur.clone());
            return;
        }
        // w(pos+1) + pos must lie in [n, m + 2n]
        let lo = n.saturating_sub(pos).max(1);
        let hi = (m + 2 * n - pos).min(size);
        for v in lo..=hi {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(pos + 1, size, m, n, used, cur, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    if m == 0 || n == 0 {
        return Vec::new();
    }
    let size = m + n;
    let mut raw = Vec::new();
    rec(0, size, m, n, &mut vec![false; size + 1], &mut Vec::with_capacity(size), &mut raw);
    let floor = Permutation::block_longest(n, m);
    raw.into_iter()
        .map(|images| {
            let w = Permutation::from_images_unchecked(images);
            debug_assert!(floor.bruhat_leq(&w).unwrap());
            LeafIndex::from_window_checked(w, m, n)
        })
        .filter(|l| t_filter.map_or(true, |t| l.t == t))
        .collect()
}

/// The orbit index set computed from the Bruhat characterization alone:
/// all of `S_N` filtered by `w >= (w°ⁿ, w°ᵐ)`.
pub fn enumerate_by_bruhat(m: usize, n: usize) -> Vec<Permutation> {
    let floor = Permutation::block_longest(n, m);
    Permutation::all(m + n)
        .filter(|w| floor.bruhat_leq(w).unwrap())
        .collect()
}

/// Rank data of a matrix consumed by the four rank conditions.
#[derive(Debug, Clone)]
pub struct LeafProbe {
    m: usize,
    n: usize,
    southwest: RankProfile,
    northeast: RankProfile,
    /// `column_ranks[p-1][q-1] = rank(x[1..m; p..q])`
    column_ranks: Vec<Vec<usize>>,
    /// `row_ranks[p-1][q-1] = rank(x[p..q; 1..n])`
    row_ranks: Vec<Vec<usize>>,
}

impl LeafProbe {
    pub fn new(x: &RationalMatrix) -> Self {
        LeafProbe {
            m: x.rows(),
            n: x.cols(),
            southwest: x.rank_profile(ProfileKind::Southwest),
            northeast: x.rank_profile(ProfileKind::Northeast),
            column_ranks: x.column_interval_ranks(),
            row_ranks: x.row_interval_ranks(),
        }
    }

    /// Evaluates the four rank conditions against precomputed targets.
    pub fn satisfies(&self, target: &LeafTargets, mode: Mode) -> bool {
        debug_assert_eq!((self.m, self.n), (target.m, target.n));
        let ok = |actual: usize, wanted: usize| match mode {
            Mode::Cell => actual == wanted,
            Mode::Closure => actual <= wanted,
        };
        let profile_ok = |actual: &RankProfile, wanted: &RankProfile| match mode {
            Mode::Cell => actual == wanted,
            Mode::Closure => actual.le(wanted),
        };
        profile_ok(&self.southwest, &target.southwest)
            && profile_ok(&self.northeast, &target.northeast)
            && target
                .column_conditions
                .iter()
                .all(|&(p, q, r)| ok(self.column_ranks[p - 1][q - 1], r))
            && target
                .row_conditions
                .iter()
                .all(|&(p, q, r)| ok(self.row_ranks[p - 1][q - 1], r))
    }
}

/// The right-hand sides of the four rank conditions for one orbit.
#[derive(Debug, Clone)]
pub struct LeafTargets {
    m: usize,
    n: usize,
    /// (a): southwest profile of the lower-left block
    southwest: RankProfile,
    /// (b): northeast profile of `w°ᵐ · w12ᵀ · w°ⁿ`
    northeast: RankProfile,
    /// (c): `(p, q, r)` for `2 <= p <= q <= n`
    column_conditions: Vec<(usize, usize, usize)>,
    /// (d): `(p, q, r)` for `1 <= p <= q <= m - 1`
    row_conditions: Vec<(usize, usize, usize)>,
}

impl LeafTargets {
    pub fn new(leaf: &LeafIndex) -> Self {
        let (m, n) = (leaf.m, leaf.n);
        let Blocks { b11, b12, b21, b22 } = leaf.blocks();
        let rev_m = Permutation::longest(m).to_partial();
        let rev_n = Permutation::longest(n).to_partial();
        let northeast_block = rev_m
            .compose_unchecked(&b12.transpose())
            .compose_unchecked(&rev_n);
        let upper = rev_n.compose_unchecked(&b11);
        let lower = b22.compose_unchecked(&rev_m);
        let mut column_conditions = Vec::new();
        for p in 2..=n {
            for q in p..=n {
                let r = q + 1 - p - upper.submatrix_rank(p, n, p, q);
                column_conditions.push((p, q, r));
            }
        }
        let mut row_conditions = Vec::new();
        for p in 1..m {
            for q in p..m {
                let r = q + 1 - p - lower.submatrix_rank(p, q, 1, q);
                row_conditions.push((p, q, r));
            }
        }
        LeafTargets {
            m,
            n,
            southwest: b21.rank_profile(ProfileKind::Southwest),
            northeast: northeast_block.rank_profile(ProfileKind::Northeast),
            column_conditions,
            row_conditions,
        }
    }

    /// Targets of condition (c) as `(p, q, rank)` triples.
    pub fn column_conditions(&self) -> &[(usize, usize, usize)] {
        &self.column_conditions
    }

    /// Targets of condition (d) as `(p, q, rank)` triples.
    pub fn row_conditions(&self) -> &[(usize, usize, usize)] {
        &self.row_conditions
    }
}

fn check_dims(x: &RationalMatrix, m: usize, n: usize) -> Result<()> {
    if x.rows() != m || x.cols() != n {
        return Err(Error::DimensionMismatch {
            expected_rows: m,
            expected_cols: n,
            found_rows: x.rows(),
            found_cols: x.cols(),
        });
    }
    Ok(())
}

/// Membership of `x` in `P_w` (or its closure) by the four rank conditions.
/// Independent of [`classify_leaf`].
pub fn in_leaf(x: &RationalMatrix, leaf: &LeafIndex, mode: Mode) -> Result<bool> {
    check_dims(x, leaf.m, leaf.n)?;
    Ok(LeafProbe::new(x).satisfies(&LeafTargets::new(leaf), mode))
}

/// `[[w°ⁿ, 0], [x, w°ᵐ]]`
pub fn embed(x: &RationalMatrix) -> RationalMatrix {
    let (m, n) = (x.rows(), x.cols());
    let size = m + n;
    let mut bar = RationalMatrix::zeros(size, size);
    for j in 1..=n {
        bar.set_int(n + 1 - j, j, 1);
    }
    for j in 1..=m {
        bar.set_int(n + m + 1 - j, n + j, 1);
    }
    for i in 1..=m {
        for j in 1..=n {
            bar.set(n + i, j, x.get(i, j).clone());
        }
    }
    bar
}

/// The orbit containing `x`.
pub fn classify_leaf(x: &RationalMatrix) -> LeafIndex {
    let (m, n) = (x.rows(), x.cols());
    let class = cells::classify(&embed(x), Side::Upper);
    let w = class
        .to_permutation()
        .expect("embedded matrix is invertible");
    let leaf = LeafIndex::new(w, m, n);
    debug_assert!(leaf.is_ok(), "classified index outside the orbit window");
    leaf.expect("classified index outside the orbit window")
}

/// Closure inclusion `closure(P_a) ⊆ closure(P_b)`.
pub fn closure_leq(a: &LeafIndex, b: &LeafIndex) -> Result<bool> {
    if (a.m, a.n) != (b.m, b.n) {
        return Err(Error::InvalidParameter(format!(
            "indices of M({},{}) and M({},{})",
            a.m, a.n, b.m, b.n
        )));
    }
    a.w.bruhat_leq(&b.w)
}

/// Covering relations of the closure order, as index pairs into
/// `enumerate(m, n, None)`. The order is graded by orbit dimension, so the
/// covers are exactly the comparable pairs one dimension apart.
pub fn hasse(m: usize, n: usize) -> (Vec<LeafIndex>, Vec<(usize, usize)>) {
    use rayon::prelude::*;
    let nodes = enumerate(m, n, None);
    let max_dim = nodes.iter().map(|l| l.dim).max().unwrap_or(0);
    let mut by_dim: Vec<Vec<usize>> = vec![Vec::new(); max_dim + 1];
    for (k, l) in nodes.iter().enumerate() {
        by_dim[l.dim].push(k);
    }
    let mut edges: Vec<(usize, usize)> = (0..nodes.len())
        .into_par_iter()
        .flat_map_iter(|a| {
            let upper = by_dim.get(nodes[a].dim + 1).map_or(&[][..], |v| &v[..]);
            upper
                .iter()
                .filter(|&&b| nodes[a].w.bruhat_leq(&nodes[b].w).unwrap())
                .map(|&b| (a, b))
                .collect::<Vec<_>>()
        })
        .collect();
    edges.sort_unstable();
    (nodes, edges)
}

/// Graphviz rendering of a Hasse diagram, smaller orbits at the bottom.
pub fn hasse_dot(nodes: &[LeafIndex], edges: &[(usize, usize)]) -> String {
    let mut out = String::from("digraph leaves {\n  rankdir=BT;\n");
    for (k, l) in nodes.iter().enumerate() {
        let _ = writeln!(
            out,
            "  n{k} [label=\"{} (t={}, dim={})\"];",
            l.w, l.t, l.dim
        );
    }
    for (a, b) in edges {
        let _ = writeln!(out, "  n{a} -> n{b};");
    }
    out.push_str("}\n");
    out
}

/// The lower-left block of the orbit index, i.e. the `B⁺` class of every
/// member of the orbit.
pub fn upper_block(leaf: &LeafIndex) -> PartialPermutation {
    leaf.blocks().b21
}

/// `w°ᵐ · w12ᵀ · w°ⁿ`, the `B⁻` class of every member of the orbit.
pub fn lower_block(leaf: &LeafIndex) -> PartialPermutation {
    let rev_m = Permutation::longest(leaf.m).to_partial();
    let rev_n = Permutation::longest(leaf.n).to_partial();
    rev_m
        .compose_unchecked(&leaf.blocks().b12.transpose())
        .compose_unchecked(&rev_n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn counts() {
        assert_eq!(enumerate(1, 1, None).len(), 2);
        assert_eq!(enumerate(2, 1, None).len(), 4);
        assert_eq!(enumerate(1, 2, None).len(), 4);
        assert_eq!(enumerate(2, 2, None).len(), 14);
        let all = enumerate(2, 2, None);
        assert!(all.windows(2).all(|w| w[0].w < w[1].w));
        let by_t: usize = (0..=2).map(|t| enumerate(2, 2, Some(t)).len()).sum();
        assert_eq!(by_t, 14);
    }

    #[test]
    fn window_agrees_with_bruhat() {
        for (m, n) in [(1, 1), (1, 3), (2, 2), (3, 2), (2, 3)] {
            let window: Vec<Permutation> = enumerate(m, n, None).into_iter().map(|l| l.w).collect();
            assert_eq!(window, enumerate_by_bruhat(m, n));
        }
    }

    #[test]
    fn construction_rejects_outside_window() {
        assert!(LeafIndex::new(p(&[1, 2, 3]), 2, 1).is_err());
        assert!(LeafIndex::new(p(&[1, 2]), 2, 1).is_err());
        let l = LeafIndex::new(p(&[6, 2, 3, 5, 4, 1]), 3, 3).unwrap();
        assert_eq!((l.t(), l.dim()), (1, 4));
    }

    #[test]
    fn example_condition_targets() {
        let leaf = LeafIndex::new(p(&[6, 2, 3, 5, 4, 1]), 3, 3).unwrap();
        let Blocks { b11, b22, .. } = leaf.blocks();
        let rev = Permutation::longest(3).to_partial();
        let upper = rev.compose(&b11).unwrap();
        let lower = b22.compose(&rev).unwrap();
        assert_eq!(
            upper.to_matrix(),
            RationalMatrix::from_ints(&[[0, 0, 1], [0, 1, 0], [0, 0, 0]])
        );
        assert_eq!(
            lower.to_matrix(),
            RationalMatrix::from_ints(&[[0, 1, 0], [0, 0, 1], [0, 0, 0]])
        );
        let targets = LeafTargets::new(&leaf);
        assert_eq!(targets.column_conditions(), &[(2, 2, 0), (2, 3, 1), (3, 3, 1)]);
        assert_eq!(targets.row_conditions(), &[(1, 1, 1), (1, 2, 1), (2, 2, 1)]);
    }

    #[test]
    fn membership_examples() {
        let id = LeafIndex::new(p(&[1, 2]), 1, 1).unwrap();
        let s = LeafIndex::new(p(&[2, 1]), 1, 1).unwrap();
        let zero = RationalMatrix::zeros(1, 1);
        assert!(in_leaf(&zero, &id, Mode::Cell).unwrap());
        assert!(!in_leaf(&zero, &s, Mode::Cell).unwrap());
        let leaf = LeafIndex::new(p(&[6, 2, 3, 5, 4, 1]), 3, 3).unwrap();
        let x = RationalMatrix::from_ints(&[[1, 0, 2], [3, 0, 6], [2, 0, 4]]);
        assert!(in_leaf(&x, &leaf, Mode::Cell).unwrap());
        let ones = RationalMatrix::from_ints(&[[1, 1, 1], [1, 1, 1], [1, 1, 1]]);
        assert!(!in_leaf(&ones, &leaf, Mode::Cell).unwrap());
        assert!(in_leaf(&zero, &leaf, Mode::Cell).is_err());
    }

    #[test]
    fn classification_examples() {
        let five = RationalMatrix::from_ints(&[[5]]);
        let l = classify_leaf(&five);
        assert_eq!((l.w().clone(), l.dim()), (p(&[2, 1]), 1));
        let z = classify_leaf(&RationalMatrix::zeros(1, 1));
        assert!(z.w().is_identity() && z.dim() == 0);
        let g = classify_leaf(&RationalMatrix::from_ints(&[[2, 1], [1, 1]]));
        assert_eq!(g.w(), &Permutation::longest(4));
        assert_eq!(g.dim(), 4);
        let x = RationalMatrix::from_ints(&[[1, 0, 2], [3, 0, 6], [2, 0, 4]]);
        assert_eq!(classify_leaf(&x).w(), &p(&[6, 2, 3, 5, 4, 1]));
    }

    #[test]
    fn hasse_examples() {
        let (nodes, edges) = hasse(1, 1);
        assert_eq!(nodes.len(), 2);
        assert_eq!(edges, vec![(0, 1)]);
        // covers computed by grading agree with the transitive reduction
        let (nodes, edges) = hasse(2, 2);
        let leq = |a: usize, b: usize| nodes[a].w().bruhat_leq(nodes[b].w()).unwrap();
        let mut reduction = Vec::new();
        for a in 0..nodes.len() {
            for b in 0..nodes.len() {
                if a != b && leq(a, b) && !(0..nodes.len()).any(|c| c != a && c != b && leq(a, c) && leq(c, b)) {
                    reduction.push((a, b));
                }
            }
        }
        assert_eq!(edges, reduction);
        let dot = hasse_dot(&nodes, &edges);
        assert!(dot.starts_with("digraph") && dot.contains("->"));
    }

    #[test]
    fn extremes() {
        let lo = LeafIndex::minimum(2, 3).unwrap();
        let hi = LeafIndex::maximum(2, 3).unwrap();
        assert_eq!((lo.dim(), hi.dim()), (0, 6));
        for l in enumerate(2, 3, None) {
            assert!(closure_leq(&lo, &l).unwrap());
            assert!(closure_leq(&l, &hi).unwrap());
        }
        assert!(closure_leq(&lo, &LeafIndex::minimum(3, 2).unwrap()).is_err());
    }

    #[test]
    fn json_shape() {
        let l = LeafIndex::new(p(&[6, 2, 3, 5, 4, 1]), 3, 3).unwrap();
        let s = serde_json::to_string(&l).unwrap();
        assert_eq!(s, r#"{"w":[6,2,3,5,4,1],"m":3,"n":3,"t":1,"dim":4}"#);
        let back: LeafIndex = serde_json::from_str(&s).unwrap();
        assert_eq!(back, l);
        assert!(serde_json::from_str::<LeafIndex>(r#"{"w":[1,2,3],"m":2,"n":1}"#).is_err());
    }
}
