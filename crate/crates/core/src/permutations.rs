//! Symmetric-group and partial-permutation combinatorics.
//!
//! All indices are 1-based. A permutation `w` of `1..=N` is stored in one-line
//! notation and is identified with the permutation matrix whose column `j`
//! carries its single 1 in row `w(j)`. Under this convention matrix product
//! and function composition agree: the matrix of `a.compose(&b)` is `a * b`.
//!
//! Partial permutations are `rows x cols` 0/1 matrices with at most one 1 in
//! each row and column, stored column-indexed: `image[j - 1] = Some(i)` when
//! column `j` has its 1 in row `i`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact_matrix::{ProfileKind, RankProfile, RationalMatrix};

/// A permutation of `1..=N` in one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.images)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Parses `"6,2,3,5,4,1"` or `"[6,2,3,5,4,1]"`.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('[').trim_end_matches(']');
        if body.trim().is_empty() {
            return Err(Error::Parse("empty permutation".into()));
        }
        let images = body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|e| Error::Parse(format!("bad image {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::new(images)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.images.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let images = Vec::<usize>::deserialize(d)?;
        Permutation::new(images).map_err(serde::de::Error::custom)
    }
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let size = images.len();
        if size == 0 {
            return Err(Error::NotAPermutation { size, images });
        }
        let mut seen = vec![false; size + 1];
        for &i in &images {
            if i == 0 || i > size || seen[i] {
                return Err(Error::NotAPermutation { size, images });
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<usize>) -> Self {
        debug_assert!(Permutation::new(images.clone()).is_ok());
        Permutation { images }
    }

    pub fn identity(size: usize) -> Self {
        Permutation {
            images: (1..=size).collect(),
        }
    }

    /// The longest element `w°ᴺ = [N, N-1, ..., 1]`.
    pub fn longest(size: usize) -> Self {
        Permutation {
            images: (1..=size).rev().collect(),
        }
    }

    /// `(w°ⁿ, w°ᵐ)`: the longest element of `S¹ₙ × S²ₘ` inside `S_{n+m}`.
    pub fn block_longest(n: usize, m: usize) -> Self {
        let first = (1..=n).rev();
        let second = (n + 1..=n + m).rev();
        Permutation {
            images: first.chain(second).collect(),
        }
    }

    /// `w°ᴺ · (w°ⁿ, w°ᵐ)`, whose matrix is `[[0, I_m], [I_n, 0]]`.
    pub fn w_mn(n: usize, m: usize) -> Self {
        Permutation::longest(n + m).compose_unchecked(&Permutation::block_longest(n, m))
    }

    pub fn size(&self) -> usize {
        self.images.len()
    }

    /// `w(i)` for `1 <= i <= N`.
    #[inline]
    pub fn image(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, &i)| i == k + 1)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.size() != other.size() {
            return Err(Error::SizeMismatch {
                expected: self.size(),
                found: other.size(),
            });
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&j| self.images[j - 1]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.size()];
        for (k, &i) in self.images.iter().enumerate() {
            inv[i - 1] = k + 1;
        }
        Permutation { images: inv }
    }

    /// Number of inversions.
    pub fn length(&self) -> usize {
        let w = &self.images;
        let mut count = 0;
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if w[i] > w[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// The image set `w({1..p})`, sorted ascending.
    pub fn prefix_set(&self, p: usize) -> Vec<usize> {
        let mut set = self.images[..p].to_vec();
        set.sort_unstable();
        set
    }

    /// Bruhat order via prefix image sets: `self <= other` iff
    /// `self({1..p}) <= other({1..p})` for every `p`.
    pub fn bruhat_leq(&self, other: &Permutation) -> Result<bool> {
        if self.size() != other.size() {
            return Err(Error::SizeMismatch {
                expected: self.size(),
                found: other.size(),
            });
        }
        Ok(bruhat_leq_unchecked(&self.images, &other.images))
    }

    /// The transposition of positions `i` and `j` in `S_N`.
    pub fn transposition(size: usize, i: usize, j: usize) -> Permutation {
        let mut images: Vec<usize> = (1..=size).collect();
        images.swap(i - 1, j - 1);
        Permutation { images }
    }

    /// Embeds `self` (in `S_k`) into `S_size` acting on positions
    /// `offset+1..=offset+k` and fixing everything else.
    pub fn embed(&self, size: usize, offset: usize) -> Permutation {
        let mut images: Vec<usize> = (1..=size).collect();
        for (k, &i) in self.images.iter().enumerate() {
            images[offset + k] = offset + i;
        }
        Permutation { images }
    }

    pub fn to_partial(&self) -> PartialPermutation {
        PartialPermutation {
            rows: self.size(),
            cols: self.size(),
            image: self.images.iter().map(|&i| Some(i)).collect(),
        }
    }

    pub fn to_matrix(&self) -> RationalMatrix {
        self.to_partial().to_matrix()
    }

    /// All of `S_N` in lexicographic order of one-line notation.
    pub fn all(size: usize) -> LexPermutations {
        LexPermutations {
            next: Some((1..=size).collect()),
        }
    }

    /// Whether `self` is the minimal-length representative of its coset
    /// `self · W` for the parabolic subgroup `W`.
    pub fn is_min_rep(&self, parabolic: Parabolic) -> Result<bool> {
        parabolic.check(self.size())?;
        let ascending = |r: std::ops::Range<usize>| self.images[r].windows(2).all(|w| w[0] < w[1]);
        let n = self.size();
        Ok(ascending(0..parabolic.first) && ascending(n - parabolic.last..n))
    }

    /// The minimal-length representative of the coset `self · W`: the images
    /// over each block of positions moved by `W` are sorted ascending.
    pub fn min_rep(&self, parabolic: Parabolic) -> Result<Permutation> {
        parabolic.check(self.size())?;
        let n = self.size();
        let mut images = self.images.clone();
        images[..parabolic.first].sort_unstable();
        images[n - parabolic.last..].sort_unstable();
        Ok(Permutation { images })
    }
}

pub(crate) fn bruhat_leq_unchecked(y: &[usize], z: &[usize]) -> bool {
    // Running counts replace the sorted comparison: I <= J iff for every
    // threshold k, |{i in I: i >= k}| <= |{j in J: j >= k}|.
    let n = y.len();
    let mut above_y = vec![0usize; n + 2];
    let mut above_z = vec![0usize; n + 2];
    for p in 0..n {
        for k in 1..=y[p] {
            above_y[k] += 1;
        }
        for k in 1..=z[p] {
            above_z[k] += 1;
        }
        if (1..=n).any(|k| above_y[k] > above_z[k]) {
            return false;
        }
    }
    true
}

/// Iterator over `S_N` in lexicographic order.
pub struct LexPermutations {
    next: Option<Vec<usize>>,
}

impl Iterator for LexPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if next_lex(&mut succ) {
            self.next = Some(succ);
        }
        Some(Permutation { images: current })
    }
}

/// Advances `v` to its lexicographic successor; false when already last.
pub(crate) fn next_lex(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Componentwise comparison of equal-size sets after sorting ascending.
pub fn subset_leq(i: &[usize], j: &[usize]) -> Result<bool> {
    if i.len() != j.len() {
        return Err(Error::SizeMismatch {
            expected: i.len(),
            found: j.len(),
        });
    }
    let mut a = i.to_vec();
    let mut b = j.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    Ok(a.iter().zip(&b).all(|(x, y)| x <= y))
}

/// A standard parabolic subgroup `S¹_first × S²_last` of `S_N`: permutations
/// of the first `first` and of the last `last` positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Parabolic {
    pub first: usize,
    pub last: usize,
}

impl Parabolic {
    /// `S¹_k`
    pub fn first(k: usize) -> Self {
        Parabolic { first: k, last: 0 }
    }

    /// `S²_k`
    pub fn last(k: usize) -> Self {
        Parabolic { first: 0, last: k }
    }

    /// `S¹_first S²_last`
    pub fn both(first: usize, last: usize) -> Self {
        Parabolic { first, last }
    }

    fn check(&self, size: usize) -> Result<()> {
        if self.first + self.last > size {
            return Err(Error::InvalidParameter(format!(
                "parabolic S1_{} S2_{} does not fit in S_{}",
                self.first, self.last, size
            )));
        }
        Ok(())
    }
}

/// A rank-`t` partial permutation in the `rows x cols` grid.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialPermutation {
    rows: usize,
    cols: usize,
    image: Vec<Option<usize>>,
}

impl fmt::Debug for PartialPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PartialPermutation {
    /// Literal form `"3x3:1->3,2->1"` listing `col->row` entries.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries: Vec<String> = self
            .entries()
            .map(|(c, r)| format!("{c}->{r}"))
            .collect();
        write!(f, "{}x{}:{}", self.rows, self.cols, entries.join(","))
    }
}

impl FromStr for PartialPermutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (shape, body) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("missing ':' in {s:?}")))?;
        let (r, c) = shape
            .split_once(['x', 'X'])
            .ok_or_else(|| Error::Parse(format!("bad shape {shape:?}")))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("bad integer {t:?}: {e}")))
        };
        let rows = parse(r)?;
        let cols = parse(c)?;
        let mut image = vec![None; cols];
        for entry in body.split(',').map(str::trim).filter(|e| !e.is_empty()) {
            let (col, row) = entry
                .split_once("->")
                .ok_or_else(|| Error::Parse(format!("bad entry {entry:?}")))?;
            let (col, row) = (parse(col)?, parse(row)?);
            if col == 0 || col > cols {
                return Err(Error::Parse(format!("column {col} out of range")));
            }
            if image[col - 1].is_some() {
                return Err(Error::Parse(format!("column {col} given twice")));
            }
            image[col - 1] = Some(row);
        }
        PartialPermutation::new(rows, cols, image)
    }
}

impl Serialize for PartialPermutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PartialPermutation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl PartialPermutation {
    pub fn new(rows: usize, cols: usize, image: Vec<Option<usize>>) -> Result<Self> {
        if image.len() != cols {
            return Err(Error::InvalidPartialPermutation(format!(
                "{} column images for {} columns",
                image.len(),
                cols
            )));
        }
        let mut seen = vec![false; rows + 1];
        for &i in image.iter().flatten() {
            if i == 0 || i > rows {
                return Err(Error::InvalidPartialPermutation(format!(
                    "row {i} outside 1..={rows}"
                )));
            }
            if seen[i] {
                return Err(Error::InvalidPartialPermutation(format!(
                    "row {i} used twice"
                )));
            }
            seen[i] = true;
        }
        Ok(PartialPermutation { rows, cols, image })
    }

    pub(crate) fn from_image_unchecked(rows: usize, cols: usize, image: Vec<Option<usize>>) -> Self {
        debug_assert!(PartialPermutation::new(rows, cols, image.clone()).is_ok());
        PartialPermutation { rows, cols, image }
    }

    pub fn empty(rows: usize, cols: usize) -> Self {
        PartialPermutation {
            rows,
            cols,
            image: vec![None; cols],
        }
    }

    /// `I_t^{rows,cols}`: the rank-`t` partial identity.
    pub fn partial_identity(rows: usize, cols: usize, t: usize) -> Result<Self> {
        if t > rows.min(cols) {
            return Err(Error::RankOutOfRange { t, rows, cols });
        }
        let image = (1..=cols).map(|j| (j <= t).then_some(j)).collect();
        Ok(PartialPermutation { rows, cols, image })
    }

    /// `J_t^m = diag(0_t, I_{m-t})`.
    pub fn lower_identity(m: usize, t: usize) -> Result<Self> {
        if t > m {
            return Err(Error::RankOutOfRange { t, rows: m, cols: m });
        }
        let image = (1..=m).map(|j| (j > t).then_some(j)).collect();
        Ok(PartialPermutation { rows: m, cols: m, image })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Row carrying the 1 of column `j`, if any.
    #[inline]
    pub fn get(&self, j: usize) -> Option<usize> {
        self.image[j - 1]
    }

    pub fn image(&self) -> &[Option<usize>] {
        &self.image
    }

    /// `(col, row)` pairs in increasing column order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.image
            .iter()
            .enumerate()
            .filter_map(|(k, i)| i.map(|i| (k + 1, i)))
    }

    pub fn rank(&self) -> usize {
        self.image.iter().flatten().count()
    }

    /// `dom(w)`, ascending.
    pub fn domain(&self) -> Vec<usize> {
        self.entries().map(|(c, _)| c).collect()
    }

    /// `rng(w)`, ascending.
    pub fn range(&self) -> Vec<usize> {
        let mut r: Vec<usize> = self.entries().map(|(_, r)| r).collect();
        r.sort_unstable();
        r
    }

    /// Row-indexed view: `row_view()[i - 1] = Some(j)` when row `i` has its 1
    /// in column `j`.
    pub fn row_view(&self) -> Vec<Option<usize>> {
        let mut rv = vec![None; self.rows];
        for (c, r) in self.entries() {
            rv[r - 1] = Some(c);
        }
        rv
    }

    /// The transpose, i.e. the inverse bijection `rng(w) -> dom(w)`.
    pub fn transpose(&self) -> PartialPermutation {
        PartialPermutation {
            rows: self.cols,
            cols: self.rows,
            image: self.row_view(),
        }
    }

    /// Matrix product `self * other` (apply `other` first).
    pub fn compose(&self, other: &PartialPermutation) -> Result<PartialPermutation> {
        if self.cols != other.rows {
            return Err(Error::SizeMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &PartialPermutation) -> PartialPermutation {
        PartialPermutation {
            rows: self.rows,
            cols: other.cols,
            image: other
                .image
                .iter()
                .map(|i| i.and_then(|i| self.image[i - 1]))
                .collect(),
        }
    }

    /// The full permutation, when `self` is square of full rank.
    pub fn to_permutation(&self) -> Option<Permutation> {
        if self.rows != self.cols || self.rank() != self.cols {
            return None;
        }
        Some(Permutation {
            images: self.image.iter().map(|i| i.unwrap()).collect(),
        })
    }

    pub fn to_matrix(&self) -> RationalMatrix {
        let mut m = RationalMatrix::zeros(self.rows, self.cols);
        for (c, r) in self.entries() {
            m.set_int(r, c, 1);
        }
        m
    }

    /// Rank of the submatrix with rows `r0..=r1` and columns `c0..=c1`,
    /// by counting dots. Empty ranges give 0.
    pub fn submatrix_rank(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> usize {
        if c0 > c1 || r0 > r1 {
            return 0;
        }
        (c0..=c1)
            .filter(|&c| matches!(self.image[c - 1], Some(r) if r >= r0 && r <= r1))
            .count()
    }

    /// Corner rank profile by dot counting.
    pub fn rank_profile(&self, kind: ProfileKind) -> RankProfile {
        let (rows, cols) = (self.rows, self.cols);
        let mut dots = vec![vec![0usize; cols + 2]; rows + 2];
        for (c, r) in self.entries() {
            dots[r][c] = 1;
        }
        let mut table = vec![vec![0usize; cols + 1]; rows + 1];
        match kind {
            // table[p-1][q] = #dots in rows p..rows, cols 1..q
            ProfileKind::Southwest => {
                for p in (1..=rows).rev() {
                    for q in 1..=cols {
                        let below = if p < rows { table[p][q] } else { 0 };
                        table[p - 1][q] = below + table[p - 1][q - 1]
                            - if p < rows { table[p][q - 1] } else { 0 }
                            + dots[p][q];
                    }
                }
            }
            // table[p][q-1] = #dots in rows 1..p, cols q..cols
            ProfileKind::Northeast => {
                for p in 1..=rows {
                    for q in (1..=cols).rev() {
                        let right = if q < cols { table[p][q] } else { 0 };
                        let above_right = if q < cols { table[p - 1][q] } else { 0 };
                        table[p][q - 1] = table[p - 1][q - 1] + right - above_right + dots[p][q];
                    }
                }
            }
        }
        RankProfile::from_table(kind, rows, cols, table)
    }

    /// Every partial permutation in the grid with exactly `t` dots, ordered
    /// by domain, then range, then bijection (all lexicographic).
    pub fn all_of_rank(rows: usize, cols: usize, t: usize) -> Vec<PartialPermutation> {
        let mut out = Vec::new();
        if t > rows.min(cols) {
            return out;
        }
        for dom in combinations(cols, t) {
            for rng in combinations(rows, t) {
                for perm in Permutation::all(t.max(1)) {
                    if t == 0 {
                        out.push(PartialPermutation::empty(rows, cols));
                        break;
                    }
                    let mut image = vec![None; cols];
                    for (k, &c) in dom.iter().enumerate() {
                        image[c - 1] = Some(rng[perm.image(k + 1) - 1]);
                    }
                    out.push(PartialPermutation { rows, cols, image });
                }
            }
        }
        out
    }

    /// Every partial permutation of the grid, all ranks.
    pub fn all(rows: usize, cols: usize) -> Vec<PartialPermutation> {
        (0..=rows.min(cols))
            .flat_map(|t| PartialPermutation::all_of_rank(rows, cols, t))
            .collect()
    }
}

/// All `k`-subsets of `1..=n`, lexicographic.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            if n - i + 1 < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(1, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// The four blocks of a permutation matrix cut after `top` rows and `left`
/// columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Blocks {
    pub b11: PartialPermutation,
    pub b12: PartialPermutation,
    pub b21: PartialPermutation,
    pub b22: PartialPermutation,
}

/// Cuts `w` into `[[b11, b12], [b21, b22]]` with `b11` of shape `top x left`.
pub fn split_blocks(w: &Permutation, top: usize, left: usize) -> Result<Blocks> {
    let size = w.size();
    if top > size || left > size {
        return Err(Error::InvalidParameter(format!(
            "cannot cut S_{size} after {top} rows and {left} columns"
        )));
    }
    let (bottom, right) = (size - top, size - left);
    let pick = |cols: std::ops::RangeInclusive<usize>, upper: bool| -> Vec<Option<usize>> {
        cols.map(|j| {
            let i = w.image(j);
            match (upper, i <= top) {
                (true, true) => Some(i),
                (false, false) => Some(i - top),
                _ => None,
            }
        })
        .collect()
    };
    Ok(Blocks {
        b11: PartialPermutation::from_image_unchecked(top, left, pick(1..=left, true)),
        b12: PartialPermutation::from_image_unchecked(top, right, pick(left + 1..=size, true)),
        b21: PartialPermutation::from_image_unchecked(bottom, left, pick(1..=left, false)),
        b22: PartialPermutation::from_image_unchecked(bottom, right, pick(left + 1..=size, false)),
    })
}

/// Reassembles a permutation from four blocks.
pub fn join_blocks(blocks: &Blocks) -> Result<Permutation> {
    let Blocks { b11, b12, b21, b22 } = blocks;
    let (top, left) = (b11.rows(), b11.cols());
    let (bottom, right) = (b21.rows(), b12.cols());
    let consistent = b12.rows() == top
        && b21.cols() == left
        && b22.rows() == bottom
        && b22.cols() == right
        && top + bottom == left + right;
    if !consistent {
        return Err(Error::InvalidParameter("inconsistent block shapes".into()));
    }
    let mut images = Vec::with_capacity(left + right);
    for j in 1..=left {
        match (b11.get(j), b21.get(j)) {
            (Some(i), None) => images.push(i),
            (None, Some(i)) => images.push(top + i),
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "column {j} does not carry exactly one dot"
                )))
            }
        }
    }
    for j in 1..=right {
        match (b12.get(j), b22.get(j)) {
            (Some(i), None) => images.push(i),
            (None, Some(i)) => images.push(top + i),
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "column {} does not carry exactly one dot",
                    left + j
                )))
            }
        }
    }
    Permutation::new(images)
}

/// The block form `w = [[w11, w12], [w21, w22]]` with `w11` of size `n x n`
/// and `w22` of size `m x m`.
pub fn block_split(w: &Permutation, n: usize, m: usize) -> Result<Blocks> {
    if n + m != w.size() {
        return Err(Error::SizeMismatch {
            expected: n + m,
            found: w.size(),
        });
    }
    split_blocks(w, n, n)
}

pub fn block_join(blocks: &Blocks) -> Result<Permutation> {
    join_blocks(blocks)
}
