//! Dense matrices over the rationals with exact rank and corner rank profiles.
//!
//! Indices at the API boundary are 1-based, like everywhere else in the crate.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::permutations::PartialPermutation;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_string_rows())
    }
}

/// Text form: one line per row, entries separated by single spaces.
impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_string_rows() {
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            entries: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = RationalMatrix::zeros(size, size);
        for i in 1..=size {
            m.set_int(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::DimensionMismatch {
                expected_rows: r,
                expected_cols: c,
                found_rows: r,
                found_cols: bad.len(),
            });
        }
        Ok(RationalMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds from integer rows; panics on ragged input (test/literal helper).
    pub fn from_ints<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&v| BigRational::from_integer(v.into())).collect())
            .collect();
        RationalMatrix::from_rows(rows).expect("ragged integer rows")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[(i - 1) * self.cols + (j - 1)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigRational) {
        self.entries[(i - 1) * self.cols + (j - 1)] = value;
    }

    pub fn set_int(&mut self, i: usize, j: usize, value: i64) {
        self.set(i, j, BigRational::from_integer(value.into()));
    }

    pub fn is_int(&self, i: usize, j: usize, value: i64) -> bool {
        *self.get(i, j) == BigRational::from_integer(value.into())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> RationalMatrix {
        let mut t = RationalMatrix::zeros(self.cols, self.rows);
        for i in 1..=self.rows {
            for j in 1..=self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Entry `(i, j)` moves to `(rows+1-i, cols+1-j)`.
    pub fn rotate_half_turn(&self) -> RationalMatrix {
        let mut entries = self.entries.clone();
        entries.reverse();
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn mul(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected_rows: self.cols,
                expected_cols: other.cols,
                found_rows: other.rows,
                found_cols: other.cols,
            });
        }
        let mut out = RationalMatrix::zeros(self.rows, other.cols);
        for i in 1..=self.rows {
            for k in 1..=self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 1..=other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let cell = &mut out.entries[(i - 1) * other.cols + (j - 1)];
                        *cell += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Submatrix with rows `r0..=r1` and columns `c0..=c1`; empty ranges are
    /// allowed and give a matrix with zero rows or columns.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> RationalMatrix {
        let rows = if r1 >= r0 { r1 + 1 - r0 } else { 0 };
        let cols = if c1 >= c0 { c1 + 1 - c0 } else { 0 };
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(self.get(r0 + i, c0 + j).clone());
            }
        }
        RationalMatrix { rows, cols, entries }
    }

    /// Multiplies row `i` by `factor`.
    pub fn scale_row(&mut self, i: usize, factor: &BigRational) {
        for j in 1..=self.cols {
            let v = self.get(i, j) * factor;
            self.set(i, j, v);
        }
    }

    pub fn scale_col(&mut self, j: usize, factor: &BigRational) {
        for i in 1..=self.rows {
            let v = self.get(i, j) * factor;
            self.set(i, j, v);
        }
    }

    /// Each row scaled by the lcm of its denominators and divided by the gcd
    /// of its numerators. Row spaces, hence all ranks of row/column
    /// selections, are unchanged.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let row = &self.entries[i * self.cols..(i + 1) * self.cols];
                let lcm = row
                    .iter()
                    .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
                let mut ints: Vec<BigInt> =
                    row.iter().map(|v| v.numer() * (&lcm / v.denom())).collect();
                normalize_row(&mut ints);
                ints
            })
            .collect()
    }

    /// Exact rank by fraction-free (Bareiss) elimination.
    pub fn rank(&self) -> usize {
        bareiss_rank(self.integer_rows(), self.cols)
    }

    /// The unique partial permutation `w` with `x ∈ B⁺ w B⁺`.
    ///
    /// Columns are processed left to right. In each column the bottom-most
    /// nonzero entry among rows not yet used becomes the pivot, and the
    /// unused rows above it are cleared with it (adding multiples of a lower
    /// row to a higher one is a left action of `B⁺`). Rows already carrying
    /// a pivot are skipped, which stands in for clearing them with column
    /// operations from the left, a right action of `B⁺`.
    pub fn upper_class(&self) -> PartialPermutation {
        let mut a = self.integer_rows();
        let mut used = vec![false; self.rows];
        let mut image = vec![None; self.cols];
        for j in 0..self.cols {
            let Some(p) = (0..self.rows).rev().find(|&i| !used[i] && !a[i][j].is_zero()) else {
                continue;
            };
            used[p] = true;
            image[j] = Some(p + 1);
            let (above, rest) = a.split_at_mut(p);
            let pivot_row = &rest[0];
            let pivot = &pivot_row[j];
            for (k, row) in above.iter_mut().enumerate() {
                if used[k] || row[j].is_zero() {
                    continue;
                }
                let factor = row[j].clone();
                for c in j..self.cols {
                    row[c] = &row[c] * pivot - &factor * &pivot_row[c];
                }
                normalize_row_from(row, j + 1);
            }
        }
        PartialPermutation::from_image_unchecked(self.rows, self.cols, image)
    }

    /// The unique partial permutation `w` with `x ∈ B⁻ w B⁻`.
    pub fn lower_class(&self) -> PartialPermutation {
        let rotated = self.rotate_half_turn().upper_class();
        let (rows, cols) = (self.rows, self.cols);
        let mut image = vec![None; cols];
        for (c, r) in rotated.entries() {
            image[cols - c] = Some(rows + 1 - r);
        }
        PartialPermutation::from_image_unchecked(rows, cols, image)
    }

    /// Corner rank profile, read off the Bruhat class: corner ranks are
    /// invariant under the relevant triangular actions and are counted as
    /// dots on the class representative. One elimination sweep, cost
    /// `O(rows · cols · rank)` arithmetic operations.
    pub fn rank_profile(&self, kind: ProfileKind) -> RankProfile {
        match kind {
            ProfileKind::Southwest => self.upper_class().rank_profile(kind),
            ProfileKind::Northeast => self.lower_class().rank_profile(kind),
        }
    }

    /// Reference profile: one independent rank computation per table cell.
    pub fn rank_profile_naive(&self, kind: ProfileKind) -> RankProfile {
        let (rows, cols) = (self.rows, self.cols);
        let mut table = vec![vec![0; cols + 1]; rows + 1];
        for (a, row) in table.iter_mut().enumerate() {
            for (b, cell) in row.iter_mut().enumerate() {
                *cell = match kind {
                    ProfileKind::Southwest => self.submatrix(a + 1, rows, 1, b).rank(),
                    ProfileKind::Northeast => self.submatrix(1, a, b + 1, cols).rank(),
                };
            }
        }
        RankProfile::from_table(kind, rows, cols, table)
    }

    /// `ranks[p - 1][q - 1] = rank(x[1..rows; p..q])` for `p <= q`, one
    /// incremental elimination pass per left anchor `p`.
    pub fn column_interval_ranks(&self) -> Vec<Vec<usize>> {
        let cols: Vec<Vec<BigInt>> = self.transpose().integer_rows();
        interval_ranks(&cols, self.rows)
    }

    /// `ranks[p - 1][q - 1] = rank(x[p..q; 1..cols])` for `p <= q`.
    pub fn row_interval_ranks(&self) -> Vec<Vec<usize>> {
        interval_ranks(&self.integer_rows(), self.cols)
    }

    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (1..=self.rows)
            .map(|i| (1..=self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect()
    }

    /// Parses either whitespace-separated text rows or a JSON array of
    /// arrays (strings or integers).
    pub fn parse(input: &str) -> Result<RationalMatrix> {
        let trimmed = input.trim_start();
        if trimmed.starts_with('[') {
            let value: serde_json::Value =
                serde_json::from_str(input).map_err(|e| Error::Parse(e.to_string()))?;
            return RationalMatrix::from_json_value(&value);
        }
        let rows = input
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| l.split_whitespace().map(parse_rational).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        if rows.is_empty() {
            return Err(Error::Parse("empty matrix".into()));
        }
        RationalMatrix::from_rows(rows)
    }

    fn from_json_value(value: &serde_json::Value) -> Result<RationalMatrix> {
        let bad = || Error::Parse("expected a JSON array of arrays".into());
        let rows = value
            .as_array()
            .ok_or_else(bad)?
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(bad)?
                    .iter()
                    .map(|v| match v {
                        serde_json::Value::String(s) => parse_rational(s),
                        serde_json::Value::Number(n) if n.is_i64() => {
                            Ok(BigRational::from_integer(n.as_i64().unwrap().into()))
                        }
                        other => Err(Error::Parse(format!("bad matrix entry {other}"))),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if rows.is_empty() {
            return Err(Error::Parse("empty matrix".into()));
        }
        RationalMatrix::from_rows(rows)
    }
}

impl FromStr for RationalMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RationalMatrix::parse(s)
    }
}

impl Serialize for RationalMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_string_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let value = serde_json::Value::deserialize(d)?;
        RationalMatrix::from_json_value(&value).map_err(serde::de::Error::custom)
    }
}

fn parse_rational(token: &str) -> Result<BigRational> {
    let bad = |e: String| Error::Parse(format!("bad rational {token:?}: {e}"));
    let token = token.trim();
    match token.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().map_err(|e: num_bigint::ParseBigIntError| bad(e.to_string()))?;
            let d: BigInt = d.parse().map_err(|e: num_bigint::ParseBigIntError| bad(e.to_string()))?;
            if d.is_zero() {
                return Err(bad("zero denominator".into()));
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = token
                .parse()
                .map_err(|e: num_bigint::ParseBigIntError| bad(e.to_string()))?;
            Ok(BigRational::from_integer(n))
        }
    }
}

fn normalize_row(row: &mut [BigInt]) {
    normalize_row_from(row, 0)
}

/// Divides `row[from..]` by the gcd of its entries. Entries before `from`
/// must already be zero.
fn normalize_row_from(row: &mut [BigInt], from: usize) {
    let g = row[from..]
        .iter()
        .fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for v in row[from..].iter_mut() {
            *v = &*v / &g;
        }
    }
}

fn bareiss_rank(mut a: Vec<Vec<BigInt>>, cols: usize) -> usize {
    let rows = a.len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let (top, bottom) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in bottom.iter_mut() {
            for j in c + 1..cols {
                row[j] = (&pivot_row[c] * &row[j] - &row[c] * &pivot_row[j]) / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = pivot_row[c].clone();
        rank += 1;
    }
    rank
}

/// Rank of every contiguous run of vectors, each of length `len`.
fn interval_ranks(vectors: &[Vec<BigInt>], len: usize) -> Vec<Vec<usize>> {
    let k = vectors.len();
    let mut out = vec![vec![0; k]; k];
    for p in 0..k {
        // echelon basis of the span of vectors[p..=q], keyed by pivot index
        let mut basis: Vec<(usize, Vec<BigInt>)> = Vec::new();
        for q in p..k {
            let mut v = vectors[q].clone();
            for (pivot, b) in &basis {
                if !v[*pivot].is_zero() {
                    let f = v[*pivot].clone();
                    for i in 0..len {
                        v[i] = &v[i] * &b[*pivot] - &f * &b[i];
                    }
                    normalize_row(&mut v);
                }
            }
            if let Some(pivot) = v.iter().position(|x| !x.is_zero()) {
                basis.push((pivot, v));
            }
            out[p][q] = basis.len();
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileKind {
    /// `rank(x[p..rows; 1..q])`, the invariants of `B⁺ x B⁺`.
    Southwest,
    /// `rank(x[1..p; q..cols])`, the invariants of `B⁻ x B⁻`.
    Northeast,
}

/// Table of corner ranks.
///
/// Southwest entries are indexed by `p in 1..=rows+1`, `q in 0..=cols`;
/// northeast entries by `p in 0..=rows`, `q in 1..=cols+1`. The out-of-range
/// ends denote empty submatrices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RankProfile {
    kind: ProfileKind,
    rows: usize,
    cols: usize,
    table: Vec<Vec<usize>>,
}

impl RankProfile {
    pub(crate) fn from_table(
        kind: ProfileKind,
        rows: usize,
        cols: usize,
        table: Vec<Vec<usize>>,
    ) -> Self {
        debug_assert_eq!(table.len(), rows + 1);
        RankProfile {
            kind,
            rows,
            cols,
            table,
        }
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, p: usize, q: usize) -> usize {
        match self.kind {
            ProfileKind::Southwest => self.table[p - 1][q],
            ProfileKind::Northeast => self.table[p][q - 1],
        }
    }

    /// Raw table, row-major, `(rows+1) x (cols+1)`.
    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    /// Componentwise `<=`; false for profiles of different kind or shape.
    pub fn le(&self, other: &RankProfile) -> bool {
        self.kind == other.kind
            && self.rows == other.rows
            && self.cols == other.cols
            && self
                .table
                .iter()
                .flatten()
                .zip(other.table.iter().flatten())
                .all(|(a, b)| a <= b)
    }

    /// Recovers the partial permutation from second differences.
    pub fn to_partial_permutation(&self) -> PartialPermutation {
        let mut image = vec![None; self.cols];
        for q in 1..=self.cols {
            for p in 1..=self.rows {
                let d = match self.kind {
                    ProfileKind::Southwest => {
                        (self.get(p, q) + self.get(p + 1, q - 1)) as isize
                            - (self.get(p + 1, q) + self.get(p, q - 1)) as isize
                    }
                    ProfileKind::Northeast => {
                        (self.get(p, q) + self.get(p - 1, q + 1)) as isize
                            - (self.get(p - 1, q) + self.get(p, q + 1)) as isize
                    }
                };
                if d == 1 {
                    image[q - 1] = Some(p);
                }
            }
        }
        PartialPermutation::from_image_unchecked(self.rows, self.cols, image)
    }
}

/// Matrix families for seeded sampling. Entries are uniform integers in
/// `[-9, 9]`; entries required to be nonzero are drawn from `[-9, 9] \ {0}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SampleKind {
    Dense { rows: usize, cols: usize },
    /// Product of full-rank `rows x t` and `t x cols` integer factors.
    RankT { rows: usize, cols: usize, t: usize },
    /// Upper (`upper = true`) or lower triangular with nonzero diagonal.
    InvertibleTriangular { upper: bool, size: usize },
    /// `rows x t`, column `j` has a nonzero in row `pivots[j]` and zeros above.
    EchelonCol { rows: usize, t: usize, pivots: Vec<usize> },
    /// `t x cols`, row `i` has a nonzero in column `pivots[i]` and zeros left of it.
    EchelonRow { t: usize, cols: usize, pivots: Vec<usize> },
}

pub const ENTRY_BOUND: i64 = 9;

/// The generator for sample stream `stream` under `seed`. ChaCha8 is
/// specified bit-for-bit, so streams reproduce across platforms.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn entry<R: Rng + ?Sized>(rng: &mut R) -> BigRational {
    BigRational::from_integer(rng.gen_range(-ENTRY_BOUND..=ENTRY_BOUND).into())
}

fn nonzero_entry<R: Rng + ?Sized>(rng: &mut R) -> BigRational {
    let mut v = rng.gen_range(1..=ENTRY_BOUND);
    if rng.gen_bool(0.5) {
        v = -v;
    }
    BigRational::from_integer(v.into())
}

fn check_pivots(pivots: &[usize], t: usize, bound: usize) -> Result<()> {
    if pivots.len() != t {
        return Err(Error::InvalidPattern(format!(
            "{} pivots for rank {t}",
            pivots.len()
        )));
    }
    if t > bound {
        return Err(Error::RankOutOfRange { t, rows: bound, cols: t });
    }
    let increasing = pivots.windows(2).all(|w| w[0] < w[1]);
    let in_bounds = pivots.iter().all(|&r| r >= 1 && r <= bound);
    if !increasing || !in_bounds {
        return Err(Error::InvalidPattern(format!(
            "pivots {pivots:?} are not strictly increasing within 1..={bound}"
        )));
    }
    Ok(())
}

/// Draws one matrix of the given family.
pub fn sample<R: Rng + ?Sized>(kind: &SampleKind, rng: &mut R) -> Result<RationalMatrix> {
    match *kind {
        SampleKind::Dense { rows, cols } => {
            let mut m = RationalMatrix::zeros(rows, cols);
            m.entries.iter_mut().for_each(|e| *e = entry(rng));
            Ok(m)
        }
        SampleKind::RankT { rows, cols, t } => {
            if t > rows.min(cols) {
                return Err(Error::RankOutOfRange { t, rows, cols });
            }
            let left = loop {
                let c = sample(&SampleKind::Dense { rows, cols: t }, rng)?;
                if c.rank() == t {
                    break c;
                }
            };
            let right = loop {
                let r = sample(&SampleKind::Dense { rows: t, cols }, rng)?;
                if r.rank() == t {
                    break r;
                }
            };
            if t == 0 {
                return Ok(RationalMatrix::zeros(rows, cols));
            }
            left.mul(&right)
        }
        SampleKind::InvertibleTriangular { upper, size } => {
            let mut m = RationalMatrix::zeros(size, size);
            for i in 1..=size {
                for j in 1..=size {
                    let v = match (i == j, (i < j) == upper) {
                        (true, _) => nonzero_entry(rng),
                        (false, true) => entry(rng),
                        (false, false) => continue,
                    };
                    m.set(i, j, v);
                }
            }
            Ok(m)
        }
        SampleKind::EchelonCol { rows, t, ref pivots } => {
            check_pivots(pivots, t, rows)?;
            let mut m = RationalMatrix::zeros(rows, t);
            for (j, &r) in pivots.iter().enumerate() {
                m.set(r, j + 1, nonzero_entry(rng));
                for i in r + 1..=rows {
                    m.set(i, j + 1, entry(rng));
                }
            }
            Ok(m)
        }
        SampleKind::EchelonRow { t, cols, ref pivots } => {
            check_pivots(pivots, t, cols)?;
            let mut m = RationalMatrix::zeros(t, cols);
            for (i, &c) in pivots.iter().enumerate() {
                m.set(i + 1, c, nonzero_entry(rng));
                for j in c + 1..=cols {
                    m.set(i + 1, j, entry(rng));
                }
            }
            Ok(m)
        }
    }
}

/// `sample` on a fresh generator for `(seed, stream 0)`.
pub fn sample_seeded(kind: &SampleKind, seed: u64) -> Result<RationalMatrix> {
    sample(kind, &mut seeded_rng(seed, 0))
}

/// Pushes a matrix toward lower strata: zeroes a random selection of
/// entries, a row or a column. Leaves the input unchanged with some
/// probability so generic points stay represented.
pub fn degenerate<R: Rng + ?Sized>(x: &mut RationalMatrix, rng: &mut R) {
    if x.rows == 0 || x.cols == 0 {
        return;
    }
    match rng.gen_range(0..4) {
        0 => {}
        1 => {
            let count = rng.gen_range(1..=x.rows * x.cols);
            for _ in 0..count {
                let k = rng.gen_range(0..x.entries.len());
                x.entries[k] = BigRational::zero();
            }
        }
        2 => {
            let i = rng.gen_range(1..=x.rows);
            for j in 1..=x.cols {
                x.set(i, j, BigRational::zero());
            }
        }
        _ => {
            let j = rng.gen_range(1..=x.cols);
            for i in 1..=x.rows {
                x.set(i, j, BigRational::zero());
            }
        }
    }
}
