//! Seeded cross-validation campaigns. Each campaign checks one
//! characterization of the orbit stratification against the others and
//! returns a serializable [`VerificationReport`].
//!
//! Sample `k` of a run with seed `s` is drawn from the ChaCha8 stream
//! `(s, k)`, so any sample can be regenerated in isolation and the work
//! splits across threads without changing results.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::index::sample as sample_indices;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cells::{self, Mode, Side};
use crate::double_bruhat::{
    classify_double, decompose, dense_orbit, is_nonempty, nonempty_by_factors, nonempty_by_search,
    nonempty_by_support, DoubleCellIndex,
};
use crate::echelon::{
    degenerate_in_pattern, in_pattern, leaf_factors, sample_in_stratum, stratify_pattern,
    EchelonPattern, PatternKind,
};
use crate::error::{Error, Result};
use crate::exact_matrix::{degenerate, sample, seeded_rng, RationalMatrix, SampleKind};
use crate::leaves::{
    classify_leaf, enumerate, enumerate_by_bruhat, lower_block, upper_block, LeafIndex, LeafProbe,
    LeafTargets,
};
use crate::permutations::{combinations, PartialPermutation, Permutation};
use crate::sigma::{enumerate_sigma, phi_inv, phi_to_leaf, SigmaTuple};

pub const REPORT_SCHEMA: &str = "leaf-atlas/report/v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Campaign {
    Partition,
    #[serde(rename = "thm42_equiv")]
    RankConditions,
    ClosureOrder,
    #[serde(rename = "lemma75_blocks")]
    BlockClasses,
    PhiBijection,
    EchelonStrata,
    DoubleCells,
    Counts,
}

impl Campaign {
    pub const ALL: [Campaign; 8] = [
        Campaign::Partition,
        Campaign::RankConditions,
        Campaign::ClosureOrder,
        Campaign::BlockClasses,
        Campaign::PhiBijection,
        Campaign::EchelonStrata,
        Campaign::DoubleCells,
        Campaign::Counts,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Campaign::Partition => "partition",
            Campaign::RankConditions => "thm42_equiv",
            Campaign::ClosureOrder => "closure_order",
            Campaign::BlockClasses => "lemma75_blocks",
            Campaign::PhiBijection => "phi_bijection",
            Campaign::EchelonStrata => "echelon_strata",
            Campaign::DoubleCells => "double_cells",
            Campaign::Counts => "counts",
        }
    }
}

impl fmt::Display for Campaign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Campaign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Campaign::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Campaign::ALL.iter().map(|c| c.name()).collect();
                Error::Parse(format!("unknown campaign {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub m: usize,
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    /// Exhaustive enumerations run only when `max(m, n)` is at most this.
    pub exhaustive_limit: usize,
    /// Per-sample checks cover every orbit index when there are at most
    /// this many; otherwise the sample's own orbit plus `leaf_subset`
    /// indices drawn at random.
    pub exhaustive_leaves: usize,
    pub leaf_subset: usize,
    /// Factor-product checks run for `max(m, n)` at most this.
    pub product_limit: usize,
    /// Rejection attempts per echelon factor before a stratum is skipped.
    pub factor_attempts: usize,
    pub time_budget: Option<Duration>,
}

impl RunConfig {
    pub fn new(m: usize, n: usize, samples: usize, seed: u64) -> Self {
        RunConfig {
            m,
            n,
            samples,
            seed,
            exhaustive_limit: 4,
            exhaustive_leaves: 2000,
            leaf_subset: 64,
            product_limit: 3,
            factor_attempts: 400,
            time_budget: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub m: usize,
    pub n: usize,
    pub t: Option<usize>,
    pub seed: u64,
    pub samples: usize,
}

/// A failed check with everything needed to replay it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub check: String,
    pub detail: String,
    pub input: Value,
}

/// Check counts, mergeable in any order.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Tally {
    pub attempted: u64,
    pub passed: u64,
    pub failed: u64,
    pub skipped: u64,
    pub counterexamples: Vec<Counterexample>,
    pub notes: Vec<String>,
    pub metrics: BTreeMap<String, u64>,
}

impl Tally {
    pub fn check(&mut self, name: &str, ok: bool, input: impl FnOnce() -> Value, detail: impl FnOnce() -> String) {
        self.attempted += 1;
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            self.counterexamples.push(Counterexample {
                check: name.to_string(),
                detail: detail(),
                input: input(),
            });
        }
    }

    pub fn skip(&mut self, note: String) {
        self.attempted += 1;
        self.skipped += 1;
        self.notes.push(note);
    }

    pub fn note(&mut self, note: String) {
        self.notes.push(note);
    }

    pub fn metric(&mut self, key: &str, value: u64) {
        *self.metrics.entry(key.to_string()).or_insert(0) += value;
    }

    pub fn merge(mut self, other: Tally) -> Tally {
        self.attempted += other.attempted;
        self.passed += other.passed;
        self.failed += other.failed;
        self.skipped += other.skipped;
        self.counterexamples.extend(other.counterexamples);
        self.notes.extend(other.notes);
        for (k, v) in other.metrics {
            *self.metrics.entry(k).or_insert(0) += v;
        }
        self
    }

    /// Canonical ordering so merged results do not depend on merge order.
    fn canonicalize(&mut self) {
        self.counterexamples.sort_by(|a, b| {
            (a.check.as_str(), a.input.to_string(), a.detail.as_str())
                .cmp(&(b.check.as_str(), b.input.to_string(), b.detail.as_str()))
        });
        self.notes.sort();
        self.notes.dedup();
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: String,
    pub campaign: Campaign,
    pub params: Params,
    pub attempted: u64,
    pub passed: u64,
    pub failed: u64,
    pub skipped: u64,
    pub counterexamples: Vec<Counterexample>,
    pub notes: Vec<String>,
    pub metrics: BTreeMap<String, u64>,
    /// False when a resource limit cut the campaign short.
    pub complete: bool,
    pub wall_time_ms: u64,
}

impl VerificationReport {
    pub fn success(&self) -> bool {
        self.failed == 0 && self.complete
    }
}

fn matrix_json(x: &RationalMatrix) -> Value {
    serde_json::to_value(x).expect("matrices serialize")
}

/// Sample `index` of a run: a product of full-rank integer factors of rank
/// `index mod (min(m, n) + 1)`, then randomly degenerated. The generator is
/// returned so per-sample choices continue the same stream.
pub fn sample_matrix(m: usize, n: usize, seed: u64, index: u64) -> (RationalMatrix, rand_chacha::ChaCha8Rng) {
    let mut rng = seeded_rng(seed, index);
    let t = (index as usize) % (m.min(n) + 1);
    let mut x = sample(&SampleKind::RankT { rows: m, cols: n, t }, &mut rng).expect("rank within range");
    degenerate(&mut x, &mut rng);
    (x, rng)
}

/// Orbit indices with precomputed rank-condition targets.
pub struct LeafCatalog {
    pub leaves: Vec<LeafIndex>,
    pub targets: Vec<LeafTargets>,
    position: HashMap<Permutation, usize>,
}

impl LeafCatalog {
    pub fn new(m: usize, n: usize) -> Self {
        let leaves = enumerate(m, n, None);
        let targets = leaves.par_iter().map(LeafTargets::new).collect();
        let position = leaves.iter().enumerate().map(|(k, l)| (l.w().clone(), k)).collect();
        LeafCatalog {
            leaves,
            targets,
            position,
        }
    }

    pub fn position(&self, leaf: &LeafIndex) -> Option<usize> {
        self.position.get(leaf.w()).copied()
    }
}

/// The orbit indices a sample is checked against.
fn candidate_leaves<R: Rng>(catalog: &LeafCatalog, class: usize, cfg: &RunConfig, rng: &mut R) -> (Vec<usize>, bool) {
    let total = catalog.leaves.len();
    if total <= cfg.exhaustive_leaves {
        return ((0..total).collect(), true);
    }
    let mut set: BTreeSet<usize> = sample_indices(rng, total, cfg.leaf_subset.min(total)).into_iter().collect();
    set.insert(class);
    (set.into_iter().collect(), false)
}

/// Runs the per-sample checks of a sampled campaign on one matrix.
pub fn check_sample<R: Rng>(
    campaign: Campaign,
    catalog: &LeafCatalog,
    cfg: &RunConfig,
    x: &RationalMatrix,
    payload: &Value,
    rng: &mut R,
) -> Tally {
    let mut tally = Tally::default();
    let (m, n) = (x.rows(), x.cols());
    let class = classify_leaf(x);
    let Some(class_pos) = catalog.position(&class) else {
        tally.check("classified_index_enumerated", false, || payload.clone(), || format!("{:?}", class.w()));
        return tally;
    };
    let input = |leaf: Option<&LeafIndex>| {
        let mut p = payload.clone();
        if let Some(l) = leaf {
            p["leaf"] = json!(l.w());
        }
        p
    };
    match campaign {
        Campaign::Partition => {
            let probe = LeafProbe::new(x);
            let (cands, exhaustive) = candidate_leaves(catalog, class_pos, cfg, rng);
            let passing: Vec<usize> = cands
                .iter()
                .copied()
                .filter(|&k| probe.satisfies(&catalog.targets[k], Mode::Cell))
                .collect();
            tally.check(
                "exactly_one_orbit",
                passing == [class_pos],
                || input(None),
                || {
                    let ws: Vec<String> = passing.iter().map(|&k| catalog.leaves[k].w().to_string()).collect();
                    format!("passing orbits [{}], classified {}", ws.join("; "), class.w())
                },
            );
            if exhaustive {
                tally.metric("exhaustive_samples", 1);
            }
            let rank = x.rank();
            tally.check("rank_matches_t", class.t() == rank, || input(None), || {
                format!("t = {}, rank = {rank}", class.t())
            });
            let mn = m * n;
            let is_max = class.w() == &Permutation::longest(m + n);
            let is_min = class.w() == &Permutation::block_longest(n, m);
            let dims_ok = class.dim() <= mn && (class.dim() == mn) == is_max && (class.dim() == 0) == is_min;
            tally.check("dimension_bounds", dims_ok, || input(None), || format!("dim {}", class.dim()));
        }
        Campaign::RankConditions | Campaign::ClosureOrder => {
            let probe = LeafProbe::new(x);
            let (cands, exhaustive) = candidate_leaves(catalog, class_pos, cfg, rng);
            let mode = if campaign == Campaign::RankConditions { Mode::Cell } else { Mode::Closure };
            let bad = cands.iter().copied().find(|&k| {
                let by_conditions = probe.satisfies(&catalog.targets[k], mode);
                let expected = match mode {
                    Mode::Cell => k == class_pos,
                    Mode::Closure => class.w().bruhat_leq(catalog.leaves[k].w()).unwrap(),
                };
                by_conditions != expected
            });
            let name = if mode == Mode::Cell { "rank_conditions_match_class" } else { "closure_matches_bruhat" };
            tally.check(
                name,
                bad.is_none(),
                || input(bad.map(|k| &catalog.leaves[k])),
                || format!("classified {}", class.w()),
            );
            if exhaustive {
                tally.metric("exhaustive_samples", 1);
            }
            tally.metric("orbit_comparisons", cands.len() as u64);
        }
        Campaign::BlockClasses => {
            let sigma = phi_inv(&class);
            let upper = cells::classify(x, Side::Upper);
            let lower = cells::classify(x, Side::Lower);
            tally.check("upper_class_is_y_i_vinv", upper == sigma.upper_partial(), || input(Some(&class)), || {
                format!("B+ class {upper}, tuple gives {}", sigma.upper_partial())
            });
            tally.check("lower_class_is_z_i_uinv", lower == sigma.lower_partial(), || input(Some(&class)), || {
                format!("B- class {lower}, tuple gives {}", sigma.lower_partial())
            });
            tally.check("upper_class_is_lower_left_block", upper == upper_block(&class), || input(Some(&class)), || {
                format!("B+ class {upper}, block {}", upper_block(&class))
            });
            tally.check("lower_class_is_flipped_upper_right_block", lower == lower_block(&class), || input(Some(&class)), || {
                format!("B- class {lower}, block {}", lower_block(&class))
            });
            check_in_own_cell(&mut tally, x, &class, &sigma, payload);
        }
        Campaign::DoubleCells => {
            let sigma = phi_inv(&class);
            check_in_own_cell(&mut tally, x, &class, &sigma, payload);
        }
        _ => unreachable!("not a sampled campaign"),
    }
    tally
}

fn check_in_own_cell(tally: &mut Tally, x: &RationalMatrix, class: &LeafIndex, sigma: &SigmaTuple, payload: &Value) {
    let cell = classify_double(x);
    let nonempty = is_nonempty(&cell);
    tally.check("own_double_cell_nonempty", nonempty, || payload.clone(), || format!("{} / {}", cell.w1, cell.w2));
    if nonempty {
        let orbits = decompose(&cell).unwrap_or_default();
        tally.check(
            "orbit_in_cell_decomposition",
            orbits.contains(sigma),
            || {
                let mut p = payload.clone();
                p["leaf"] = json!(class.w());
                p
            },
            || format!("{} / {}: {} orbits", cell.w1, cell.w2, orbits.len()),
        );
    }
}

/// Runs a campaign.
pub fn run(campaign: Campaign, cfg: &RunConfig) -> Result<VerificationReport> {
    if cfg.m == 0 || cfg.n == 0 {
        return Err(Error::InvalidParameter("m and n must be positive".into()));
    }
    let start = Instant::now();
    let mut complete = true;
    let mut tally = match campaign {
        Campaign::Partition | Campaign::RankConditions | Campaign::ClosureOrder | Campaign::BlockClasses => {
            run_sampled(campaign, cfg, start, &mut complete)
        }
        Campaign::PhiBijection => guard_exhaustive(cfg, &mut complete, run_phi_bijection),
        Campaign::DoubleCells => {
            let mut t = guard_exhaustive(cfg, &mut complete, run_double_cells);
            t = t.merge(run_sampled(campaign, cfg, start, &mut complete));
            t
        }
        Campaign::EchelonStrata => guard_exhaustive(cfg, &mut complete, run_echelon),
        Campaign::Counts => guard_exhaustive(cfg, &mut complete, run_counts),
    };
    tally.canonicalize();
    Ok(VerificationReport {
        schema: REPORT_SCHEMA.to_string(),
        campaign,
        params: Params {
            m: cfg.m,
            n: cfg.n,
            t: None,
            seed: cfg.seed,
            samples: cfg.samples,
        },
        attempted: tally.attempted,
        passed: tally.passed,
        failed: tally.failed,
        skipped: tally.skipped,
        counterexamples: tally.counterexamples,
        notes: tally.notes,
        metrics: tally.metrics,
        complete,
        wall_time_ms: start.elapsed().as_millis() as u64,
    })
}

fn guard_exhaustive(cfg: &RunConfig, complete: &mut bool, body: fn(&RunConfig) -> Tally) -> Tally {
    if cfg.m.max(cfg.n) > cfg.exhaustive_limit {
        *complete = false;
        let mut t = Tally::default();
        t.note(format!(
            "exhaustive checks need max(m, n) <= {}; skipped",
            cfg.exhaustive_limit
        ));
        return t;
    }
    body(cfg)
}

fn run_sampled(campaign: Campaign, cfg: &RunConfig, start: Instant, complete: &mut bool) -> Tally {
    if cfg.samples == 0 {
        return Tally::default();
    }
    let catalog = LeafCatalog::new(cfg.m, cfg.n);
    let over_budget = |_: &()| cfg.time_budget.is_some_and(|b| start.elapsed() > b);
    let results: Vec<Option<Tally>> = (0..cfg.samples as u64)
        .into_par_iter()
        .map(|index| {
            if over_budget(&()) {
                return None;
            }
            let (x, mut rng) = sample_matrix(cfg.m, cfg.n, cfg.seed, index);
            let payload = json!({ "seed": cfg.seed, "index": index, "matrix": matrix_json(&x) });
            Some(check_sample(campaign, &catalog, cfg, &x, &payload, &mut rng))
        })
        .collect();
    let mut tally = Tally::default();
    let mut dropped = 0;
    for r in results {
        match r {
            Some(t) => tally = tally.merge(t),
            None => dropped += 1,
        }
    }
    tally.metric("samples", (cfg.samples - dropped) as u64);
    tally.metric("orbit_count", catalog.leaves.len() as u64);
    if dropped > 0 {
        *complete = false;
        tally.note(format!("time budget exhausted; {dropped} samples not run"));
    }
    tally
}

/// Replays one sample of a sampled campaign from its `(seed, index)`.
pub fn replay(campaign: Campaign, cfg: &RunConfig, index: u64) -> Tally {
    let catalog = LeafCatalog::new(cfg.m, cfg.n);
    let (x, mut rng) = sample_matrix(cfg.m, cfg.n, cfg.seed, index);
    let payload = json!({ "seed": cfg.seed, "index": index, "matrix": matrix_json(&x) });
    let mut t = check_sample(campaign, &catalog, cfg, &x, &payload, &mut rng);
    t.canonicalize();
    t
}

fn run_phi_bijection(cfg: &RunConfig) -> Tally {
    let (m, n) = (cfg.m, cfg.n);
    let mut tally = Tally::default();
    for t in 0..=m.min(n) {
        let sigmas = enumerate_sigma(m, n, t).expect("t in range");
        let leaves = enumerate(m, n, Some(t));
        let params = || json!({ "m": m, "n": n, "t": t });
        tally.check("sigma_count_equals_orbit_count", sigmas.len() == leaves.len(), params, || {
            format!("|sigma| = {}, |orbits| = {}", sigmas.len(), leaves.len())
        });
        let mut images = BTreeSet::new();
        for s in &sigmas {
            let input = || json!({ "m": m, "n": n, "sigma": s });
            match phi_to_leaf(s) {
                Ok(leaf) => {
                    tally.check("rank_preserved", leaf.t() == t, input, || format!("{:?}", leaf.w()));
                    let back = phi_inv(&leaf);
                    tally.check("round_trip", &back == s, input, || format!("{back:?}"));
                    images.insert(leaf.w().clone());
                }
                Err(e) => tally.check("phi_defined", false, input, || e.to_string()),
            }
        }
        tally.check("injective", images.len() == sigmas.len(), params, || {
            format!("{} distinct images of {} tuples", images.len(), sigmas.len())
        });
        for leaf in &leaves {
            let s = phi_inv(leaf);
            let ok = s.validate().is_ok() && phi_to_leaf(&s).ok().as_ref() == Some(leaf);
            tally.check("inverse_lands_on_leaf", ok, || json!({ "m": m, "n": n, "leaf": leaf.w() }), || {
                format!("{s:?}")
            });
        }
        tally.metric("tuples", sigmas.len() as u64);
    }
    if (m, n) == (3, 3) {
        let lock = example_sigma();
        let leaf = phi_to_leaf(&lock).ok();
        let expected = Permutation::new(vec![6, 2, 3, 5, 4, 1]).unwrap();
        tally.check(
            "reference_tuple_lock",
            leaf.as_ref().map(|l| l.w()) == Some(&expected),
            || json!({ "sigma": lock }),
            || format!("{leaf:?}"),
        );
    }
    tally
}

/// The tuple of the three-by-three reference orbit `[6,2,3,5,4,1]`.
pub fn example_sigma() -> SigmaTuple {
    let p = |v: &[usize]| Permutation::new(v.to_vec()).unwrap();
    SigmaTuple::new(p(&[3, 1, 2]), p(&[1, 3, 2]), p(&[1, 2, 3]), p(&[3, 1, 2]), 1).expect("valid tuple")
}

fn run_double_cells(cfg: &RunConfig) -> Tally {
    let (m, n) = (cfg.m, cfg.n);
    let mut tally = Tally::default();
    let leaves = enumerate(m, n, None);
    let all = PartialPermutation::all(m, n);
    let results: Vec<(Tally, Vec<SigmaTuple>)> = all
        .par_iter()
        .map(|w1| {
            let mut t = Tally::default();
            let mut orbits = Vec::new();
            for w2 in &all {
                let d = DoubleCellIndex::new(w1.clone(), w2.clone()).unwrap();
                let a = nonempty_by_factors(&d);
                let b = nonempty_by_support(&d);
                let c = nonempty_by_search(&d, &leaves);
                let input = || json!({ "w1": d.w1, "w2": d.w2 });
                t.check("criteria_agree", a == b && b == c, input, || format!("factors {a}, support {b}, search {c}"));
                if a && b {
                    t.metric("nonempty_cells", 1);
                    let dec = decompose(&d).unwrap();
                    let dense = dense_orbit(&d).unwrap();
                    let top = phi_to_leaf(&dense).unwrap();
                    let dominated = dec
                        .iter()
                        .all(|s| phi_to_leaf(s).unwrap().w().bruhat_leq(top.w()).unwrap());
                    t.check("dense_orbit_dominates", dec.contains(&dense) && dominated, input, || {
                        format!("dense {dense:?}")
                    });
                    let blocks_ok = dec.iter().all(|s| {
                        let l = phi_to_leaf(s).unwrap();
                        upper_block(&l) == d.w1 && lower_block(&l) == d.w2
                    });
                    t.check("decomposition_orbits_in_cell", blocks_ok, input, || String::new());
                    orbits.extend(dec);
                }
            }
            (t, orbits)
        })
        .collect();
    let mut union: Vec<SigmaTuple> = Vec::new();
    for (t, o) in results {
        tally = tally.merge(t);
        union.extend(o);
    }
    union.sort();
    let mut expected: Vec<SigmaTuple> = leaves.iter().map(phi_inv).collect();
    expected.sort();
    tally.check(
        "cells_partition_orbits",
        union == expected,
        || json!({ "m": m, "n": n }),
        || format!("{} orbits from cells, {} orbits in total", union.len(), expected.len()),
    );
    if (m, n) == (3, 3) {
        let d = DoubleCellIndex::new("3x3:1->3".parse().unwrap(), "3x3:3->1".parse().unwrap()).unwrap();
        let dec = decompose(&d).unwrap_or_default();
        let dense = dense_orbit(&d).ok();
        let dense_dim = dense.as_ref().and_then(|s| phi_to_leaf(s).ok()).map(|l| l.dim());
        let reference = example_sigma();
        let reference_dim = phi_to_leaf(&reference).ok().map(|l| l.dim());
        // The reference tuple is a proper 4-dimensional stratum; the dense
        // orbit is the generic rank-one stratum of dimension 5.
        tally.check(
            "reference_cell",
            dec.len() == 4
                && dec.contains(&reference)
                && dense_dim == Some(5)
                && reference_dim == Some(4),
            || json!({ "w1": d.w1, "w2": d.w2 }),
            || format!("{} orbits, dense {dense:?} (dim {dense_dim:?}), reference dim {reference_dim:?}", dec.len()),
        );
        tally.note(format!(
            "reference cell: dense orbit {} (dim 5); reference tuple {} has dim 4",
            dense.map(|s| format!("{:?}", (s.y.images(), s.v.images(), s.z.images(), s.u.images()))).unwrap_or_default(),
            phi_to_leaf(&reference).map(|l| l.w().to_string()).unwrap_or_default()
        ));
    }
    tally
}

fn counting_formula(m: usize, n: usize, t: usize) -> u64 {
    let fact: u64 = (1..=t as u64).product();
    fact * combinations(m, t).len() as u64 * combinations(n, t).len() as u64
}

fn run_counts(cfg: &RunConfig) -> Tally {
    let (m, n) = (cfg.m, cfg.n);
    let mut tally = Tally::default();
    let params = || json!({ "m": m, "n": n });
    let leaves = enumerate(m, n, None);
    tally.metric("leaf_count", leaves.len() as u64);
    if m + n <= 8 {
        let window: Vec<Permutation> = leaves.iter().map(|l| l.w().clone()).collect();
        let bruhat = enumerate_by_bruhat(m, n);
        tally.check("window_equals_bruhat", window == bruhat, params, || {
            format!("{} by window, {} by Bruhat", window.len(), bruhat.len())
        });
    } else {
        tally.skip(format!("S_{} too large for the Bruhat cross-check", m + n));
    }
    let mut sigma_total = 0;
    for t in 0..=m.min(n) {
        let partial = PartialPermutation::all_of_rank(m, n, t).len() as u64;
        let formula = counting_formula(m, n, t);
        tally.check("partial_permutation_count", partial == formula, || json!({ "m": m, "n": n, "t": t }), || {
            format!("enumerated {partial}, formula {formula}")
        });
        sigma_total += enumerate_sigma(m, n, t).map(|v| v.len()).unwrap_or(0);
    }
    tally.check("sigma_total_equals_orbits", sigma_total == leaves.len(), params, || {
        format!("{sigma_total} tuples, {} orbits", leaves.len())
    });
    let lo = LeafIndex::minimum(m, n).unwrap();
    let hi = LeafIndex::maximum(m, n).unwrap();
    tally.check("extreme_dimensions", lo.dim() == 0 && hi.dim() == m * n, params, || {
        format!("min dim {}, max dim {}", lo.dim(), hi.dim())
    });
    tally
}

fn random_nonzero_rational<R: Rng>(rng: &mut R) -> BigRational {
    let mut num = rng.gen_range(1..=9i64);
    if rng.gen_bool(0.5) {
        num = -num;
    }
    BigRational::new(BigInt::from(num), BigInt::from(rng.gen_range(1..=9i64)))
}

fn pivot_partial(pattern: &EchelonPattern) -> PartialPermutation {
    let (rows, cols) = pattern.shape();
    let mut image = vec![None; cols];
    match pattern.kind() {
        PatternKind::Column { .. } => {
            for (j, &r) in pattern.pivots().iter().enumerate() {
                image[j] = Some(r);
            }
        }
        PatternKind::Row { .. } => {
            for (i, &c) in pattern.pivots().iter().enumerate() {
                image[c - 1] = Some(i + 1);
            }
        }
    }
    PartialPermutation::new(rows, cols, image).expect("pivots are distinct")
}

fn check_pattern(pattern: &EchelonPattern, samples: usize, seed: u64, stream: u64) -> Tally {
    let mut tally = Tally::default();
    let strata = stratify_pattern(pattern);
    let strata_leaves: Vec<LeafIndex> = strata.iter().map(|s| phi_to_leaf(&s.sigma).unwrap()).collect();
    let pivots = pivot_partial(pattern);
    let side = match pattern.kind() {
        PatternKind::Column { .. } => Side::Lower,
        PatternKind::Row { .. } => Side::Upper,
    };
    let mut reached = BTreeSet::new();
    let mut rng = seeded_rng(seed, stream);
    for k in 0..samples {
        let mut a = sample(&pattern.sample_kind(), &mut rng).unwrap();
        if k > 0 {
            degenerate_in_pattern(&mut a, pattern, &mut rng);
        }
        let input = || json!({ "pattern": pattern, "matrix": matrix_json(&a) });
        let member = in_pattern(&a, pattern).unwrap();
        tally.check("sample_in_pattern", member, input, String::new);
        let class = classify_leaf(&a);
        let hits: Vec<usize> = (0..strata.len()).filter(|&s| strata_leaves[s] == class).collect();
        tally.check("exactly_one_stratum", hits.len() == 1, input, || {
            format!("classified {}, {} matching strata", class.w(), hits.len())
        });
        reached.extend(hits);
        let class_side = cells::classify(&a, side);
        tally.check("pivot_class", class_side == pivots, input, || format!("{class_side}"));
        // torus action
        let mut scaled = a.clone();
        for i in 1..=a.rows() {
            scaled.scale_row(i, &random_nonzero_rational(&mut rng));
        }
        for j in 1..=a.cols() {
            scaled.scale_col(j, &random_nonzero_rational(&mut rng));
        }
        tally.check(
            "torus_stable",
            in_pattern(&scaled, pattern).unwrap() && classify_leaf(&scaled) == class,
            input,
            String::new,
        );
        // transpose duality, on the member and on an unconstrained matrix
        let dual = pattern.transposed();
        let (rows, cols) = pattern.shape();
        let mut free = sample(&SampleKind::Dense { rows, cols }, &mut rng).unwrap();
        degenerate(&mut free, &mut rng);
        let dual_ok = [&a, &free]
            .iter()
            .all(|b| in_pattern(b, pattern).unwrap() == in_pattern(&b.transpose(), &dual).unwrap());
        tally.check("transpose_duality", dual_ok, input, String::new);
    }
    tally.metric("strata", strata.len() as u64);
    tally.metric("strata_reached", reached.len() as u64);
    if reached.len() < strata.len() {
        tally.note(format!(
            "{pattern}: {} of {} strata reached by sampling",
            reached.len(),
            strata.len()
        ));
    }
    tally
}

fn run_echelon(cfg: &RunConfig) -> Tally {
    let (m, n) = (cfg.m, cfg.n);
    let mut patterns = Vec::new();
    for t in 1..=m {
        patterns.extend(EchelonPattern::all(true, m, t));
    }
    for t in 1..=n {
        patterns.extend(EchelonPattern::all(false, n, t));
    }
    let per = (cfg.samples / patterns.len().max(1)).max(1);
    let mut tally = patterns
        .par_iter()
        .enumerate()
        .map(|(k, p)| check_pattern(p, per, cfg.seed, k as u64))
        .reduce(Tally::default, Tally::merge);
    tally.metric("patterns", patterns.len() as u64);

    if m.max(n) > cfg.product_limit {
        tally.note(format!("factor products need max(m, n) <= {}; skipped", cfg.product_limit));
        return tally;
    }
    let leaves = enumerate(m, n, None);
    let base = patterns.len() as u64;
    let products = leaves
        .par_iter()
        .enumerate()
        .map(|(k, leaf)| {
            let mut t = Tally::default();
            let mut rng = seeded_rng(cfg.seed, base + k as u64);
            let f = leaf_factors(leaf);
            let input = || json!({ "m": m, "n": n, "leaf": leaf.w(), "sigma": f.sigma });
            if f.sigma.t == 0 {
                let zero = RationalMatrix::zeros(m, n);
                t.check("zero_orbit_product", &classify_leaf(&zero) == leaf, input, String::new);
                return t;
            }
            let (Some(cl), Some(rl), Some(cp), Some(rp)) = (&f.col_leaf, &f.row_leaf, &f.col_pattern, &f.row_pattern)
            else {
                t.check("factor_descriptors", false, input, String::new);
                return t;
            };
            let c = sample_in_stratum(cp, cl, cfg.factor_attempts, &mut rng);
            let r = sample_in_stratum(rp, rl, cfg.factor_attempts, &mut rng);
            match (c, r) {
                (Some(c), Some(r)) => {
                    let prod = c.mul(&r).unwrap();
                    let got = classify_leaf(&prod);
                    t.check(
                        "factor_product_in_orbit",
                        &got == leaf,
                        || {
                            let mut p = input();
                            p["col_factor"] = matrix_json(&c);
                            p["row_factor"] = matrix_json(&r);
                            p
                        },
                        || format!("product classified {}", got.w()),
                    );
                }
                (c, r) => t.skip(format!(
                    "{}: factor stratum not reached ({}{})",
                    leaf.w(),
                    if c.is_none() { "column " } else { "" },
                    if r.is_none() { "row" } else { "" }
                )),
            }
            t
        })
        .reduce(Tally::default, Tally::merge);
    tally.merge(products)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn campaign_names_round_trip() {
        for c in Campaign::ALL {
            assert_eq!(c.name().parse::<Campaign>().unwrap(), c);
        }
        assert!("nope".parse::<Campaign>().is_err());
    }

    #[test]
    fn counts_example() {
        let r = run(Campaign::Counts, &RunConfig::new(2, 2, 0, 0)).unwrap();
        assert!(r.success(), "{r:?}");
        assert_eq!(r.metrics["leaf_count"], 14);
    }

    #[test]
    fn partition_one_by_one() {
        let r = run(Campaign::Partition, &RunConfig::new(1, 1, 100, 7)).unwrap();
        assert!(r.success(), "{r:?}");
        assert_eq!(r.metrics["samples"], 100);
        assert_eq!(r.metrics["orbit_count"], 2);
        assert_eq!(r.metrics["exhaustive_samples"], 100);
    }

    #[test]
    fn phi_bijection_three_by_three() {
        let r = run(Campaign::PhiBijection, &RunConfig::new(3, 3, 0, 0)).unwrap();
        assert!(r.success(), "{:?}", r.counterexamples);
    }

    #[test]
    fn deterministic_reports() {
        let cfg = RunConfig::new(2, 3, 40, 99);
        let mut a = run(Campaign::BlockClasses, &cfg).unwrap();
        let mut b = run(Campaign::BlockClasses, &cfg).unwrap();
        a.wall_time_ms = 0;
        b.wall_time_ms = 0;
        assert_eq!(a, b);
        assert!(a.success());
    }

    #[test]
    fn merge_is_order_independent() {
        let mut x = Tally::default();
        x.check("a", false, || json!(1), || "one".into());
        let mut y = Tally::default();
        y.check("b", false, || json!(2), || "two".into());
        y.skip("s".into());
        let mut xy = x.clone().merge(y.clone());
        let mut yx = y.merge(x);
        xy.canonicalize();
        yx.canonicalize();
        assert_eq!(xy, yx);
        assert_eq!(xy.attempted, xy.passed + xy.failed + xy.skipped);
    }

    #[test]
    fn exhaustive_limit_flags_incomplete() {
        let mut cfg = RunConfig::new(5, 1, 0, 0);
        cfg.exhaustive_limit = 4;
        let r = run(Campaign::Counts, &cfg).unwrap();
        assert!(!r.complete);
    }

    #[test]
    fn replay_reproduces_sample() {
        let cfg = RunConfig::new(2, 2, 5, 3);
        let a = replay(Campaign::RankConditions, &cfg, 4);
        let b = replay(Campaign::RankConditions, &cfg, 4);
        assert_eq!(a, b);
        assert_eq!(a.failed, 0);
    }
}
