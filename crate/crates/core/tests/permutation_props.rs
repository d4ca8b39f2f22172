use std::collections::HashSet;

use leaf_atlas::permutations::{Parabolic, PartialPermutation, Permutation};
use proptest::prelude::*;

fn permutation(max: usize) -> impl Strategy<Value = Permutation> {
    (1..=max).prop_flat_map(|n| Just((1..=n).collect::<Vec<_>>()).prop_shuffle().prop_map(|v| Permutation::new(v).unwrap()))
}

fn pair(max: usize) -> impl Strategy<Value = (Permutation, Permutation)> {
    (1..=max).prop_flat_map(|n| {
        let s = || Just((1..=n).collect::<Vec<_>>()).prop_shuffle().prop_map(|v| Permutation::new(v).unwrap());
        (s(), s())
    })
}

fn partial(max: usize) -> impl Strategy<Value = PartialPermutation> {
    (1..=max, 1..=max).prop_flat_map(|(rows, cols)| {
        (Just((1..=rows).collect::<Vec<_>>()).prop_shuffle(), proptest::collection::vec(any::<bool>(), cols)).prop_map(
            move |(rows_order, keep)| {
                let image = (0..cols).map(|j| if keep[j] && j < rows { Some(rows_order[j]) } else { None }).collect();
                PartialPermutation::new(rows, cols, image).unwrap()
            },
        )
    })
}

/// A reduced word of `w` from bubble sort, as adjacent positions `i`
/// meaning the transposition `(i, i+1)` applied on the right.
fn reduced_word(w: &Permutation) -> Vec<usize> {
    let mut a = w.images().to_vec();
    let mut word = Vec::new();
    loop {
        let Some(i) = (0..a.len().saturating_sub(1)).find(|&i| a[i] > a[i + 1]) else { break };
        a.swap(i, i + 1);
        word.push(i + 1);
    }
    word.reverse();
    word
}

/// Everything below `w` in Bruhat order: products of all subwords of a
/// reduced word.
fn lower_interval(w: &Permutation) -> HashSet<Vec<usize>> {
    let word = reduced_word(w);
    let n = w.size();
    let mut out = HashSet::new();
    for mask in 0u32..(1 << word.len()) {
        let mut a: Vec<usize> = (1..=n).collect();
        for (k, &i) in word.iter().enumerate() {
            if mask & (1 << k) != 0 {
                a.swap(i - 1, i);
            }
        }
        out.insert(a);
    }
    out
}

#[test]
fn reduced_words_have_length_many_letters() {
    for n in 1..=5 {
        for w in Permutation::all(n) {
            let word = reduced_word(&w);
            assert_eq!(word.len(), w.length());
            let mut a: Vec<usize> = (1..=n).collect();
            for &i in &word {
                a.swap(i - 1, i);
            }
            assert_eq!(a, w.images());
        }
    }
}

#[test]
fn bruhat_matches_subword_oracle_exhaustively() {
    for n in 1..=5 {
        let all: Vec<Permutation> = Permutation::all(n).collect();
        for w in &all {
            let below = lower_interval(w);
            for y in &all {
                assert_eq!(y.bruhat_leq(w).unwrap(), below.contains(y.images()), "{y} <= {w}");
            }
        }
    }
}

#[test]
fn lex_enumeration_order() {
    let all: Vec<Vec<usize>> = Permutation::all(4).map(|p| p.images().to_vec()).collect();
    assert_eq!(all.len(), 24);
    assert!(all.windows(2).all(|w| w[0] < w[1]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn adjacent_transposition_changes_length_by_one(w in permutation(8), k in 0usize..7) {
        let n = w.size();
        prop_assume!(n > 1);
        let i = 1 + k % (n - 1);
        let s = Permutation::transposition(n, i, i + 1);
        for ws in [w.compose(&s).unwrap(), s.compose(&w).unwrap()] {
            prop_assert_eq!(ws.length().abs_diff(w.length()), 1);
        }
    }

    #[test]
    fn bruhat_reverses_under_longest((y, z) in pair(7)) {
        let top = Permutation::longest(y.size());
        let (ty, tz) = (top.compose(&y).unwrap(), top.compose(&z).unwrap());
        prop_assert_eq!(y.bruhat_leq(&z).unwrap(), tz.bruhat_leq(&ty).unwrap());
        let (yt, zt) = (y.compose(&top).unwrap(), z.compose(&top).unwrap());
        prop_assert_eq!(y.bruhat_leq(&z).unwrap(), zt.bruhat_leq(&yt).unwrap());
    }

    #[test]
    fn bruhat_is_compatible_with_length((y, z) in pair(7)) {
        if y.bruhat_leq(&z).unwrap() {
            prop_assert!(y.length() <= z.length());
            if y.length() == z.length() {
                prop_assert_eq!(&y, &z);
            }
        }
        prop_assert!(y.bruhat_leq(&y).unwrap());
        prop_assert!(Permutation::identity(y.size()).bruhat_leq(&y).unwrap());
        prop_assert!(y.bruhat_leq(&Permutation::longest(y.size())).unwrap());
    }

    #[test]
    fn inverse_and_matrix((y, z) in pair(6)) {
        prop_assert!(y.compose(&y.inverse()).unwrap().is_identity());
        prop_assert_eq!(y.inverse().length(), y.length());
        let product = y.to_matrix().mul(&z.to_matrix()).unwrap();
        prop_assert_eq!(product, y.compose(&z).unwrap().to_matrix());
        prop_assert_eq!(y.bruhat_leq(&z).unwrap(), y.inverse().bruhat_leq(&z.inverse()).unwrap());
    }

    #[test]
    fn transpose_is_an_involution(p in partial(6)) {
        let t = p.transpose();
        prop_assert_eq!(t.rank(), p.rank());
        prop_assert_eq!((t.rows(), t.cols()), (p.cols(), p.rows()));
        prop_assert_eq!(t.transpose(), p.clone());
        prop_assert_eq!(t.to_matrix(), p.to_matrix().transpose());
    }

    #[test]
    fn partial_literal_round_trip(p in partial(6)) {
        let text = p.to_string();
        prop_assert_eq!(text.parse::<PartialPermutation>().unwrap(), p);
    }

    #[test]
    fn minimal_representatives(w in permutation(7), a in 0usize..8, b in 0usize..8) {
        let n = w.size();
        let first = a % (n + 1);
        let last = b % (n + 1 - first);
        let par = Parabolic::both(first, last);
        let rep = w.min_rep(par).unwrap();
        prop_assert!(rep.is_min_rep(par).unwrap());
        prop_assert!(rep.length() <= w.length());
        prop_assert!(rep.bruhat_leq(&w).unwrap());
        // same coset: rep⁻¹·w permutes within the blocks
        let q = rep.inverse().compose(&w).unwrap();
        for j in 1..=n {
            let in_first = j <= first && q.image(j) <= first;
            let in_last = j > n - last && q.image(j) > n - last;
            prop_assert!(q.image(j) == j || in_first || in_last);
        }
    }
}

/// Tail-block order facts: for `u` increasing on `t+1..n`, `v <= u` forces
/// `v(j) >= u(j)` on the tail; conversely for `v` increasing on `1..t`.
#[test]
fn tail_block_order_facts() {
    for n in 1..=5 {
        let all: Vec<Permutation> = Permutation::all(n).collect();
        for t in 0..=n {
            for u in &all {
                let u_tail_min = u.is_min_rep(Parabolic::last(n - t)).unwrap();
                for v in &all {
                    let tail_dominates = (t + 1..=n).all(|j| v.image(j) >= u.image(j));
                    if u_tail_min && v.bruhat_leq(u).unwrap() {
                        assert!(tail_dominates, "{v} <= {u}, t = {t}");
                    }
                    if v.is_min_rep(Parabolic::first(t)).unwrap() && tail_dominates {
                        assert!(v.bruhat_leq(u).unwrap(), "{v} vs {u}, t = {t}");
                    }
                }
            }
        }
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    (1..=k).fold(1, |acc, i| acc * (n + 1 - i) / i)
}

#[test]
fn partial_permutation_counts() {
    for m in 1..=5usize {
        for n in 1..=5usize {
            let mut total = 0;
            for t in 0..=m.min(n) {
                let got = PartialPermutation::all_of_rank(m, n, t);
                let fact: u64 = (1..=t as u64).product();
                assert_eq!(got.len() as u64, fact * binomial(m as u64, t as u64) * binomial(n as u64, t as u64));
                assert!(got.iter().all(|p| p.rank() == t));
                total += got.len();
            }
            assert_eq!(PartialPermutation::all(m, n).len(), total);
        }
    }
}
