use leaf_atlas::cells::{classify, in_cell, Mode, Side};
use leaf_atlas::exact_matrix::{degenerate, sample, seeded_rng, ProfileKind, RationalMatrix, SampleKind};
use leaf_atlas::permutations::{combinations, PartialPermutation};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn int_matrix(max: usize, lo: i64, hi: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max, 1..=max).prop_flat_map(move |(r, c)| proptest::collection::vec(proptest::collection::vec(lo..=hi, c), r))
}

fn det(a: &[Vec<i64>]) -> i64 {
    match a.len() {
        0 => 1,
        1 => a[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = a[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &v)| v).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * a[0][j] * det(&minor)
            })
            .sum(),
    }
}

/// Largest `k` with a nonzero `k × k` minor.
fn rank_by_minors(a: &[Vec<i64>]) -> usize {
    let (r, c) = (a.len(), a.first().map_or(0, Vec::len));
    (1..=r.min(c))
        .rev()
        .find(|&k| {
            combinations(r, k).iter().any(|rows| {
                combinations(c, k).iter().any(|cols| {
                    let sub: Vec<Vec<i64>> =
                        rows.iter().map(|&i| cols.iter().map(|&j| a[i - 1][j - 1]).collect()).collect();
                    det(&sub) != 0
                })
            })
        })
        .unwrap_or(0)
}

/// Rank of the northeast corner `rows 1..=p, cols q..=n` by minors, with
/// boundary zeros.
fn northeast(a: &[Vec<i64>], p: usize, q: usize) -> usize {
    let c = a[0].len();
    if p == 0 || q > c {
        return 0;
    }
    let sub: Vec<Vec<i64>> = a[..p].iter().map(|row| row[q - 1..].to_vec()).collect();
    rank_by_minors(&sub)
}

/// `B⁻` class from second differences of minor-expansion ranks.
fn lower_class_brute(a: &[Vec<i64>]) -> PartialPermutation {
    let (r, c) = (a.len(), a[0].len());
    let mut image = vec![None; c];
    for j in 1..=c {
        for i in 1..=r {
            let d = northeast(a, i, j) + northeast(a, i - 1, j + 1) - northeast(a, i - 1, j) - northeast(a, i, j + 1);
            if d == 1 {
                image[j - 1] = Some(i);
            }
        }
    }
    PartialPermutation::new(r, c, image).unwrap()
}

fn to_rational(a: &[Vec<i64>]) -> RationalMatrix {
    RationalMatrix::from_ints(a)
}

fn check_profile_shape(x: &RationalMatrix, kind: ProfileKind) -> Result<(), TestCaseError> {
    let p = x.rank_profile(kind);
    let (m, n) = (x.rows(), x.cols());
    for i in 1..=m {
        for j in 1..=n {
            let here = p.get(i, j);
            // growing the corner by one row or column adds at most one
            let (row_grown, col_grown) = match kind {
                ProfileKind::Southwest => (if i > 1 { p.get(i - 1, j) } else { here }, if j < n { p.get(i, j + 1) } else { here }),
                ProfileKind::Northeast => (if i < m { p.get(i + 1, j) } else { here }, if j > 1 { p.get(i, j - 1) } else { here }),
            };
            prop_assert!(row_grown >= here && row_grown <= here + 1);
            prop_assert!(col_grown >= here && col_grown <= here + 1);
        }
    }
    Ok(())
}

/// Maps a partial permutation of the half-turned grid back.
fn unrotate(w: &PartialPermutation) -> PartialPermutation {
    let (r, c) = (w.rows(), w.cols());
    let image = (1..=c).map(|j| w.get(c + 1 - j).map(|i| r + 1 - i)).collect();
    PartialPermutation::new(r, c, image).unwrap()
}

#[test]
fn lower_class_matches_brute_force_on_small_sign_matrices() {
    for (r, c) in [(1, 1), (1, 3), (2, 2), (2, 3), (3, 2), (3, 3)] {
        let cells = r * c;
        for code in 0..3usize.pow(cells as u32) {
            let mut k = code;
            let a: Vec<Vec<i64>> = (0..r)
                .map(|_| {
                    (0..c)
                        .map(|_| {
                            let v = (k % 3) as i64 - 1;
                            k /= 3;
                            v
                        })
                        .collect()
                })
                .collect();
            let x = to_rational(&a);
            assert_eq!(classify(&x, Side::Lower), lower_class_brute(&a), "{a:?}");
        }
    }
}

#[test]
fn orbit_products_land_in_their_cell() {
    let mut rng = seeded_rng(5, 0);
    for (m, n) in [(2, 2), (2, 3), (3, 3), (3, 4), (4, 3)] {
        for w in PartialPermutation::all(m, n) {
            for _ in 0..3 {
                let upper = |size, rng: &mut _| {
                    sample(&SampleKind::InvertibleTriangular { upper: true, size }, rng).unwrap()
                };
                let lower = |size, rng: &mut _| {
                    sample(&SampleKind::InvertibleTriangular { upper: false, size }, rng).unwrap()
                };
                let up = upper(m, &mut rng).mul(&w.to_matrix()).unwrap().mul(&upper(n, &mut rng)).unwrap();
                let low = lower(m, &mut rng).mul(&w.to_matrix()).unwrap().mul(&lower(n, &mut rng)).unwrap();
                assert_eq!(classify(&up, Side::Upper), w);
                assert_eq!(classify(&low, Side::Lower), w);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn rank_matches_minor_expansion(a in int_matrix(4, -2, 2)) {
        prop_assert_eq!(to_rational(&a).rank(), rank_by_minors(&a));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn profiles_are_monotone_and_lipschitz(a in int_matrix(5, -3, 3)) {
        let x = to_rational(&a);
        check_profile_shape(&x, ProfileKind::Southwest)?;
        check_profile_shape(&x, ProfileKind::Northeast)?;
        for kind in [ProfileKind::Southwest, ProfileKind::Northeast] {
            prop_assert_eq!(x.rank_profile(kind), x.rank_profile_naive(kind));
        }
    }

    #[test]
    fn rank_t_samples_have_rank_t(rows in 1usize..6, cols in 1usize..6, t in 0usize..6, seed in any::<u64>()) {
        let t = t % (rows.min(cols) + 1);
        let x = sample(&SampleKind::RankT { rows, cols, t }, &mut seeded_rng(seed, 0)).unwrap();
        prop_assert_eq!(x.rank(), t);
        let too_big = SampleKind::RankT { rows, cols, t: rows.min(cols) + 1 };
        prop_assert!(sample(&too_big, &mut seeded_rng(seed, 0)).is_err());
    }

    #[test]
    fn upper_and_lower_classes_agree_with_profiles(a in int_matrix(4, -2, 2)) {
        let x = to_rational(&a);
        prop_assert_eq!(x.upper_class(), classify(&x, Side::Upper));
        prop_assert_eq!(x.lower_class(), classify(&x, Side::Lower));
        prop_assert_eq!(x.upper_class().rank(), x.rank());
        // half-turn rotation swaps the two Borel pairs
        let back = unrotate(&x.rotate_half_turn().upper_class());
        prop_assert_eq!(back, x.lower_class());
    }

    #[test]
    fn torus_scaling_preserves_classes(a in int_matrix(4, -3, 3), scales in proptest::collection::vec((1i64..6, 1i64..6, any::<bool>()), 8)) {
        let x = to_rational(&a);
        let mut y = x.clone();
        let q = |k: usize| {
            let (p, d, neg) = scales[k];
            BigRational::new(BigInt::from(if neg { -p } else { p }), BigInt::from(d))
        };
        for i in 1..=x.rows() {
            y.scale_row(i, &q(i - 1));
        }
        for j in 1..=x.cols() {
            y.scale_col(j, &q(4 + j - 1));
        }
        prop_assert_eq!(classify(&y, Side::Upper), classify(&x, Side::Upper));
        prop_assert_eq!(classify(&y, Side::Lower), classify(&x, Side::Lower));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn cells_partition_and_closure(m in 1usize..4, n in 1usize..4, t in 0usize..4, seed in any::<u64>()) {
        let t = t % (m.min(n) + 1);
        let mut rng = seeded_rng(seed, 1);
        let mut x = sample(&SampleKind::RankT { rows: m, cols: n, t }, &mut rng).unwrap();
        degenerate(&mut x, &mut rng);
        for side in [Side::Upper, Side::Lower] {
            let class = classify(&x, side);
            let kind = side.profile_kind();
            let own = x.rank_profile_naive(kind);
            for w in PartialPermutation::all(m, n) {
                let cell = in_cell(&x, &w, side, Mode::Cell).unwrap();
                prop_assert_eq!(cell, w == class, "{} vs class {}", w, class);
                let closure = in_cell(&x, &w, side, Mode::Closure).unwrap();
                prop_assert_eq!(closure, own.le(&w.to_matrix().rank_profile_naive(kind)));
                prop_assert_eq!(closure, class.rank_profile(kind).le(&w.rank_profile(kind)));
            }
        }
    }

    #[test]
    fn text_and_json_round_trip(a in int_matrix(4, -9, 9), d in 1i64..5) {
        let mut x = to_rational(&a);
        x.scale_row(1, &BigRational::new(BigInt::from(1), BigInt::from(d)));
        let text = x.to_string();
        prop_assert_eq!(RationalMatrix::parse(&text).unwrap(), x.clone());
        let json = serde_json::to_string(&x).unwrap();
        prop_assert_eq!(serde_json::from_str::<RationalMatrix>(&json).unwrap(), x);
    }
}
