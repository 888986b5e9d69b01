use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tropsym::joints::{
    classify_rank3, detect_exceptional, find_joints, JointsError, Rank3Classification,
};
use tropsym::normal_form::{diagonal_permute, symmetric_scale};
use tropsym::{sym_rank_at_most_3, Permutation, Rational, SymMatrix, TropValue};

fn cube(bits: u32) -> SymMatrix {
    let upper: Vec<TropValue> = (0..15)
        .map(|k| TropValue::int(((bits >> k) & 1) as i64))
        .collect();
    SymMatrix::from_upper(5, &upper).unwrap()
}

fn exceptional(n1: i64, n2: i64, p: i64, plus: [i64; 4]) -> SymMatrix {
    let [a, b, c, d] = plus;
    SymMatrix::from_ints(&[
        &[0, 0, a, b, n1],
        &[0, 0, c, d, n2],
        &[a, c, 0, 0, p],
        &[b, d, 0, 0, p],
        &[n1, n2, p, p, 0],
    ])
    .unwrap()
}

#[test]
fn binary_cube_has_no_classification_gap() {
    let (mut joints, mut exc, mut witness) = (0, 0, 0);
    for bits in 0..(1u32 << 15) {
        let a = cube(bits);
        let c = classify_rank3(&a).unwrap_or_else(|e| panic!("{e}"));
        c.verify(&a).unwrap_or_else(|e| panic!("{a:?}: {e}"));
        match c {
            Rank3Classification::HasJoints(_) => joints += 1,
            Rank3Classification::Exceptional(_) => exc += 1,
            Rank3Classification::NotRankAtMost3 { .. } => witness += 1,
        }
        assert_eq!(
            sym_rank_at_most_3(&a),
            !matches!(c, Rank3Classification::NotRankAtMost3 { .. })
        );
    }
    assert_eq!(joints + exc + witness, 1 << 15);
    assert!(joints > 0 && witness > 0);
}

/// Rank-≤3 matrices with neither joints nor the exceptional form, confirmed
/// by an independent brute-force enumeration of all pairs and all 120 frames.
const GAPS: [[[i64; 5]; 5]; 4] = [
    [
        [0, 0, 2, 3, 0],
        [0, 1, 1, 3, 0],
        [2, 1, 1, 2, 3],
        [3, 3, 2, 3, 3],
        [0, 0, 3, 3, 0],
    ],
    [
        [1, 3, 3, 1, 0],
        [3, 2, 2, 3, 2],
        [3, 2, 2, 3, 1],
        [1, 3, 3, 1, 0],
        [0, 2, 1, 0, 1],
    ],
    [
        [2, 3, 3, 2, 1],
        [3, 1, 1, 0, 3],
        [3, 1, 1, 0, 2],
        [2, 0, 0, 2, 0],
        [1, 3, 2, 0, 0],
    ],
    [
        [1, 0, 1, 2, 3],
        [0, 0, 0, 0, 3],
        [1, 0, 1, 2, 3],
        [2, 0, 2, 0, 1],
        [3, 3, 3, 1, 2],
    ],
];

fn from_grid(g: &[[i64; 5]; 5]) -> SymMatrix {
    let rows: Vec<&[i64]> = g.iter().map(|r| &r[..]).collect();
    SymMatrix::from_ints(&rows).unwrap()
}

/// Diagonal-zero scaling is forced by the exceptional pattern, so only the
/// relabeling is searched.
fn exceptional_by_brute_force(a: &SymMatrix) -> bool {
    let half = Rational::new(1, 2);
    let upper: Vec<TropValue> = (0..5)
        .flat_map(|i| (i..5).map(move |j| (i, j)))
        .map(|(i, j)| {
            TropValue(
                a.get(i, j).rational() - (a.get(i, i).rational() + a.get(j, j).rational()) * half,
            )
        })
        .collect();
    detect_exceptional(&SymMatrix::from_upper(5, &upper).unwrap()).is_some()
}

#[test]
fn known_gap_matrices_are_reported() {
    for g in &GAPS {
        let a = from_grid(g);
        assert!(sym_rank_at_most_3(&a));
        assert!(find_joints(&a).is_none());
        assert!(!exceptional_by_brute_force(&a));
        assert!(matches!(
            classify_rank3(&a),
            Err(JointsError::ClassificationGap(_))
        ));
    }
}

#[test]
fn random_integer_matrices_classify_or_report_genuine_gaps() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut rank3, mut gaps) = (0, 0);
    while rank3 < 500 {
        let upper: Vec<TropValue> = (0..15)
            .map(|_| TropValue::int(rng.gen_range(0..=3)))
            .collect();
        let a = SymMatrix::from_upper(5, &upper).unwrap();
        match classify_rank3(&a) {
            Ok(c) => {
                c.verify(&a).unwrap();
                if !matches!(c, Rank3Classification::NotRankAtMost3 { .. }) {
                    rank3 += 1;
                }
            }
            Err(JointsError::ClassificationGap(_)) => {
                assert!(sym_rank_at_most_3(&a));
                assert!(find_joints(&a).is_none());
                assert!(!exceptional_by_brute_force(&a));
                rank3 += 1;
                gaps += 1;
            }
            Err(e) => panic!("{e}"),
        }
    }
    assert!(gaps * 50 < rank3, "{gaps} gaps in {rank3}");
}

#[test]
fn disguised_exceptional_forms_are_recovered() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let n1 = rng.gen_range(1..4);
        let n2 = n1 + rng.gen_range(0..3);
        let p = rng.gen_range(1..4);
        let plus = [(); 4].map(|_| n1 + p + rng.gen_range(1..4));
        let base = exceptional(n1, n2, p, plus);
        assert!(find_joints(&base).is_none(), "{base:?}");
        assert!(detect_exceptional(&base).is_some());

        let mut images: Vec<usize> = (0..5).collect();
        images.shuffle(&mut rng);
        let perm = Permutation::from_images(images).unwrap();
        let mut a = diagonal_permute(&base, &perm).unwrap();
        for k in 0..5 {
            let c = Rational::new(rng.gen_range(-6..=6), 2);
            a = symmetric_scale(&a, k, c).unwrap();
        }
        assert!(sym_rank_at_most_3(&a));
        assert!(find_joints(&a).is_none(), "{a:?}");
        match classify_rank3(&a).unwrap() {
            Rank3Classification::Exceptional(params) => {
                params.verify(&a).unwrap();
                // With N1 = N2 the two zero blocks can trade places.
                let read = (params.n1, params.n2, params.p);
                let r = Rational::from;
                assert!(
                    read == (r(n1), r(n2), r(p)) || (n1 == n2 && read == (r(p), r(p), r(n1))),
                    "{read:?}"
                );
            }
            other => panic!("{a:?}: {other:?}"),
        }
    }
}

#[test]
fn classification_variant_is_invariant_under_diagonal_permutation() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    let label = |a: &SymMatrix| match classify_rank3(a) {
        Ok(c) => c.label().to_string(),
        Err(e) => format!("{e:?}").split('(').next().unwrap().to_string(),
    };
    for _ in 0..300 {
        let upper: Vec<TropValue> = (0..15)
            .map(|_| TropValue::int(rng.gen_range(0..=2)))
            .collect();
        let a = SymMatrix::from_upper(5, &upper).unwrap();
        let mut images: Vec<usize> = (0..5).collect();
        images.shuffle(&mut rng);
        let b = diagonal_permute(&a, &Permutation::from_images(images).unwrap()).unwrap();
        assert_eq!(label(&a), label(&b), "{a:?}");
    }
}

#[test]
fn classification_json_is_tagged_and_one_based() {
    let a = exceptional(1, 2, 1, [3, 3, 3, 3]);
    let c = classify_rank3(&a).unwrap();
    let json = serde_json::to_value(&c).unwrap();
    assert_eq!(json["kind"], "exceptional");
    assert_eq!(json["perm"], serde_json::json!([1, 2, 3, 4, 5]));
    let back: Rank3Classification = serde_json::from_value(json).unwrap();
    assert_eq!(back, c);
}
