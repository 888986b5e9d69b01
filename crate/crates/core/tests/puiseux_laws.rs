use proptest::prelude::*;
use tropsym::puiseux::{Coeff, Fp, PuiseuxError, PuiseuxSeries, SeriesMatrix, Q};
use tropsym::Rational;

const CASES: u32 = 1000;

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(CASES)
}

/// Terms on `(1/den)·ℤ` starting at `start/den`, plus `extra` unknown-free
/// lattice steps before the cutoff.
fn series<F: Coeff + std::fmt::Debug>(
    coeff: impl Strategy<Value = F> + Clone,
) -> impl Strategy<Value = PuiseuxSeries<F>> {
    (
        1i64..4,
        -6i64..6,
        prop::collection::vec(coeff, 0..7),
        1i64..6,
    )
        .prop_map(|(den, start, cs, extra)| {
            let n = cs.len() as i64;
            let terms = cs
                .into_iter()
                .enumerate()
                .map(|(k, c)| (Rational::new(start + k as i64, den), c))
                .collect();
            PuiseuxSeries::from_terms(terms, Rational::new(start + n + extra, den)).unwrap()
        })
}

fn fp() -> impl Strategy<Value = Fp> + Clone {
    prop_oneof![
        (-20i64..20).prop_map(Fp::from_i64),
        any::<u64>().prop_map(Fp::new)
    ]
}

fn q() -> impl Strategy<Value = Q> + Clone {
    (-20i64..20).prop_map(Q::from_i64)
}

fn nonzero<F: Coeff + std::fmt::Debug>(
    s: impl Strategy<Value = PuiseuxSeries<F>>,
) -> impl Strategy<Value = PuiseuxSeries<F>> {
    s.prop_filter("needs a known degree", |a| a.deg().is_some())
}

/// Agreement below the smaller of the two cutoffs.
fn agree<F: Coeff>(a: &PuiseuxSeries<F>, b: &PuiseuxSeries<F>) -> bool {
    let c = a.cutoff().min(b.cutoff());
    a.truncate(c) == b.truncate(c)
}

fn valuation_of_product<F: Coeff>(
    a: &PuiseuxSeries<F>,
    b: &PuiseuxSeries<F>,
) -> Result<(), TestCaseError> {
    let (da, db) = (a.deg().unwrap(), b.deg().unwrap());
    prop_assert_eq!(a.mul(b).deg(), Some(da + db));
    Ok(())
}

fn valuation_of_sum<F: Coeff>(
    a: &PuiseuxSeries<F>,
    b: &PuiseuxSeries<F>,
) -> Result<(), TestCaseError> {
    let (da, db) = (a.deg().unwrap(), b.deg().unwrap());
    let lo = da.min(db);
    if da != db && lo < a.cutoff().min(b.cutoff()) {
        prop_assert_eq!(a.add(b).deg(), Some(lo));
        prop_assert_eq!(a.sub(b).deg(), Some(lo));
    }
    Ok(())
}

fn division_round_trip<F: Coeff>(
    a: &PuiseuxSeries<F>,
    b: &PuiseuxSeries<F>,
) -> Result<(), TestCaseError> {
    let quot = a.div(b).unwrap();
    let back = quot.mul(b);
    prop_assert!(back.cutoff() <= a.cutoff());
    prop_assert_eq!(back.clone(), a.truncate(back.cutoff()));
    if let Some(da) = a.deg() {
        prop_assert_eq!(quot.deg(), Some(da - b.deg().unwrap()));
    }
    let one = b.div(b).unwrap();
    prop_assert_eq!(one.terms(), vec![(Rational::from(0), F::one())]);
    Ok(())
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn degree_is_additive_under_products(a in nonzero(series(fp())), b in nonzero(series(fp()))) {
        valuation_of_product(&a, &b)?;
    }

    #[test]
    fn degree_of_sum_is_the_minimum_when_leading_exponents_differ(
        a in nonzero(series(fp())),
        b in nonzero(series(fp())),
    ) {
        valuation_of_sum(&a, &b)?;
    }

    #[test]
    fn division_undoes_multiplication(a in series(fp()), b in nonzero(series(fp()))) {
        division_round_trip(&a, &b)?;
    }

    #[test]
    fn rational_coefficients_obey_the_same_laws(
        a in nonzero(series(q())),
        b in nonzero(series(q())),
    ) {
        valuation_of_product(&a, &b)?;
        valuation_of_sum(&a, &b)?;
        division_round_trip(&a, &b)?;
    }

    #[test]
    fn ring_laws_hold_below_the_cutoff(
        a in series(fp()),
        b in series(fp()),
        c in series(fp()),
    ) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert!(agree(&a.add(&b).add(&c), &a.add(&b.add(&c))));
        prop_assert!(agree(&a.mul(&b).mul(&c), &a.mul(&b.mul(&c))));
        prop_assert!(agree(&a.mul(&b.add(&c)), &a.mul(&b).add(&a.mul(&c))));
        prop_assert!(a.sub(&a).is_zero_to_cutoff());
    }

    #[test]
    fn square_roots_square_back(a in nonzero(series(fp()))) {
        let sq = a.mul(&a);
        let r = sq.sqrt().unwrap();
        prop_assert_eq!(r.deg(), a.deg());
        prop_assert_eq!(r.mul(&r), sq);
    }
}

/// `U·V` with `U` of size `n×r` and `V` of size `r×n`, entries generic
/// monomials of small degree.
fn product_matrix(n: usize, r: usize) -> impl Strategy<Value = SeriesMatrix<Fp>> {
    let cut = Rational::from(40);
    let entry = (1u64..u64::MAX, 0i64..4, 1i64..3)
        .prop_map(move |(c, e, d)| PuiseuxSeries::monomial(Fp::new(c), Rational::new(e, d), cut));
    (
        prop::collection::vec(entry.clone(), n * r),
        prop::collection::vec(entry, r * n),
    )
        .prop_map(move |(u, v)| {
            SeriesMatrix::from_fn(n, n, |i, j| {
                (0..r).fold(PuiseuxSeries::zero_to(cut), |acc, k| {
                    acc.add(&u[i * r + k].mul(&v[k * n + j]))
                })
            })
        })
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn constructed_rank_two_matrices_have_series_rank_two(m in product_matrix(5, 2)) {
        prop_assert_eq!(m.series_rank(), Ok(2));
    }

    #[test]
    fn constructed_rank_three_matrices_have_series_rank_three(m in product_matrix(5, 3)) {
        prop_assert_eq!(m.series_rank(), Ok(3));
        prop_assert!(m.det().unwrap().is_zero_to_cutoff());
    }
}

#[test]
fn imprecise_entry_leaves_the_rank_undecided() {
    // The (2,1) entry is only known below t^1, so t^4 - t^4 cannot be told from t^3.
    let cut = Rational::from(10);
    let mono = |e: i64| PuiseuxSeries::monomial(Fp::one(), Rational::from(e), cut);
    let m = SeriesMatrix::new(
        2,
        2,
        vec![
            mono(0),
            mono(2),
            PuiseuxSeries::zero_to(Rational::from(1)),
            mono(4),
        ],
    )
    .unwrap();
    assert_eq!(m.series_rank(), Err(PuiseuxError::CutoffExhausted));
}

#[test]
fn geometric_series() {
    let cut = Rational::from(6);
    let one = PuiseuxSeries::constant(Fp::one(), cut);
    let t = PuiseuxSeries::monomial(Fp::one(), Rational::from(1), cut);
    let inv = one.div(&one.sub(&t)).unwrap();
    let expected: Vec<(Rational, Fp)> = (0..6).map(|k| (Rational::from(k), Fp::one())).collect();
    assert_eq!(inv.terms(), expected);
}

#[test]
fn difference_of_squares() {
    let cut = Rational::from(5);
    let one = PuiseuxSeries::<Q>::constant(Q::one(), cut);
    let t = PuiseuxSeries::monomial(Q::one(), Rational::from(1), cut);
    let p = one.add(&t).mul(&one.sub(&t));
    assert_eq!(
        p.terms(),
        vec![
            (Rational::from(0), Q::one()),
            (Rational::from(2), Q::from_i64(-1))
        ]
    );
}
