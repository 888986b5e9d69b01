use rand_chacha::ChaCha8Rng;

use super::solve::{kapranov_entry_solve, Unknown};
use super::{drive, working_cutoff, Ctx, LiftCertificate, LiftError, LiftMethod, LiftOptions};
use crate::joints::ExceptionalParams;
use crate::puiseux::{Coeff, PuiseuxSeries, SeriesMatrix};
use crate::trop::{minimizing_monomials, SubmatrixSelector, SymMatrix, TropMatrix};
use crate::value::{Rational, TropValue};

/// Positions of the frame matrix inside the 6×6 augmentation.
const EMBED: [usize; 5] = [0, 1, 3, 4, 5];
/// The inserted index.
const AUG: usize = 2;

/// The 6×6 matrix whose deletion of index 2 is `b`.
///
/// The inserted row is `0 0 0 P P 0`.
fn augment(b: &SymMatrix, p: Rational) -> Result<TropMatrix, LiftError> {
    let row = [0, 0, 0, 1, 1, 0].map(|k| TropValue(if k == 1 { p } else { Rational::from(0) }));
    let mut e = vec![TropValue::ZERO; 36];
    for x in 0..5 {
        for y in 0..5 {
            e[EMBED[x] * 6 + EMBED[y]] = b.get(x, y);
        }
    }
    for k in 0..6 {
        e[AUG * 6 + k] = row[k];
        e[k * 6 + AUG] = row[k];
    }
    TropMatrix::new(6, 6, e).map_err(|e| LiftError::CertificateInvalid(e.to_string()))
}

fn side(ok: bool, what: impl FnOnce() -> String) -> Result<(), LiftError> {
    if ok {
        Ok(())
    } else {
        Err(LiftError::SideCondition(what()))
    }
}

fn show(d: Option<Rational>) -> String {
    d.map_or_else(|| "unknown".to_string(), |d| d.to_string())
}

fn build<F: Coeff>(
    b: &SymMatrix,
    params: &ExceptionalParams,
    rng: &mut ChaCha8Rng,
    margin: Rational,
) -> Result<SeriesMatrix<F>, LiftError> {
    let aug = augment(b, params.p)?;
    let p = params.p;
    let zero = Rational::from(0);
    let mut ctx = Ctx {
        rng,
        cutoff: working_cutoff(b, margin),
    };
    let deg = |i: usize, j: usize| aug.get(i, j).rational();
    let mut l: SeriesMatrix<F> =
        SeriesMatrix::from_fn(6, 6, |_, _| PuiseuxSeries::zero_to(ctx.cutoff));

    // Singular lift of rows 0..4, columns 2..6, not yet symmetric.
    let rows = [0, 1, 2, 3];
    let cols = [2, 3, 4, 5];
    let sel = SubmatrixSelector::new(rows.to_vec(), cols.to_vec());
    let monos = minimizing_monomials(&aug, &sel)
        .map_err(|e| LiftError::CertificateInvalid(e.to_string()))?;
    let (ur, uc) = rows
        .iter()
        .flat_map(|&r| cols.iter().map(move |&c| (r, c)))
        .find(|&(r, c)| {
            let n = monos.iter().filter(|m| m.contains(r, c)).count();
            n > 0 && n < monos.len()
        })
        .ok_or_else(|| {
            LiftError::CertificateInvalid("upper-right block is not tropically singular".into())
        })?;
    for &r in &rows {
        for &c in &cols {
            if (r, c) != (ur, uc) {
                let e = ctx.generic(deg(r, c));
                l.set(r, c, e);
            }
        }
    }
    let at = Unknown::Single(ur, uc - 2);
    let x = kapranov_entry_solve(&l.submatrix(&rows, &cols), at, deg(ur, uc))?;
    l.set(ur, uc, x);

    // Rescale column 2 so that entries (2,3) and (3,2) agree, then mirror.
    let ratio = l.get(2, 3).div(l.get(3, 2))?;
    for r in rows {
        let v = l.get(r, 2).mul(&ratio);
        l.set(r, 2, v);
    }
    for r in rows {
        for c in cols {
            let v = l.get(r, c).clone();
            l.set(c, r, v);
        }
    }

    // alpha·col2 + beta·col3 + gamma·col5 = col4 on rows 0, 1, 3; row 2 must follow.
    let fit = [0, 1, 3];
    let m3 = l.submatrix(&fit, &[2, 3, 5]);
    let rhs: Vec<PuiseuxSeries<F>> = fit.iter().map(|&r| l.get(r, 4).clone()).collect();
    let coef = m3.solve(&rhs)?;
    let (alpha, beta, gamma) = (&coef[0], &coef[1], &coef[2]);
    let row2 = alpha
        .mul(l.get(2, 2))
        .add(&beta.mul(l.get(2, 3)))
        .add(&gamma.mul(l.get(2, 5)))
        .sub(l.get(2, 4));
    if !row2.is_zero_to_cutoff() {
        return Err(LiftError::Rejected("column relation fails on row 3".into()));
    }
    side(beta.deg() == Some(zero), || {
        format!("deg beta = {}, expected 0", show(beta.deg()))
    })?;
    side(alpha.deg().is_some_and(|d| d > p), || {
        format!("deg alpha = {}, expected > {p}", show(alpha.deg()))
    })?;
    side(gamma.deg().is_some_and(|d| d >= p), || {
        format!("deg gamma = {}, expected >= {p}", show(gamma.deg()))
    })?;

    let a55 = ctx.generic(zero);
    l.set(5, 5, a55);
    let a45 = alpha
        .mul(l.get(2, 5))
        .add(&beta.mul(l.get(3, 5)))
        .add(&gamma.mul(l.get(5, 5)));
    side(a45.deg() == Some(p), || {
        format!("deg a56 = {}, expected {p}", show(a45.deg()))
    })?;
    l.set(4, 5, a45.clone());
    l.set(5, 4, a45);
    let a44 = alpha
        .mul(l.get(2, 4))
        .add(&beta.mul(l.get(3, 4)))
        .add(&gamma.mul(l.get(4, 5)));
    side(a44.deg() == Some(zero), || {
        format!("deg a55 = {}, expected 0", show(a44.deg()))
    })?;
    l.set(4, 4, a44);

    // The top-left 2×2 block from three singular 4×4 conditions, each linear.
    let keep = [0, 2, 3, 5];
    let a00 = kapranov_entry_solve(&l.submatrix(&keep, &keep), Unknown::Single(0, 0), zero)?;
    l.set(0, 0, a00);
    let a01 = kapranov_entry_solve(
        &l.submatrix(&[1, 2, 3, 5], &keep),
        Unknown::Single(0, 0),
        zero,
    )?;
    l.set(0, 1, a01.clone());
    l.set(1, 0, a01);
    let keep = [0, 1, 3, 5];
    let a11 = kapranov_entry_solve(&l.submatrix(&keep, &keep), Unknown::Single(1, 1), zero)?;
    l.set(1, 1, a11);

    Ok(l.submatrix(&EMBED, &EMBED))
}

/// Symmetric rank-3 lift of a matrix in exceptional form.
///
/// Built on the frame `params.frame_matrix(a)` through a 6×6 augmentation,
/// then scaled and permuted back.
pub fn exceptional_lift<F: Coeff>(
    a: &SymMatrix,
    params: &ExceptionalParams,
    opts: &LiftOptions,
) -> Result<LiftCertificate<F>, LiftError> {
    if a.n() != 5 {
        return Err(LiftError::NotFiveByFive(a.n()));
    }
    params.verify(a).map_err(LiftError::CertificateInvalid)?;
    let b = params
        .frame_matrix(a)
        .map_err(|e| LiftError::CertificateInvalid(e.to_string()))?;
    let method = LiftMethod::Exceptional {
        params: params.clone(),
    };
    let perm = &params.perm;
    let off = &params.offsets;
    drive(a, &b, method, opts, |rng, margin| {
        let lb: SeriesMatrix<F> = build(&b, params, rng, margin)?;
        Ok(SeriesMatrix::from_fn(5, 5, |x, y| {
            let (px, py) = (perm.apply(x), perm.apply(y));
            lb.get(px, py).shift(-(off[px] + off[py]))
        }))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::joints::{classify_rank3, detect_exceptional, Rank3Classification};
    use crate::lifts::verify_lift;
    use crate::puiseux::Fp;

    fn instance() -> SymMatrix {
        SymMatrix::from_ints(&[
            &[0, 0, 3, 3, 1],
            &[0, 0, 3, 3, 2],
            &[3, 3, 0, 0, 1],
            &[3, 3, 0, 0, 1],
            &[1, 2, 1, 1, 0],
        ])
        .unwrap()
    }

    #[test]
    fn instance_lifts() {
        let a = instance();
        let params = detect_exceptional(&a).unwrap();
        let lift: LiftCertificate<Fp> =
            exceptional_lift(&a, &params, &LiftOptions::with_seed(3)).unwrap();
        let report = verify_lift(&lift);
        assert!(report.is_valid(), "{report:?}");
    }

    #[test]
    fn side_conditions_hold_on_every_attempt_that_builds() {
        let a = instance();
        let params = detect_exceptional(&a).unwrap();
        let b = params.frame_matrix(&a).unwrap();
        let mut built = 0;
        for seed in 0..8 {
            let mut rng = <ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
            match build::<Fp>(&b, &params, &mut rng, Rational::from(40)) {
                Ok(l) => {
                    built += 1;
                    assert_eq!(l.tropicalize().unwrap(), *b.matrix());
                }
                Err(e) => assert!(
                    matches!(e, LiftError::SideCondition(_) | LiftError::Puiseux(_)),
                    "{e}"
                ),
            }
        }
        assert!(built >= 6);
    }

    #[test]
    fn equal_n_boundary_lifts() {
        let a = SymMatrix::from_ints(&[
            &[0, 0, 4, 5, 2],
            &[0, 0, 4, 4, 2],
            &[4, 4, 0, 0, 1],
            &[5, 4, 0, 0, 1],
            &[2, 2, 1, 1, 0],
        ])
        .unwrap();
        let Rank3Classification::Exceptional(params) = classify_rank3(&a).unwrap() else {
            panic!("expected the exceptional form");
        };
        let lift: LiftCertificate<Fp> =
            exceptional_lift(&a, &params, &LiftOptions::with_seed(4)).unwrap();
        assert!(verify_lift(&lift).is_valid());
    }

    #[test]
    fn scaled_and_permuted_instance_lifts() {
        // Diagonal permutation (1 5)(2 3) of the instance, then row/column 2 raised by 1.
        let a = instance();
        let p = crate::trop::Permutation::from_images(vec![4, 2, 1, 3, 0]).unwrap();
        let b = crate::normal_form::diagonal_permute(&a, &p).unwrap();
        let b = crate::normal_form::symmetric_scale(&b, 1, Rational::from(1)).unwrap();
        let class = classify_rank3(&b).unwrap();
        let lift: LiftCertificate<Fp> =
            crate::lifts::lift_classified(&b, &class, &LiftOptions::with_seed(5)).unwrap();
        assert!(matches!(lift.method, LiftMethod::Exceptional { .. }));
        assert!(verify_lift(&lift).is_valid());
    }

    #[test]
    fn wrong_parameters_are_rejected() {
        let a = instance();
        let mut params = detect_exceptional(&a).unwrap();
        params.p += Rational::from(1);
        let r: Result<LiftCertificate<Fp>, _> =
            exceptional_lift(&a, &params, &LiftOptions::default());
        assert!(matches!(r, Err(LiftError::CertificateInvalid(_))));
        let joints = SymMatrix::from_ints(&[
            &[1, 0, 1, 1, 1],
            &[0, 1, 1, 1, 1],
            &[1, 1, 0, 0, 0],
            &[1, 1, 0, 0, 0],
            &[1, 1, 0, 0, 0],
        ])
        .unwrap();
        let r: Result<LiftCertificate<Fp>, _> = exceptional_lift(
            &joints,
            &detect_exceptional(&a).unwrap(),
            &LiftOptions::default(),
        );
        assert!(matches!(r, Err(LiftError::CertificateInvalid(_))));
    }
}
