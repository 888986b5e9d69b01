use std::collections::BTreeSet;

use rand_chacha::ChaCha8Rng;

use super::solve::{kapranov_entry_solve, Unknown};
use super::{drive, working_cutoff, Ctx, LiftCertificate, LiftError, LiftMethod, LiftOptions};
use crate::joints::JointCertificate;
use crate::normal_form::diagonal_permute;
use crate::puiseux::{Coeff, PuiseuxError, PuiseuxSeries, SeriesMatrix};
use crate::trop::{sym_minimizing_monomials, Permutation, SubmatrixSelector, SymMatrix};
use crate::value::Rational;

/// Redraws of one column when its leading coefficient has no square root.
const COLUMN_DRAWS: usize = 8;

fn set_sym<F: Coeff>(l: &mut SeriesMatrix<F>, i: usize, j: usize, v: PuiseuxSeries<F>) {
    l.set(j, i, v.clone());
    l.set(i, j, v);
}

/// The entry of column `k` to solve for in the principal submatrix on
/// `{0, 1, 2, k}`.
///
/// A candidate `X(m,k)` must occur with at least two different exponents
/// among the minimizing monomials. Preference: the diagonal entry, then an
/// entry whose root is rational in the coefficients (two adjacent exponents),
/// then one needing a square root; smallest index on ties.
fn choose_unknown(b: &SymMatrix, k: usize) -> Result<usize, LiftError> {
    let keep = vec![0, 1, 2, k];
    let monos = sym_minimizing_monomials(b, &SubmatrixSelector::principal(keep.clone()))
        .map_err(|e| LiftError::CertificateInvalid(e.to_string()))?;
    keep.iter()
        .filter_map(|&m| {
            let exps: BTreeSet<usize> = monos.iter().map(|mo| mo.multiplicity(m, k)).collect();
            if exps.len() < 2 {
                return None;
            }
            let rank = if m == k {
                0
            } else if exps.len() == 2
                && exps.iter().max().unwrap() - exps.iter().min().unwrap() == 1
            {
                1
            } else {
                2
            };
            Some((rank, m))
        })
        .min()
        .map(|(_, m)| m)
        .ok_or_else(|| {
            LiftError::CertificateInvalid(format!(
                "no entry of column {} separates the minimizing monomials",
                k + 1
            ))
        })
}

fn require_singular<F: Coeff>(
    l: &SeriesMatrix<F>,
    rows: &[usize],
    cols: &[usize],
) -> Result<(), LiftError> {
    if l.submatrix(rows, cols).det()?.is_zero_to_cutoff() {
        Ok(())
    } else {
        let one: Vec<usize> = rows.iter().map(|r| r + 1).collect();
        let two: Vec<usize> = cols.iter().map(|c| c + 1).collect();
        Err(LiftError::Rejected(format!(
            "submatrix rows {one:?} cols {two:?} is not singular"
        )))
    }
}

/// Lift with joints at indices 3 and 4.
fn build<F: Coeff>(
    b: &SymMatrix,
    rng: &mut ChaCha8Rng,
    margin: Rational,
) -> Result<SeriesMatrix<F>, LiftError> {
    let mut ctx = Ctx {
        rng,
        cutoff: working_cutoff(b, margin),
    };
    let deg = |i: usize, j: usize| b.get(i, j).rational();
    let mut l = SeriesMatrix::from_fn(5, 5, |_, _| PuiseuxSeries::zero_to(ctx.cutoff));
    for i in 0..3 {
        for j in i..3 {
            let e = ctx.generic(deg(i, j));
            set_sym(&mut l, i, j, e);
        }
    }
    for k in [3, 4] {
        let keep = [0, 1, 2, k];
        let solved = choose_unknown(b, k)?;
        let pos = keep
            .iter()
            .position(|&m| m == solved)
            .expect("solved index is kept");
        let at = if solved == k {
            Unknown::Single(3, 3)
        } else {
            Unknown::Symmetric(pos, 3)
        };
        // A missing square root only depends on this column's draw.
        let mut draws = 0;
        let x = loop {
            for &m in &keep {
                if m != solved {
                    let e = ctx.generic(deg(m, k));
                    set_sym(&mut l, m, k, e);
                }
            }
            match kapranov_entry_solve(&l.submatrix(&keep, &keep), at, deg(solved, k)) {
                Err(LiftError::Puiseux(PuiseuxError::NoSquareRoot)) if draws < COLUMN_DRAWS => {
                    draws += 1
                }
                other => break other?,
            }
        };
        set_sym(&mut l, solved, k, x);
        require_singular(&l, &keep, &keep)?;
    }

    // Make column 4 generic relative to column 3.
    let g: PuiseuxSeries<F> = ctx.generic(Rational::from(0));
    for i in 0..4 {
        let v = l.get(i, 4).mul(&g);
        set_sym(&mut l, i, 4, v);
    }
    let v = l.get(4, 4).mul(&g).mul(&g);
    l.set(4, 4, v);

    let rows = [0, 1, 2, 3];
    let cols = [0, 1, 2, 4];
    let x = kapranov_entry_solve(&l.submatrix(&rows, &cols), Unknown::Single(3, 3), deg(3, 4))?;
    set_sym(&mut l, 3, 4, x);

    require_singular(&l, &[0, 1, 2, 3], &[0, 1, 2, 3])?;
    require_singular(&l, &[0, 1, 2, 4], &[0, 1, 2, 4])?;
    require_singular(&l, &rows, &cols)?;
    Ok(l)
}

/// Symmetric rank-3 lift of a 5×5 matrix with joints.
///
/// The joints are moved to the last two indices, the lift is built there and
/// moved back.
pub fn joint_lift<F: Coeff>(
    a: &SymMatrix,
    cert: &JointCertificate,
    opts: &LiftOptions,
) -> Result<LiftCertificate<F>, LiftError> {
    if a.n() != 5 {
        return Err(LiftError::NotFiveByFive(a.n()));
    }
    cert.verify(a).map_err(LiftError::CertificateInvalid)?;
    let mut images = vec![0; 5];
    let mut next = 0;
    for (x, img) in images.iter_mut().enumerate() {
        *img = if x == cert.i {
            3
        } else if x == cert.j {
            4
        } else {
            next += 1;
            next - 1
        };
    }
    let sigma = Permutation::from_images(images)
        .map_err(|e| LiftError::CertificateInvalid(e.to_string()))?;
    let b =
        diagonal_permute(a, &sigma).map_err(|e| LiftError::CertificateInvalid(e.to_string()))?;
    let method = LiftMethod::Joints {
        certificate: cert.clone(),
    };
    drive(a, &b, method, opts, |rng, margin| {
        let lb: SeriesMatrix<F> = build(&b, rng, margin)?;
        Ok(SeriesMatrix::from_fn(5, 5, |x, y| {
            lb.get(sigma.apply(x), sigma.apply(y)).clone()
        }))
    })
}
