use super::LiftError;
use crate::puiseux::{Coeff, PuiseuxSeries, SeriesMatrix};
use crate::value::Rational;

/// Where the unknown sits in the matrix handed to [`kapranov_entry_solve`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Unknown {
    /// One position; the determinant is linear in it.
    Single(usize, usize),
    /// Positions `(r, c)` and `(c, r)` with `r != c`; the determinant is quadratic.
    Symmetric(usize, usize),
}

impl Unknown {
    fn positions(self) -> Vec<(usize, usize)> {
        match self {
            Unknown::Single(r, c) => vec![(r, c)],
            Unknown::Symmetric(r, c) => vec![(r, c), (c, r)],
        }
    }
}

fn substitute<F: Coeff>(m: &SeriesMatrix<F>, at: Unknown, x: &PuiseuxSeries<F>) -> SeriesMatrix<F> {
    let mut out = m.clone();
    for (r, c) in at.positions() {
        out.set(r, c, x.clone());
    }
    out
}

/// `det(M) = α x² + β x + γ` as a function of the unknown.
///
/// Recovered exactly by evaluating at `0` and `±t^v`.
fn det_coefficients<F: Coeff>(
    m: &SeriesMatrix<F>,
    at: Unknown,
    v: Rational,
) -> Result<[PuiseuxSeries<F>; 3], LiftError> {
    let rel = m
        .entries()
        .iter()
        .filter_map(|e| e.relative_precision())
        .max()
        .unwrap_or_else(|| Rational::from(1));
    let s = PuiseuxSeries::monomial(F::one(), v, v + rel);
    let gamma = substitute(m, at, &PuiseuxSeries::zero_to(v + rel)).det()?;
    let plus = substitute(m, at, &s).det()?;
    match at {
        Unknown::Single(..) => {
            let beta = plus.sub(&gamma).shift(-v);
            let alpha = PuiseuxSeries::zero_to(beta.cutoff());
            Ok([alpha, beta, gamma])
        }
        Unknown::Symmetric(..) => {
            let minus = substitute(m, at, &s.neg()).det()?;
            let half = F::from_i64(2).inverse().expect("odd characteristic");
            let beta = plus.sub(&minus).scale(&half).shift(-v);
            let alpha = plus
                .add(&minus)
                .sub(&gamma.add(&gamma))
                .scale(&half)
                .shift(-(v + v));
            Ok([alpha, beta, gamma])
        }
    }
}

/// Solve `det(M) = 0` for one unknown entry with prescribed degree.
///
/// The unknown's current value in `m` is ignored. At `x = t^target` the three
/// tropical terms `deg α + 2·target`, `deg β + target`, `deg γ` must attain
/// their minimum twice; otherwise there is no root of that degree.
pub fn kapranov_entry_solve<F: Coeff>(
    m: &SeriesMatrix<F>,
    at: Unknown,
    target: Rational,
) -> Result<PuiseuxSeries<F>, LiftError> {
    let [alpha, beta, gamma] = det_coefficients(m, at, target)?;
    let terms: Vec<(Option<Rational>, Rational)> = vec![
        (
            alpha.deg().map(|d| d + target * 2),
            alpha.cutoff() + target * 2,
        ),
        (beta.deg().map(|d| d + target), beta.cutoff() + target),
        (gamma.deg(), gamma.cutoff()),
    ];
    let low = terms
        .iter()
        .filter_map(|t| t.0)
        .min()
        .ok_or(LiftError::NotOnHypersurface)?;
    if terms.iter().any(|t| t.0.is_none() && t.1 <= low) {
        return Err(LiftError::CutoffExhausted);
    }
    if terms.iter().filter(|t| t.0 == Some(low)).count() < 2 {
        return Err(LiftError::NotOnHypersurface);
    }
    let x = if alpha.is_zero_to_cutoff() {
        gamma.div(&beta)?.neg()
    } else {
        quadratic_root(&alpha, &beta, &gamma, target)?
    };
    match x.deg() {
        Some(d) if d == target => Ok(x),
        found => Err(LiftError::DegreeMismatch {
            expected: target,
            found,
        }),
    }
}

/// Root of `α x² + β x + γ` with degree `target`, avoiding cancellation.
fn quadratic_root<F: Coeff>(
    alpha: &PuiseuxSeries<F>,
    beta: &PuiseuxSeries<F>,
    gamma: &PuiseuxSeries<F>,
    target: Rational,
) -> Result<PuiseuxSeries<F>, LiftError> {
    let four = F::from_i64(4);
    let disc = beta.mul(beta).sub(&alpha.mul(gamma).scale(&four));
    let d0 = disc.leading().ok_or(LiftError::RepeatedRoot)?;
    let root0 = match (beta.leading(), beta.deg(), disc.deg()) {
        (Some(b0), Some(db), Some(dd)) if dd == db * 2 && b0.times(b0) == *d0 => b0.clone(),
        _ => d0
            .sqrt()
            .ok_or(crate::puiseux::PuiseuxError::NoSquareRoot)?,
    };
    let root = disc.sqrt_with(&root0)?;
    let half = F::from_i64(2).inverse().expect("odd characteristic");
    let q = {
        let a = beta.add(&root);
        let b = beta.sub(&root);
        let pick = match (a.deg(), b.deg()) {
            (Some(x), Some(y)) if y < x => b,
            (None, Some(_)) => b,
            _ => a,
        };
        pick.scale(&half).neg()
    };
    let first = q.div(alpha)?;
    if first.deg() == Some(target) {
        return Ok(first);
    }
    if gamma.is_zero_to_cutoff() {
        return Ok(first);
    }
    Ok(gamma.div(&q)?)
}
