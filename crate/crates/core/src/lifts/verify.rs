use serde::Serialize;

use super::{Combination, LiftCertificate, LiftError, LiftMethod};
use crate::puiseux::{Coeff, PuiseuxError, PuiseuxSeries, SeriesMatrix};
use crate::trop::{subsets, trop_det, SubmatrixSelector, SymMatrix};

/// Outcome of [`verify_lift`].
///
/// `precision` collects checks that could not be decided at the stored
/// cutoff; `failures` collects checks that were decided and failed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LiftReport {
    pub failures: Vec<String>,
    pub precision: Vec<String>,
}

impl LiftReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty() && self.precision.is_empty()
    }

    pub fn insufficient_cutoff(&self) -> bool {
        !self.precision.is_empty()
    }

    pub fn messages(&self) -> Vec<String> {
        self.failures
            .iter()
            .chain(&self.precision)
            .cloned()
            .collect()
    }
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

/// First 3×3 minor, by columns then rows, whose degree is known.
fn find_basis<F: Coeff>(l: &SeriesMatrix<F>) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = l.rows();
    subsets(n, 3).into_iter().find_map(|cols| {
        subsets(n, 3).into_iter().find_map(|rows| {
            let d = l.submatrix(&rows, &cols).det().ok()?;
            (!d.is_zero_to_cutoff()).then(|| (rows, cols.clone()))
        })
    })
}

/// Attach a column basis and the coefficients of the remaining columns.
pub fn certify<F: Coeff>(
    source: SymMatrix,
    method: LiftMethod,
    seed: u64,
    lift: SeriesMatrix<F>,
) -> Result<LiftCertificate<F>, LiftError> {
    let (rows, basis) =
        find_basis(&lift).ok_or_else(|| LiftError::Rejected("every 3x3 minor vanishes".into()))?;
    let block = lift.submatrix(&rows, &basis);
    let combinations = (0..lift.cols())
        .filter(|c| !basis.contains(c))
        .map(|c| {
            let rhs: Vec<PuiseuxSeries<F>> = rows.iter().map(|&r| lift.get(r, c).clone()).collect();
            Ok(Combination {
                column: c,
                coefficients: block.solve(&rhs)?,
            })
        })
        .collect::<Result<Vec<_>, PuiseuxError>>()?;
    let cutoff = lift.common_cutoff().unwrap_or_default();
    Ok(LiftCertificate {
        source,
        method,
        field: F::NAME.to_string(),
        seed,
        cutoff,
        lift,
        basis,
        combinations,
    })
}

/// Re-check every claim of a certificate from its stored data.
///
/// Passes when the lift is symmetric, tropicalizes to the source, has all
/// 4×4 minors zero to a cutoff above their tropical value, has series rank
/// 3 with a 3×3 minor of known degree, and the stored combinations
/// reproduce their columns.
pub fn verify_lift<F: Coeff>(cert: &LiftCertificate<F>) -> LiftReport {
    let mut rep = LiftReport::default();
    let (l, src) = (&cert.lift, &cert.source);
    if cert.field != F::NAME {
        rep.failures
            .push(format!("field {} does not match {}", cert.field, F::NAME));
    }
    if src.n() != 5 || l.rows() != 5 || l.cols() != 5 {
        rep.failures.push("source and lift must be 5x5".into());
        return rep;
    }
    if !l.is_symmetric() {
        rep.failures.push("lift is not symmetric".into());
    }
    for i in 0..5 {
        for j in 0..5 {
            let e = l.get(i, j);
            match e.deg() {
                Some(d) if d == src.get(i, j).rational() => {}
                Some(_) => rep.failures.push(format!(
                    "tropicalization mismatch at ({}, {})",
                    i + 1,
                    j + 1
                )),
                None if e.cutoff() <= src.get(i, j).rational() => rep.precision.push(format!(
                    "insufficient cutoff: entry ({}, {}) is unknown",
                    i + 1,
                    j + 1
                )),
                None => rep.failures.push(format!(
                    "tropicalization mismatch at ({}, {})",
                    i + 1,
                    j + 1
                )),
            }
        }
    }
    for rows in subsets(5, 4) {
        for cols in subsets(5, 4) {
            let label = || format!("rows {:?} cols {:?}", one_based(&rows), one_based(&cols));
            let minor = match l.submatrix(&rows, &cols).det() {
                Ok(d) => d,
                Err(e) => {
                    rep.failures.push(format!("4x4 minor {}: {e}", label()));
                    continue;
                }
            };
            let Ok(t) = trop_det(
                src.matrix(),
                &SubmatrixSelector::new(rows.clone(), cols.clone()),
            ) else {
                rep.failures
                    .push(format!("4x4 minor {}: no tropical determinant", label()));
                continue;
            };
            if !minor.is_zero_to_cutoff() {
                rep.failures
                    .push(format!("4x4 minor {} is nonzero", label()));
            } else if minor.cutoff() <= t.value.rational() {
                rep.precision.push(format!(
                    "insufficient cutoff: 4x4 minor {} is known only below {}, tropical value {}",
                    label(),
                    minor.cutoff(),
                    t.value
                ));
            }
        }
    }
    match l.series_rank() {
        Ok(3) => {}
        Ok(r) => rep.failures.push(format!("series rank is {r}, expected 3")),
        Err(PuiseuxError::CutoffExhausted) => rep
            .precision
            .push("insufficient cutoff: series rank undecided".into()),
        Err(e) => rep.failures.push(format!("series rank: {e}")),
    }
    if find_basis(l).is_none() {
        rep.failures.push("no 3x3 minor has a known degree".into());
    }
    check_combinations(cert, &mut rep);
    rep
}

fn check_combinations<F: Coeff>(cert: &LiftCertificate<F>, rep: &mut LiftReport) {
    let l = &cert.lift;
    let mut basis = cert.basis.clone();
    basis.sort_unstable();
    basis.dedup();
    if basis.len() != 3 || basis.iter().any(|&c| c >= 5) {
        rep.failures
            .push("basis must be three distinct columns".into());
        return;
    }
    let mut covered: Vec<usize> = cert.combinations.iter().map(|c| c.column).collect();
    covered.sort_unstable();
    let expected: Vec<usize> = (0..5).filter(|c| !basis.contains(c)).collect();
    if covered != expected {
        rep.failures
            .push("combinations must cover exactly the non-basis columns".into());
        return;
    }
    for comb in &cert.combinations {
        if comb.coefficients.len() != 3 {
            rep.failures.push(format!(
                "column {} needs three coefficients",
                comb.column + 1
            ));
            continue;
        }
        for r in 0..5 {
            let target = l.get(r, comb.column);
            let mut acc = target.neg();
            for (k, &b) in cert.basis.iter().enumerate() {
                acc = acc.add(&comb.coefficients[k].mul(l.get(r, b)));
            }
            if !acc.is_zero_to_cutoff() {
                rep.failures.push(format!(
                    "combination for column {} fails on row {}",
                    comb.column + 1,
                    r + 1
                ));
            } else if target.deg().is_some_and(|d| acc.cutoff() <= d) {
                rep.precision.push(format!(
                    "insufficient cutoff: combination for column {} on row {}",
                    comb.column + 1,
                    r + 1
                ));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::joints::find_joints;
    use crate::lifts::{joint_lift, LiftOptions};
    use crate::puiseux::Fp;
    use crate::value::Rational;

    fn example_cert() -> LiftCertificate<Fp> {
        let a = SymMatrix::from_ints(&[
            &[1, 0, 1, 1, 1],
            &[0, 1, 1, 1, 1],
            &[1, 1, 0, 0, 0],
            &[1, 1, 0, 0, 0],
            &[1, 1, 0, 0, 0],
        ])
        .unwrap();
        joint_lift(&a, &find_joints(&a).unwrap(), &LiftOptions::with_seed(1)).unwrap()
    }

    #[test]
    fn tampered_exponent_is_a_tropicalization_mismatch() {
        let mut cert = example_cert();
        let e = cert.lift.get(0, 2).shift(Rational::from(1));
        cert.lift.set(0, 2, e.clone());
        cert.lift.set(2, 0, e);
        let rep = verify_lift(&cert);
        assert!(!rep.is_valid());
        assert!(
            rep.failures
                .iter()
                .any(|f| f.contains("tropicalization mismatch at (1, 3)")),
            "{rep:?}"
        );
    }

    #[test]
    fn drastic_truncation_reports_insufficient_cutoff() {
        let mut cert = example_cert();
        cert.lift = cert.lift.map(|e| e.truncate(Rational::from(1)));
        let rep = verify_lift(&cert);
        assert!(!rep.is_valid());
        assert!(rep.insufficient_cutoff(), "{rep:?}");
        assert!(rep
            .messages()
            .iter()
            .any(|m| m.contains("insufficient cutoff")));
    }

    #[test]
    fn asymmetric_lift_is_rejected() {
        let mut cert = example_cert();
        let e = cert.lift.get(0, 1).scale(&Fp::from_i64(2));
        cert.lift.set(0, 1, e);
        assert!(verify_lift(&cert)
            .failures
            .iter()
            .any(|f| f == "lift is not symmetric"));
    }

    #[test]
    fn json_round_trip_reverifies() {
        let cert = example_cert();
        let text = serde_json::to_string(&cert).unwrap();
        assert!(text.contains("\"field\":\"goldilocks\""));
        let back: LiftCertificate<Fp> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cert);
        assert!(verify_lift(&back).is_valid());
    }

    #[test]
    fn wrong_field_is_reported() {
        let mut cert = example_cert();
        cert.field = "rational".into();
        assert!(!verify_lift(&cert).is_valid());
    }
}
