//! Symmetric rank-3 lifts of 5×5 tropical matrices over truncated Puiseux series.
//!
//! A lift is built by one of two constructions, chosen by the classification
//! of the source matrix: the method of joints, or the 6×6 augmentation used
//! for the exceptional form. Both draw generic coefficients from a seeded
//! generator, so a failed genericity assumption costs a retry, not a wrong
//! answer. Every result is checked by [`verify_lift`] before it is returned.

mod exceptional;
mod joint;
mod solve;
mod verify;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::joints::{
    classify_rank3, ExceptionalParams, JointCertificate, JointsError, Rank3Classification,
};
use crate::puiseux::{
    random_generic_coefficient, Coeff, PuiseuxError, PuiseuxSeries, SeriesMatrix,
};
use crate::trop::{SubmatrixSelector, SymMatrix};
use crate::value::{rational_serde, Rational};

pub use exceptional::exceptional_lift;
pub use joint::joint_lift;
pub use solve::{kapranov_entry_solve, Unknown};
pub use verify::{certify, verify_lift, LiftReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LiftError {
    #[error("expected a 5x5 matrix, found {0}x{0}")]
    NotFiveByFive(usize),
    #[error("matrix has a symmetrically nonsingular 4x4 submatrix {}", .0.display_1based())]
    NotRankAtMost3(SubmatrixSelector),
    #[error("neither joints nor the exceptional form were found")]
    ClassificationGap,
    #[error("invalid certificate: {0}")]
    CertificateInvalid(String),
    #[error("no generic choice succeeded after {attempts} attempts; last failure: {last}")]
    GenericityExhausted { attempts: usize, last: String },
    #[error("cutoff too small")]
    CutoffExhausted,
    #[error("solved entry has degree {found:?}, expected {expected}")]
    DegreeMismatch {
        expected: Rational,
        found: Option<Rational>,
    },
    #[error("target degree is not on the tropical hypersurface of the unknown")]
    NotOnHypersurface,
    #[error("quadratic for the unknown has a repeated root")]
    RepeatedRoot,
    #[error("degree condition violated: {0}")]
    SideCondition(String),
    #[error("lift failed verification: {0}")]
    Rejected(String),
    #[error(transparent)]
    Puiseux(#[from] PuiseuxError),
}

impl LiftError {
    fn needs_cutoff(&self) -> bool {
        matches!(
            self,
            LiftError::CutoffExhausted | LiftError::Puiseux(PuiseuxError::CutoffExhausted)
        )
    }

    fn is_retryable(&self) -> bool {
        matches!(
            self,
            LiftError::DegreeMismatch { .. }
                | LiftError::NotOnHypersurface
                | LiftError::RepeatedRoot
                | LiftError::SideCondition(_)
                | LiftError::Rejected(_)
                | LiftError::Puiseux(_)
        )
    }
}

impl From<JointsError> for LiftError {
    fn from(e: JointsError) -> Self {
        match e {
            JointsError::NotFiveByFive(n) => LiftError::NotFiveByFive(n),
            JointsError::ClassificationGap(_) => LiftError::ClassificationGap,
            other => LiftError::CertificateInvalid(other.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftOptions {
    pub seed: u64,
    /// Precision above the smallest entry of the working matrix for the
    /// first attempt; defaults to [`default_margin`].
    pub margin: Option<Rational>,
    /// Fresh generic draws per cutoff level.
    pub max_retries: usize,
    /// Times the margin above the smallest entry may be doubled.
    pub max_escalations: usize,
}

impl Default for LiftOptions {
    fn default() -> Self {
        LiftOptions {
            seed: 0,
            margin: None,
            max_retries: 64,
            max_escalations: 4,
        }
    }
}

impl LiftOptions {
    pub fn with_seed(seed: u64) -> Self {
        LiftOptions {
            seed,
            ..Self::default()
        }
    }
}

fn min_max(a: &SymMatrix) -> (Rational, Rational) {
    let m = a.matrix();
    let lo = m.min_entry().map_or(Rational::from(0), |v| v.rational());
    let hi = m.max_entry().map_or(Rational::from(0), |v| v.rational());
    (lo, hi)
}

/// `MARGIN_SLOPE·(max - min) + MARGIN_BASE` over the entries of `a`.
pub fn default_margin(a: &SymMatrix) -> Rational {
    let (lo, hi) = min_max(a);
    (hi - lo) * MARGIN_SLOPE + MARGIN_BASE
}

pub const MARGIN_SLOPE: i64 = 4;
pub const MARGIN_BASE: i64 = 8;

/// Smallest entry of `a` plus `margin`.
pub(crate) fn working_cutoff(a: &SymMatrix, margin: Rational) -> Rational {
    min_max(a).0 + margin
}

/// How the lift was constructed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LiftMethod {
    Joints { certificate: JointCertificate },
    Exceptional { params: ExceptionalParams },
}

/// Coefficients expressing one column of the lift in the basis columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(serialize = "F: Coeff", deserialize = "F: Coeff"))]
pub struct Combination<F> {
    #[serde(with = "one_based")]
    pub column: usize,
    pub coefficients: Vec<PuiseuxSeries<F>>,
}

/// A symmetric lift together with everything needed to re-check it.
///
/// Indices are 0-based in memory and 1-based in JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(serialize = "F: Coeff", deserialize = "F: Coeff"))]
pub struct LiftCertificate<F> {
    pub source: SymMatrix,
    pub method: LiftMethod,
    pub field: String,
    pub seed: u64,
    /// Smallest cutoff among the lift's entries.
    #[serde(with = "rational_serde")]
    pub cutoff: Rational,
    pub lift: SeriesMatrix<F>,
    #[serde(with = "one_based_vec")]
    pub basis: Vec<usize>,
    pub combinations: Vec<Combination<F>>,
}

mod one_based {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(i: &usize, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(*i as u64 + 1)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<usize, D::Error> {
        let v = usize::deserialize(d)?;
        v.checked_sub(1)
            .ok_or_else(|| de::Error::custom("indices are 1-based"))
    }
}

mod one_based_vec {
    use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[usize], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|i| i + 1).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<usize>, D::Error> {
        Vec::<usize>::deserialize(d)?
            .into_iter()
            .map(|v| {
                v.checked_sub(1)
                    .ok_or_else(|| de::Error::custom("indices are 1-based"))
            })
            .collect()
    }
}

/// State shared by the constructions: the generator and the working cutoff.
pub(crate) struct Ctx<'a> {
    pub rng: &'a mut ChaCha8Rng,
    pub cutoff: Rational,
}

impl Ctx<'_> {
    /// `c·t^deg` with a random nonzero `c`.
    pub fn generic<F: Coeff>(&mut self, deg: Rational) -> PuiseuxSeries<F> {
        PuiseuxSeries::monomial(random_generic_coefficient(self.rng), deg, self.cutoff)
    }
}

/// Run `build` at increasing cutoffs with fresh generic draws until the
/// result verifies.
///
/// `build` receives the margin above the smallest entry of `frame`, the
/// matrix it works on. Each attempt uses its own stream of the seeded
/// generator.
fn drive<F: Coeff>(
    source: &SymMatrix,
    frame: &SymMatrix,
    method: LiftMethod,
    opts: &LiftOptions,
    build: impl Fn(&mut ChaCha8Rng, Rational) -> Result<SeriesMatrix<F>, LiftError>,
) -> Result<LiftCertificate<F>, LiftError> {
    let margin = match opts.margin {
        Some(m) if m > Rational::from(0) => m,
        Some(_) => return Err(LiftError::CutoffExhausted),
        None => default_margin(frame),
    };
    let mut attempts = 0;
    let mut last = String::new();
    'levels: for level in 0..=opts.max_escalations {
        let margin = margin * Rational::from(1i64 << level);
        for retry in 0..opts.max_retries.max(1) {
            attempts += 1;
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream((level * opts.max_retries.max(1) + retry) as u64);
            let outcome = build(&mut rng, margin).and_then(|lift| {
                let cert = certify(source.clone(), method.clone(), opts.seed, lift)?;
                let report = verify_lift(&cert);
                if report.is_valid() {
                    Ok(cert)
                } else if report.failures.is_empty() {
                    Err(LiftError::CutoffExhausted)
                } else {
                    Err(LiftError::Rejected(report.failures.join("; ")))
                }
            });
            match outcome {
                Ok(cert) => return Ok(cert),
                Err(e) if e.needs_cutoff() => continue 'levels,
                Err(e) if e.is_retryable() => last = e.to_string(),
                Err(e) => return Err(e),
            }
        }
        return Err(LiftError::GenericityExhausted { attempts, last });
    }
    Err(LiftError::CutoffExhausted)
}

/// Lift according to an existing classification.
pub fn lift_classified<F: Coeff>(
    a: &SymMatrix,
    class: &Rank3Classification,
    opts: &LiftOptions,
) -> Result<LiftCertificate<F>, LiftError> {
    match class {
        Rank3Classification::HasJoints(cert) => joint_lift(a, cert, opts),
        Rank3Classification::Exceptional(params) => exceptional_lift(a, params, opts),
        Rank3Classification::NotRankAtMost3 { witness } => {
            Err(LiftError::NotRankAtMost3(witness.clone()))
        }
    }
}

/// Classify, then lift.
pub fn lift<F: Coeff>(a: &SymMatrix, opts: &LiftOptions) -> Result<LiftCertificate<F>, LiftError> {
    let class = classify_rank3(a)?;
    lift_classified(a, &class, opts)
}
