//! Corpus generation and the classify, lift, verify pipeline behind
//! `verify-theorem`.
//!
//! Each matrix gets its own generator stream derived from the run seed and
//! its index, so results do not depend on scheduling and parallel runs match
//! sequential ones.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use tropsym::joints::{classify_rank3, JointsError, Rank3Classification};
use tropsym::lifts::{lift_classified, verify_lift, LiftCertificate, LiftError, LiftOptions};
use tropsym::par::{self, Exec};
use tropsym::puiseux::{Coeff, Fp};
use tropsym::{sym_rank_at_most_3, Rational, SymMatrix, TropValue};

/// Number of symmetric 5×5 matrices with entries in {0, 1}.
pub const CUBE_SIZE: usize = 1 << 15;

const SAMPLE_STREAM: u64 = 1 << 32;
const CUBE_STREAM: u64 = 2 << 32;

/// Everything that determines a run.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub seed: u64,
    pub samples: usize,
    pub alphabet: Vec<Rational>,
    pub exhaustive_01: bool,
    pub margin: Option<Rational>,
    pub exec: Exec,
    /// Worker threads; 0 lets the pool decide.
    pub threads: usize,
    /// Directory for one certificate file per lifted matrix.
    pub emit: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 42,
            samples: 0,
            alphabet: (0..4).map(Rational::from).collect(),
            exhaustive_01: false,
            margin: None,
            exec: Exec::default(),
            threads: 0,
            emit: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Corpus {
    Cube,
    Samples,
}

impl Corpus {
    fn name(self) -> &'static str {
        match self {
            Corpus::Cube => "cube",
            Corpus::Samples => "samples",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome {
    Verified {
        class: String,
    },
    NonsingularWitness {
        witness: String,
    },
    ClassificationGap,
    LiftFailed {
        class: String,
        error: String,
        #[serde(skip)]
        exhausted: bool,
    },
}

/// Result for one matrix, with its upper triangle row by row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatrixOutcome {
    pub corpus: Corpus,
    pub index: usize,
    pub upper: String,
    #[serde(flatten)]
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counters {
    pub total: usize,
    pub joints: usize,
    pub exceptional: usize,
    pub nonsingular_witness: usize,
    pub classification_gaps: usize,
    /// Classification failed for a reason other than a gap.
    pub unclassified: usize,
    pub lifted: usize,
    pub lift_failures: usize,
    pub genericity_exhausted: usize,
}

/// A gap or a failed lift, with the full matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub corpus: Corpus,
    pub index: usize,
    pub matrix: SymMatrix,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FindingsReport {
    pub seed: u64,
    pub sampling: String,
    pub alphabet: Vec<String>,
    pub samples: usize,
    pub exhaustive_01: bool,
    pub field: String,
    pub counters: Counters,
    pub gaps: Vec<Finding>,
    pub failures: Vec<Finding>,
    pub matrices: Vec<MatrixOutcome>,
}

impl FindingsReport {
    /// No gap and no failed lift.
    pub fn is_clean(&self) -> bool {
        self.gaps.is_empty() && self.failures.is_empty()
    }
}

/// The symmetric {0, 1} matrix whose upper triangle spells `k` in binary,
/// least significant bit first.
pub fn cube_matrix(k: usize) -> SymMatrix {
    let upper: Vec<TropValue> = (0..15)
        .map(|b| TropValue::int(((k >> b) & 1) as i64))
        .collect();
    SymMatrix::from_upper(5, &upper).expect("15 entries")
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// Sample `index`: upper triangles drawn uniformly from `alphabet` until
/// every 4×4 submatrix is symmetrically singular. Also returns the seed for
/// its lift.
pub fn sample_matrix(seed: u64, index: usize, alphabet: &[Rational]) -> (SymMatrix, u64) {
    let mut rng = stream(seed, SAMPLE_STREAM | index as u64);
    loop {
        let upper: Vec<TropValue> = (0..15)
            .map(|_| TropValue(alphabet[rng.gen_range(0..alphabet.len())]))
            .collect();
        let a = SymMatrix::from_upper(5, &upper).expect("15 entries");
        if sym_rank_at_most_3(&a) {
            return (a, rng.next_u64());
        }
    }
}

fn cube_seed(seed: u64, index: usize) -> u64 {
    stream(seed, CUBE_STREAM | index as u64).next_u64()
}

fn upper_string(a: &SymMatrix) -> String {
    a.upper()
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Write `cert`, read it back and verify the copy from disk.
fn emit_and_reverify(dir: &Path, name: &str, cert: &LiftCertificate<Fp>) -> anyhow::Result<String> {
    let path = dir.join(format!("{name}.json"));
    fs::write(&path, serde_json::to_vec(cert)?)
        .with_context(|| format!("writing {}", path.display()))?;
    let back: LiftCertificate<Fp> = serde_json::from_slice(&fs::read(&path)?)?;
    let report = verify_lift(&back);
    anyhow::ensure!(
        report.is_valid(),
        "re-verification failed: {}",
        report.messages().join("; ")
    );
    Ok(path.display().to_string())
}

/// Classify, lift and verify one matrix.
pub fn process(
    corpus: Corpus,
    index: usize,
    a: &SymMatrix,
    lift_seed: u64,
    margin: Option<Rational>,
    emit: Option<&Path>,
) -> MatrixOutcome {
    let mut certificate = None;
    let outcome = match classify_rank3(a) {
        Err(JointsError::ClassificationGap(_)) => Outcome::ClassificationGap,
        Err(e) => Outcome::LiftFailed {
            class: "unclassified".into(),
            error: e.to_string(),
            exhausted: false,
        },
        Ok(Rank3Classification::NotRankAtMost3 { witness }) => Outcome::NonsingularWitness {
            witness: witness.display_1based(),
        },
        Ok(class) => {
            let opts = LiftOptions {
                margin,
                ..LiftOptions::with_seed(lift_seed)
            };
            let label = class.label().to_string();
            match lift_classified::<Fp>(a, &class, &opts) {
                Ok(cert) => match emit
                    .map(|d| emit_and_reverify(d, &format!("{}-{index:05}", corpus.name()), &cert))
                {
                    Some(Err(e)) => Outcome::LiftFailed {
                        class: label,
                        error: e.to_string(),
                        exhausted: false,
                    },
                    Some(Ok(path)) => {
                        certificate = Some(path);
                        Outcome::Verified { class: label }
                    }
                    None => Outcome::Verified { class: label },
                },
                Err(e) => Outcome::LiftFailed {
                    class: label,
                    exhausted: matches!(e, LiftError::GenericityExhausted { .. }),
                    error: e.to_string(),
                },
            }
        }
    };
    MatrixOutcome {
        corpus,
        index,
        upper: upper_string(a),
        outcome,
        certificate,
    }
}

fn jobs(cfg: &RunConfig) -> Vec<(Corpus, usize)> {
    let cube = if cfg.exhaustive_01 { CUBE_SIZE } else { 0 };
    (0..cube)
        .map(|k| (Corpus::Cube, k))
        .chain((0..cfg.samples).map(|k| (Corpus::Samples, k)))
        .collect()
}

fn tally(cfg: &RunConfig, results: Vec<(MatrixOutcome, SymMatrix)>) -> FindingsReport {
    let mut counters = Counters::default();
    let (mut gaps, mut failures) = (Vec::new(), Vec::new());
    let mut matrices = Vec::with_capacity(results.len());
    for (m, a) in results {
        counters.total += 1;
        match &m.outcome {
            Outcome::Verified { class } | Outcome::LiftFailed { class, .. } => match class.as_str()
            {
                "joints" => counters.joints += 1,
                "exceptional" => counters.exceptional += 1,
                _ => counters.unclassified += 1,
            },
            _ => {}
        }
        match &m.outcome {
            Outcome::Verified { .. } => counters.lifted += 1,
            Outcome::NonsingularWitness { .. } => counters.nonsingular_witness += 1,
            Outcome::ClassificationGap => {
                counters.classification_gaps += 1;
                gaps.push(Finding {
                    corpus: m.corpus,
                    index: m.index,
                    matrix: a,
                    detail:
                        "symmetric rank at most three, but neither joints nor the exceptional form"
                            .into(),
                });
            }
            Outcome::LiftFailed {
                error, exhausted, ..
            } => {
                counters.lift_failures += 1;
                counters.genericity_exhausted += usize::from(*exhausted);
                failures.push(Finding {
                    corpus: m.corpus,
                    index: m.index,
                    matrix: a,
                    detail: error.clone(),
                });
            }
        }
        matrices.push(m);
    }
    FindingsReport {
        seed: cfg.seed,
        sampling: "upper triangles uniform over the alphabet, rejected until every 4x4 submatrix is symmetrically singular"
            .into(),
        alphabet: cfg.alphabet.iter().map(|&r| TropValue(r).to_string()).collect(),
        samples: cfg.samples,
        exhaustive_01: cfg.exhaustive_01,
        field: Fp::NAME.into(),
        counters,
        gaps,
        failures,
        matrices,
    }
}

/// Run the whole pipeline over the configured corpora.
pub fn run(cfg: &RunConfig) -> anyhow::Result<FindingsReport> {
    anyhow::ensure!(
        !cfg.alphabet.is_empty() || cfg.samples == 0,
        "alphabet is empty"
    );
    if let Some(dir) = &cfg.emit {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let jobs = jobs(cfg);
    let emit = cfg.emit.as_deref();
    let results = par::with_threads(cfg.threads, || {
        par::map(cfg.exec, &jobs, |&(corpus, index)| {
            let (a, lift_seed) = match corpus {
                Corpus::Cube => (cube_matrix(index), cube_seed(cfg.seed, index)),
                Corpus::Samples => sample_matrix(cfg.seed, index, &cfg.alphabet),
            };
            (process(corpus, index, &a, lift_seed, cfg.margin, emit), a)
        })
    });
    Ok(tally(cfg, results))
}
