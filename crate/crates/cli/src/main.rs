use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use tropsym::joints::{classify_rank3, JointsError, Rank3Classification};
use tropsym::lifts::{lift_classified, verify_lift, LiftCertificate, LiftOptions};
use tropsym::par::Exec;
use tropsym::puiseux::{Coeff, Fp, Q};
use tropsym::value::parse_rational;
use tropsym::{
    parse_matrix, symmetric_tropical_rank, tropical_rank, MatrixInput, Rational, SymMatrix,
};
use tropsym_cli::{examples, sweep};

/// Tropical and symmetric tropical rank, the method of joints, and certified
/// symmetric rank-3 lifts of 5×5 matrices.
///
/// Exit status: 0 when every claim checks out, 2 on input or usage errors,
/// 3 on a mathematical finding (classification gap or failed lift).
#[derive(Parser)]
#[command(name = "tropsym", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Field {
    Goldilocks,
    Rational,
}

#[derive(Subcommand)]
enum Command {
    /// Print the tropical rank, and the symmetric tropical rank with --symmetric.
    Rank {
        file: PathBuf,
        #[arg(long)]
        symmetric: bool,
    },
    /// Classify a symmetric 5×5 matrix and write the classification as JSON.
    Classify {
        file: PathBuf,
        /// Defaults to the input path with extension `class.json`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lift a symmetric 5×5 matrix of symmetric rank at most 3 and verify it.
    Lift {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Precision above the smallest entry for the first attempt, e.g. `12` or `25/2`.
        #[arg(long, value_parser = rational_arg)]
        margin: Option<Rational>,
        #[arg(long, value_enum, default_value = "goldilocks")]
        field: Field,
        /// Defaults to the input path with extension `lift.json`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-verify a lift certificate from its JSON file.
    Check { file: PathBuf },
    /// Classify, lift and verify a corpus of symmetric 5×5 matrices.
    VerifyTheorem {
        /// All 32768 symmetric matrices with entries in {0, 1}.
        #[arg(long = "exhaustive-01")]
        exhaustive_01: bool,
        /// Number of random matrices of symmetric rank at most 3.
        #[arg(long, default_value_t = 0)]
        samples: usize,
        /// Comma-separated entry values for the random matrices.
        #[arg(long, default_value = "0,1,2,3", value_parser = alphabet_arg)]
        alphabet: Alphabet,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_parser = rational_arg)]
        margin: Option<Rational>,
        /// Worker threads, 0 for one per core.
        #[arg(long, env = "TROPSYM_THREADS", default_value_t = 0)]
        threads: usize,
        /// Run on the calling thread only.
        #[arg(long)]
        sequential: bool,
        /// Write the full findings report here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write every certificate to this directory and re-verify it from disk.
        #[arg(long)]
        emit_certificates: Option<PathBuf>,
    },
    /// Recompute the introductory worked examples.
    Examples,
}

#[derive(Clone, Debug)]
struct Alphabet(Vec<Rational>);

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn alphabet_arg(s: &str) -> Result<Alphabet, String> {
    let values = s
        .split(',')
        .map(rational_arg)
        .collect::<Result<Vec<_>, _>>()?;
    if values.is_empty() {
        return Err("alphabet is empty".into());
    }
    Ok(Alphabet(values))
}

enum Status {
    Verified,
    Finding,
}

fn read_matrix(path: &Path) -> Result<MatrixInput> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_matrix(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_symmetric(path: &Path) -> Result<SymMatrix> {
    read_matrix(path)?
        .to_symmetric()
        .with_context(|| format!("{} is not symmetric", path.display()))
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

fn cmd_rank(file: &Path, symmetric: bool) -> Result<Status> {
    let m = read_matrix(file)?;
    println!("tropical rank: {}", tropical_rank(m.matrix())?);
    if symmetric {
        let s = m
            .to_symmetric()
            .context("--symmetric needs a symmetric matrix")?;
        println!("symmetric tropical rank: {}", symmetric_tropical_rank(&s)?);
    }
    Ok(Status::Verified)
}

fn describe(class: &Rank3Classification) -> String {
    match class {
        Rank3Classification::HasJoints(c) => format!("joints ({}, {})", c.i + 1, c.j + 1),
        Rank3Classification::Exceptional(p) => {
            format!(
                "exceptional form N1={} N2={} P={} M={}",
                p.n1, p.n2, p.p, p.m
            )
        }
        Rank3Classification::NotRankAtMost3 { witness } => {
            format!(
                "symmetric rank above 3, nonsingular 4x4 at {}",
                witness.display_1based()
            )
        }
    }
}

fn cmd_classify(file: &Path, out: Option<PathBuf>) -> Result<Status> {
    let a = read_symmetric(file)?;
    match classify_rank3(&a) {
        Ok(class) => {
            println!("{}", describe(&class));
            let out = out.unwrap_or_else(|| file.with_extension("class.json"));
            write_json(&out, &class)?;
            println!("written: {}", out.display());
            Ok(Status::Verified)
        }
        Err(JointsError::ClassificationGap(_)) => {
            println!("classification gap: symmetric rank at most 3, but neither joints nor the exceptional form");
            Ok(Status::Finding)
        }
        Err(e) => Err(e.into()),
    }
}

fn lift_in<F: Coeff>(a: &SymMatrix, opts: &LiftOptions, out: &Path) -> Result<Status> {
    let class = match classify_rank3(a) {
        Ok(Rank3Classification::NotRankAtMost3 { witness }) => {
            bail!(
                "no rank-3 lift exists: nonsingular 4x4 at {}",
                witness.display_1based()
            )
        }
        Err(JointsError::ClassificationGap(_)) => {
            println!("classification gap: no construction applies");
            return Ok(Status::Finding);
        }
        other => other?,
    };
    println!("{}", describe(&class));
    match lift_classified::<F>(a, &class, opts) {
        Ok(cert) => {
            write_json(out, &cert)?;
            println!("written: {}", out.display());
            report(&cert)
        }
        Err(e) => {
            println!("lift failed: {e}");
            Ok(Status::Finding)
        }
    }
}

fn report<F: Coeff>(cert: &LiftCertificate<F>) -> Result<Status> {
    let rep = verify_lift(cert);
    if rep.is_valid() {
        println!("verified over {} to cutoff {}", cert.field, cert.cutoff);
        Ok(Status::Verified)
    } else {
        for m in rep.messages() {
            println!("failed: {m}");
        }
        Ok(Status::Finding)
    }
}

fn cmd_check(file: &Path) -> Result<Status> {
    let text = fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).context("certificate is not JSON")?;
    match value.get("field").and_then(|f| f.as_str()) {
        Some(Fp::NAME) => report(&serde_json::from_value::<LiftCertificate<Fp>>(value)?),
        Some(Q::NAME) => report(&serde_json::from_value::<LiftCertificate<Q>>(value)?),
        other => bail!("unknown field {other:?}"),
    }
}

fn cmd_examples() -> Status {
    let checks = examples::run();
    for c in &checks {
        println!(
            "[{}] {}: {}",
            if c.ok { "ok" } else { "FAILED" },
            c.name,
            c.detail
        );
    }
    if checks.iter().all(|c| c.ok) {
        Status::Verified
    } else {
        Status::Finding
    }
}

fn cmd_verify_theorem(cfg: sweep::RunConfig, out: Option<PathBuf>) -> Result<Status> {
    let start = Instant::now();
    let rep = sweep::run(&cfg)?;
    let c = &rep.counters;
    println!("seed: {}", rep.seed);
    println!("sampling: {}", rep.sampling);
    println!(
        "matrices: {} (joints {}, exceptional {}, nonsingular witness {}, unclassified {})",
        c.total, c.joints, c.exceptional, c.nonsingular_witness, c.unclassified
    );
    println!("lifted and verified: {}", c.lifted);
    println!(
        "classification gaps: {}; lift failures: {} ({} genericity exhausted)",
        c.classification_gaps, c.lift_failures, c.genericity_exhausted
    );
    for g in &rep.gaps {
        println!(
            "gap: {:?} #{}: {}",
            g.corpus,
            g.index,
            g.matrix
                .upper()
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        );
    }
    for f in &rep.failures {
        println!("failure: {:?} #{}: {}", f.corpus, f.index, f.detail);
    }
    if let Some(out) = out {
        write_json(&out, &rep)?;
        println!("report: {}", out.display());
    }
    eprintln!("elapsed: {:.1?}", start.elapsed());
    Ok(if rep.is_clean() {
        Status::Verified
    } else {
        Status::Finding
    })
}

fn dispatch(cli: Cli) -> Result<Status> {
    match cli.command {
        Command::Rank { file, symmetric } => cmd_rank(&file, symmetric),
        Command::Classify { file, out } => cmd_classify(&file, out),
        Command::Lift {
            file,
            seed,
            margin,
            field,
            out,
        } => {
            let a = read_symmetric(&file)?;
            let opts = LiftOptions {
                margin,
                ..LiftOptions::with_seed(seed)
            };
            let out = out.unwrap_or_else(|| file.with_extension("lift.json"));
            match field {
                Field::Goldilocks => lift_in::<Fp>(&a, &opts, &out),
                Field::Rational => lift_in::<Q>(&a, &opts, &out),
            }
        }
        Command::Check { file } => cmd_check(&file),
        Command::VerifyTheorem {
            exhaustive_01,
            samples,
            alphabet,
            seed,
            margin,
            threads,
            sequential,
            out,
            emit_certificates,
        } => cmd_verify_theorem(
            sweep::RunConfig {
                seed,
                samples,
                alphabet: alphabet.0,
                exhaustive_01,
                margin,
                exec: if sequential {
                    Exec::Sequential
                } else {
                    Exec::default()
                },
                threads,
                emit: emit_certificates,
            },
            out,
        ),
        Command::Examples => Ok(cmd_examples()),
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(Status::Verified) => ExitCode::SUCCESS,
        Ok(Status::Finding) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
