//! Command-line front end: loads matrices and environment states, runs the
//! structural analysis and the closed-form simulation, writes JSON reports
//! and CSV time series.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 input parse error, 3 constraint
//! violation (instance too large), 4 register pair out of range.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use dephase::dfs::{
    self, collective_partition, conjugate_class, dfs_partition, pair_case, preserves_coherence,
    required_symmetry, GSymmetry, PairCase, PairCaseTag,
};
use dephase::evolution::rate_series;
use dephase::model::{BasisIndex, EnvState, InteractionMatrix};
use dephase::spectrum::{energy, forall_env_zero, signature};
use dephase::Error;

/// Largest instance the exhaustive verification oracles accept.
const VERIFY_MAX: usize = 5;

/// Default cap on pairs simulated when none are given.
const DEFAULT_PAIR_CAP: usize = 64;

#[derive(Parser)]
#[command(
    name = "dephase",
    version,
    about = "Exact dephasing simulator and decoherence-free-subspace analyzer"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Partition the register basis into signature classes and write the
    /// structural report as JSON.
    Analyze(AnalyzeArgs),
    /// Sample decoherence rates over a time grid, one CSV per pair, plus a
    /// summary JSON flagging decoherence-free pairs.
    Simulate(SimulateArgs),
    /// Classify register pairs by differing positions and check the row
    /// symmetry of G each case requires.
    Classify(ClassifyArgs),
    /// Run the exhaustive small-instance checks against the matrix and
    /// print one pass/fail line per property.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Interaction-matrix JSON file.
    #[arg(long)]
    matrix: PathBuf,
    /// Report destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Interaction-matrix JSON file.
    #[arg(long)]
    matrix: PathBuf,
    /// Environment-state JSON file.
    #[arg(long)]
    env: PathBuf,
    /// Comma-separated pairs `k:k2`, labels decimal or `b`-prefixed MSB-first
    /// bitstrings. Defaults to the off-diagonal pairs of the largest class.
    #[arg(long)]
    pairs: Option<String>,
    /// End of the time grid (in inverse-coupling units).
    #[arg(long, default_value_t = std::f64::consts::TAU)]
    t_max: f64,
    /// Grid steps; samples are t_j = j * t_max / t_steps for j = 0..=t_steps.
    #[arg(long, default_value_t = 64)]
    t_steps: usize,
    /// Output directory for the CSV files and summary.json.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Interaction-matrix JSON file.
    #[arg(long)]
    matrix: PathBuf,
    /// Comma-separated pairs `k:k2` to classify.
    #[arg(long)]
    pairs: String,
    /// Report destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Interaction-matrix JSON file (K and N at most 5).
    #[arg(long)]
    matrix: PathBuf,
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn new(code: u8, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        let code = match &err {
            Error::RegisterSize(_) | Error::EnvTooLarge(_) | Error::DensityTooLarge(_) => 3,
            Error::ValueOutOfRange { .. } => 4,
            _ => 2,
        };
        CliError::new(code, err.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::new(1, err.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(args) => cmd_analyze(&args),
        Command::Simulate(args) => cmd_simulate(&args),
        Command::Classify(args) => cmd_classify(&args),
        Command::Verify(args) => cmd_verify(&args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("dephase: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}

fn load_matrix(path: &Path) -> Result<InteractionMatrix, CliError> {
    let text = fs::read_to_string(path)?;
    Ok(InteractionMatrix::parse(&text)?)
}

fn load_env(path: &Path, g: &InteractionMatrix) -> Result<EnvState, CliError> {
    let text = fs::read_to_string(path)?;
    let env = EnvState::parse(&text)?;
    if env.width() != g.env_size() {
        return Err(CliError::new(
            2,
            format!(
                "environment width {} does not match N = {}",
                env.width(),
                g.env_size()
            ),
        ));
    }
    Ok(env)
}

/// A register label: decimal, or an MSB-first bitstring prefixed with `b`.
fn parse_label(token: &str, width: usize) -> Result<BasisIndex, CliError> {
    let value = if let Some(bits) = token.strip_prefix('b') {
        u64::from_str_radix(bits, 2)
            .map_err(|_| CliError::new(2, format!("cannot parse bitstring {token:?}")))?
    } else {
        token
            .parse::<u64>()
            .map_err(|_| CliError::new(2, format!("cannot parse label {token:?}")))?
    };
    Ok(BasisIndex::new(value, width)?)
}

fn parse_pairs(spec: &str, width: usize) -> Result<Vec<(BasisIndex, BasisIndex)>, CliError> {
    spec.split(',')
        .map(|chunk| {
            let (a, b) = chunk
                .split_once(':')
                .ok_or_else(|| CliError::new(2, format!("pair {chunk:?} is not of form k:k2")))?;
            Ok((parse_label(a.trim(), width)?, parse_label(b.trim(), width)?))
        })
        .collect()
}

fn write_or_print(out: &Option<PathBuf>, body: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, body)?,
        None => print!("{body}"),
    }
    Ok(())
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<u8, CliError> {
    let g = load_matrix(&args.matrix)?;
    let report = dfs::dfs_report(&g)?;
    write_or_print(&args.out, &format!("{}\n", report.to_json()))?;
    Ok(0)
}

#[derive(Serialize)]
struct SimulationSummary {
    #[serde(rename = "K")]
    k: usize,
    #[serde(rename = "N")]
    n: usize,
    t_max: f64,
    t_steps: usize,
    pairs: Vec<PairSummary>,
}

#[derive(Serialize)]
struct PairSummary {
    k: u64,
    k2: u64,
    /// True iff the pair lies in one decoherence-free subspace.
    dfs: bool,
    csv: String,
    min_abs_r: f64,
}

fn cmd_simulate(args: &SimulateArgs) -> Result<u8, CliError> {
    if !(args.t_max.is_finite() && args.t_max > 0.0) {
        return Err(CliError::new(
            2,
            format!("t-max must be positive, got {}", args.t_max),
        ));
    }
    if args.t_steps == 0 {
        return Err(CliError::new(2, "t-steps must be at least 1"));
    }
    let g = load_matrix(&args.matrix)?;
    let env = load_env(&args.env, &g)?;
    let width = g.register_size();

    let pairs = match &args.pairs {
        Some(spec) => parse_pairs(spec, width)?,
        None => {
            // Default policy: off-diagonal pairs of the largest class.
            let partition = dfs_partition(&g)?;
            let members = partition.classes()[0].members();
            let mut pairs = Vec::new();
            'outer: for (i, &a) in members.iter().enumerate() {
                for &b in &members[i + 1..] {
                    pairs.push((BasisIndex::new(a, width)?, BasisIndex::new(b, width)?));
                    if pairs.len() == DEFAULT_PAIR_CAP {
                        break 'outer;
                    }
                }
            }
            pairs
        }
    };

    let grid: Vec<f64> = (0..=args.t_steps)
        .map(|j| j as f64 * args.t_max / args.t_steps as f64)
        .collect();

    fs::create_dir_all(&args.out)?;
    let mut summaries = Vec::with_capacity(pairs.len());
    for &(k, k2) in &pairs {
        let series = rate_series(&g, k, k2, &env, &grid)?;
        let name = format!("pair_{}_{}.csv", k.value(), k2.value());
        let mut buf = Vec::new();
        series
            .write_csv(&mut buf)
            .map_err(|e| CliError::new(1, e.to_string()))?;
        fs::write(args.out.join(&name), buf)?;
        summaries.push(PairSummary {
            k: k.value(),
            k2: k2.value(),
            dfs: preserves_coherence(&g, k, k2)?,
            csv: name,
            min_abs_r: series.min_abs(),
        });
    }

    let summary = SimulationSummary {
        k: width,
        n: g.env_size(),
        t_max: args.t_max,
        t_steps: args.t_steps,
        pairs: summaries,
    };
    let body =
        serde_json::to_string_pretty(&summary).map_err(|e| CliError::new(1, e.to_string()))?;
    fs::write(args.out.join("summary.json"), format!("{body}\n"))?;
    Ok(0)
}

#[derive(Serialize)]
struct ClassifyReport {
    #[serde(rename = "K")]
    k: usize,
    #[serde(rename = "N")]
    n: usize,
    pairs: Vec<CaseReport>,
}

#[derive(Serialize)]
struct CaseReport {
    k: u64,
    k2: u64,
    case: PairCaseTag,
    #[serde(skip_serializing_if = "Option::is_none")]
    l1: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    l2: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    distance: Option<usize>,
    /// Row symmetry of G the case requires; null for identical or distant
    /// pairs.
    required: Option<GSymmetry>,
    /// Whether G satisfies the required symmetry.
    satisfied: Option<bool>,
    /// Whether coherence is preserved, decided by signatures regardless of
    /// the case analysis.
    preserved: bool,
}

fn cmd_classify(args: &ClassifyArgs) -> Result<u8, CliError> {
    let g = load_matrix(&args.matrix)?;
    let width = g.register_size();
    let pairs = parse_pairs(&args.pairs, width)?;
    let mut reports = Vec::with_capacity(pairs.len());
    for &(k, k2) in &pairs {
        let case = pair_case(k, k2)?;
        let (l1, l2, distance) = match case {
            PairCase::EqualSigns { l1, l2 } | PairCase::OppositeSigns { l1, l2 } => {
                (Some(l1), Some(l2), None)
            }
            PairCase::FirstZero { l } | PairCase::SecondZero { l } => (Some(l), None, None),
            PairCase::TooFar { distance } => (None, None, Some(distance)),
            PairCase::Identical => (None, None, None),
        };
        let required = required_symmetry(&case).ok();
        let satisfied = match &required {
            Some(sym) => Some(dfs::check_symmetry(&g, sym)?),
            None => None,
        };
        reports.push(CaseReport {
            k: k.value(),
            k2: k2.value(),
            case: case.tag(),
            l1,
            l2,
            distance,
            required,
            satisfied,
            preserved: preserves_coherence(&g, k, k2)?,
        });
    }
    let report = ClassifyReport {
        k: width,
        n: g.env_size(),
        pairs: reports,
    };
    let body =
        serde_json::to_string_pretty(&report).map_err(|e| CliError::new(1, e.to_string()))?;
    write_or_print(&args.out, &format!("{body}\n"))?;
    Ok(0)
}

fn cmd_verify(args: &VerifyArgs) -> Result<u8, CliError> {
    let g = load_matrix(&args.matrix)?;
    let k = g.register_size();
    let n = g.env_size();
    if k > VERIFY_MAX || n > VERIFY_MAX {
        return Err(CliError::new(
            3,
            format!(
                "oracle suite needs K <= {VERIFY_MAX} and N <= {VERIFY_MAX}, got K = {k}, N = {n}"
            ),
        ));
    }
    let dim = 1u64 << k;
    let idx = |v: u64| BasisIndex::new(v, k).expect("label in range");
    let mut all_pass = true;
    let mut check = |name: &str, pass: bool| {
        println!("{name}: {}", if pass { "PASS" } else { "FAIL" });
        all_pass &= pass;
    };

    // Signature equality reproduces the exhaustive all-environments test.
    let mut lemma = true;
    for a in 0..dim {
        for b in a + 1..dim {
            let diff = signature(&g, idx(a))?.diff(&signature(&g, idx(b))?);
            let exhaustive = forall_env_zero(&diff)?;
            let by_signature = preserves_coherence(&g, idx(a), idx(b))?;
            lemma &= exhaustive == by_signature;
        }
    }
    check("lemma_signature_equivalence", lemma);

    // Direct eigenvalue comparison over every environment configuration.
    let mut brute = true;
    for a in 0..dim {
        for b in a + 1..dim {
            let equal_energies = (0..1u64 << n).try_fold(true, |acc, nv| {
                let nn = BasisIndex::new(nv, n)?;
                Ok::<_, Error>(acc && energy(&g, idx(a), nn)? == energy(&g, idx(b), nn)?)
            })?;
            brute &= equal_energies == preserves_coherence(&g, idx(a), idx(b))?;
        }
    }
    check("no_decoherence_brute_force", brute);

    let partition = dfs_partition(&g)?;
    let mut seen: Vec<u64> = partition
        .classes()
        .iter()
        .flat_map(|c| c.members())
        .copied()
        .collect();
    seen.sort_unstable();
    check(
        "partition_totality",
        partition.total_size() == dim && seen == (0..dim).collect::<Vec<_>>(),
    );

    let mut negates = true;
    for v in 0..dim {
        negates &= signature(&g, idx(v).complement())? == signature(&g, idx(v))?.negated();
    }
    check("conjugation_negates_signature", negates);

    let mut permutes = true;
    for class in partition.classes() {
        let image = conjugate_class(&g, class.members())?;
        let is_class = partition
            .classes()
            .iter()
            .any(|c| c.members() == image.as_slice());
        let back = conjugate_class(&g, &image)?;
        permutes &= is_class && back == class.members();
    }
    check("conjugation_permutes_classes", permutes);

    let collective_rows = (2..=k).all(|i| g.row(i).expect("row") == g.row(1).expect("row"))
        && g.row(1).expect("row").iter().any(|x| !x.is_zero());
    if collective_rows {
        check(
            "collective_hamming_partition",
            partition.same_classes(&collective_partition(k)?),
        );
    } else {
        println!("collective_hamming_partition: SKIP (matrix is not collective)");
    }

    Ok(if all_pass { 0 } else { 1 })
}
