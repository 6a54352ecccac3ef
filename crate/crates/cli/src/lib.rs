//! Argument handling and report rendering for the `qshare` binary.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use qshare_core::code::{distance_threshold_violations, mds_threshold_violations};
use qshare_core::protocol::{seeded_rng, verify_theorem1, Evidence, LoccDecoder, SubsetVerdict};
use qshare_core::qsim::{format_fixed, TOLERANCE};
use qshare_core::schema::{parse_amplitudes, parse_code};
use qshare_core::{verify_all, Budget, Error, LinearCode, PlayerSet, ProtocolTranscript, Secret};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 2013;

/// Protocol runs per subset for `verify` when `--trials` is not given.
pub const DEFAULT_VERIFY_TRIALS: usize = 20;

#[derive(Debug, Parser)]
#[command(name = "qshare", version, about = "Simulate LOCC-assisted quantum secret sharing over linear codes")]
pub struct Cli {
    /// Code specification file (JSON).
    #[arg(long, global = true, value_name = "FILE")]
    pub code: Option<PathBuf>,

    /// Players in A, 1-based and comma-separated (e.g. 1,2).
    #[arg(long = "subset-a", global = true, value_delimiter = ',', value_name = "LIST")]
    pub subset_a: Option<Vec<usize>>,

    /// random | basis:<idx> | file:<path>
    #[arg(long, global = true, default_value = "random")]
    pub secret: String,

    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Protocol runs (simulate) or runs per subset (verify).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: Option<u64>,

    /// Worker threads for subset scans and batch verification.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: Option<u64>,

    /// Largest state vector (in amplitudes) the simulator may allocate.
    #[arg(long = "budget-amps", global = true)]
    pub budget_amps: Option<u64>,

    /// Write the report here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Dimensions, distance (two ways) and the MDS property.
    Analyze,
    /// Rank test for every proper subset B.
    Subsets,
    /// Run the protocol for the given A.
    Simulate,
    /// Check the rank criterion in both directions.
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    /// 0 = pass, 1 = protocol/verification failure, 2 = usage or input
    /// error, 3 = budget exceeded.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 2,
            CliError::Core(Error::BudgetExceeded(_)) => 3,
            CliError::Core(
                Error::NotAssisted { .. }
                | Error::SupportLeak(_)
                | Error::NonUniformOutcome { .. }
                | Error::PhaseResidual(_)
                | Error::DegenerateState(_),
            ) => 1,
            CliError::Core(_) => 2,
        }
    }
}

/// Rendered output plus whether every check passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub body: String,
    pub warnings: Vec<String>,
    pub passed: bool,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

struct Context {
    code: LinearCode,
    budget: Budget,
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })
}

fn load(cli: &Cli) -> Result<Context, CliError> {
    let path = cli
        .code
        .as_ref()
        .ok_or_else(|| CliError::Usage("--code <FILE> is required".into()))?;
    let code = parse_code(&read(path)?)?;
    let mut budget = Budget::default();
    if let Some(amps) = cli.budget_amps {
        budget.max_amplitudes = amps;
    }
    Ok(Context { code, budget })
}

fn subset_a(cli: &Cli, code: &LinearCode) -> Result<Option<PlayerSet>, CliError> {
    cli.subset_a
        .as_ref()
        .map(|list| {
            let a = PlayerSet::from_one_based(list)?;
            a.check_within(code.n())?;
            Ok(a)
        })
        .transpose()
}

/// Runs one subcommand and renders its report.
pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    if let Some(jobs) = cli.jobs {
        // A pool can only be installed once per process; later calls keep it.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs as usize)
            .build_global();
    }
    let ctx = load(cli)?;
    match cli.command {
        Command::Analyze => analyze(cli, &ctx),
        Command::Subsets => subsets(cli, &ctx),
        Command::Simulate => simulate(cli, &ctx),
        Command::Verify => verify(cli, &ctx),
    }
}

fn json_body<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn analyze(cli: &Cli, ctx: &Context) -> Result<Report, CliError> {
    let code = &ctx.code;
    let (n, k) = (code.n(), code.k());
    let d = code.min_distance(&ctx.budget)?;
    let d_rank = code.distance_via_rank(&ctx.budget)?;
    let mds = d == n - k + 1;
    let passed = d == d_rank;
    let threshold = if mds { k } else { n - d + 1 };

    let body = match cli.format {
        Format::Json => json_body(&json!({
            "n": n,
            "k": k,
            "q": code.q(),
            "field": code.field().to_string(),
            "d_min_weight": d,
            "d_rank": d_rank,
            "mds": mds,
            "assisted_threshold": threshold,
        })),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "code: [{n},{k}]_{} over {}", code.q(), code.field());
            let _ = writeln!(s, "distance: min-weight {d}, rank-based {d_rank}");
            let _ = writeln!(s, "d={d}, MDS: {mds}");
            if mds {
                let _ = writeln!(s, "every B with |B| >= k = {k} is assisted (optimal: |B| = k)");
            } else {
                let _ = writeln!(s, "every B with |B| >= n-d+1 = {threshold} is assisted");
            }
            if !passed {
                let _ = writeln!(s, "FAIL: distance computations disagree");
            }
            s
        }
    };
    Ok(Report {
        body,
        warnings: Vec::new(),
        passed,
    })
}

fn subsets(cli: &Cli, ctx: &Context) -> Result<Report, CliError> {
    let code = &ctx.code;
    let reports = code.enumerate_assisting(&ctx.budget)?;
    let d = code.min_distance(&ctx.budget)?;
    let mds = d == code.n() - code.k() + 1;
    let lemma_ok = distance_threshold_violations(&reports, code.n(), d).is_empty();
    let mds_ok = !mds || mds_threshold_violations(&reports, code.k()).is_empty();
    let assisted = reports.iter().filter(|r| r.is_assisted).count();

    let body = match cli.format {
        Format::Json => json_body(&json!({
            "n": code.n(),
            "k": code.k(),
            "d": d,
            "mds": mds,
            "subsets": reports,
            "assisted": assisted,
            "not_assisted": reports.len() - assisted,
            "distance_threshold_holds": lemma_ok,
            "mds_threshold_holds": mds_ok,
        })),
        Format::Text => {
            let mut s = String::new();
            let width = reports
                .iter()
                .map(|r| r.subset_b.to_string().len())
                .max()
                .unwrap_or(1)
                .max(1);
            let _ = writeln!(s, "{:<width$}  |B|  rank(G_B)  assisted", "B");
            for r in &reports {
                let _ = writeln!(
                    s,
                    "{:<width$}  {:>3}  {:>9}  {}",
                    r.subset_b.to_string(),
                    r.subset_b.len(),
                    r.rank_gb,
                    if r.is_assisted { "yes" } else { "no" }
                );
            }
            let _ = writeln!(
                s,
                "summary: {} proper subsets, {assisted} assisted, {} not assisted",
                reports.len(),
                reports.len() - assisted
            );
            let _ = writeln!(
                s,
                "distance threshold (|B| > n-d = {}): {}",
                code.n() - d,
                if lemma_ok { "ok" } else { "VIOLATED" }
            );
            if mds {
                let _ = writeln!(
                    s,
                    "MDS threshold (assisted iff |B| >= k = {}): {}",
                    code.k(),
                    if mds_ok { "ok" } else { "VIOLATED" }
                );
            }
            s
        }
    };
    Ok(Report {
        body,
        warnings: Vec::new(),
        passed: lemma_ok && mds_ok,
    })
}

enum SecretSource {
    Random,
    Fixed(Secret),
}

fn secret_source(cli: &Cli, code: &LinearCode, warnings: &mut Vec<String>) -> Result<SecretSource, CliError> {
    let spec = cli.secret.as_str();
    if spec == "random" {
        return Ok(SecretSource::Random);
    }
    if let Some(idx) = spec.strip_prefix("basis:") {
        let idx: usize = idx
            .parse()
            .map_err(|_| CliError::Usage(format!("bad basis index in --secret {spec}")))?;
        return Ok(SecretSource::Fixed(Secret::basis(code.field(), code.k(), idx)?));
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let path = PathBuf::from(path);
        let amps = parse_amplitudes(&read(&path)?)?;
        let (secret, norm) = Secret::normalizing(code.field(), code.k(), amps)?;
        if (norm - 1.0).abs() > 1e-6 {
            warnings.push(format!(
                "secret in {} had squared norm {norm}; normalized on load",
                path.display()
            ));
        }
        return Ok(SecretSource::Fixed(secret));
    }
    Err(CliError::Usage(format!(
        "--secret must be random, basis:<idx> or file:<path>, got {spec}"
    )))
}

fn fmt_amps(secret: &Secret) -> String {
    let parts: Vec<String> = secret
        .amplitudes()
        .iter()
        .map(|a| format!("[{}, {}]", format_fixed(a.re), format_fixed(a.im)))
        .collect();
    parts.join(" ")
}

fn simulate(cli: &Cli, ctx: &Context) -> Result<Report, CliError> {
    let code = &ctx.code;
    let a = subset_a(cli, code)?
        .ok_or_else(|| CliError::Usage("simulate requires --subset-a".into()))?;
    let trials = cli.trials.unwrap_or(1);
    let mut warnings = Vec::new();
    let source = secret_source(cli, code, &mut warnings)?;
    let decoder = LoccDecoder::new(code, &a, ctx.budget)?;

    let mut transcripts: Vec<ProtocolTranscript> = Vec::new();
    for i in 0..trials {
        let seed = cli.seed.wrapping_add(i);
        let mut rng = seeded_rng(seed);
        let secret = match &source {
            SecretSource::Random => Secret::random(code.field(), code.k(), &mut rng)?,
            SecretSource::Fixed(s) => s.clone(),
        };
        let mut t = decoder.run(&secret, &mut rng)?;
        t.seed = Some(seed);
        transcripts.push(t);
    }
    let passed = transcripts
        .iter()
        .all(|t| t.fidelity >= 1.0 - TOLERANCE);

    let body = match cli.format {
        Format::Json => json_body(&json!({
            "transcripts": transcripts.iter().map(ProtocolTranscript::to_json_value).collect::<Vec<_>>(),
            "all_recovered": passed,
        })),
        Format::Text => {
            let mut s = String::new();
            let b = decoder.isometry().subset_b();
            let _ = writeln!(s, "A={a} measures in the Fourier basis; B={b} corrects and decodes");
            for (i, t) in transcripts.iter().enumerate() {
                let _ = writeln!(s, "trial {} (seed {})", i + 1, t.seed.unwrap_or_default());
                let _ = writeln!(s, "  secret     {}", fmt_amps(&t.secret));
                let _ = writeln!(
                    s,
                    "  outcomes a {}  p={}",
                    t.outcomes_a,
                    format_fixed(t.outcome_probability)
                );
                let _ = writeln!(s, "  correction z {}", t.correction_z);
                let _ = writeln!(s, "  recovered  {}", fmt_amps(&t.recovered));
                let _ = writeln!(s, "  fidelity   {}", format_fixed(t.fidelity));
            }
            let _ = writeln!(
                s,
                "{}: {} of {} trials recovered the secret",
                if passed { "PASS" } else { "FAIL" },
                transcripts.iter().filter(|t| t.fidelity >= 1.0 - TOLERANCE).count(),
                transcripts.len()
            );
            s
        }
    };
    Ok(Report {
        body,
        warnings,
        passed,
    })
}

fn verdict_line(v: &SubsetVerdict) -> String {
    let head = format!(
        "A={} B={} rank(G_B)={}/{} {}",
        v.subset_a,
        v.subset_b,
        v.rank_gb,
        v.k,
        if v.pass { "PASS" } else { "FAIL" }
    );
    let tuple = |x: &[u32]| {
        let parts: Vec<String> = x.iter().map(u32::to_string).collect();
        format!("({})", parts.join(","))
    };
    match &v.evidence {
        Evidence::Recovered {
            trials,
            min_fidelity,
            failure,
        } => {
            let mut s = format!(
                "{head} recovered in {trials} runs, min fidelity {}",
                format_fixed(*min_fidelity)
            );
            if let Some(f) = failure {
                let _ = write!(s, " ({f})");
            }
            s
        }
        Evidence::Collision {
            x1,
            x2,
            b_word,
            overlap,
            ..
        } => format!(
            "{head} collision x1={} x2={} -> B word {}, post-measurement overlap {}",
            tuple(x1),
            tuple(x2),
            tuple(b_word),
            format_fixed(*overlap)
        ),
    }
}

fn verify(cli: &Cli, ctx: &Context) -> Result<Report, CliError> {
    let code = &ctx.code;
    let trials = cli.trials.map_or(DEFAULT_VERIFY_TRIALS, |t| t as usize);
    let verdicts = match subset_a(cli, code)? {
        Some(a) => {
            let mut rng = seeded_rng(cli.seed);
            vec![verify_theorem1(code, &a, trials, &ctx.budget, &mut rng)?]
        }
        None => verify_all(code, trials, cli.seed, &ctx.budget)?,
    };
    let passed = verdicts.iter().all(|v| v.pass);
    let d = code.min_distance(&ctx.budget)?;
    let mds = d == code.n() - code.k() + 1;
    let boundary: Vec<&SubsetVerdict> = verdicts
        .iter()
        .filter(|v| v.subset_b.len() == code.k())
        .collect();

    let body = match cli.format {
        Format::Json => json_body(&json!({
            "verdicts": verdicts,
            "mds": mds,
            "pass": passed,
        })),
        Format::Text => {
            let mut s = String::new();
            for v in &verdicts {
                let _ = writeln!(s, "{}", verdict_line(v));
            }
            if mds && !boundary.is_empty() {
                let recovered = boundary.iter().filter(|v| v.rank_gb == v.k).count();
                let _ = writeln!(
                    s,
                    "MDS boundary |B| = k = {}: {recovered} of {} subsets assisted",
                    code.k(),
                    boundary.len()
                );
            }
            let _ = writeln!(
                s,
                "{}: {} of {} subsets verified",
                if passed { "PASS" } else { "FAIL" },
                verdicts.iter().filter(|v| v.pass).count(),
                verdicts.len()
            );
            s
        }
    };
    Ok(Report {
        body,
        warnings: Vec::new(),
        passed,
    })
}
