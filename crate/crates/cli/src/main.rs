mod artifacts;
mod config;
mod report;
mod verify;

use std::fs;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use seqent::checks::{check_symbols, overall, CheckReport, CheckVerdict};
use seqent::Int;

use crate::config::{build, hash, Budget, BuildConfig, Built, FamilyKind};
use crate::verify::{Suite, VerifyOpts};

/// Exit codes: 0 all pass, 1 a check failed, 2 bad input, 3 budget exhausted.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
}

impl From<String> for Failure {
    fn from(s: String) -> Self {
        Failure::Usage(s)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

#[derive(Parser)]
#[command(name = "seqent", version, about = "Build and verify finite models with prescribed sequence entropy")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Clone)]
struct BudgetArgs {
    /// Most independence queries one search may run (overridden by SEQENT_BUDGET_NODES).
    #[arg(long, default_value_t = 5_000_000)]
    budget_nodes: u64,
    /// Wall-clock limit per search, in seconds.
    #[arg(long)]
    time_limit: Option<u64>,
}

impl BudgetArgs {
    fn resolve(&self) -> Result<Budget, String> {
        Budget::resolve(self.budget_nodes, self.time_limit)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build a trajectory and write its manifest and symbol file.
    Build {
        #[arg(long, default_value = "log-m")]
        family: FamilyKind,
        #[arg(long, default_value_t = 2)]
        m: u32,
        /// Blocks of the log-m trajectory.
        #[arg(long, default_value_t = 3)]
        kmax: u32,
        /// Blocks of the log-infty trajectory.
        #[arg(long, default_value_t = 2)]
        nmax: u32,
        /// Keep orbit indices up to this one only.
        #[arg(long)]
        horizon: Option<String>,
        /// Most lines written to the symbol file.
        #[arg(long, default_value_t = 100_000)]
        symbol_lines: u64,
        #[arg(long, short, default_value = "out")]
        out: PathBuf,
    },
    /// Check the built files against the construction and run verification suites.
    Verify {
        #[arg(long, short, default_value = "out")]
        dir: PathBuf,
        /// Comma-separated suites, or `all` for every suite of the family.
        #[arg(long, default_value = "all")]
        suite: String,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long, default_value_t = 1 << 24)]
        cap_assignments: u128,
        /// Length of the independence set R2 rules out.
        #[arg(long, default_value_t = 5)]
        r2_target: usize,
        /// Comma-separated centres for R2, e.g. `a2,a-2,inf`.
        #[arg(long)]
        r2_j: Option<String>,
        /// Shiftability runs up to the end of this block.
        #[arg(long, default_value_t = 2)]
        shift_block: u32,
    },
    /// Word counts, entropy estimates and evidence bounds.
    Entropy {
        #[arg(long, short, default_value = "out")]
        dir: PathBuf,
        /// Comma-separated times, or `start:step:count`.
        #[arg(long)]
        seq: Option<String>,
        /// Classes separated by `|`, symbols in a class by `,`; `rest` adds the complement.
        #[arg(long)]
        partition: Option<String>,
        /// Estimates for prefixes of length 1..=window (default: the whole sequence).
        #[arg(long)]
        window: Option<usize>,
        /// Comma-separated centres for the evidence bound.
        #[arg(long)]
        centers: Option<String>,
        #[arg(long, default_value_t = 3)]
        cap: usize,
        #[arg(long, default_value_t = 1)]
        depth: u32,
        /// Largest time difference searched (default 64 for log-infty, unbounded for log-m).
        #[arg(long)]
        max_span: Option<u64>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Compose petals at a common point; report the value calculus and cross-petal checks.
    Flower {
        /// Petal families, e.g. `log-m:2`, `log-m:3`, `log-infty`.
        #[arg(long = "petal", required = true)]
        petals: Vec<String>,
        /// Comma-separated modes: `active`, `frozen`, `collapsed:<petal>:<t>`.
        #[arg(long)]
        modes: Option<String>,
        #[arg(long, default_value_t = 2)]
        kmax: u32,
        #[arg(long, default_value_t = 2)]
        nmax: u32,
        #[arg(long, default_value_t = 5)]
        cap: usize,
        /// Also report the symbolic supremum of a strictly increasing family `k1,k2,...`.
        #[arg(long)]
        declared_increasing: Option<String>,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long, short, default_value = "out")]
        out: PathBuf,
    },
    /// Re-run the search behind an exhaustion certificate.
    Replay {
        #[arg(long, short, default_value = "out")]
        dir: PathBuf,
        certificate: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Command::Build {
            family,
            m,
            kmax,
            nmax,
            horizon,
            symbol_lines,
            out,
        } => {
            let cfg = BuildConfig {
                family,
                m: if family == FamilyKind::LogM { m } else { 0 },
                blocks: if family == FamilyKind::LogM { kmax } else { nmax },
                horizon,
                symbol_lines,
            };
            cmd_build(&cfg, &out).map(|_| CheckVerdict::Pass)
        }
        Command::Verify {
            dir,
            suite,
            budget,
            cap_assignments,
            r2_target,
            r2_j,
            shift_block,
        } => (|| {
            let opts = VerifyOpts {
                budget: budget.resolve()?,
                cap_assignments,
                r2_target,
                r2_j: r2_j.map(|s| s.split(',').map(|x| x.trim().to_string()).collect()),
                shift_block,
            };
            cmd_verify(&dir, &suite, &opts)
        })(),
        Command::Entropy {
            dir,
            seq,
            partition,
            window,
            centers,
            cap,
            depth,
            max_span,
            budget,
        } => (|| {
            let opts = report::EntropyOpts {
                seq,
                partition,
                window,
                centers,
                cap,
                depth,
                max_span,
                budget: budget.resolve()?,
            };
            report::cmd_entropy(&dir, &opts)
        })(),
        Command::Flower {
            petals,
            modes,
            kmax,
            nmax,
            cap,
            declared_increasing,
            budget,
            out,
        } => (|| {
            let opts = report::FlowerOpts {
                petals,
                modes,
                kmax,
                nmax,
                cap,
                declared_increasing,
                budget: budget.resolve()?,
            };
            report::cmd_flower(&out, &opts)
        })(),
        Command::Replay {
            dir,
            certificate,
            budget,
        } => (|| report::cmd_replay(&dir, &certificate, &budget.resolve()?))(),
    };
    match result {
        Ok(CheckVerdict::Pass) => ExitCode::SUCCESS,
        Ok(CheckVerdict::Fail) => ExitCode::from(1),
        Ok(CheckVerdict::Inconclusive) => ExitCode::from(3),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn cmd_build(cfg: &BuildConfig, out: &Path) -> Result<(), Failure> {
    let built = build(cfg)?;
    fs::create_dir_all(out)?;
    match &built {
        Built::LogM(t) => write_built(cfg, t, out)?,
        Built::Dense(t) => write_built(cfg, t, out)?,
    }
    println!("wrote {} and {} to {}", artifacts::MANIFEST, artifacts::SYMBOLS, out.display());
    Ok(())
}

fn write_built<I: Int>(cfg: &BuildConfig, traj: &seqent::Trajectory<I>, out: &Path) -> Result<(), Failure> {
    fs::write(out.join(artifacts::MANIFEST), artifacts::manifest(cfg, traj))?;
    let mut w = BufWriter::new(fs::File::create(out.join(artifacts::SYMBOLS))?);
    artifacts::write_symbols(cfg, traj, &mut w)?;
    w.flush()?;
    Ok(())
}

/// Reads the manifest in `dir` and rebuilds the trajectory it records.
pub fn load(dir: &Path) -> Result<(BuildConfig, String, Built), Failure> {
    let path = dir.join(artifacts::MANIFEST);
    let text = fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    let cfg = artifacts::manifest_config(&text)?;
    let built = build(&cfg)?;
    Ok((cfg, text, built))
}

fn parse_suites(spec: &str, family: seqent::Family) -> Result<Vec<Suite>, String> {
    if spec == "all" {
        return Ok(Suite::ALL.into_iter().filter(|s| s.applies_to(family)).collect());
    }
    let mut out: Vec<Suite> = spec.split(',').map(|s| s.trim().parse()).collect::<Result<_, _>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

/// The built files agree with a fresh build from their own config.
fn replay_files<I: Int>(
    cfg: &BuildConfig,
    recorded: &str,
    traj: &seqent::Trajectory<I>,
    dir: &Path,
) -> Result<Vec<CheckReport>, Failure> {
    let mut manifest = CheckReport::new("manifest", vec![], &traj.horizon());
    let expected = artifacts::manifest(cfg, traj);
    if let Some((i, (a, b))) = expected
        .lines()
        .zip(recorded.lines())
        .enumerate()
        .find(|(_, (a, b))| a != b)
    {
        manifest.verdict = CheckVerdict::Fail;
        manifest = manifest.note(format!("line {}: expected {a:?}, found {b:?}", i + 1));
    } else if expected.lines().count() != recorded.lines().count() {
        manifest.verdict = CheckVerdict::Fail;
        manifest = manifest.note("manifest length differs from the rebuilt one");
    } else {
        manifest = manifest.note("manifest matches the rebuilt trajectory");
    }
    let path = dir.join(artifacts::SYMBOLS);
    let file = fs::File::open(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    let symbols = match artifacts::read_symbols::<I>(BufReader::new(file)) {
        Ok(lines) => check_symbols(traj, lines).map_err(|e| e.to_string())?,
        Err(msg) => {
            let mut r = CheckReport::new("symbols", vec![], &traj.horizon());
            r.verdict = CheckVerdict::Fail;
            r.note(msg)
        }
    };
    Ok(vec![manifest, symbols])
}

fn cmd_verify(dir: &Path, suites: &str, opts: &VerifyOpts) -> Result<CheckVerdict, Failure> {
    let (cfg, recorded, built) = load(dir)?;
    match &built {
        Built::LogM(t) => verify_built(&cfg, &recorded, t, dir, suites, opts),
        Built::Dense(t) => verify_built(&cfg, &recorded, t, dir, suites, opts),
    }
}

fn verify_built<I: Int>(
    cfg: &BuildConfig,
    recorded: &str,
    traj: &seqent::Trajectory<I>,
    dir: &Path,
    suites: &str,
    opts: &VerifyOpts,
) -> Result<CheckVerdict, Failure> {
    let suites = parse_suites(suites, traj.family())?;
    let config_hash = hash(&format!("{} {}", cfg.canonical(), opts.canonical()));
    let mut groups: Vec<(String, Vec<CheckReport>)> = vec![("replay".into(), replay_files(cfg, recorded, traj, dir)?)];
    // suites run in parallel; results are written in suite order
    let results: Vec<Result<Vec<CheckReport>, String>> = std::thread::scope(|s| {
        let handles: Vec<_> = suites
            .iter()
            .map(|&suite| s.spawn(move || verify::run(suite, traj, opts)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("suite thread")).collect()
    });
    for (suite, r) in suites.iter().zip(results) {
        groups.push((suite.to_string(), r?));
    }
    let reports_dir = dir.join("reports");
    fs::create_dir_all(&reports_dir)?;
    let mut all = Vec::new();
    for (name, mut reports) in groups {
        let mut text = String::new();
        for r in &mut reports {
            r.params.push(("config".into(), config_hash.clone()));
            text.push_str(&r.to_text());
            println!("{}", report::summary_line(r));
        }
        fs::write(reports_dir.join(format!("{name}.txt")), text)?;
        if name == "R2" {
            write_certificates(&reports_dir, &reports)?;
        }
        all.extend(reports);
    }
    let verdict = overall(&all);
    println!("overall: {verdict} ({} reports, config {})", all.len(), &config_hash[..12]);
    Ok(verdict)
}

fn write_certificates(dir: &Path, reports: &[CheckReport]) -> Result<(), Failure> {
    let certs = dir.join("certificates");
    fs::create_dir_all(&certs)?;
    for r in reports {
        let j = r.params.iter().find(|(k, _)| k == "j").map_or("?", |(_, v)| v.as_str());
        for a in &r.attachments {
            fs::write(certs.join(format!("R2_{j}.txt")), a)?;
        }
    }
    Ok(())
}
