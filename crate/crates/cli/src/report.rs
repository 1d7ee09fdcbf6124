//! The entropy, flower and replay commands, and report formatting.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use seqent::checks::{CheckReport, CheckVerdict};
use seqent::construct::{build_log_infty, build_log_m, minimal_dense_schedule, minimal_schedule};
use seqent::entropy::{h_star_lower_bound, seq_entropy_estimate, word_count, HStarConfig, PartitionSpec};
use seqent::flower::{compose, cross_petal_check, declared_value, value_calculus, DeclaredFamily, Mode, PetalSystem};
use seqent::independence::{ExhaustionCertificate, Prepared, SearchConfig, Strategy};
use seqent::{BigInt, Family, Int, ModelPoint, NeighborhoodSpec, Symbol, Trajectory};

use crate::config::{hash, Budget, BuildConfig, Built, FORMAT};
use crate::{load, Failure};

/// One line per report for the terminal.
pub fn summary_line(r: &CheckReport) -> String {
    let params: Vec<String> = r
        .params
        .iter()
        .filter(|(k, _)| k != "config")
        .map(|(k, v)| format!("{k}={v}"))
        .collect();
    let mut line = format!("{} {}", r.verdict, r.name);
    if !params.is_empty() {
        write!(line, " {}", params.join(" ")).unwrap();
    }
    if let Some(cx) = &r.counterexample {
        write!(line, " :: {cx}").unwrap();
    } else if r.verdict != CheckVerdict::Pass {
        if let Some(n) = r.notes.last() {
            write!(line, " :: {n}").unwrap();
        }
    }
    line
}

fn e(err: seqent::Error) -> Failure {
    Failure::Usage(err.to_string())
}

fn symbols<I: Int>(spec: &str) -> Result<Vec<Symbol<I>>, Failure> {
    spec.split(',')
        .map(|s| s.trim().parse().map_err(Failure::Usage))
        .collect()
}

pub struct EntropyOpts {
    pub seq: Option<String>,
    pub partition: Option<String>,
    pub window: Option<usize>,
    pub centers: Option<String>,
    pub cap: usize,
    pub depth: u32,
    pub max_span: Option<u64>,
    pub budget: Budget,
}

impl EntropyOpts {
    fn canonical(&self) -> String {
        let opt = |o: &Option<String>| o.clone().unwrap_or_else(|| "default".into());
        format!(
            "seq={} partition={} window={} centers={} cap={} depth={} max_span={} {}",
            opt(&self.seq),
            opt(&self.partition).replace(' ', ""),
            self.window.map_or("default".into(), |w| w.to_string()),
            opt(&self.centers),
            self.cap,
            self.depth,
            self.max_span.map_or("default".into(), |w| w.to_string()),
            self.budget.canonical()
        )
    }
}

fn parse_seq<I: Int>(spec: &str) -> Result<Vec<I>, Failure> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || Failure::Usage(format!("bad sequence {spec:?}"));
    if parts.len() == 3 {
        let start = I::parse_decimal(parts[0]).ok_or_else(bad)?;
        let step = I::parse_decimal(parts[1]).ok_or_else(bad)?;
        let count: u64 = parts[2].parse().map_err(|_| bad())?;
        return Ok((0..count).map(|i| start.clone() + step.clone() * I::of_u64(i)).collect());
    }
    spec.split(',')
        .map(|s| I::parse_decimal(s.trim()).ok_or_else(bad))
        .collect()
}

fn parse_partition<I: Int>(spec: &str) -> Result<PartitionSpec<I>, Failure> {
    let mut classes = Vec::new();
    let mut rest = false;
    for class in spec.split('|').map(str::trim) {
        if class == "rest" {
            rest = true;
        } else {
            classes.push(symbols(class)?);
        }
    }
    PartitionSpec::new(classes, rest).map_err(e)
}

fn default_centers<I: Int>(traj: &Trajectory<I>) -> Vec<Symbol<I>> {
    match traj.family() {
        Family::LogM { m } => (0..m as i64).map(Symbol::head).collect(),
        Family::LogInfty => (1..=traj.built_blocks() as u64 + 1).map(Symbol::Dense).collect(),
    }
}

pub fn cmd_entropy(dir: &Path, opts: &EntropyOpts) -> Result<CheckVerdict, Failure> {
    let (cfg, _, built) = load(dir)?;
    let text = match &built {
        Built::LogM(t) => entropy_text(&cfg, t, opts)?,
        Built::Dense(t) => entropy_text(&cfg, t, opts)?,
    };
    fs::write(dir.join("entropy.txt"), &text)?;
    print!("{text}");
    Ok(CheckVerdict::Pass)
}

fn entropy_text<I: Int>(cfg: &BuildConfig, traj: &Trajectory<I>, opts: &EntropyOpts) -> Result<String, Failure> {
    let mut out = String::new();
    writeln!(out, "format: {FORMAT}").unwrap();
    writeln!(out, "report: entropy").unwrap();
    writeln!(out, "config: {}", hash(&format!("{} {}", cfg.canonical(), opts.canonical()))).unwrap();
    writeln!(out, "horizon: {}", traj.horizon()).unwrap();
    let centers = match &opts.centers {
        Some(c) => symbols(c)?,
        None => default_centers(traj),
    };
    if let Some(seq) = &opts.seq {
        let seq: Vec<I> = parse_seq(seq)?;
        let part = match &opts.partition {
            Some(p) => parse_partition(p)?,
            None => PartitionSpec::singletons(&centers).map_err(e)?,
        };
        let window = opts.window.unwrap_or(seq.len());
        writeln!(out, "sequence: {}", seq.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")).unwrap();
        writeln!(out, "partition: {part}").unwrap();
        writeln!(out, "words: {}", word_count(&seq[..window.min(seq.len())], &part, traj).map_err(e)?).unwrap();
        let est: Vec<f64> = seq_entropy_estimate(&seq, &part, traj, window).map_err(e)?;
        for (n, v) in est.iter().enumerate() {
            writeln!(out, "estimate n={}: {v:.6}", n + 1).unwrap();
        }
    }
    let max_span = match traj.family() {
        Family::LogInfty => opts.max_span.or(Some(64)),
        Family::LogM { .. } => opts.max_span,
    };
    let hcfg = HStarConfig {
        depth: opts.depth,
        search: SearchConfig {
            strategy: Strategy::DepthFirst,
            max_span,
            ..opts.budget.search()
        },
    };
    let bound = h_star_lower_bound::<I, f64>(traj, &centers, opts.cap, &hcfg).map_err(e)?;
    let names: Vec<String> = centers.iter().map(ToString::to_string).collect();
    writeln!(out, "centers: {}", names.join(",")).unwrap();
    writeln!(out, "cap: {}", opts.cap).unwrap();
    let value = if bound.p <= 1 { "0".to_string() } else { format!("log {}", bound.p) };
    writeln!(out, "evidence: {value}").unwrap();
    writeln!(out, "evidence_value: {:.6}", bound.value).unwrap();
    if let Some(t) = &bound.tuple {
        let t: Vec<String> = t.iter().map(ToString::to_string).collect();
        writeln!(out, "evidence_tuple: {}", t.join(",")).unwrap();
    }
    Ok(out)
}

pub struct FlowerOpts {
    pub petals: Vec<String>,
    pub modes: Option<String>,
    pub kmax: u32,
    pub nmax: u32,
    pub cap: usize,
    pub declared_increasing: Option<String>,
    pub budget: Budget,
}

impl FlowerOpts {
    fn canonical(&self) -> String {
        format!(
            "petals={} modes={} kmax={} nmax={} cap={} declared={} {}",
            self.petals.join(","),
            self.modes.as_deref().unwrap_or("default"),
            self.kmax,
            self.nmax,
            self.cap,
            self.declared_increasing.as_deref().unwrap_or("none"),
            self.budget.canonical()
        )
    }
}

fn petal(i: usize, spec: &str, kmax: u32, nmax: u32) -> Result<PetalSystem<BigInt>, Failure> {
    let traj = match spec.split_once(':') {
        Some(("log-m", m)) => {
            let m: u32 = m.parse().map_err(|_| format!("bad petal {spec:?}"))?;
            build_log_m(m, kmax, &minimal_schedule(m, kmax).map_err(e)?).map_err(e)?
        }
        None if spec == "log-infty" => build_log_infty(nmax, &minimal_dense_schedule(nmax)).map_err(e)?,
        _ => return Err(Failure::Usage(format!("bad petal {spec:?} (log-m:<m> or log-infty)"))),
    };
    Ok(PetalSystem::new(format!("p{i}"), traj))
}

fn parse_mode(spec: &str) -> Result<Mode<BigInt>, Failure> {
    let bad = || Failure::Usage(format!("bad mode {spec:?}"));
    match spec.trim() {
        "active" => Ok(Mode::Active),
        "frozen" => Ok(Mode::Frozen),
        s => {
            let mut it = s.split(':');
            if it.next() != Some("collapsed") {
                return Err(bad());
            }
            let into: usize = it.next().and_then(|v| v.parse().ok()).ok_or_else(bad)?;
            let t = it.next().and_then(BigInt::parse_decimal).ok_or_else(bad)?;
            Ok(Mode::Collapsed {
                into,
                point: ModelPoint::Orbit(t),
            })
        }
    }
}

pub fn cmd_flower(out_dir: &Path, opts: &FlowerOpts) -> Result<CheckVerdict, Failure> {
    if opts.kmax == 0 || opts.nmax == 0 || opts.cap == 0 {
        return Err(Failure::Usage("kmax, nmax and cap must be positive".into()));
    }
    let petals = opts
        .petals
        .iter()
        .enumerate()
        .map(|(i, s)| petal(i, s, opts.kmax, opts.nmax))
        .collect::<Result<Vec<_>, _>>()?;
    let mut composite = compose(petals).map_err(e)?;
    if let Some(m) = &opts.modes {
        let modes = m.split(',').map(parse_mode).collect::<Result<Vec<_>, _>>()?;
        composite = composite.with_modes(modes).map_err(e)?;
    }
    let mut out = String::new();
    writeln!(out, "format: {FORMAT}").unwrap();
    writeln!(out, "report: flower").unwrap();
    writeln!(out, "config: {}", hash(&opts.canonical())).unwrap();
    writeln!(out, "horizon: {}", composite.horizon()).unwrap();
    for (i, (spec, mode)) in opts.petals.iter().zip(&composite.modes).enumerate() {
        writeln!(out, "petal p{i}: {spec} value={} mode={mode}", composite.petals[i].value).unwrap();
    }
    writeln!(out, "value: {}", value_calculus(&composite)).unwrap();
    if let Some(ks) = &opts.declared_increasing {
        let ks: Vec<u64> = ks
            .split(',')
            .map(|k| k.trim().parse().map_err(|_| format!("bad declared value {k:?}")))
            .collect::<Result<_, _>>()?;
        if ks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Failure::Usage("declared family must be strictly increasing".into()));
        }
        let v = declared_value(&DeclaredFamily::StrictlyIncreasing(ks.clone()));
        let ks: Vec<String> = ks.iter().map(u64::to_string).collect();
        writeln!(out, "declared: log {},... -> {v}", ks.join(",log ")).unwrap();
    }
    let mut verdict = CheckVerdict::Pass;
    if composite.petal_count() >= 2 {
        let r = cross_petal_check(&composite, opts.cap, None, &opts.budget.search()).map_err(e)?;
        verdict = r.verdict;
        writeln!(out, "cross-petal: {}", summary_line(&r)).unwrap();
        for n in &r.notes {
            writeln!(out, "note: {n}").unwrap();
        }
    }
    fs::create_dir_all(out_dir)?;
    fs::write(out_dir.join("flower.txt"), &out)?;
    print!("{out}");
    Ok(verdict)
}

pub fn cmd_replay(dir: &Path, cert: &Path, budget: &Budget) -> Result<CheckVerdict, Failure> {
    let text = fs::read_to_string(cert).map_err(|err| format!("{}: {err}", cert.display()))?;
    let (_, _, built) = load(dir)?;
    match &built {
        Built::LogM(t) => replay(t, &text, budget),
        Built::Dense(t) => replay(t, &text, budget),
    }
}

fn replay<I: Int>(traj: &Trajectory<I>, text: &str, budget: &Budget) -> Result<CheckVerdict, Failure> {
    let cert = ExhaustionCertificate::<I>::parse(text).map_err(e)?;
    let tuple: Vec<NeighborhoodSpec<I>> = cert
        .tuple
        .iter()
        .map(|s| s.parse().map_err(Failure::Usage))
        .collect::<Result<_, _>>()?;
    let prep = Prepared::new(&tuple, traj).map_err(e)?;
    match cert.replay(&prep, &budget.search()) {
        Ok(true) => {
            println!("replayed: frontier {:?} died at {}", cert.frontier, cert.died_at);
            Ok(CheckVerdict::Pass)
        }
        Ok(false) => {
            println!("replay disagrees with the certificate");
            Ok(CheckVerdict::Fail)
        }
        Err(seqent::Error::ResourceBudgetExceeded { nodes }) => {
            println!("budget exhausted after {nodes} nodes");
            Ok(CheckVerdict::Inconclusive)
        }
        Err(err) => Err(e(err)),
    }
}
