//! The built files: a line-oriented manifest and a tab-separated symbol file.

use std::fmt::Write as _;
use std::io::{self, BufRead, Write};

use seqent::construct::{DenseManifest, LogMManifest, WindRecord};
use seqent::{Int, Symbol, Trajectory};

use crate::config::{hash, BuildConfig, FORMAT};

pub const MANIFEST: &str = "manifest.txt";
pub const SYMBOLS: &str = "symbols.tsv";

fn list<T: ToString>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn wind<I: Int>(w: &WindRecord<I>) -> String {
    format!(
        "start={} len={} from=a{} to=a{} jump=a{}>a-{}",
        w.start, w.plan.len, w.plan.from, w.plan.to, w.plan.jump.0, w.plan.jump.1
    )
}

fn log_m<I: Int>(out: &mut String, man: &LogMManifest<I>) {
    writeln!(out, "m: {}", man.m).unwrap();
    writeln!(out, "blocks: {}", man.blocks.len()).unwrap();
    for (b, sched) in man.blocks.iter().zip(&man.schedule.blocks) {
        let k = b.k;
        writeln!(out, "block {k}: start={} end={} og_end={}", b.start, b.end, b.outer_gap.end()).unwrap();
        writeln!(out, "  N({k}): {}", list(&b.times)).unwrap();
        writeln!(out, "  schedule winds: {}", list(&sched.winds)).unwrap();
        writeln!(out, "  schedule inner_gaps: {}", list(&sched.inner_gaps)).unwrap();
        writeln!(out, "  schedule outer_gap: {}", sched.outer_gap).unwrap();
        for p in &b.pieces {
            writeln!(out, "  P({k},{}): start={} s={}", p.l, p.start, list(&p.s)).unwrap();
            for (i, w) in p.winds.iter().enumerate() {
                writeln!(out, "    W{}: {}", i + 1, wind(w)).unwrap();
            }
        }
        for (l, g) in b.inner_gaps.iter().enumerate() {
            writeln!(out, "  IG({k},{}): {}", l + 1, wind(g)).unwrap();
        }
        writeln!(out, "  OG({k}): {}", wind(&b.outer_gap)).unwrap();
    }
}

fn dense<I: Int>(out: &mut String, man: &DenseManifest<I>) {
    writeln!(out, "blocks: {}", man.blocks.len()).unwrap();
    for b in &man.blocks {
        let n = b.n;
        writeln!(out, "block {n}: start={} end={} eps={}", b.start, b.end, b.eps).unwrap();
        writeln!(out, "  times: {}", list(&b.times)).unwrap();
        writeln!(out, "  segments: {}", b.segments.len()).unwrap();
        for (i, s) in b.segments.iter().enumerate() {
            let f: Vec<String> = s.f.iter().map(|j| format!("e{j}")).collect();
            writeln!(out, "  S{}: start={} f={}", i + 1, s.start, f.join(",")).unwrap();
        }
        for g in &b.glue {
            writeln!(out, "  G{}: start={} len={}", g.after, g.start, g.len).unwrap();
        }
    }
}

/// Canonical manifest text; a deterministic function of the config.
pub fn manifest<I: Int>(cfg: &BuildConfig, traj: &Trajectory<I>) -> String {
    let mut out = String::new();
    writeln!(out, "format: {FORMAT}").unwrap();
    writeln!(out, "kind: manifest").unwrap();
    writeln!(out, "config: {}", cfg.canonical()).unwrap();
    writeln!(out, "config_hash: {}", hash(&cfg.canonical())).unwrap();
    writeln!(out, "family: {}", traj.family()).unwrap();
    writeln!(out, "length: {}", traj.len()).unwrap();
    writeln!(out, "horizon: {}", traj.horizon()).unwrap();
    writeln!(out, "symbol_lines: {}", symbol_line_count(cfg, traj)).unwrap();
    if let Some(man) = traj.log_m_manifest() {
        log_m(&mut out, man);
    } else if let Some(man) = traj.dense_manifest() {
        dense(&mut out, man);
    }
    out
}

/// The config line of a manifest.
pub fn manifest_config(text: &str) -> Result<BuildConfig, String> {
    let mut lines = text.lines();
    if lines.next() != Some("format: 1") {
        return Err("manifest does not start with `format: 1`".into());
    }
    for line in lines {
        if let Some(c) = line.strip_prefix("config: ") {
            return BuildConfig::parse(c);
        }
    }
    Err("manifest has no config line".into())
}

fn symbol_line_count<I: Int>(cfg: &BuildConfig, traj: &Trajectory<I>) -> u64 {
    traj.len().to_u64().map_or(cfg.symbol_lines, |n| n.min(cfg.symbol_lines))
}

fn segment<I: Int>(traj: &Trajectory<I>, t: &I) -> String {
    if let Some(s) = traj.log_m_manifest().and_then(|m| m.locate(t)) {
        return s.to_string();
    }
    if let Some(s) = traj.dense_manifest().and_then(|m| m.locate(t)) {
        return s.to_string();
    }
    "-".into()
}

/// `t<TAB>symbol<TAB>segment` for the first `symbol_lines` orbit points.
pub fn write_symbols<I: Int>(cfg: &BuildConfig, traj: &Trajectory<I>, w: &mut impl Write) -> io::Result<()> {
    for t in 0..symbol_line_count(cfg, traj) {
        let t = I::of_u64(t);
        let sym = traj.symbol_at(&t).expect("inside the trajectory");
        writeln!(w, "{t}\t{sym}\t{}", segment(traj, &t))?;
    }
    Ok(())
}

/// Parses a symbol file back into `(t, symbol)` pairs.
pub fn read_symbols<I: Int>(r: impl BufRead) -> Result<Vec<(I, Symbol<I>)>, String> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line.map_err(|e| e.to_string())?;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut cols = line.split('\t');
        let (Some(t), Some(sym)) = (cols.next(), cols.next()) else {
            return Err(format!("line {}: expected t<TAB>symbol<TAB>segment", i + 1));
        };
        let t = I::parse_decimal(t).ok_or_else(|| format!("line {}: bad time {t:?}", i + 1))?;
        let sym = sym.parse().map_err(|e| format!("line {}: {e}", i + 1))?;
        out.push((t, sym));
    }
    Ok(out)
}
