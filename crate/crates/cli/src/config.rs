//! Run configuration: what to build, and how much the searches may spend.

use std::fmt;
use std::time::Duration;

use seqent::construct::{build_log_infty, build_log_m, minimal_dense_schedule, minimal_schedule};
use seqent::independence::SearchConfig;
use seqent::{BigInt, Int, Trajectory};
use sha2::{Digest, Sha256};

pub const FORMAT: u32 = 1;
pub const BUDGET_ENV: &str = "SEQENT_BUDGET_NODES";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    LogM,
    LogInfty,
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::LogM => "log-m",
            FamilyKind::LogInfty => "log-infty",
        })
    }
}

impl std::str::FromStr for FamilyKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "log-m" => Ok(FamilyKind::LogM),
            "log-infty" | "log-inf" => Ok(FamilyKind::LogInfty),
            _ => Err(format!("unknown family {s:?} (log-m or log-infty)")),
        }
    }
}

/// Everything the built files depend on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildConfig {
    pub family: FamilyKind,
    pub m: u32,
    /// `kmax` for log-m, `nmax` for log-infty.
    pub blocks: u32,
    /// Last orbit index kept; `None` keeps every built block.
    pub horizon: Option<String>,
    pub symbol_lines: u64,
}

impl BuildConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.family == FamilyKind::LogM && self.m < 2 {
            return Err(format!("m must be at least 2, got {}", self.m));
        }
        if self.blocks == 0 {
            return Err("the number of blocks must be positive".into());
        }
        if self.symbol_lines == 0 {
            return Err("the symbol line cap must be positive".into());
        }
        if let Some(h) = &self.horizon {
            if BigInt::parse_decimal(h).is_none_or(|v| v < BigInt::from(0)) {
                return Err(format!("horizon {h:?} is not a nonnegative integer"));
            }
        }
        Ok(())
    }

    /// One line, `key=value` pairs in a fixed order.
    pub fn canonical(&self) -> String {
        let horizon = self.horizon.as_deref().unwrap_or("full");
        match self.family {
            FamilyKind::LogM => format!(
                "family=log-m m={} kmax={} horizon={horizon} symbol_lines={}",
                self.m, self.blocks, self.symbol_lines
            ),
            FamilyKind::LogInfty => format!(
                "family=log-infty nmax={} horizon={horizon} symbol_lines={}",
                self.blocks, self.symbol_lines
            ),
        }
    }

    pub fn parse(line: &str) -> Result<Self, String> {
        let mut cfg = BuildConfig {
            family: FamilyKind::LogM,
            m: 0,
            blocks: 0,
            horizon: None,
            symbol_lines: 0,
        };
        for kv in line.split_whitespace() {
            let (k, v) = kv.split_once('=').ok_or_else(|| format!("bad config item {kv:?}"))?;
            let num = |v: &str| v.parse::<u64>().map_err(|_| format!("bad number in {kv:?}"));
            match k {
                "family" => cfg.family = v.parse()?,
                "m" => cfg.m = num(v)? as u32,
                "kmax" | "nmax" => cfg.blocks = num(v)? as u32,
                "horizon" => cfg.horizon = (v != "full").then(|| v.to_string()),
                "symbol_lines" => cfg.symbol_lines = num(v)?,
                _ => return Err(format!("unknown config key {k:?}")),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

pub fn hash(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// A built trajectory; log-m horizons need big integers, log-infty fits `i64`.
pub enum Built {
    LogM(Trajectory<BigInt>),
    Dense(Trajectory<i64>),
}

fn cut<I: Int>(traj: Trajectory<I>, horizon: &Option<String>) -> Result<Trajectory<I>, String> {
    match horizon {
        None => Ok(traj),
        Some(h) => {
            let h = I::parse_decimal(h).ok_or_else(|| format!("horizon {h} does not fit"))?;
            Ok(traj.truncated(&h))
        }
    }
}

pub fn build(cfg: &BuildConfig) -> Result<Built, String> {
    cfg.validate()?;
    match cfg.family {
        FamilyKind::LogM => {
            let sched = minimal_schedule::<BigInt>(cfg.m, cfg.blocks).map_err(|e| e.to_string())?;
            let traj = build_log_m(cfg.m, cfg.blocks, &sched).map_err(|e| e.to_string())?;
            Ok(Built::LogM(cut(traj, &cfg.horizon)?))
        }
        FamilyKind::LogInfty => {
            let traj = build_log_infty::<i64>(cfg.blocks, &minimal_dense_schedule(cfg.blocks))
                .map_err(|e| e.to_string())?;
            Ok(Built::Dense(cut(traj, &cfg.horizon)?))
        }
    }
}

/// Search limits shared by every suite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Budget {
    pub nodes: u64,
    pub seconds: Option<u64>,
}

impl Budget {
    /// The environment variable, when set, overrides the flag.
    pub fn resolve(flag: u64, seconds: Option<u64>) -> Result<Self, String> {
        let nodes = match std::env::var(BUDGET_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| format!("{BUDGET_ENV}={v:?} is not a node count"))?,
            Err(_) => flag,
        };
        if nodes == 0 {
            return Err("the node budget must be positive".into());
        }
        if seconds == Some(0) {
            return Err("the time limit must be positive".into());
        }
        Ok(Budget { nodes, seconds })
    }

    pub fn canonical(&self) -> String {
        match self.seconds {
            Some(s) => format!("budget_nodes={} time_limit={s}", self.nodes),
            None => format!("budget_nodes={} time_limit=none", self.nodes),
        }
    }

    pub fn search(&self) -> SearchConfig {
        SearchConfig {
            budget_nodes: self.nodes,
            time_limit: self.seconds.map(Duration::from_secs),
            ..SearchConfig::default()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_parses_back() {
        let cfg = BuildConfig {
            family: FamilyKind::LogM,
            m: 3,
            blocks: 2,
            horizon: Some("1000".into()),
            symbol_lines: 50,
        };
        assert_eq!(BuildConfig::parse(&cfg.canonical()).unwrap(), cfg);
        let dense = BuildConfig {
            family: FamilyKind::LogInfty,
            m: 0,
            blocks: 2,
            horizon: None,
            symbol_lines: 10,
        };
        assert_eq!(BuildConfig::parse(&dense.canonical()).unwrap(), dense);
    }

    #[test]
    fn nonpositive_bounds_are_rejected() {
        assert!(BuildConfig::parse("family=log-m m=1 kmax=2 horizon=full symbol_lines=5").is_err());
        assert!(BuildConfig::parse("family=log-m m=2 kmax=0 horizon=full symbol_lines=5").is_err());
        assert!(BuildConfig::parse("family=log-m m=2 kmax=2 horizon=-4 symbol_lines=5").is_err());
    }
}
