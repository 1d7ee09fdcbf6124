//! Exhaustion certificates: a record of a search that found no independence
//! set of the target length, detailed enough to be replayed.

use std::fmt;

use crate::error::{Error, Result};
use crate::independence::engine::Prepared;
use crate::independence::search::{search, SearchConfig, Strategy};
use crate::scalar::Int;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExhaustionCertificate<I> {
    /// Length that was searched for and not found.
    pub target: usize,
    /// Largest time difference the search considered.
    pub span: I,
    /// Display labels of the tuple members.
    pub tuple: Vec<String>,
    pub strategy: Strategy,
    /// Size of the pair universe.
    pub universe: I,
    /// Number of independent normalised sets found at each length 1, 2, ...
    pub frontier: Vec<u64>,
    /// First length with no independent set.
    pub died_at: usize,
}

impl<I: Int> ExhaustionCertificate<I> {
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut fields = std::collections::HashMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once(':').ok_or_else(|| Error::Parse {
                line: n + 1,
                msg: format!("expected 'key: value', got {line:?}"),
            })?;
            fields.insert(k.trim(), v.trim());
        }
        let get = |k: &str| {
            fields
                .get(k)
                .copied()
                .ok_or_else(|| bad(format!("certificate missing '{k}'")))
        };
        if get("format")? != "1" || get("kind")? != "exhaustion" {
            return Err(bad("unsupported certificate format"));
        }
        let int = |k: &str| -> Result<I> {
            let v = get(k)?;
            I::parse_decimal(v).ok_or_else(|| bad(format!("bad {k}: {v}")))
        };
        let usize_of = |k: &str| -> Result<usize> {
            let v = get(k)?;
            v.parse().map_err(|_| bad(format!("bad {k}: {v}")))
        };
        let strategy = match get("strategy")? {
            "level-wise" => Strategy::LevelWise,
            "depth-first" => Strategy::DepthFirst,
            other => return Err(bad(format!("bad strategy: {other}"))),
        };
        let frontier = get("frontier")?
            .split_whitespace()
            .map(|n| n.parse().map_err(|_| bad(format!("bad frontier entry: {n}"))))
            .collect::<Result<Vec<u64>>>()?;
        Ok(ExhaustionCertificate {
            target: usize_of("target")?,
            span: int("horizon")?,
            tuple: get("tuple")?.split(" | ").map(str::to_string).collect(),
            strategy,
            universe: int("universe")?,
            frontier,
            died_at: usize_of("died_at")?,
        })
    }

    /// Re-runs the search with the recorded strategy and checks that it dies
    /// at the same level with the same frontier.
    pub fn replay(&self, prep: &Prepared<I>, cfg: &SearchConfig) -> Result<bool> {
        let max_span = if self.span < prep.span() {
            self.span.to_u64()
        } else {
            cfg.max_span
        };
        let cfg = SearchConfig {
            strategy: self.strategy,
            max_span,
            ..cfg.clone()
        };
        let outcome = search(prep, self.target, &cfg, &self.tuple)?;
        Ok(outcome.certificate.as_ref() == Some(self))
    }
}

impl<I: Int> fmt::Display for ExhaustionCertificate<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "format: 1")?;
        writeln!(f, "kind: exhaustion")?;
        writeln!(f, "tuple: {}", self.tuple.join(" | "))?;
        writeln!(f, "horizon: {}", self.span)?;
        writeln!(f, "target: {}", self.target)?;
        writeln!(f, "strategy: {}", self.strategy)?;
        writeln!(f, "universe: {}", self.universe)?;
        let frontier: Vec<String> = self.frontier.iter().map(u64::to_string).collect();
        writeln!(f, "frontier: {}", frontier.join(" "))?;
        writeln!(f, "died_at: {}", self.died_at)
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Parse {
        line: 0,
        msg: msg.into(),
    }
}
