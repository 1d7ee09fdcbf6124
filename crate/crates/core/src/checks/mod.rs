//! Executable checks of the construction's structural properties, each
//! producing a horizon-tagged report.

mod growth;
mod parts;
mod requirements;

use std::fmt;

pub use growth::validate_growth;
pub use parts::{check_distance_uniqueness, check_part_structure, check_shiftability, PartGeometry, ShiftClause};
pub use requirements::{default_r2_jset, verify_r1, verify_r2, verify_section3};

use crate::error::{Error, Result};
use crate::independence::{Component, Prepared};
use crate::model::{NeighborhoodSpec, Symbol, Trajectory};
use crate::scalar::Int;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CheckVerdict {
    Pass,
    Fail,
    /// The resource budget ran out before a verdict; never a refutation.
    Inconclusive,
}

impl fmt::Display for CheckVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckVerdict::Pass => "pass",
            CheckVerdict::Fail => "fail",
            CheckVerdict::Inconclusive => "inconclusive",
        })
    }
}

/// Evidence that a check failed. Values are kept in decimal so reports stay
/// independent of the integer type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Counterexample {
    /// `item` has length `len`, not more than 100 times the `pre` points before it
    /// (or, for the first wind, differs from its required value `pre`).
    Growth { item: String, len: String, pre: String },
    /// Orbit point `t` of a part is (or is not) in `U^1(a_0)` against expectation.
    Membership { k: u32, l: usize, t: String, expected: bool },
    /// A distance between two points of a part that not exactly one pair of
    /// wind endpoints explains.
    UnexplainedDistance { k: u32, l: usize, a: String, b: String },
    /// Two different pairs of points of a part at the same distance.
    SharedDistance { k: u32, l: usize, first: (String, String), second: (String, String) },
    /// Points `s`, `s + t` of `U^1(a_0)` shifted by `m` break `clause`.
    Shift { s: String, t: String, m: String, clause: ShiftClause },
    /// The assignment `sigma` of the tuple at `times` is realised by no point.
    Dependent { tuple: Vec<String>, times: Vec<String>, sigma: Vec<usize>, window: Option<(String, String)> },
    /// An independence set that should not exist.
    Independent { tuple: Vec<String>, times: Vec<String> },
    /// A recorded orbit symbol that the construction does not produce.
    Symbol { t: String, expected: String, found: String },
}

fn join(v: &[String]) -> String {
    v.join(",")
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Counterexample::Growth { item, len, pre } => write!(f, "growth item={item} len={len} pre={pre}"),
            Counterexample::Membership { k, l, t, expected } => {
                write!(f, "membership k={k} l={l} t={t} expected={expected}")
            }
            Counterexample::UnexplainedDistance { k, l, a, b } => {
                write!(f, "unexplained-distance k={k} l={l} a={a} b={b}")
            }
            Counterexample::SharedDistance { k, l, first, second } => write!(
                f,
                "shared-distance k={k} l={l} first={},{} second={},{}",
                first.0, first.1, second.0, second.1
            ),
            Counterexample::Shift { s, t, m, clause } => write!(f, "shift s={s} t={t} m={m} clause={clause}"),
            Counterexample::Dependent {
                tuple,
                times,
                sigma,
                window,
            } => {
                let sigma: Vec<String> = sigma.iter().map(usize::to_string).collect();
                write!(f, "dependent tuple={} times={} sigma={}", tuple.join(" | "), join(times), join(&sigma))?;
                if let Some((lo, hi)) = window {
                    write!(f, " window={lo}..{hi}")?;
                }
                Ok(())
            }
            Counterexample::Independent { tuple, times } => {
                write!(f, "independent tuple={} times={}", tuple.join(" | "), join(times))
            }
            Counterexample::Symbol { t, expected, found } => {
                write!(f, "symbol t={t} expected={expected} found={found}")
            }
        }
    }
}

fn int<I: Int>(s: &str) -> Result<I> {
    I::parse_decimal(s).ok_or_else(|| Error::Parse {
        line: 0,
        msg: format!("not an integer: {s}"),
    })
}

fn ints<I: Int>(v: &[String]) -> Result<Vec<I>> {
    v.iter().map(|s| int(s)).collect()
}

fn tuple_of<I: Int>(labels: &[String]) -> Result<Vec<NeighborhoodSpec<I>>> {
    labels
        .iter()
        .map(|s| s.parse().map_err(|msg| Error::Parse { line: 0, msg }))
        .collect()
}

impl Counterexample {
    /// Re-checks the failure from the trajectory, through different code
    /// paths from the check that produced it where one exists.
    pub fn refails<I: Int>(&self, traj: &Trajectory<I>) -> Result<bool> {
        match self {
            Counterexample::Growth { item, len, pre } => growth::refails(item, &int::<I>(len)?, &int::<I>(pre)?, traj),
            Counterexample::Membership { t, expected, .. } => {
                let is_a0 = traj.symbol_at(&int(t)?)? == Symbol::head(0);
                Ok(is_a0 != *expected)
            }
            Counterexample::UnexplainedDistance { k, l, a, b } => {
                let geo = PartGeometry::new(traj)?;
                let (a, b) = (int::<I>(a)?, int::<I>(b)?);
                let inside = geo.part_of(&a) == Some((*k, *l)) && geo.part_of(&b) == Some((*k, *l));
                Ok(inside && geo.is_a0(&a, traj)? && geo.is_a0(&b, traj)? && geo.explain(*k, &(b - a)).len() != 1)
            }
            Counterexample::SharedDistance { first, second, .. } => {
                let geo = PartGeometry::new(traj)?;
                let pts: Vec<I> = ints(&[first.0.clone(), first.1.clone(), second.0.clone(), second.1.clone()])?;
                for p in &pts {
                    if !geo.is_a0(p, traj)? {
                        return Ok(false);
                    }
                }
                Ok(first != second && pts[1].clone() - pts[0].clone() == pts[3].clone() - pts[2].clone())
            }
            Counterexample::Shift { s, t, m, clause } => {
                let geo = PartGeometry::new(traj)?;
                let (s, t, m) = (int::<I>(s)?, int::<I>(t)?, int::<I>(m)?);
                let pts = [
                    s.clone(),
                    s.clone() + t.clone(),
                    s.clone() + m.clone(),
                    s.clone() + t.clone() + m.clone(),
                ];
                for p in &pts {
                    if !geo.is_a0(p, traj)? {
                        return Ok(false);
                    }
                }
                Ok(!geo.clause_holds(*clause, &s, &t, &m))
            }
            Counterexample::Dependent {
                tuple,
                times,
                sigma,
                window,
            } => {
                let times: Vec<I> = ints(times)?;
                let prep = match window {
                    None => Prepared::new(&tuple_of::<I>(tuple)?, traj)?,
                    Some((lo, hi)) => {
                        let classes: Vec<Vec<Symbol<I>>> = tuple_of::<I>(tuple)?
                            .into_iter()
                            .map(|nb| vec![nb.center])
                            .collect();
                        Prepared::single(
                            Component::partition(&classes, traj)
                                .with_window(int(lo)?, int(hi)?)
                                .without_heads(),
                            false,
                        )
                    }
                };
                // the full sweep, not the per-assignment intersection
                Ok(!prep.realized(&times, false)?.contains(sigma))
            }
            Counterexample::Independent { tuple, times } => {
                let prep = Prepared::new(&tuple_of::<I>(tuple)?, traj)?;
                Ok(prep.realized(&ints::<I>(times)?, false)?.is_full())
            }
            Counterexample::Symbol { t, found, .. } => {
                let found: Symbol<I> = found.parse().map_err(|msg| Error::Parse { line: 0, msg })?;
                Ok(traj.symbol_at(&int(t)?)? != found)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub name: String,
    pub params: Vec<(String, String)>,
    pub horizon: String,
    pub verdict: CheckVerdict,
    pub counterexample: Option<Counterexample>,
    pub notes: Vec<String>,
    /// Certificates and other replayable artefacts, in text form.
    pub attachments: Vec<String>,
}

impl CheckReport {
    pub fn new<I: Int>(name: &str, params: Vec<(&str, String)>, horizon: &I) -> Self {
        CheckReport {
            name: name.to_string(),
            params: params.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            horizon: horizon.to_string(),
            verdict: CheckVerdict::Pass,
            counterexample: None,
            notes: Vec::new(),
            attachments: Vec::new(),
        }
    }

    pub fn fail(mut self, cx: Counterexample) -> Self {
        self.verdict = CheckVerdict::Fail;
        self.counterexample = Some(cx);
        self
    }

    pub fn note(mut self, n: impl Into<String>) -> Self {
        self.notes.push(n.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == CheckVerdict::Pass
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "format: 1")?;
        writeln!(f, "check: {}", self.name)?;
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        writeln!(f, "params: {}", params.join(" "))?;
        writeln!(f, "horizon: {}", self.horizon)?;
        writeln!(f, "verdict: {}", self.verdict)?;
        if let Some(cx) = &self.counterexample {
            writeln!(f, "counterexample: {cx}")?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        for a in &self.attachments {
            writeln!(f, "attachment:")?;
            for line in a.lines() {
                writeln!(f, "  {line}")?;
            }
        }
        Ok(())
    }
}

/// Compares recorded `(t, symbol)` lines with the trajectory; the first
/// disagreement is the counterexample.
pub fn check_symbols<I: Int>(
    traj: &Trajectory<I>,
    lines: impl IntoIterator<Item = (I, Symbol<I>)>,
) -> Result<CheckReport> {
    let report = CheckReport::new("symbols", vec![], &traj.horizon());
    let mut n = 0u64;
    for (t, found) in lines {
        let expected = traj.symbol_at(&t)?;
        if expected != found {
            return Ok(report.fail(Counterexample::Symbol {
                t: t.to_string(),
                expected: expected.to_string(),
                found: found.to_string(),
            }));
        }
        n += 1;
    }
    Ok(report.note(format!("{n} recorded symbols agree with the construction")))
}

/// Worst verdict over a set of reports: any fail, else any inconclusive, else pass.
pub fn overall(reports: &[CheckReport]) -> CheckVerdict {
    reports.iter().map(|r| r.verdict).max().unwrap_or(CheckVerdict::Pass)
}
