//! Verification suites over a built trajectory.

use std::fmt;
use std::str::FromStr;

use seqent::checks::{
    check_distance_uniqueness, check_part_structure, check_shiftability, default_r2_jset, validate_growth, verify_r1,
    verify_r2, verify_section3, CheckReport,
};
use seqent::{Family, Int, Symbol, Trajectory};

use crate::config::Budget;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Growth,
    Parts,
    Distances,
    Shiftability,
    R1,
    R2,
    Section3,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Growth,
        Suite::Parts,
        Suite::Distances,
        Suite::Shiftability,
        Suite::R1,
        Suite::R2,
        Suite::Section3,
    ];

    pub fn applies_to(self, family: Family) -> bool {
        match family {
            Family::LogM { .. } => self != Suite::Section3,
            Family::LogInfty => self == Suite::Section3,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Growth => "growth",
            Suite::Parts => "parts",
            Suite::Distances => "distances",
            Suite::Shiftability => "shiftability",
            Suite::R1 => "R1",
            Suite::R2 => "R2",
            Suite::Section3 => "section3",
        })
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOpts {
    pub budget: Budget,
    pub cap_assignments: u128,
    pub r2_target: usize,
    /// Centres for R2; the default set when `None`.
    pub r2_j: Option<Vec<String>>,
    /// Shiftability runs up to the end of this block.
    pub shift_block: u32,
}

impl VerifyOpts {
    pub fn canonical(&self) -> String {
        format!(
            "{} cap_assignments={} r2_target={} r2_j={} shift_block={}",
            self.budget.canonical(),
            self.cap_assignments,
            self.r2_target,
            self.r2_j.as_ref().map_or("default".into(), |v| v.join(",")),
            self.shift_block
        )
    }
}

fn e(err: seqent::Error) -> String {
    err.to_string()
}

pub fn run<I: Int>(suite: Suite, traj: &Trajectory<I>, opts: &VerifyOpts) -> Result<Vec<CheckReport>, String> {
    let family = traj.family();
    if !suite.applies_to(family) {
        return Err(format!("suite {suite} does not apply to the {family} family"));
    }
    let blocks = traj.built_blocks() as u32;
    let m = match family {
        Family::LogM { m } => m,
        Family::LogInfty => 0,
    };
    let mut out = Vec::new();
    match suite {
        Suite::Growth => out.push(validate_growth(traj).map_err(e)?),
        Suite::Parts | Suite::Distances => {
            for k in 1..=blocks {
                for l in 1..=(m as usize).pow(k + 1) {
                    out.push(if suite == Suite::Parts {
                        check_part_structure(k, l, traj).map_err(e)?
                    } else {
                        check_distance_uniqueness(k, l, traj).map_err(e)?
                    });
                }
            }
        }
        Suite::Shiftability => {
            let man = traj.log_m_manifest().ok_or("no log-m manifest")?;
            let block = opts.shift_block.min(blocks);
            let end = man.block(block).map_err(e)?.outer_gap.end();
            let horizon = if end > traj.horizon() { traj.horizon() } else { end };
            out.push(check_shiftability(&horizon, traj).map_err(e)?);
        }
        Suite::R1 => {
            for k in 1..=blocks {
                out.push(verify_r1(k, traj, opts.cap_assignments).map_err(e)?);
            }
        }
        Suite::R2 => {
            let jset: Vec<Symbol<I>> = match &opts.r2_j {
                None => default_r2_jset(m),
                Some(v) => v.iter().map(|s| s.parse()).collect::<Result<_, _>>()?,
            };
            let cfg = seqent::independence::SearchConfig {
                cap_assignments: opts.cap_assignments,
                ..opts.budget.search()
            };
            out.extend(verify_r2(&jset, opts.r2_target, traj, &cfg).map_err(e)?);
        }
        Suite::Section3 => {
            for n in 1..=blocks {
                out.push(verify_section3(n, traj, opts.cap_assignments).map_err(e)?);
            }
        }
    }
    Ok(out)
}
