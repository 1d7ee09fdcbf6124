//! The independence requirements: long independence sets for adjacent
//! centres, none of length `L` for far pairs, and one per dense block.

use crate::checks::{CheckReport, CheckVerdict, Counterexample};
use crate::error::{Error, Result};
use crate::independence::{check_independence, labels, search, Component, Prepared, SearchConfig, Strategy, Verdict};
use crate::model::{NeighborhoodSpec, Symbol, Trajectory};
use crate::scalar::Int;

fn strings<I: Int>(v: &[I]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

/// `N(k)` is an independence set for `(U^k(a_0), ..., U^k(a_{m-1}))`.
pub fn verify_r1<I: Int>(k: u32, traj: &Trajectory<I>, cap: u128) -> Result<CheckReport> {
    let man = traj
        .log_m_manifest()
        .ok_or_else(|| Error::ScheduleInvalid("R1 needs a log-m trajectory".into()))?;
    let m = man.m;
    let times = man.block(k)?.times.clone();
    let tuple: Vec<NeighborhoodSpec<I>> = (0..m as i64).map(|i| NeighborhoodSpec::head(i, k)).collect();
    let report = CheckReport::new("R1", vec![("k", k.to_string()), ("m", m.to_string())], &traj.horizon());
    Ok(match check_independence(&Prepared::new(&tuple, traj)?, &times, cap)? {
        Verdict::Independent(w) => report.note(format!(
            "N({k}) = {{{}}} realises all {} assignments",
            strings(&times).join(","),
            w.points.len()
        )),
        Verdict::Dependent { failing } => report.fail(Counterexample::Dependent {
            tuple: labels(&tuple),
            times: strings(&times),
            sigma: failing,
            window: None,
        }),
    })
}

/// `a_{±m}, ..., a_{±(2m+2)}` and `a_inf`.
pub fn default_r2_jset<I: Int>(m: u32) -> Vec<Symbol<I>> {
    let mut out = Vec::new();
    for j in m as i64..=2 * m as i64 + 2 {
        out.push(Symbol::head(j));
        out.push(Symbol::head(-j));
    }
    out.push(Symbol::Infinity);
    out
}

/// For every centre `j`, a level-wise search finds no independence set of
/// length `target` for `(U^1(a_0), U^1(j))`; each search leaves a certificate.
pub fn verify_r2<I: Int>(
    jset: &[Symbol<I>],
    target: usize,
    traj: &Trajectory<I>,
    cfg: &SearchConfig,
) -> Result<Vec<CheckReport>> {
    let m = match traj.family() {
        crate::model::Family::LogM { m } => m,
        _ => return Err(Error::ScheduleInvalid("R2 needs a log-m trajectory".into())),
    };
    let cfg = SearchConfig {
        strategy: Strategy::LevelWise,
        ..cfg.clone()
    };
    let mut out = Vec::with_capacity(jset.len());
    for j in jset {
        let tuple = vec![NeighborhoodSpec::head(0, 1), NeighborhoodSpec::new(j.clone(), 1)];
        let mut report = CheckReport::new(
            "R2",
            vec![("j", j.to_string()), ("L", target.to_string()), ("m", m.to_string())],
            &traj.horizon(),
        );
        let prep = Prepared::new(&tuple, traj)?;
        match search::search(&prep, target, &cfg, &labels(&tuple)) {
            Ok(outcome) => match outcome.certificate {
                Some(cert) => {
                    report = report.note(format!(
                        "longest independence set has length {}; search died at level {} after {} nodes",
                        outcome.best, cert.died_at, outcome.nodes
                    ));
                    report.attachments.push(cert.to_text());
                }
                None => {
                    let times = outcome.witness.map(|w| strings(&w.times)).unwrap_or_default();
                    report = report.fail(Counterexample::Independent {
                        tuple: labels(&tuple),
                        times,
                    });
                }
            },
            Err(Error::ResourceBudgetExceeded { nodes }) => {
                report.verdict = CheckVerdict::Inconclusive;
                report = report.note(format!("budget of {nodes} nodes exhausted"));
            }
            Err(e) => return Err(e),
        }
        out.push(report);
    }
    Ok(out)
}

/// Inside block `n` of the dense trajectory, `{0, t_{n,1}, ..., t_{n,n}}` is
/// an independence set for the classes `{e^1}, ..., {e^{n+1}}`.
pub fn verify_section3<I: Int>(n: u32, traj: &Trajectory<I>, cap: u128) -> Result<CheckReport> {
    let man = traj
        .dense_manifest()
        .ok_or_else(|| Error::ScheduleInvalid("this check needs a log-infinity trajectory".into()))?;
    let b = man.block(n)?;
    let classes: Vec<Vec<Symbol<I>>> = (1..=n as u64 + 1).map(|j| vec![Symbol::Dense(j)]).collect();
    let prep = Prepared::single(
        Component::partition(&classes, traj)
            .with_window(b.start.clone(), b.end.clone())
            .without_heads(),
        false,
    );
    let report = CheckReport::new("section3", vec![("n", n.to_string())], &traj.horizon());
    Ok(match check_independence(&prep, &b.times, cap)? {
        Verdict::Independent(w) => report.note(format!(
            "times {{{}}} realise all {} assignments inside block {n}",
            strings(&b.times).join(","),
            w.points.len()
        )),
        Verdict::Dependent { failing } => report.fail(Counterexample::Dependent {
            tuple: (1..=n as u64 + 1).map(|j| format!("U{n}(e{j})")).collect(),
            times: strings(&b.times),
            sigma: failing,
            window: Some((b.start.to_string(), b.end.to_string())),
        }),
    })
}
