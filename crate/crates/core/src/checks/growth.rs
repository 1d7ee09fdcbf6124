use crate::checks::{CheckReport, Counterexample};
use crate::construct::{least_dominating, LogMManifest};
use crate::error::{Error, Result};
use crate::model::Trajectory;
use crate::scalar::Int;

/// Every length the domination rule constrains, with the number of points
/// before it: the winds of each block's first piece and every gap.
fn items<I: Int>(man: &LogMManifest<I>) -> Vec<(String, I, I)> {
    let mut out = Vec::new();
    for b in &man.blocks {
        let k = b.k;
        for (i, w) in b.pieces[0].winds.iter().enumerate() {
            out.push((format!("W({k},{})", i + 1), w.plan.len.clone(), w.start.clone()));
        }
        for (l, g) in b.inner_gaps.iter().enumerate() {
            out.push((format!("IG({k},{})", l + 1), g.plan.len.clone(), g.start.clone()));
        }
        out.push((format!("OG({k})"), b.outer_gap.plan.len.clone(), b.outer_gap.start.clone()));
    }
    out
}

fn manifest<I: Int>(traj: &Trajectory<I>) -> Result<&LogMManifest<I>> {
    traj.log_m_manifest()
        .ok_or_else(|| Error::ScheduleInvalid("growth checks need a log-m trajectory".into()))
}

fn base_wind<I: Int>(m: u32) -> I {
    I::of_u64(3 * m as u64 + 2)
}

/// Checks the base wind `w_1^1 = 3m + 2` and that every constrained length
/// strictly exceeds 100 times the number of points before it.
pub fn validate_growth<I: Int>(traj: &Trajectory<I>) -> Result<CheckReport> {
    let man = manifest(traj)?;
    let report = CheckReport::new("growth", vec![("m", man.m.to_string())], &traj.horizon());
    let Some(first) = man.blocks.first() else {
        return Ok(report.note("no blocks built"));
    };
    let w11 = &first.pieces[0].winds[0].plan.len;
    if *w11 != base_wind::<I>(man.m) {
        return Ok(report.fail(Counterexample::Growth {
            item: "W(1,1)".into(),
            len: w11.to_string(),
            pre: base_wind::<I>(man.m).to_string(),
        }));
    }
    let all = items(man);
    for (item, len, pre) in &all {
        if !dominates(len, pre)? {
            return Ok(report.fail(Counterexample::Growth {
                item: item.clone(),
                len: len.to_string(),
                pre: pre.to_string(),
            }));
        }
    }
    Ok(report.note(format!("{} lengths checked", all.len())))
}

fn dominates<I: Int>(len: &I, pre: &I) -> Result<bool> {
    Ok(*len >= least_dominating(pre)?)
}

/// The recorded item still has these values in the manifest, and they still
/// break the rule.
pub(super) fn refails<I: Int>(item: &str, len: &I, pre: &I, traj: &Trajectory<I>) -> Result<bool> {
    let man = manifest(traj)?;
    if item == "W(1,1)" && *pre == base_wind::<I>(man.m) {
        let actual = &man.block(1)?.pieces[0].winds[0].plan.len;
        return Ok(actual == len && *len != *pre);
    }
    let Some((_, l, p)) = items(man).into_iter().find(|(name, _, _)| name == item) else {
        return Ok(false);
    };
    // compare against the raw inequality rather than the helper
    Ok(l == *len && p == *pre && !(l > p * I::of_u64(100)))
}
