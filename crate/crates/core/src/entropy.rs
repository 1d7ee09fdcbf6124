//! Sequence entropy evidence: itinerary word counts over symbol partitions,
//! and lower bounds for the supremum through independence search.

use std::fmt;

use crate::error::{Error, Result};
use crate::independence::{self, Component, Prepared, SearchConfig, Strategy};
use crate::model::{NeighborhoodSpec, Symbol, Trajectory};
use crate::scalar::{ln_count, Int, Real};

/// Disjoint symbol classes; with `rest`, everything else forms one more class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionSpec<I> {
    pub classes: Vec<Vec<Symbol<I>>>,
    pub rest: bool,
}

impl<I: Int> PartitionSpec<I> {
    pub fn new(classes: Vec<Vec<Symbol<I>>>, rest: bool) -> Result<Self> {
        let mut seen: Vec<&Symbol<I>> = Vec::new();
        for s in classes.iter().flatten() {
            if seen.contains(&s) {
                return Err(Error::InvalidPartition(format!("{s} is in two classes")));
            }
            seen.push(s);
        }
        if classes.is_empty() && !rest {
            return Err(Error::InvalidPartition("no classes".into()));
        }
        Ok(PartitionSpec { classes, rest })
    }

    /// One class per symbol, plus the rest.
    pub fn singletons(symbols: &[Symbol<I>]) -> Result<Self> {
        Self::new(symbols.iter().map(|s| vec![s.clone()]).collect(), true)
    }

    pub fn class_count(&self) -> usize {
        self.classes.len() + usize::from(self.rest)
    }

    /// Without a rest class every orbit symbol must be covered.
    fn check_covers(&self, traj: &Trajectory<I>) -> Result<()> {
        if self.rest {
            return Ok(());
        }
        for r in traj.runs() {
            let len = r.len.to_u64().unwrap_or(u64::MAX);
            // a run is covered iff each of its symbols is; runs of one dense
            // symbol repeat it, ascending head runs are checked point by point
            let probes = if matches!(r.first, Symbol::Dense(_)) { 1 } else { len.min(1 << 16) };
            for off in 0..probes {
                let sym = r.symbol_at_offset(&I::of_u64(off));
                if !self.classes.iter().any(|c| c.contains(&sym)) {
                    return Err(Error::InvalidPartition(format!("{sym} is in no class")));
                }
            }
        }
        Ok(())
    }

    fn prepared(&self, traj: &Trajectory<I>) -> Result<Prepared<I>> {
        self.check_covers(traj)?;
        Ok(Prepared::single(Component::partition(&self.classes, traj), self.rest))
    }
}

impl<I: Int> fmt::Display for PartitionSpec<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .classes
            .iter()
            .map(|c| c.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
            .collect();
        if self.rest {
            parts.push("rest".into());
        }
        write!(f, "{}", parts.join(" | "))
    }
}

fn check_sequence<I: Int>(seq: &[I], traj: &Trajectory<I>) -> Result<()> {
    if seq.first().is_some_and(|a| a.is_negative()) || seq.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidPartition(
            "time sequence must be nonnegative and strictly increasing".into(),
        ));
    }
    if let Some(last) = seq.last() {
        if *last > traj.horizon() {
            return Err(Error::HorizonExceeded {
                time: last.to_string(),
                horizon: traj.horizon().to_string(),
            });
        }
    }
    Ok(())
}

/// Number of distinct class words `(class of step^{a_i}(p))_i` over all model
/// points `p` whose itinerary stays within the horizon.
pub fn word_count<I: Int>(seq: &[I], part: &PartitionSpec<I>, traj: &Trajectory<I>) -> Result<u128> {
    check_sequence(seq, traj)?;
    let prep = part.prepared(traj)?;
    Ok(prep.realized(seq, false)?.words.len() as u128)
}

/// `(1/n) log word_count(a_0 .. a_{n-1})` for `n = 1 ..= window`.
pub fn seq_entropy_estimate<I: Int, F: Real>(
    seq: &[I],
    part: &PartitionSpec<I>,
    traj: &Trajectory<I>,
    window: usize,
) -> Result<Vec<F>> {
    if window > seq.len() {
        return Err(Error::InvalidPartition(format!(
            "window {window} is longer than the sequence ({})",
            seq.len()
        )));
    }
    check_sequence(&seq[..window], traj)?;
    let prep = part.prepared(traj)?;
    (1..=window)
        .map(|n| {
            let count = prep.realized(&seq[..n], false)?.words.len() as u128;
            Ok(ln_count::<F>(count) / F::from_usize(n).expect("small"))
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct HStarConfig {
    /// Neighbourhood levels `1 ..= depth` are tested.
    pub depth: u32,
    pub search: SearchConfig,
}

impl Default for HStarConfig {
    fn default() -> Self {
        HStarConfig {
            depth: 1,
            search: SearchConfig {
                strategy: Strategy::DepthFirst,
                ..SearchConfig::default()
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HStarBound<I, F> {
    /// Length of the longest tuple that passed; 1 when none did.
    pub p: usize,
    /// `log p`.
    pub value: F,
    pub tuple: Option<Vec<Symbol<I>>>,
    pub horizon: I,
}

/// Largest `p` such that some `p` of the candidate centres, at every level up
/// to the configured depth, have an independence set of length `cap`.
pub fn h_star_lower_bound<I: Int, F: Real>(
    traj: &Trajectory<I>,
    centers: &[Symbol<I>],
    cap: usize,
    cfg: &HStarConfig,
) -> Result<HStarBound<I, F>> {
    for (i, c) in centers.iter().enumerate() {
        if centers[..i].contains(c) {
            return Err(Error::InvalidPartition(format!("centre {c} repeated")));
        }
    }
    let found = largest_passing(centers.len(), cap, cfg, |subset, level| {
        let tuple: Vec<NeighborhoodSpec<I>> =
            subset.iter().map(|&i| NeighborhoodSpec::new(centers[i].clone(), level)).collect();
        Ok((Prepared::new(&tuple, traj)?, independence::labels(&tuple)))
    })?;
    Ok(match found {
        Some(subset) => HStarBound {
            p: subset.len(),
            value: ln_count(subset.len() as u128),
            tuple: Some(subset.iter().map(|&i| centers[i].clone()).collect()),
            horizon: traj.horizon(),
        },
        None => HStarBound {
            p: 1,
            value: F::zero(),
            tuple: None,
            horizon: traj.horizon(),
        },
    })
}

/// Largest subset of `0..n` (from `n` down to 2, lexicographic within a size)
/// whose prepared tuples reach `cap` at every level up to the depth.
pub(crate) fn largest_passing<I: Int>(
    n: usize,
    cap: usize,
    cfg: &HStarConfig,
    mut prepare: impl FnMut(&[usize], u32) -> Result<(Prepared<I>, Vec<String>)>,
) -> Result<Option<Vec<usize>>> {
    for p in (2..=n).rev() {
        'subset: for subset in subsets(n, p) {
            for level in 1..=cfg.depth {
                let (prep, labels) = prepare(&subset, level)?;
                match independence::search::search(&prep, cap, &cfg.search, &labels) {
                    Ok(out) if out.best >= cap => {}
                    Ok(_) => continue 'subset,
                    // a tuple too wide for the assignment cap cannot be certified either way
                    Err(Error::CapExceeded { .. }) | Err(Error::ResourceBudgetExceeded { .. }) => continue 'subset,
                    Err(e) => return Err(e),
                }
            }
            return Ok(Some(subset));
        }
    }
    Ok(None)
}

/// `p`-subsets of `0..n` in lexicographic order.
fn subsets(n: usize, p: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(p);
    fn rec(start: usize, n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, p, cur, out);
            cur.pop();
        }
    }
    rec(0, n, p, &mut cur, &mut out);
    out
}
