//! Longest independence sets, with exhaustion certificates.
//!
//! Every candidate set is normalised to contain 0 (if `J` is independent then
//! so is `J - min J`), so level `p` holds sets `{0 < t_1 < ... < t_{p-1}}`.
//! The second element is drawn from the pair universe: for each assignment
//! `(c, d)` of `{0, t}`, `t` must be a difference between an occupancy of `c`
//! and a later one of `d`, or come from a head itinerary.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::independence::certificate::ExhaustionCertificate;
use crate::independence::engine::{decode, encode, Motion, Prepared, Witness};
use crate::intervals::IntervalSet;
use crate::model::{Family, HeadSet, ModelPoint};
use crate::scalar::Int;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Level-wise when the pair universe is small, depth-first otherwise.
    Auto,
    LevelWise,
    DepthFirst,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Auto => "auto",
            Strategy::LevelWise => "level-wise",
            Strategy::DepthFirst => "depth-first",
        })
    }
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    /// Most assignments `k^|J|` a single independence query may enumerate.
    pub cap_assignments: u128,
    /// Most independence queries one search may run.
    pub budget_nodes: u64,
    pub strategy: Strategy,
    /// Largest pair universe searched level-wise under `Auto`.
    pub levelwise_limit: u64,
    /// Largest run-count product spent on one Minkowski difference.
    pub pair_cost_limit: u64,
    /// Only sets whose largest time difference is at most this are searched.
    pub max_span: Option<u64>,
    /// Wall-clock limit; running out counts as exhausting the node budget.
    pub time_limit: Option<Duration>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            cap_assignments: 1 << 24,
            budget_nodes: 5_000_000,
            strategy: Strategy::Auto,
            levelwise_limit: 200_000,
            pair_cost_limit: 4_000_000,
            max_span: None,
            time_limit: None,
        }
    }
}

/// A time set with one realising point per assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependenceWitness<I> {
    pub times: Vec<I>,
    /// `(sigma, point)` sorted by sigma; `sigma[i]` is the tuple index at `times[i]`.
    pub points: Vec<(Vec<usize>, Witness<I>)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<I> {
    Independent(IndependenceWitness<I>),
    Dependent { failing: Vec<usize> },
}

impl<I> Verdict<I> {
    pub fn is_independent(&self) -> bool {
        matches!(self, Verdict::Independent(_))
    }
}

fn assignments(k: usize, len: usize) -> u128 {
    (k as u128).saturating_pow(len as u32)
}

/// Decides whether `times` is an independence set for the prepared tuple.
pub fn check_independence<I: Int>(prep: &Prepared<I>, times: &[I], cap: u128) -> Result<Verdict<I>> {
    let mut times = times.to_vec();
    times.sort();
    times.dedup();
    let k = prep.arity();
    let total = assignments(k, times.len());
    if total > cap {
        return Err(Error::CapExceeded {
            assignments: total,
            cap,
        });
    }
    let mut points = Vec::with_capacity(total as usize);
    if prep.components.iter().all(|c| c.sweeps_fast()) {
        // short windows: one sweep finds every realised word at once
        let realized = prep.realized(&times, true)?;
        for idx in 0..total {
            let sigma = decode(idx, k.max(1), times.len());
            match realized.words.get(&encode(&sigma, prep.base())) {
                Some(w) => points.push((sigma, w.clone())),
                None => return Ok(Verdict::Dependent { failing: sigma }),
            }
        }
    } else {
        for idx in 0..total {
            let sigma = decode(idx, k.max(1), times.len());
            match prep.satisfiable(&times, &sigma) {
                Some(w) => points.push((sigma, w)),
                None => return Ok(Verdict::Dependent { failing: sigma }),
            }
        }
    }
    Ok(Verdict::Independent(IndependenceWitness { times, points }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome<I> {
    /// Length of the longest independence set found (capped).
    pub best: usize,
    pub witness: Option<IndependenceWitness<I>>,
    /// Present when `best < cap`: the search ran out of candidates.
    pub certificate: Option<ExhaustionCertificate<I>>,
    pub nodes: u64,
}

/// Pair universe: an interval set of `t >= 1` containing every `t` with
/// `{0, t}` independent.
pub fn pair_universe<I: Int>(prep: &Prepared<I>, cfg: &SearchConfig) -> IntervalSet<I> {
    let span = search_span(prep, cfg);
    let mut universe = IntervalSet::range(I::one(), span.clone() + I::one());
    let k = prep.arity();
    // same-class pairs first: they tend to be the smallest sets
    let mut pairs: Vec<(usize, usize)> = (0..k).map(|c| (c, c)).collect();
    pairs.extend((0..k).flat_map(|c| (0..k).filter(move |&d| d != c).map(move |d| (c, d))));
    for (c, d) in pairs {
        if universe.is_empty() {
            break;
        }
        if let Some(r) = pair_differences(prep, c, d, cfg.pair_cost_limit) {
            universe = universe.intersect(&r);
        }
    }
    universe
}

/// `{t > 0 : some point is in class c at 0 and class d at t}`, or `None` when
/// that set is unbounded or too costly to enumerate.
fn pair_differences<I: Int>(prep: &Prepared<I>, c: usize, d: usize, limit: u64) -> Option<IntervalSet<I>> {
    let mut out = IntervalSet::empty();
    for comp in &prep.components {
        match &comp.motion {
            Motion::Orbit => {}
            Motion::Fixed => {
                if prep.point_masks(comp).iter().any(|(m, _)| m & 1 << c != 0 && m & 1 << d != 0) {
                    return None;
                }
                continue;
            }
            Motion::Collapse { center, into, point } => {
                let zero = ModelPoint::Head(center.clone());
                let masks = prep.point_masks(comp);
                if masks.iter().any(|(m, p)| *p == zero && m & 1 << c != 0 && m & 1 << d != 0) {
                    return None;
                }
                if masks.iter().any(|(m, p)| *p != zero && m & 1 << c != 0) {
                    // the collapsed point sits in class d at time t - 1
                    let ModelPoint::Orbit(s0) = point else {
                        return None;
                    };
                    out = out.union(&prep.components[*into].occupancy(d).shift(&(I::one() - s0.clone())));
                }
                continue;
            }
        }
        let (oc, od) = (comp.occupancy(c), comp.occupancy(d));
        if (oc.run_count() as u64).saturating_mul(od.run_count() as u64) > limit {
            return None;
        }
        out = out.union(&od.minkowski_difference(oc));
        if comp.heads {
            let (hc, hd) = (&comp.classes[c].heads, &comp.classes[d].heads);
            match comp.family {
                Family::LogM { .. } => match (hc, hd) {
                    (HeadSet::Nothing, _) | (_, HeadSet::Nothing) => {}
                    (HeadSet::Index(a), HeadSet::Index(b)) => {
                        out = out.union(&IntervalSet::point(b.clone() - a.clone()));
                    }
                    _ => return None,
                },
                Family::LogInfty => {
                    let shared = match (hc, hd) {
                        (HeadSet::Fixed(a), HeadSet::Fixed(b)) => a == b,
                        (HeadSet::Nothing, _) | (_, HeadSet::Nothing) => false,
                        _ => true,
                    };
                    if shared {
                        return None;
                    }
                }
            }
        }
    }
    Some(out.clip(&I::one(), &prep.span()))
}

/// Largest time difference searched.
pub fn search_span<I: Int>(prep: &Prepared<I>, cfg: &SearchConfig) -> I {
    let span = prep.span();
    match cfg.max_span {
        Some(limit) if I::of_u64(limit) < span => I::of_u64(limit),
        _ => span,
    }
}

struct Searcher<'a, I> {
    prep: &'a Prepared<I>,
    cfg: &'a SearchConfig,
    nodes: u64,
    pair_memo: HashMap<I, bool>,
    started: Instant,
}

impl<'a, I: Int> Searcher<'a, I> {
    fn independent(&mut self, times: &[I]) -> Result<bool> {
        self.nodes += 1;
        let late = self.cfg.time_limit.is_some_and(|l| self.started.elapsed() > l);
        if self.nodes > self.cfg.budget_nodes || late {
            return Err(Error::ResourceBudgetExceeded { nodes: self.nodes - 1 });
        }
        Ok(check_independence(self.prep, times, self.cfg.cap_assignments)?.is_independent())
    }

    fn pair(&mut self, t: &I) -> Result<bool> {
        if let Some(&v) = self.pair_memo.get(t) {
            return Ok(v);
        }
        let v = self.independent(&[I::zero(), t.clone()])?;
        self.pair_memo.insert(t.clone(), v);
        Ok(v)
    }
}

/// Searches for the longest independence set up to `cap`.
pub fn search<I: Int>(
    prep: &Prepared<I>,
    cap: usize,
    cfg: &SearchConfig,
    labels: &[String],
) -> Result<SearchOutcome<I>> {
    assert!(cap >= 1, "cap must be positive");
    let mut s = Searcher {
        prep,
        cfg,
        nodes: 0,
        pair_memo: HashMap::new(),
        started: Instant::now(),
    };
    let universe = pair_universe(prep, cfg);
    let size = universe.measure();
    let strategy = match cfg.strategy {
        Strategy::Auto => {
            if size <= I::of_u64(cfg.levelwise_limit) {
                Strategy::LevelWise
            } else {
                Strategy::DepthFirst
            }
        }
        other => other,
    };
    let (frontier, best_set) = match strategy {
        Strategy::LevelWise => level_wise(&mut s, &universe, cap)?,
        _ => depth_first(&mut s, &universe, cap)?,
    };
    let best = best_set.as_ref().map_or(0, Vec::len);
    let witness = match &best_set {
        Some(times) => match check_independence(prep, times, cfg.cap_assignments)? {
            Verdict::Independent(w) => Some(w),
            Verdict::Dependent { .. } => unreachable!("search only keeps independent sets"),
        },
        None => None,
    };
    let certificate = (best < cap).then(|| ExhaustionCertificate {
        target: cap,
        span: search_span(prep, cfg),
        tuple: labels.to_vec(),
        strategy,
        universe: size,
        frontier: frontier.clone(),
        died_at: frontier.iter().position(|&n| n == 0).map_or(frontier.len() + 1, |p| p + 1),
    });
    Ok(SearchOutcome {
        best,
        witness,
        certificate,
        nodes: s.nodes,
    })
}

type Found<I> = (Vec<u64>, Option<Vec<I>>);

fn level_wise<I: Int>(s: &mut Searcher<'_, I>, universe: &IntervalSet<I>, cap: usize) -> Result<Found<I>> {
    let mut frontier_sizes = Vec::new();
    if !s.independent(&[I::zero()])? {
        return Ok((vec![0], None));
    }
    frontier_sizes.push(1);
    let mut best = Some(vec![I::zero()]);
    if cap == 1 {
        return Ok((frontier_sizes, best));
    }
    let mut pairs: Vec<I> = Vec::new();
    for t in universe.points() {
        if s.pair(&t)? {
            pairs.push(t);
        }
    }
    frontier_sizes.push(pairs.len() as u64);
    if pairs.is_empty() {
        return Ok((frontier_sizes, best));
    }
    best = Some(vec![I::zero(), pairs[0].clone()]);
    let pair_set: HashSet<I> = pairs.iter().cloned().collect();
    let mut level: Vec<Vec<I>> = pairs.iter().map(|t| vec![I::zero(), t.clone()]).collect();
    while level[0].len() < cap {
        let members: HashSet<Vec<I>> = level.iter().cloned().collect();
        let mut next = Vec::new();
        for x in &level {
            let last = x.last().expect("nonempty");
            let from = pairs.partition_point(|t| t <= last);
            for t in &pairs[from..] {
                if !x[1..].iter().all(|xi| pair_set.contains(&(t.clone() - xi.clone()))) {
                    continue;
                }
                let mut y = x.clone();
                y.push(t.clone());
                if !all_subsets_present(&y, &members) {
                    continue;
                }
                if s.independent(&y)? {
                    next.push(y);
                }
            }
        }
        frontier_sizes.push(next.len() as u64);
        if next.is_empty() {
            break;
        }
        best = Some(next[0].clone());
        level = next;
    }
    Ok((frontier_sizes, best))
}

/// Every subset of `y` one element smaller, normalised to start at 0, is in `members`.
fn all_subsets_present<I: Int>(y: &[I], members: &HashSet<Vec<I>>) -> bool {
    // dropping the last element gives the parent, which is present
    for skip in 0..y.len() - 1 {
        let mut sub: Vec<I> = y
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != skip)
            .map(|(_, t)| t.clone())
            .collect();
        let base = sub[0].clone();
        for t in &mut sub {
            *t = t.clone() - base.clone();
        }
        if !members.contains(&sub) {
            return false;
        }
    }
    true
}

fn depth_first<I: Int>(s: &mut Searcher<'_, I>, universe: &IntervalSet<I>, cap: usize) -> Result<Found<I>> {
    let mut counts = vec![0u64; cap];
    if !s.independent(&[I::zero()])? {
        return Ok((vec![0], None));
    }
    counts[0] = 1;
    let mut best = vec![I::zero()];
    let mut current = vec![I::zero()];
    dfs(s, universe, cap, &mut current, &mut counts, &mut best)?;
    // sizes beyond the first empty level carry no information
    let cut = counts.iter().position(|&n| n == 0).map_or(counts.len(), |p| p + 1);
    counts.truncate(cut);
    Ok((counts, Some(best)))
}

fn dfs<I: Int>(
    s: &mut Searcher<'_, I>,
    universe: &IntervalSet<I>,
    cap: usize,
    current: &mut Vec<I>,
    counts: &mut [u64],
    best: &mut Vec<I>,
) -> Result<bool> {
    if current.len() == cap {
        return Ok(true);
    }
    let last = current.last().expect("contains 0").clone();
    let span = search_span(s.prep, s.cfg);
    if last >= span {
        return Ok(false);
    }
    let rest = universe.clip(&(last + I::one()), &span);
    for t in rest.points() {
        let mut ok = true;
        for x in current.iter() {
            if !s.pair(&(t.clone() - x.clone()))? {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        current.push(t);
        if current.len() > 2 && !s.independent(current)? {
            current.pop();
            continue;
        }
        counts[current.len() - 1] += 1;
        if current.len() > best.len() {
            *best = current.clone();
        }
        if dfs(s, universe, cap, current, counts, best)? {
            return Ok(true);
        }
        current.pop();
    }
    Ok(false)
}
