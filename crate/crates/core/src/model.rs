//! Point sets, the acting map, and neighbourhood membership.
//!
//! Two families share one representation. The log-m head is the one-point
//! compactification of `i -> i + 1` on the integers; the log-infinity head is
//! a dense set of fixed points. In both, the orbit `x_0, x_1, ...` is stored as
//! maximal runs: an ascending run of head indices, or a constant dense symbol.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::construct::{DenseManifest, LogMManifest};
use crate::error::{Error, Result};
use crate::intervals::IntervalSet;
use crate::scalar::Int;

/// Cutoff `K(r)` for the neighbourhood class `r` of `a_inf`.
pub fn infinity_cutoff(class: u32) -> u64 {
    3 + class as u64
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol<I> {
    /// `a_i`
    Head(I),
    /// `a_inf`
    Infinity,
    /// `e^j`, j >= 1, in the breadth-first dyadic enumeration.
    Dense(u64),
}

impl<I: Int> Symbol<I> {
    pub fn head(i: i64) -> Self {
        Symbol::Head(I::of_i64(i))
    }

    fn belongs_to(&self, family: Family) -> bool {
        matches!(
            (self, family),
            (Symbol::Dense(_), Family::LogInfty) | (Symbol::Head(_) | Symbol::Infinity, Family::LogM { .. })
        )
    }
}

impl<I: Int> fmt::Display for Symbol<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Head(i) => write!(f, "a{i}"),
            Symbol::Infinity => write!(f, "inf"),
            Symbol::Dense(j) => write!(f, "e{j}"),
        }
    }
}

impl<I: Int> FromStr for Symbol<I> {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim();
        if s == "inf" || s == "ainf" || s == "a∞" {
            return Ok(Symbol::Infinity);
        }
        if let Some(rest) = s.strip_prefix('a') {
            return I::parse_decimal(rest)
                .map(Symbol::Head)
                .ok_or_else(|| format!("bad head index in {s:?}"));
        }
        if let Some(rest) = s.strip_prefix('e') {
            return match rest.parse::<u64>() {
                Ok(j) if j >= 1 => Ok(Symbol::Dense(j)),
                _ => Err(format!("bad dense index in {s:?}")),
            };
        }
        Err(format!("unknown symbol {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    LogM { m: u32 },
    LogInfty,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::LogM { m } => write!(f, "log-m(m={m})"),
            Family::LogInfty => write!(f, "log-infty"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelPoint<I> {
    Head(Symbol<I>),
    Orbit(I),
}

impl<I: Int> fmt::Display for ModelPoint<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelPoint::Head(s) => write!(f, "{s}"),
            ModelPoint::Orbit(t) => write!(f, "x{t}"),
        }
    }
}

/// A maximal stretch of the orbit. Head runs ascend by one per step; dense
/// runs repeat one symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run<I> {
    pub start: I,
    pub len: I,
    pub first: Symbol<I>,
}

impl<I: Int> Run<I> {
    pub fn end(&self) -> I {
        self.start.clone() + self.len.clone()
    }

    pub fn symbol_at_offset(&self, offset: &I) -> Symbol<I> {
        match &self.first {
            Symbol::Head(i) => Symbol::Head(i.clone() + offset.clone()),
            other => other.clone(),
        }
    }

    pub fn last_symbol(&self) -> Symbol<I> {
        self.symbol_at_offset(&(self.len.clone() - I::one()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Segmentation<I> {
    LogM(LogMManifest<I>),
    LogInfty(DenseManifest<I>),
    /// Hand-built symbol sequence without a construction manifest.
    Raw,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory<I> {
    family: Family,
    runs: Vec<Run<I>>,
    len: I,
    block_starts: Vec<I>,
    segmentation: Segmentation<I>,
}

impl<I: Int> Trajectory<I> {
    pub(crate) fn from_parts(
        family: Family,
        runs: Vec<Run<I>>,
        block_starts: Vec<I>,
        segmentation: Segmentation<I>,
    ) -> Self {
        let len = runs.last().map(Run::end).unwrap_or_else(I::zero);
        Trajectory {
            family,
            runs,
            len,
            block_starts,
            segmentation,
        }
    }

    /// Builds a trajectory from an explicit symbol list, merging ascending head
    /// stretches and repeated dense symbols into runs. `block_starts[k-1]` is
    /// the threshold used by level-`k` neighbourhoods of finite centres.
    pub fn from_symbols(family: Family, symbols: &[Symbol<I>], block_starts: Vec<I>) -> Result<Self> {
        let mut runs: Vec<Run<I>> = Vec::new();
        for (t, sym) in symbols.iter().enumerate() {
            if !sym.belongs_to(family) {
                return Err(Error::AlphabetMismatch(sym.to_string()));
            }
            push_run(
                &mut runs,
                Run {
                    start: I::of_u64(t as u64),
                    len: I::one(),
                    first: sym.clone(),
                },
            );
        }
        Ok(Self::from_parts(family, runs, block_starts, Segmentation::Raw))
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn runs(&self) -> &[Run<I>] {
        &self.runs
    }

    /// Number of orbit points.
    pub fn len(&self) -> &I {
        &self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len.is_zero()
    }

    /// Last valid orbit index.
    pub fn horizon(&self) -> I {
        self.len.clone() - I::one()
    }

    pub fn segmentation(&self) -> &Segmentation<I> {
        &self.segmentation
    }

    pub fn log_m_manifest(&self) -> Option<&LogMManifest<I>> {
        match &self.segmentation {
            Segmentation::LogM(m) => Some(m),
            _ => None,
        }
    }

    pub fn dense_manifest(&self) -> Option<&DenseManifest<I>> {
        match &self.segmentation {
            Segmentation::LogInfty(m) => Some(m),
            _ => None,
        }
    }

    pub fn built_blocks(&self) -> usize {
        self.block_starts.len()
    }

    /// `tau(k)`: first orbit index of block `k` (1-based).
    pub fn block_start(&self, level: u32) -> Result<&I> {
        if level == 0 {
            return Err(Error::UnknownBlock {
                level,
                built: self.block_starts.len(),
            });
        }
        self.block_starts
            .get(level as usize - 1)
            .ok_or(Error::UnknownBlock {
                level,
                built: self.block_starts.len(),
            })
    }

    fn run_index(&self, t: &I) -> Option<usize> {
        if t.is_negative() || *t >= self.len {
            return None;
        }
        Some(self.runs.partition_point(|r| r.start <= *t) - 1)
    }

    pub fn symbol_at(&self, t: &I) -> Result<Symbol<I>> {
        let idx = self.run_index(t).ok_or_else(|| Error::HorizonExceeded {
            time: t.to_string(),
            horizon: self.horizon().to_string(),
        })?;
        let run = &self.runs[idx];
        Ok(run.symbol_at_offset(&(t.clone() - run.start.clone())))
    }

    /// All symbols; only for small trajectories.
    pub fn symbols(&self) -> Vec<Symbol<I>> {
        let mut out = Vec::new();
        for run in &self.runs {
            let n = run.len.to_usize().expect("small trajectory");
            for o in 0..n {
                out.push(run.symbol_at_offset(&I::of_u64(o as u64)));
            }
        }
        out
    }

    /// The prefix `x_0 .. x_horizon`. Blocks starting after the horizon are
    /// dropped; the manifest is kept for lookups.
    pub fn truncated(&self, horizon: &I) -> Self {
        if *horizon >= self.horizon() {
            return self.clone();
        }
        let end = horizon.clone() + I::one();
        let mut runs = Vec::new();
        for r in &self.runs {
            if r.start >= end {
                break;
            }
            let mut r = r.clone();
            if r.end() > end {
                r.len = end.clone() - r.start.clone();
            }
            runs.push(r);
        }
        let block_starts = self
            .block_starts
            .iter()
            .filter(|s| **s < end)
            .cloned()
            .collect();
        Trajectory::from_parts(self.family, runs, block_starts, self.segmentation.clone())
    }

    /// Orbit indices whose symbol is `sym`, restricted to `t >= from`.
    pub fn hits(&self, sym: &Symbol<I>, from: &I) -> IntervalSet<I> {
        let mut out = Vec::new();
        for r in &self.runs {
            if r.end() <= *from {
                continue;
            }
            match (&r.first, sym) {
                (Symbol::Head(f), Symbol::Head(c)) => {
                    let off = c.clone() - f.clone();
                    if !off.is_negative() && off < r.len {
                        let t = r.start.clone() + off;
                        if t >= *from {
                            out.push((t.clone(), t + I::one()));
                        }
                    }
                }
                (Symbol::Dense(a), Symbol::Dense(b)) if a == b => {
                    let s = if r.start < *from { from.clone() } else { r.start.clone() };
                    out.push((s, r.end()));
                }
                _ => {}
            }
        }
        IntervalSet::from_runs(out)
    }

    /// Orbit indices whose head index has absolute value at least `cutoff`.
    pub fn far_hits(&self, cutoff: &I) -> IntervalSet<I> {
        let mut out = Vec::new();
        for r in &self.runs {
            if let Symbol::Head(f) = &r.first {
                let last = f.clone() + r.len.clone() - I::one();
                // offsets o with f + o <= -cutoff
                let neg_end = -cutoff.clone() - f.clone() + I::one();
                if !neg_end.is_positive() {
                    // nothing
                } else {
                    let e = if neg_end > r.len { r.len.clone() } else { neg_end };
                    out.push((r.start.clone(), r.start.clone() + e));
                }
                // offsets o with f + o >= cutoff
                if last >= *cutoff {
                    let o = cutoff.clone() - f.clone();
                    let o = if o.is_negative() { I::zero() } else { o };
                    out.push((r.start.clone() + o, r.end()));
                }
            }
        }
        IntervalSet::from_runs(out)
    }
}

/// Description of `T^{-preimage} U^level(center)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NeighborhoodSpec<I> {
    pub center: Symbol<I>,
    /// Level `k` for finite or dense centres, class `r` for `a_inf`.
    pub level: u32,
    pub preimage: u32,
}

impl<I: Int> NeighborhoodSpec<I> {
    pub fn new(center: Symbol<I>, level: u32) -> Self {
        NeighborhoodSpec {
            center,
            level,
            preimage: 0,
        }
    }

    pub fn head(i: i64, level: u32) -> Self {
        Self::new(Symbol::head(i), level)
    }

    pub fn infinity(class: u32) -> Self {
        Self::new(Symbol::Infinity, class)
    }

    pub fn dense(j: u64, level: u32) -> Self {
        Self::new(Symbol::Dense(j), level)
    }

    /// One more step of preimage.
    pub fn pulled_back(&self) -> Self {
        NeighborhoodSpec {
            preimage: self.preimage + 1,
            ..self.clone()
        }
    }
}

impl<I: Int> fmt::Display for NeighborhoodSpec<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.preimage > 0 {
            write!(f, "T^-{}", self.preimage)?;
        }
        write!(f, "U{}({})", self.level, self.center)
    }
}

impl<I: Int> FromStr for NeighborhoodSpec<I> {
    type Err = String;

    /// Parses the `Display` form, e.g. `U2(a-1)` or `T^-1U1(inf)`.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim();
        let (preimage, rest) = match s.strip_prefix("T^-") {
            Some(r) => {
                let digits = r.find('U').ok_or_else(|| format!("missing U in {s:?}"))?;
                let p = r[..digits].parse().map_err(|_| format!("bad preimage in {s:?}"))?;
                (p, &r[digits..])
            }
            None => (0, s),
        };
        let inner = rest
            .strip_prefix('U')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| format!("expected U<level>(<symbol>) in {s:?}"))?;
        let (level, center) = inner.split_once('(').ok_or_else(|| format!("missing '(' in {s:?}"))?;
        Ok(NeighborhoodSpec {
            center: center.parse()?,
            level: level.parse().map_err(|_| format!("bad level in {s:?}"))?,
            preimage,
        })
    }
}

/// Head points of a resolved neighbourhood.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HeadSet<I> {
    /// Exactly `a_i`.
    Index(I),
    /// `a_inf` and every `a_i` with `|i + offset| >= cutoff`.
    Tail { cutoff: I, offset: I },
    /// One fixed point of the dense head.
    Fixed(Symbol<I>),
    /// An explicit finite set of head symbols (partition classes).
    Symbols(Vec<Symbol<I>>),
    Nothing,
}

impl<I: Int> HeadSet<I> {
    pub fn contains(&self, sym: &Symbol<I>) -> bool {
        match (self, sym) {
            (HeadSet::Index(i), Symbol::Head(j)) => i == j,
            (HeadSet::Tail { .. }, Symbol::Infinity) => true,
            (HeadSet::Tail { cutoff, offset }, Symbol::Head(j)) => {
                (j.clone() + offset.clone()).abs() >= *cutoff
            }
            (HeadSet::Fixed(a), b) => a == b,
            (HeadSet::Symbols(list), b) => list.contains(b),
            _ => false,
        }
    }
}

/// A neighbourhood resolved against a trajectory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolved<I> {
    pub heads: HeadSet<I>,
    pub orbit: IntervalSet<I>,
}

impl<I: Int> Resolved<I> {
    pub fn contains(&self, p: &ModelPoint<I>) -> bool {
        match p {
            ModelPoint::Head(s) => self.heads.contains(s),
            ModelPoint::Orbit(t) => self.orbit.contains(t),
        }
    }
}

/// Appends `run`, merging it into the previous run when it continues it.
pub(crate) fn push_run<I: Int>(runs: &mut Vec<Run<I>>, run: Run<I>) {
    if run.len.is_zero() {
        return;
    }
    if let Some(last) = runs.last_mut() {
        debug_assert!(last.end() == run.start);
        let continues = match (&last.last_symbol(), &run.first) {
            (Symbol::Head(a), Symbol::Head(b)) => a.clone() + I::one() == *b,
            (Symbol::Dense(a), Symbol::Dense(b)) => a == b,
            _ => false,
        };
        if continues {
            last.len = last.len.clone() + run.len;
            return;
        }
    }
    runs.push(run);
}

/// Image of a head symbol after `t` steps.
pub fn head_step<I: Int>(sym: &Symbol<I>, t: &I) -> Symbol<I> {
    match sym {
        Symbol::Head(i) => Symbol::Head(i.clone() + t.clone()),
        other => other.clone(),
    }
}

pub fn step<I: Int>(p: &ModelPoint<I>, traj: &Trajectory<I>) -> Result<ModelPoint<I>> {
    step_by(p, &I::one(), traj)
}

/// `step^t(p)`.
pub fn step_by<I: Int>(p: &ModelPoint<I>, t: &I, traj: &Trajectory<I>) -> Result<ModelPoint<I>> {
    match p {
        ModelPoint::Head(s) => Ok(ModelPoint::Head(head_step(s, t))),
        ModelPoint::Orbit(s) => {
            let target = s.clone() + t.clone();
            if target > traj.horizon() {
                Err(Error::HorizonExceeded {
                    time: target.to_string(),
                    horizon: traj.horizon().to_string(),
                })
            } else {
                Ok(ModelPoint::Orbit(target))
            }
        }
    }
}

pub fn resolve<I: Int>(nb: &NeighborhoodSpec<I>, traj: &Trajectory<I>) -> Result<Resolved<I>> {
    if !nb.center.belongs_to(traj.family()) {
        return Err(Error::AlphabetMismatch(nb.to_string()));
    }
    let pre = I::of_u64(nb.preimage as u64);
    let (heads, base) = match &nb.center {
        Symbol::Head(c) => {
            let from = traj.block_start(nb.level)?;
            (HeadSet::Index(c.clone() - pre.clone()), traj.hits(&nb.center, from))
        }
        Symbol::Infinity => {
            let cutoff = I::of_u64(infinity_cutoff(nb.level));
            (
                HeadSet::Tail {
                    cutoff: cutoff.clone(),
                    offset: pre.clone(),
                },
                traj.far_hits(&cutoff),
            )
        }
        Symbol::Dense(_) => {
            let from = traj.block_start(nb.level)?;
            (HeadSet::Fixed(nb.center.clone()), traj.hits(&nb.center, from))
        }
    };
    let orbit = if nb.preimage == 0 {
        base
    } else {
        base.shift(&-pre).clip(&I::zero(), &traj.horizon())
    };
    Ok(Resolved { heads, orbit })
}

/// True iff `step^t(p)` lies in `nbs[t]` for every `t` in `times`.
pub fn itinerary_hits<I: Int>(
    p: &ModelPoint<I>,
    nbs: &BTreeMap<I, NeighborhoodSpec<I>>,
    traj: &Trajectory<I>,
) -> Result<bool> {
    for (t, nb) in nbs {
        let q = step_by(p, t, traj)?;
        if !resolve(nb, traj)?.contains(&q) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Trajectory<i64> {
        // a0 a1 a2 a3 a-3 a-2 a-1 a0 | a1 ...
        let syms: Vec<Symbol<i64>> = [0, 1, 2, 3, -3, -2, -1, 0, 1, 2]
            .iter()
            .map(|&i| Symbol::head(i))
            .collect();
        Trajectory::from_symbols(Family::LogM { m: 2 }, &syms, vec![0, 8]).unwrap()
    }

    #[test]
    fn runs_split_only_at_jumps() {
        let t = small();
        assert_eq!(t.runs().len(), 2);
        assert_eq!(t.symbol_at(&4).unwrap(), Symbol::head(-3));
        assert_eq!(t.symbol_at(&9).unwrap(), Symbol::head(2));
        assert!(t.symbol_at(&10).is_err());
    }

    #[test]
    fn step_examples() {
        let t = small();
        let a0 = ModelPoint::Head(Symbol::head(0));
        assert_eq!(step(&a0, &t).unwrap(), ModelPoint::Head(Symbol::head(1)));
        let inf = ModelPoint::Head(Symbol::Infinity);
        assert_eq!(step(&inf, &t).unwrap(), inf);
        assert_eq!(step(&ModelPoint::Orbit(3), &t).unwrap(), ModelPoint::Orbit(4));
        assert!(step(&ModelPoint::Orbit(9), &t).is_err());
    }

    #[test]
    fn resolve_thresholds_and_tail() {
        let t = small();
        let u1 = resolve(&NeighborhoodSpec::head(0, 1), &t).unwrap();
        assert_eq!(u1.orbit.points().collect::<Vec<_>>(), vec![0, 7]);
        let u2 = resolve(&NeighborhoodSpec::head(0, 2), &t).unwrap();
        assert!(u2.orbit.is_empty());
        let inf = resolve(&NeighborhoodSpec::infinity(1), &t).unwrap();
        assert!(inf.orbit.is_empty());
        for j in -3..=3 {
            assert!(!inf.contains(&ModelPoint::Head(Symbol::head(j))));
        }
        assert!(inf.contains(&ModelPoint::Head(Symbol::head(4))));
        assert!(inf.contains(&ModelPoint::Head(Symbol::head(-4))));
        assert!(matches!(
            resolve(&NeighborhoodSpec::head(0, 3), &t),
            Err(Error::UnknownBlock { .. })
        ));
    }

    #[test]
    fn preimage_shifts_orbit_and_head() {
        let t = small();
        let pre = resolve(&NeighborhoodSpec::head(0, 1).pulled_back(), &t).unwrap();
        assert_eq!(pre.orbit.points().collect::<Vec<_>>(), vec![6]);
        assert!(pre.contains(&ModelPoint::Head(Symbol::head(-1))));
    }

    #[test]
    fn symbol_round_trip() {
        for s in ["a0", "a-17", "inf", "e5"] {
            let sym: Symbol<i64> = s.parse().unwrap();
            assert_eq!(sym.to_string(), s);
        }
        assert!("e0".parse::<Symbol<i64>>().is_err());
    }
}
