//! Realised assignments of a tuple of sets along given times.
//!
//! Orbit starts are swept over elementary cells: the shifted occupancies of
//! every class cut the start window into intervals on which the membership
//! pattern is constant, so one probe per cell suffices however long the cell
//! is. Short windows use a per-time class mask table instead. Head points are
//! handled in closed form.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::intervals::IntervalSet;
use crate::model::{resolve, Family, HeadSet, ModelPoint, NeighborhoodSpec, Resolved, Symbol, Trajectory};
use crate::scalar::Int;

/// Windows at most this long get a mask table.
const MASK_TABLE_LIMIT: u64 = 1 << 22;

/// A realising point, tagged with the component (petal) it lives in.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Witness<I> {
    pub component: usize,
    pub point: ModelPoint<I>,
}

/// How the map acts on a component's points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Motion<I> {
    /// The trajectory's own step.
    Orbit,
    /// Every point is fixed.
    Fixed,
    /// After one step every point except `center` is at `point` of component
    /// `into`, which moves by its own motion from then on.
    Collapse {
        center: Symbol<I>,
        into: usize,
        point: ModelPoint<I>,
    },
}

/// One trajectory with its head, and the classes resolved against it.
#[derive(Debug, Clone)]
pub struct Component<I> {
    pub family: Family,
    pub classes: Vec<Resolved<I>>,
    /// Inclusive range of orbit indices the search may use.
    pub window: (I, I),
    pub heads: bool,
    pub motion: Motion<I>,
    masks: Option<Vec<u64>>,
    /// Window-clipped occupancy per class, then the complement of their union.
    occ: Vec<IntervalSet<I>>,
}

impl<I: Int> Component<I> {
    pub fn new(family: Family, classes: Vec<Resolved<I>>, window: (I, I), heads: bool) -> Self {
        let mut c = Component {
            family,
            classes,
            window,
            heads,
            motion: Motion::Orbit,
            masks: None,
            occ: Vec::new(),
        };
        c.build_masks();
        c
    }

    pub fn resolve(tuple: &[NeighborhoodSpec<I>], traj: &Trajectory<I>) -> Result<Self> {
        let classes = tuple
            .iter()
            .map(|nb| resolve(nb, traj))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(traj.family(), classes, (I::zero(), traj.horizon()), true))
    }

    /// Classes are plain symbol sets (no level threshold).
    pub fn partition(classes: &[Vec<Symbol<I>>], traj: &Trajectory<I>) -> Self {
        let resolved = classes
            .iter()
            .map(|syms| {
                let mut orbit = IntervalSet::empty();
                for s in syms {
                    orbit = orbit.union(&traj.hits(s, &I::zero()));
                }
                Resolved {
                    heads: HeadSet::Symbols(syms.clone()),
                    orbit,
                }
            })
            .collect();
        Self::new(traj.family(), resolved, (I::zero(), traj.horizon()), true)
    }

    pub fn with_window(mut self, lo: I, hi: I) -> Self {
        self.window = (lo, hi);
        self.build_masks();
        self
    }

    pub fn without_heads(mut self) -> Self {
        self.heads = false;
        self
    }

    pub fn with_motion(mut self, motion: Motion<I>) -> Self {
        self.motion = motion;
        self
    }

    /// Membership mask of orbit index `t` (0 outside the window).
    fn orbit_mask(&self, t: &I) -> u64 {
        self.classes
            .iter()
            .enumerate()
            .filter(|(_, c)| c.orbit.contains(t))
            .fold(0u64, |acc, (i, _)| acc | 1 << i)
    }

    fn raw_head_mask(&self, sym: &Symbol<I>) -> u64 {
        self.classes
            .iter()
            .enumerate()
            .filter(|(_, c)| c.heads.contains(sym))
            .fold(0u64, |acc, (i, _)| acc | 1 << i)
    }

    /// Every membership mask a single point of the component can have, with
    /// one such point, leaving out the head point `skip`. Orbit masks are
    /// constant between run endpoints.
    fn raw_point_masks(&self, skip: Option<&Symbol<I>>) -> BTreeMap<u64, ModelPoint<I>> {
        let mut out = BTreeMap::new();
        let (lo, hi) = &self.window;
        if lo <= hi {
            let mut cuts: Vec<I> = vec![lo.clone()];
            for o in &self.occ {
                for (a, b) in o.runs() {
                    cuts.push(a.clone());
                    cuts.push(b.clone());
                }
            }
            cuts.sort();
            cuts.dedup();
            for t in cuts.into_iter().filter(|t| t <= hi) {
                out.entry(self.orbit_mask(&t)).or_insert(ModelPoint::Orbit(t));
            }
        }
        if self.heads {
            for sym in head_candidates(self, &[I::zero()]) {
                if Some(&sym) == skip {
                    continue;
                }
                out.entry(self.raw_head_mask(&sym)).or_insert(ModelPoint::Head(sym));
            }
        }
        out
    }

    fn build_masks(&mut self) {
        self.masks = None;
        let (lo, hi) = &self.window;
        self.occ = self.classes.iter().map(|c| c.orbit.clip(lo, hi)).collect();
        let all = self.occ.iter().fold(IntervalSet::empty(), |acc, o| acc.union(o));
        self.occ.push(all.complement_within(lo, hi));
        if hi < lo || self.classes.len() > 63 {
            return;
        }
        let Some(len) = (hi.clone() - lo.clone() + I::one()).to_u64() else {
            return;
        };
        if len > MASK_TABLE_LIMIT {
            return;
        }
        let mut masks = vec![0u64; len as usize];
        for (c, class) in self.classes.iter().enumerate() {
            for (a, b) in class.orbit.clip(lo, hi).runs() {
                let a = (a.clone() - lo.clone()).to_usize().expect("inside window");
                let b = (b.clone() - lo.clone()).to_usize().expect("inside window");
                for m in &mut masks[a..b] {
                    *m |= 1 << c;
                }
            }
        }
        self.masks = Some(masks);
    }

    /// Whether one sweep of this component is cheap: a mask table, or a
    /// motion whose words are found in closed form.
    pub fn sweeps_fast(&self) -> bool {
        self.masks.is_some() || self.motion != Motion::Orbit
    }

    /// Orbit occupancy of `class` inside the window; `class == classes.len()`
    /// is the set of orbit points in no class.
    pub fn occupancy(&self, class: usize) -> &IntervalSet<I> {
        &self.occ[class]
    }
}

/// Every realised assignment (as a word) with its first realising point.
#[derive(Debug, Clone)]
pub struct Realized<I> {
    pub base: usize,
    pub len: usize,
    pub words: HashMap<u128, Witness<I>>,
}

impl<I: Int> Realized<I> {
    pub fn total(&self) -> u128 {
        (self.base as u128).pow(self.len as u32)
    }

    pub fn is_full(&self) -> bool {
        self.words.len() as u128 == self.total()
    }

    pub fn contains(&self, sigma: &[usize]) -> bool {
        self.words.contains_key(&encode(sigma, self.base))
    }

    fn offer(&mut self, word: u128, w: impl FnOnce() -> Witness<I>) {
        self.words.entry(word).or_insert_with(w);
    }
}

pub fn encode(sigma: &[usize], base: usize) -> u128 {
    sigma
        .iter()
        .rev()
        .fold(0u128, |acc, &c| acc * base as u128 + c as u128)
}

pub fn decode(mut word: u128, base: usize, len: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((word % base as u128) as usize);
        word /= base as u128;
    }
    out
}

/// A tuple of sets over one or more components (several for a flower).
#[derive(Debug, Clone)]
pub struct Prepared<I> {
    pub components: Vec<Component<I>>,
    /// Points outside every class count as an extra class (partitions).
    pub rest: bool,
}

impl<I: Int> Prepared<I> {
    pub fn new(tuple: &[NeighborhoodSpec<I>], traj: &Trajectory<I>) -> Result<Self> {
        Ok(Prepared {
            components: vec![Component::resolve(tuple, traj)?],
            rest: false,
        })
    }

    pub fn single(component: Component<I>, rest: bool) -> Self {
        Prepared {
            components: vec![component],
            rest,
        }
    }

    /// Number of tuple members.
    pub fn arity(&self) -> usize {
        self.components[0].classes.len()
    }

    /// Alphabet size of the words (arity, plus one for the rest class).
    pub fn base(&self) -> usize {
        self.arity() + usize::from(self.rest)
    }

    /// Largest usable time difference.
    pub fn span(&self) -> I {
        self.components
            .iter()
            .map(|c| c.window.1.clone() - c.window.0.clone())
            .max()
            .unwrap_or_else(I::zero)
    }

    /// All realised words for `times` (ascending). With `stop_when_full` the
    /// sweep ends as soon as every word is seen.
    pub fn realized(&self, times: &[I], stop_when_full: bool) -> Result<Realized<I>> {
        let base = self.base();
        let mut out = Realized {
            base,
            len: times.len(),
            words: HashMap::new(),
        };
        if (base as f64).powi(times.len() as i32) >= 2f64.powi(127) {
            return Err(Error::CapExceeded {
                assignments: u128::MAX,
                cap: u128::MAX >> 1,
            });
        }
        if times.is_empty() {
            out.offer(0, || Witness {
                component: 0,
                point: ModelPoint::Orbit(I::zero()),
            });
            return Ok(out);
        }
        for (ci, comp) in self.components.iter().enumerate() {
            if stop_when_full && out.is_full() {
                break;
            }
            if comp.motion != Motion::Orbit {
                self.static_words(ci, comp, times, &mut out);
                continue;
            }
            self.sweep_orbit(ci, comp, times, &mut out, stop_when_full);
            if comp.heads {
                self.sweep_heads(ci, comp, times, &mut out);
            }
        }
        Ok(out)
    }

    /// One realising point for `sigma`, found by intersecting shifted sets.
    pub fn satisfiable(&self, times: &[I], sigma: &[usize]) -> Option<Witness<I>> {
        assert_eq!(times.len(), sigma.len());
        for (ci, comp) in self.components.iter().enumerate() {
            let Some(max_t) = times.last() else {
                return Some(Witness {
                    component: ci,
                    point: ModelPoint::Orbit(I::zero()),
                });
            };
            if comp.motion != Motion::Orbit {
                let mut out = Realized {
                    base: self.base(),
                    len: times.len(),
                    words: HashMap::new(),
                };
                self.static_words(ci, comp, times, &mut out);
                match out.words.remove(&encode(sigma, self.base())) {
                    Some(w) => return Some(w),
                    None => continue,
                }
            }
            if let Some(s) = orbit_start(comp, times, sigma, max_t) {
                return Some(Witness {
                    component: ci,
                    point: ModelPoint::Orbit(s),
                });
            }
            if comp.heads {
                for sym in head_candidates(comp, times) {
                    let ok = times.iter().zip(sigma).all(|(t, &c)| {
                        self.head_mask(comp, &crate::model::head_step(&sym, t)) & (1 << c) != 0
                    });
                    if ok {
                        return Some(Witness {
                            component: ci,
                            point: ModelPoint::Head(sym),
                        });
                    }
                }
            }
        }
        None
    }

    fn fix_mask(&self, m: u64) -> u64 {
        if m == 0 && self.rest {
            1 << self.arity()
        } else {
            m
        }
    }

    fn head_mask(&self, comp: &Component<I>, sym: &Symbol<I>) -> u64 {
        self.fix_mask(comp.raw_head_mask(sym))
    }

    /// Masks (rest class included) a point of `comp` can have, with a point
    /// having each. The centre of a collapsing component is listed separately
    /// from the points that collapse.
    pub(crate) fn point_masks(&self, comp: &Component<I>) -> Vec<(u64, ModelPoint<I>)> {
        let center = match &comp.motion {
            Motion::Collapse { center, .. } => Some(center),
            _ => None,
        };
        let mut out: Vec<(u64, ModelPoint<I>)> = comp
            .raw_point_masks(center)
            .into_iter()
            .map(|(m, p)| (self.fix_mask(m), p))
            .collect();
        if let Some(z) = center {
            out.push((self.fix_mask(comp.raw_head_mask(z)), ModelPoint::Head(z.clone())));
        }
        out
    }

    /// Mask of `step^s(p)` for a point `p` of an orbit component; `None` past
    /// the horizon.
    fn mask_after(&self, comp: &Component<I>, p: &ModelPoint<I>, s: &I) -> Option<u64> {
        match p {
            ModelPoint::Head(sym) => Some(self.head_mask(comp, &crate::model::head_step(sym, s))),
            ModelPoint::Orbit(t) => {
                let u = t.clone() + s.clone();
                (u <= comp.window.1).then(|| self.fix_mask(comp.orbit_mask(&u)))
            }
        }
    }

    /// Words of a fixed or collapsing component, which are few: a fixed point
    /// repeats its mask, a collapsing point follows its target after one step.
    fn static_words(&self, ci: usize, comp: &Component<I>, times: &[I], out: &mut Realized<I>) {
        let base = out.base;
        match &comp.motion {
            Motion::Orbit => unreachable!("orbit components are swept"),
            Motion::Fixed => {
                for (m, p) in comp.raw_point_masks(None) {
                    let masks = vec![self.fix_mask(m); times.len()];
                    if masks[0] != 0 {
                        expand(&masks, base, |w| {
                            out.offer(w, || Witness {
                                component: ci,
                                point: p.clone(),
                            })
                        });
                    }
                }
            }
            Motion::Collapse { center, into, point } => {
                let target = &self.components[*into];
                // the centre stays put
                let cm = self.fix_mask(comp.raw_head_mask(center));
                if cm != 0 {
                    expand(&vec![cm; times.len()], base, |w| {
                        out.offer(w, || Witness {
                            component: ci,
                            point: ModelPoint::Head(center.clone()),
                        })
                    });
                }
                let mut later = Vec::with_capacity(times.len());
                for t in times.iter().filter(|t| !t.is_zero()) {
                    match self.mask_after(target, point, &(t.clone() - I::one())) {
                        Some(m) if m != 0 => later.push(m),
                        _ => return,
                    }
                }
                let starts_at_zero = times.len() > later.len();
                for (m, p) in comp.raw_point_masks(Some(center)) {
                    let mut masks = later.clone();
                    if starts_at_zero {
                        let m = self.fix_mask(m);
                        if m == 0 {
                            continue;
                        }
                        masks.insert(0, m);
                    }
                    expand(&masks, base, |w| {
                        out.offer(w, || Witness {
                            component: ci,
                            point: p.clone(),
                        })
                    });
                    if !starts_at_zero {
                        break;
                    }
                }
            }
        }
    }

    fn sweep_orbit(&self, ci: usize, comp: &Component<I>, times: &[I], out: &mut Realized<I>, stop: bool) {
        let max_t = times.last().expect("nonempty");
        let (lo, hi) = (comp.window.0.clone(), comp.window.1.clone() - max_t.clone());
        if hi < lo {
            return;
        }
        let base = out.base;
        let mut masks = vec![0u64; times.len()];
        if let Some(table) = &comp.masks {
            let offs: Vec<usize> = times.iter().map(|t| t.to_usize().expect("short window")).collect();
            let n = (hi.clone() - lo.clone()).to_usize().expect("short window") + 1;
            for s in 0..n {
                for (m, o) in masks.iter_mut().zip(&offs) {
                    *m = self.fix_mask(table[s + o]);
                }
                if masks.iter().all(|&m| m != 0) {
                    let start = lo.clone() + I::of_u64(s as u64);
                    expand(&masks, base, |w| {
                        out.offer(w, || Witness {
                            component: ci,
                            point: ModelPoint::Orbit(start.clone()),
                        })
                    });
                    if stop && out.is_full() {
                        return;
                    }
                }
            }
            return;
        }

        // (position, +1/-1, time index, class)
        let end = hi.clone() + I::one();
        let mut events: Vec<(I, i8, usize, usize)> = Vec::new();
        for (ti, t) in times.iter().enumerate() {
            for c in 0..comp.classes.len() {
                for (a, b) in comp.classes[c].orbit.runs() {
                    let a = a.clone() - t.clone();
                    let b = b.clone() - t.clone();
                    let a = if a < lo { lo.clone() } else { a };
                    let b = if b > end { end.clone() } else { b };
                    if a < b {
                        events.push((a, 1, ti, c));
                        events.push((b, -1, ti, c));
                    }
                }
            }
        }
        events.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.cmp(&y.1)));
        let k = comp.classes.len();
        let mut counts = vec![0i32; times.len() * k];
        let mut cur = lo;
        let mut idx = 0;
        loop {
            let next = events.get(idx).map(|e| e.0.clone()).unwrap_or_else(|| end.clone());
            if next > cur {
                for (ti, m) in masks.iter_mut().enumerate() {
                    let raw = (0..k)
                        .filter(|&c| counts[ti * k + c] > 0)
                        .fold(0u64, |acc, c| acc | 1 << c);
                    *m = self.fix_mask(raw);
                }
                if masks.iter().all(|&m| m != 0) {
                    let start = cur.clone();
                    expand(&masks, base, |w| {
                        out.offer(w, || Witness {
                            component: ci,
                            point: ModelPoint::Orbit(start.clone()),
                        })
                    });
                    if stop && out.is_full() {
                        return;
                    }
                }
                cur = next.clone();
            }
            if idx >= events.len() {
                break;
            }
            while idx < events.len() && events[idx].0 == next {
                let (_, d, ti, c) = &events[idx];
                counts[ti * k + c] += *d as i32;
                idx += 1;
            }
        }
    }

    fn sweep_heads(&self, ci: usize, comp: &Component<I>, times: &[I], out: &mut Realized<I>) {
        let base = out.base;
        let mut masks = vec![0u64; times.len()];
        for sym in head_candidates(comp, times) {
            for (m, t) in masks.iter_mut().zip(times) {
                *m = self.head_mask(comp, &crate::model::head_step(&sym, t));
            }
            if masks.iter().all(|&m| m != 0) {
                expand(&masks, base, |w| {
                    out.offer(w, || Witness {
                        component: ci,
                        point: ModelPoint::Head(sym.clone()),
                    })
                });
            }
        }
    }
}

/// Least orbit start `s` with `x_{s+t}` in class `sigma[i]` at each `t = times[i]`.
fn orbit_start<I: Int>(comp: &Component<I>, times: &[I], sigma: &[usize], max_t: &I) -> Option<I> {
    let (lo, hi) = (&comp.window.0, comp.window.1.clone() - max_t.clone());
    if hi < *lo {
        return None;
    }
    // seed with the sparsest class, then intersect the rest
    let first = (0..times.len())
        .min_by_key(|&i| comp.occupancy(sigma[i]).run_count())
        .expect("nonempty");
    let tf = &times[first];
    let mut starts = comp
        .occupancy(sigma[first])
        .clip(&(lo.clone() + tf.clone()), &(hi.clone() + tf.clone()))
        .shift(&-tf.clone());
    for (i, (t, &c)) in times.iter().zip(sigma).enumerate() {
        if starts.is_empty() {
            return None;
        }
        if i != first {
            starts = starts.intersect_shifted(comp.occupancy(c), t);
        }
    }
    starts.first().cloned()
}

/// Head points whose itineraries cover every membership pattern: membership of
/// `a_x` at time `t` only changes next to finitely many critical `x`.
pub(crate) fn head_candidates<I: Int>(comp: &Component<I>, times: &[I]) -> Vec<Symbol<I>> {
    match comp.family {
        Family::LogM { .. } => {
            let mut crit: Vec<I> = Vec::new();
            for class in &comp.classes {
                for t in times {
                    match &class.heads {
                        HeadSet::Index(c) => crit.push(c.clone() - t.clone()),
                        HeadSet::Tail { cutoff, offset } => {
                            crit.push(cutoff.clone() - offset.clone() - t.clone());
                            crit.push(-cutoff.clone() - offset.clone() - t.clone());
                        }
                        HeadSet::Symbols(list) => {
                            for s in list {
                                if let Symbol::Head(i) = s {
                                    crit.push(i.clone() - t.clone());
                                }
                            }
                        }
                        HeadSet::Fixed(_) | HeadSet::Nothing => {}
                    }
                }
            }
            if crit.is_empty() {
                crit.push(I::zero());
            }
            let mut xs: Vec<I> = crit
                .iter()
                .flat_map(|c| [c.clone() - I::one(), c.clone(), c.clone() + I::one()])
                .collect();
            xs.sort();
            xs.dedup();
            let mut out: Vec<Symbol<I>> = xs.into_iter().map(Symbol::Head).collect();
            out.push(Symbol::Infinity);
            out
        }
        Family::LogInfty => {
            let mut out: Vec<Symbol<I>> = Vec::new();
            let mut max_j = 0;
            for class in &comp.classes {
                let syms: Vec<Symbol<I>> = match &class.heads {
                    HeadSet::Fixed(s) => vec![s.clone()],
                    HeadSet::Symbols(l) => l.clone(),
                    _ => vec![],
                };
                for s in syms {
                    if let Symbol::Dense(j) = s {
                        max_j = max_j.max(j);
                    }
                    if !out.contains(&s) {
                        out.push(s);
                    }
                }
            }
            // one fixed point outside every class
            out.push(Symbol::Dense(max_j + 1));
            out
        }
    }
}

/// Calls `f` with every word in the product of the masks.
fn expand(masks: &[u64], base: usize, mut f: impl FnMut(u128)) {
    if masks.iter().all(|m| m.is_power_of_two()) {
        let w = masks
            .iter()
            .rev()
            .fold(0u128, |acc, m| acc * base as u128 + m.trailing_zeros() as u128);
        f(w);
        return;
    }
    fn rec(masks: &[u64], base: usize, acc: u128, mul: u128, f: &mut impl FnMut(u128)) {
        let Some((m, rest)) = masks.split_first() else {
            f(acc);
            return;
        };
        let mut bits = *m;
        while bits != 0 {
            let c = bits.trailing_zeros() as u128;
            rec(rest, base, acc + c * mul, mul * base as u128, f);
            bits &= bits - 1;
        }
    }
    rec(masks, base, 0, 1, &mut f);
}
