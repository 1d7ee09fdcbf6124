//! Brute-force reference implementations, written from the definitions and
//! sharing nothing with the engine beyond the data types.

#![allow(dead_code)]

use rand::Rng;
use seqent::model::infinity_cutoff;
use seqent::{Family, NeighborhoodSpec, Symbol, Trajectory};

/// A point of the model: an orbit index or a head symbol.
#[derive(Debug, Clone, PartialEq)]
pub enum Pt {
    Orbit(i64),
    Head(Symbol<i64>),
}

pub struct Naive {
    pub family: Family,
    pub syms: Vec<Symbol<i64>>,
    pub block_starts: Vec<i64>,
}

impl Naive {
    pub fn new(family: Family, syms: Vec<Symbol<i64>>, block_starts: Vec<i64>) -> Self {
        Naive {
            family,
            syms,
            block_starts,
        }
    }

    pub fn trajectory(&self) -> Trajectory<i64> {
        Trajectory::from_symbols(self.family, &self.syms, self.block_starts.clone()).unwrap()
    }

    pub fn horizon(&self) -> i64 {
        self.syms.len() as i64 - 1
    }

    /// `step^t(p)`, or `None` past the horizon.
    pub fn step(&self, p: &Pt, t: i64) -> Option<Pt> {
        match p {
            Pt::Orbit(s) => (s + t <= self.horizon()).then_some(Pt::Orbit(s + t)),
            Pt::Head(Symbol::Head(i)) => Some(Pt::Head(Symbol::Head(i + t))),
            Pt::Head(other) => Some(Pt::Head(other.clone())),
        }
    }

    /// Membership straight from the definitions: a finite or dense centre
    /// holds itself and its orbit visits from the level's block on; the
    /// class-`r` set of `a_inf` holds every `a_i` with `|i| >= K(r)`.
    pub fn contains(&self, nb: &NeighborhoodSpec<i64>, p: &Pt) -> bool {
        // T^-n U: p is in it iff step^n(p) is in U
        let Some(q) = self.step(p, nb.preimage as i64) else {
            return false;
        };
        let sym = match &q {
            Pt::Head(s) => s.clone(),
            Pt::Orbit(t) => self.syms[*t as usize].clone(),
        };
        match &nb.center {
            Symbol::Infinity => match sym {
                Symbol::Infinity => true,
                Symbol::Head(i) => i.unsigned_abs() >= infinity_cutoff(nb.level),
                Symbol::Dense(_) => false,
            },
            c => {
                if sym != *c {
                    return false;
                }
                match q {
                    Pt::Head(_) => true,
                    Pt::Orbit(t) => self
                        .block_starts
                        .get(nb.level as usize - 1)
                        .is_some_and(|&from| t >= from),
                }
            }
        }
    }

    /// Candidate points: every orbit index, and enough head points that every
    /// membership pattern of a head itinerary occurs.
    pub fn points(&self, reach: i64) -> Vec<Pt> {
        let mut out: Vec<Pt> = (0..=self.horizon()).map(Pt::Orbit).collect();
        match self.family {
            Family::LogM { .. } => {
                out.extend((-reach..=reach).map(|i| Pt::Head(Symbol::Head(i))));
                out.push(Pt::Head(Symbol::Infinity));
            }
            Family::LogInfty => {
                // every fixed point behaves alike outside the few that are named
                let top = self
                    .syms
                    .iter()
                    .filter_map(|s| match s {
                        Symbol::Dense(j) => Some(*j),
                        _ => None,
                    })
                    .max()
                    .unwrap_or(1);
                out.extend((1..=top.max(10) + 2).map(|j| Pt::Head(Symbol::Dense(j))));
            }
        }
        out
    }

    /// Classes of `p` at each time, or `None` if the itinerary leaves the horizon.
    fn pattern(&self, p: &Pt, times: &[i64], tuple: &[NeighborhoodSpec<i64>]) -> Option<Vec<Vec<usize>>> {
        times
            .iter()
            .map(|&t| {
                let q = self.step(p, t)?;
                Some((0..tuple.len()).filter(|&c| self.contains(&tuple[c], &q)).collect())
            })
            .collect()
    }

    /// Every assignment of tuple members to times is realised by one point.
    pub fn independent(&self, times: &[i64], tuple: &[NeighborhoodSpec<i64>]) -> bool {
        let k = tuple.len();
        let reach = 400 + times.iter().map(|t| t.abs()).max().unwrap_or(0);
        let patterns: Vec<Vec<Vec<usize>>> = self
            .points(reach)
            .iter()
            .filter_map(|p| self.pattern(p, times, tuple))
            .collect();
        let total = k.pow(times.len() as u32);
        (0..total).all(|mut code| {
            let sigma: Vec<usize> = (0..times.len())
                .map(|_| {
                    let c = code % k;
                    code /= k;
                    c
                })
                .collect();
            patterns
                .iter()
                .any(|pat| pat.iter().zip(&sigma).all(|(cls, c)| cls.contains(c)))
        })
    }

    /// Distinct class words along `seq` for a symbol partition, optionally
    /// with a rest class, over orbit points and head points.
    pub fn word_count(&self, seq: &[i64], classes: &[Vec<Symbol<i64>>], rest: bool) -> usize {
        let reach = 400 + seq.iter().max().copied().unwrap_or(0);
        let mut words: Vec<Vec<usize>> = Vec::new();
        'points: for p in self.points(reach) {
            let mut word = Vec::new();
            for &t in seq {
                let Some(q) = self.step(&p, t) else {
                    continue 'points;
                };
                let sym = match q {
                    Pt::Head(s) => s,
                    Pt::Orbit(u) => self.syms[u as usize].clone(),
                };
                match classes.iter().position(|c| c.contains(&sym)) {
                    Some(c) => word.push(c),
                    None if rest => word.push(classes.len()),
                    None => continue 'points,
                }
            }
            if !words.contains(&word) {
                words.push(word);
            }
        }
        words.len()
    }
}

/// A random log-m style orbit: ascending head runs broken by jumps.
pub fn random_log_m(rng: &mut impl Rng, len: usize) -> Naive {
    let mut syms = Vec::with_capacity(len);
    while syms.len() < len {
        let start: i64 = rng.gen_range(-6..=6);
        let run = rng.gen_range(1..=12).min(len - syms.len());
        syms.extend((0..run as i64).map(|o| Symbol::Head(start + o)));
    }
    Naive::new(Family::LogM { m: 2 }, syms, block_starts(rng, len))
}

/// A random orbit over a few dense fixed points.
pub fn random_dense(rng: &mut impl Rng, len: usize) -> Naive {
    let mut syms = Vec::with_capacity(len);
    while syms.len() < len {
        let j = rng.gen_range(1..=5u64);
        let run = rng.gen_range(1..=6).min(len - syms.len());
        syms.extend(std::iter::repeat_n(Symbol::Dense(j), run));
    }
    Naive::new(Family::LogInfty, syms, block_starts(rng, len))
}

fn block_starts(rng: &mut impl Rng, len: usize) -> Vec<i64> {
    let mut starts = vec![0i64];
    for _ in 1..3 {
        let last = *starts.last().unwrap();
        starts.push(rng.gen_range(last..len as i64));
    }
    starts
}

/// A tuple of 2 or 3 neighbourhoods with distinct centres, levels at most 3.
pub fn random_tuple(rng: &mut impl Rng, family: Family) -> Vec<NeighborhoodSpec<i64>> {
    let n = rng.gen_range(2..=3);
    let mut out: Vec<NeighborhoodSpec<i64>> = Vec::new();
    while out.len() < n {
        let level = rng.gen_range(1..=3);
        let center = match family {
            Family::LogM { .. } => {
                if rng.gen_bool(0.2) {
                    Symbol::Infinity
                } else {
                    Symbol::Head(rng.gen_range(-5..=5))
                }
            }
            Family::LogInfty => Symbol::Dense(rng.gen_range(1..=5)),
        };
        if out.iter().all(|nb| nb.center != center) {
            let mut nb = NeighborhoodSpec::new(center, level);
            if rng.gen_bool(0.15) {
                nb = nb.pulled_back();
            }
            out.push(nb);
        }
    }
    out
}

/// Up to 3 distinct ascending times, the least being 0 most of the time.
pub fn random_times(rng: &mut impl Rng, horizon: i64) -> Vec<i64> {
    let n = rng.gen_range(1..=3);
    let spread = rng.gen_range(1..=horizon.clamp(1, 40));
    let mut t: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=spread)).collect();
    if rng.gen_bool(0.7) {
        t.push(0);
    }
    t.sort();
    t.dedup();
    t
}
