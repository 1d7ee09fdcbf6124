//! Parts, wind-endpoint distances and shiftability of the visits to `a_0`.
//!
//! A part is a piece extended to the left by `s_l(0)` points, so that it holds
//! every visit to `a_0` near its winds: point `c` of part `(k,l)` sits at
//! `start + n_c - s_l(c)`.

use std::collections::HashMap;
use std::fmt;

use crate::checks::{CheckReport, Counterexample};
use crate::construct::LogMManifest;
use crate::error::{Error, Result};
use crate::intervals::IntervalSet;
use crate::model::{resolve, NeighborhoodSpec, Symbol, Trajectory};
use crate::scalar::Int;

/// Where a visit to `a_0` sits: block, part, wind-endpoint index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Position {
    pub k: u32,
    pub l: usize,
    pub c: usize,
}

pub struct PartGeometry<'a, I> {
    man: &'a LogMManifest<I>,
}

impl<'a, I: Int> PartGeometry<'a, I> {
    pub fn new(traj: &'a Trajectory<I>) -> Result<Self> {
        let man = traj
            .log_m_manifest()
            .ok_or_else(|| Error::ScheduleInvalid("part checks need a log-m trajectory".into()))?;
        Ok(PartGeometry { man })
    }

    pub fn m(&self) -> u32 {
        self.man.m
    }

    /// Inclusive range of part `(k,l)`.
    pub fn part_range(&self, k: u32, l: usize) -> Result<(I, I)> {
        let p = self.man.piece(k, l)?;
        Ok((p.start.clone() - I::of_u64(p.s[0] as u64), p.end()))
    }

    /// `start + n_c - s_l(c)` for `c = 0..=k`.
    pub fn expected_points(&self, k: u32, l: usize) -> Result<Vec<I>> {
        let b = self.man.block(k)?;
        let p = self.man.piece(k, l)?;
        Ok(b.times
            .iter()
            .zip(&p.s)
            .map(|(n, s)| p.start.clone() + n.clone() - I::of_u64(*s as u64))
            .collect())
    }

    pub fn part_of(&self, t: &I) -> Option<(u32, usize)> {
        let bi = self.man.blocks.partition_point(|b| b.start <= *t).checked_sub(1)?;
        let b = &self.man.blocks[bi];
        if *t > b.end {
            return None;
        }
        b.pieces.iter().rev().find_map(|p| {
            let lo = p.start.clone() - I::of_u64(p.s[0] as u64);
            (lo <= *t && *t <= p.end()).then_some((b.k, p.l))
        })
    }

    pub fn position(&self, t: &I) -> Option<Position> {
        let (k, l) = self.part_of(t)?;
        let pts = self.expected_points(k, l).ok()?;
        pts.iter().position(|p| p == t).map(|c| Position { k, l, c })
    }

    /// Pairs `(d, c)`, `d < c`, whose endpoint distance `n_c - n_d` is within
    /// `m - 1` of `t`.
    pub fn explain(&self, k: u32, t: &I) -> Vec<(usize, usize)> {
        let Ok(b) = self.man.block(k) else {
            return Vec::new();
        };
        let slack = I::of_u64(self.m() as u64 - 1);
        let n = &b.times;
        let mut out = Vec::new();
        for c in 0..n.len() {
            for d in 0..c {
                let base = n[c].clone() - n[d].clone();
                if (t.clone() - base).abs() <= slack {
                    out.push((d, c));
                }
            }
        }
        out
    }

    /// Symbol lookup straight from the runs, bypassing occupancies.
    pub fn is_a0(&self, t: &I, traj: &Trajectory<I>) -> Result<bool> {
        Ok(traj.symbol_at(t)? == Symbol::head(0))
    }

    pub fn block_of(&self, t: &I) -> Option<u32> {
        let bi = self.man.blocks.partition_point(|b| b.start <= *t).checked_sub(1)?;
        let b = &self.man.blocks[bi];
        (*t <= b.outer_gap.end()).then_some(b.k)
    }

    /// The property `clause` for the shiftable pair `s, s+t` and shift `m`.
    pub fn clause_holds(&self, clause: ShiftClause, s: &I, t: &I, m: &I) -> bool {
        let (a, b) = (s.clone(), s.clone() + t.clone());
        let (am, bm) = (a.clone() + m.clone(), b.clone() + m.clone());
        let pos = |x: &I| self.position(x);
        let (pa, pb, pam, pbm) = (pos(&a), pos(&b), pos(&am), pos(&bm));
        let same_part = |x: Option<Position>, y: Option<Position>| match (x, y) {
            (Some(x), Some(y)) => x.k == y.k && x.l == y.l,
            _ => false,
        };
        match clause {
            ShiftClause::InPart => [pa, pb, pam, pbm].iter().all(Option::is_some),
            ShiftClause::CrossBlockNoLeftShift => {
                self.block_of(&a) == self.block_of(&b) || !m.is_negative()
            }
            ShiftClause::NoLeftShiftIntoFirstPiece => {
                let (Some(pa), Some(pb)) = (pa, pb) else { return true };
                if !same_part(Some(pa), Some(pb)) || !m.is_negative() {
                    return true;
                }
                let k = pa.k;
                let early = self.block_of(&am).is_some_and(|q| q < k);
                let first_piece = self.man.piece(k, 1).is_ok_and(|p| p.start <= bm && bm <= p.end());
                !(early && first_piece)
            }
            ShiftClause::SamePartMovesToOtherPart => {
                if !same_part(pa, pb) {
                    return true;
                }
                same_part(pam, pbm) && pam.map(|p| p.k) == pa.map(|p| p.k) && pam.map(|p| p.l) != pa.map(|p| p.l)
            }
            ShiftClause::PartsPreserved => match (pa, pb) {
                (Some(x), Some(y)) if x.k == y.k && x.l < y.l => same_part(pam, pa) && same_part(pbm, pb),
                _ => true,
            },
            ShiftClause::SameBlock => {
                let blocks = [&a, &b, &am, &bm].map(|x| self.block_of(x));
                blocks.iter().all(|q| q.is_some() && *q == blocks[0])
            }
            ShiftClause::SimilarUnderShift => {
                if !same_part(pa, pb) {
                    return true;
                }
                matches!((pa, pam), (Some(x), Some(y)) if x.c == y.c)
            }
            ShiftClause::SimilarAcrossParts => match (pa, pb) {
                (Some(x), Some(y)) if x.k == y.k && x.l < y.l => x.c == y.c,
                _ => true,
            },
        }
    }
}

/// The properties every shiftable pair of visits to `a_0` must have.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShiftClause {
    /// Every visit lies in some part.
    InPart,
    /// Visits in different blocks only shift to the right.
    CrossBlockNoLeftShift,
    /// A same-part pair never shifts left into an earlier block and the
    /// block's first piece.
    NoLeftShiftIntoFirstPiece,
    /// A same-part pair shifts into one other part.
    SamePartMovesToOtherPart,
    /// A pair from two parts of one block shifts within those same parts.
    PartsPreserved,
    /// All four points lie in one block.
    SameBlock,
    /// A same-part pair shifts to the same endpoint index.
    SimilarUnderShift,
    /// A pair from two parts sits at the same endpoint index in each.
    SimilarAcrossParts,
}

impl ShiftClause {
    pub const ALL: [ShiftClause; 8] = [
        ShiftClause::InPart,
        ShiftClause::CrossBlockNoLeftShift,
        ShiftClause::NoLeftShiftIntoFirstPiece,
        ShiftClause::SamePartMovesToOtherPart,
        ShiftClause::PartsPreserved,
        ShiftClause::SameBlock,
        ShiftClause::SimilarUnderShift,
        ShiftClause::SimilarAcrossParts,
    ];
}

impl fmt::Display for ShiftClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ShiftClause::InPart => "in-part",
            ShiftClause::CrossBlockNoLeftShift => "cross-block-no-left-shift",
            ShiftClause::NoLeftShiftIntoFirstPiece => "no-left-shift-into-first-piece",
            ShiftClause::SamePartMovesToOtherPart => "same-part-moves-to-other-part",
            ShiftClause::PartsPreserved => "parts-preserved",
            ShiftClause::SameBlock => "same-block",
            ShiftClause::SimilarUnderShift => "similar-under-shift",
            ShiftClause::SimilarAcrossParts => "similar-across-parts",
        })
    }
}

impl std::str::FromStr for ShiftClause {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        ShiftClause::ALL
            .into_iter()
            .find(|c| c.to_string() == s)
            .ok_or_else(|| format!("unknown shift clause {s:?}"))
    }
}

fn a0_visits<I: Int>(traj: &Trajectory<I>) -> Result<IntervalSet<I>> {
    Ok(resolve(&NeighborhoodSpec::head(0, 1), traj)?.orbit)
}

fn params(k: u32, l: usize, m: u32) -> Vec<(&'static str, String)> {
    vec![("k", k.to_string()), ("l", l.to_string()), ("m", m.to_string())]
}

/// The visits to `a_0` inside part `(k,l)` are exactly the points
/// `start + n_c - s_l(c)`.
pub fn check_part_structure<I: Int>(k: u32, l: usize, traj: &Trajectory<I>) -> Result<CheckReport> {
    let geo = PartGeometry::new(traj)?;
    let report = CheckReport::new("part-structure", params(k, l, geo.m()), &traj.horizon());
    let (lo, hi) = geo.part_range(k, l)?;
    let found: Vec<I> = a0_visits(traj)?.clip(&lo, &hi).points().collect();
    let expected = geo.expected_points(k, l)?;
    for t in &expected {
        if !found.contains(t) {
            return Ok(report.fail(Counterexample::Membership {
                k,
                l,
                t: t.to_string(),
                expected: true,
            }));
        }
    }
    for t in &found {
        if !expected.contains(t) {
            return Ok(report.fail(Counterexample::Membership {
                k,
                l,
                t: t.to_string(),
                expected: false,
            }));
        }
    }
    let offsets: Vec<String> = expected.iter().map(|t| (t.clone() - lo.clone()).to_string()).collect();
    Ok(report.note(format!("visits at part offsets {}", offsets.join(","))))
}

/// Every distance between two visits to `a_0` in part `(k,l)` is within
/// `m - 1` of exactly one endpoint distance `n_c - n_d`, and no two pairs of
/// visits share a distance.
pub fn check_distance_uniqueness<I: Int>(k: u32, l: usize, traj: &Trajectory<I>) -> Result<CheckReport> {
    let geo = PartGeometry::new(traj)?;
    let report = CheckReport::new("distance-uniqueness", params(k, l, geo.m()), &traj.horizon());
    let (lo, hi) = geo.part_range(k, l)?;
    let pts: Vec<I> = a0_visits(traj)?.clip(&lo, &hi).points().collect();
    let mut seen: HashMap<I, (I, I)> = HashMap::new();
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            let t = b.clone() - a.clone();
            if geo.explain(k, &t).len() != 1 {
                return Ok(report.fail(Counterexample::UnexplainedDistance {
                    k,
                    l,
                    a: a.to_string(),
                    b: b.to_string(),
                }));
            }
            if let Some((c, d)) = seen.insert(t, (a.clone(), b.clone())) {
                return Ok(report.fail(Counterexample::SharedDistance {
                    k,
                    l,
                    first: (c.to_string(), d.to_string()),
                    second: (a.to_string(), b.to_string()),
                }));
            }
        }
    }
    Ok(report.note(format!("{} distances", seen.len())))
}

/// Exhaustively checks every shift clause for every pair of visits to `a_0`
/// and every nonzero shift keeping both in `a_0`, all within `horizon`.
pub fn check_shiftability<I: Int>(horizon: &I, traj: &Trajectory<I>) -> Result<CheckReport> {
    let geo = PartGeometry::new(traj)?;
    if *horizon > traj.horizon() {
        return Err(Error::HorizonExceeded {
            time: horizon.to_string(),
            horizon: traj.horizon().to_string(),
        });
    }
    let report = CheckReport::new("shiftability", vec![("m", geo.m().to_string())], horizon);
    let pts: Vec<I> = a0_visits(traj)?.clip(&I::zero(), horizon).points().collect();
    let set: std::collections::HashSet<&I> = pts.iter().collect();
    let mut shifts = 0u64;
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            let t = b.clone() - a.clone();
            for am in &pts {
                let m = am.clone() - a.clone();
                if m.is_zero() || !set.contains(&(b.clone() + m.clone())) {
                    continue;
                }
                shifts += 1;
                for clause in ShiftClause::ALL {
                    if !geo.clause_holds(clause, a, &t, &m) {
                        return Ok(report.fail(Counterexample::Shift {
                            s: a.to_string(),
                            t: t.to_string(),
                            m: m.to_string(),
                            clause,
                        }));
                    }
                }
            }
        }
    }
    Ok(report
        .note(format!("{} visits, {} shiftable (pair, shift) combinations", pts.len(), shifts))
        .note("shifts are restricted to points inside the horizon"))
}
