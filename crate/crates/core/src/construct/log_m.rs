//! The log-m trajectory: blocks of pieces separated by inner gaps, then an
//! outer gap, every segment winding around the head.

use std::fmt;

use crate::construct::schedule::{inner_gap_ends, outer_gap_ends, piece_count, s_function, GrowthSchedule};
use crate::construct::wind::{plan_wind, WindPlan};
use crate::error::{Error, Result};
use crate::model::{push_run, Family, Run, Segmentation, Trajectory};
use crate::scalar::Int;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindRecord<I> {
    pub start: I,
    pub plan: WindPlan<I>,
}

impl<I: Int> WindRecord<I> {
    pub fn end(&self) -> I {
        self.start.clone() + self.plan.len.clone() - I::one()
    }

    /// Time of the last point before the jump.
    pub fn jump_at(&self) -> I {
        self.start.clone() + self.plan.jump_offset()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PieceRecord<I> {
    /// 1-based index within the block.
    pub l: usize,
    pub start: I,
    pub s: Vec<u32>,
    pub winds: Vec<WindRecord<I>>,
}

impl<I: Int> PieceRecord<I> {
    pub fn end(&self) -> I {
        self.winds.last().expect("k >= 1").end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockRecord<I> {
    pub k: u32,
    pub start: I,
    /// Last point of the last piece.
    pub end: I,
    /// `N(k)`.
    pub times: Vec<I>,
    pub pieces: Vec<PieceRecord<I>>,
    /// `inner_gaps[l-1]` is `IG(k,l)`.
    pub inner_gaps: Vec<WindRecord<I>>,
    pub outer_gap: WindRecord<I>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogMManifest<I> {
    pub m: u32,
    pub schedule: GrowthSchedule<I>,
    pub blocks: Vec<BlockRecord<I>>,
}

/// Where an orbit index sits in the segmentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Segment {
    /// Wind `i` of piece `P(k,l)`; a shared wind endpoint is reported with the
    /// wind it ends.
    Wind { k: u32, l: usize, i: usize },
    InnerGap { k: u32, l: usize },
    OuterGap { k: u32 },
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Segment::Wind { k, l, i } => write!(f, "B{k}/P{l}/W{i}"),
            Segment::InnerGap { k, l } => write!(f, "B{k}/IG{l}"),
            Segment::OuterGap { k } => write!(f, "OG{k}"),
        }
    }
}

impl<I: Int> LogMManifest<I> {
    pub fn block(&self, k: u32) -> Result<&BlockRecord<I>> {
        self.blocks
            .get((k as usize).wrapping_sub(1))
            .ok_or(Error::UnknownBlock {
                level: k,
                built: self.blocks.len(),
            })
    }

    pub fn piece(&self, k: u32, l: usize) -> Result<&PieceRecord<I>> {
        let b = self.block(k)?;
        b.pieces
            .get(l.wrapping_sub(1))
            .ok_or_else(|| Error::ScheduleInvalid(format!("block {k} has no piece {l}")))
    }

    /// Number of orbit points covered.
    pub fn len(&self) -> I {
        self.blocks
            .last()
            .map(|b| b.outer_gap.end() + I::one())
            .unwrap_or_else(I::zero)
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn locate(&self, t: &I) -> Option<Segment> {
        let idx = self.blocks.partition_point(|b| b.start <= *t).checked_sub(1)?;
        let b = &self.blocks[idx];
        if *t > b.outer_gap.end() {
            return None;
        }
        if *t > b.end {
            return Some(Segment::OuterGap { k: b.k });
        }
        let pi = b.pieces.partition_point(|p| p.start <= *t) - 1;
        let piece = &b.pieces[pi];
        if *t > piece.end() {
            return Some(Segment::InnerGap { k: b.k, l: piece.l });
        }
        let off = t.clone() - piece.start.clone();
        let i = b.times[1..].partition_point(|n| *n < off) + 1;
        Some(Segment::Wind {
            k: b.k,
            l: piece.l,
            i: i.min(b.k as usize),
        })
    }

    /// Times `t` with a recorded jump between `x_t` and `x_{t+1}`, ascending.
    pub fn jumps(&self) -> Vec<I> {
        let mut out = Vec::new();
        for b in &self.blocks {
            for (pi, piece) in b.pieces.iter().enumerate() {
                out.extend(piece.winds.iter().map(WindRecord::jump_at));
                if let Some(g) = b.inner_gaps.get(pi) {
                    out.push(g.jump_at());
                }
            }
            out.push(b.outer_gap.jump_at());
        }
        out
    }

    /// Regenerates the orbit from the recorded winds and gaps.
    pub fn replay(&self) -> Vec<Run<I>> {
        let mut runs = Vec::new();
        for b in &self.blocks {
            for (pi, piece) in b.pieces.iter().enumerate() {
                for (wi, w) in piece.winds.iter().enumerate() {
                    push_wind(&mut runs, w, wi > 0);
                }
                if let Some(g) = b.inner_gaps.get(pi) {
                    push_wind(&mut runs, g, false);
                }
            }
            push_wind(&mut runs, &b.outer_gap, false);
        }
        runs
    }
}

fn push_wind<I: Int>(runs: &mut Vec<Run<I>>, w: &WindRecord<I>, skip_first: bool) {
    let [mut right, left] = w.plan.runs(&w.start);
    if skip_first {
        right = Run {
            first: right.symbol_at_offset(&I::one()),
            start: right.start + I::one(),
            len: right.len - I::one(),
        };
    }
    push_run(runs, right);
    push_run(runs, left);
}

pub fn build_log_m<I: Int>(m: u32, kmax: u32, schedule: &GrowthSchedule<I>) -> Result<Trajectory<I>> {
    if schedule.m != m {
        return Err(Error::ScheduleInvalid(format!(
            "schedule is for m = {}, asked for m = {m}",
            schedule.m
        )));
    }
    if schedule.kmax() < kmax as usize {
        return Err(Error::ScheduleInvalid(format!(
            "schedule covers {} blocks, asked for {kmax}",
            schedule.kmax()
        )));
    }
    schedule.check_shape()?;
    let mut pos = I::zero();
    let mut blocks = Vec::with_capacity(kmax as usize);
    for k in 1..=kmax {
        let bs = &schedule.blocks[k as usize - 1];
        let times = bs.times();
        let start = pos.clone();
        let mut pieces = Vec::new();
        let mut inner_gaps = Vec::new();
        let count = piece_count(m, k);
        for l in 1..=count {
            let s = s_function(m, k, l);
            let mut winds = Vec::with_capacity(k as usize);
            for (i, w) in bs.winds.iter().enumerate() {
                let plan = plan_wind(&I::of_u64(s[i] as u64), &I::of_u64(s[i + 1] as u64), w)
                    .map_err(|e| Error::ScheduleInvalid(e.to_string()))?;
                winds.push(WindRecord {
                    start: pos.add_checked(&times[i])?,
                    plan,
                });
            }
            let piece = PieceRecord {
                l,
                start: pos.clone(),
                s,
                winds,
            };
            pos = piece.end() + I::one();
            pieces.push(piece);
            if l < count {
                let (p, q) = inner_gap_ends(m, k, l);
                let g = &bs.inner_gaps[l - 1];
                let plan = plan_wind(&I::of_i64(p), &I::of_i64(q), g)
                    .map_err(|e| Error::ScheduleInvalid(format!("IG({k},{l}): {e}")))?;
                inner_gaps.push(WindRecord {
                    start: pos.clone(),
                    plan,
                });
                pos = pos.add_checked(g)?;
            }
        }
        let end = pos.clone() - I::one();
        let (p, q) = outer_gap_ends(m);
        let plan = plan_wind(&I::of_i64(p), &I::of_i64(q), &bs.outer_gap)
            .map_err(|e| Error::ScheduleInvalid(format!("OG({k}): {e}")))?;
        let outer_gap = WindRecord {
            start: pos.clone(),
            plan,
        };
        pos = pos.add_checked(&bs.outer_gap)?;
        blocks.push(BlockRecord {
            k,
            start,
            end,
            times,
            pieces,
            inner_gaps,
            outer_gap,
        });
    }
    let manifest = LogMManifest {
        m,
        schedule: GrowthSchedule {
            m,
            blocks: schedule.blocks[..kmax as usize].to_vec(),
        },
        blocks,
    };
    let runs = manifest.replay();
    let starts = manifest.blocks.iter().map(|b| b.start.clone()).collect();
    Ok(Trajectory::from_parts(
        Family::LogM { m },
        runs,
        starts,
        Segmentation::LogM(manifest),
    ))
}
