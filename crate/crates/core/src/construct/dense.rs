//! The log-infinity trajectory: epsilon-chains through a dense set of fixed
//! points, one block per `n`, each block realising every function
//! `{0, t_{n,1}, ..., t_{n,n}} -> {e^1, ..., e^{n+1}}`.

use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::model::{push_run, Family, Run, Segmentation, Symbol, Trajectory};
use crate::scalar::Int;

pub type Dyadic = Ratio<i64>;

/// Value of `e^j`: `0, 1, 1/2, 1/4, 3/4, 1/8, 3/8, ...` (breadth-first dyadics).
pub fn dyadic(j: u64) -> Dyadic {
    assert!(j >= 1, "dense indices start at 1");
    match j {
        1 => Dyadic::zero(),
        2 => Dyadic::one(),
        _ => {
            let r = j - 2;
            let level = 64 - r.leading_zeros();
            let idx = r - (1u64 << (level - 1));
            Dyadic::new(2 * idx as i64 + 1, 1i64 << level)
        }
    }
}

/// Inverse of [`dyadic`]; `None` outside the dyadic rationals of `[0, 1]`.
pub fn dense_index(v: &Dyadic) -> Option<u64> {
    if v.is_negative() || *v > Dyadic::one() {
        return None;
    }
    if v.is_zero() {
        return Some(1);
    }
    if v.is_one() {
        return Some(2);
    }
    let den = *v.denom() as u64;
    if !den.is_power_of_two() {
        return None;
    }
    let level = den.trailing_zeros();
    let odd = *v.numer() as u64;
    Some((1u64 << (level - 1)) + (odd - 1) / 2 + 2)
}

/// Least number of intermediate points of an `eps`-chain from `a` to `b`:
/// `floor(|b - a| / eps)`.
pub fn min_chain_len(a: &Dyadic, b: &Dyadic, eps: &Dyadic) -> u64 {
    ((*b - *a).abs() / *eps).floor().to_integer() as u64
}

/// The `n` intermediate values: the straight interpolation rounded onto a
/// dyadic grid fine enough to keep every gap below `eps`.
fn chain_values(a: &Dyadic, b: &Dyadic, eps: &Dyadic, n: u64) -> Result<Vec<Dyadic>> {
    let min = min_chain_len(a, b, eps);
    if n < min {
        return Err(Error::TooShort { min, got: n });
    }
    let steps = Dyadic::from_integer(n as i64 + 1);
    let stride = (*b - *a) / steps;
    let slack = *eps - stride.abs();
    let mut grid = 1i64;
    while Dyadic::new(1, grid) >= slack {
        grid *= 2;
    }
    Ok((1..=n as i64)
        .map(|i| {
            let exact = *a + stride * Dyadic::from_integer(i);
            (exact * Dyadic::from_integer(grid)).round() / Dyadic::from_integer(grid)
        })
        .collect())
}

fn symbol_of<I>(v: &Dyadic) -> Symbol<I> {
    Symbol::Dense(dense_index(v).expect("chain values are dyadic in [0,1]"))
}

/// An `eps`-chain `a, c_1, ..., c_n, b` with every `c_i` in the dense set.
pub fn build_eps_chain<I>(a: &Dyadic, b: &Dyadic, eps: &Dyadic, n: u64) -> Result<Vec<Symbol<I>>> {
    for v in [a, b] {
        if dense_index(v).is_none() {
            return Err(Error::AlphabetMismatch(format!("{v} is not in the dense set")));
        }
    }
    let mut out = vec![symbol_of(a)];
    out.extend(chain_values(a, b, eps, n)?.iter().map(symbol_of));
    out.push(symbol_of(b));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseBlockSchedule {
    pub eps: Dyadic,
    /// `t_{n,1} < ... < t_{n,n}`.
    pub times: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseSchedule {
    pub blocks: Vec<DenseBlockSchedule>,
}

/// `eps_n = 1/(n+1)` and the least equally spaced times that let every pair of
/// `e^1 .. e^{n+1}` be joined in one step of the time grid.
pub fn minimal_dense_schedule(nmax: u32) -> DenseSchedule {
    let blocks = (1..=nmax)
        .map(|n| {
            let eps = Dyadic::new(1, n as i64 + 1);
            let values: Vec<Dyadic> = (1..=n as u64 + 1).map(dyadic).collect();
            let step = values
                .iter()
                .flat_map(|a| values.iter().map(move |b| min_chain_len(a, b, &eps)))
                .max()
                .expect("two values")
                + 1;
            DenseBlockSchedule {
                eps,
                times: (1..=n as u64).map(|i| i * step).collect(),
            }
        })
        .collect();
    DenseSchedule { blocks }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentRecord<I> {
    pub start: I,
    /// `f(0), f(t_{n,1}), ...` as dense indices in `1..=n+1`.
    pub f: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlueRecord<I> {
    pub start: I,
    pub len: I,
    /// Index (1-based) of the segment it follows.
    pub after: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseBlockRecord<I> {
    pub n: u32,
    pub start: I,
    pub end: I,
    pub eps: Dyadic,
    /// `0, t_{n,1}, ..., t_{n,n}`.
    pub times: Vec<I>,
    pub segments: Vec<SegmentRecord<I>>,
    /// Shortest chains between consecutive segments, and the closing chain
    /// back to `e^1`. Empty glues are omitted.
    pub glue: Vec<GlueRecord<I>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseManifest<I> {
    pub schedule: DenseSchedule,
    pub blocks: Vec<DenseBlockRecord<I>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DenseSegment {
    Segment { n: u32, idx: usize },
    Glue { n: u32, after: usize },
    /// The closing `e^1` of a block.
    Close { n: u32 },
}

impl fmt::Display for DenseSegment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DenseSegment::Segment { n, idx } => write!(f, "B{n}/S{idx}"),
            DenseSegment::Glue { n, after } => write!(f, "B{n}/G{after}"),
            DenseSegment::Close { n } => write!(f, "B{n}/E"),
        }
    }
}

impl<I: Int> DenseManifest<I> {
    pub fn block(&self, n: u32) -> Result<&DenseBlockRecord<I>> {
        self.blocks
            .get((n as usize).wrapping_sub(1))
            .ok_or(Error::UnknownBlock {
                level: n,
                built: self.blocks.len(),
            })
    }

    pub fn len(&self) -> I {
        self.blocks
            .last()
            .map(|b| b.end.clone() + I::one())
            .unwrap_or_else(I::zero)
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn locate(&self, t: &I) -> Option<DenseSegment> {
        let bi = self.blocks.partition_point(|b| b.start <= *t).checked_sub(1)?;
        let b = &self.blocks[bi];
        if *t > b.end {
            return None;
        }
        let seg_len = b.times.last().expect("n >= 1").clone() + I::one();
        let si = b.segments.partition_point(|s| s.start <= *t) - 1;
        let seg = &b.segments[si];
        if *t < seg.start.clone() + seg_len {
            return Some(DenseSegment::Segment { n: b.n, idx: si + 1 });
        }
        for g in &b.glue {
            if g.start <= *t && *t < g.start.clone() + g.len.clone() {
                return Some(DenseSegment::Glue { n: b.n, after: g.after });
            }
        }
        Some(DenseSegment::Close { n: b.n })
    }

    /// Regenerates the orbit from the recorded segments and glue.
    pub fn replay(&self) -> Result<Vec<Run<I>>> {
        let mut runs = Vec::new();
        let mut pos = I::zero();
        for (bi, b) in self.blocks.iter().enumerate() {
            let sched = &self.schedule.blocks[bi];
            for sym in block_symbols::<I>(b.n, sched)? {
                push_run(
                    &mut runs,
                    Run {
                        start: pos.clone(),
                        len: I::one(),
                        first: sym,
                    },
                );
                pos = pos + I::one();
            }
        }
        Ok(runs)
    }
}

/// All functions `{0..n} -> {1..=n+1}` in lexicographic order.
fn functions(n: u32) -> impl Iterator<Item = Vec<u32>> {
    let base = n + 1;
    let count = (base as u64).pow(n + 1);
    (0..count).map(move |mut idx| {
        let mut f = vec![1u32; n as usize + 1];
        for d in f.iter_mut().rev() {
            *d = (idx % base as u64) as u32 + 1;
            idx /= base as u64;
        }
        f
    })
}

struct BlockLayout {
    symbols_per_segment: Vec<(usize, usize)>,
    glue: Vec<(usize, usize, usize)>,
}

/// Symbols of block `n` in order; also used for replay.
fn block_symbols<I>(n: u32, sched: &DenseBlockSchedule) -> Result<Vec<Symbol<I>>> {
    Ok(block_layout(n, sched)?.0)
}

fn block_layout<I>(n: u32, sched: &DenseBlockSchedule) -> Result<(Vec<Symbol<I>>, BlockLayout)> {
    let eps = sched.eps;
    let mut times = vec![0u64];
    times.extend(&sched.times);
    let mut out: Vec<Symbol<I>> = Vec::new();
    let mut layout = BlockLayout {
        symbols_per_segment: Vec::new(),
        glue: Vec::new(),
    };
    let mut prev: Option<Dyadic> = None;
    for (idx, f) in functions(n).enumerate() {
        let first = dyadic(f[0] as u64);
        if let Some(p) = prev {
            let glue = chain_values(&p, &first, &eps, min_chain_len(&p, &first, &eps))?;
            if !glue.is_empty() {
                layout.glue.push((out.len(), glue.len(), idx));
            }
            out.extend(glue.iter().map(symbol_of));
        }
        let seg_start = out.len();
        out.push(symbol_of(&first));
        for i in 1..f.len() {
            let (a, b) = (dyadic(f[i - 1] as u64), dyadic(f[i] as u64));
            let inner = times[i] - times[i - 1] - 1;
            let chain = chain_values(&a, &b, &eps, inner)
                .map_err(|e| Error::ScheduleInvalid(format!("block {n}: {e}")))?;
            out.extend(chain.iter().map(symbol_of));
            out.push(symbol_of(&b));
        }
        layout.symbols_per_segment.push((seg_start, out.len() - seg_start));
        prev = Some(dyadic(*f.last().expect("n+1 values") as u64));
    }
    let last = prev.expect("at least one function");
    let home = dyadic(1);
    if last != home {
        let glue = chain_values(&last, &home, &eps, min_chain_len(&last, &home, &eps))?;
        if !glue.is_empty() {
            layout.glue.push((out.len(), glue.len(), layout.symbols_per_segment.len()));
        }
        out.extend(glue.iter().map(symbol_of));
        out.push(symbol_of(&home));
    }
    Ok((out, layout))
}

fn check_schedule(nmax: u32, schedule: &DenseSchedule) -> Result<()> {
    if schedule.blocks.len() < nmax as usize {
        return Err(Error::ScheduleInvalid(format!(
            "schedule covers {} blocks, asked for {nmax}",
            schedule.blocks.len()
        )));
    }
    let mut last_eps: Option<Dyadic> = None;
    for (i, b) in schedule.blocks.iter().take(nmax as usize).enumerate() {
        let n = i + 1;
        if b.times.len() != n {
            return Err(Error::ScheduleInvalid(format!(
                "block {n} has {} times, expected {n}",
                b.times.len()
            )));
        }
        if b.times.first() == Some(&0) || b.times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::ScheduleInvalid(format!(
                "block {n} times are not positive and increasing"
            )));
        }
        if !b.eps.is_positive() || last_eps.is_some_and(|e| b.eps >= e) {
            return Err(Error::ScheduleInvalid(format!(
                "eps_{n} = {} does not decrease",
                b.eps
            )));
        }
        last_eps = Some(b.eps);
    }
    Ok(())
}

pub fn build_log_infty<I: Int>(nmax: u32, schedule: &DenseSchedule) -> Result<Trajectory<I>> {
    check_schedule(nmax, schedule)?;
    let mut runs = Vec::new();
    let mut blocks = Vec::new();
    let mut pos = I::zero();
    for n in 1..=nmax {
        let sched = &schedule.blocks[n as usize - 1];
        let (symbols, layout) = block_layout::<I>(n, sched)?;
        let start = pos.clone();
        let at = |off: usize| start.clone() + I::of_u64(off as u64);
        let functions: Vec<Vec<u32>> = functions(n).collect();
        let segments = layout
            .symbols_per_segment
            .iter()
            .zip(functions)
            .map(|(&(off, _), f)| SegmentRecord { start: at(off), f })
            .collect();
        let glue = layout
            .glue
            .iter()
            .map(|&(off, len, after)| GlueRecord {
                start: at(off),
                len: I::of_u64(len as u64),
                after,
            })
            .collect();
        for sym in symbols.iter().cloned() {
            push_run(
                &mut runs,
                Run {
                    start: pos.clone(),
                    len: I::one(),
                    first: sym,
                },
            );
            pos = pos + I::one();
        }
        let mut times = vec![I::zero()];
        times.extend(sched.times.iter().map(|&t| I::of_u64(t)));
        blocks.push(DenseBlockRecord {
            n,
            start,
            end: pos.clone() - I::one(),
            eps: sched.eps,
            times,
            segments,
            glue,
        });
    }
    let starts = blocks.iter().map(|b| b.start.clone()).collect();
    let manifest = DenseManifest {
        schedule: DenseSchedule {
            blocks: schedule.blocks[..nmax as usize].to_vec(),
        },
        blocks,
    };
    Ok(Trajectory::from_parts(
        Family::LogInfty,
        runs,
        starts,
        Segmentation::LogInfty(manifest),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_round_trips() {
        let firsts: Vec<Dyadic> = (1..=6).map(dyadic).collect();
        assert_eq!(
            firsts,
            vec![
                Dyadic::zero(),
                Dyadic::one(),
                Dyadic::new(1, 2),
                Dyadic::new(1, 4),
                Dyadic::new(3, 4),
                Dyadic::new(1, 8)
            ]
        );
        for j in 1..2000 {
            assert_eq!(dense_index(&dyadic(j)), Some(j));
        }
        assert_eq!(dense_index(&Dyadic::new(1, 3)), None);
    }

    #[test]
    fn chain_examples() {
        let e1 = dyadic(1);
        let half = Dyadic::new(1, 2);
        let c = build_eps_chain::<i64>(&e1, &e1, &half, 1).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c[0], Symbol::Dense(1));
        assert_eq!(c[2], Symbol::Dense(1));
        let one = Dyadic::one();
        for n in 1..6 {
            assert!(build_eps_chain::<i64>(&e1, &one, &one, n).is_ok());
        }
        assert!(matches!(
            build_eps_chain::<i64>(&e1, &one, &Dyadic::new(1, 4), 3),
            Err(Error::TooShort { min: 4, got: 3 })
        ));
    }

    #[test]
    fn schedule_values() {
        let s = minimal_dense_schedule(3);
        assert_eq!(s.blocks[0].times, vec![3]);
        assert_eq!(s.blocks[2].times, vec![5, 10, 15]);
        assert_eq!(s.blocks[2].eps, Dyadic::new(1, 4));
    }

    #[test]
    fn blocks_start_and_end_at_e1() {
        let t = build_log_infty::<i64>(3, &minimal_dense_schedule(3)).unwrap();
        let man = t.dense_manifest().unwrap();
        for b in &man.blocks {
            assert_eq!(t.symbol_at(&b.start).unwrap(), Symbol::Dense(1));
            assert_eq!(t.symbol_at(&b.end).unwrap(), Symbol::Dense(1));
        }
        assert_eq!(man.blocks[0].segments.len(), 4);
        assert_eq!(man.blocks[1].segments.len(), 27);
        assert_eq!(man.replay().unwrap(), t.runs());
        assert_eq!(man.len(), *t.len());
    }

    #[test]
    fn segments_realise_their_functions() {
        let t = build_log_infty::<i64>(2, &minimal_dense_schedule(2)).unwrap();
        let b = t.dense_manifest().unwrap().block(2).unwrap().clone();
        for seg in &b.segments {
            for (i, tt) in b.times.iter().enumerate() {
                assert_eq!(
                    t.symbol_at(&(seg.start + tt)).unwrap(),
                    Symbol::Dense(seg.f[i] as u64)
                );
            }
        }
    }

    #[test]
    fn consecutive_values_are_close() {
        let t = build_log_infty::<i64>(3, &minimal_dense_schedule(3)).unwrap();
        let man = t.dense_manifest().unwrap();
        let syms = t.symbols();
        for b in &man.blocks {
            for tt in b.start..b.end {
                let (x, y) = (&syms[tt as usize], &syms[tt as usize + 1]);
                let (Symbol::Dense(x), Symbol::Dense(y)) = (x, y) else { panic!() };
                assert!((dyadic(*x) - dyadic(*y)).abs() < b.eps, "at {tt}");
            }
        }
    }
}
