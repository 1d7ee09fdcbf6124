//! Lengths of winds and gaps for the log-m family.

use crate::construct::wind::plan_wind;
use crate::error::{Error, Result};
use crate::scalar::Int;

/// `a >> b` means `a > 100 b`; this is the least such `a`.
pub fn least_dominating<I: Int>(b: &I) -> Result<I> {
    b.mul_checked(&I::of_u64(100))?.add_checked(&I::one())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSchedule<I> {
    /// `w_1^k, ..., w_k^k`.
    pub winds: Vec<I>,
    /// `ig(k,1), ..., ig(k, m^{k+1}-1)`.
    pub inner_gaps: Vec<I>,
    pub outer_gap: I,
}

impl<I: Int> BlockSchedule<I> {
    /// `N(k)`: `n_0 = 0`, `n_i = n_{i-1} + w_i - 1`.
    pub fn times(&self) -> Vec<I> {
        let mut out = vec![I::zero()];
        for w in &self.winds {
            let last = out.last().expect("nonempty").clone();
            out.push(last + w.clone() - I::one());
        }
        out
    }

    pub fn piece_len(&self) -> I {
        self.times().last().expect("nonempty").clone() + I::one()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthSchedule<I> {
    pub m: u32,
    pub blocks: Vec<BlockSchedule<I>>,
}

impl<I: Int> GrowthSchedule<I> {
    pub fn kmax(&self) -> usize {
        self.blocks.len()
    }

    /// Shape checks only: counts per block and wind feasibility. The growth
    /// inequalities are a separate check.
    pub fn check_shape(&self) -> Result<()> {
        if self.m < 2 {
            return Err(Error::ScheduleInvalid(format!("m = {} < 2", self.m)));
        }
        for (idx, b) in self.blocks.iter().enumerate() {
            let k = idx + 1;
            if b.winds.len() != k {
                return Err(Error::ScheduleInvalid(format!(
                    "block {k} has {} winds, expected {k}",
                    b.winds.len()
                )));
            }
            let pieces = piece_count(self.m, k as u32);
            if b.inner_gaps.len() != pieces - 1 {
                return Err(Error::ScheduleInvalid(format!(
                    "block {k} has {} inner gaps, expected {}",
                    b.inner_gaps.len(),
                    pieces - 1
                )));
            }
            for (i, w) in b.winds.iter().enumerate() {
                if !wind_fits_all(self.m, w) {
                    return Err(Error::ScheduleInvalid(format!(
                        "wind w_{}^{k} = {w} cannot join every pair of centres",
                        i + 1
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `m^{k+1}`.
pub fn piece_count(m: u32, k: u32) -> usize {
    (m as usize).pow(k + 1)
}

/// The `l`-th (1-based) function of `F(k)` in lexicographic order.
pub fn s_function(m: u32, k: u32, l: usize) -> Vec<u32> {
    let mut digits = vec![0u32; k as usize + 1];
    let mut rest = l - 1;
    for d in digits.iter_mut().rev() {
        *d = (rest % m as usize) as u32;
        rest /= m as usize;
    }
    digits
}

fn wind_fits_all<I: Int>(m: u32, w: &I) -> bool {
    (0..m as i64).all(|p| {
        (0..m as i64).all(|q| plan_wind(&I::of_i64(p), &I::of_i64(q), w).is_ok())
    })
}

/// Inner gap between `P(k,l)` and `P(k,l+1)` runs from the successor of the
/// piece's last centre to the predecessor of the next piece's first centre.
pub fn inner_gap_ends(m: u32, k: u32, l: usize) -> (i64, i64) {
    let prev = s_function(m, k, l);
    let next = s_function(m, k, l + 1);
    (*prev.last().expect("k+1 entries") as i64 + 1, next[0] as i64 - 1)
}

/// The outer gap leaves `a_{m-1}` and enters `P(k+1,1)` at `a_0`.
pub fn outer_gap_ends(m: u32) -> (i64, i64) {
    (m as i64, -1)
}

fn round_up<I: Int>(mut w: I, ok: impl Fn(&I) -> bool) -> I {
    while !ok(&w) {
        w = w + I::one();
    }
    w
}

/// Least lengths satisfying the base case `w_1^1 = 3m + 2` and every strict
/// 100x domination, rounded up until each wind is plannable.
pub fn minimal_schedule<I: Int>(m: u32, kmax: u32) -> Result<GrowthSchedule<I>> {
    if m < 2 {
        return Err(Error::ScheduleInvalid(format!("m = {m} < 2")));
    }
    let mut pos = I::zero();
    let mut blocks = Vec::with_capacity(kmax as usize);
    for k in 1..=kmax {
        let start = pos.clone();
        let mut winds: Vec<I> = Vec::with_capacity(k as usize);
        let mut n = I::zero();
        for _ in 0..k {
            let w = if k == 1 {
                I::of_u64(3 * m as u64 + 2)
            } else {
                least_dominating(&start.add_checked(&n)?)?
            };
            let w = round_up(w, |w| wind_fits_all(m, w));
            n = n.add_checked(&w)? - I::one();
            winds.push(w);
        }
        let piece = n + I::one();
        pos = pos.add_checked(&piece)?;
        let pieces = piece_count(m, k);
        let mut inner_gaps = Vec::with_capacity(pieces - 1);
        for l in 1..pieces {
            let (p, q) = inner_gap_ends(m, k, l);
            let (p, q) = (I::of_i64(p), I::of_i64(q));
            let g = round_up(least_dominating(&pos)?, |g| plan_wind(&p, &q, g).is_ok());
            pos = pos.add_checked(&g)?.add_checked(&piece)?;
            inner_gaps.push(g);
        }
        let (p, q) = outer_gap_ends(m);
        let (p, q) = (I::of_i64(p), I::of_i64(q));
        let outer_gap = round_up(least_dominating(&pos)?, |g| plan_wind(&p, &q, g).is_ok());
        pos = pos.add_checked(&outer_gap)?;
        blocks.push(BlockSchedule {
            winds,
            inner_gaps,
            outer_gap,
        });
    }
    Ok(GrowthSchedule { m, blocks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_wind() {
        let s2 = minimal_schedule::<i64>(2, 1).unwrap();
        assert_eq!(s2.blocks[0].winds, vec![8]);
        assert_eq!(s2.blocks[0].times(), vec![0, 7]);
        let s3 = minimal_schedule::<i128>(3, 1).unwrap();
        assert_eq!(s3.blocks[0].winds, vec![11]);
    }

    #[test]
    fn first_gaps_for_m2() {
        let s = minimal_schedule::<i64>(2, 1).unwrap();
        let b = &s.blocks[0];
        // IG(1,1) starts after 8 points, IG(1,2) after 8 + 801 + 8
        assert_eq!(b.inner_gaps[0], 801);
        assert_eq!(b.inner_gaps[1], 100 * 817 + 1);
        assert_eq!(b.inner_gaps.len(), 3);
    }

    #[test]
    fn i64_overflows_by_block_three() {
        assert!(matches!(
            minimal_schedule::<i64>(2, 3),
            Err(Error::Overflow(_))
        ));
    }

    #[test]
    fn lexicographic_functions() {
        assert_eq!(s_function(2, 1, 1), vec![0, 0]);
        assert_eq!(s_function(2, 1, 2), vec![0, 1]);
        assert_eq!(s_function(2, 2, 6), vec![1, 0, 1]);
        assert_eq!(s_function(3, 1, 9), vec![2, 2]);
    }
}
