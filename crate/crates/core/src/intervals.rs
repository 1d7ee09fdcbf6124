//! Sorted disjoint half-open integer intervals.
//!
//! This is the run-length form of an occupancy bit-vector: orbit indices of the
//! log-m family run far past anything a dense bit-vector could hold, while the
//! number of maximal runs stays small.

use crate::scalar::Int;

/// A set of integers stored as sorted, disjoint, non-adjacent `[start, end)` runs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntervalSet<I> {
    runs: Vec<(I, I)>,
}

impl<I: Int> Default for IntervalSet<I> {
    fn default() -> Self {
        Self::empty()
    }
}

impl<I: Int> IntervalSet<I> {
    pub fn empty() -> Self {
        IntervalSet { runs: Vec::new() }
    }

    /// `[start, end)`; empty when `end <= start`.
    pub fn range(start: I, end: I) -> Self {
        if end > start {
            IntervalSet { runs: vec![(start, end)] }
        } else {
            Self::empty()
        }
    }

    pub fn point(t: I) -> Self {
        let end = t.clone() + I::one();
        IntervalSet { runs: vec![(t, end)] }
    }

    /// Normalises arbitrary (possibly overlapping, unsorted, empty) runs.
    pub fn from_runs(mut runs: Vec<(I, I)>) -> Self {
        runs.retain(|(s, e)| e > s);
        runs.sort();
        let mut out: Vec<(I, I)> = Vec::with_capacity(runs.len());
        for (s, e) in runs {
            match out.last_mut() {
                Some(last) if s <= last.1 => {
                    if e > last.1 {
                        last.1 = e;
                    }
                }
                _ => out.push((s, e)),
            }
        }
        IntervalSet { runs: out }
    }

    pub fn from_points<It: IntoIterator<Item = I>>(points: It) -> Self {
        Self::from_runs(
            points
                .into_iter()
                .map(|p| {
                    let e = p.clone() + I::one();
                    (p, e)
                })
                .collect(),
        )
    }

    pub fn runs(&self) -> &[(I, I)] {
        &self.runs
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn run_count(&self) -> usize {
        self.runs.len()
    }

    /// Number of integers in the set.
    pub fn measure(&self) -> I {
        self.runs
            .iter()
            .fold(I::zero(), |acc, (s, e)| acc + (e.clone() - s.clone()))
    }

    pub fn first(&self) -> Option<&I> {
        self.runs.first().map(|(s, _)| s)
    }

    pub fn last(&self) -> Option<I> {
        self.runs.last().map(|(_, e)| e.clone() - I::one())
    }

    pub fn contains(&self, t: &I) -> bool {
        let idx = self.runs.partition_point(|(s, _)| s <= t);
        idx > 0 && *t < self.runs[idx - 1].1
    }

    /// Adds `delta` to every element.
    pub fn shift(&self, delta: &I) -> Self {
        IntervalSet {
            runs: self
                .runs
                .iter()
                .map(|(s, e)| (s.clone() + delta.clone(), e.clone() + delta.clone()))
                .collect(),
        }
    }

    /// Keeps the elements in `[lo, hi]` (both inclusive).
    pub fn clip(&self, lo: &I, hi: &I) -> Self {
        let end = hi.clone() + I::one();
        let mut out = Vec::new();
        for (s, e) in &self.runs {
            let s2 = if s < lo { lo.clone() } else { s.clone() };
            let e2 = if *e > end { end.clone() } else { e.clone() };
            if e2 > s2 {
                out.push((s2, e2));
            }
        }
        IntervalSet { runs: out }
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < self.runs.len() && j < other.runs.len() {
            let (a0, a1) = &self.runs[i];
            let (b0, b1) = &other.runs[j];
            let lo = if a0 > b0 { a0 } else { b0 };
            let hi = if a1 < b1 { a1 } else { b1 };
            if lo < hi {
                out.push((lo.clone(), hi.clone()));
            }
            if a1 < b1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalSet { runs: out }
    }

    /// `self ∩ (other - delta)`, walking the shorter run list and
    /// binary-searching the longer.
    pub fn intersect_shifted(&self, other: &Self, delta: &I) -> Self {
        let mut out = Vec::new();
        if self.runs.len() <= other.runs.len() {
            for (s, e) in &self.runs {
                let (ss, ee) = (s.clone() + delta.clone(), e.clone() + delta.clone());
                let mut i = other.runs.partition_point(|(_, b)| *b <= ss);
                while i < other.runs.len() && other.runs[i].0 < ee {
                    let (a, b) = &other.runs[i];
                    let lo = if *a > ss { a.clone() - delta.clone() } else { s.clone() };
                    let hi = if *b < ee { b.clone() - delta.clone() } else { e.clone() };
                    out.push((lo, hi));
                    i += 1;
                }
            }
        } else {
            for (a, b) in &other.runs {
                let (aa, bb) = (a.clone() - delta.clone(), b.clone() - delta.clone());
                let mut i = self.runs.partition_point(|(_, e)| *e <= aa);
                while i < self.runs.len() && self.runs[i].0 < bb {
                    let (s, e) = &self.runs[i];
                    let lo = if *s > aa { s.clone() } else { aa.clone() };
                    let hi = if *e < bb { e.clone() } else { bb.clone() };
                    out.push((lo, hi));
                    i += 1;
                }
            }
        }
        IntervalSet { runs: out }
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut runs = self.runs.clone();
        runs.extend(other.runs.iter().cloned());
        Self::from_runs(runs)
    }

    /// Complement inside `[lo, hi]`.
    pub fn complement_within(&self, lo: &I, hi: &I) -> Self {
        let end = hi.clone() + I::one();
        let mut out = Vec::new();
        let mut cursor = lo.clone();
        for (s, e) in self.clip(lo, hi).runs {
            if s > cursor {
                out.push((cursor.clone(), s));
            }
            cursor = e;
        }
        if end > cursor {
            out.push((cursor, end));
        }
        IntervalSet { runs: out }
    }

    /// `{ y - x : y in self, x in other }`.
    pub fn minkowski_difference(&self, other: &Self) -> Self {
        let mut runs = Vec::with_capacity(self.runs.len() * other.runs.len());
        for (y0, y1) in &self.runs {
            for (x0, x1) in &other.runs {
                // y in [y0, y1), x in [x0, x1): y - x in [y0 - x1 + 1, y1 - x0)
                runs.push((
                    y0.clone() - x1.clone() + I::one(),
                    y1.clone() - x0.clone(),
                ));
            }
        }
        Self::from_runs(runs)
    }

    /// Iterates the elements; only sensible for small sets.
    pub fn points(&self) -> impl Iterator<Item = I> + '_ {
        self.runs.iter().flat_map(|(s, e)| {
            let mut cur = s.clone();
            let end = e.clone();
            std::iter::from_fn(move || {
                if cur < end {
                    let out = cur.clone();
                    cur = cur.clone() + I::one();
                    Some(out)
                } else {
                    None
                }
            })
        })
    }

    /// Dense bit-vector of length `len` (bit t set iff t in the set).
    pub fn to_bits(&self, len: usize) -> Vec<bool> {
        let mut bits = vec![false; len];
        for p in self.clip(&I::zero(), &I::of_u64(len as u64 - 1)).points() {
            bits[p.to_usize().expect("clipped")] = true;
        }
        bits
    }
}
