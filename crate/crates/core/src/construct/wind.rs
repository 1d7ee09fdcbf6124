//! Single wraps around the head: `a_p, ..., a_J, a_-P, ..., a_q`.

use crate::error::{Error, Result};
use crate::model::{Run, Symbol};
use crate::scalar::Int;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindPlan<I> {
    pub from: I,
    pub to: I,
    pub len: I,
    /// `(J, P)`: the jump goes from `a_J` to `a_-P`.
    pub jump: (I, I),
}

impl<I: Int> WindPlan<I> {
    /// Offset (from the first point) of the last point before the jump.
    pub fn jump_offset(&self) -> I {
        self.jump.0.clone() - self.from.clone()
    }

    /// The two ascending runs of the wind, placed at `start`.
    pub fn runs(&self, start: &I) -> [Run<I>; 2] {
        let right = self.jump_offset() + I::one();
        let left = self.len.clone() - right.clone();
        [
            Run {
                start: start.clone(),
                len: right.clone(),
                first: Symbol::Head(self.from.clone()),
            },
            Run {
                start: start.clone() + right,
                len: left,
                first: Symbol::Head(-self.jump.1.clone()),
            },
        ]
    }

    pub fn symbol_at(&self, offset: &I) -> Symbol<I> {
        if *offset <= self.jump_offset() {
            Symbol::Head(self.from.clone() + offset.clone())
        } else {
            Symbol::Head(self.to.clone() - (self.len.clone() - I::one() - offset.clone()))
        }
    }
}

/// Chooses the jump of a wind of `w` points from `a_p` to `a_q`.
///
/// Even `J + P` forces `J = P`. Odd sums put the extra point on the side of the
/// larger endpoint (`J = P + 1` when `q > p`, else `J = P - 1`) and fall back
/// to the other split when that violates a minimum.
pub fn plan_wind<I: Int>(p: &I, q: &I, w: &I) -> Result<WindPlan<I>> {
    let infeasible = || Error::Infeasible {
        from: p.to_string(),
        to: q.to_string(),
        len: w.to_string(),
    };
    let two = I::one() + I::one();
    let sum = w.clone() - two.clone() + p.clone() - q.clone();
    if sum.is_negative() {
        return Err(infeasible());
    }
    let j_min = if p.is_negative() { I::zero() } else { p.clone() } + I::one();
    let p_min = if q.is_positive() { I::zero() } else { -q.clone() } + I::one();
    let half = sum.clone() / two.clone();
    let mut options = Vec::with_capacity(2);
    if sum.is_even() {
        options.push((half.clone(), half));
    } else {
        let big = half.clone() + I::one();
        if q > p {
            options.push((big.clone(), half.clone()));
            options.push((half, big));
        } else {
            options.push((half.clone(), big.clone()));
            options.push((big, half));
        }
    }
    options
        .into_iter()
        .find(|(j, pp)| *j >= j_min && *pp >= p_min)
        .map(|jump| WindPlan {
            from: p.clone(),
            to: q.clone(),
            len: w.clone(),
            jump,
        })
        .ok_or_else(infeasible)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heads(plan: &WindPlan<i64>) -> Vec<i64> {
        (0..plan.len)
            .map(|o| match plan.symbol_at(&o) {
                Symbol::Head(i) => i,
                _ => unreachable!(),
            })
            .collect()
    }

    #[test]
    fn paper_winds() {
        let p11 = plan_wind(&0i64, &0, &8).unwrap();
        assert_eq!(p11.jump, (3, 3));
        assert_eq!(heads(&p11), vec![0, 1, 2, 3, -3, -2, -1, 0]);

        let p12 = plan_wind(&0i64, &1, &8).unwrap();
        assert_eq!(p12.jump, (3, 2));
        assert_eq!(heads(&p12), vec![0, 1, 2, 3, -2, -1, 0, 1]);

        // first wind of P(2,6) in the illustrative figure, then the second
        let w1 = plan_wind(&1i64, &0, &10).unwrap();
        assert_eq!(w1.jump, (4, 5));
        let w2 = plan_wind(&0i64, &1, &15).unwrap();
        assert_eq!(w2.jump, (6, 6));
    }

    #[test]
    fn infeasible_when_too_short() {
        assert!(plan_wind(&0i64, &0, &3).is_err());
        assert!(plan_wind(&3i64, &0, &5).is_err());
    }

    #[test]
    fn runs_cover_the_wind() {
        let plan = plan_wind(&1i64, &-1, &9).unwrap();
        let [r, l] = plan.runs(&100);
        assert_eq!(r.start, 100);
        assert_eq!(r.len + l.len, 9);
        assert_eq!(l.last_symbol(), Symbol::Head(-1));
    }
}
