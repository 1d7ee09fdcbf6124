//! Wedges of petal systems glued at a common fixed point, at the level of
//! symbols: each petal keeps its own trajectory and head, the centres are
//! identified, and the composite map acts on each petal in one of three modes.

use std::fmt;

use crate::checks::{CheckReport, CheckVerdict, Counterexample};
use crate::entropy::{largest_passing, HStarConfig};
use crate::error::{Error, Result};
use crate::independence::{labels, search, Component, Motion, Prepared, SearchConfig, Strategy};
use crate::model::{Family, ModelPoint, NeighborhoodSpec, Resolved, Symbol, Trajectory};
use crate::scalar::Int;

/// A value of `h*`: `0`, `log n`, or the top element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Zero,
    /// `log n`, `n >= 2`.
    Log(u64),
    Infinity,
}

impl Value {
    pub fn log(n: u64) -> Self {
        if n <= 1 {
            Value::Zero
        } else {
            Value::Log(n)
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Value::Zero => 0.0,
            Value::Log(n) => (n as f64).ln(),
            Value::Infinity => f64::INFINITY,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Zero => f.write_str("0"),
            Value::Log(n) => write!(f, "log {n}"),
            Value::Infinity => f.write_str("inf"),
        }
    }
}

/// The fixed point at which a petal of this family is glued.
pub fn center_of<I: Int>(family: Family) -> Symbol<I> {
    match family {
        Family::LogM { .. } => Symbol::Infinity,
        Family::LogInfty => Symbol::Dense(1),
    }
}

fn family_value(family: Family) -> Value {
    match family {
        Family::LogM { m } => Value::log(m as u64),
        Family::LogInfty => Value::Infinity,
    }
}

#[derive(Debug, Clone)]
pub struct PetalSystem<I> {
    pub id: String,
    pub traj: Trajectory<I>,
    pub value: Value,
}

impl<I: Int> PetalSystem<I> {
    /// A petal whose value is the one its family is built for.
    pub fn new(id: impl Into<String>, traj: Trajectory<I>) -> Self {
        let value = family_value(traj.family());
        PetalSystem {
            id: id.into(),
            traj,
            value,
        }
    }

    /// Rejects a declared value other than the family's.
    pub fn declared(id: impl Into<String>, traj: Trajectory<I>, value: Value) -> Result<Self> {
        let p = Self::new(id, traj);
        if p.value != value {
            return Err(Error::InvalidComposite(format!(
                "petal {} is built as {} (value {}) but declared {value}",
                p.id,
                p.traj.family(),
                p.value
            )));
        }
        Ok(p)
    }

    pub fn center(&self) -> Symbol<I> {
        center_of(self.traj.family())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mode<I> {
    /// Identity on the petal.
    Frozen,
    /// The petal's own map.
    Active,
    /// Every point but the centre goes to `point` of the Active petal `into`.
    Collapsed { into: usize, point: ModelPoint<I> },
}

impl<I: Int> fmt::Display for Mode<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Frozen => f.write_str("frozen"),
            Mode::Active => f.write_str("active"),
            Mode::Collapsed { into, point } => write!(f, "collapsed->{into}:{point}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CompositeSystem<I> {
    pub petals: Vec<PetalSystem<I>>,
    pub modes: Vec<Mode<I>>,
}

/// Glues the petals at their centres, every petal Active. An empty list has
/// nothing to glue.
pub fn compose<I: Int>(petals: Vec<PetalSystem<I>>) -> Result<CompositeSystem<I>> {
    if petals.is_empty() {
        return Err(Error::InvalidComposite("a flower needs at least one petal".into()));
    }
    let modes = vec![Mode::Active; petals.len()];
    Ok(CompositeSystem { petals, modes })
}

impl<I: Int> CompositeSystem<I> {
    pub fn with_modes(mut self, modes: Vec<Mode<I>>) -> Result<Self> {
        if modes.len() != self.petals.len() {
            return Err(Error::InvalidComposite(format!(
                "{} modes for {} petals",
                modes.len(),
                self.petals.len()
            )));
        }
        for (i, m) in modes.iter().enumerate() {
            if let Mode::Collapsed { into, point } = m {
                if modes.get(*into) != Some(&Mode::Active) {
                    return Err(Error::InvalidComposite(format!(
                        "petal {i} collapses into petal {into}, which is not active"
                    )));
                }
                if let ModelPoint::Orbit(t) = point {
                    if *t > self.petals[*into].traj.horizon() {
                        return Err(Error::InvalidComposite(format!(
                            "collapse point {point} is past the horizon of petal {into}"
                        )));
                    }
                }
            }
        }
        self.modes = modes;
        Ok(self)
    }

    pub fn petal_count(&self) -> usize {
        self.petals.len()
    }

    /// Every petal cut at `horizon` (petals already shorter are kept).
    pub fn truncated(&self, horizon: &I) -> Self {
        CompositeSystem {
            petals: self
                .petals
                .iter()
                .map(|p| PetalSystem {
                    traj: if p.traj.horizon() > *horizon {
                        p.traj.truncated(horizon)
                    } else {
                        p.traj.clone()
                    },
                    ..p.clone()
                })
                .collect(),
            modes: self.modes.clone(),
        }
    }

    /// Largest horizon over the petals.
    pub fn horizon(&self) -> I {
        self.petals.iter().map(|p| p.traj.horizon()).max().expect("at least one petal")
    }

    /// The tuple as sets of the composite: member `i` is the neighbourhood
    /// `tuple[i].1` inside petal `tuple[i].0`, empty in every other petal.
    pub fn prepare(&self, tuple: &[(usize, NeighborhoodSpec<I>)]) -> Result<Prepared<I>> {
        let mut components = Vec::with_capacity(self.petals.len());
        for (pi, petal) in self.petals.iter().enumerate() {
            let mut classes = Vec::with_capacity(tuple.len());
            for (owner, nb) in tuple {
                let Some(p) = self.petals.get(*owner) else {
                    return Err(Error::InvalidComposite(format!("no petal {owner}")));
                };
                if nb.center == p.center() {
                    return Err(Error::InvalidComposite(format!(
                        "{nb} is centred at the shared point; name it without a petal"
                    )));
                }
                classes.push(if *owner == pi {
                    crate::model::resolve(nb, &petal.traj)?
                } else {
                    Resolved {
                        heads: crate::model::HeadSet::Nothing,
                        orbit: crate::intervals::IntervalSet::empty(),
                    }
                });
            }
            let window = (I::zero(), petal.traj.horizon());
            let motion = match &self.modes[pi] {
                Mode::Active => Motion::Orbit,
                Mode::Frozen => Motion::Fixed,
                Mode::Collapsed { into, point } => Motion::Collapse {
                    center: petal.center(),
                    into: *into,
                    point: point.clone(),
                },
            };
            components.push(Component::new(petal.traj.family(), classes, window, true).with_motion(motion));
        }
        Ok(Prepared {
            components,
            rest: false,
        })
    }
}

fn label<I: Int>(petals: &[PetalSystem<I>], tuple: &[(usize, NeighborhoodSpec<I>)]) -> Vec<String> {
    tuple
        .iter()
        .map(|(p, nb)| format!("{}:{}", petals[*p].id, labels(std::slice::from_ref(nb))[0]))
        .collect()
}

/// `h*` of the composite: the largest value over Active petals, 0 when none is.
pub fn value_calculus<I: Int>(composite: &CompositeSystem<I>) -> Value {
    composite
        .petals
        .iter()
        .zip(&composite.modes)
        .filter(|(_, m)| **m == Mode::Active)
        .map(|(p, _)| p.value)
        .max()
        .unwrap_or(Value::Zero)
}

/// A family of Active petals declared by its values rather than built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeclaredFamily {
    Finite(Vec<Value>),
    /// Petals `log k_1, log k_2, ...` with `k_1 < k_2 < ...`, of which a
    /// prefix is listed; the family itself is infinite.
    StrictlyIncreasing(Vec<u64>),
}

/// The supremum of a declared family. An infinite strictly increasing family
/// of integers is unbounded, so its supremum is the top value even though no
/// single petal has it.
pub fn declared_value(family: &DeclaredFamily) -> Value {
    match family {
        DeclaredFamily::Finite(vs) => vs.iter().copied().max().unwrap_or(Value::Zero),
        DeclaredFamily::StrictlyIncreasing(_) => Value::Infinity,
    }
}

/// Head centres of a petal other than the shared point, in order.
pub fn sample_centers<I: Int>(petal: &PetalSystem<I>) -> Vec<Symbol<I>> {
    match petal.traj.family() {
        Family::LogM { m } => (0..m as i64).map(Symbol::head).collect(),
        Family::LogInfty => {
            let n = petal.traj.dense_manifest().map_or(0, |d| d.blocks.len() as u64);
            (2..=n + 1).map(Symbol::Dense).collect()
        }
    }
}

/// For every pair of petals and every pair of sampled centres, one from
/// each, the level-1 neighbourhoods have no independence set of length 2.
pub fn cross_petal_check<I: Int>(
    composite: &CompositeSystem<I>,
    cap: usize,
    horizon: Option<&I>,
    cfg: &SearchConfig,
) -> Result<CheckReport> {
    if composite.petal_count() < 2 {
        return Err(Error::InvalidComposite("cross-petal pairs need two petals".into()));
    }
    let composite = match horizon {
        Some(h) => composite.truncated(h),
        None => composite.clone(),
    };
    let cfg = SearchConfig {
        strategy: Strategy::LevelWise,
        ..cfg.clone()
    };
    let mut report = CheckReport::new(
        "cross-petal",
        vec![("petals", composite.petal_count().to_string()), ("cap", cap.to_string())],
        &composite.horizon(),
    );
    let mut pairs = 0;
    let mut budget_hit = false;
    for i in 0..composite.petal_count() {
        for j in i + 1..composite.petal_count() {
            for x in sample_centers(&composite.petals[i]) {
                for y in sample_centers(&composite.petals[j]) {
                    let tuple = vec![(i, NeighborhoodSpec::new(x.clone(), 1)), (j, NeighborhoodSpec::new(y.clone(), 1))];
                    let prep = composite.prepare(&tuple)?;
                    let names = label(&composite.petals, &tuple);
                    pairs += 1;
                    match search::search(&prep, cap.max(2), &cfg, &names) {
                        Ok(out) if out.best >= 2 => {
                            let times = out.witness.map(|w| w.times.iter().map(ToString::to_string).collect());
                            return Ok(report.fail(Counterexample::Independent {
                                tuple: names,
                                times: times.unwrap_or_default(),
                            }));
                        }
                        Ok(_) => {}
                        Err(Error::ResourceBudgetExceeded { .. }) => budget_hit = true,
                        Err(e) => return Err(e),
                    }
                }
            }
        }
    }
    if budget_hit {
        report.verdict = CheckVerdict::Inconclusive;
        report = report.note("budget exhausted on some pair");
    }
    Ok(report.note(format!("{pairs} cross-petal pairs have no independence set of length 2")))
}

/// A centre named by petal index.
pub type PetalCenter<I> = (usize, Symbol<I>);

/// Evidence bound on the composite: `log p` for the largest `p` of the named
/// centres (petal, symbol) whose neighbourhoods reach an independence set of
/// length `cap`.
pub fn h_star_evidence<I: Int>(
    composite: &CompositeSystem<I>,
    centers: &[(usize, Symbol<I>)],
    cap: usize,
    cfg: &HStarConfig,
) -> Result<(Value, Option<Vec<PetalCenter<I>>>)> {
    let found = largest_passing(centers.len(), cap, cfg, |subset, level| {
        let tuple: Vec<(usize, NeighborhoodSpec<I>)> = subset
            .iter()
            .map(|&i| (centers[i].0, NeighborhoodSpec::new(centers[i].1.clone(), level)))
            .collect();
        Ok((composite.prepare(&tuple)?, label(&composite.petals, &tuple)))
    })?;
    Ok(match found {
        Some(s) => (
            Value::log(s.len() as u64),
            Some(s.iter().map(|&i| centers[i].clone()).collect()),
        ),
        None => (Value::Zero, None),
    })
}
