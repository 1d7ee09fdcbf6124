//! Combinatorial independence of time sets for tuples of neighbourhoods.

pub mod certificate;
pub mod engine;
pub mod search;

pub use certificate::ExhaustionCertificate;
pub use engine::{Component, Motion, Prepared, Realized, Witness};
pub use search::{
    check_independence, pair_universe, IndependenceWitness, SearchConfig, SearchOutcome, Strategy, Verdict,
};

use crate::error::Result;
use crate::intervals::IntervalSet;
use crate::model::{resolve, ModelPoint, NeighborhoodSpec, Trajectory};
use crate::scalar::Int;

/// Orbit indices `t` with `x_t` in the neighbourhood.
pub fn occupancy<I: Int>(nb: &NeighborhoodSpec<I>, traj: &Trajectory<I>) -> Result<IntervalSet<I>> {
    Ok(resolve(nb, traj)?.orbit)
}

/// A point whose itinerary visits `tuple[sigma[i]]` at `times[i]`.
pub fn satisfiable<I: Int>(
    times: &[I],
    sigma: &[usize],
    tuple: &[NeighborhoodSpec<I>],
    traj: &Trajectory<I>,
) -> Result<Option<ModelPoint<I>>> {
    let prep = Prepared::new(tuple, traj)?;
    Ok(prep.satisfiable(times, sigma).map(|w| w.point))
}

pub fn is_independence_set<I: Int>(
    times: &[I],
    tuple: &[NeighborhoodSpec<I>],
    traj: &Trajectory<I>,
    cap: u128,
) -> Result<Verdict<I>> {
    check_independence(&Prepared::new(tuple, traj)?, times, cap)
}

pub fn labels<I: Int>(tuple: &[NeighborhoodSpec<I>]) -> Vec<String> {
    tuple.iter().map(ToString::to_string).collect()
}

/// Longest independence set up to `cap` over the whole trajectory.
pub fn max_independence<I: Int>(
    tuple: &[NeighborhoodSpec<I>],
    cap: usize,
    traj: &Trajectory<I>,
    cfg: &SearchConfig,
) -> Result<SearchOutcome<I>> {
    search::search(&Prepared::new(tuple, traj)?, cap, cfg, &labels(tuple))
}

/// Drops the least time, moves the others one step back, and checks them
/// against the one-step preimages of the tuple.
pub fn shift_property_check<I: Int>(
    times: &[I],
    tuple: &[NeighborhoodSpec<I>],
    traj: &Trajectory<I>,
    cap: u128,
) -> Result<bool> {
    let mut times = times.to_vec();
    times.sort();
    times.dedup();
    if times.len() <= 1 {
        return Ok(true);
    }
    let shifted: Vec<I> = times[1..].iter().map(|t| t.clone() - I::one()).collect();
    let pulled: Vec<NeighborhoodSpec<I>> = tuple.iter().map(NeighborhoodSpec::pulled_back).collect();
    Ok(is_independence_set(&shifted, &pulled, traj, cap)?.is_independent())
}
