//! Exact pebbling prices for small graphs.
//!
//! [`price`] runs a bottleneck breadth-first search over configurations:
//! bucket `s` holds every configuration reachable while never exceeding
//! `s` counted pebbles, and buckets are exhausted in increasing order, so
//! the first bucket containing a goal configuration is the price.
//! [`dt_price`] computes the Dymond–Tompa game value by memoized minimax.

mod bfs;
mod dt;
mod par;
mod record;
mod space;

use pebble_engine::{Flavor, PebbleConfig, PebblingTrace, Region};
use pebble_graph::Dag;
use thiserror::Error;

pub use bfs::{Goal, PriceQuery, Solution};
pub use dt::{
    dt_play, dt_price, dt_worst_case, Challenger, DtSolver, ExhaustiveChallenger, GameError, GameState, JumpingChallenger,
    OptimalChallenger, OptimalPebbler, Pebbler, Response, RoundLog, StayingChallenger, Transcript,
};
pub use par::{map_all, parallel_enabled, set_parallel};
pub use record::PriceRecord;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("{active} movable vertices exceed the solver limit of {limit}")]
    TooManyVertices { active: usize, limit: usize },
    #[error("graph has no designated sink")]
    NoSink,
    #[error("configuration has {got} vertices, graph has {expected}")]
    ConfigSize { got: usize, expected: usize },
    #[error("budget cap must be at least 1")]
    BadCap,
    #[error("price exceeds the cap {cap}; it is at least {lower_bound}")]
    CapExceeded { cap: usize, lower_bound: usize },
    #[error("stored more than {limit} configurations; price is at least {lower_bound}")]
    StateLimit { limit: usize, lower_bound: usize },
    #[error("goal is unreachable")]
    Unreachable,
}

/// Full search result: price, optimal trace and statistics.
pub fn solve(d: &Dag, q: &PriceQuery) -> Result<Solution, SolveError> {
    bfs::solve_inner(d, q)
}

pub fn price(d: &Dag, q: &PriceQuery) -> Result<usize, SolveError> {
    solve(d, q).map(|s| s.price)
}

/// Minimum space of a reversible pebbling from the empty configuration to
/// exactly `target`.
pub fn price_to_config(d: &Dag, target: &PebbleConfig, region: Option<&Region>) -> Result<usize, SolveError> {
    let mut q = PriceQuery::new(Flavor::Reversible, Goal::Config(target.clone()));
    q.region = region.cloned();
    price(d, &q)
}

/// An optimal trace; replay it from [`Solution::start`] when a region is set.
pub fn extract_optimal_trace(d: &Dag, q: &PriceQuery) -> Result<PebblingTrace, SolveError> {
    solve(d, q).map(|s| s.trace)
}

/// Prices a batch of independent queries, in parallel when enabled.
pub fn price_many(jobs: &[(&Dag, &PriceQuery)]) -> Vec<Result<usize, SolveError>> {
    map_all(jobs, |(d, q)| price(d, q))
}
