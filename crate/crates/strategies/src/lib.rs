//! Explicit pebbling strategies for the graph families, each emitted as a
//! [`TraceProgram`](pebble_engine::TraceProgram) or flat trace that the engine
//! validator can certify, plus two Dymond–Tompa players: a bisection Pebbler
//! driven by any standard pebbling and a blocking-set Challenger for roads.

mod bisection;
mod path;
mod product;
mod qbf;
mod road;
mod tree;
mod xmas;

use pebble_constructions::ConstructionError;
use pebble_engine::{ProgramError, TraceError};
use thiserror::Error;

pub use bisection::BisectionPebbler;
pub use path::{path_persistent, path_surround, strat_path_reversible};
pub use product::{strat_product_reversible, strat_product_standard};
pub use qbf::{strat_qbf, QbfStrategy};
pub use road::RoadChallenger;
pub use tree::{
    strat_modified, strat_pyramid_reversible, strat_pyramid_standard, strat_teabag, strat_tree_reversible,
    tree_like_program, TreeLike,
};
pub use xmas::{mold_items, strat_christmas, strat_mold, strat_turnpike, traverse_items};

#[derive(Debug, Error)]
pub enum StrategyError {
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Program(#[from] ProgramError),
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error("{0}")]
    Input(String),
}

pub(crate) fn input(msg: impl Into<String>) -> StrategyError {
    StrategyError::Input(msg.into())
}
