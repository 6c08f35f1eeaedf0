//! Pebbling rules, trace replay and cost accounting.
//!
//! Two flavors share placement: a pebble may go on an empty vertex whose
//! predecessors are all pebbled. They differ on removal: [`Flavor::Standard`]
//! removes freely, [`Flavor::Reversible`] needs the predecessors pebbled too,
//! which makes every reversible move sequence legal when read backwards.
//!
//! Flat move lists are [`PebblingTrace`]s. Strategies whose expansions are
//! too long to store use [`TraceProgram`], a straight-line program of macros
//! that [`validate_program`] replays with memoization on each macro's
//! boundary context.

mod config;
mod moves;
mod program;
mod trace;

pub use config::{PebbleConfig, Region};
pub use moves::{apply_move, apply_move_in_place, check_move, Flavor, Move, MoveError, MoveKind};
pub use program::{reverse_items, validate_program, Item, MacroId, ProgramError, ProgramMoves, ProgramReport, TraceProgram};
pub use trace::{
    classify_config, classify_goal, parse_trace, region_space, region_space_from, reverse_trace, validate_trace,
    validate_trace_from, write_trace, GoalClass, PebblingTrace, TraceError, TraceParseError, TraceReport,
};
