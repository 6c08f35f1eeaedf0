use std::fmt::Write as _;

use pebble_graph::Dag;
use thiserror::Error;

use crate::{apply_move_in_place, Flavor, Move, MoveError, MoveKind, PebbleConfig, Region};

/// An ordered move list tagged with the rules it follows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PebblingTrace {
    pub flavor: Flavor,
    pub moves: Vec<Move>,
}

impl PebblingTrace {
    pub fn new(flavor: Flavor, moves: Vec<Move>) -> Self {
        PebblingTrace { flavor, moves }
    }

    pub fn empty(flavor: Flavor) -> Self {
        PebblingTrace { flavor, moves: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }
}

/// Outcome of replaying a trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceReport {
    pub space: usize,
    pub time: usize,
    pub final_config: PebbleConfig,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("illegal move {mv} at index {index}: {error}")]
    Illegal { index: usize, mv: Move, error: MoveError },
    #[error("start configuration has {got} vertices, graph has {expected}")]
    StartSize { got: usize, expected: usize },
    #[error("only reversible traces can be reversed")]
    NotReversible,
}

/// Replays `t` from the empty configuration.
pub fn validate_trace(d: &Dag, t: &PebblingTrace) -> Result<TraceReport, TraceError> {
    validate_trace_from(d, t, &PebbleConfig::empty(d.node_count()))
}

/// Replays `t` from `start`; the start configuration counts toward space.
pub fn validate_trace_from(d: &Dag, t: &PebblingTrace, start: &PebbleConfig) -> Result<TraceReport, TraceError> {
    replay(d, t, start, None).map(|(report, _)| report)
}

fn replay(
    d: &Dag,
    t: &PebblingTrace,
    start: &PebbleConfig,
    region: Option<&Region>,
) -> Result<(TraceReport, usize), TraceError> {
    if start.node_count() != d.node_count() {
        return Err(TraceError::StartSize { got: start.node_count(), expected: d.node_count() });
    }
    let mut c = start.clone();
    let mut space = c.len();
    let mut rspace = region.map_or(0, |r| c.count_in(r));
    let mut count = c.len();
    let mut rcount = rspace;
    for (index, &mv) in t.moves.iter().enumerate() {
        apply_move_in_place(d, &mut c, mv, t.flavor).map_err(|error| TraceError::Illegal { index, mv, error })?;
        let delta_in = region.is_some_and(|r| r.contains(mv.vertex));
        match mv.kind {
            MoveKind::Place => {
                count += 1;
                rcount += usize::from(delta_in);
            }
            MoveKind::Remove => {
                count -= 1;
                rcount -= usize::from(delta_in);
            }
        }
        space = space.max(count);
        rspace = rspace.max(rcount);
    }
    Ok((TraceReport { space, time: t.moves.len(), final_config: c }, rspace))
}

/// Peak number of pebbles inside `r` while replaying `t` from empty.
pub fn region_space(d: &Dag, t: &PebblingTrace, r: &Region) -> Result<usize, TraceError> {
    replay(d, t, &PebbleConfig::empty(d.node_count()), Some(r)).map(|(_, rs)| rs)
}

/// Replays `t` from `start` and reports the peak count inside `r` with the
/// full report.
pub fn region_space_from(d: &Dag, t: &PebblingTrace, start: &PebbleConfig, r: &Region) -> Result<(TraceReport, usize), TraceError> {
    replay(d, t, start, Some(r))
}

/// Strongest goal a final configuration achieves with respect to the sink.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GoalClass {
    /// Exactly the sink is pebbled.
    Persistent,
    /// The sink is pebbled, possibly with others.
    Visiting,
    /// Every predecessor of the sink is pebbled but the sink is not.
    Surrounding,
    Other,
}

/// Classifies `c` against the sink of `d`, or `None` when `d` has no sink.
pub fn classify_config(d: &Dag, c: &PebbleConfig) -> Option<GoalClass> {
    let z = d.sink()?;
    Some(if c.contains(z) && c.len() == 1 {
        GoalClass::Persistent
    } else if c.contains(z) {
        GoalClass::Visiting
    } else if d.preds(z).iter().all(|&u| c.contains(u)) && !d.preds(z).is_empty() {
        GoalClass::Surrounding
    } else {
        GoalClass::Other
    })
}

/// Replays `t` and classifies its final configuration.
pub fn classify_goal(d: &Dag, t: &PebblingTrace) -> Result<Option<GoalClass>, TraceError> {
    let r = validate_trace(d, t)?;
    Ok(classify_config(d, &r.final_config))
}

/// Reverses a reversible trace: moves in opposite order, kinds flipped.
pub fn reverse_trace(t: &PebblingTrace) -> Result<PebblingTrace, TraceError> {
    if t.flavor != Flavor::Reversible {
        return Err(TraceError::NotReversible);
    }
    Ok(PebblingTrace { flavor: t.flavor, moves: t.moves.iter().rev().map(|m| m.inverse()).collect() })
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("trace line {line}: {message}")]
pub struct TraceParseError {
    pub line: usize,
    pub message: String,
}

/// Parses the `trace <flavor>` / `+v` / `-v` text format.
pub fn parse_trace(text: &str) -> Result<PebblingTrace, TraceParseError> {
    let err = |line: usize, message: String| TraceParseError { line, message };
    let mut flavor = None;
    let mut moves = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        if flavor.is_none() {
            let rest = l.strip_prefix("trace ").ok_or_else(|| err(line, "expected `trace <flavor>`".into()))?;
            flavor = Some(rest.trim().parse::<Flavor>().map_err(|e| err(line, e))?);
            continue;
        }
        let (kind, num) = match l.as_bytes()[0] {
            b'+' => (MoveKind::Place, &l[1..]),
            b'-' => (MoveKind::Remove, &l[1..]),
            _ => return Err(err(line, format!("expected +v or -v, got `{l}`"))),
        };
        let vertex = num.trim().parse().map_err(|_| err(line, format!("bad vertex `{num}`")))?;
        moves.push(Move { kind, vertex });
    }
    let flavor = flavor.ok_or_else(|| err(0, "empty trace file".into()))?;
    Ok(PebblingTrace { flavor, moves })
}

/// Serializes a trace in the text format.
pub fn write_trace(t: &PebblingTrace) -> String {
    let mut out = format!("trace {}\n", t.flavor);
    for m in &t.moves {
        writeln!(out, "{m}").unwrap();
    }
    out
}
