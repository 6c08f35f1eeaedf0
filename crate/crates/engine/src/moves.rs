use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use pebble_graph::{Dag, Vertex};
use thiserror::Error;

use crate::PebbleConfig;

/// Which removal rule applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    Standard,
    Reversible,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Standard => "standard",
            Flavor::Reversible => "reversible",
        })
    }
}

impl FromStr for Flavor {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "standard" => Ok(Flavor::Standard),
            "reversible" => Ok(Flavor::Reversible),
            _ => Err(format!("unknown flavor `{s}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MoveKind {
    Place,
    Remove,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Move {
    pub kind: MoveKind,
    pub vertex: Vertex,
}

impl Move {
    pub fn place(vertex: Vertex) -> Self {
        Move { kind: MoveKind::Place, vertex }
    }

    pub fn remove(vertex: Vertex) -> Self {
        Move { kind: MoveKind::Remove, vertex }
    }

    /// The move that undoes this one.
    pub fn inverse(self) -> Self {
        let kind = match self.kind {
            MoveKind::Place => MoveKind::Remove,
            MoveKind::Remove => MoveKind::Place,
        };
        Move { kind, vertex: self.vertex }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            MoveKind::Place => write!(f, "+{}", self.vertex),
            MoveKind::Remove => write!(f, "-{}", self.vertex),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("vertex {0} out of range")]
    OutOfRange(Vertex),
    #[error("cannot place on {0}: already pebbled")]
    AlreadyPebbled(Vertex),
    #[error("cannot remove from {0}: not pebbled")]
    NotPebbled(Vertex),
    #[error("cannot place on {vertex}: predecessor {pred} is empty")]
    PlaceNeedsPredecessor { vertex: Vertex, pred: Vertex },
    #[error("reversible removal from {vertex} needs predecessor {pred} pebbled")]
    RemoveNeedsPredecessor { vertex: Vertex, pred: Vertex },
}

/// Checks `m` against the rules of `flavor` on the raw bitset `bits`.
pub fn check_move(d: &Dag, bits: &FixedBitSet, m: Move, flavor: Flavor) -> Result<(), MoveError> {
    let v = m.vertex;
    if v >= d.node_count() {
        return Err(MoveError::OutOfRange(v));
    }
    match m.kind {
        MoveKind::Place => {
            if bits.contains(v) {
                return Err(MoveError::AlreadyPebbled(v));
            }
            if let Some(&pred) = d.preds(v).iter().find(|&&u| !bits.contains(u)) {
                return Err(MoveError::PlaceNeedsPredecessor { vertex: v, pred });
            }
        }
        MoveKind::Remove => {
            if !bits.contains(v) {
                return Err(MoveError::NotPebbled(v));
            }
            if flavor == Flavor::Reversible {
                if let Some(&pred) = d.preds(v).iter().find(|&&u| !bits.contains(u)) {
                    return Err(MoveError::RemoveNeedsPredecessor { vertex: v, pred });
                }
            }
        }
    }
    Ok(())
}

/// Applies `m` to `c` in place after checking legality.
pub fn apply_move_in_place(d: &Dag, c: &mut PebbleConfig, m: Move, flavor: Flavor) -> Result<(), MoveError> {
    check_move(d, c.as_set().as_bitset(), m, flavor)?;
    match m.kind {
        MoveKind::Place => c.insert(m.vertex),
        MoveKind::Remove => c.remove(m.vertex),
    };
    Ok(())
}

/// Returns the configuration after the legal move `m`.
pub fn apply_move(d: &Dag, c: &PebbleConfig, m: Move, flavor: Flavor) -> Result<PebbleConfig, MoveError> {
    let mut next = c.clone();
    apply_move_in_place(d, &mut next, m, flavor)?;
    Ok(next)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pyramid1() -> Dag {
        Dag::from_preds(vec![vec![], vec![], vec![0, 1]], Some(2)).unwrap()
    }

    #[test]
    fn source_placement_from_empty() {
        let d = pyramid1();
        let c = apply_move(&d, &PebbleConfig::empty(3), Move::place(0), Flavor::Reversible).unwrap();
        assert_eq!(c.to_vec(), vec![0]);
    }

    #[test]
    fn removal_rules_differ() {
        let d = pyramid1();
        let apex_only = PebbleConfig::from_vertices(3, [2]);
        assert!(apply_move(&d, &apex_only, Move::remove(2), Flavor::Standard).is_ok());
        assert_eq!(
            apply_move(&d, &apex_only, Move::remove(2), Flavor::Reversible),
            Err(MoveError::RemoveNeedsPredecessor { vertex: 2, pred: 0 })
        );
    }

    #[test]
    fn placement_needs_predecessors() {
        let d = pyramid1();
        let c = PebbleConfig::from_vertices(3, [0]);
        assert_eq!(
            apply_move(&d, &c, Move::place(2), Flavor::Standard),
            Err(MoveError::PlaceNeedsPredecessor { vertex: 2, pred: 1 })
        );
        assert_eq!(apply_move(&d, &c, Move::place(0), Flavor::Standard), Err(MoveError::AlreadyPebbled(0)));
    }
}
