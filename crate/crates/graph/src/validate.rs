use std::fmt;

use crate::dag::topo;
use crate::{Dag, DagBuilder, GraphError, Vertex};

/// One violated structural property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    OutOfRange { vertex: Vertex },
    SelfLoop { vertex: Vertex },
    Cycle { vertex: Vertex },
    FanIn { vertex: Vertex, fanin: usize, max: usize },
    NoSink,
    MultipleSinks { sinks: Vec<Vertex> },
    DesignatedSinkMismatch { designated: Vertex, actual: Vec<Vertex> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::OutOfRange { vertex } => write!(f, "edge endpoint {vertex} out of range"),
            Violation::SelfLoop { vertex } => write!(f, "self-loop on {vertex}"),
            Violation::Cycle { vertex } => write!(f, "cycle through {vertex}"),
            Violation::FanIn { vertex, fanin, max } => {
                write!(f, "vertex {vertex} has fan-in {fanin} > {max}")
            }
            Violation::NoSink => write!(f, "no vertex of out-degree 0"),
            Violation::MultipleSinks { sinks } => write!(f, "multiple sinks {sinks:?}"),
            Violation::DesignatedSinkMismatch { designated, actual } => {
                write!(f, "designated sink {designated} but sinks are {actual:?}")
            }
        }
    }
}

/// Result of [`validate`]: summary facts plus every violation found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub node_count: usize,
    pub acyclic: bool,
    pub max_fanin: usize,
    pub sinks: Vec<Vertex>,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks a built graph for fan-in and sink properties.
pub fn validate(d: &Dag, require_single_sink: bool, max_fanin: usize) -> ValidationReport {
    let preds: Vec<Vec<Vertex>> = d.vertices().map(|v| d.preds(v).to_vec()).collect();
    check(&preds, d.sink(), None, require_single_sink, max_fanin)
}

/// Checks raw builder contents, including acyclicity and edge ranges.
pub fn validate_builder(b: &DagBuilder, require_single_sink: bool, max_fanin: usize) -> ValidationReport {
    let (preds, sink, range) = b.raw();
    check(preds, sink, range, require_single_sink, max_fanin)
}

fn check(
    preds: &[Vec<Vertex>],
    sink: Option<Vertex>,
    range: Option<&GraphError>,
    require_single_sink: bool,
    max_fanin: usize,
) -> ValidationReport {
    let n = preds.len();
    let mut violations = Vec::new();
    if let Some(GraphError::OutOfRange { vertex, .. }) = range {
        violations.push(Violation::OutOfRange { vertex: *vertex });
    }
    for (v, ps) in preds.iter().enumerate() {
        if ps.contains(&v) {
            violations.push(Violation::SelfLoop { vertex: v });
        }
        if ps.len() > max_fanin {
            violations.push(Violation::FanIn { vertex: v, fanin: ps.len(), max: max_fanin });
        }
    }
    let acyclic = match topo(preds) {
        Ok(_) => true,
        Err(GraphError::Cycle { vertex }) => {
            if !violations.iter().any(|x| matches!(x, Violation::SelfLoop { .. })) {
                violations.push(Violation::Cycle { vertex });
            }
            false
        }
        Err(_) => false,
    };
    let mut has_succ = vec![false; n];
    for ps in preds {
        for &u in ps {
            if u < n {
                has_succ[u] = true;
            }
        }
    }
    let sinks: Vec<Vertex> = (0..n).filter(|&v| !has_succ[v]).collect();
    if require_single_sink {
        match sinks.len() {
            0 => violations.push(Violation::NoSink),
            1 => {}
            _ => violations.push(Violation::MultipleSinks { sinks: sinks.clone() }),
        }
    }
    if let Some(z) = sink {
        if !sinks.contains(&z) || (require_single_sink && sinks.len() != 1) {
            violations.push(Violation::DesignatedSinkMismatch { designated: z, actual: sinks.clone() });
        }
    }
    let max_fanin_seen = preds.iter().map(Vec::len).max().unwrap_or(0);
    ValidationReport { node_count: n, acyclic, max_fanin: max_fanin_seen, sinks, violations }
}
