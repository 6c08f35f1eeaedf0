use serde::Serialize;

use crate::{PriceQuery, Solution};

/// One solver run in machine-readable form.
#[derive(Clone, Debug, Serialize)]
pub struct PriceRecord {
    pub graph: String,
    pub flavor: String,
    pub goal: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub region: Option<Vec<usize>>,
    pub price: usize,
    pub nodes_expanded: u64,
    pub elapsed_ms: u128,
}

impl PriceRecord {
    pub fn new(graph: impl Into<String>, q: &PriceQuery, s: &Solution) -> Self {
        PriceRecord {
            graph: graph.into(),
            flavor: q.flavor.to_string(),
            goal: q.goal.name().to_string(),
            region: q.region.as_ref().map(|r| r.mask.to_vec()),
            price: s.price,
            nodes_expanded: s.nodes_expanded,
            elapsed_ms: s.elapsed.as_millis(),
        }
    }
}
