use pebble_engine::Region;
use pebble_graph::{Dag, Vertex};

use crate::SolveError;

pub(crate) const MAX_ACTIVE: usize = 128;

/// Configuration encoding over the vertices that may change.
///
/// Only region vertices move. Vertices outside the region whose ancestors
/// all lie outside it start pebbled and stay pebbled; the remaining
/// outside vertices are never pebbled.
pub(crate) struct Space {
    pub global: Vec<Vertex>,
    pub local: Vec<Option<u8>>,
    pub fixed: Vec<bool>,
    pub pred_mask: Vec<u128>,
    pub placeable: Vec<bool>,
}

impl Space {
    pub fn new(d: &Dag, region: Option<&Region>) -> Result<Space, SolveError> {
        let n = d.node_count();
        let in_region = |v: Vertex| region.is_none_or(|r| r.contains(v));
        let mut fixed = vec![false; n];
        for v in d.topological_order() {
            fixed[v] = !in_region(v) && d.preds(v).iter().all(|&u| fixed[u]);
        }
        let global: Vec<Vertex> = d.vertices().filter(|&v| in_region(v)).collect();
        if global.len() > MAX_ACTIVE {
            return Err(SolveError::TooManyVertices { active: global.len(), limit: MAX_ACTIVE });
        }
        let mut local = vec![None; n];
        for (i, &v) in global.iter().enumerate() {
            local[v] = Some(i as u8);
        }
        let mut pred_mask = Vec::with_capacity(global.len());
        let mut placeable = Vec::with_capacity(global.len());
        for &v in &global {
            let mut mask = 0u128;
            let mut ok = true;
            for &u in d.preds(v) {
                match local[u] {
                    Some(i) => mask |= 1 << i,
                    None => ok &= fixed[u],
                }
            }
            pred_mask.push(mask);
            placeable.push(ok);
        }
        Ok(Space { global, local, fixed, pred_mask, placeable })
    }

    /// Classes of at least two interchangeable active vertices: equal
    /// predecessor and successor sets, and all inside or all outside `keep`.
    pub fn twin_classes(&self, d: &Dag, keep: u128) -> Vec<u128> {
        let mut groups: std::collections::BTreeMap<(Vec<Vertex>, Vec<Vertex>, bool, bool), u128> = Default::default();
        for (i, &v) in self.global.iter().enumerate() {
            let key = (d.preds(v).to_vec(), d.succs(v).to_vec(), self.placeable[i], keep >> i & 1 == 1);
            *groups.entry(key).or_default() |= 1 << i;
        }
        groups.into_values().filter(|m| m.count_ones() > 1).collect()
    }

    pub fn len(&self) -> usize {
        self.global.len()
    }

    pub fn bit(&self, v: Vertex) -> Option<u128> {
        self.local[v].map(|i| 1u128 << i)
    }

    pub fn fixed_vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.fixed.iter().enumerate().filter(|(_, &f)| f).map(|(v, _)| v)
    }

    /// Mask of `vs`, or `None` if some vertex is neither active nor fixed.
    pub fn mask_of(&self, vs: impl IntoIterator<Item = Vertex>) -> Option<u128> {
        let mut m = 0;
        for v in vs {
            match self.bit(v) {
                Some(b) => m |= b,
                None if self.fixed[v] => {}
                None => return None,
            }
        }
        Some(m)
    }

    pub fn to_vertices(&self, c: u128) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.len()).filter(move |&i| c >> i & 1 == 1).map(|i| self.global[i])
    }
}
