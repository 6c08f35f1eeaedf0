use crate::{Dag, GraphError, Vertex, VertexSet};

fn closure(d: &Dag, v: Vertex, step: impl Fn(Vertex) -> Vec<Vertex>) -> Result<VertexSet, GraphError> {
    d.check_vertex(v)?;
    let mut seen = VertexSet::new(d.node_count());
    seen.insert(v);
    let mut stack = vec![v];
    while let Some(u) = stack.pop() {
        for w in step(u) {
            if seen.insert(w) {
                stack.push(w);
            }
        }
    }
    Ok(seen)
}

/// Every vertex with a path to `v`, including `v` itself.
pub fn ancestors(d: &Dag, v: Vertex) -> Result<VertexSet, GraphError> {
    closure(d, v, |u| d.preds(u).to_vec())
}

/// Ancestors of `v` excluding `v`.
pub fn proper_ancestors(d: &Dag, v: Vertex) -> Result<VertexSet, GraphError> {
    let mut s = ancestors(d, v)?;
    s.remove(v);
    Ok(s)
}

/// Every vertex reachable from `v`, including `v` itself.
pub fn descendants(d: &Dag, v: Vertex) -> Result<VertexSet, GraphError> {
    closure(d, v, |u| d.succs(u).to_vec())
}

/// Descendants of `v` excluding `v`.
pub fn proper_descendants(d: &Dag, v: Vertex) -> Result<VertexSet, GraphError> {
    let mut s = descendants(d, v)?;
    s.remove(v);
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pyramid1() -> Dag {
        Dag::from_preds(vec![vec![], vec![], vec![0, 1]], Some(2)).unwrap()
    }

    #[test]
    fn source_ancestors_are_itself() {
        let d = pyramid1();
        assert_eq!(ancestors(&d, 0).unwrap().to_vec(), vec![0]);
        assert!(proper_ancestors(&d, 0).unwrap().is_empty());
    }

    #[test]
    fn sink_ancestors_cover_pyramid() {
        let d = pyramid1();
        assert_eq!(ancestors(&d, 2).unwrap().to_vec(), vec![0, 1, 2]);
        assert_eq!(descendants(&d, 1).unwrap().to_vec(), vec![1, 2]);
    }

    #[test]
    fn out_of_range_is_an_error() {
        assert!(ancestors(&pyramid1(), 3).is_err());
    }
}
