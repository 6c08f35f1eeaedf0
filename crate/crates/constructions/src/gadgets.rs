use std::collections::HashMap;

use pebble_graph::{ancestors, Vertex, VertexSet};
use pebble_qbf::{gamma, GammaLedger, Qbf, Quantifier};

use crate::handle::{domain, Composer, ConstructionError, GadgetHandle};
use crate::xmas::{christmas_tree, turnpike};

/// A turnpike placed inside a larger graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TurnpikeRecord {
    pub toll: usize,
    pub a: Vertex,
    pub b: Vertex,
    /// Composed id of each vertex of the standalone `turnpike(toll)`.
    pub map: Vec<Vertex>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiteralParts {
    pub price: usize,
    /// The literal node `l`.
    pub node: Vertex,
    /// The sink `l'` of the embedded christmas tree.
    pub prime: Vertex,
    /// Composed id of each vertex of the standalone `christmas_tree(price)`.
    pub tree: Vec<Vertex>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableParts {
    pub pos: LiteralParts,
    pub neg: LiteralParts,
}

impl VariableParts {
    pub fn literal(&self, positive: bool) -> &LiteralParts {
        if positive {
            &self.pos
        } else {
            &self.neg
        }
    }

    /// Nodes pebbled in the canonical position of `value`.
    pub fn canonical(&self, value: bool) -> [Vertex; 2] {
        if value {
            [self.pos.node, self.neg.prime]
        } else {
            [self.pos.prime, self.neg.node]
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseParts {
    pub beta: usize,
    /// Literal nodes feeding `a`, `b`, `c`.
    pub inputs: [Vertex; 3],
    pub a: Vertex,
    pub b: Vertex,
    pub c: Vertex,
    pub u: Vertex,
    pub v: Vertex,
    pub p: Vertex,
    /// Indices into the builder's turnpike list, in input order.
    pub turnpikes: [usize; 3],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjunctionParts {
    pub weight: usize,
    pub z1: Vertex,
    pub z2: Vertex,
    pub d: [Vertex; 4],
    pub e: Vertex,
    /// Turnpikes `z1 -> d1`, `z2 -> d2`, `d3 -> d4`.
    pub turnpikes: [usize; 3],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuantifierParts {
    Exists {
        prev: Vertex,
        f: Vertex,
        g: Vertex,
        q: Vertex,
        /// Turnpike `prev -> f`.
        turnpike: usize,
    },
    Forall {
        prev: Vertex,
        /// `f'` and its negated twin, indexed by the branch value (`[0]` is true).
        f_prime: [Vertex; 2],
        f: [Vertex; 2],
        g: [Vertex; 2],
        h: [Vertex; 2],
        q: Vertex,
        /// Turnpikes `f' -> f` for both branches, then `prev -> g` for both.
        turnpikes: [usize; 4],
    },
}

impl QuantifierParts {
    pub fn sink(&self) -> Vertex {
        match *self {
            QuantifierParts::Exists { q, .. } | QuantifierParts::Forall { q, .. } => q,
        }
    }
}

/// Composer with caches for the repeated christmas trees and turnpikes.
#[derive(Default)]
pub struct GadgetBuilder {
    pub comp: Composer,
    pub turnpikes: Vec<TurnpikeRecord>,
    trees: HashMap<usize, GadgetHandle>,
    pikes: HashMap<usize, GadgetHandle>,
}

impl GadgetBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Embeds `T_r` and returns its vertex map.
    pub fn christmas(&mut self, r: usize) -> Result<Vec<Vertex>, ConstructionError> {
        if let std::collections::hash_map::Entry::Vacant(e) = self.trees.entry(r) {
            e.insert(christmas_tree(r)?);
        }
        self.comp.embed(&self.trees[&r].graph, &[])
    }

    /// Adds a turnpike of toll `r` leaving the existing vertex `from`.
    pub fn turnpike(&mut self, r: usize, from: Vertex) -> Result<usize, ConstructionError> {
        if let std::collections::hash_map::Entry::Vacant(e) = self.pikes.entry(r) {
            e.insert(turnpike(r)?);
        }
        let tp = &self.pikes[&r];
        let (a, b) = (tp.anchor("a")?, tp.anchor("b")?);
        let map = self.comp.embed(&tp.graph, &[(a, from)])?;
        let b = map[b];
        self.turnpikes.push(TurnpikeRecord { toll: r, a: from, b, map });
        Ok(self.turnpikes.len() - 1)
    }

    pub fn literal(&mut self, r: usize, name: &str) -> Result<LiteralParts, ConstructionError> {
        if r == 0 {
            return Err(domain("literal price must be at least 1"));
        }
        let tree = self.christmas(r)?;
        let prime = tree[self.trees[&r].sink()];
        let node = self.comp.add_named(name);
        self.comp.add_edge(prime, node);
        self.comp.name(format!("{name}'"), prime);
        Ok(LiteralParts { price: r, node, prime, tree })
    }

    /// Two literal gadgets named `x` and `-x` (with primes) after `name`.
    pub fn variable(&mut self, r: usize, name: &str) -> Result<VariableParts, ConstructionError> {
        let pos = self.literal(r, name)?;
        let neg = self.literal(r, &format!("-{name}"))?;
        Ok(VariableParts { pos, neg })
    }

    /// Clause gadget over the three literal nodes `inputs`; anchors get `suffix`.
    pub fn clause(&mut self, beta: usize, inputs: [Vertex; 3], suffix: &str) -> Result<ClauseParts, ConstructionError> {
        if beta < 2 {
            return Err(domain("clause toll must be at least 2"));
        }
        let mut tps = [0; 3];
        let mut ends = [0; 3];
        for k in 0..3 {
            tps[k] = self.turnpike(beta, inputs[k])?;
            ends[k] = self.turnpikes[tps[k]].b;
        }
        let [a, b, c] = ends;
        for (nm, v) in [("a", a), ("b", b), ("c", c)] {
            self.comp.name(format!("{nm}{suffix}"), v);
        }
        let u = self.comp.add_named(format!("u{suffix}"));
        let v = self.comp.add_named(format!("v{suffix}"));
        let p = self.comp.add_named(format!("p{suffix}"));
        for (x, y) in [(a, u), (b, u), (b, v), (c, v), (u, p), (v, p)] {
            self.comp.add_edge(x, y);
        }
        Ok(ClauseParts { beta, inputs, a, b, c, u, v, p, turnpikes: tps })
    }

    /// Conjunction gadget of weight `r` over existing sinks `z1`, `z2`.
    pub fn conjunction(&mut self, r: usize, z1: Vertex, z2: Vertex, suffix: &str) -> Result<ConjunctionParts, ConstructionError> {
        if r < 2 {
            return Err(domain("conjunction weight must be at least 2"));
        }
        let t1 = self.turnpike(r, z1)?;
        let t2 = self.turnpike(r - 1, z2)?;
        let (d1, d2) = (self.turnpikes[t1].b, self.turnpikes[t2].b);
        let d3 = self.comp.add_vertex();
        self.comp.add_edge(d1, d3);
        self.comp.add_edge(d2, d3);
        let t3 = self.turnpike(r - 2, d3)?;
        let d4 = self.turnpikes[t3].b;
        let e = self.comp.add_named(format!("e{suffix}"));
        self.comp.add_edge(d4, e);
        for (k, v) in [d1, d2, d3, d4].into_iter().enumerate() {
            self.comp.name(format!("d{}{suffix}", k + 1), v);
        }
        Ok(ConjunctionParts { weight: r, z1, z2, d: [d1, d2, d3, d4], e, turnpikes: [t1, t2, t3] })
    }

    /// Existential level `i` with budget `gamma_i` above the sink `prev`.
    pub fn existential(&mut self, gamma_i: usize, prev: Vertex, var: &VariableParts, i: usize) -> Result<QuantifierParts, ConstructionError> {
        let toll = gamma_i.checked_sub(5).ok_or_else(|| domain("existential level needs gamma_i >= 5"))?;
        let tp = self.turnpike(toll, prev)?;
        let f = self.turnpikes[tp].b;
        self.comp.name(format!("f{i}"), f);
        let g = self.comp.add_named(format!("g{i}"));
        let q = self.comp.add_named(format!("q{i}"));
        self.comp.add_edge(var.pos.node, g);
        self.comp.add_edge(var.neg.node, g);
        self.comp.add_edge(f, q);
        self.comp.add_edge(g, q);
        Ok(QuantifierParts::Exists { prev, f, g, q, turnpike: tp })
    }

    /// Universal level `i` with budget `gamma_i` above the sink `prev`.
    pub fn universal(&mut self, gamma_i: usize, prev: Vertex, var: &VariableParts, i: usize) -> Result<QuantifierParts, ConstructionError> {
        let t6 = gamma_i.checked_sub(6).ok_or_else(|| domain("universal level needs gamma_i >= 7"))?;
        let t7 = gamma_i.checked_sub(7).ok_or_else(|| domain("universal level needs gamma_i >= 7"))?;
        let fp = self.comp.add_named(format!("f{i}'"));
        let fbp = self.comp.add_named(format!("-f{i}'"));
        self.comp.add_edge(var.pos.node, fp);
        self.comp.add_edge(var.neg.prime, fp);
        self.comp.add_edge(var.neg.node, fbp);
        self.comp.add_edge(var.pos.prime, fbp);
        let tf = self.turnpike(t6, fp)?;
        let tfb = self.turnpike(t6, fbp)?;
        let tg = self.turnpike(t7, prev)?;
        let tgb = self.turnpike(t7, prev)?;
        let f = [self.turnpikes[tf].b, self.turnpikes[tfb].b];
        let g = [self.turnpikes[tg].b, self.turnpikes[tgb].b];
        self.comp.name(format!("f{i}"), f[0]);
        self.comp.name(format!("-f{i}"), f[1]);
        self.comp.name(format!("g{i}"), g[0]);
        self.comp.name(format!("-g{i}"), g[1]);
        let h = [self.comp.add_named(format!("h{i}")), self.comp.add_named(format!("-h{i}"))];
        let q = self.comp.add_named(format!("q{i}"));
        for s in 0..2 {
            self.comp.add_edge(f[s], h[s]);
            self.comp.add_edge(g[s], h[s]);
            self.comp.add_edge(h[s], q);
        }
        Ok(QuantifierParts::Forall { prev, f_prime: [fp, fbp], f, g, h, q, turnpikes: [tf, tfb, tg, tgb] })
    }
}

/// `T_r` with a literal node above its sink. Anchors `l` and `l'`.
pub fn literal_gadget(r: usize) -> Result<GadgetHandle, ConstructionError> {
    let mut b = GadgetBuilder::new();
    let lit = b.literal(r, "l")?;
    b.comp.finish(Some(lit.node))
}

/// Two disjoint literal gadgets with anchors `x`, `x'`, `-x`, `-x'`.
pub fn variable_gadget(r: usize) -> Result<GadgetHandle, ConstructionError> {
    let mut b = GadgetBuilder::new();
    b.variable(r, "x")?;
    b.comp.finish(None)
}

/// Clause gadget of toll `beta` over three literal gadgets (anchors `l`,
/// `l'`). Their anchors become `l1`, `l1'`, and so on; the clause nodes
/// keep their plain names and `p` is the sink.
pub fn clause_gadget(beta: usize, literals: [&GadgetHandle; 3]) -> Result<GadgetHandle, ConstructionError> {
    let mut b = GadgetBuilder::new();
    let mut inputs = [0; 3];
    for (k, lit) in literals.iter().enumerate() {
        let map = b.comp.embed(&lit.graph, &[])?;
        inputs[k] = map[lit.anchor("l")?];
        b.comp.name(format!("l{}", k + 1), inputs[k]);
        b.comp.name(format!("l{}'", k + 1), map[lit.anchor("l'")?]);
    }
    let c = b.clause(beta, inputs, "")?;
    b.comp.finish(Some(c.p))
}

/// Conjunction gadget of weight `r` over two single-sink gadgets.
/// Anchors `z1`, `z2`, `d1`..`d4` and the sink `e`.
pub fn conjunction_gadget(r: usize, g1: &GadgetHandle, g2: &GadgetHandle) -> Result<GadgetHandle, ConstructionError> {
    let mut b = GadgetBuilder::new();
    let m1 = b.comp.embed(&g1.graph, &[])?;
    let m2 = b.comp.embed(&g2.graph, &[])?;
    let (z1, z2) = (m1[g1.sink()], m2[g2.sink()]);
    b.comp.name("z1", z1);
    b.comp.name("z2", z2);
    let c = b.conjunction(r, z1, z2, "")?;
    b.comp.finish(Some(c.e))
}

/// Quantifier level built on top of an existing gadget `prev` (its sink is
/// `q_{i-1}`) and a variable gadget with anchors `x`, `x'`, `-x`, `-x'`.
pub fn quantifier_gadget(q: Quantifier, gamma_i: usize, prev: &GadgetHandle, var: &GadgetHandle) -> Result<GadgetHandle, ConstructionError> {
    let mut b = GadgetBuilder::new();
    let mp = b.comp.embed(&prev.graph, &[])?;
    let mv = b.comp.embed(&var.graph, &[])?;
    let lit = |name: &str, prime: &str| -> Result<LiteralParts, ConstructionError> {
        Ok(LiteralParts { price: 0, node: mv[var.anchor(name)?], prime: mv[var.anchor(prime)?], tree: Vec::new() })
    };
    let parts = VariableParts { pos: lit("x", "x'")?, neg: lit("-x", "-x'")? };
    for (name, v) in [("x", parts.pos.node), ("x'", parts.pos.prime), ("-x", parts.neg.node), ("-x'", parts.neg.prime)] {
        b.comp.name(name, v);
    }
    b.comp.name("prev", mp[prev.sink()]);
    let qp = match q {
        Quantifier::Exists => b.existential(gamma_i, mp[prev.sink()], &parts, 1)?,
        Quantifier::Forall => b.universal(gamma_i, mp[prev.sink()], &parts, 1)?,
    };
    b.comp.finish(Some(qp.sink()))
}

/// CNF gadget over the variable gadgets `variables[v - 1]` (anchors `x`,
/// `x'`, `-x`, `-x'`) with clause tolls `2j`. No clauses leaves the base `T_7`.
pub fn cnf_gadget(clauses: &[[i32; 3]], variables: &[&GadgetHandle]) -> Result<GadgetHandle, ConstructionError> {
    let mut b = GadgetBuilder::new();
    let mut nodes = Vec::with_capacity(variables.len());
    for (k, var) in variables.iter().enumerate() {
        let map = b.comp.embed(&var.graph, &[])?;
        for name in ["x", "x'", "-x", "-x'"] {
            b.comp.name(name.replacen('x', &format!("x{}", k + 1), 1), map[var.anchor(name)?]);
        }
        nodes.push((map[var.anchor("x")?], map[var.anchor("-x")?]));
    }
    let base = b.christmas(7)?;
    let mut sink = base[base.len() - 1];
    b.comp.name("t7", sink);
    for (j, c) in clauses.iter().enumerate() {
        let mut inputs = [0; 3];
        for k in 0..3 {
            let v = c[k].unsigned_abs() as usize;
            if v == 0 || v > nodes.len() {
                return Err(domain(format!("clause {} uses unknown variable {v}", j + 1)));
            }
            if c[..k].iter().any(|l| l.unsigned_abs() as usize == v) {
                return Err(domain(format!("clause {} repeats variable {v}", j + 1)));
            }
            inputs[k] = if c[k] > 0 { nodes[v - 1].0 } else { nodes[v - 1].1 };
        }
        let beta = 2 * (j + 1);
        let cl = b.clause(beta, inputs, &(j + 1).to_string())?;
        sink = b.conjunction(conjunction_weight(beta), sink, cl.p, &format!("_{}", j + 1))?.e;
    }
    b.comp.finish(Some(sink))
}

pub fn existential_gadget(gamma_i: usize, prev: &GadgetHandle, var: &GadgetHandle) -> Result<GadgetHandle, ConstructionError> {
    quantifier_gadget(Quantifier::Exists, gamma_i, prev, var)
}

pub fn universal_gadget(gamma_i: usize, prev: &GadgetHandle, var: &GadgetHandle) -> Result<GadgetHandle, ConstructionError> {
    quantifier_gadget(Quantifier::Forall, gamma_i, prev, var)
}

/// The full reduction graph of a formula with everything needed to pebble it.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub gadget: GadgetHandle,
    pub ledger: GammaLedger,
    /// Variable gadgets by innermost position (`[0]` is `x_1`).
    pub variables: Vec<VariableParts>,
    /// Composed ids of the base `T_7`.
    pub base: Vec<Vertex>,
    pub clauses: Vec<ClauseParts>,
    pub conjunctions: Vec<ConjunctionParts>,
    /// Quantifier levels by innermost position.
    pub quantifiers: Vec<QuantifierParts>,
    pub turnpikes: Vec<TurnpikeRecord>,
}

/// Weight of the conjunction joining clause `k` (1-based).
pub fn conjunction_weight(beta_k: usize) -> usize {
    beta_k + 4
}

impl Reduction {
    /// Sink of the CNF part, `q_0`.
    pub fn cnf_sink(&self) -> Vertex {
        self.conjunctions.last().map(|c| c.e).unwrap_or(self.base[self.base.len() - 1])
    }

    /// Sink of level `i`, with `q_0` the CNF sink.
    pub fn level_sink(&self, i: usize) -> Vertex {
        if i == 0 {
            self.cnf_sink()
        } else {
            self.quantifiers[i - 1].sink()
        }
    }

    /// Literal gadget of a signed QDIMACS literal.
    pub fn literal_of(&self, lit: i32) -> &LiteralParts {
        let i = self.ledger.position_of(lit.unsigned_abs());
        self.variables[i - 1].literal(lit > 0)
    }

    /// Canonical nodes of a partial assignment by innermost position.
    pub fn canonical_nodes(&self, assignment: &[Option<bool>]) -> Vec<Vertex> {
        let mut out = Vec::new();
        for (i, a) in assignment.iter().enumerate() {
            if let Some(b) = *a {
                out.extend(self.variables[i].canonical(b));
            }
        }
        out
    }

    /// All vertices outside the ancestors of `nodes`.
    pub fn region_beyond(&self, nodes: &[Vertex]) -> VertexSet {
        let d = &self.gadget.graph;
        let mut excluded = VertexSet::new(d.node_count());
        for &v in nodes {
            excluded.union_with(&ancestors(d, v).expect("anchor in range"));
        }
        excluded.complement()
    }
}

/// Builds the graph whose persistent price is the formula budget plus one
/// exactly when the formula is false.
///
/// Layout: variable gadgets (innermost first), the base `T_7`, clause and
/// conjunction gadgets in clause order, then the quantifier levels.
pub fn qbf_reduction(phi: &Qbf) -> Result<Reduction, ConstructionError> {
    let ledger = gamma(phi).map_err(|e| domain(e.to_string()))?;
    let mut b = GadgetBuilder::new();
    let n = phi.var_count();
    let mut variables = Vec::with_capacity(n);
    for i in 1..=n {
        variables.push(b.variable(ledger.literal_price[i - 1], &format!("x{i}"))?);
    }
    let base = b.christmas(7)?;
    let mut sink = base[base.len() - 1];
    b.comp.name("t7", sink);
    let mut clauses = Vec::new();
    let mut conjunctions = Vec::new();
    for (j, c) in phi.clauses().iter().enumerate() {
        let inputs = c.map(|lit| {
            let i = ledger.position_of(lit.unsigned_abs());
            variables[i - 1].literal(lit > 0).node
        });
        let beta = ledger.beta[j];
        let cl = b.clause(beta, inputs, &(j + 1).to_string())?;
        let conj = b.conjunction(conjunction_weight(beta), sink, cl.p, &format!("_{}", j + 1))?;
        sink = conj.e;
        clauses.push(cl);
        conjunctions.push(conj);
    }
    b.comp.name("q0", sink);
    let mut quantifiers = Vec::with_capacity(n);
    for i in 1..=n {
        let var = &variables[i - 1];
        let gi = ledger.gamma[i];
        let qp = match ledger.quantifiers[i - 1] {
            Quantifier::Exists => b.existential(gi, sink, var, i)?,
            Quantifier::Forall => b.universal(gi, sink, var, i)?,
        };
        sink = qp.sink();
        quantifiers.push(qp);
    }
    let GadgetBuilder { comp, turnpikes, .. } = b;
    let gadget = comp.finish(Some(sink))?;
    Ok(Reduction { gadget, ledger, variables, base, clauses, conjunctions, quantifiers, turnpikes })
}
