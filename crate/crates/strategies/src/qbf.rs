use pebble_constructions::{qbf_reduction, QuantifierParts, Reduction};
use pebble_engine::{reverse_items, Flavor, Item, MacroId, TraceProgram};
use pebble_qbf::{Qbf, Quantifier};
use rustc_hash::FxHashMap;

use crate::xmas::{strat_christmas, traverse_items};
use crate::StrategyError;

/// A persistent reversible pebbling of the reduction graph of a formula.
pub struct QbfStrategy {
    pub reduction: Reduction,
    pub program: TraceProgram,
    /// Truth value of the formula, which decides the expected space.
    pub truth: bool,
}

impl QbfStrategy {
    /// Space the pebbling is built to use: the budget, plus one when false.
    pub fn expected_space(&self) -> usize {
        self.reduction.ledger.total() + usize::from(!self.truth)
    }
}

/// Pebbles the sink of `qbf_reduction(phi)` level by level. Existential
/// levels commit to a satisfying value when there is one; universal levels
/// run the true branch, undo it while keeping its witness, then run the
/// false branch.
pub fn strat_qbf(phi: &Qbf) -> Result<QbfStrategy, StrategyError> {
    let reduction = qbf_reduction(phi)?;
    let mut e = Emitter {
        phi,
        red: &reduction,
        prog: TraceProgram::new(Flavor::Reversible),
        xmas: FxHashMap::default(),
        literal: FxHashMap::default(),
        traverse: FxHashMap::default(),
        assign: FxHashMap::default(),
        cnf: FxHashMap::default(),
        clause: FxHashMap::default(),
        level: FxHashMap::default(),
    };
    let top = e.level(phi.var_count(), &[])?;
    let mut program = e.prog;
    program.set_main(vec![Item::call(top)])?;
    Ok(QbfStrategy { reduction, program, truth: phi.evaluate() })
}

/// Outer assignments are stored in prefix order (outermost first), so the
/// values fixed above level `i` are exactly the first `n - i` entries.
struct Emitter<'a> {
    phi: &'a Qbf,
    red: &'a Reduction,
    prog: TraceProgram,
    xmas: FxHashMap<usize, TraceProgram>,
    literal: FxHashMap<(usize, bool), MacroId>,
    traverse: FxHashMap<usize, MacroId>,
    assign: FxHashMap<(usize, bool), MacroId>,
    cnf: FxHashMap<(usize, Vec<bool>), MacroId>,
    clause: FxHashMap<(usize, Vec<bool>), MacroId>,
    level: FxHashMap<(usize, Vec<bool>), MacroId>,
}

fn persistent(s: Vec<Item>, target: usize) -> Vec<Item> {
    let mut items = s.clone();
    items.push(Item::place(target));
    items.extend(reverse_items(&s));
    items
}

impl Emitter<'_> {
    fn christmas(&mut self, r: usize) -> Result<&TraceProgram, StrategyError> {
        if let std::collections::hash_map::Entry::Vacant(e) = self.xmas.entry(r) {
            e.insert(strat_christmas(r)?);
        }
        Ok(&self.xmas[&r])
    }

    /// Pebbles the prime of the literal at innermost position `i`.
    fn literal(&mut self, i: usize, positive: bool) -> Result<MacroId, StrategyError> {
        if let Some(&id) = self.literal.get(&(i, positive)) {
            return Ok(id);
        }
        let lit = self.red.variables[i - 1].literal(positive);
        self.christmas(lit.price)?;
        let src = &self.xmas[&lit.price];
        let items = self.prog.embed_relabeled(src, src.main(), &lit.tree)?;
        let id = self.prog.add_macro(items)?;
        self.literal.insert((i, positive), id);
        Ok(id)
    }

    fn traverse(&mut self, k: usize) -> Result<MacroId, StrategyError> {
        if let Some(&id) = self.traverse.get(&k) {
            return Ok(id);
        }
        let rec = &self.red.turnpikes[k];
        if rec.toll > 0 {
            self.christmas(rec.toll)?;
        }
        let items = traverse_items(&mut self.prog, rec.toll, self.xmas.get(&rec.toll), &rec.map)?;
        let id = self.prog.add_macro(items)?;
        self.traverse.insert(k, id);
        Ok(id)
    }

    /// Moves variable `i` into its canonical position for `value`.
    fn assign(&mut self, i: usize, value: bool) -> Result<MacroId, StrategyError> {
        if let Some(&id) = self.assign.get(&(i, value)) {
            return Ok(id);
        }
        let first = self.literal(i, value)?;
        let second = self.literal(i, !value)?;
        let node = self.red.variables[i - 1].literal(value).node;
        let items = vec![Item::call(first), Item::place(node), Item::call_rev(first), Item::call(second)];
        let id = self.prog.add_macro(items)?;
        self.assign.insert((i, value), id);
        Ok(id)
    }

    fn value_of(&self, var: u32, full: &[bool]) -> bool {
        let n = self.phi.var_count();
        full[n - self.red.ledger.position_of(var)]
    }

    /// Persistent pebbling of clause `j`'s sink with every variable assigned.
    fn clause(&mut self, j: usize, full: &[bool]) -> Result<MacroId, StrategyError> {
        let key = (j, full.to_vec());
        if let Some(&id) = self.clause.get(&key) {
            return Ok(id);
        }
        let lits = self.phi.clauses()[j - 1];
        let cl = self.red.clauses[j - 1].clone();
        let truth: Vec<bool> = lits.iter().map(|&l| self.value_of(l.unsigned_abs(), full) == (l > 0)).collect();
        let mut s = Vec::new();
        for want in [false, true] {
            for k in (0..3).filter(|&k| truth[k] == want) {
                let t = self.traverse(cl.turnpikes[k])?;
                if want {
                    s.push(Item::call(t));
                } else {
                    s.extend([Item::place(cl.inputs[k]), Item::call(t), Item::remove(cl.inputs[k])]);
                }
            }
        }
        s.extend([Item::place(cl.u), Item::place(cl.v)]);
        let id = self.prog.add_macro(persistent(s, cl.p))?;
        self.clause.insert(key, id);
        Ok(id)
    }

    /// Persistent pebbling of the sink of the first `k` conjunctions.
    fn cnf(&mut self, k: usize, full: &[bool]) -> Result<MacroId, StrategyError> {
        let key = (k, full.to_vec());
        if let Some(&id) = self.cnf.get(&key) {
            return Ok(id);
        }
        let id = if k == 0 {
            self.christmas(7)?;
            let src = &self.xmas[&7];
            let items = self.prog.embed_relabeled(src, src.main(), &self.red.base)?;
            self.prog.add_macro(items)?
        } else {
            let c = self.red.conjunctions[k - 1].clone();
            let below = self.cnf(k - 1, full)?;
            let cl = self.clause(k, full)?;
            let [t1, t2, t3] = [self.traverse(c.turnpikes[0])?, self.traverse(c.turnpikes[1])?, self.traverse(c.turnpikes[2])?];
            let s = vec![
                Item::call(below),
                Item::call(t1),
                Item::call_rev(below),
                Item::call(cl),
                Item::call(t2),
                Item::call_rev(cl),
                Item::place(c.d[2]),
                Item::call(t3),
            ];
            self.prog.add_macro(persistent(s, c.e))?
        };
        self.cnf.insert(key, id);
        Ok(id)
    }

    /// Persistent pebbling of `q_i` with the outer variables fixed to `outer`.
    fn level(&mut self, i: usize, outer: &[bool]) -> Result<MacroId, StrategyError> {
        let key = (i, outer.to_vec());
        if let Some(&id) = self.level.get(&key) {
            return Ok(id);
        }
        if i == 0 {
            let id = self.cnf(self.red.conjunctions.len(), outer)?;
            self.level.insert(key, id);
            return Ok(id);
        }
        let with = |b: bool| {
            let mut v = outer.to_vec();
            v.push(b);
            v
        };
        let var = self.red.variables[i - 1].clone();
        let items = match self.red.quantifiers[i - 1].clone() {
            QuantifierParts::Exists { f: _, g, q, turnpike, .. } => {
                debug_assert_eq!(self.phi.innermost(i).0, Quantifier::Exists);
                let sat = |b: bool| self.phi.evaluate_sub(&with(b)).expect("assignment within the prefix");
                let b = sat(true) || !sat(false);
                let s = vec![
                    Item::call(self.assign(i, b)?),
                    Item::call(self.level(i - 1, &with(b))?),
                    Item::call(self.traverse(turnpike)?),
                    Item::place(var.literal(!b).node),
                    Item::place(g),
                ];
                persistent(s, q)
            }
            QuantifierParts::Forall { f_prime, h, q, turnpikes, .. } => {
                let mut sides = Vec::new();
                for (s, b) in [(0, true), (1, false)] {
                    sides.push(vec![
                        Item::call(self.assign(i, b)?),
                        Item::place(f_prime[s]),
                        Item::call(self.traverse(turnpikes[s])?),
                        Item::remove(f_prime[s]),
                        Item::call(self.level(i - 1, &with(b))?),
                        Item::call(self.traverse(turnpikes[2 + s])?),
                    ]);
                }
                let mut s = sides[0].clone();
                s.push(Item::place(h[0]));
                s.extend(reverse_items(&sides[0]));
                s.extend(sides[1].iter().copied());
                s.push(Item::place(h[1]));
                persistent(s, q)
            }
        };
        let id = self.prog.add_macro(items)?;
        self.level.insert(key, id);
        Ok(id)
    }
}
