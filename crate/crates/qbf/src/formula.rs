use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Quantifier {
    Exists,
    Forall,
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantifier::Exists => "exists",
            Quantifier::Forall => "forall",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum QbfError {
    #[error("literal {0} is zero or names a variable above n")]
    BadLiteral(i32),
    #[error("variable {0} is quantified more than once")]
    DuplicateQuantifier(u32),
    #[error("variable {0} is not quantified")]
    FreeVariable(u32),
    #[error("clause {clause} repeats variable {var}")]
    RepeatedVariable { clause: usize, var: u32 },
    #[error("assignment has {got} values but the formula has {n} variables")]
    AssignmentSize { got: usize, n: usize },
}

/// A closed formula `Q_1 x_1 ... Q_n x_n F` with `F` a 3-CNF.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Qbf {
    n: usize,
    prefix: Vec<(Quantifier, u32)>,
    clauses: Vec<[i32; 3]>,
}

impl Qbf {
    /// Checks that every variable `1..=n` is quantified once and that each
    /// clause has three distinct variables.
    pub fn new(n: usize, prefix: Vec<(Quantifier, u32)>, clauses: Vec<[i32; 3]>) -> Result<Self, QbfError> {
        let mut seen = vec![false; n + 1];
        for &(_, v) in &prefix {
            if v == 0 || v as usize > n {
                return Err(QbfError::BadLiteral(v as i32));
            }
            if std::mem::replace(&mut seen[v as usize], true) {
                return Err(QbfError::DuplicateQuantifier(v));
            }
        }
        for (j, c) in clauses.iter().enumerate() {
            for (k, &lit) in c.iter().enumerate() {
                let v = lit.unsigned_abs();
                if lit == 0 || v as usize > n {
                    return Err(QbfError::BadLiteral(lit));
                }
                if c[..k].iter().any(|l| l.unsigned_abs() == v) {
                    return Err(QbfError::RepeatedVariable { clause: j + 1, var: v });
                }
            }
        }
        if let Some(v) = (1..=n).find(|&v| !seen[v]) {
            return Err(QbfError::FreeVariable(v as u32));
        }
        Ok(Qbf { n, prefix, clauses })
    }

    pub fn var_count(&self) -> usize {
        self.n
    }

    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    /// Quantifier blocks flattened, outermost first.
    pub fn prefix(&self) -> &[(Quantifier, u32)] {
        &self.prefix
    }

    pub fn clauses(&self) -> &[[i32; 3]] {
        &self.clauses
    }

    /// Quantifier and variable at innermost position `i` (1-based).
    pub fn innermost(&self, i: usize) -> (Quantifier, u32) {
        self.prefix[self.n - i]
    }

    /// Whether the full assignment `values[var - 1]` satisfies the matrix.
    pub fn matrix_holds(&self, values: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|&l| values[l.unsigned_abs() as usize - 1] == (l > 0)))
    }

    pub fn evaluate(&self) -> bool {
        let mut values = vec![false; self.n];
        self.eval_from(0, &mut values)
    }

    /// Truth of the formula with the `outer.len()` outermost quantified
    /// variables fixed to `outer`, in prefix order.
    pub fn evaluate_sub(&self, outer: &[bool]) -> Result<bool, QbfError> {
        if outer.len() > self.n {
            return Err(QbfError::AssignmentSize { got: outer.len(), n: self.n });
        }
        let mut values = vec![false; self.n];
        for (k, &b) in outer.iter().enumerate() {
            values[self.prefix[k].1 as usize - 1] = b;
        }
        Ok(self.eval_from(outer.len(), &mut values))
    }

    fn eval_from(&self, k: usize, values: &mut [bool]) -> bool {
        if k == self.n {
            return self.matrix_holds(values);
        }
        let (q, v) = self.prefix[k];
        let branch = |b: bool, values: &mut [bool]| {
            values[v as usize - 1] = b;
            self.eval_from(k + 1, values)
        };
        match q {
            Quantifier::Exists => branch(true, values) || branch(false, values),
            Quantifier::Forall => branch(true, values) && branch(false, values),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Quantifier::*;

    #[test]
    fn existential_disjunction_is_true() {
        let q = Qbf::new(3, vec![(Exists, 1), (Exists, 2), (Exists, 3)], vec![[1, 2, 3]]).unwrap();
        assert!(q.evaluate());
    }

    #[test]
    fn all_universal_disjunction_is_false() {
        let q = Qbf::new(3, vec![(Forall, 3), (Forall, 2), (Forall, 1)], vec![[1, 2, 3]]).unwrap();
        assert!(!q.evaluate());
        assert_eq!(q.innermost(1), (Forall, 1));
        assert_eq!(q.innermost(3), (Forall, 3));
    }

    #[test]
    fn validation_errors() {
        assert_eq!(Qbf::new(3, vec![(Exists, 1), (Exists, 2)], vec![]), Err(QbfError::FreeVariable(3)));
        assert_eq!(
            Qbf::new(1, vec![(Exists, 1), (Forall, 1)], vec![]),
            Err(QbfError::DuplicateQuantifier(1))
        );
        assert_eq!(
            Qbf::new(2, vec![(Exists, 1), (Exists, 2)], vec![[1, -1, 2]]),
            Err(QbfError::RepeatedVariable { clause: 1, var: 1 })
        );
    }
}
