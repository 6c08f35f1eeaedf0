use serde::Serialize;
use thiserror::Error;

use crate::{Qbf, Quantifier};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GammaError {
    #[error("the formula has no clauses")]
    NoClauses,
}

/// Space budgets of the reduction graph, indexed innermost first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaLedger {
    pub m: usize,
    /// `gamma[i]` for `i = 0..=n`; `gamma[0] = 2m + 7`.
    pub gamma: Vec<usize>,
    /// Quantifier at innermost position `i`, stored at `i - 1`.
    pub quantifiers: Vec<Quantifier>,
    /// Literal gadget price `r_i`, stored at `i - 1`.
    pub literal_price: Vec<usize>,
    /// Clause toll `beta_j = 2j`, stored at `j - 1`.
    pub beta: Vec<usize>,
    /// QDIMACS variable at innermost position `i`, stored at `i - 1`.
    pub innermost_var: Vec<u32>,
    /// Innermost position of QDIMACS variable `v`, stored at `v - 1`.
    pub var_position: Vec<usize>,
}

impl GammaLedger {
    pub fn n(&self) -> usize {
        self.gamma.len() - 1
    }

    /// Budget of the whole formula.
    pub fn total(&self) -> usize {
        self.gamma[self.n()]
    }

    /// Position `i` (innermost = 1) of QDIMACS variable `v`.
    pub fn position_of(&self, v: u32) -> usize {
        self.var_position[v as usize - 1]
    }
}

pub fn gamma(phi: &Qbf) -> Result<GammaLedger, GammaError> {
    let m = phi.clause_count();
    if m == 0 {
        return Err(GammaError::NoClauses);
    }
    let n = phi.var_count();
    let mut g = vec![2 * m + 7];
    let mut quantifiers = Vec::with_capacity(n);
    let mut literal_price = Vec::with_capacity(n);
    let mut innermost_var = Vec::with_capacity(n);
    let mut var_position = vec![0; n];
    for i in 1..=n {
        let (q, v) = phi.innermost(i);
        let prev = g[i - 1];
        let (step, drop) = match q {
            Quantifier::Exists => (3, 2),
            Quantifier::Forall => (5, 3),
        };
        g.push(prev + step);
        literal_price.push(prev + step - drop);
        quantifiers.push(q);
        innermost_var.push(v);
        var_position[v as usize - 1] = i;
    }
    Ok(GammaLedger {
        m,
        gamma: g,
        quantifiers,
        literal_price,
        beta: (1..=m).map(|j| 2 * j).collect(),
        innermost_var,
        var_position,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use Quantifier::*;

    #[test]
    fn single_clause_existentials() {
        let q = Qbf::new(3, vec![(Exists, 3), (Exists, 2), (Exists, 1)], vec![[1, 2, 3]]).unwrap();
        let l = gamma(&q).unwrap();
        assert_eq!(l.gamma, vec![9, 12, 15, 18]);
        assert_eq!(l.literal_price, vec![10, 13, 16]);
        assert_eq!(l.beta, vec![2]);
    }

    #[test]
    fn no_clauses_rejected() {
        let q = Qbf::new(1, vec![(Exists, 1)], vec![]).unwrap();
        assert_eq!(gamma(&q), Err(GammaError::NoClauses));
    }
}
