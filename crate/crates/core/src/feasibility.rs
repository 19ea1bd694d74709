//! Existence of a noncontextual ±1 value assignment for a model.
//!
//! With `v = (-1)^x` per symbol, each context constraint
//! `v(A_1)···v(A_k) = α` becomes the GF(2) equation `x_1 ⊕ ... ⊕ x_k = [α = -1]`.

use serde::Serialize;

use crate::gf2::{solve, Gf2Solution};
use crate::model::KsModel;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FeasibilityResult {
    pub feasible: bool,
    /// One satisfying assignment, indexed by symbol id; unconstrained symbols
    /// are `+1`.
    pub assignment: Option<Vec<i8>>,
    /// Context indices whose constraints multiply to `+1 = -1`.
    pub certificate: Option<Vec<usize>>,
}

pub fn ks_feasible(model: &KsModel) -> FeasibilityResult {
    let equations: Vec<(Vec<usize>, bool)> =
        model.constraints().into_iter().map(|c| (c.symbols, c.parity == 1)).collect();
    match solve(model.symbols().len(), &equations) {
        Gf2Solution::Solution(bits) => FeasibilityResult {
            feasible: true,
            assignment: Some(bits.into_iter().map(|b| if b { -1 } else { 1 }).collect()),
            certificate: None,
        },
        Gf2Solution::Contradiction(rows) => {
            FeasibilityResult { feasible: false, assignment: None, certificate: Some(rows) }
        }
    }
}

impl FeasibilityResult {
    /// Checks the result against the model's constraints: a feasible
    /// assignment satisfies every one, and an infeasible certificate cancels
    /// every symbol while its signs multiply to `-1`.
    pub fn verify(&self, model: &KsModel) -> bool {
        let constraints = model.constraints();
        match (&self.assignment, &self.certificate) {
            (Some(v), None) if self.feasible => constraints.iter().all(|c| {
                let product: i8 = c.symbols.iter().map(|&s| v[s]).product();
                product == if c.parity == 1 { -1 } else { 1 }
            }),
            (None, Some(rows)) if !self.feasible => {
                let mut incidence = vec![false; model.symbols().len()];
                let mut parity = 0u8;
                for &r in rows {
                    for &s in &constraints[r].symbols {
                        incidence[s] ^= true;
                    }
                    parity ^= constraints[r].parity;
                }
                !incidence.iter().any(|&b| b) && parity == 1
            }
            _ => false,
        }
    }
}
