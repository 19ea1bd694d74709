//! Cascade-measurement equivalence of correlation terms and the induced
//! equivalence of (reduced) Bell operators.
//!
//! Two terms are cascade equivalent when
//!
//! 1. every single-qubit letter `B_k` occurs the same number of times in both,
//! 2. for every pair of groups in one term sharing two or more qubits, some
//!    pair of groups in the other term has all of those shared qubits in its
//!    own pairwise intersection (checked in both directions), and
//! 3. both product partitions multiply to the same signed operator.
//!
//! Condition 3 is not implied by the first two: `(X_1X_2)·(Y_1Y_2)` and
//! `(X_1Y_2)·(Y_1X_2)` satisfy 1 and 2 but multiply to `-Z_1Z_2` and `+Z_1Z_2`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::bell::{BellOperator, CorrelationTerm};
use crate::pauli::{product_of, Letter};

/// Multiplicity of each `(qubit, letter)` across all groups of a term.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LetterMultiset {
    pub counts: BTreeMap<(usize, Letter), usize>,
}

impl LetterMultiset {
    pub fn of(term: &CorrelationTerm) -> LetterMultiset {
        let mut counts = BTreeMap::new();
        for g in &term.groups {
            for (q, &l) in g.letters().iter().enumerate() {
                if !l.is_identity() {
                    *counts.entry((q, l)).or_insert(0) += 1;
                }
            }
        }
        LetterMultiset { counts }
    }
}

fn shared_sets(term: &CorrelationTerm) -> Vec<BTreeSet<usize>> {
    let supports: Vec<BTreeSet<usize>> = term.groups.iter().map(|g| g.support()).collect();
    let mut out = Vec::new();
    for i in 0..supports.len() {
        for j in i + 1..supports.len() {
            let shared: BTreeSet<usize> = supports[i].intersection(&supports[j]).copied().collect();
            if shared.len() >= 2 {
                out.push(shared);
            }
        }
    }
    out
}

fn pair_intersections(term: &CorrelationTerm) -> Vec<BTreeSet<usize>> {
    let supports: Vec<BTreeSet<usize>> = term.groups.iter().map(|g| g.support()).collect();
    let mut out = Vec::new();
    for i in 0..supports.len() {
        for j in i + 1..supports.len() {
            out.push(supports[i].intersection(&supports[j]).copied().collect());
        }
    }
    out
}

fn shared_covered(from: &CorrelationTerm, to: &CorrelationTerm) -> bool {
    let targets = pair_intersections(to);
    shared_sets(from).iter().all(|s| targets.iter().any(|t| s.is_subset(t)))
}

/// Which of the three conditions hold for a pair of terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CascadeCheck {
    pub same_letters: bool,
    pub shared_qubits_covered: bool,
    pub same_product: bool,
}

impl CascadeCheck {
    pub fn holds(&self) -> bool {
        self.same_letters && self.shared_qubits_covered && self.same_product
    }

    pub fn reason(&self) -> Option<&'static str> {
        if !self.same_letters {
            Some("letter multisets differ")
        } else if !self.shared_qubits_covered {
            Some("shared qubit indices are not covered by any pair of groups")
        } else if !self.same_product {
            Some("group products differ")
        } else {
            None
        }
    }
}

pub fn cascade_check(e: &CorrelationTerm, f: &CorrelationTerm) -> CascadeCheck {
    if e.n() != f.n() {
        return CascadeCheck { same_letters: false, shared_qubits_covered: false, same_product: false };
    }
    let same_product = match (product_of(&e.groups), product_of(&f.groups)) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    };
    CascadeCheck {
        same_letters: LetterMultiset::of(e) == LetterMultiset::of(f),
        shared_qubits_covered: shared_covered(e, f) && shared_covered(f, e),
        same_product,
    }
}

pub fn cascade_equivalent(e: &CorrelationTerm, f: &CorrelationTerm) -> bool {
    cascade_check(e, f).holds()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TermFailure {
    pub side: Side,
    pub term: Option<usize>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub equivalent: bool,
    /// `(left term, right term)` pairs when a complete bijection exists.
    pub matching: Option<Vec<(usize, usize)>>,
    pub failures: Vec<TermFailure>,
}

fn candidates(from: &BellOperator, to: &BellOperator) -> Vec<Vec<usize>> {
    from.terms
        .iter()
        .map(|e| {
            to.terms
                .iter()
                .enumerate()
                .filter(|(_, f)| f.coefficient == e.coefficient && cascade_equivalent(e, f))
                .map(|(j, _)| j)
                .collect()
        })
        .collect()
}

fn assign(i: usize, options: &[Vec<usize>], used: &mut [bool], chosen: &mut Vec<usize>) -> bool {
    if i == options.len() {
        return true;
    }
    for &j in &options[i] {
        if !used[j] {
            used[j] = true;
            chosen.push(j);
            if assign(i + 1, options, used, chosen) {
                return true;
            }
            chosen.pop();
            used[j] = false;
        }
    }
    false
}

/// Searches for a coefficient-preserving bijection between the terms of two
/// already-reduced operators in which every matched pair is cascade
/// equivalent. Left terms are matched in order, each trying right terms in
/// ascending index.
pub fn inequalities_equivalent(a: &BellOperator, b: &BellOperator) -> EquivalenceReport {
    let mut failures = Vec::new();
    if a.terms.len() != b.terms.len() {
        failures.push(TermFailure {
            side: Side::Left,
            term: None,
            reason: format!("term counts differ: {} vs {}", a.terms.len(), b.terms.len()),
        });
    }
    let forward = candidates(a, b);
    let backward = candidates(b, a);
    let describe = |options: &[Vec<usize>], from: &BellOperator, to: &BellOperator, side: Side| {
        options
            .iter()
            .enumerate()
            .filter(|(_, o)| o.is_empty())
            .map(|(i, _)| {
                let term = &from.terms[i];
                // closest reason among same-coefficient counterparts
                let reason = to
                    .terms
                    .iter()
                    .filter(|f| f.coefficient == term.coefficient)
                    .map(|f| cascade_check(term, f))
                    .find_map(|c| if c.same_letters { c.reason() } else { None })
                    .unwrap_or("no counterpart with equal coefficient and letter multiset");
                TermFailure { side: side.clone(), term: Some(i), reason: reason.to_string() }
            })
            .collect::<Vec<_>>()
    };
    failures.extend(describe(&forward, a, b, Side::Left));
    failures.extend(describe(&backward, b, a, Side::Right));
    if !failures.is_empty() {
        return EquivalenceReport { equivalent: false, matching: None, failures };
    }
    let mut used = vec![false; b.terms.len()];
    let mut chosen = Vec::with_capacity(a.terms.len());
    if assign(0, &forward, &mut used, &mut chosen) {
        EquivalenceReport {
            equivalent: true,
            matching: Some(chosen.into_iter().enumerate().collect()),
            failures,
        }
    } else {
        failures.push(TermFailure {
            side: Side::Left,
            term: None,
            reason: "every term has a counterpart but no complete bijection exists".into(),
        });
        EquivalenceReport { equivalent: false, matching: None, failures }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliWord;

    fn term(groups: &[&str]) -> CorrelationTerm {
        CorrelationTerm::new(1.0, groups.iter().map(|g| g.parse::<PauliWord>().unwrap()).collect())
    }

    #[test]
    fn worked_four_qubit_example() {
        let e = term(&["YIII", "IXYI", "IYXI", "IIIX"]);
        let f = term(&["YXYI", "IYXX"]);
        assert!(cascade_equivalent(&e, &f));
        assert!(cascade_equivalent(&f, &e));
    }

    #[test]
    fn reflexive_and_letter_mismatch() {
        let e = term(&["XII", "IYI", "IIY"]);
        assert!(cascade_equivalent(&e, &e));
        assert!(!cascade_equivalent(&e, &term(&["XII", "IXI", "IIX"])));
    }

    #[test]
    fn same_letters_different_product() {
        let e = term(&["XX", "YY"]);
        let f = term(&["XY", "YX"]);
        let c = cascade_check(&e, &f);
        assert!(c.same_letters && c.shared_qubits_covered);
        assert!(!c.same_product);
        assert!(!cascade_equivalent(&e, &f));
    }

    #[test]
    fn shared_qubits_must_be_covered() {
        // {1,2} shared by the first two groups of e, but f's groups never
        // overlap in two qubits
        let e = term(&["IXXI", "IXXI", "XIIX"]);
        let f = term(&["IXII", "IIXI", "XXXX"]);
        let c = cascade_check(&e, &f);
        assert!(c.same_letters);
        assert!(!c.shared_qubits_covered);
    }

    #[test]
    fn count_mismatch_is_reported() {
        let a = BellOperator::from_terms(1, vec![(1.0, vec!["X".parse().unwrap()])]).unwrap();
        let b = BellOperator::from_terms(
            1,
            vec![(1.0, vec!["X".parse().unwrap()]), (1.0, vec!["Z".parse().unwrap()])],
        )
        .unwrap();
        let r = inequalities_equivalent(&a, &b);
        assert!(!r.equivalent);
        assert!(r.failures[0].reason.contains("term counts differ"));
    }

    #[test]
    fn coefficients_must_match() {
        let a = BellOperator::from_terms(1, vec![(1.0, vec!["X".parse().unwrap()])]).unwrap();
        let b = BellOperator::from_terms(1, vec![(-1.0, vec!["X".parse().unwrap()])]).unwrap();
        assert!(!inequalities_equivalent(&a, &b).equivalent);
    }
}
