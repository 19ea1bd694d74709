//! Bell operators: signed sums of correlation terms over shared assignment
//! symbols.

use serde::Serialize;

use crate::pauli::{first_noncommuting_pair, product_of, PauliError, PauliWord, QubitLabels};

/// One term `coefficient * <g_1 · g_2 · ... · g_k>` of a Bell operator.
///
/// `groups` is the product partition: each group is measured as one
/// observable and carries one assignment symbol.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationTerm {
    pub coefficient: f64,
    pub groups: Vec<PauliWord>,
    /// Index into [`BellOperator::symbols`] for each group.
    pub symbols: Vec<usize>,
}

impl CorrelationTerm {
    /// Term whose groups are their own symbols, numbered in order. Useful for
    /// free-standing terms that are not attached to an operator.
    pub fn new(coefficient: f64, groups: Vec<PauliWord>) -> CorrelationTerm {
        let symbols = (0..groups.len()).collect();
        CorrelationTerm { coefficient, groups, symbols }
    }

    pub fn n(&self) -> usize {
        self.groups.first().map_or(0, |g| g.n())
    }

    /// Operator product of the groups, left to right.
    pub fn product(&self) -> Result<PauliWord, PauliError> {
        product_of(&self.groups)
    }

    pub fn describe(&self, labels: &QubitLabels) -> String {
        self.groups.iter().map(|g| labels.describe(g)).collect::<Vec<_>>().join("·")
    }
}

/// `Σ coefficient_i <term_i>` together with the symbol table its terms index.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BellOperator {
    pub n: usize,
    /// Assignment symbols, identified by their canonical word.
    pub symbols: Vec<PauliWord>,
    pub terms: Vec<CorrelationTerm>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OperatorError {
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error("term {term}: groups {first} and {second} do not commute")]
    NonCommuting { term: usize, first: usize, second: usize },
    #[error("term {term}: coefficient must be a nonzero finite real, got {value}")]
    BadCoefficient { term: usize, value: f64 },
    #[error("term {term}: symbol index {symbol} out of range")]
    BadSymbol { term: usize, symbol: usize },
    #[error("term {term}: group {group} does not match its symbol word")]
    SymbolMismatch { term: usize, group: usize },
    #[error("term {term} is empty")]
    EmptyTerm { term: usize },
}

impl BellOperator {
    /// Builds an operator from bare terms, interning group words as symbols in
    /// order of first appearance. Any symbol ids already in the terms are
    /// replaced.
    pub fn from_terms(n: usize, terms: Vec<(f64, Vec<PauliWord>)>) -> Result<BellOperator, OperatorError> {
        let mut symbols: Vec<PauliWord> = Vec::new();
        let mut out = Vec::with_capacity(terms.len());
        for (coefficient, groups) in terms {
            let ids = groups
                .iter()
                .map(|g| match symbols.iter().position(|s| s == g) {
                    Some(i) => i,
                    None => {
                        symbols.push(g.clone());
                        symbols.len() - 1
                    }
                })
                .collect();
            out.push(CorrelationTerm { coefficient, groups, symbols: ids });
        }
        let op = BellOperator { n, symbols, terms: out };
        op.validate()?;
        Ok(op)
    }

    pub fn validate(&self) -> Result<(), OperatorError> {
        for (t, term) in self.terms.iter().enumerate() {
            if term.groups.is_empty() {
                return Err(OperatorError::EmptyTerm { term: t });
            }
            if !term.coefficient.is_finite() || term.coefficient == 0.0 {
                return Err(OperatorError::BadCoefficient { term: t, value: term.coefficient });
            }
            for g in &term.groups {
                if g.n() != self.n {
                    return Err(PauliError::DimensionMismatch { left: self.n, right: g.n() }.into());
                }
            }
            if let Some((first, second)) = first_noncommuting_pair(&term.groups)? {
                return Err(OperatorError::NonCommuting { term: t, first, second });
            }
            for (gi, (&s, g)) in term.symbols.iter().zip(&term.groups).enumerate() {
                let word = self.symbols.get(s).ok_or(OperatorError::BadSymbol { term: t, symbol: s })?;
                if word != g {
                    return Err(OperatorError::SymbolMismatch { term: t, group: gi });
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of absolute coefficients; bounds every eigenvalue and every
    /// assignment value.
    pub fn coefficient_norm(&self) -> f64 {
        self.terms.iter().map(|t| t.coefficient.abs()).sum()
    }

    /// Symbol ids referenced by at least one term, ascending.
    pub fn active_symbols(&self) -> Vec<usize> {
        let mut used = vec![false; self.symbols.len()];
        for t in &self.terms {
            for &s in &t.symbols {
                used[s] = true;
            }
        }
        used.iter().enumerate().filter(|(_, &u)| u).map(|(i, _)| i).collect()
    }

    /// Operator with the listed term indices dropped. The symbol table is kept.
    pub fn without_terms(&self, drop: &[usize]) -> BellOperator {
        let terms = self
            .terms
            .iter()
            .enumerate()
            .filter(|(i, _)| !drop.contains(i))
            .map(|(_, t)| t.clone())
            .collect();
        BellOperator { n: self.n, symbols: self.symbols.clone(), terms }
    }

    pub fn describe(&self, labels: &QubitLabels) -> String {
        let mut out = String::new();
        for (i, t) in self.terms.iter().enumerate() {
            let sign = if t.coefficient < 0.0 { "-" } else if i > 0 { "+" } else { "" };
            let mag = t.coefficient.abs();
            if i > 0 {
                out.push(' ');
            }
            out.push_str(sign);
            if mag != 1.0 {
                out.push_str(&format!("{mag}"));
            }
            out.push_str(&format!("<{}>", t.describe(labels)));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> PauliWord {
        s.parse().unwrap()
    }

    #[test]
    fn from_terms_interns_symbols() {
        let op = BellOperator::from_terms(
            3,
            vec![(-1.0, vec![w("XII"), w("IYY")]), (1.0, vec![w("XII"), w("IXI"), w("IIX")])],
        )
        .unwrap();
        assert_eq!(op.symbols.len(), 4);
        assert_eq!(op.terms[1].symbols, vec![0, 2, 3]);
        assert_eq!(op.active_symbols(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn rejects_noncommuting_groups() {
        let err = BellOperator::from_terms(1, vec![(1.0, vec![w("X"), w("Y")])]).unwrap_err();
        assert_eq!(err, OperatorError::NonCommuting { term: 0, first: 0, second: 1 });
    }

    #[test]
    fn rejects_zero_coefficient() {
        assert!(BellOperator::from_terms(1, vec![(0.0, vec![w("X")])]).is_err());
    }

    #[test]
    fn describe_uses_tags() {
        let labels = QubitLabels::new(&["o", "s", "p"]).unwrap();
        let op = BellOperator::from_terms(3, vec![(-1.0, vec![w("XII"), w("IYY")]), (1.0, vec![w("XXX")])]).unwrap();
        assert_eq!(op.describe(&labels), "-<X^o·Y^sY^p> +<X^oX^sX^p>");
    }
}
