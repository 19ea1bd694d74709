//! Noncontextual (classical) bounds of Bell operators by exhaustive ±1
//! enumeration, and the reduction that strips identity-product terms.

use serde::Serialize;
use thiserror::Error;

use crate::bell::BellOperator;
use crate::model::{AssignmentConstraint, KsModel};
use crate::pauli::{PauliError, PauliWord};

/// Largest number of distinct symbols enumerated.
pub const MAX_SYMBOLS: usize = 24;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error("{0} assignment symbols exceed the enumeration limit of {MAX_SYMBOLS}")]
    Capacity(usize),
    #[error("no assignment satisfies the side constraints")]
    Infeasible,
    #[error("operator has {terms} terms but the model has {contexts} contexts")]
    TermCount { terms: usize, contexts: usize },
    #[error("term {0} does not match context {0} of the model")]
    TermMismatch(usize),
    #[error("constraint symbol {0} out of range")]
    BadSymbol(usize),
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymbolValue {
    pub symbol: usize,
    pub word: PauliWord,
    pub value: i8,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundResult {
    pub bound: f64,
    /// Values of every enumerated symbol, ascending symbol id.
    pub maximizer: Vec<SymbolValue>,
    pub evaluations: u64,
}

impl BoundResult {
    pub fn value_of(&self, symbol: usize) -> Option<i8> {
        self.maximizer.iter().find(|s| s.symbol == symbol).map(|s| s.value)
    }
}

/// Flat enumeration problem over local symbol indices `0..m`.
struct Problem {
    /// Global symbol id of each local index.
    globals: Vec<usize>,
    coefficients: Vec<f64>,
    /// Local symbols of each term (with multiplicity).
    term_symbols: Vec<Vec<usize>>,
    /// Terms whose sign flips when a local symbol flips.
    term_flips: Vec<Vec<usize>>,
    constraint_symbols: Vec<Vec<usize>>,
    constraint_parity: Vec<bool>,
    constraint_flips: Vec<Vec<usize>>,
    tie_tolerance: f64,
}

#[derive(Debug, Clone, Copy)]
struct Best {
    value: f64,
    mask: u32,
}

/// `a` precedes `b` lexicographically in symbol order with `+1 < -1`, where
/// bit `j` set means local symbol `j` is `-1`.
fn lex_less(a: u32, b: u32) -> bool {
    let d = a ^ b;
    d != 0 && a & (1 << d.trailing_zeros()) == 0
}

fn odd_members(lists: &[Vec<usize>], m: usize) -> Vec<Vec<usize>> {
    let mut flips = vec![Vec::new(); m];
    for (i, syms) in lists.iter().enumerate() {
        let mut odd = vec![false; m];
        for &s in syms {
            odd[s] ^= true;
        }
        for (s, &o) in odd.iter().enumerate() {
            if o {
                flips[s].push(i);
            }
        }
    }
    flips
}

impl Problem {
    fn new(op: &BellOperator, constraints: &[AssignmentConstraint]) -> Result<Problem, BoundError> {
        let mut used = vec![false; op.symbols.len()];
        for t in &op.terms {
            for &s in &t.symbols {
                used[s] = true;
            }
        }
        for c in constraints {
            for &s in &c.symbols {
                *used.get_mut(s).ok_or(BoundError::BadSymbol(s))? = true;
            }
        }
        let globals: Vec<usize> = used.iter().enumerate().filter(|(_, &u)| u).map(|(i, _)| i).collect();
        let m = globals.len();
        if m > MAX_SYMBOLS {
            return Err(BoundError::Capacity(m));
        }
        let mut local = vec![usize::MAX; op.symbols.len()];
        for (l, &g) in globals.iter().enumerate() {
            local[g] = l;
        }
        let term_symbols: Vec<Vec<usize>> =
            op.terms.iter().map(|t| t.symbols.iter().map(|&s| local[s]).collect()).collect();
        let constraint_symbols: Vec<Vec<usize>> =
            constraints.iter().map(|c| c.symbols.iter().map(|&s| local[s]).collect()).collect();
        Ok(Problem {
            term_flips: odd_members(&term_symbols, m),
            constraint_flips: odd_members(&constraint_symbols, m),
            coefficients: op.terms.iter().map(|t| t.coefficient).collect(),
            term_symbols,
            constraint_parity: constraints.iter().map(|c| c.parity == 1).collect(),
            constraint_symbols,
            globals,
            tie_tolerance: 1e-9 * op.coefficient_norm().max(1.0),
        })
    }

    fn m(&self) -> usize {
        self.globals.len()
    }

    fn parity(symbols: &[usize], mask: u32) -> bool {
        symbols.iter().fold(false, |acc, &s| acc ^ (mask >> s & 1 == 1))
    }

    /// Direct evaluation of the term sum, used for the final reported value.
    fn evaluate(&self, mask: u32) -> f64 {
        self.term_symbols
            .iter()
            .zip(&self.coefficients)
            .map(|(syms, c)| if Problem::parity(syms, mask) { -c } else { *c })
            .sum()
    }

    /// Gray-code walk over the low `m - high_bits` symbols with the high bits
    /// fixed to `prefix`.
    fn enumerate_chunk(&self, high_bits: usize, prefix: u32) -> Option<Best> {
        let m = self.m();
        let low = m - high_bits;
        let mut mask = prefix << low;
        let mut signs: Vec<bool> = self.term_symbols.iter().map(|s| Problem::parity(s, mask)).collect();
        let mut sum: f64 = self
            .coefficients
            .iter()
            .zip(&signs)
            .map(|(c, &neg)| if neg { -c } else { *c })
            .sum();
        let mut violated: Vec<bool> = self
            .constraint_symbols
            .iter()
            .zip(&self.constraint_parity)
            .map(|(s, &p)| Problem::parity(s, mask) != p)
            .collect();
        let mut violations = violated.iter().filter(|&&v| v).count();

        let mut best: Option<Best> = None;
        let consider = |value: f64, mask: u32, best: &mut Option<Best>| match best {
            None => *best = Some(Best { value, mask }),
            Some(b) => {
                if value > b.value + self.tie_tolerance
                    || (value >= b.value - self.tie_tolerance && lex_less(mask, b.mask))
                {
                    *best = Some(Best { value, mask });
                }
            }
        };
        if violations == 0 {
            consider(sum, mask, &mut best);
        }
        for k in 1u64..(1u64 << low) {
            let bit = k.trailing_zeros() as usize;
            mask ^= 1 << bit;
            for &t in &self.term_flips[bit] {
                let c = self.coefficients[t];
                sum += if signs[t] { 2.0 * c } else { -2.0 * c };
                signs[t] = !signs[t];
            }
            for &c in &self.constraint_flips[bit] {
                violated[c] = !violated[c];
                if violated[c] {
                    violations += 1;
                } else {
                    violations -= 1;
                }
            }
            if violations == 0 {
                consider(sum, mask, &mut best);
            }
        }
        best
    }

    fn merge(&self, results: impl IntoIterator<Item = Option<Best>>) -> Option<Best> {
        let mut best: Option<Best> = None;
        for b in results.into_iter().flatten() {
            best = match best {
                None => Some(b),
                Some(cur) => {
                    if b.value > cur.value + self.tie_tolerance
                        || (b.value >= cur.value - self.tie_tolerance && lex_less(b.mask, cur.mask))
                    {
                        Some(b)
                    } else {
                        Some(cur)
                    }
                }
            };
        }
        best
    }

    fn finish(&self, op: &BellOperator, best: Option<Best>) -> Result<BoundResult, BoundError> {
        let best = best.ok_or(BoundError::Infeasible)?;
        let maximizer = self
            .globals
            .iter()
            .enumerate()
            .map(|(l, &g)| SymbolValue {
                symbol: g,
                word: op.symbols[g].clone(),
                value: if best.mask >> l & 1 == 1 { -1 } else { 1 },
            })
            .collect();
        Ok(BoundResult { bound: self.evaluate(best.mask), maximizer, evaluations: 1u64 << self.m() })
    }
}

fn solve(op: &BellOperator, constraints: &[AssignmentConstraint], threads: usize) -> Result<BoundResult, BoundError> {
    let problem = Problem::new(op, constraints)?;
    let high_bits = (usize::BITS - 1 - threads.max(1).leading_zeros()) as usize;
    let high_bits = high_bits.min(problem.m());
    let best = if high_bits == 0 {
        problem.enumerate_chunk(0, 0)
    } else {
        let chunks: Vec<Option<Best>> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..1u32 << high_bits)
                .map(|prefix| {
                    let p = &problem;
                    scope.spawn(move || p.enumerate_chunk(high_bits, prefix))
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("enumeration worker panicked")).collect()
        });
        problem.merge(chunks)
    };
    problem.finish(op, best)
}

/// Exact maximum of `Σ c_i Π_g v(symbol(g))` over all ±1 assignments.
///
/// Ties go to the lexicographically smallest assignment in symbol order with
/// `+1 < -1`.
pub fn classical_bound(op: &BellOperator) -> Result<BoundResult, BoundError> {
    solve(op, &[], 1)
}

/// [`classical_bound`] with the enumeration split across up to `threads`
/// workers by fixing the highest symbols. Returns the same result.
pub fn classical_bound_parallel(op: &BellOperator, threads: usize) -> Result<BoundResult, BoundError> {
    solve(op, &[], threads)
}

/// Maximum over assignments that also satisfy every parity constraint.
pub fn classical_bound_constrained(
    op: &BellOperator,
    constraints: &[AssignmentConstraint],
) -> Result<BoundResult, BoundError> {
    solve(op, constraints, 1)
}

/// A Bell operator with its identity-product terms removed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Reduction {
    pub reduced: BellOperator,
    /// Total fixed value of the removed terms; the reduced inequality's bound
    /// is the original bound minus this.
    pub shift: f64,
    /// Indices of removed terms in the original operator.
    pub removed: Vec<usize>,
    /// Identity relations `v(...)···v(...) = ±1` of the removed terms, which
    /// hold for every noncontextual assignment.
    pub constraints: Vec<AssignmentConstraint>,
}

impl Reduction {
    pub fn adjusted_bound(&self, bound: f64) -> f64 {
        bound - self.shift
    }
}

/// Removes every term whose group product is `±I` as an operator identity.
pub fn reduce_operator(op: &BellOperator) -> Result<Reduction, BoundError> {
    let mut removed = Vec::new();
    let mut constraints = Vec::new();
    let mut shift = 0.0;
    for (i, t) in op.terms.iter().enumerate() {
        if let Some(sign) = t.product()?.identity_sign() {
            removed.push(i);
            shift += t.coefficient * f64::from(sign);
            constraints.push(AssignmentConstraint { symbols: t.symbols.clone(), parity: u8::from(sign < 0) });
        }
    }
    Ok(Reduction { reduced: op.without_terms(&removed), shift, removed, constraints })
}

/// [`reduce_operator`] after checking that term `i` of `op` measures context
/// `i` of `model`.
pub fn reduce(model: &KsModel, op: &BellOperator) -> Result<Reduction, BoundError> {
    if op.terms.len() != model.contexts().len() {
        return Err(BoundError::TermCount { terms: op.terms.len(), contexts: model.contexts().len() });
    }
    for (i, (t, c)) in op.terms.iter().zip(model.contexts()).enumerate() {
        if t.product()? != c.product() {
            return Err(BoundError::TermMismatch(i));
        }
    }
    reduce_operator(op)
}
