//! Noncontextual models: contexts of commuting Pauli words, a reference
//! state, and the signs `α_i` of each context product.

use serde::Serialize;
use thiserror::Error;

use crate::bell::{BellOperator, CorrelationTerm};
use crate::pauli::{first_noncommuting_pair, product_of, PauliError, PauliWord, QubitLabels};
use crate::state::{apply_pauli, StateError, StatePreset, StateVector};

/// Residual bound for accepting `P|ψ> = ±|ψ>`.
pub const EIGEN_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error("context {context:?} has no members")]
    EmptyContext { context: String },
    #[error("context {context:?}: members {first} ({first_word}) and {second} ({second_word}) do not commute")]
    NonCommuting { context: String, first: usize, second: usize, first_word: String, second_word: String },
    #[error("context {context:?}: member {member} ({word}) is not Hermitian")]
    NonHermitian { context: String, member: usize, word: String },
    #[error("context {context:?}: member {member} acts on {got} qubits, expected {expected}")]
    Dimension { context: String, member: usize, expected: usize, got: usize },
    #[error("context {context:?}: grouping must partition member indices 0..{members}: {reason}")]
    Grouping { context: String, members: usize, reason: String },
    #[error("context {context:?}: state is not an eigenvector of the product (residual {plus_residual:e} for +1, {minus_residual:e} for -1)")]
    NotEigenstate { context: String, plus_residual: f64, minus_residual: f64 },
    #[error("context {context:?}: without a state the product must be ±I, got {product}")]
    NotIdentity { context: String, product: String },
    #[error("model has no contexts")]
    NoContexts,
    #[error("{labels} qubit labels for a {n}-qubit model")]
    LabelCount { labels: usize, n: usize },
}

/// A set of mutually commuting observables measured together.
///
/// `grouping` partitions the member indices into assignment atoms. Each atom
/// is valued as one observable, so a context with members `X^o, Y^s, Y^p`
/// grouped as `[[0], [1, 2]]` carries the two symbols `X^o` and `Y^sY^p`.
#[derive(Debug, Clone, PartialEq)]
pub struct Context {
    label: String,
    members: Vec<PauliWord>,
    grouping: Vec<Vec<usize>>,
    atoms: Vec<PauliWord>,
}

impl Context {
    /// Every member is its own atom.
    pub fn new(label: impl Into<String>, members: Vec<PauliWord>) -> Result<Context, ModelError> {
        let grouping = (0..members.len()).map(|i| vec![i]).collect();
        Context::with_grouping(label, members, grouping)
    }

    pub fn with_grouping(
        label: impl Into<String>,
        members: Vec<PauliWord>,
        grouping: Vec<Vec<usize>>,
    ) -> Result<Context, ModelError> {
        let label = label.into();
        let first = members.first().ok_or_else(|| ModelError::EmptyContext { context: label.clone() })?;
        let n = first.n();
        for (i, m) in members.iter().enumerate() {
            if m.n() != n {
                return Err(ModelError::Dimension { context: label, member: i, expected: n, got: m.n() });
            }
            if !m.is_hermitian() {
                return Err(ModelError::NonHermitian { context: label, member: i, word: m.to_string() });
            }
        }
        if let Some((i, j)) = first_noncommuting_pair(&members)? {
            return Err(ModelError::NonCommuting {
                first_word: members[i].to_string(),
                second_word: members[j].to_string(),
                context: label,
                first: i,
                second: j,
            });
        }
        let mut seen = vec![false; members.len()];
        let grouping_err = |reason: String| ModelError::Grouping { context: label.clone(), members: members.len(), reason };
        for group in &grouping {
            if group.is_empty() {
                return Err(grouping_err("empty group".into()));
            }
            for &i in group {
                match seen.get_mut(i) {
                    None => return Err(grouping_err(format!("index {i} out of range"))),
                    Some(true) => return Err(grouping_err(format!("index {i} repeated"))),
                    Some(s) => *s = true,
                }
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(grouping_err(format!("index {missing} missing")));
        }
        let atoms = grouping
            .iter()
            .map(|g| product_of(g.iter().map(|&i| &members[i])))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Context { label, members, grouping, atoms })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn members(&self) -> &[PauliWord] {
        &self.members
    }

    pub fn grouping(&self) -> &[Vec<usize>] {
        &self.grouping
    }

    /// Products of the groups, in grouping order.
    pub fn atoms(&self) -> &[PauliWord] {
        &self.atoms
    }

    pub fn n(&self) -> usize {
        self.members[0].n()
    }

    pub fn product(&self) -> PauliWord {
        product_of(&self.members).expect("validated non-empty with equal sizes")
    }
}

/// Sign `α` with `‖P|ψ> - α|ψ>‖ ≤ 1e-9`, where `P` is the context product.
pub fn eigen_sign(context: &Context, state: &StateVector) -> Result<i8, ModelError> {
    let image = apply_pauli(&context.product(), state)?;
    let plus_residual = image.distance(state);
    if plus_residual <= EIGEN_TOLERANCE {
        return Ok(1);
    }
    let minus_residual = image.distance(&state.scaled(-1.0));
    if minus_residual <= EIGEN_TOLERANCE {
        return Ok(-1);
    }
    Err(ModelError::NotEigenstate { context: context.label.clone(), plus_residual, minus_residual })
}

/// Parity equation `v(s_1)·...·v(s_k) = α` over assignment symbols, with
/// `parity = 1` for `α = -1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AssignmentConstraint {
    pub symbols: Vec<usize>,
    pub parity: u8,
}

/// Complete noncontextual model: contexts, optional reference state, signs.
#[derive(Debug, Clone, PartialEq)]
pub struct KsModel {
    name: Option<String>,
    n: usize,
    labels: QubitLabels,
    contexts: Vec<Context>,
    state: Option<StateVector>,
    preset: Option<StatePreset>,
    signs: Vec<i8>,
    symbols: Vec<PauliWord>,
    context_symbols: Vec<Vec<usize>>,
}

impl KsModel {
    /// Derives the signs: from `state` via [`eigen_sign`] when present,
    /// otherwise each context product must be `±I`.
    pub fn build(contexts: Vec<Context>, state: Option<StateVector>) -> Result<KsModel, ModelError> {
        let n = contexts.first().ok_or(ModelError::NoContexts)?.n();
        for c in &contexts {
            if c.n() != n {
                return Err(ModelError::Dimension { context: c.label.clone(), member: 0, expected: n, got: c.n() });
            }
        }
        if let Some(s) = &state {
            if s.n() != n {
                return Err(StateError::DimensionMismatch { op: n, state: s.n() }.into());
            }
        }
        let signs = contexts
            .iter()
            .map(|c| match &state {
                Some(s) => eigen_sign(c, s),
                None => {
                    let p = c.product();
                    p.identity_sign()
                        .ok_or_else(|| ModelError::NotIdentity { context: c.label.clone(), product: p.to_string() })
                }
            })
            .collect::<Result<Vec<_>, _>>()?;

        let mut symbols: Vec<PauliWord> = Vec::new();
        let context_symbols = contexts
            .iter()
            .map(|c| {
                c.atoms()
                    .iter()
                    .map(|a| match symbols.iter().position(|s| s == a) {
                        Some(i) => i,
                        None => {
                            symbols.push(a.clone());
                            symbols.len() - 1
                        }
                    })
                    .collect()
            })
            .collect();

        Ok(KsModel {
            name: None,
            n,
            labels: QubitLabels::numbered(n),
            contexts,
            state,
            preset: None,
            signs,
            symbols,
            context_symbols,
        })
    }

    pub fn with_labels(mut self, labels: QubitLabels) -> Result<KsModel, ModelError> {
        if labels.len() != self.n {
            return Err(ModelError::LabelCount { labels: labels.len(), n: self.n });
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> KsModel {
        self.name = Some(name.into());
        self
    }

    /// Records which preset produced the state, for export.
    pub fn with_preset(mut self, preset: StatePreset) -> KsModel {
        self.preset = Some(preset);
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &QubitLabels {
        &self.labels
    }

    pub fn contexts(&self) -> &[Context] {
        &self.contexts
    }

    pub fn state(&self) -> Option<&StateVector> {
        self.state.as_ref()
    }

    pub fn preset(&self) -> Option<&StatePreset> {
        self.preset.as_ref()
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// Distinct assignment symbols in order of first appearance.
    pub fn symbols(&self) -> &[PauliWord] {
        &self.symbols
    }

    /// Symbol ids of each context's atoms.
    pub fn context_symbols(&self) -> &[Vec<usize>] {
        &self.context_symbols
    }

    pub fn constraints(&self) -> Vec<AssignmentConstraint> {
        self.context_symbols
            .iter()
            .zip(&self.signs)
            .map(|(syms, &s)| AssignmentConstraint { symbols: syms.clone(), parity: u8::from(s < 0) })
            .collect()
    }

    /// `B = Σ α_i A_i^1 · ... · A_i^k`, one term per context with the atoms as
    /// the product partition.
    pub fn bell_operator(&self) -> BellOperator {
        let terms = self
            .contexts
            .iter()
            .zip(&self.signs)
            .zip(&self.context_symbols)
            .map(|((c, &s), syms)| CorrelationTerm {
                coefficient: f64::from(s),
                groups: c.atoms().to_vec(),
                symbols: syms.clone(),
            })
            .collect();
        BellOperator { n: self.n, symbols: self.symbols.clone(), terms }
    }

    pub fn describe_symbol(&self, id: usize) -> String {
        self.labels.describe(&self.symbols[id])
    }
}

pub fn build_model(contexts: Vec<Context>, state: Option<StateVector>) -> Result<KsModel, ModelError> {
    KsModel::build(contexts, state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::make_ghz;

    fn w(s: &str) -> PauliWord {
        s.parse().unwrap()
    }

    fn ctx(label: &str, members: &[&str]) -> Context {
        Context::new(label, members.iter().map(|m| w(m)).collect()).unwrap()
    }

    #[test]
    fn ghz_signs() {
        let contexts = vec![
            ctx("2a", &["XII", "IYI", "IIY"]),
            ctx("2b", &["YII", "IXI", "IIY"]),
            ctx("2c", &["YII", "IYI", "IIX"]),
            ctx("2d", &["XII", "IXI", "IIX"]),
        ];
        let model = build_model(contexts, Some(make_ghz(3, 1).unwrap())).unwrap();
        assert_eq!(model.signs(), &[-1, -1, -1, 1]);
        assert_eq!(model.symbols().len(), 6);
    }

    #[test]
    fn state_independent_lines() {
        let gray = build_model(vec![ctx("gray", &["XII", "IXI", "IIX", "XXX"])], None).unwrap();
        assert_eq!(gray.signs(), &[1]);
        let red = build_model(vec![ctx("red", &["XYY", "YXY", "YYX", "XXX"])], None).unwrap();
        assert_eq!(red.signs(), &[-1]);
        let err = build_model(vec![ctx("open", &["XII", "IYI"])], None).unwrap_err();
        assert!(matches!(err, ModelError::NotIdentity { .. }));
    }

    #[test]
    fn eigen_sign_examples() {
        let g = make_ghz(3, 1).unwrap();
        assert_eq!(eigen_sign(&ctx("a", &["XII", "IYI", "IIY"]), &g).unwrap(), -1);
        assert_eq!(eigen_sign(&ctx("d", &["XII", "IXI", "IIX"]), &g).unwrap(), 1);
        let zero = StateVector::basis("000").unwrap();
        match eigen_sign(&ctx("a", &["XII", "IYI", "IIY"]), &zero) {
            Err(ModelError::NotEigenstate { plus_residual, minus_residual, .. }) => {
                // XYY|000> = -|111>, orthogonal to |000>
                assert!((plus_residual - 2f64.sqrt()).abs() < 1e-12);
                assert!((minus_residual - 2f64.sqrt()).abs() < 1e-12);
            }
            other => panic!("expected NotEigenstate, got {other:?}"),
        }
    }

    #[test]
    fn noncommuting_members_are_named() {
        let err = Context::new("bad", vec![w("XI"), w("IZ"), w("ZI")]).unwrap_err();
        match err {
            ModelError::NonCommuting { first, second, first_word, second_word, .. } => {
                assert_eq!((first, second), (0, 2));
                assert_eq!((first_word.as_str(), second_word.as_str()), ("XI", "ZI"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn grouping_builds_composite_atoms() {
        let c = Context::with_grouping("b1", vec![w("XII"), w("IYI"), w("IIY")], vec![vec![0], vec![1, 2]]).unwrap();
        assert_eq!(c.atoms(), &[w("XII"), w("IYY")]);
        assert!(Context::with_grouping("x", vec![w("XI"), w("IX")], vec![vec![0]]).is_err());
        assert!(Context::with_grouping("x", vec![w("XI"), w("IX")], vec![vec![0, 1], vec![1]]).is_err());
        assert!(Context::with_grouping("x", vec![w("XI"), w("IX")], vec![vec![0, 2], vec![1]]).is_err());
    }

    #[test]
    fn composite_symbol_differs_from_its_parts() {
        let model = build_model(
            vec![
                Context::new("c1", vec![w("IYI"), w("YII"), w("YYI")]).unwrap(),
                Context::new("c2", vec![w("YYI"), w("IIX")]).unwrap(),
            ],
            Some(make_ghz(3, 1).unwrap()),
        )
        .unwrap();
        assert_eq!(model.symbols(), &[w("IYI"), w("YII"), w("YYI"), w("IIX")]);
        assert_eq!(model.context_symbols(), &[vec![0, 1, 2], vec![2, 3]]);
        assert_eq!(model.constraints()[1], AssignmentConstraint { symbols: vec![2, 3], parity: 1 });
    }

    #[test]
    fn empty_inputs() {
        assert!(matches!(Context::new("e", vec![]), Err(ModelError::EmptyContext { .. })));
        assert!(matches!(build_model(vec![], None), Err(ModelError::NoContexts)));
    }
}
