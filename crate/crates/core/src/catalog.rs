//! Built-in models: the three-qubit GHZ-Mermin proof, the Mermin pentagram,
//! two square variants with composite observables, and an n-qubit
//! GHZ-Mermin generator.
//!
//! Every entry recomputes its classical bound and quantum value when built
//! and refuses to load if they disagree with the recorded expectations.

use serde::Serialize;
use thiserror::Error;

use crate::bell::BellOperator;
use crate::bound::{classical_bound, BoundError};
use crate::model::{Context, KsModel, ModelError};
use crate::pauli::{Letter, PauliWord, QubitLabels};
use crate::state::{bell_value, spectral_max, StateError, StatePreset};

/// Names accepted by [`get`] besides `ghz-mermin-<n>`.
pub const NAMES: [&str; 4] = ["mermin-ghz3", "pentagram", "square-b", "square-c"];

pub const GHZ_MERMIN_MIN: usize = 2;
pub const GHZ_MERMIN_MAX: usize = 5;

const CHECK_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown model {0:?}")]
    UnknownName(String),
    #[error("ghz-mermin needs {GHZ_MERMIN_MIN} <= n <= {GHZ_MERMIN_MAX}, got {0}")]
    OutOfRange(usize),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error("{name}: computed {what} {computed} differs from expected {expected}")]
    Mismatch { name: String, what: &'static str, computed: f64, expected: f64 },
}

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Stated in the literature for this model.
    Published,
    /// Obtained by enumeration or simulation here.
    Computed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpectedValue {
    pub value: f64,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Expected {
    pub classical_bound: ExpectedValue,
    /// `<B>` on the model's state, or the top of the spectrum for
    /// state-independent models.
    pub quantum_value: ExpectedValue,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub description: String,
    pub model: KsModel,
    pub bell_operator: BellOperator,
    pub expected: Expected,
}

/// Summary row for `list-models`.
#[derive(Debug, Clone, Serialize)]
pub struct CatalogSummary {
    pub name: String,
    pub description: String,
    pub qubits: usize,
    pub contexts: usize,
    pub symbols: usize,
    pub state: Option<String>,
    pub expected: Expected,
}

impl CatalogEntry {
    pub fn summary(&self) -> CatalogSummary {
        CatalogSummary {
            name: self.name.clone(),
            description: self.description.clone(),
            qubits: self.model.n(),
            contexts: self.model.contexts().len(),
            symbols: self.model.symbols().len(),
            state: self.model.preset().map(ToString::to_string),
            expected: self.expected,
        }
    }

    /// Quantum value as defined for [`Expected::quantum_value`].
    pub fn quantum_value(&self) -> Result<f64, StateError> {
        match self.model.state() {
            Some(s) => bell_value(&self.bell_operator, s),
            None => spectral_max(&self.bell_operator),
        }
    }
}

fn words(list: &[&str]) -> Vec<PauliWord> {
    list.iter().map(|w| w.parse().expect("catalog words are well formed")).collect()
}

fn osp() -> QubitLabels {
    QubitLabels::new(&["o", "s", "p"]).expect("distinct tags")
}

fn published(value: f64) -> ExpectedValue {
    ExpectedValue { value, provenance: Provenance::Published }
}

fn computed(value: f64) -> ExpectedValue {
    ExpectedValue { value, provenance: Provenance::Computed }
}

fn finish(
    name: &str,
    description: &str,
    contexts: Vec<(&str, &[&str])>,
    preset: Option<StatePreset>,
    labels: QubitLabels,
    expected: Expected,
) -> Result<CatalogEntry, CatalogError> {
    let contexts = contexts
        .into_iter()
        .map(|(label, members)| Context::new(label, words(members)))
        .collect::<Result<Vec<_>, _>>()?;
    let n = contexts[0].n();
    let state = preset.as_ref().map(|p| p.build(n)).transpose()?;
    let mut model = KsModel::build(contexts, state)?.with_labels(labels)?.with_name(name);
    if let Some(p) = preset {
        model = model.with_preset(p);
    }
    let entry = CatalogEntry {
        name: name.to_string(),
        description: description.to_string(),
        bell_operator: model.bell_operator(),
        model,
        expected,
    };
    let check = |what, computed: f64, expected: f64| {
        if (computed - expected).abs() > CHECK_TOLERANCE {
            Err(CatalogError::Mismatch { name: name.to_string(), what, computed, expected })
        } else {
            Ok(())
        }
    };
    check("classical bound", classical_bound(&entry.bell_operator)?.bound, expected.classical_bound.value)?;
    check("quantum value", entry.quantum_value()?, expected.quantum_value.value)?;
    Ok(entry)
}

fn mermin_ghz3() -> Result<CatalogEntry, CatalogError> {
    finish(
        "mermin-ghz3",
        "GHZ-Mermin proof on three qubits: the four {X,Y} stabilizer contexts of the GHZ state",
        vec![
            ("XYY", &["XII", "IYI", "IIY"]),
            ("YXY", &["YII", "IXI", "IIY"]),
            ("YYX", &["YII", "IYI", "IIX"]),
            ("XXX", &["XII", "IXI", "IIX"]),
        ],
        Some(StatePreset::Ghz(1)),
        osp(),
        Expected { classical_bound: published(2.0), quantum_value: published(4.0) },
    )
}

fn pentagram() -> Result<CatalogEntry, CatalogError> {
    finish(
        "pentagram",
        "Mermin pentagram: ten observables on five lines, four with product +I and one with -I",
        vec![
            ("gray-XYY", &["XII", "IYI", "IIY", "XYY"]),
            ("gray-YXY", &["YII", "IXI", "IIY", "YXY"]),
            ("gray-YYX", &["YII", "IYI", "IIX", "YYX"]),
            ("gray-XXX", &["XII", "IXI", "IIX", "XXX"]),
            ("red", &["XYY", "YXY", "YYX", "XXX"]),
        ],
        None,
        osp(),
        Expected { classical_bound: computed(3.0), quantum_value: computed(5.0) },
    )
}

fn square_b() -> Result<CatalogEntry, CatalogError> {
    finish(
        "square-b",
        "Square with two-qubit Y composites: rows X^a·Y^bY^c, columns XXX and the Y-composite identity",
        vec![
            ("XYY", &["XII", "IYY"]),
            ("YXY", &["IXI", "YIY"]),
            ("YYX", &["IIX", "YYI"]),
            ("XXX", &["XII", "IXI", "IIX"]),
            ("YY-identity", &["IYY", "YIY", "YYI"]),
        ],
        Some(StatePreset::Ghz(1)),
        osp(),
        Expected { classical_bound: published(3.0), quantum_value: published(5.0) },
    )
}

fn square_c() -> Result<CatalogEntry, CatalogError> {
    finish(
        "square-c",
        "Square with one composite Y^oY^s: two single-letter rows, one composite row, XXX and the composite identity",
        vec![
            ("XYY", &["XII", "IYI", "IIY"]),
            ("YXY", &["YII", "IXI", "IIY"]),
            ("YYX", &["YYI", "IIX"]),
            ("XXX", &["XII", "IXI", "IIX"]),
            ("YY-identity", &["IYI", "YII", "YYI"]),
        ],
        Some(StatePreset::Ghz(1)),
        osp(),
        Expected { classical_bound: published(3.0), quantum_value: computed(5.0) },
    )
}

/// Classical maximum of the n-qubit GHZ-Mermin operator, `2^{floor(n/2)}`.
pub fn ghz_mermin_bound(n: usize) -> f64 {
    f64::powi(2.0, (n / 2) as i32)
}

/// The n-qubit GHZ-Mermin model: one context per word in `{X,Y}^n` with an
/// even number of `Y`, split into single-qubit members, in increasing order
/// of the `Y` positions read as a binary number.
pub fn ghz_mermin(n: usize) -> Result<CatalogEntry, CatalogError> {
    if !(GHZ_MERMIN_MIN..=GHZ_MERMIN_MAX).contains(&n) {
        return Err(CatalogError::OutOfRange(n));
    }
    let mut contexts = Vec::new();
    for mask in (0..1usize << n).filter(|m| m.count_ones() % 2 == 0) {
        let letters: Vec<Letter> =
            (0..n).map(|q| if mask >> (n - 1 - q) & 1 == 1 { Letter::Y } else { Letter::X }).collect();
        let label: String = letters.iter().map(|l| l.as_char()).collect();
        let members = (0..n).map(|q| PauliWord::single(n, q, letters[q])).collect();
        contexts.push(Context::new(label, members)?);
    }
    let name = format!("ghz-mermin-{n}");
    let state = StatePreset::Ghz(1);
    let model = KsModel::build(contexts, Some(state.build(n)?))?.with_name(&name).with_preset(state);
    let expected = Expected {
        classical_bound: computed(ghz_mermin_bound(n)),
        quantum_value: computed(f64::powi(2.0, n as i32 - 1)),
    };
    let entry = CatalogEntry {
        name: name.clone(),
        description: format!("{n}-qubit GHZ-Mermin model over the even-Y words of {{X,Y}}^{n}"),
        bell_operator: model.bell_operator(),
        model,
        expected,
    };
    let bound = classical_bound(&entry.bell_operator)?.bound;
    if (bound - expected.classical_bound.value).abs() > CHECK_TOLERANCE {
        return Err(CatalogError::Mismatch { name, what: "classical bound", computed: bound, expected: expected.classical_bound.value });
    }
    let quantum = entry.quantum_value()?;
    if (quantum - expected.quantum_value.value).abs() > CHECK_TOLERANCE {
        return Err(CatalogError::Mismatch { name, what: "quantum value", computed: quantum, expected: expected.quantum_value.value });
    }
    Ok(entry)
}

/// Looks up a built-in model by name.
pub fn get(name: &str) -> Result<CatalogEntry, CatalogError> {
    match name {
        "mermin-ghz3" => mermin_ghz3(),
        "pentagram" => pentagram(),
        "square-b" => square_b(),
        "square-c" => square_c(),
        _ => match name.strip_prefix("ghz-mermin-").map(str::parse::<usize>) {
            Some(Ok(n)) => ghz_mermin(n),
            _ => Err(CatalogError::UnknownName(name.to_string())),
        },
    }
}

/// All fixed entries followed by the generator's range.
pub fn list() -> Result<Vec<CatalogEntry>, CatalogError> {
    NAMES
        .iter()
        .map(|n| get(n))
        .chain((GHZ_MERMIN_MIN..=GHZ_MERMIN_MAX).map(ghz_mermin))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feasibility::ks_feasible;

    #[test]
    fn fixed_entries_load() {
        for name in NAMES {
            let e = get(name).unwrap();
            assert_eq!(e.name, name);
            assert!(!ks_feasible(&e.model).feasible, "{name}");
        }
    }

    #[test]
    fn mermin_signs_and_sizes() {
        let e = get("mermin-ghz3").unwrap();
        assert_eq!(e.model.signs(), &[-1, -1, -1, 1]);
        assert_eq!(e.model.symbols().len(), 6);
        assert_eq!(e.bell_operator.describe(e.model.labels()), "-<X^o·Y^s·Y^p> -<Y^o·X^s·Y^p> -<Y^o·Y^s·X^p> +<X^o·X^s·X^p>");
    }

    #[test]
    fn pentagram_signs() {
        let e = get("pentagram").unwrap();
        assert_eq!(e.model.signs(), &[1, 1, 1, 1, -1]);
        assert_eq!(e.model.symbols().len(), 10);
        assert!(e.model.state().is_none());
    }

    #[test]
    fn squares() {
        let b = get("square-b").unwrap();
        assert_eq!(b.model.signs(), &[-1, -1, -1, 1, 1]);
        assert_eq!(b.model.symbols().len(), 6);
        let c = get("square-c").unwrap();
        assert_eq!(c.model.signs(), &[-1, -1, -1, 1, 1]);
        assert_eq!(c.model.symbols().len(), 7);
    }

    #[test]
    fn generator_range() {
        assert!(matches!(ghz_mermin(1), Err(CatalogError::OutOfRange(1))));
        assert!(matches!(ghz_mermin(6), Err(CatalogError::OutOfRange(6))));
        let two = ghz_mermin(2).unwrap();
        assert_eq!(two.model.signs(), &[1, -1]);
        assert!(ks_feasible(&two.model).feasible);
        assert_eq!(ghz_mermin(4).unwrap().model.contexts().len(), 8);
        assert!(get("ghz-mermin-3").is_ok());
        assert!(matches!(get("ghz-mermin-x"), Err(CatalogError::UnknownName(_))));
        assert!(matches!(get("nope"), Err(CatalogError::UnknownName(_))));
    }

    #[test]
    fn generator_three_matches_fixed_entry_up_to_order() {
        let g = ghz_mermin(3).unwrap();
        let m = get("mermin-ghz3").unwrap();
        let mut a: Vec<(String, i8)> = g.model.contexts().iter().zip(g.model.signs()).map(|(c, &s)| (c.product().to_string(), s)).collect();
        let mut b: Vec<(String, i8)> = m.model.contexts().iter().zip(m.model.signs()).map(|(c, &s)| (c.product().to_string(), s)).collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }
}
