//! JSON model files.
//!
//! ```json
//! {
//!   "name": "mermin-ghz3",
//!   "n": 3,
//!   "labels": ["o", "s", "p"],
//!   "state": "ghz+",
//!   "contexts": [
//!     {"label": "XYY", "members": ["XII", "IYI", "IIY"]},
//!     {"label": "XYY-grouped", "members": ["XII", "IYI", "IIY"], "grouping": [[0], [1, 2]]}
//!   ]
//! }
//! ```
//!
//! `name` and `labels` are optional; labels default to `q0, q1, ...`.
//! `state` is a preset (`ghz+`, `ghz-`, `basis:<bits>`), a list of `[re, im]`
//! amplitudes in big-endian basis order, or `null` for state-independent
//! models whose context products must be `±I`. `grouping` defaults to one
//! group per member.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Context, KsModel, ModelError};
use crate::pauli::{PauliWord, QubitLabels};
use crate::state::{StateError, StatePreset, StateVector};

#[derive(Debug, Error)]
pub enum ModelFileError {
    #[error("invalid model file: {0}")]
    Syntax(String),
    #[error("context {context}, member {member}: {reason}")]
    Member { context: usize, member: usize, reason: String },
    #[error("context {context} ({label}): {source}")]
    Context {
        context: usize,
        label: String,
        #[source]
        source: ModelError,
    },
    #[error("state: {0}")]
    State(#[from] StateError),
    #[error("model: {0}")]
    Model(#[from] ModelError),
    #[error("labels: {0}")]
    Labels(String),
    #[error("n = {declared} but context {context} acts on {actual} qubits")]
    QubitCount { declared: usize, context: usize, actual: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateSpec {
    Preset(String),
    Amplitudes(Vec<[f64; 2]>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContextSpec {
    pub label: String,
    pub members: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grouping: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default)]
    pub state: Option<StateSpec>,
    pub contexts: Vec<ContextSpec>,
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<ModelFile, ModelFileError> {
        serde_json::from_str(text).map_err(|e| ModelFileError::Syntax(e.to_string()))
    }

    pub fn to_json(&self, pretty: bool) -> String {
        let out = if pretty { serde_json::to_string_pretty(self) } else { serde_json::to_string(self) };
        out.expect("model files always serialize")
    }

    pub fn build(&self) -> Result<KsModel, ModelFileError> {
        let mut contexts = Vec::with_capacity(self.contexts.len());
        for (ci, spec) in self.contexts.iter().enumerate() {
            let members = spec
                .members
                .iter()
                .enumerate()
                .map(|(mi, text)| {
                    text.parse::<PauliWord>().map_err(|e| ModelFileError::Member {
                        context: ci,
                        member: mi,
                        reason: e.to_string(),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            if let Some((mi, w)) = members.iter().enumerate().find(|(_, w)| w.n() != self.n) {
                return Err(ModelFileError::Member {
                    context: ci,
                    member: mi,
                    reason: format!("{w} has {} letters, model has n = {}", w.n(), self.n),
                });
            }
            let located = |source| ModelFileError::Context { context: ci, label: spec.label.clone(), source };
            let context = match &spec.grouping {
                Some(g) => Context::with_grouping(spec.label.clone(), members, g.clone()),
                None => Context::new(spec.label.clone(), members),
            }
            .map_err(located)?;
            if context.n() != self.n {
                return Err(ModelFileError::QubitCount { declared: self.n, context: ci, actual: context.n() });
            }
            contexts.push(context);
        }

        let (state, preset) = match &self.state {
            None => (None, None),
            Some(StateSpec::Preset(p)) => {
                let preset: StatePreset = p.parse()?;
                (Some(preset.build(self.n)?), Some(preset))
            }
            Some(StateSpec::Amplitudes(a)) => {
                let amps = a.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
                (Some(StateVector::from_amplitudes(self.n, amps)?), None)
            }
        };

        let mut model = KsModel::build(contexts, state).map_err(|e| match e {
            ModelError::NotEigenstate { ref context, .. } | ModelError::NotIdentity { ref context, .. } => {
                let ci = self.contexts.iter().position(|c| &c.label == context).unwrap_or(0);
                ModelFileError::Context { context: ci, label: context.clone(), source: e }
            }
            other => ModelFileError::Model(other),
        })?;
        if let Some(labels) = &self.labels {
            let labels = QubitLabels::new(labels).map_err(|e| ModelFileError::Labels(e.to_string()))?;
            model = model.with_labels(labels)?;
        }
        if let Some(name) = &self.name {
            model = model.with_name(name);
        }
        if let Some(p) = preset {
            model = model.with_preset(p);
        }
        Ok(model)
    }

    /// The file describing `model`. A preset is kept by name; any other state
    /// is written as amplitudes.
    pub fn from_model(model: &KsModel) -> ModelFile {
        let state = match (model.preset(), model.state()) {
            (Some(p), _) => Some(StateSpec::Preset(p.to_string())),
            (None, Some(s)) => Some(StateSpec::Amplitudes(s.amplitudes().iter().map(|a| [a.re, a.im]).collect())),
            (None, None) => None,
        };
        let contexts = model
            .contexts()
            .iter()
            .map(|c| {
                let singletons = c.grouping().iter().enumerate().all(|(i, g)| g == &[i]);
                ContextSpec {
                    label: c.label().to_string(),
                    members: c.members().iter().map(ToString::to_string).collect(),
                    grouping: (!singletons).then(|| c.grouping().to_vec()),
                }
            })
            .collect();
        ModelFile {
            name: model.name().map(str::to_string),
            n: model.n(),
            labels: Some(model.labels().tags().map(str::to_string).collect()),
            state,
            contexts,
        }
    }
}

/// Parses and builds a model from JSON text.
pub fn load_model(text: &str) -> Result<KsModel, ModelFileError> {
    ModelFile::parse(text)?.build()
}
