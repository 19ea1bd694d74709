//! Contextuality checks for Pauli-observable models: Pauli algebra, state
//! vectors, Kochen-Specker feasibility over GF(2), exact classical bounds of
//! Bell operators, cascade-measurement equivalence, and evaluation of
//! measured GHZ statistics.

pub mod bell;
pub mod bound;
pub mod catalog;
pub mod cli;
pub mod equivalence;
pub mod expdata;
pub mod feasibility;
pub mod gf2;
pub mod model;
pub mod modelfile;
pub mod pauli;
pub mod state;

pub use bell::{BellOperator, CorrelationTerm};
pub use bound::{classical_bound, classical_bound_constrained, classical_bound_parallel, reduce, reduce_operator, BoundResult, Reduction};
pub use catalog::{ghz_mermin, CatalogEntry};
pub use equivalence::{cascade_equivalent, inequalities_equivalent, EquivalenceReport};
pub use expdata::{fidelity, mermin_value, witness, DataSet, ErrorMode, ValueWithError};
pub use feasibility::{ks_feasible, FeasibilityResult};
pub use model::{build_model, eigen_sign, Context, KsModel};
pub use modelfile::{load_model, ModelFile};
pub use pauli::{Letter, PauliWord, Phase, QubitLabels};
pub use state::{bell_value, expectation, make_ghz, spectral_max, StateVector};
