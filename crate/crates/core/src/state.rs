//! Dense state-vector simulation on `2^n` complex amplitudes.
//!
//! Qubit 0 is the leftmost letter of a word and the most significant bit of
//! the amplitude index, so index `0b011` is `|0>|1>|1>`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::bell::BellOperator;
use crate::pauli::{first_noncommuting_pair, product_of, Letter, PauliError, PauliWord};

/// Hard cap on simulated qubits.
pub const MAX_QUBITS: usize = 12;

const NORM_TOLERANCE: f64 = 1e-12;
const IMAG_TOLERANCE: f64 = 1e-12;
const POWER_TOLERANCE: f64 = 1e-10;
const POWER_MAX_ITERATIONS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error("qubit count {0} outside 1..={MAX_QUBITS}")]
    QubitCount(usize),
    #[error("expected {expected} amplitudes, got {got}")]
    AmplitudeCount { expected: usize, got: usize },
    #[error("state norm {0} differs from 1")]
    NotNormalized(f64),
    #[error("operator acts on {op} qubits but the state has {state}")]
    DimensionMismatch { op: usize, state: usize },
    #[error("words {0} and {1} do not commute")]
    NonCommuting(usize, usize),
    #[error("empty list of words")]
    Empty,
    #[error("product {0} is not Hermitian")]
    NonHermitian(String),
    #[error("expectation has imaginary part {0}")]
    ImaginaryExpectation(f64),
    #[error("unknown state preset {0:?}")]
    UnknownPreset(String),
    #[error("power iteration did not converge after {0} iterations")]
    NoConvergence(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

fn check_qubits(n: usize) -> Result<(), StateError> {
    if n == 0 || n > MAX_QUBITS {
        return Err(StateError::QubitCount(n));
    }
    Ok(())
}

impl StateVector {
    /// Wraps amplitudes; they must already be normalized to within `1e-12`.
    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<StateVector, StateError> {
        check_qubits(n)?;
        let expected = 1usize << n;
        if amps.len() != expected {
            return Err(StateError::AmplitudeCount { expected, got: amps.len() });
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(StateError::NotNormalized(norm));
        }
        Ok(StateVector { n, amps })
    }

    /// Rescales to unit norm before wrapping.
    pub fn normalized(n: usize, mut amps: Vec<Complex64>) -> Result<StateVector, StateError> {
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(StateError::NotNormalized(norm));
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        StateVector::from_amplitudes(n, amps)
    }

    /// `(|0...0> + sign |1...1>) / sqrt(2)`.
    pub fn ghz(n: usize, sign: i8) -> Result<StateVector, StateError> {
        check_qubits(n)?;
        let dim = 1usize << n;
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[0] = Complex64::new(FRAC_1_SQRT_2, 0.0);
        amps[dim - 1] = Complex64::new(if sign < 0 { -FRAC_1_SQRT_2 } else { FRAC_1_SQRT_2 }, 0.0);
        Ok(StateVector { n, amps })
    }

    /// Computational basis state from a bit string such as `"010"`.
    pub fn basis(bits: &str) -> Result<StateVector, StateError> {
        let n = bits.len();
        check_qubits(n)?;
        if !bits.chars().all(|c| c == '0' || c == '1') {
            return Err(StateError::UnknownPreset(format!("basis:{bits}")));
        }
        let index = usize::from_str_radix(bits, 2).expect("binary digits");
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    /// Haar-random pure state.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<StateVector, StateError> {
        check_qubits(n)?;
        let amps = (0..1usize << n)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        StateVector::normalized(n, amps)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        inner(&self.amps, &other.amps)
    }

    /// Euclidean distance `‖self - other‖`.
    pub fn distance(&self, other: &StateVector) -> f64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, factor: f64) -> StateVector {
        StateVector { n: self.n, amps: self.amps.iter().map(|a| a * factor).collect() }
    }

    /// Outcome probabilities after measuring qubit `q` in the eigenbasis of
    /// `setting[q]`. Outcome bit 0 is the `+1` eigenvector. Identity entries
    /// are measured in Z.
    pub fn measurement_probabilities(&self, setting: &[Letter]) -> Result<Vec<f64>, StateError> {
        if setting.len() != self.n {
            return Err(StateError::DimensionMismatch { op: setting.len(), state: self.n });
        }
        let mut amps = self.amps.clone();
        let h = FRAC_1_SQRT_2;
        for (q, letter) in setting.iter().enumerate() {
            let bit = 1usize << (self.n - 1 - q);
            let rotate: Option<[[Complex64; 2]; 2]> = match letter {
                // H maps |+> to |0>
                Letter::X => Some([
                    [Complex64::new(h, 0.0), Complex64::new(h, 0.0)],
                    [Complex64::new(h, 0.0), Complex64::new(-h, 0.0)],
                ]),
                // H S^dagger maps |+i> to |0>
                Letter::Y => Some([
                    [Complex64::new(h, 0.0), Complex64::new(0.0, -h)],
                    [Complex64::new(h, 0.0), Complex64::new(0.0, h)],
                ]),
                Letter::Z | Letter::I => None,
            };
            if let Some(u) = rotate {
                for i in 0..amps.len() {
                    if i & bit == 0 {
                        let (a0, a1) = (amps[i], amps[i | bit]);
                        amps[i] = u[0][0] * a0 + u[0][1] * a1;
                        amps[i | bit] = u[1][0] * a0 + u[1][1] * a1;
                    }
                }
            }
        }
        Ok(amps.iter().map(|a| a.norm_sqr()).collect())
    }
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Named presets: `ghz+`, `ghz-` (needs `n`), `basis:<bits>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StatePreset {
    Ghz(i8),
    Basis(String),
}

impl StatePreset {
    pub fn build(&self, n: usize) -> Result<StateVector, StateError> {
        match self {
            StatePreset::Ghz(sign) => StateVector::ghz(n, *sign),
            StatePreset::Basis(bits) => {
                let s = StateVector::basis(bits)?;
                if s.n() != n {
                    return Err(StateError::DimensionMismatch { op: n, state: s.n() });
                }
                Ok(s)
            }
        }
    }
}

impl FromStr for StatePreset {
    type Err = StateError;

    fn from_str(s: &str) -> Result<StatePreset, StateError> {
        match s {
            "ghz+" | "ghz" => Ok(StatePreset::Ghz(1)),
            "ghz-" => Ok(StatePreset::Ghz(-1)),
            _ => match s.strip_prefix("basis:") {
                Some(bits) if !bits.is_empty() && bits.chars().all(|c| c == '0' || c == '1') => {
                    Ok(StatePreset::Basis(bits.to_string()))
                }
                _ => Err(StateError::UnknownPreset(s.to_string())),
            },
        }
    }
}

impl std::fmt::Display for StatePreset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StatePreset::Ghz(s) if *s < 0 => f.write_str("ghz-"),
            StatePreset::Ghz(_) => f.write_str("ghz+"),
            StatePreset::Basis(bits) => write!(f, "basis:{bits}"),
        }
    }
}

pub fn make_ghz(n: usize, sign: i8) -> Result<StateVector, StateError> {
    StateVector::ghz(n, sign)
}

fn apply_raw(word: &PauliWord, amps: &[Complex64], out: &mut [Complex64], scale: Complex64) {
    let n = word.n();
    let flip = word.flip_mask();
    let mut zy_mask = 0usize;
    let mut y_count = 0u8;
    for (q, l) in word.letters().iter().enumerate() {
        match l {
            Letter::Y => {
                y_count += 1;
                zy_mask |= 1 << (n - 1 - q);
            }
            Letter::Z => zy_mask |= 1 << (n - 1 - q),
            _ => {}
        }
    }
    // Y|0> = i|1>, Y|1> = -i|0>: every Y contributes i, and a set bit under
    // Y or Z contributes -1.
    let base = (word.phase() * crate::pauli::Phase::from_exponent(y_count)).to_complex() * scale;
    for (b, a) in amps.iter().enumerate() {
        let sign = if (b & zy_mask).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
        out[b ^ flip] += base * sign * a;
    }
}

/// `word |state>`, with the word's phase applied as-is.
pub fn apply_pauli(word: &PauliWord, state: &StateVector) -> Result<StateVector, StateError> {
    if word.n() != state.n {
        return Err(StateError::DimensionMismatch { op: word.n(), state: state.n });
    }
    let mut out = vec![Complex64::new(0.0, 0.0); state.dim()];
    apply_raw(word, &state.amps, &mut out, Complex64::new(1.0, 0.0));
    Ok(StateVector { n: state.n, amps: out })
}

/// Product of a list of mutually commuting words, checked to be Hermitian.
pub fn commuting_product(words: &[PauliWord]) -> Result<PauliWord, StateError> {
    if words.is_empty() {
        return Err(StateError::Empty);
    }
    if let Some((i, j)) = first_noncommuting_pair(words)? {
        return Err(StateError::NonCommuting(i, j));
    }
    let product = product_of(words)?;
    debug_assert_eq!(product, product_of(words.iter().rev())?);
    if !product.is_hermitian() {
        return Err(StateError::NonHermitian(product.to_string()));
    }
    Ok(product)
}

/// `<ψ| w_1 w_2 ... w_k |ψ>` for mutually commuting words with a Hermitian
/// product.
pub fn expectation(words: &[PauliWord], state: &StateVector) -> Result<f64, StateError> {
    let product = commuting_product(words)?;
    word_expectation(&product, state)
}

/// Expectation of a single Hermitian word.
pub fn word_expectation(word: &PauliWord, state: &StateVector) -> Result<f64, StateError> {
    if !word.is_hermitian() {
        return Err(StateError::NonHermitian(word.to_string()));
    }
    let image = apply_pauli(word, state)?;
    let value = state.inner(&image);
    if value.im.abs() > IMAG_TOLERANCE {
        return Err(StateError::ImaginaryExpectation(value.im));
    }
    Ok(value.re)
}

/// `Σ coefficient_i <term_i>`.
pub fn bell_value(op: &BellOperator, state: &StateVector) -> Result<f64, StateError> {
    if op.n != state.n {
        return Err(StateError::DimensionMismatch { op: op.n, state: state.n });
    }
    op.terms
        .iter()
        .map(|t| Ok(t.coefficient * expectation(&t.groups, state)?))
        .sum()
}

/// Bell operator flattened to `(coefficient, Hermitian word)` pairs, merging
/// terms whose products share letters.
fn flatten(op: &BellOperator) -> Result<Vec<(f64, PauliWord)>, StateError> {
    let mut out: Vec<(f64, PauliWord)> = Vec::new();
    for t in &op.terms {
        let p = commuting_product(&t.groups)?;
        let sign = p.phase().sign().expect("checked Hermitian") as f64;
        let key = p.unsigned();
        match out.iter_mut().find(|(_, w)| *w == key) {
            Some((c, _)) => *c += sign * t.coefficient,
            None => out.push((sign * t.coefficient, key)),
        }
    }
    Ok(out)
}

fn apply_flat(terms: &[(f64, PauliWord)], v: &[Complex64], shift: f64) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = v.iter().map(|a| a * shift).collect();
    for (c, w) in terms {
        apply_raw(w, v, &mut out, Complex64::new(*c, 0.0));
    }
    out
}

/// Largest eigenvalue of the Hermitian operator `op`.
///
/// Power iteration on `op + s·I` with `s = Σ|c_i|`, which makes the shifted
/// operator positive semidefinite so its dominant eigenvalue is the top of the
/// original spectrum. The start vector has uniform magnitudes and a fixed
/// quasi-random phase pattern so it is not orthogonal to real eigenvectors
/// such as `|->`.
pub fn spectral_max(op: &BellOperator) -> Result<f64, StateError> {
    check_qubits(op.n)?;
    let terms = flatten(op)?;
    if terms.is_empty() {
        return Ok(0.0);
    }
    let shift: f64 = terms.iter().map(|(c, _)| c.abs()).sum();
    let dim = 1usize << op.n;
    let golden = 0.618_033_988_749_894_9_f64;
    let mag = 1.0 / (dim as f64).sqrt();
    let mut v: Vec<Complex64> = (0..dim)
        .map(|k| Complex64::from_polar(mag, std::f64::consts::TAU * ((k as f64 + 1.0) * golden).fract()))
        .collect();
    let mut previous = f64::NAN;
    for _ in 0..POWER_MAX_ITERATIONS {
        let w = apply_flat(&terms, &v, shift);
        let rayleigh = inner(&v, &w).re;
        let norm = w.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            // op = -s·I on the start vector's span
            return Ok(-shift);
        }
        v = w.into_iter().map(|a| a / norm).collect();
        if (rayleigh - previous).abs() <= POWER_TOLERANCE * rayleigh.abs().max(1.0) {
            let image = apply_flat(&terms, &v, 0.0);
            return Ok(inner(&v, &image).re);
        }
        previous = rayleigh;
    }
    Err(StateError::NoConvergence(POWER_MAX_ITERATIONS))
}
