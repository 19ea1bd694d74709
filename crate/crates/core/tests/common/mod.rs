//! Dense-matrix reference implementations shared by the integration tests.
#![allow(dead_code)]

use ksverify::bell::BellOperator;
use ksverify::pauli::{Letter, PauliWord};
use ksverify::state::StateVector;
use nalgebra::{Complex, DMatrix, DVector};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub type C = Complex<f64>;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> C {
    Complex::new(re, im)
}

pub fn letter_matrix(l: Letter) -> DMatrix<C> {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    match l {
        Letter::I => DMatrix::from_row_slice(2, 2, &[o, z, z, o]),
        Letter::X => DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        Letter::Y => DMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        Letter::Z => DMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
    }
}

/// Kronecker product with qubit 0 as the most significant factor.
pub fn dense(word: &PauliWord) -> DMatrix<C> {
    let mut m = DMatrix::from_element(1, 1, c(1.0, 0.0));
    for &l in word.letters() {
        m = m.kronecker(&letter_matrix(l));
    }
    m * word.phase().to_complex()
}

pub fn dense_operator(op: &BellOperator) -> DMatrix<C> {
    let dim = 1usize << op.n;
    let mut m = DMatrix::from_element(dim, dim, c(0.0, 0.0));
    for t in &op.terms {
        let mut p = DMatrix::identity(dim, dim);
        for g in &t.groups {
            p *= dense(g);
        }
        m += p * c(t.coefficient, 0.0);
    }
    m
}

pub fn column(state: &StateVector) -> DVector<C> {
    DVector::from_iterator(state.dim(), state.amplitudes().iter().copied())
}

/// `<ψ|M|ψ>` as a complex number.
pub fn dense_expectation(m: &DMatrix<C>, state: &StateVector) -> C {
    let v = column(state);
    (v.adjoint() * m * &v)[(0, 0)]
}

pub fn max_eigenvalue(m: &DMatrix<C>) -> f64 {
    m.clone().symmetric_eigen().eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
}

pub fn all_words(n: usize) -> Vec<PauliWord> {
    (0..1usize << (2 * n))
        .map(|k| PauliWord::new((0..n).map(|q| Letter::ALL[(k >> (2 * q)) & 3]).collect(), Default::default()))
        .collect()
}

pub fn random_word<R: Rng>(n: usize, rng: &mut R) -> PauliWord {
    PauliWord::new((0..n).map(|_| Letter::ALL[rng.random_range(0..4)]).collect(), Default::default())
}

/// Maximum of `op` over ±1 assignments by direct evaluation of every term.
pub fn brute_bound(op: &BellOperator) -> f64 {
    let m = op.symbols.len();
    (0..1u64 << m)
        .map(|mask| {
            op.terms
                .iter()
                .map(|t| {
                    let sign: f64 = t.symbols.iter().map(|&s| if mask >> s & 1 == 1 { -1.0 } else { 1.0 }).product();
                    t.coefficient * sign
                })
                .sum::<f64>()
        })
        .fold(f64::NEG_INFINITY, f64::max)
}
