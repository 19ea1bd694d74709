mod common;

use common::{brute_bound, rng};
use ksverify::bell::BellOperator;
use ksverify::bound::{classical_bound, classical_bound_constrained, classical_bound_parallel, reduce};
use ksverify::catalog;
use ksverify::pauli::{Letter, PauliWord};
use ksverify::state::bell_value;
use rand::Rng;

/// Terms whose groups are single-qubit letters on distinct qubits, so every
/// term is a valid product of commuting observables.
fn random_operator<R: Rng>(n: usize, terms: usize, rng: &mut R) -> BellOperator {
    let terms = (0..terms)
        .map(|_| {
            let mut groups = Vec::new();
            for q in 0..n {
                if rng.random_bool(0.6) {
                    let l = [Letter::X, Letter::Y, Letter::Z][rng.random_range(0..3)];
                    groups.push(PauliWord::single(n, q, l));
                }
            }
            if groups.is_empty() {
                groups.push(PauliWord::single(n, 0, Letter::Z));
            }
            let c = f64::from([-4, -3, -2, -1, 1, 2, 3, 4][rng.random_range(0..8)]) / 2.0;
            (c, groups)
        })
        .collect();
    BellOperator::from_terms(n, terms).unwrap()
}

fn value(op: &BellOperator, v: &[i8]) -> f64 {
    op.terms
        .iter()
        .map(|t| t.coefficient * t.symbols.iter().map(|&s| f64::from(v[s])).product::<f64>())
        .sum()
}

fn local_search<R: Rng>(op: &BellOperator, restarts: usize, rng: &mut R) -> f64 {
    let m = op.symbols.len();
    let mut best = f64::NEG_INFINITY;
    for _ in 0..restarts {
        let mut v: Vec<i8> = (0..m).map(|_| if rng.random_bool(0.5) { 1 } else { -1 }).collect();
        let mut current = value(op, &v);
        loop {
            let mut improved = false;
            for s in 0..m {
                v[s] = -v[s];
                let candidate = value(op, &v);
                if candidate > current {
                    current = candidate;
                    improved = true;
                } else {
                    v[s] = -v[s];
                }
            }
            if !improved {
                break;
            }
        }
        best = best.max(current);
    }
    best
}

#[test]
fn bound_matches_brute_force_and_dominates_local_search() {
    let mut r = rng(11);
    for _ in 0..50 {
        let n = r.random_range(2..=5);
        let op = random_operator(n, r.random_range(1..=8), &mut r);
        let exact = classical_bound(&op).unwrap();
        assert_eq!(exact.bound, brute_bound(&op));
        let v: Vec<i8> = exact.maximizer.iter().map(|s| s.value).collect();
        assert_eq!(value(&op, &v), exact.bound);
        assert!(local_search(&op, 10, &mut r) <= exact.bound + 1e-12);
    }
}

#[test]
fn maximizer_is_lexicographically_smallest() {
    let mut r = rng(12);
    for _ in 0..30 {
        let op = random_operator(3, r.random_range(1..=5), &mut r);
        let m = op.symbols.len();
        let best = brute_bound(&op);
        // +1 before -1, symbol 0 compared first
        let first = (0..1u32 << m)
            .map(|k| (0..m).map(|s| if k >> (m - 1 - s) & 1 == 1 { -1i8 } else { 1 }).collect::<Vec<_>>())
            .find(|v| (value(&op, v) - best).abs() < 1e-12)
            .unwrap();
        let got: Vec<i8> = classical_bound(&op).unwrap().maximizer.iter().map(|s| s.value).collect();
        assert_eq!(got, first);
    }
}

#[test]
fn parallel_enumeration_is_deterministic() {
    let mut r = rng(13);
    for _ in 0..20 {
        let op = random_operator(5, 8, &mut r);
        let serial = classical_bound(&op).unwrap();
        for threads in [2, 3, 4, 7] {
            assert_eq!(classical_bound_parallel(&op, threads).unwrap(), serial);
        }
    }
}

#[test]
fn three_sign_identity() {
    for mask in 0..8 {
        let [a, b, c] = [0, 1, 2].map(|k| if mask >> k & 1 == 1 { -1i32 } else { 1 });
        let v = a + b + c - a * b * c;
        assert!(v == 2 || v == -2, "{a} {b} {c}");
    }
}

#[test]
fn catalog_bounds_and_violations() {
    for entry in catalog::list().unwrap() {
        let bound = classical_bound(&entry.bell_operator).unwrap().bound;
        assert_eq!(bound, brute_bound(&entry.bell_operator), "{}", entry.name);
        let quantum = entry.quantum_value().unwrap();
        if entry.model.n() >= 3 {
            assert!(quantum > bound, "{}", entry.name);
        }
    }
}

#[test]
fn reduction_preserves_the_bound() {
    for name in ["mermin-ghz3", "square-b", "square-c"] {
        let entry = catalog::get(name).unwrap();
        let red = reduce(&entry.model, &entry.bell_operator).unwrap();
        let full = classical_bound(&entry.bell_operator).unwrap().bound;
        let reduced = classical_bound_constrained(&red.reduced, &red.constraints).unwrap().bound;
        assert_eq!(red.reduced.terms.len(), 4, "{name}");
        assert_eq!(red.adjusted_bound(full), 2.0, "{name}");
        assert_eq!(reduced, 2.0, "{name}");
        let q = bell_value(&red.reduced, entry.model.state().unwrap()).unwrap();
        assert!((q - 4.0).abs() < 1e-9, "{name}");
    }
}

#[test]
fn ghz_mermin_bounds_follow_the_power_law() {
    for n in 2..=5 {
        let entry = catalog::ghz_mermin(n).unwrap();
        assert_eq!(brute_bound(&entry.bell_operator), f64::powi(2.0, (n / 2) as i32));
    }
}
