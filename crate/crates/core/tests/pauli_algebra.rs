mod common;

use common::{all_words, dense};
use ksverify::pauli::{commutes, multiply, Letter, PauliWord, Phase};
use proptest::prelude::*;

#[test]
fn multiply_and_commutes_match_dense_matrices() {
    for n in 1..=3 {
        let words = all_words(n);
        let mats: Vec<_> = words.iter().map(dense).collect();
        for (a, ma) in words.iter().zip(&mats) {
            for (b, mb) in words.iter().zip(&mats) {
                let ab = ma * mb;
                let product = multiply(a, b).unwrap();
                assert!((dense(&product) - &ab).norm() < 1e-12, "{a} * {b} = {product}");
                let commutator = (&ab - mb * ma).norm();
                assert_eq!(commutes(a, b).unwrap(), commutator < 1e-12, "[{a}, {b}]");
            }
        }
    }
}

#[test]
fn phases_carry_through_dense_products() {
    let words = all_words(2);
    for k in 0..4u8 {
        for a in &words {
            let a = a.with_phase(Phase::from_exponent(k));
            for b in &words {
                let b = b.with_phase(Phase::from_exponent(3 * k + 1));
                let product = multiply(&a, &b).unwrap();
                assert!((dense(&product) - dense(&a) * dense(&b)).norm() < 1e-12);
            }
        }
    }
}

fn word(n: usize) -> impl Strategy<Value = PauliWord> {
    (prop::collection::vec(0..4usize, n), 0..4u8)
        .prop_map(|(ls, k)| PauliWord::new(ls.into_iter().map(|i| Letter::ALL[i]).collect(), Phase::from_exponent(k)))
}

fn triple() -> impl Strategy<Value = (PauliWord, PauliWord, PauliWord)> {
    (1..=8usize).prop_flat_map(|n| (word(n), word(n), word(n)))
}

proptest! {
    #[test]
    fn multiplication_is_associative((a, b, c) in triple()) {
        let left = multiply(&multiply(&a, &b).unwrap(), &c).unwrap();
        let right = multiply(&a, &multiply(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn reversed_product_differs_by_commutation_sign((a, b, _c) in triple()) {
        let ab = multiply(&a, &b).unwrap();
        let ba = multiply(&b, &a).unwrap();
        prop_assert_eq!(ab.letters(), ba.letters());
        let expected = if commutes(&a, &b).unwrap() { ba.clone() } else { ba.negated() };
        prop_assert_eq!(ab, expected);
    }

    #[test]
    fn squares_are_signed_identities((a, _b, _c) in triple()) {
        let sq = multiply(&a, &a).unwrap();
        prop_assert!(sq.is_identity_letters());
        prop_assert!(sq.phase().is_real());
        if a.is_hermitian() {
            prop_assert_eq!(sq.phase(), Phase::ONE);
        }
    }

    #[test]
    fn text_round_trip((a, _b, _c) in triple()) {
        let text = a.to_string();
        prop_assert_eq!(text.parse::<PauliWord>().unwrap(), a);
    }
}
