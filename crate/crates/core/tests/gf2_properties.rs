use cylrev::gf2::{circulant_nullspace, inverse_rule, poly_gcd, poly_powmod, BitString, Gf2Poly};
use proptest::prelude::*;

fn rule(n: usize, mask: u32) -> BitString {
    BitString::from_positions(n, (0..n).filter(|i| mask >> i & 1 == 1)).unwrap()
}

/// Reversible as a map: `V ⊠ ·` is injective on all `2^n` vectors.
fn injective(v: &BitString) -> bool {
    let n = v.len();
    let mut seen = vec![false; 1 << n];
    for mask in 0u32..1 << n {
        let image = v.convolve(&rule(n, mask)).unwrap();
        let key = image.positions().iter().fold(0usize, |k, &i| k | 1 << i);
        if std::mem::replace(&mut seen[key], true) {
            return false;
        }
    }
    true
}

#[test]
fn inverse_existence_matches_injectivity() {
    for n in 1..=10 {
        for mask in 1u32..1 << n {
            let v = rule(n, mask);
            let inv = inverse_rule(&v);
            assert_eq!(inv.is_some(), injective(&v), "{v}");
            if let Some(w) = inv {
                assert_eq!(v.convolve(&w).unwrap(), BitString::unit(n, 0));
            }
        }
    }
}

#[test]
fn empty_nullspace_iff_coprime() {
    for n in 1..=12 {
        let modulus = Gf2Poly::cyclic_modulus(n);
        for mask in 1u32..1 << n {
            let v = rule(n, mask);
            let coprime = poly_gcd(v.as_poly(), &modulus).unwrap().is_one();
            assert_eq!(circulant_nullspace(&v).is_empty(), coprime, "{v}");
        }
    }
}

#[test]
fn powmod_agrees_with_repeated_multiplication() {
    let m = Gf2Poly::from_exponents([0, 2, 5, 9]);
    let base = Gf2Poly::from_exponents([1, 3, 4]);
    let mut acc = Gf2Poly::one();
    for e in 0..40u64 {
        assert_eq!(poly_powmod(&base, e, &m), acc, "e = {e}");
        acc = acc.mul(&base).rem(&m);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn nullspace_vectors_are_annihilated(n in 2usize..48, units in prop::collection::btree_set(0usize..48, 1..6)) {
        let v = BitString::from_positions(n, units.into_iter().filter(|&u| u < n).chain([0])).unwrap();
        for l in circulant_nullspace(&v) {
            prop_assert!(v.convolve(&l).unwrap().is_zero());
        }
    }

    #[test]
    fn inverse_round_trips(n in 1usize..=96, units in prop::collection::btree_set(0usize..96, 1..8)) {
        let v = BitString::from_positions(n, units.into_iter().map(|u| u % n)).unwrap();
        if let Some(w) = inverse_rule(&v) {
            prop_assert_eq!(v.convolve(&w).unwrap(), BitString::unit(n, 0));
            prop_assert_eq!(w.convolve(&v).unwrap(), BitString::unit(n, 0));
        } else {
            prop_assert!(!circulant_nullspace(&v).is_empty());
        }
    }

    #[test]
    fn gcd_divides_both(a in prop::collection::vec(any::<u64>(), 1..4), b in prop::collection::vec(any::<u64>(), 1..4)) {
        let (p, q) = (Gf2Poly::from_words(a), Gf2Poly::from_words(b));
        prop_assume!(!p.is_zero() || !q.is_zero());
        let g = poly_gcd(&p, &q).unwrap();
        prop_assert!(p.rem(&g).is_zero());
        prop_assert!(q.rem(&g).is_zero());
    }
}
