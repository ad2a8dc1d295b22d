// SPDX-License-Identifier: Apache-2.0
use field_tower::{field_build, tower_build, Fe, FieldError};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn f9_with_given_modulus() {
    // x^2 - x - 1 = x^2 + 2x + 2 over F3
    let f = field_build(3, 2, Some(&[2, 2, 1])).unwrap();
    let x = f.from_coeffs(&[0, 1]).unwrap();
    let x_plus_1 = f.from_coeffs(&[1, 1]).unwrap();
    assert_eq!(f.mul(x, x), x_plus_1);
    assert_eq!(f.trace(x), 1);
    assert_eq!(f.trace(Fe::ZERO), 0);
}

#[test]
fn trace_of_one_is_degree() {
    for (p, r) in [(2, 3), (3, 2), (3, 4), (5, 3), (7, 1)] {
        let f = field_build(p, r, None).unwrap();
        assert_eq!(f.trace(Fe::ONE), (r as u32) % p);
    }
}

#[test]
fn prime_field_basics() {
    let f = field_build(3, 1, None).unwrap();
    assert_eq!(f.add(Fe(2), Fe(2)), Fe(1));
    assert_eq!(f.modulus(), &[0, 1]);
    assert_eq!(field_build(4, 1, None).unwrap_err(), FieldError::NotPrime(4));
}

#[test]
fn reducible_modulus_rejected() {
    // x^2 - 1 has roots
    assert_eq!(field_build(3, 2, Some(&[2, 0, 1])).unwrap_err(), FieldError::ReduciblePolynomial);
    assert!(matches!(field_build(3, 2, Some(&[1, 0, 2])), Err(FieldError::BadPolynomial(_))));
}

#[test]
fn inverses_exhaustive() {
    for (p, r) in [(3, 2), (2, 4), (5, 2), (3, 3)] {
        let f = field_build(p, r, None).unwrap();
        for a in f.elements().skip(1) {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), Fe::ONE);
        }
        assert_eq!(f.inv(Fe::ZERO), Err(FieldError::DivisionByZero));
    }
}

#[test]
fn large_field_inverse_without_tables() {
    let f = field_build(3, 16, None).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..50 {
        let a = f.random_nonzero(&mut rng);
        assert_eq!(f.mul(a, f.inv(a).unwrap()), Fe::ONE);
    }
}

#[test]
fn trace_linear_frobenius_invariant_nondegenerate() {
    for (p, r) in [(3, 2), (2, 4), (5, 2), (3, 3)] {
        let f = field_build(p, r, None).unwrap();
        for z in f.elements() {
            assert_eq!(f.trace(f.frobenius(z)), f.trace(z));
            if !z.is_zero() {
                assert!(f.elements().any(|w| f.trace(f.mul(z, w)) != 0));
            }
            for w in f.elements().step_by(3) {
                for a in 0..p {
                    let lhs = f.trace(f.add(f.scale(a, z), w));
                    let rhs = (a * f.trace(z) + f.trace(w)) % p;
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}

#[test]
fn tower_depth_one_over_f3() {
    let f = tower_build(3, 1).unwrap();
    let e1 = f.gen(1).unwrap();
    assert_ne!(f.frobenius(e1), e1);
    assert_eq!(f.frobenius_k(e1, 2), e1);
    assert_eq!(f.tower_level(Fe::ONE).unwrap(), 0);
    assert_eq!(f.tower_level(e1).unwrap(), 1);
    assert!(matches!(tower_build(3, 0), Err(FieldError::BadDepth)));
}

#[test]
fn tower_f16_chain() {
    let f = tower_build(2, 2).unwrap();
    assert_eq!(f.q(), 16);
    let e1 = f.gen(1).unwrap();
    let e2 = f.gen(2).unwrap();
    assert_eq!(f.tower_level(e1).unwrap(), 1);
    assert_eq!(f.tower_level(e2).unwrap(), 2);
    assert_eq!(f.tower_level(f.add(e1, e2)).unwrap(), 2);
    // F4 inside F16 has exactly 4 elements
    let f4 = f.elements().filter(|&z| f.tower_level(z).unwrap() <= 1).count();
    assert_eq!(f4, 4);
}

#[test]
fn tower_level_monotone_under_products() {
    let f = tower_build(3, 2).unwrap();
    for z in f.elements().step_by(7) {
        for w in f.elements().step_by(5) {
            let lz = f.tower_level(z).unwrap();
            let lw = f.tower_level(w).unwrap();
            assert!(f.tower_level(f.mul(z, w)).unwrap() <= lz.max(lw));
        }
    }
}

#[test]
fn no_tower_errors() {
    let f = field_build(3, 2, None).unwrap();
    assert_eq!(f.tower_level(Fe::ONE), Err(FieldError::NoTower));
}

#[test]
fn random_at_level_hits_exact_level() {
    let f = tower_build(3, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for j in 0..=3 {
        for _ in 0..20 {
            let z = f.random_at_level(j, &mut rng).unwrap();
            if j > 0 {
                assert_eq!(f.tower_level(z).unwrap(), j);
            }
        }
    }
}

#[test]
fn descriptor_round_trip() {
    let f = tower_build(3, 2).unwrap();
    let d = f.descriptor();
    let g = field_tower::FieldCtx::from_descriptor(&d).unwrap();
    assert_eq!(*f, *g);
    assert_eq!(f.gen(2).unwrap(), g.gen(2).unwrap());
}

proptest::proptest! {
    #[test]
    fn distributive_in_f81(a in 0u128..81, b in 0u128..81, c in 0u128..81) {
        let f = field_build(3, 4, None).unwrap();
        let (a, b, c) = (Fe(a), Fe(b), Fe(c));
        proptest::prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        proptest::prop_assert_eq!(f.sub(f.add(a, b), b), a);
    }
}
