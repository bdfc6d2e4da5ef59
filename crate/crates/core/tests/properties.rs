use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use xmod2_core::action::Action;
use xmod2_core::algebra::{Algebra, Key};
use xmod2_core::fixtures;
use xmod2_core::random::random_algebra;
use xmod2_core::{LinearMap, Policy, Ring};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn free_xy(ring: Ring) -> Algebra {
    Algebra::free("P", ring, vec!["x".into(), "y".into()]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_finite_algebras_are_commutative_and_associative(seed in any::<u64>()) {
        let alg = random_algebra("A", "a", Ring::Prime(5), 3, &mut rng(seed));
        for c in alg.certify(&Policy::default()) {
            prop_assert!(c.passed(), "{}: {:?}", c.name, c.witness);
        }
    }

    #[test]
    fn negation_cancels(seed in any::<u64>()) {
        let mut g = rng(seed);
        for alg in [free_xy(Ring::Rational), fixtures::f1_algebra(Ring::Rational)] {
            let u = alg.random_element(&mut g, 4);
            prop_assert!((&u + &(-&u)).terms().is_empty());
        }
    }

    #[test]
    fn substitution_is_multiplicative(seed in any::<u64>()) {
        let mut g = rng(seed);
        let (src, dst) = (free_xy(Ring::Rational), Algebra::free("T", Ring::Rational, vec!["t".into()]).unwrap());
        let images = BTreeMap::from([(Key::Mono(vec![0]), dst.random_element(&mut g, 2)), (Key::Mono(vec![1]), dst.random_element(&mut g, 2))]);
        let phi = LinearMap::from_images(&src, &dst, images).unwrap();
        let (u, v) = (src.random_element(&mut g, 4), src.random_element(&mut g, 4));
        prop_assert_eq!(phi.apply(&(&u * &v)), &phi.apply(&u) * &phi.apply(&v));
    }

    #[test]
    fn multiplication_action_of_a_free_algebra(seed in any::<u64>()) {
        let mut g = rng(seed);
        let r = free_xy(Ring::Prime(5));
        let act = Action::from_fn(&r, &r, |u, v| u * v);
        let (a, b, m, m1) = (r.random_element(&mut g, 4), r.random_element(&mut g, 4), r.random_element(&mut g, 4), r.random_element(&mut g, 4));
        prop_assert_eq!(act.apply(&a, &(&m * &m1)), &act.apply(&a, &m) * &m1);
        prop_assert_eq!(act.apply(&(&a * &b), &m), act.apply(&a, &act.apply(&b, &m)));
    }

    #[test]
    fn semidirect_product_is_commutative_and_associative(seed in any::<u64>()) {
        let mut g = rng(seed);
        let d = fixtures::identity_domain(Ring::Prime(5), &["x"]).unwrap();
        let lam = Algebra::semidirect(&d.r, &d.e, &d.act_e).unwrap();
        let (u, v, w) = (lam.random_element(&mut g, 3), lam.random_element(&mut g, 3), lam.random_element(&mut g, 3));
        prop_assert_eq!(lam.mul(&u, &v), lam.mul(&v, &u));
        prop_assert_eq!(lam.mul(&lam.mul(&u, &v), &w), lam.mul(&u, &lam.mul(&v, &w)));
    }
}

#[test]
fn semidirect_square_of_f1() {
    // (x, x²)·(x, 0) = (x², x·x² + x·x² + 0) = (x², 0)
    let r = fixtures::f1_algebra(Ring::Rational);
    let act = Action::from_fn(&r, &r, |u, v| r.mul(u, v));
    let lam = Algebra::semidirect(&r, &r, &act).unwrap();
    let (x, x2) = (r.from_key(Key::Basis(0)), r.from_key(Key::Basis(1)));
    let prod = lam.mul(&lam.join(&x, &x2), &lam.join(&x, &r.zero()));
    assert_eq!(prod, lam.join(&x2, &r.zero()));
}
