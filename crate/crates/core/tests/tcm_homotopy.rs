use std::collections::BTreeMap;
use std::sync::Arc;

use xmod2_core::algebra::{Element, Key};
use xmod2_core::crossed::{TwoCrossedModule, TwoCrossedMorphism};
use xmod2_core::fixtures;
use xmod2_core::random::random_two_crossed;
use xmod2_core::tcm_homotopy::*;
use xmod2_core::{Error, LinearMap, Policy, Ring};

const Q: Ring = Ring::Rational;

fn morphism_f3_f2(ring: Ring) -> TwoCrossedMorphism {
    let (a, b) = (fixtures::f3(ring), fixtures::f2(ring));
    let f0 = LinearMap::from_images(&a.r, &b.r, BTreeMap::from([(Key::Mono(vec![0]), b.r.from_key(Key::Basis(0)))])).unwrap();
    TwoCrossedMorphism::new(&a, &b, f0, LinearMap::zero(&a.e, &b.e), LinearMap::zero(&a.l, &b.l), &Policy::default()).unwrap()
}

fn homotopy(f: &TwoCrossedMorphism, s_x: Element) -> TCMHomotopy {
    let p = Policy::default();
    let q = make_quadratic_derivation(f, &BTreeMap::from([(Key::Mono(vec![0]), s_x)]), &BTreeMap::new(), &p).unwrap();
    apply_2cm_homotopy(&q, &p).unwrap()
}

fn xpow(a: &TwoCrossedModule, n: usize) -> Element {
    a.r.from_key(Key::Mono(vec![0; n]))
}

#[test]
fn extension_and_target_values() {
    let f = morphism_f3_f2(Q);
    let (a, b) = (f.source.clone(), f.target.clone());
    let ea = b.e.from_key(Key::Basis(0));
    let h = homotopy(&f, ea.clone());
    assert_eq!(h.s().apply(&xpow(&a, 2)).to_string(), "b");
    assert!(h.s().apply(&xpow(&a, 3)).is_zero());
    assert_eq!(h.target.f0.apply(&xpow(&a, 1)).to_string(), "2p");
    // over 𝔽₂ the same data gives g₀(x) = 0
    let h2 = homotopy(&morphism_f3_f2(Ring::Prime(2)), fixtures::f2(Ring::Prime(2)).e.from_key(Key::Basis(0)));
    assert!(h2.target.f0.apply(&xpow(&h2.source().source, 1)).is_zero());
    // over f₀ = 0
    let zero = TwoCrossedMorphism::new(&a, &b, LinearMap::zero(&a.r, &b.r), LinearMap::zero(&a.e, &b.e), LinearMap::zero(&a.l, &b.l), &Policy::default()).unwrap();
    assert_eq!(homotopy(&zero, ea).s().apply(&xpow(&a, 2)).to_string(), "b");
    // the zero pair connects f to f
    let z = homotopy(&f, b.e.zero());
    assert!(z.target.mismatch(&f).is_none());
}

#[test]
fn x_and_w_on_the_worked_instance() {
    let f = morphism_f3_f2(Q);
    let (a, b) = (f.source.clone(), f.target.clone());
    let ea = b.e.from_key(Key::Basis(0));
    let h = homotopy(&f, ea.clone());
    let h1 = homotopy(&h.target, ea.clone());
    let x = x_map(&h, &h1).unwrap();
    assert_eq!(x.apply(&xpow(&a, 1)).to_string(), "(p, a, a, 0)");
    assert_eq!(x.apply(&xpow(&a, 2)).to_string(), "(0, b, 3b, -2b̂)");
    let w = w_map(&h, &h1).unwrap();
    assert!(w.apply(&xpow(&a, 1)).is_zero());
    assert_eq!(w.apply(&xpow(&a, 2)).to_string(), "-2b̂");
    assert_eq!(box_plus_s(&h, &h1).unwrap().apply(&xpow(&a, 1)).to_string(), "2a");
    assert_eq!(box_plus_s(&h, &h1).unwrap().apply(&xpow(&a, 2)).to_string(), "4b");
    let c = concat_2cm(&h, &h1, &Policy::default()).unwrap();
    assert_eq!(c.target.f0.apply(&xpow(&a, 1)).to_string(), "3p");
    let checks = pair_checks(&h, &h1, &Policy::default()).unwrap();
    assert!(checks.iter().any(|c| c.tag == "wprop"));
    assert!(checks.iter().all(|c| c.passed()), "{checks:?}");
}

#[test]
fn degenerate_triangle_when_one_side_vanishes() {
    let p = Policy::default();
    let f = morphism_f3_f2(Ring::Prime(5));
    let (a, b) = (f.source.clone(), f.target.clone());
    let h = homotopy(&f, b.e.from_key(Key::Basis(0)));
    let z = homotopy(&h.target, b.e.zero());
    let sp = h.space();
    let x = x_map(&h, &z).unwrap();
    let w = w_map(&h, &z).unwrap();
    let mut rng = p.rng("degenerate");
    for _ in 0..20 {
        let r = a.r.random_element(&mut rng, 4);
        let phi = sp.tower.pair(&f.f0.apply(&r), &h.s().apply(&r));
        assert_eq!(x.apply(&r), sp.tower.degeneracy(1, 0, &phi).unwrap(), "at {r}");
        assert!(w.apply(&r).is_zero());
    }
    assert!(box_plus_s(&h, &z).unwrap().generator_images() == h.s().generator_images());
}

#[test]
fn inverse_values() {
    let f = morphism_f3_f2(Q);
    let (a, b) = (f.source.clone(), f.target.clone());
    let h = homotopy(&f, b.e.from_key(Key::Basis(0)));
    let inv = invert_2cm(&h, &Policy::default()).unwrap();
    assert_eq!(inv.s().apply(&xpow(&a, 1)).to_string(), "-a");
    assert_eq!(inv.s().apply(&xpow(&a, 2)).to_string(), "b");
    assert_eq!(w_map(&h, &inv).unwrap().apply(&xpow(&a, 2)).to_string(), "2b̂");
    let sum = box_plus_s(&h, &inv).unwrap();
    for n in 1..=3 {
        assert!(sum.apply(&xpow(&a, n)).is_zero(), "x^{n}");
    }
    assert!(box_plus_s(&inv, &h).unwrap().apply(&xpow(&a, 2)).is_zero());
    assert!(inv.target.mismatch(&f).is_none());
    let z = homotopy(&f, b.e.zero());
    assert!(invert_2cm(&z, &Policy::default()).unwrap().s().generator_images().iter().all(|(_, v)| v.is_zero()));
}

#[test]
fn z_map_and_w_change_on_the_worked_instance() {
    let p = Policy::default();
    let f = morphism_f3_f2(Q);
    let (a, b) = (f.source.clone(), f.target.clone());
    let ea = b.e.from_key(Key::Basis(0));
    let h = homotopy(&f, ea.clone());
    let h1 = homotopy(&h.target, ea.clone());
    let h2 = homotopy(&h1.target, ea);
    assert_eq!(z_map(&h, &h1, &h2).unwrap().apply(&xpow(&a, 1)).to_string(), "(p, a, a, 0, a, 0, 0)");
    let rep = check_w_change(&h, &h1, &h2, &[xpow(&a, 2)], &p).unwrap();
    assert!(rep.passed());
    assert_eq!(rep.values.iter().map(|v| v.value.as_str()).collect::<Vec<_>>(), ["-6b̂", "-6b̂"]);
    let h01 = concat_2cm(&h, &h1, &p).unwrap();
    assert_eq!(w_map(&h01, &h2).unwrap().apply(&xpow(&a, 2)).to_string(), "-4b̂");
    // s″ = 0 reduces the identity to w^(s,s′) = w^(s,s′)
    let z = homotopy(&h1.target, b.e.zero());
    let rs: Vec<Element> = (1..=4).map(|n| xpow(&a, n)).collect();
    assert!(check_w_change(&h, &h1, &z, &rs, &p).unwrap().passed());
}

/// A random composable triple from `source` to `target`.
fn random_triple(space: &Arc<TcmSpace>, rng: &mut rand_chacha::ChaCha8Rng, p: &Policy) -> [TCMHomotopy; 3] {
    let f = random_tcm_morphism(&space.source, &space.target, rng, p);
    let h = apply_2cm_homotopy(&random_quadratic_derivation(space, &f, rng, p), p).unwrap();
    let h1 = apply_2cm_homotopy(&random_quadratic_derivation(space, &h.target, rng, p), p).unwrap();
    let h2 = apply_2cm_homotopy(&random_quadratic_derivation(space, &h1.target, rng, p), p).unwrap();
    [h, h1, h2]
}

#[test]
fn w_change_on_random_triples() {
    let p = Policy::default();
    let ring = Ring::Prime(5);
    let mut rng = p.rng("wchange-triples");
    let d = fixtures::identity_domain(ring, &["x"]).unwrap();
    let mut spaces = vec![
        TcmSpace::new(&fixtures::f3(ring), &fixtures::f2(ring)).unwrap(),
        TcmSpace::new(&d, &fixtures::f4(ring)).unwrap(),
    ];
    for _ in 0..3 {
        spaces.push(TcmSpace::new(&d, &random_two_crossed(ring, 2, &mut rng, &p)).unwrap());
    }
    for i in 0..100 {
        let sp = &spaces[i % spaces.len()];
        let [h, h1, h2] = random_triple(sp, &mut rng, &p);
        let mut rs = basis_up_to(&sp.source.r, 4);
        rs.extend((0..4).map(|_| sp.source.r.random_element(&mut rng, 4)));
        let rep = check_w_change(&h, &h1, &h2, &rs, &p).unwrap();
        assert!(rep.passed(), "triple {i}: {:?}", rep.failures().collect::<Vec<_>>());
    }
}

#[test]
fn bookkeeping_with_nonzero_e() {
    let p = Policy::default();
    let ring = Ring::Prime(5);
    let d = fixtures::identity_domain(ring, &["x"]).unwrap();
    let sp = TcmSpace::new(&d, &fixtures::f4(ring)).unwrap();
    let mut rng = p.rng("bookkeeping");
    let mut nontrivial = 0;
    for _ in 0..6 {
        let [h, h1, _] = random_triple(&sp, &mut rng, &p);
        let inv = invert_2cm(&h, &p).unwrap();
        let w = w_map(&h, &inv).unwrap().after(&d.d1);
        let expected = h.t().negated().plus(&w.negated());
        let w01 = w_map(&h, &h1).unwrap().after(&d.d1);
        let tt = box_plus_t(&h, &h1).unwrap();
        for e in basis_up_to(&d.e, 4) {
            assert_eq!(inv.t().apply(&e), expected.apply(&e));
            assert_eq!(&(&tt.apply(&e) - &h.t().apply(&e)) - &h1.t().apply(&e), w01.apply(&e));
            if !w01.apply(&e).is_zero() {
                nontrivial += 1;
            }
        }
    }
    assert!(nontrivial > 0);
}

#[test]
fn groupoid_suites() {
    let p = Policy::default();
    let ring = Ring::Prime(5);
    let rep = tcm_groupoid_check(&fixtures::f3(ring), &fixtures::f2(ring), 25, &p).unwrap();
    assert!(rep.passed(), "{:?}", rep.failures().collect::<Vec<_>>());
    assert!(tcm_groupoid_check(&fixtures::f3(ring), &fixtures::f0(ring), 5, &p).unwrap().passed());
}

#[test]
fn omitting_w_in_t_concatenation_is_detected() {
    let p = Policy::default();
    let ring = Ring::Prime(5);
    let d = fixtures::identity_domain(ring, &["x"]).unwrap();
    let rep = tcm_groupoid_check_with(&d, &fixtures::f4(ring), 6, &p, ConcatRule::WithoutW).unwrap();
    let failed: Vec<&str> = rep.failures().map(|c| c.tag.as_str()).collect();
    assert!(!failed.is_empty());
    assert!(failed.iter().any(|t| ["inverse", "associativity", "homotopy", "identity", "wprop"].contains(t)), "{failed:?}");
}

#[test]
fn operations_need_a_free_basis() {
    let p = Policy::default();
    let (a, b) = (fixtures::f3_with(Q, false), fixtures::f2(Q));
    let f = TwoCrossedMorphism::new(&a, &b, LinearMap::zero(&a.r, &b.r), LinearMap::zero(&a.e, &b.e), LinearMap::zero(&a.l, &b.l), &p).unwrap();
    let h = homotopy(&f, b.e.from_key(Key::Basis(0)));
    let h1 = homotopy(&h.target, b.e.zero());
    assert!(matches!(invert_2cm(&h, &p), Err(Error::FreeBasisRequired(_))));
    assert!(matches!(concat_2cm(&h, &h1, &p), Err(Error::FreeBasisRequired(_))));
    assert!(matches!(tcm_groupoid_check(&a, &b, 2, &p), Err(Error::FreeBasisRequired(_))));
}

#[test]
fn non_composable_pairs_are_refused() {
    let f = morphism_f3_f2(Q);
    let ea = f.target.e.from_key(Key::Basis(0));
    let h = homotopy(&f, ea.clone());
    assert!(matches!(concat_2cm(&h, &h, &Policy::default()), Err(Error::CompositionMismatch(_))));
}
