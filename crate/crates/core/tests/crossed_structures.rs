use std::collections::BTreeMap;

use xmod2_core::action::Action;
use xmod2_core::algebra::{Algebra, Key};
use xmod2_core::crossed::{
    ideal_inclusion_cm, kernel_two_crossed, CrossedModule, PreCrossedModule, TwoCrossedModule, TwoCrossedMorphism,
    TwoCrossedParts,
};
use xmod2_core::fixtures;
use xmod2_core::maps::{BilinearMap, LinearMap};
use xmod2_core::random::random_precrossed;
use xmod2_core::{Error, Policy, Ring};

const Q: Ring = Ring::Rational;

fn violation(parts: TwoCrossedParts) -> (String, Vec<String>) {
    let err = TwoCrossedModule::new(parts, &Policy::default()).unwrap_err();
    (err.axiom().unwrap().to_string(), err.witness().unwrap().to_vec())
}

fn pair(a: &str, b: &str) -> Vec<String> {
    vec![a.to_string(), b.to_string()]
}

#[test]
fn fixtures_pass_every_validator() {
    let p = Policy::default();
    for m in [fixtures::f0(Q), fixtures::f1(Q), fixtures::f2(Q), fixtures::f4(Q)] {
        for c in m.audit(&p) {
            assert!(c.passed(), "{} {}: {:?}", m.name, c.name, c.witness);
            assert_eq!(c.certificate, Some(xmod2_core::sampling::Coverage::Exhaustive), "{}", c.name);
        }
    }
}

#[test]
fn zero_lifting_breaks_2xm1_at_a_a() {
    let mut parts = fixtures::f2_parts(Q);
    parts.lift = BilinearMap::zero(&parts.e, &parts.e, &parts.l);
    assert_eq!(violation(parts), ("2XM1".into(), pair("a", "a")));
}

#[test]
fn extra_lifting_entry_breaks_2xm1_at_a_b() {
    let mut parts = fixtures::f2_parts(Q);
    let bh = parts.l.from_key(Key::Basis(0));
    let table = BTreeMap::from([((Key::Basis(0), Key::Basis(0)), bh.clone()), ((Key::Basis(0), Key::Basis(1)), bh)]);
    parts.lift = BilinearMap::from_table(&parts.e, &parts.e, &parts.l, table).unwrap();
    assert_eq!(violation(parts), ("2XM1".into(), pair("a", "b")));
}

#[test]
fn nilpotent_breaking_action_on_l_fails_a2() {
    // p▶b̂ = b̂ but p² = 0
    let mut parts = fixtures::f2_parts(Q);
    let bh = parts.l.from_key(Key::Basis(0));
    parts.act_l = Action::from_table(&parts.r, &parts.l, BTreeMap::from([((Key::Basis(0), Key::Basis(0)), bh)])).unwrap();
    assert_eq!(violation(parts), ("A2".into(), vec!["p".into(), "p".into(), "b̂".into()]));
}

#[test]
fn boundary_of_b_breaks_multiplicativity() {
    let mut parts = fixtures::f2_parts(Q);
    let p = parts.r.from_key(Key::Basis(0));
    parts.d1 = LinearMap::from_images(&parts.e, &parts.r, BTreeMap::from([(Key::Basis(0), p.clone()), (Key::Basis(1), p)])).unwrap();
    assert_eq!(violation(parts), ("hom".into(), pair("a", "a")));
}

#[test]
fn action_p_on_a_breaks_2xm1() {
    // p▶a = b: A1, A2, XM1 still hold; the Peiffer element of (a,a) becomes 0
    let mut parts = fixtures::f2_parts(Q);
    let b = parts.e.from_key(Key::Basis(1));
    parts.act_e = Action::from_table(&parts.r, &parts.e, BTreeMap::from([((Key::Basis(0), Key::Basis(0)), b)])).unwrap();
    assert_eq!(violation(parts), ("2XM1".into(), pair("a", "a")));
}

#[test]
fn f2_level_one_is_pre_crossed_but_not_crossed() {
    let pre = fixtures::f2_level_one(Q);
    let err = CrossedModule::from_precrossed(pre, &Policy::default()).unwrap_err();
    assert_eq!(err.axiom(), Some("XM2"));
    assert_eq!(err.witness().unwrap(), pair("a", "a"));
}

#[test]
fn ideal_inclusions() {
    let r = fixtures::f1_algebra(Q);
    assert!(ideal_inclusion_cm("F1", &r, &["x²"], &Policy::default()).is_ok());
    assert!(matches!(ideal_inclusion_cm("bad", &r, &["x"], &Policy::default()), Err(Error::NotAnIdeal(_))));
    let zero = ideal_inclusion_cm("Z", &fixtures::f0(Q).r, &[], &Policy::default()).unwrap();
    assert_eq!(zero.e.dim(), Some(0));
}

#[test]
fn kernel_of_f2_level_one_is_f2() {
    let k = kernel_two_crossed(&fixtures::f2_level_one(Q), &Policy::default()).unwrap();
    assert_eq!(k.l.dim(), Some(1));
    assert_eq!(k.signature(), fixtures::f2(Q).signature());
}

#[test]
fn kernel_of_crossed_module_has_zero_lifting() {
    let k = kernel_two_crossed(&fixtures::f1_crossed(Q).0, &Policy::default()).unwrap();
    assert!(k.lift.is_zero());
    let e = Algebra::zero_algebra("E", Q);
    let r = fixtures::f0(Q).r.clone();
    let zero = PreCrossedModule::new("Z", &e, &r, LinearMap::zero(&e, &r), Action::zero(&r, &e), &Policy::default()).unwrap();
    let kz = kernel_two_crossed(&zero, &Policy::default()).unwrap();
    assert_eq!((kz.l.dim(), kz.e.dim()), (Some(0), Some(0)));
}

#[test]
fn kernel_construction_on_random_pre_crossed_modules() {
    let ring = Ring::Prime(5);
    let policy = Policy::default();
    let mut rng = policy.rng("kernel-random");
    for i in 0..50 {
        let p = random_precrossed(ring, 3, &mut rng, &policy);
        if let Err(e) = kernel_two_crossed(&p, &policy) {
            panic!("sample {i}: {e}");
        }
    }
}

#[test]
fn morphisms_from_f3_to_f2() {
    let p = Policy::default();
    let (a, b) = (fixtures::f3(Q), fixtures::f2(Q));
    let f0 = LinearMap::from_images(&a.r, &b.r, BTreeMap::from([(Key::Mono(vec![0]), b.r.from_key(Key::Basis(0)))])).unwrap();
    let x2 = a.r.from_key(Key::Mono(vec![0, 0]));
    assert!(f0.apply(&x2).is_zero());
    let f = TwoCrossedMorphism::new(&a, &b, f0, LinearMap::zero(&a.e, &b.e), LinearMap::zero(&a.l, &b.l), &p).unwrap();
    // E = 0, so there is no generator to send to a
    assert!(LinearMap::from_images(&a.e, &b.e, BTreeMap::from([(Key::Basis(0), b.e.from_key(Key::Basis(0)))])).is_err());
    let g = f.then(&TwoCrossedMorphism::identity(&b)).unwrap();
    assert!(g.audit(&p).iter().all(|c| c.passed()));
    assert!(g.mismatch(&f).is_none());
    let id = TwoCrossedMorphism::identity(&b).then(&TwoCrossedMorphism::identity(&b)).unwrap();
    assert!(id.audit(&p).iter().all(|c| c.passed()));
}

#[test]
fn non_equivariant_morphism_is_rejected() {
    // f₁ = id on E but f₀ = 0 breaks f₀∂₁ = ∂₁′f₁
    let p = Policy::default();
    let b = fixtures::f2(Q);
    let err = TwoCrossedMorphism::new(&b, &b, LinearMap::zero(&b.r, &b.r), LinearMap::identity(&b.e), LinearMap::identity(&b.l), &p)
        .unwrap_err();
    assert!(err.axiom().is_some(), "{err}");
}
