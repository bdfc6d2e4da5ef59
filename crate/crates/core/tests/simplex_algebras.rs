use std::sync::Arc;

use xmod2_core::algebra::{Element, Key};
use xmod2_core::crossed::TwoCrossedModule;
use xmod2_core::fixtures;
use xmod2_core::random::random_two_crossed;
use xmod2_core::simplex::{build_tower, check_simplicial_identities, check_with_operators, SimplexTower};
use xmod2_core::{Error, Policy, Ring};

const Q: Ring = Ring::Rational;

struct F2 {
    a: Arc<TwoCrossedModule>,
    t: SimplexTower,
    p: Element,
    ea: Element,
    eb: Element,
    bh: Element,
}

fn f2() -> F2 {
    let a = fixtures::f2(Q);
    let t = build_tower(&a, &Policy::default()).unwrap();
    F2 {
        p: a.r.from_key(Key::Basis(0)),
        ea: a.e.from_key(Key::Basis(0)),
        eb: a.e.from_key(Key::Basis(1)),
        bh: a.l.from_key(Key::Basis(0)),
        a,
        t,
    }
}

#[test]
fn auxiliary_actions_on_f2() {
    let F2 { a, t, p, ea, bh, .. } = f2();
    let c = &t.carriers;
    let (r0, e0, l0) = (a.r.zero(), a.e.zero(), a.l.zero());
    let el = |e: &Element, l: &Element| c.el.join(e, l);
    let ell = |e: &Element, l: &Element, l1: &Element| c.ell.join(&el(e, l), l1);
    assert_eq!(c.bullet.apply(&t.pair(&p, &e0), &el(&ea, &l0)).to_string(), "(0, 0)");
    assert_eq!(c.bullet.apply(&t.pair(&r0, &ea), &el(&ea, &l0)).to_string(), "(b, -b̂)");
    assert!(c.bullet.apply(&t.pair(&r0, &e0), &el(&ea, &bh)).is_zero());
    assert!(c.star.apply(&el(&ea, &l0), &bh).is_zero());
    assert!(c.star.apply(&el(&e0, &bh), &bh).is_zero());
    assert_eq!(c.one.apply(&t.pair(&r0, &ea), &ell(&ea, &l0, &l0)).to_string(), "(b, -b̂, 0)");
    assert!(c.one.apply(&t.pair(&p, &e0), &ell(&ea, &bh, &bh)).is_zero());
    assert_eq!(c.two.apply(&el(&ea, &l0), &ell(&ea, &l0, &l0)).to_string(), "(b, 0, -b̂)");
    assert!(c.two.apply(&el(&e0, &bh), &ell(&ea, &l0, &l0)).is_zero());
    let y = ell(&ea, &l0, &l0);
    assert_eq!(c.dagger.apply(&t.quad(&p, &ea, &e0, &l0), &y).to_string(), "(b, -b̂, 0)");
    assert_eq!(c.dagger.apply(&t.quad(&r0, &e0, &ea, &l0), &y).to_string(), "(b, 0, -b̂)");
    assert!(c.dagger.apply(&t.quad(&r0, &e0, &e0, &l0), &ell(&ea, &bh, &bh)).is_zero());
}

#[test]
fn faces_and_degeneracies_on_f2() {
    let F2 { a, t, p, ea, eb, bh } = f2();
    let (e0, l0) = (a.e.zero(), a.l.zero());
    assert_eq!(t.dims(), vec![Some(1), Some(3), Some(6), Some(10)]);
    let u = t.sept([&p, &ea, &eb, &bh, &ea, &bh, &l0]);
    assert_eq!(t.face(3, 1, &u).unwrap(), t.quad(&p, &ea, &(&eb + &ea), &(&bh + &bh)));
    assert_eq!(t.degeneracy(1, 1, &t.pair(&p, &ea)).unwrap(), t.quad(&p, &e0, &ea, &l0));
    assert!(t.degeneracy(0, 0, &a.r.zero()).unwrap().is_zero());
    assert!(t.face(3, 0, &t.levels[3].zero()).unwrap().is_zero());
    // an element of another tower is refused
    let other = build_tower(&fixtures::f0(Q), &Policy::default()).unwrap();
    assert!(matches!(t.face(1, 0, &other.levels[1].zero()), Err(Error::OwnerMismatch { .. })));
}

#[test]
fn action_lemmas_on_fixtures_and_random_modules() {
    let policy = Policy::default();
    let mut modules = vec![fixtures::f0(Q), fixtures::f2(Q), fixtures::f0(Ring::Prime(5)), fixtures::f2(Ring::Prime(5))];
    let mut rng = policy.rng("action-lemmas");
    modules.extend((0..50).map(|_| random_two_crossed(Ring::Prime(5), 2, &mut rng, &policy)));
    for (i, m) in modules.iter().enumerate() {
        let t = SimplexTower::unchecked(m).unwrap();
        for c in t.audit(&policy) {
            assert!(c.passed(), "module {i}: {} {:?} {:?}", c.name, c.witness, c.detail);
        }
    }
}

#[test]
fn identities_on_random_towers() {
    let policy = Policy::default();
    let mut rng = policy.rng("random-towers");
    for i in 0..25 {
        let m = random_two_crossed(Ring::Prime(5), 2, &mut rng, &policy);
        let t = build_tower(&m, &policy).unwrap();
        let rep = check_simplicial_identities(&t, &policy);
        assert!(rep.passed(), "tower {i}: {:?}", rep.failures().map(|c| &c.name).collect::<Vec<_>>());
    }
}

/// The terms of each component of `dᵢ: Λₙ → Λₙ₋₁`.
fn face_terms(t: &SimplexTower, n: usize, i: usize, u: &Element) -> Vec<(Element, Vec<Element>)> {
    let a = &t.base;
    let (r0, e0, l0) = (a.r.zero(), a.e.zero(), a.l.zero());
    let d1 = |e: &Element| a.d1.apply(e);
    let d2 = |l: &Element| a.d2.apply(l);
    match n {
        1 => {
            let [r, e] = t.unpair(u);
            match i {
                0 => vec![(r0, vec![r])],
                _ => vec![(r0, vec![r, d1(&e)])],
            }
        }
        2 => {
            let [r, e, e1, l] = t.unquad(u);
            match i {
                0 => vec![(r0, vec![r]), (e0, vec![e])],
                1 => vec![(r0, vec![r]), (e0, vec![e, e1])],
                _ => vec![(r0, vec![r, d1(&e)]), (e0, vec![e1, d2(&l)])],
            }
        }
        _ => {
            let [r, e, e1, l, e2, l1, l2] = t.unsept(u);
            match i {
                0 => vec![(r0, vec![r]), (e0.clone(), vec![e]), (e0, vec![e1]), (l0, vec![l])],
                1 => vec![(r0, vec![r]), (e0.clone(), vec![e]), (e0, vec![e1, e2]), (l0, vec![l, l1])],
                2 => vec![(r0, vec![r]), (e0.clone(), vec![e, e1]), (e0, vec![e2]), (l0, vec![l1, l2])],
                _ => vec![(r0, vec![r, d1(&e)]), (e0.clone(), vec![e1, d2(&l)]), (e0, vec![e2, d2(&l1)]), (l0, vec![l2])],
            }
        }
    }
}

fn assemble(t: &SimplexTower, comps: Vec<Element>) -> Element {
    match comps.len() {
        1 => comps[0].clone(),
        2 => t.pair(&comps[0], &comps[1]),
        _ => t.quad(&comps[0], &comps[1], &comps[2], &comps[3]),
    }
}

fn face_without(t: &SimplexTower, n: usize, i: usize, drop: Option<(usize, usize)>, u: &Element) -> Element {
    let comps = face_terms(t, n, i, u)
        .into_iter()
        .enumerate()
        .map(|(c, (zero, terms))| {
            terms.into_iter().enumerate().filter(|(k, _)| drop != Some((c, *k))).fold(zero, |acc, (_, v)| &acc + &v)
        })
        .collect();
    assemble(t, comps)
}

#[test]
fn every_single_term_face_mutation_is_detected() {
    let policy = Policy::default();
    let F2 { t, .. } = f2();
    let mut mutants = 0;
    for n in 1..4 {
        for i in 0..=n {
            let probe = t.levels[n].basis_elements();
            for u in &probe {
                assert_eq!(face_without(&t, n, i, None, u), t.face(n, i, u).unwrap(), "transcription of d{i} on Λ{n}");
            }
            let shape: Vec<usize> = face_terms(&t, n, i, &t.levels[n].zero()).iter().map(|(_, v)| v.len()).collect();
            for (c, len) in shape.into_iter().enumerate() {
                for k in 0..len {
                    let mut ops = t.operators();
                    let tt = t.clone();
                    ops.replace_face(n, i, move |u| face_without(&tt, n, i, Some((c, k)), u));
                    let rep = check_with_operators(&t, &ops, &policy);
                    assert!(!rep.passed(), "dropping term {k} of component {c} in d{i} on Λ{n} went unnoticed");
                    mutants += 1;
                }
            }
        }
    }
    assert_eq!(mutants, 35);
}

#[test]
fn dropped_boundary_term_in_top_face() {
    // d₂ on Λ₂ without ∂₂l
    let policy = Policy::default();
    let F2 { t, .. } = f2();
    let mut ops = t.operators();
    let tt = t.clone();
    ops.replace_face(2, 2, move |u| face_without(&tt, 2, 2, Some((1, 1)), u));
    let rep = check_with_operators(&t, &ops, &policy);
    let failed: Vec<&str> = rep.failures().map(|c| c.name.as_str()).collect();
    assert!(failed.contains(&"d₁d₃ = d₂d₁ on Λ₃") || failed.contains(&"d₂d₃ = d₂d₂ on Λ₃"), "{failed:?}");
    let c = rep.failures().next().unwrap();
    assert!(c.witness.as_ref().is_some_and(|w| !w.is_empty()));
}
