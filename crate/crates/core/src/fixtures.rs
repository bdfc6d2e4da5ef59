//! Small named structures used throughout the tests and the command-line selftest.
//!
//! * `F0`: `⟨l₀⟩ → ⟨e₀⟩ → ⟨r₀⟩`, all products, maps, actions and liftings zero.
//! * `F1`: the ideal `⟨x²⟩` of `⟨x, x²⟩` (`x·x = x²`) with the inclusion map.
//! * `F2`: `⟨b̂⟩ → ⟨a, b⟩ → ⟨p⟩` with `a² = b`, `∂₂b̂ = b`, `∂₁a = p`, `{a⊗a} = b̂`.
//! * `F3`: `0 → 0 → κ[x]₊` with free basis `{x}`.
//! * `F4`: `⟨û, v̂⟩ → ⟨u, v⟩ → ⟨r⟩` with `u² = v`, `r² = 0`, `r▶u = 2v`, `∂₁ = 0`, `{u⊗u} = v̂`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::action::Action;
use crate::algebra::{Algebra, Key};
use crate::crossed::{
    crossed_as_two_crossed, ideal_inclusion_cm, identity_cm, kernel_two_crossed, CrossedModule, PreCrossedModule, TwoCrossedModule,
    TwoCrossedParts,
};
use crate::error::Result;
use crate::maps::{BilinearMap, LinearMap};
use crate::sampling::Policy;
use crate::scalar::Ring;

fn one_dim(name: &str, ring: Ring, label: &str) -> Algebra {
    Algebra::finite_from_products(name, ring, &[label], &[]).expect("zero product is associative")
}

pub fn f0(ring: Ring) -> Arc<TwoCrossedModule> {
    let (l, e, r) = (one_dim("F0.L", ring, "l₀"), one_dim("F0.E", ring, "e₀"), one_dim("F0.R", ring, "r₀"));
    TwoCrossedModule::new(
        TwoCrossedParts {
            name: "F0".into(),
            d2: LinearMap::zero(&l, &e),
            d1: LinearMap::zero(&e, &r),
            act_e: Action::zero(&r, &e),
            act_l: Action::zero(&r, &l),
            lift: BilinearMap::zero(&e, &e, &l),
            l,
            e,
            r,
            free_basis: None,
        },
        &Policy::default(),
    )
    .expect("F0 is a 2-crossed module")
}

/// The level-one part `⟨e₀⟩ → ⟨r₀⟩` of F0, a crossed module.
pub fn f0_crossed(ring: Ring) -> Arc<CrossedModule> {
    let (e, r) = (one_dim("F0.E", ring, "e₀"), one_dim("F0.R", ring, "r₀"));
    Arc::new(
        CrossedModule::new("F0", &e, &r, LinearMap::zero(&e, &r), Action::zero(&r, &e), &Policy::default())
            .expect("F0 is a crossed module"),
    )
}

pub fn f1_algebra(ring: Ring) -> Algebra {
    Algebra::finite_from_products("F1.R", ring, &["x", "x²"], &[("x", "x", &[("x²", 1)])]).expect("F1 carrier")
}

pub fn f1_crossed(ring: Ring) -> Arc<CrossedModule> {
    Arc::new(ideal_inclusion_cm("F1", &f1_algebra(ring), &["x²"], &Policy::default()).expect("F1 is a crossed module"))
}

/// F1 as the 2-crossed module `0 → ⟨x²⟩ → ⟨x, x²⟩`.
pub fn f1(ring: Ring) -> Arc<TwoCrossedModule> {
    crossed_as_two_crossed(&f1_crossed(ring), None, &Policy::default()).expect("F1 is a 2-crossed module")
}

pub fn f2_carriers(ring: Ring) -> (Algebra, Algebra, Algebra) {
    let l = one_dim("F2.L", ring, "b\u{302}");
    let e = Algebra::finite_from_products("F2.E", ring, &["a", "b"], &[("a", "a", &[("b", 1)])]).expect("F2.E");
    let r = one_dim("F2.R", ring, "p");
    (l, e, r)
}

/// `⟨a, b⟩ → ⟨p⟩`, `∂a = p`, zero action: pre-crossed but not crossed.
pub fn f2_level_one(ring: Ring) -> PreCrossedModule {
    let (_, e, r) = f2_carriers(ring);
    let d1 = LinearMap::from_images(&e, &r, BTreeMap::from([(Key::Basis(0), r.from_key(Key::Basis(0)))])).unwrap();
    PreCrossedModule::new("F2", &e, &r, d1, Action::zero(&r, &e), &Policy::default()).expect("F2 level one")
}

pub fn f2_parts(ring: Ring) -> TwoCrossedParts {
    let (l, e, r) = f2_carriers(ring);
    let (a, b, bh) = (Key::Basis(0), Key::Basis(1), Key::Basis(0));
    let d2 = LinearMap::from_images(&l, &e, BTreeMap::from([(bh.clone(), e.from_key(b))])).unwrap();
    let d1 = LinearMap::from_images(&e, &r, BTreeMap::from([(a.clone(), r.from_key(Key::Basis(0)))])).unwrap();
    let lift = BilinearMap::from_table(&e, &e, &l, BTreeMap::from([((a.clone(), a), l.from_key(bh))])).unwrap();
    TwoCrossedParts {
        name: "F2".into(),
        act_e: Action::zero(&r, &e),
        act_l: Action::zero(&r, &l),
        l,
        e,
        r,
        d2,
        d1,
        lift,
        free_basis: None,
    }
}

pub fn f2(ring: Ring) -> Arc<TwoCrossedModule> {
    TwoCrossedModule::new(f2_parts(ring), &Policy::default()).expect("F2 is a 2-crossed module")
}

/// `0 → 0 → κ[x]₊`, optionally with the free basis `{x}` recorded.
pub fn f3_with(ring: Ring, with_basis: bool) -> Arc<TwoCrossedModule> {
    let r = Algebra::free("F3.R", ring, vec!["x".into()]).expect("F3.R");
    let e = Algebra::zero_algebra("F3.E", ring);
    let l = Algebra::zero_algebra("F3.L", ring);
    TwoCrossedModule::new(
        TwoCrossedParts {
            name: if with_basis { "F3".into() } else { "F3 (no basis)".into() },
            d2: LinearMap::zero(&l, &e),
            d1: LinearMap::zero(&e, &r),
            act_e: Action::zero(&r, &e),
            act_l: Action::zero(&r, &l),
            lift: BilinearMap::zero(&e, &e, &l),
            l,
            e,
            r,
            free_basis: with_basis.then(|| vec!["x".to_string()]),
        },
        &Policy::default(),
    )
    .expect("F3 is a 2-crossed module")
}

pub fn f3(ring: Ring) -> Arc<TwoCrossedModule> {
    f3_with(ring, true)
}

/// The kernel 2-crossed module of `⟨u, v⟩ → ⟨r⟩` with zero boundary and `r▶u = 2v`.
///
/// Homotopies from [`identity_domain`] into F4 can have `w∘∂₁ ≠ 0`, unlike F2.
pub fn f4(ring: Ring) -> Arc<TwoCrossedModule> {
    let e = Algebra::finite_from_products("F4.E", ring, &["u", "v"], &[("u", "u", &[("v", 1)])]).expect("F4.E");
    let r = Algebra::finite_from_products("F4.R", ring, &["r"], &[]).expect("F4.R");
    let act = Action::from_table(&r, &e, BTreeMap::from([((Key::Basis(0), Key::Basis(0)), e.from_key(Key::Basis(1)).scale_int(2))]))
        .expect("F4 action");
    let p = PreCrossedModule::new("F4", &e, &r, LinearMap::zero(&e, &r), act, &Policy::default()).expect("F4 level one");
    let mut parts = kernel_two_crossed(&p, &Policy::default()).expect("F4 is a 2-crossed module").parts();
    parts.name = "F4".into();
    TwoCrossedModule::new(parts, &Policy::default()).expect("F4 is a 2-crossed module")
}

/// `0 → R → R` with `∂₁ = id`, `R = κ[vars]₊` acting by multiplication, free basis `vars`.
///
/// This is the simplest domain free up to order one with `E ≠ 0` and `∂₁ ≠ 0`.
pub fn identity_domain(ring: Ring, vars: &[&str]) -> Result<Arc<TwoCrossedModule>> {
    let r = Algebra::free("D.R", ring, vars.iter().map(|v| v.to_string()).collect())?;
    let cm = identity_cm("D", &r, &Policy::default())?;
    crossed_as_two_crossed(&cm, Some(vars.iter().map(|v| v.to_string()).collect()), &Policy::default())
}
