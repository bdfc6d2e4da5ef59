//! Derivations and homotopies of crossed module maps, and the groupoid they form.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;

use crate::action::Action;
use crate::algebra::{Algebra, Element, Key};
use crate::crossed::{CrossedModule, CrossedMorphism};
use crate::error::{Error, Result};
use crate::linalg::presentation;
use crate::maps::LinearMap;
use crate::report::{first_failure, Check, Report};
use crate::sampling::{cases, run_law, Policy};

/// Which right-hand side the derivation law uses. `WithoutProduct` drops `s(r)s(r′)`
/// and exists only to show that the checks notice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DerivationRule {
    #[default]
    Standard,
    WithoutProduct,
}

/// `f₀(r)▶s(r′) + f₀(r′)▶s(r) + s(r)s(r′)`.
pub fn derivation_rhs(rule: DerivationRule, f0: &LinearMap, act: &Action, s: &LinearMap, r: &Element, r1: &Element) -> Element {
    let (sr, sr1) = (s.apply(r), s.apply(r1));
    let mut out = &act.apply(&f0.apply(r), &sr1) + &act.apply(&f0.apply(r1), &sr);
    if rule == DerivationRule::Standard {
        out = &out + &s.target().mul(&sr, &sr1);
    }
    out
}

/// The derivation law for `s` over `f₀` on test pairs of the source.
pub fn derivation_law(name: &str, tag: &str, rule: DerivationRule, f0: &LinearMap, act: &Action, s: &LinearMap, policy: &Policy) -> Check {
    let r = s.source();
    let pairs = cases(&[r, r], policy, &format!("{name}:law"));
    run_law(name, tag, &pairs, |t| {
        let lhs = s.apply(&r.mul(&t[0], &t[1]));
        let rhs = derivation_rhs(rule, f0, act, s, &t[0], &t[1]);
        (lhs != rhs).then(|| format!("s(rr′) = {lhs}, law gives {rhs}"))
    })
}

/// The unique candidate `f₀`-derivation with the given generator values.
///
/// It is the second component of the algebra map `r ↦ (f₀(r), s(r))` into
/// `carrier = R′⋉E′`. On a free source this is always a derivation. On a finite
/// source the generators are those of a presentation of `R`, and the result
/// still has to pass the law, since relations in `R` may be violated.
pub fn extend_on_generators(f0: &LinearMap, carrier: &Algebra, images: &BTreeMap<Key, Element>) -> Result<LinearMap> {
    let r = f0.source();
    if !r.is_finite() {
        return LinearMap::derivation(f0, carrier, images.clone());
    }
    let (_, e1) = carrier.components().ok_or_else(|| Error::BadShape("carrier must be a semidirect product".into()))?;
    let p = presentation(r);
    if p.gens.is_empty() {
        return Ok(LinearMap::zero(r, e1));
    }
    let phi: Vec<Element> = p
        .gens
        .iter()
        .map(|g| {
            let s = images.get(g).cloned().unwrap_or_else(|| e1.zero());
            carrier.join(&f0.apply(&r.from_key(g.clone())), &s)
        })
        .collect();
    let values = p.extend(&phi, |a, b| carrier.mul(a, b));
    let basis = r.basis().expect("finite");
    let table = basis.into_iter().zip(values).map(|(k, v)| (k, carrier.split(&v).1)).collect();
    LinearMap::from_images(r, e1, table)
}

/// Generators on which a derivation out of `r` is determined.
pub fn determining_generators(r: &Algebra) -> Vec<Key> {
    if r.is_finite() {
        presentation(r).gens
    } else {
        r.generators()
    }
}

/// `R′⋉E′`.
pub fn cm_carrier(target: &CrossedModule) -> Result<Algebra> {
    Algebra::semidirect(&target.r, &target.e, &target.action)
}

/// An `f₀`-derivation `s: R → E′`.
#[derive(Clone, Debug)]
pub struct CMDerivation {
    pub base: CrossedMorphism,
    pub s: LinearMap,
}

impl CMDerivation {
    /// Certifies the derivation law for an arbitrary linear map `s`.
    pub fn new(base: &CrossedMorphism, s: LinearMap, policy: &Policy) -> Result<CMDerivation> {
        if s.source() != &base.source.r || s.target() != &base.target.e {
            return Err(Error::OwnerMismatch {
                expected: format!("{} → {}", base.source.r.name(), base.target.e.name()),
                found: format!("{} → {}", s.source().name(), s.target().name()),
            });
        }
        let d = CMDerivation { base: base.clone(), s };
        first_failure(&[d.law(DerivationRule::Standard, policy)])?;
        Ok(d)
    }

    pub fn zero(base: &CrossedMorphism) -> CMDerivation {
        CMDerivation { base: base.clone(), s: LinearMap::zero(&base.source.r, &base.target.e) }
    }

    pub fn law(&self, rule: DerivationRule, policy: &Policy) -> Check {
        derivation_law("derivation law", "derivation", rule, &self.base.f0, &self.base.target.action, &self.s, policy)
    }
}

/// Builds `s` from images (basis images for finite `R`, generator images for free `R`).
pub fn make_cm_derivation(f: &CrossedMorphism, images: BTreeMap<Key, Element>, policy: &Policy) -> Result<CMDerivation> {
    let r = &f.source.r;
    let s = if r.is_finite() {
        LinearMap::from_images(r, &f.target.e, images)?
    } else {
        LinearMap::derivation(&f.f0, &cm_carrier(&f.target)?, images)?
    };
    CMDerivation::new(f, s, policy)
}

/// `f → g` with `g₀ = f₀ + ∂′s`, `g₁ = f₁ + s∂`.
#[derive(Clone, Debug)]
pub struct CMHomotopy {
    pub derivation: CMDerivation,
    pub target: CrossedMorphism,
}

impl CMHomotopy {
    pub fn source(&self) -> &CrossedMorphism {
        &self.derivation.base
    }

    pub fn s(&self) -> &LinearMap {
        &self.derivation.s
    }
}

fn tidy(m: LinearMap) -> LinearMap {
    m.materialize()
}

/// The target of `d`, certified as a crossed module morphism.
pub fn apply_cm_homotopy(d: &CMDerivation, policy: &Policy) -> Result<CMHomotopy> {
    let f = &d.base;
    let g0 = tidy(f.f0.plus(&f.target.boundary.after(&d.s)));
    let g1 = tidy(f.f1.plus(&d.s.after(&f.source.boundary)));
    let target = CrossedMorphism::new(&f.source, &f.target, g0, g1, policy)?;
    Ok(CMHomotopy { derivation: d.clone(), target })
}

/// `−s`, connecting `g` back to `f`.
pub fn invert_cm(h: &CMHomotopy, policy: &Policy) -> Result<CMHomotopy> {
    let d = CMDerivation::new(&h.target, tidy(h.s().negated()), policy)?;
    let inv = apply_cm_homotopy(&d, policy)?;
    if let Some(m) = inv.target.same_as(h.source()) {
        return Err(Error::violation("inverse", vec![m]));
    }
    Ok(inv)
}

/// `s + s′`, connecting `f` to `h`.
pub fn concat_cm(h: &CMHomotopy, h1: &CMHomotopy, policy: &Policy) -> Result<CMHomotopy> {
    if let Some(m) = h.target.same_as(h1.source()) {
        return Err(Error::CompositionMismatch(m));
    }
    let d = CMDerivation::new(h.source(), tidy(h.s().plus(h1.s())), policy)?;
    apply_cm_homotopy(&d, policy)
}

/// First test element on which two maps with the same source differ.
pub fn maps_differ(a: &LinearMap, b: &LinearMap, policy: &Policy, salt: &str) -> Option<String> {
    let probe = cases(&[a.source()], policy, salt);
    probe.tuples.iter().find_map(|t| {
        let (x, y) = (a.apply(&t[0]), b.apply(&t[0]));
        (x != y).then(|| format!("at {}: {x} vs {y}", t[0]))
    })
}

/// A random algebra map out of `source` into `target`, by generator images; `None` on rejection.
pub fn random_algebra_map<R: Rng + ?Sized>(source: &Algebra, target: &Algebra, rng: &mut R, policy: &Policy) -> Option<LinearMap> {
    if source.is_finite() {
        let p = presentation(source);
        if p.gens.is_empty() {
            return Some(LinearMap::zero(source, target));
        }
        let imgs: Vec<Element> = p.gens.iter().map(|_| target.random_element(rng, 2)).collect();
        let values = p.extend(&imgs, |a, b| target.mul(a, b));
        let table = source.basis().expect("finite").into_iter().zip(values).collect();
        let m = LinearMap::from_images(source, target, table).ok()?;
        m.check_multiplicative("f", policy).passed().then_some(m)
    } else {
        let table = source.generators().into_iter().map(|g| (g, target.random_element(rng, 2))).collect();
        LinearMap::from_images(source, target, table).ok()
    }
}

/// A random crossed module morphism, by rejection; the zero map when nothing is found.
pub fn random_cm_morphism<R: Rng + ?Sized>(
    source: &Arc<CrossedModule>,
    target: &Arc<CrossedModule>,
    rng: &mut R,
    policy: &Policy,
) -> CrossedMorphism {
    for _ in 0..200 {
        let (Some(f0), Some(f1)) = (
            random_algebra_map(&source.r, &target.r, rng, policy),
            random_algebra_map(&source.e, &target.e, rng, policy),
        ) else {
            continue;
        };
        if let Ok(f) = CrossedMorphism::new(source, target, f0, f1, policy) {
            return f;
        }
    }
    CrossedMorphism::new(
        source,
        target,
        LinearMap::zero(&source.r, &target.r),
        LinearMap::zero(&source.e, &target.e),
        policy,
    )
    .expect("the zero map is a morphism")
}

/// A random `f₀`-derivation, by generator propagation and rejection; zero when nothing is found.
pub fn random_cm_derivation<R: Rng + ?Sized>(f: &CrossedMorphism, rng: &mut R, policy: &Policy) -> CMDerivation {
    let Ok(carrier) = cm_carrier(&f.target) else { return CMDerivation::zero(f) };
    let gens = determining_generators(&f.source.r);
    for _ in 0..200 {
        let images = gens.iter().map(|g| (g.clone(), f.target.e.random_element(rng, 2))).collect();
        let Ok(s) = extend_on_generators(&f.f0, &carrier, &images) else { continue };
        if let Ok(d) = CMDerivation::new(f, s, policy) {
            return d;
        }
    }
    CMDerivation::zero(f)
}

/// Tally of one groupoid law across samples.
pub(crate) struct Tally {
    name: String,
    tag: String,
    cases: usize,
    failure: Option<(Vec<String>, String)>,
}

impl Tally {
    pub(crate) fn new(name: &str, tag: &str) -> Tally {
        Tally { name: name.into(), tag: tag.into(), cases: 0, failure: None }
    }

    pub(crate) fn record(&mut self, witness: impl FnOnce() -> Vec<String>, outcome: std::result::Result<(), String>) {
        self.cases += 1;
        if let (Err(detail), None) = (outcome, &self.failure) {
            self.failure = Some((witness(), detail));
        }
    }

    pub(crate) fn finish(self, policy: &Policy) -> Check {
        match self.failure {
            None => Check::pass(self.name, self.tag, self.cases, Some(policy.sampled())),
            Some((w, d)) => Check::fail(self.name, self.tag, w, Some(d), Some(policy.sampled())),
        }
    }
}

pub(crate) fn outcome<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

pub(crate) fn agree(d: Option<String>) -> std::result::Result<(), String> {
    match d {
        None => Ok(()),
        Some(m) => Err(m),
    }
}

/// Identity, inverse, associativity and equivalence laws on sampled morphisms and derivations.
pub fn cm_groupoid_check(source: &Arc<CrossedModule>, target: &Arc<CrossedModule>, samples: usize, policy: &Policy) -> Report {
    cm_groupoid_check_with(source, target, samples, policy, DerivationRule::Standard)
}

/// As [`cm_groupoid_check`], validating derivations with the given rule.
pub fn cm_groupoid_check_with(
    source: &Arc<CrossedModule>,
    target: &Arc<CrossedModule>,
    samples: usize,
    policy: &Policy,
    rule: DerivationRule,
) -> Report {
    let mut rng = policy.rng(&format!("cm-groupoid:{}:{}", source.name, target.name));
    let mut law = Tally::new("derivation law on sampled derivations", "derivation");
    let mut valid = Tally::new("target g is a crossed module morphism", "homotopy");
    let mut left = Tally::new("0 + s = s", "identity");
    let mut right = Tally::new("s + 0 = s", "identity");
    let mut inverse = Tally::new("s + (−s) = 0 and −s connects g to f", "inverse");
    let mut inverse2 = Tally::new("(−s) + s = 0 at g", "inverse");
    let mut assoc = Tally::new("(s + s′) + s″ = s + (s′ + s″)", "associativity");
    let mut refl = Tally::new("homotopy is reflexive", "equivalence");
    let mut trans = Tally::new("homotopy is transitive", "equivalence");
    for i in 0..samples {
        let f = if i == 0 && Arc::ptr_eq(source, target) {
            CrossedMorphism::identity(source)
        } else {
            random_cm_morphism(source, target, &mut rng, policy)
        };
        let d = random_cm_derivation(&f, &mut rng, policy);
        let wit = || vec![format!("sample {i}"), describe(&d.s)];
        let c = d.law(rule, policy);
        law.record(wit, if c.passed() { Ok(()) } else { Err(c.detail.unwrap_or_default()) });
        let Ok(h) = apply_cm_homotopy(&d, policy) else {
            valid.record(wit, Err("target is not a morphism".into()));
            continue;
        };
        valid.record(wit, Ok(()));
        let d1 = random_cm_derivation(&h.target, &mut rng, policy);
        let d2 = apply_cm_homotopy(&d1, policy).map(|h1| {
            let d2 = random_cm_derivation(&h1.target, &mut rng, policy);
            (h1, d2)
        });
        let zero_f = apply_cm_homotopy(&CMDerivation::zero(&f), policy);
        let zero_g = apply_cm_homotopy(&CMDerivation::zero(&h.target), policy);
        let salt = format!("cm-groupoid:{i}");
        refl.record(wit, outcome(zero_f.as_ref().map_err(|e| e.clone())).and_then(|z| agree(z.target.same_as(&f))));
        left.record(wit, (|| {
            let c = outcome(concat_cm(zero_f.as_ref().map_err(|e| e.to_string())?, &h, policy))?;
            agree(maps_differ(c.s(), h.s(), policy, &salt))
        })());
        right.record(wit, (|| {
            let c = outcome(concat_cm(&h, zero_g.as_ref().map_err(|e| e.to_string())?, policy))?;
            agree(maps_differ(c.s(), h.s(), policy, &salt))
        })());
        let inv = invert_cm(&h, policy);
        inverse.record(wit, (|| {
            let inv = inv.as_ref().map_err(|e| e.to_string())?;
            let c = outcome(concat_cm(&h, inv, policy))?;
            agree(maps_differ(c.s(), &LinearMap::zero(&source.r, &target.e), policy, &salt))?;
            agree(c.target.same_as(&f))
        })());
        inverse2.record(wit, (|| {
            let inv = inv.as_ref().map_err(|e| e.to_string())?;
            let c = outcome(concat_cm(inv, &h, policy))?;
            agree(maps_differ(c.s(), &LinearMap::zero(&source.r, &target.e), policy, &salt))?;
            agree(c.target.same_as(&h.target))
        })());
        match &d2 {
            Ok((h1, d2)) => {
                trans.record(wit, (|| {
                    let c = outcome(concat_cm(&h, h1, policy))?;
                    agree(c.target.same_as(&h1.target))
                })());
                assoc.record(wit, (|| {
                    let h2 = outcome(apply_cm_homotopy(d2, policy))?;
                    let lhs = outcome(concat_cm(&outcome(concat_cm(&h, h1, policy))?, &h2, policy))?;
                    let rhs = outcome(concat_cm(&h, &outcome(concat_cm(h1, &h2, policy))?, policy))?;
                    agree(maps_differ(lhs.s(), rhs.s(), policy, &salt))?;
                    agree(lhs.target.same_as(&rhs.target))
                })());
            }
            Err(e) => valid.record(wit, Err(e.to_string())),
        }
    }
    let mut report = Report::new("groupoid cm");
    for t in [law, valid, left, right, inverse, inverse2, assoc, refl, trans] {
        report.push(t.finish(policy));
    }
    report.value("samples", samples);
    report
}

/// Generator values of a map, for witnesses.
pub fn describe(m: &LinearMap) -> String {
    let src = m.source();
    let keys = determining_generators(src);
    let parts: Vec<String> = keys
        .iter()
        .map(|k| format!("s({}) = {}", src.key_label(k), m.apply(&src.from_key(k.clone()))))
        .collect();
    parts.join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalar::Ring;

    fn f1_identity() -> (Arc<CrossedModule>, CrossedMorphism) {
        let a = fixtures::f1_crossed(Ring::Rational);
        let f = CrossedMorphism::identity(&a);
        (a, f)
    }

    fn s_data(a: &CrossedModule, x: i64, x2: i64) -> BTreeMap<Key, Element> {
        let r = &a.r;
        let sq = a.e.from_key(Key::Basis(0));
        BTreeMap::from([(r.parse_key("x").unwrap(), sq.scale_int(x)), (r.parse_key("x²").unwrap(), sq.scale_int(x2))])
    }

    #[test]
    fn f1_derivation_and_target() {
        let p = Policy::default();
        let (a, f) = f1_identity();
        let d = make_cm_derivation(&f, s_data(&a, 1, 0), &p).unwrap();
        let h = apply_cm_homotopy(&d, &p).unwrap();
        let x = a.r.from_key(Key::Basis(0));
        assert_eq!(h.target.f0.apply(&x).to_string(), "x + x²");
        assert_eq!(h.target.f0.apply(&a.r.from_key(Key::Basis(1))).to_string(), "x²");
        assert_eq!(h.target.f1.apply(&a.e.from_key(Key::Basis(0))).to_string(), "x²");
        let err = make_cm_derivation(&f, s_data(&a, 1, 1), &p).unwrap_err();
        assert_eq!(err.axiom(), Some("derivation"));
        assert_eq!(err.witness().unwrap(), &["x".to_string(), "x".to_string()]);
    }

    #[test]
    fn f1_inverse_and_concat() {
        let p = Policy::default();
        let (a, f) = f1_identity();
        let h = apply_cm_homotopy(&make_cm_derivation(&f, s_data(&a, 1, 0), &p).unwrap(), &p).unwrap();
        let inv = invert_cm(&h, &p).unwrap();
        assert_eq!(inv.s().apply(&a.r.from_key(Key::Basis(0))).to_string(), "-x²");
        let c = concat_cm(&h, &inv, &p).unwrap();
        assert!(maps_differ(c.s(), &LinearMap::zero(&a.r, &a.e), &p, "t").is_none());
        assert!(c.target.same_as(&f).is_none());
        assert!(matches!(concat_cm(&h, &h, &p), Err(Error::CompositionMismatch(_))));
    }

    #[test]
    fn f1_groupoid() {
        let a = fixtures::f1_crossed(Ring::Prime(5));
        let rep = cm_groupoid_check(&a, &a, 25, &Policy::default());
        assert!(rep.passed(), "{:?}", rep.failures().map(|c| (&c.name, &c.witness, &c.detail)).collect::<Vec<_>>());
    }
}
