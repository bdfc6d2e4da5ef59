//! The built-in suite: shipped fixtures, corrupted fixtures, towers, random structures and homotopy laws.

use std::collections::BTreeMap;
use std::sync::Arc;

use xmod2_core::cm_homotopy::{cm_groupoid_check, cm_groupoid_check_with, DerivationRule};
use xmod2_core::crossed::{identity_cm, CrossedModule, TwoCrossedModule, TwoCrossedParts};
use xmod2_core::fixtures;
use xmod2_core::random::random_two_crossed;
use xmod2_core::simplex::{build_tower, check_simplicial_identities, check_with_operators, SimplexTower};
use xmod2_core::tcm_homotopy::{
    apply_2cm_homotopy, basis_up_to, box_plus_s, check_w_change, concat_2cm, invert_2cm, pair_checks, random_quadratic_derivation,
    random_tcm_morphism, tcm_groupoid_check, tcm_groupoid_check_with, w_map, x_map, ConcatRule, TCMHomotopy, TcmSpace,
};
use xmod2_core::{Action, BilinearMap, Check, Error, Key, LinearMap, Policy, Report, Ring};

use crate::commands::audit_document;
use crate::document::{load_spec_str, SpecDocument};

/// The shipped fixture file, also used as the selftest input.
pub const FIXTURES: &str = include_str!("../fixtures/fixtures.json");

const Q: Ring = Ring::Rational;
const F5: Ring = Ring::Prime(5);

pub fn selftest(policy: &Policy) -> Report {
    let mut report = Report::new("selftest");
    match load_spec_str(FIXTURES, policy) {
        Ok(doc) => {
            report.extend_prefixed("fixtures", audit_document(&doc, policy, "").checks);
            report.extend_prefixed("worked instance", worked_instance(&doc, policy));
            report.extend_prefixed("guardrails", guardrails(&doc, policy));
        }
        Err(e) => report.push(Check::fail("fixtures load", e.kind(), vec![e.to_string()], None, None)),
    }
    report.extend_prefixed("axioms", axioms(policy));
    report.extend_prefixed("mutants", mutants());
    report.extend_prefixed("simplicial", simplicial(policy));
    report.extend_prefixed("random", random_structures(policy));
    report.extend_prefixed("cm groupoid", cm_suite(policy));
    report.extend_prefixed("tcm groupoid", tcm_suite(policy));
    report
}

fn axioms(policy: &Policy) -> Vec<Check> {
    let mut out = Vec::new();
    for ring in [Q, F5] {
        for m in [fixtures::f0(ring), fixtures::f1(ring), fixtures::f2(ring), fixtures::f4(ring)] {
            out.extend(m.audit(policy).into_iter().map(|mut c| {
                c.name = format!("{} over {ring}: {}", m.name, c.name);
                c
            }));
        }
    }
    out
}

/// Passes when `parts` is rejected at the expected axiom and witness.
fn rejected(name: &str, parts: TwoCrossedParts, axiom: &str, witness: &[&str]) -> Check {
    let expected: Vec<String> = witness.iter().map(|s| s.to_string()).collect();
    match TwoCrossedModule::new(parts, &Policy::default()) {
        Err(e) if e.axiom() == Some(axiom) && e.witness() == Some(&expected[..]) => Check::pass(name, axiom, 1, None),
        Err(e) => Check::fail(name, axiom, e.witness().map(|w| w.to_vec()).unwrap_or_default(), Some(format!("rejected with {e}")), None),
        Ok(_) => Check::fail(name, axiom, expected, Some("accepted".into()), None),
    }
}

fn mutants() -> Vec<Check> {
    let (a, b, bh, p) = (Key::Basis(0), Key::Basis(1), Key::Basis(0), Key::Basis(0));
    let mut out = Vec::new();

    let mut parts = fixtures::f2_parts(Q);
    parts.lift = BilinearMap::zero(&parts.e, &parts.e, &parts.l);
    out.push(rejected("F2 with {a⊗a} = 0", parts, "2XM1", &["a", "a"]));

    let mut parts = fixtures::f2_parts(Q);
    let v = parts.l.from_key(bh.clone());
    let table = BTreeMap::from([((a.clone(), a.clone()), v.clone()), ((a.clone(), b.clone()), v.clone())]);
    parts.lift = BilinearMap::from_table(&parts.e, &parts.e, &parts.l, table).expect("lifting table");
    out.push(rejected("F2 with {a⊗b} = b̂", parts, "2XM1", &["a", "b"]));

    let mut parts = fixtures::f2_parts(Q);
    let v = parts.l.from_key(bh.clone());
    parts.act_l = Action::from_table(&parts.r, &parts.l, BTreeMap::from([((p.clone(), bh), v)])).expect("action table");
    out.push(rejected("F2 with p▶b̂ = b̂", parts, "A2", &["p", "p", "b̂"]));

    let mut parts = fixtures::f2_parts(Q);
    let pe = parts.r.from_key(p.clone());
    parts.d1 = LinearMap::from_images(&parts.e, &parts.r, BTreeMap::from([(a.clone(), pe.clone()), (b.clone(), pe)])).expect("∂₁");
    out.push(rejected("F2 with ∂₁b = p", parts, "hom", &["a", "a"]));

    let mut parts = fixtures::f2_parts(Q);
    let be = parts.e.from_key(b);
    parts.act_e = Action::from_table(&parts.r, &parts.e, BTreeMap::from([((p, a), be)])).expect("action table");
    out.push(rejected("F2 with p▶a = b", parts, "2XM1", &["a", "a"]));

    let name = "F2 level one is not crossed";
    out.push(match CrossedModule::from_precrossed(fixtures::f2_level_one(Q), &Policy::default()) {
        Err(e) if e.axiom() == Some("XM2") && e.witness() == Some(&["a".to_string(), "a".to_string()][..]) => Check::pass(name, "XM2", 1, None),
        Err(e) => Check::fail(name, "XM2", vec![e.to_string()], None, None),
        Ok(_) => Check::fail(name, "XM2", vec!["accepted".into()], None, None),
    });
    out
}

fn tower_checks(label: &str, t: &SimplexTower, policy: &Policy) -> Vec<Check> {
    let mut out: Vec<Check> = check_simplicial_identities(t, policy).checks;
    out.extend(t.audit(policy));
    for c in &mut out {
        c.name = format!("{label}: {}", c.name);
    }
    out
}

fn simplicial(policy: &Policy) -> Vec<Check> {
    let mut out = Vec::new();
    for m in [fixtures::f0(Q), fixtures::f2(Q)] {
        match build_tower(&m, policy) {
            Ok(t) => out.extend(tower_checks(&m.name, &t, policy)),
            Err(e) => out.push(Check::from_error(format!("{} tower", m.name), &e)),
        }
    }
    // d₁ on Λ₁ without its ∂₁e term must break an identity
    if let Ok(t) = build_tower(&fixtures::f2(Q), policy) {
        let mut ops = t.operators();
        let tt = t.clone();
        ops.replace_face(1, 1, move |u| tt.unpair(u)[0].clone());
        let name = "F2: d₁ on Λ₁ without ∂₁e is detected";
        let rep = check_with_operators(&t, &ops, policy);
        out.push(match rep.failures().next() {
            Some(c) => caught(name, c),
            None => Check::fail(name, "mutant", vec!["no identity failed".into()], None, None),
        });
    }
    out
}

/// A passing mutant check that records which failure exposed the mutant.
fn caught(name: &str, by: &Check) -> Check {
    let mut c = Check::pass(name, "mutant", 1, None);
    c.detail = Some(format!("caught by {}", by.name));
    c
}

/// One check per family, failing at the first offending sample.
struct Tally {
    name: String,
    tag: String,
    cases: usize,
    failure: Option<Vec<String>>,
}

impl Tally {
    fn new(name: &str, tag: &str) -> Tally {
        Tally { name: name.into(), tag: tag.into(), cases: 0, failure: None }
    }

    fn record(&mut self, checks: &[Check], sample: usize) {
        self.cases += 1;
        if self.failure.is_none() {
            if let Some(c) = checks.iter().find(|c| !c.passed()) {
                let mut w = vec![format!("sample {sample}"), c.name.clone()];
                w.extend(c.witness.clone().unwrap_or_default());
                self.failure = Some(w);
            }
        }
    }

    fn check(self, policy: &Policy) -> Check {
        let cover = Some(policy.sampled());
        match self.failure {
            None => Check::pass(self.name, self.tag, self.cases, cover),
            Some(w) => Check::fail(self.name, self.tag, w, None, cover),
        }
    }
}

fn random_structures(policy: &Policy) -> Vec<Check> {
    let mut rng = policy.rng("selftest:random");
    let mut axioms = Tally::new("50 random 2-crossed modules over 𝔽₅ with dims ≤ 2 satisfy every axiom", "2XM");
    let mut lemmas = Tally::new("▶•, ▶∗, ▶¹, ▶², ▶† satisfy A1 and A2 on the random modules", "A1/A2");
    let mut identities = Tally::new("simplicial identities hold on the random towers", "simplicial");
    for i in 0..50 {
        let m = random_two_crossed(F5, 2, &mut rng, policy);
        axioms.record(&m.audit(policy), i);
        match SimplexTower::unchecked(&m) {
            Ok(t) => {
                lemmas.record(&t.audit(policy), i);
                identities.record(&check_simplicial_identities(&t, policy).checks, i);
            }
            Err(e) => {
                lemmas.record(&[Check::from_error("tower", &e)], i);
            }
        }
    }
    vec![axioms.check(policy), lemmas.check(policy), identities.check(policy)]
}

fn cm_suite(policy: &Policy) -> Vec<Check> {
    let f1 = fixtures::f1_crossed(F5);
    let mut out = cm_groupoid_check(&f1, &f1, 25, policy).checks;
    out.iter_mut().for_each(|c| c.name = format!("F1 → F1: {}", c.name));
    let name = "dropping s(r)s(r′) from the derivation law is detected";
    out.push(match identity_cm("F1 self", &fixtures::f1_algebra(F5), policy) {
        Ok(a) => {
            let a = Arc::new(a);
            let rep = cm_groupoid_check_with(&a, &a, 25, policy, DerivationRule::WithoutProduct);
            let found = rep.failures().find(|c| c.tag == "derivation").map(|c| caught(name, c));
            found.unwrap_or_else(|| Check::fail(name, "mutant", vec!["no derivation check failed".into()], None, None))
        }
        Err(e) => Check::from_error(name, &e),
    });
    out
}

fn tcm_suite(policy: &Policy) -> Vec<Check> {
    let mut out = Vec::new();
    let mut push = |label: &str, rep: xmod2_core::Result<Report>| match rep {
        Ok(r) => out.extend(r.checks.into_iter().map(|mut c| {
            c.name = format!("{label}: {}", c.name);
            c
        })),
        Err(e) => out.push(Check::from_error(label, &e)),
    };
    push("F3 → F2", tcm_groupoid_check(&fixtures::f3(F5), &fixtures::f2(F5), 10, policy));
    let d = fixtures::identity_domain(F5, &["x"]).expect("identity domain");
    push("D → F4", tcm_groupoid_check(&d, &fixtures::f4(F5), 5, policy));

    let name = "omitting w∘∂₁ from t⊞t′ is detected";
    out.push(match tcm_groupoid_check_with(&d, &fixtures::f4(F5), 6, policy, ConcatRule::WithoutW) {
        Ok(rep) => match rep.failures().next() {
            Some(c) => caught(name, c),
            None => Check::fail(name, "mutant", vec!["no check failed".into()], None, None),
        },
        Err(e) => Check::from_error(name, &e),
    });

    let mut rng = policy.rng("selftest:wchange");
    let mut wchange = Tally::new("w-change and ⊞ associativity on 10 random triples D → F4 up to degree 4", "wchange");
    if let Ok(sp) = TcmSpace::new(&d, &fixtures::f4(F5)) {
        for i in 0..10 {
            let f = random_tcm_morphism(&sp.source, &sp.target, &mut rng, policy);
            let triple = (|| -> xmod2_core::Result<[TCMHomotopy; 3]> {
                let h = apply_2cm_homotopy(&random_quadratic_derivation(&sp, &f, &mut rng, policy), policy)?;
                let h1 = apply_2cm_homotopy(&random_quadratic_derivation(&sp, &h.target, &mut rng, policy), policy)?;
                let h2 = apply_2cm_homotopy(&random_quadratic_derivation(&sp, &h1.target, &mut rng, policy), policy)?;
                Ok([h, h1, h2])
            })();
            let checks = match triple.and_then(|[h, h1, h2]| check_w_change(&h, &h1, &h2, &basis_up_to(&d.r, 4), policy)) {
                Ok(rep) => rep.checks,
                Err(e) => vec![Check::from_error("triple", &e)],
            };
            wchange.record(&checks, i);
        }
    }
    out.push(wchange.check(policy));
    out
}

/// Compares a computed value with its expected printed form.
fn expect(name: &str, tag: &str, actual: xmod2_core::Result<String>, expected: &str) -> Check {
    match actual {
        Ok(v) if v == expected => Check::pass(name, tag, 1, None),
        Ok(v) => Check::fail(name, tag, vec![v.clone()], Some(format!("got {v}, expected {expected}")), None),
        Err(e) => Check::from_error(name, &e),
    }
}

/// The F3 → F2 homotopies `h1`, `h2`, `h3` of the fixture file, all with `s(x) = a`.
fn worked_instance(doc: &SpecDocument, policy: &Policy) -> Vec<Check> {
    let get = |n: &str| doc.quadratic_derivations.get(n).cloned();
    let (Some(h), Some(h1), Some(h2)) = (get("h1"), get("h2"), get("h3")) else {
        return vec![Check::fail("fixture homotopies h1, h2, h3", "fixture", vec!["missing".into()], None, None)];
    };
    let r = &h.space().source.r;
    let x = |n: usize| r.from_key(Key::Mono(vec![0; n]));
    let at = |m: xmod2_core::Result<LinearMap>, n: usize| m.map(|m| m.apply(&x(n)).to_string());
    let mut out = vec![
        expect("s(x²) = b", "extension", Ok(h.s().apply(&x(2)).to_string()), "b"),
        expect("g₀(x) = 2p", "homotopy", Ok(h.target.f0.apply(&x(1)).to_string()), "2p"),
        expect("X(x²) = (0, b, 3b, -2b̂)", "X", at(x_map(&h, &h1), 2), "(0, b, 3b, -2b̂)"),
        expect("w(x²) = -2b̂", "w", at(w_map(&h, &h1), 2), "-2b̂"),
        expect("(s⊞s′)(x²) = 4b", "concat", at(box_plus_s(&h, &h1), 2), "4b"),
    ];
    match pair_checks(&h, &h1, policy) {
        Ok(checks) => out.extend(checks.into_iter().map(|mut c| {
            c.name = format!("h1, h2: {}", c.name);
            c
        })),
        Err(e) => out.push(Check::from_error("pair checks", &e)),
    }
    match invert_2cm(&h, policy) {
        Ok(inv) => {
            out.push(expect("s̄(x) = -a", "inverse", Ok(inv.s().apply(&x(1)).to_string()), "-a"));
            out.push(expect("s̄(x²) = b", "inverse", Ok(inv.s().apply(&x(2)).to_string()), "b"));
            out.push(expect("w^(s,s̄)(x²) = 2b̂", "inverse", at(w_map(&h, &inv), 2), "2b̂"));
            for n in 1..=3 {
                out.push(expect(&format!("(s⊞s̄)(x{}) = 0", ["", "", "²", "³"][n]), "inverse", at(box_plus_s(&h, &inv), n), "0"));
            }
        }
        Err(e) => out.push(Check::from_error("inverse", &e)),
    }
    match check_w_change(&h, &h1, &h2, &[x(2)], policy) {
        Ok(rep) => {
            for v in &rep.values {
                out.push(expect(&format!("{}(x²) = -6b̂", v.name), "wchange", Ok(v.value.clone()), "-6b̂"));
            }
            out.extend(rep.checks);
        }
        Err(e) => out.push(Check::from_error("w-change", &e)),
    }
    out.push(expect("(s⊞s′)(x) along h1, h2 concatenated = 2a", "concat", concat_2cm(&h, &h1, policy).map(|c| c.s().apply(&x(1)).to_string()), "2a"));
    out
}

/// Operations that need a free basis refuse a domain without one.
fn guardrails(doc: &SpecDocument, policy: &Policy) -> Vec<Check> {
    let refused = |name: &str, r: xmod2_core::Result<()>| match r {
        Err(Error::FreeBasisRequired(_)) => Check::pass(name, "FreeBasisRequired", 1, None),
        Err(e) => Check::fail(name, "FreeBasisRequired", vec![e.to_string()], None, None),
        Ok(()) => Check::fail(name, "FreeBasisRequired", vec!["accepted".into()], None, None),
    };
    let mut out = Vec::new();
    match doc.quadratic_derivations.get("hnb") {
        Some(h) => {
            out.push(refused("invert without a free basis", invert_2cm(h, policy).map(|_| ())));
            if let Some(h1) = doc.quadratic_derivations.get("hnb2") {
                out.push(refused("⊞ without a free basis", concat_2cm(h, h1, policy).map(|_| ())));
            }
        }
        None => out.push(Check::fail("fixture homotopy hnb", "fixture", vec!["missing".into()], None, None)),
    }
    match (doc.two_crossed_modules.get("F3-nobasis"), doc.two_crossed_modules.get("F2")) {
        (Some(a), Some(b)) => out.push(refused("groupoid suite without a free basis", tcm_groupoid_check(a, b, 1, policy).map(|_| ()))),
        _ => out.push(Check::fail("fixture modules F3-nobasis, F2", "fixture", vec!["missing".into()], None, None)),
    }
    out
}
