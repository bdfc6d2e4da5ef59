//! The subcommands, each producing a [`Report`].

use std::path::Path;

use xmod2_core::cm_homotopy::{concat_cm, invert_cm, maps_differ, cm_groupoid_check, CMHomotopy};
use xmod2_core::simplex::{build_tower, check_simplicial_identities};
use xmod2_core::tcm_homotopy::{
    basis_up_to, box_plus_s, box_plus_t, check_w_change, concat_2cm, invert_2cm, pair_checks, tcm_groupoid_check, w_map, x_map, TCMHomotopy,
};
use xmod2_core::{Check, Element, Error, LinearMap, Policy, Report};

use crate::document::{load_spec, LoadError, SpecDocument};

#[derive(Debug)]
pub enum CommandError {
    Usage(String),
    Load(LoadError),
    Core(Error),
}

impl From<LoadError> for CommandError {
    fn from(e: LoadError) -> Self {
        CommandError::Load(e)
    }
}

impl From<Error> for CommandError {
    fn from(e: Error) -> Self {
        CommandError::Core(e)
    }
}

pub type Outcome<T> = std::result::Result<T, CommandError>;

pub fn validate(file: &Path, policy: &Policy) -> Outcome<Report> {
    let doc = load_spec(file, policy)?;
    Ok(audit_document(&doc, policy, "validate"))
}

/// Every validator on every structure of a loaded document.
pub fn audit_document(doc: &SpecDocument, policy: &Policy, command: &str) -> Report {
    let mut report = Report::new(command);
    for (name, a) in &doc.algebras {
        report.extend_prefixed(&format!("algebra/{name}"), a.certify(policy));
    }
    for (name, a) in &doc.actions {
        report.extend_prefixed(&format!("action/{name}"), a.audit(policy));
    }
    for (name, m) in &doc.pre_crossed_modules {
        report.extend_prefixed(&format!("pre-crossed/{name}"), m.audit(policy));
    }
    for (name, m) in &doc.crossed_modules {
        report.extend_prefixed(&format!("crossed/{name}"), m.audit(policy));
    }
    for (name, m) in &doc.two_crossed_modules {
        report.extend_prefixed(&format!("2-crossed/{name}"), m.audit(policy));
    }
    for (name, f) in &doc.crossed_morphisms {
        report.extend_prefixed(&format!("crossed morphism/{name}"), f.audit(policy));
    }
    for (name, f) in &doc.morphisms {
        report.extend_prefixed(&format!("morphism/{name}"), f.audit(policy));
    }
    for (name, h) in &doc.derivations {
        report.extend_prefixed(&format!("derivation/{name}"), cm_homotopy_checks(h, policy));
    }
    for (name, h) in &doc.quadratic_derivations {
        report.extend_prefixed(&format!("quadratic derivation/{name}"), tcm_homotopy_checks(h, policy));
    }
    report.value("ring", doc.ring);
    report
}

fn cm_homotopy_checks(h: &CMHomotopy, policy: &Policy) -> Vec<Check> {
    let mut out = vec![h.derivation.law(Default::default(), policy)];
    out.extend(h.target.audit(policy).into_iter().map(|mut c| {
        c.name = format!("target: {}", c.name);
        c
    }));
    out
}

fn tcm_homotopy_checks(h: &TCMHomotopy, policy: &Policy) -> Vec<Check> {
    let mut out = h.qd.audit(policy);
    out.extend(h.target.audit(policy).into_iter().map(|mut c| {
        c.name = format!("target: {}", c.name);
        c
    }));
    out
}

pub fn simplicial(file: &Path, module: &str, policy: &Policy) -> Outcome<Report> {
    let doc = load_spec(file, policy)?;
    let m = doc.two_crossed_modules.get(module).ok_or_else(|| unresolved("2-crossed module", module))?;
    let tower = build_tower(m, policy)?;
    let mut report = check_simplicial_identities(&tower, policy);
    report.command = "simplicial".into();
    report.extend_prefixed("lemma", tower.audit(policy));
    for (n, d) in tower.dims().iter().enumerate() {
        report.value(format!("dim Λ{}", subscript(n)), d.map_or("infinite".to_string(), |d| d.to_string()));
    }
    Ok(report)
}

fn subscript(n: usize) -> char {
    ['₀', '₁', '₂', '₃'][n]
}

fn unresolved(kind: &'static str, name: &str) -> CommandError {
    CommandError::Load(LoadError::UnresolvedReference { kind, name: name.to_string(), referrer: "the command line".into() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum HomotopyOp {
    Apply,
    Compose,
    Invert,
    Assoc,
}

impl HomotopyOp {
    fn arity(self) -> usize {
        match self {
            HomotopyOp::Apply | HomotopyOp::Invert => 1,
            HomotopyOp::Compose => 2,
            HomotopyOp::Assoc => 3,
        }
    }

    fn name(self) -> &'static str {
        match self {
            HomotopyOp::Apply => "apply",
            HomotopyOp::Compose => "compose",
            HomotopyOp::Invert => "invert",
            HomotopyOp::Assoc => "assoc",
        }
    }
}

pub fn homotopy(op: HomotopyOp, file: &Path, names: &[String], policy: &Policy) -> Outcome<Report> {
    if names.len() != op.arity() {
        return Err(CommandError::Usage(format!("homotopy {} takes {} name(s), got {}", op.name(), op.arity(), names.len())));
    }
    let doc = load_spec(file, policy)?;
    let command = format!("homotopy {}", op.name());
    let all_tcm = names.iter().all(|n| doc.quadratic_derivations.contains_key(n));
    let all_cm = names.iter().all(|n| doc.derivations.contains_key(n));
    if let Some(missing) = names.iter().find(|n| !doc.quadratic_derivations.contains_key(*n) && !doc.derivations.contains_key(*n)) {
        return Err(unresolved("derivation", missing));
    }
    let mut report = if all_tcm {
        let hs: Vec<TCMHomotopy> = names.iter().map(|n| doc.quadratic_derivations[n].clone()).collect();
        tcm_op(op, &hs, policy)?
    } else if all_cm {
        let hs: Vec<CMHomotopy> = names.iter().map(|n| doc.derivations[n].clone()).collect();
        cm_op(op, &hs, policy)?
    } else {
        return Err(CommandError::Usage("cannot mix crossed module derivations and quadratic derivations".into()));
    };
    report.command = command;
    Ok(report)
}

/// Test points of `R` shown in reports: all basis monomials up to the degree bound.
fn points(h: &TCMHomotopy, policy: &Policy) -> (Vec<Element>, Vec<Element>) {
    let sp = h.space();
    (basis_up_to(&sp.source.r, policy.max_degree), basis_up_to(&sp.source.e, policy.max_degree))
}

fn zero_check(name: &str, tag: &str, m: &LinearMap, at: &[Element]) -> Check {
    match at.iter().find(|u| !m.apply(u).is_zero()) {
        None => Check::pass(name, tag, at.len(), None),
        Some(u) => Check::fail(name, tag, vec![u.to_string()], Some(format!("value {}", m.apply(u))), None),
    }
}

fn tcm_op(op: HomotopyOp, hs: &[TCMHomotopy], policy: &Policy) -> Outcome<Report> {
    let mut report = Report::new("");
    let h = &hs[0];
    let (rs, es) = points(h, policy);
    match op {
        HomotopyOp::Apply => {
            for r in &rs {
                report.value(format!("s({r})"), h.s().apply(r));
            }
            for e in &es {
                report.value(format!("t({e})"), h.t().apply(e));
            }
            let g = &h.target;
            for r in g.source.r.generator_elements() {
                report.value(format!("g₀({r})"), g.f0.apply(&r));
            }
            for e in basis_up_to(&g.source.e, 1) {
                report.value(format!("g₁({e})"), g.f1.apply(&e));
            }
            for l in basis_up_to(&g.source.l, 1) {
                report.value(format!("g₂({l})"), g.f2.apply(&l));
            }
            report.extend_prefixed("homotopy", tcm_homotopy_checks(h, policy));
        }
        HomotopyOp::Compose => {
            let h1 = &hs[1];
            let c = concat_2cm(h, h1, policy)?;
            let (x, w, ss, tt) = (x_map(h, h1)?, w_map(h, h1)?, box_plus_s(h, h1)?, box_plus_t(h, h1)?);
            for r in &rs {
                report.value(format!("(s⊞s′)({r})"), ss.apply(r));
            }
            for r in &rs {
                report.value(format!("X({r})"), x.apply(r));
            }
            for r in &rs {
                report.value(format!("w({r})"), w.apply(r));
            }
            for e in &es {
                report.value(format!("(t⊞t′)({e})"), tt.apply(e));
            }
            for r in c.target.source.r.generator_elements() {
                report.value(format!("g₀′({r})"), c.target.f0.apply(&r));
            }
            report.extend_prefixed("pair", pair_checks(h, h1, policy)?);
            report.extend_prefixed("concatenation", tcm_homotopy_checks(&c, policy));
            report.push(Check::pass("concatenation ends at the target of the second homotopy", "equivalence", 1, None));
        }
        HomotopyOp::Invert => {
            let inv = invert_2cm(h, policy)?;
            let w = w_map(h, &inv)?;
            for r in &rs {
                report.value(format!("s̄({r})"), inv.s().apply(r));
            }
            for e in &es {
                report.value(format!("t̄({e})"), inv.t().apply(e));
            }
            for r in &rs {
                report.value(format!("w^(s,s̄)({r})"), w.apply(r));
            }
            report.push(zero_check("s⊞s̄ = 0", "inverse", &box_plus_s(h, &inv)?, &rs));
            report.push(zero_check("s̄⊞s = 0", "inverse", &box_plus_s(&inv, h)?, &rs));
            report.push(zero_check("t⊞t̄ = 0", "inverse", &box_plus_t(h, &inv)?, &es));
            report.push(zero_check("t̄⊞t = 0", "inverse", &box_plus_t(&inv, h)?, &es));
            report.push(Check::pass("the inverse ends at the source of the homotopy", "inverse", 1, None));
            report.extend_prefixed("inverse", tcm_homotopy_checks(&inv, policy));
        }
        HomotopyOp::Assoc => {
            let (h1, h2) = (&hs[1], &hs[2]);
            let (h01, h12) = (concat_2cm(h, h1, policy)?, concat_2cm(h1, h2, policy)?);
            let (w01, w12, w01_2, w0_12) = (w_map(h, h1)?, w_map(h1, h2)?, w_map(&h01, h2)?, w_map(h, &h12)?);
            for r in &rs {
                report.value(format!("w^(s,s′)({r}) + w^(s⊞s′,s″)({r})"), &w01.apply(r) + &w01_2.apply(r));
                report.value(format!("w^(s,s′⊞s″)({r}) + w^(s′,s″)({r})"), &w0_12.apply(r) + &w12.apply(r));
            }
            let sub = check_w_change(h, h1, h2, &rs, policy)?;
            report.checks.extend(sub.checks);
        }
    }
    Ok(report)
}

fn cm_op(op: HomotopyOp, hs: &[CMHomotopy], policy: &Policy) -> Outcome<Report> {
    let mut report = Report::new("");
    let h = &hs[0];
    let rs = basis_up_to(&h.source().source.r, policy.max_degree);
    match op {
        HomotopyOp::Apply => {
            for r in &rs {
                report.value(format!("s({r})"), h.s().apply(r));
            }
            let g = &h.target;
            for r in g.source.r.generator_elements() {
                report.value(format!("g₀({r})"), g.f0.apply(&r));
            }
            for e in basis_up_to(&g.source.e, 1) {
                report.value(format!("g₁({e})"), g.f1.apply(&e));
            }
            report.extend_prefixed("homotopy", cm_homotopy_checks(h, policy));
        }
        HomotopyOp::Compose => {
            let c = concat_cm(h, &hs[1], policy)?;
            for r in &rs {
                report.value(format!("(s+s′)({r})"), c.s().apply(r));
            }
            report.extend_prefixed("concatenation", cm_homotopy_checks(&c, policy));
            report.push(Check::pass("concatenation ends at the target of the second homotopy", "equivalence", 1, None));
        }
        HomotopyOp::Invert => {
            let inv = invert_cm(h, policy)?;
            for r in &rs {
                report.value(format!("s̄({r})"), inv.s().apply(r));
            }
            let sum = concat_cm(h, &inv, policy)?;
            report.push(zero_check("s + s̄ = 0", "inverse", sum.s(), &rs));
            report.push(Check::pass("the inverse ends at the source of the homotopy", "inverse", 1, None));
            report.extend_prefixed("inverse", cm_homotopy_checks(&inv, policy));
        }
        HomotopyOp::Assoc => {
            let (h1, h2) = (&hs[1], &hs[2]);
            let left = concat_cm(&concat_cm(h, h1, policy)?, h2, policy)?;
            let right = concat_cm(h, &concat_cm(h1, h2, policy)?, policy)?;
            report.push(match maps_differ(left.s(), right.s(), policy, "cm-assoc") {
                None => Check::pass("(s+s′)+s″ = s+(s′+s″)", "associativity", 1, Some(policy.sampled())),
                Some(d) => Check::fail("(s+s′)+s″ = s+(s′+s″)", "associativity", vec![d.clone()], Some(d), Some(policy.sampled())),
            });
            for r in &rs {
                report.value(format!("((s+s′)+s″)({r})"), left.s().apply(r));
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum GroupoidKind {
    Cm,
    Tcm,
}

pub fn groupoid(kind: GroupoidKind, file: &Path, source: &str, target: &str, policy: &Policy) -> Outcome<Report> {
    let doc = load_spec(file, policy)?;
    let mut report = match kind {
        GroupoidKind::Cm => {
            let get = |n: &str| doc.crossed_modules.get(n).cloned().ok_or_else(|| unresolved("crossed module", n));
            cm_groupoid_check(&get(source)?, &get(target)?, policy.samples, policy)
        }
        GroupoidKind::Tcm => {
            let get = |n: &str| doc.two_crossed_modules.get(n).cloned().ok_or_else(|| unresolved("2-crossed module", n));
            tcm_groupoid_check(&get(source)?, &get(target)?, policy.samples, policy)?
        }
    };
    report.command = match kind {
        GroupoidKind::Cm => "groupoid cm".into(),
        GroupoidKind::Tcm => "groupoid tcm".into(),
    };
    Ok(report)
}
