//! Pre-crossed, crossed and 2-crossed modules, their morphisms and validators.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::action::Action;
use crate::algebra::{Algebra, Element, Key};
use crate::error::{Error, Result};
use crate::linalg;
use crate::maps::{BilinearMap, LinearMap};
use crate::report::{first_failure, Check};
use crate::sampling::{cases, differ, run_law, Policy};

fn expect_map(map: &LinearMap, source: &Algebra, target: &Algebra, what: &str) -> Result<()> {
    if map.source() != source || map.target() != target {
        return Err(Error::OwnerMismatch {
            expected: format!("{what}: {} → {}", source.name(), target.name()),
            found: format!("{} → {}", map.source().name(), map.target().name()),
        });
    }
    Ok(())
}

fn expect_action(act: &Action, acting: &Algebra, acted: &Algebra, what: &str) -> Result<()> {
    if act.acting() != acting || act.acted() != acted {
        return Err(Error::ActionMismatch(format!(
            "{what} should be an action of {} on {}, found {} on {}",
            acting.name(),
            acted.name(),
            act.acting().name(),
            act.acted().name()
        )));
    }
    Ok(())
}

fn prefixed(prefix: &str, checks: Vec<Check>) -> Vec<Check> {
    checks
        .into_iter()
        .map(|mut c| {
            c.name = format!("{prefix} {}", c.name);
            c
        })
        .collect()
}

/// `∂: E → R` with an action of `R` on `E` satisfying XM1.
#[derive(Clone, Debug)]
pub struct PreCrossedModule {
    pub name: String,
    pub e: Algebra,
    pub r: Algebra,
    pub boundary: LinearMap,
    pub action: Action,
}

impl PreCrossedModule {
    pub fn new(name: &str, e: &Algebra, r: &Algebra, boundary: LinearMap, action: Action, policy: &Policy) -> Result<Self> {
        let p = PreCrossedModule::unchecked(name, e, r, boundary, action)?;
        first_failure(&p.audit(policy))?;
        Ok(p)
    }

    /// Assembles the data, checking only that the pieces fit together.
    pub fn unchecked(name: &str, e: &Algebra, r: &Algebra, boundary: LinearMap, action: Action) -> Result<Self> {
        expect_map(&boundary, e, r, "∂")?;
        expect_action(&action, r, e, "▶")?;
        Ok(PreCrossedModule { name: name.into(), e: e.clone(), r: r.clone(), boundary, action })
    }

    /// ∂ multiplicative, A1/A2 for ▶, XM1.
    pub fn audit(&self, policy: &Policy) -> Vec<Check> {
        let mut out = vec![self.boundary.check_multiplicative("∂ multiplicative", policy)];
        out.extend(prefixed("R▶E", self.action.audit(policy)));
        out.push(self.xm1(policy));
        out
    }

    fn xm1(&self, policy: &Policy) -> Check {
        let pairs = cases(&[&self.r, &self.e], policy, &format!("{}:XM1", self.name));
        run_law("XM1 ∂(r▶e) = r∂(e)", "XM1", &pairs, |t| {
            differ(&self.boundary.apply(&self.action.apply(&t[0], &t[1])), &self.r.mul(&t[0], &self.boundary.apply(&t[1])))
        })
    }

    pub fn xm2(&self, policy: &Policy) -> Check {
        let pairs = cases(&[&self.e, &self.e], policy, &format!("{}:XM2", self.name));
        run_law("XM2 ∂(e)▶e′ = ee′", "XM2", &pairs, |t| {
            differ(&self.action.apply(&self.boundary.apply(&t[0]), &t[1]), &self.e.mul(&t[0], &t[1]))
        })
    }
}

/// A pre-crossed module that also satisfies XM2.
#[derive(Clone, Debug)]
pub struct CrossedModule(pub PreCrossedModule);

impl std::ops::Deref for CrossedModule {
    type Target = PreCrossedModule;
    fn deref(&self) -> &PreCrossedModule {
        &self.0
    }
}

impl CrossedModule {
    pub fn new(name: &str, e: &Algebra, r: &Algebra, boundary: LinearMap, action: Action, policy: &Policy) -> Result<Self> {
        let p = PreCrossedModule::unchecked(name, e, r, boundary, action)?;
        let cm = CrossedModule(p);
        first_failure(&cm.audit(policy))?;
        Ok(cm)
    }

    pub fn audit(&self, policy: &Policy) -> Vec<Check> {
        let mut out = self.0.audit(policy);
        out.push(self.0.xm2(policy));
        out
    }

    /// Promotes a pre-crossed module after checking XM2.
    pub fn from_precrossed(p: PreCrossedModule, policy: &Policy) -> Result<Self> {
        first_failure(&[p.xm2(policy)])?;
        Ok(CrossedModule(p))
    }
}

/// The inclusion of the span of `ideal` (basis labels of a finite `r`) with the multiplication action.
pub fn ideal_inclusion_cm(name: &str, r: &Algebra, ideal: &[&str], policy: &Policy) -> Result<CrossedModule> {
    let keys: Vec<Key> = ideal.iter().map(|l| r.parse_key(l)).collect::<Result<_>>()?;
    if !r.is_finite() || r.components().is_some() {
        return Err(Error::Unsupported("ideal inclusions need a finite algebra given by structure constants".into()));
    }
    for a in r.basis().unwrap_or_default() {
        for k in &keys {
            let prod = r.key_product(&a, k);
            if let Some(bad) = prod.terms().keys().find(|t| !keys.contains(t)) {
                return Err(Error::NotAnIdeal(vec![
                    r.key_label(&a),
                    r.key_label(k),
                    format!("{} = {} ∉ span", prod, r.key_label(bad)),
                ]));
            }
        }
    }
    let ring = r.ring();
    let n = keys.len();
    let idx = |k: &Key| keys.iter().position(|x| x == k).expect("closed under products");
    let mut table = vec![vec![vec![ring.zero(); n]; n]; n];
    for (i, a) in keys.iter().enumerate() {
        for (j, b) in keys.iter().enumerate() {
            for (k, c) in r.key_product(a, b).terms() {
                table[i][j][idx(k)] = c.clone();
            }
        }
    }
    let labels = keys.iter().map(|k| r.key_label(k)).collect();
    let e = Algebra::finite(format!("{name}.E"), ring, labels, table)?;
    let incl = |u: &Element| r.from_terms(u.terms().iter().map(|(k, c)| (keys[key_index(k)].clone(), c.clone())));
    let boundary = LinearMap::from_images(
        &e,
        r,
        e.basis().unwrap_or_default().into_iter().map(|k| {
            let v = incl(&e.from_key(k.clone()));
            (k, v)
        }).collect(),
    )?;
    let action = Action::from_fn(r, &e, |x, u| {
        let prod = r.mul(x, &incl(u));
        e.from_terms(prod.terms().iter().map(|(k, c)| (Key::Basis(idx(k) as u32), c.clone())))
    });
    CrossedModule::new(name, &e, r, boundary, action, policy)
}

fn key_index(k: &Key) -> usize {
    match k {
        Key::Basis(i) => *i as usize,
        _ => unreachable!("finite key"),
    }
}

/// `id: R → R` with `R` acting on itself by multiplication.
pub fn identity_cm(name: &str, r: &Algebra, policy: &Policy) -> Result<CrossedModule> {
    let action = Action::from_fn(r, r, |x, y| r.mul(x, y));
    let images = r.generators().into_iter().map(|g| (g.clone(), r.from_key(g))).collect();
    let boundary = LinearMap::from_images(r, r, images)?;
    CrossedModule::new(name, r, r, boundary, action, policy)
}

/// The data of a 2-crossed module before validation.
#[derive(Clone, Debug)]
pub struct TwoCrossedParts {
    pub name: String,
    pub l: Algebra,
    pub e: Algebra,
    pub r: Algebra,
    pub d2: LinearMap,
    pub d1: LinearMap,
    pub act_e: Action,
    pub act_l: Action,
    pub lift: BilinearMap,
    /// Labels of the recorded free basis of `r`, if any.
    pub free_basis: Option<Vec<String>>,
}

/// `L → E → R` with actions of `R` and a Peiffer lifting `{e⊗e′}`.
#[derive(Clone, Debug)]
pub struct TwoCrossedModule {
    pub name: String,
    pub l: Algebra,
    pub e: Algebra,
    pub r: Algebra,
    pub d2: LinearMap,
    pub d1: LinearMap,
    pub act_e: Action,
    pub act_l: Action,
    pub lift: BilinearMap,
    /// Derived action `e ▶′ l = {e ⊗ ∂₂(l)}`.
    pub act_prime: Action,
    pub free_basis: Option<Vec<Key>>,
}

impl TwoCrossedModule {
    /// Validates every axiom; fails with the first violation.
    pub fn new(parts: TwoCrossedParts, policy: &Policy) -> Result<Arc<TwoCrossedModule>> {
        let m = TwoCrossedModule::unchecked(parts)?;
        first_failure(&m.audit(policy))?;
        Ok(Arc::new(m))
    }

    /// Assembles the data, checking only that the pieces fit together.
    pub fn unchecked(parts: TwoCrossedParts) -> Result<TwoCrossedModule> {
        let TwoCrossedParts { name, l, e, r, d2, d1, act_e, act_l, lift, free_basis } = parts;
        expect_map(&d2, &l, &e, "∂₂")?;
        expect_map(&d1, &e, &r, "∂₁")?;
        expect_action(&act_e, &r, &e, "R▶E")?;
        expect_action(&act_l, &r, &l, "R▶L")?;
        if lift.target() != &l || lift.left() != &e {
            return Err(Error::OwnerMismatch { expected: format!("{{⊗}}: E×E → {}", l.name()), found: lift.target().name().into() });
        }
        let free_basis = match free_basis {
            None => None,
            Some(labels) => {
                if !r.is_free() {
                    return Err(Error::BadShape(format!("{name}: a free basis needs a free algebra R")));
                }
                let keys: Vec<Key> = labels.iter().map(|s| r.parse_key(s)).collect::<Result<_>>()?;
                let mut sorted = keys.clone();
                sorted.sort();
                if sorted != r.generators() {
                    return Err(Error::BadShape(format!("{name}: the free basis must list the variables of R")));
                }
                Some(keys)
            }
        };
        let (lift2, d2c) = (lift.clone(), d2.clone());
        let act_prime = Action::from_fn(&e, &l, move |x, y| lift2.apply(x, &d2c.apply(y)));
        Ok(TwoCrossedModule { name, l, e, r, d2, d1, act_e, act_l, lift, act_prime, free_basis })
    }

    pub fn parts(&self) -> TwoCrossedParts {
        TwoCrossedParts {
            name: self.name.clone(),
            l: self.l.clone(),
            e: self.e.clone(),
            r: self.r.clone(),
            d2: self.d2.clone(),
            d1: self.d1.clone(),
            act_e: self.act_e.clone(),
            act_l: self.act_l.clone(),
            lift: self.lift.clone(),
            free_basis: self.free_basis.as_ref().map(|b| b.iter().map(|k| self.r.key_label(k)).collect()),
        }
    }

    pub fn ring(&self) -> crate::Ring {
        self.r.ring()
    }

    /// `{e ⊗ e′}`.
    pub fn peiffer(&self, x: &Element, y: &Element) -> Element {
        self.lift.apply(x, y)
    }

    /// `e ▶′ l`.
    pub fn act_el(&self, x: &Element, l: &Element) -> Element {
        self.act_prime.apply(x, l)
    }

    pub fn free_basis(&self) -> Result<&[Key]> {
        self.free_basis.as_deref().ok_or_else(|| Error::FreeBasisRequired(self.name.clone()))
    }

    /// Every axiom as a named check.
    pub fn audit(&self, policy: &Policy) -> Vec<Check> {
        let (l, e, r) = (&self.l, &self.e, &self.r);
        let salt = |s: &str| format!("{}:{s}", self.name);
        let mut out = vec![
            self.d2.check_multiplicative("∂₂ multiplicative", policy),
            self.d1.check_multiplicative("∂₁ multiplicative", policy),
        ];
        out.extend(prefixed("R▶E", self.act_e.audit(policy)));
        out.extend(prefixed("R▶L", self.act_l.audit(policy)));
        let ls = cases(&[l], policy, &salt("L"));
        out.push(run_law("∂₁∂₂ = 0", "d1d2=0", &ls, |t| {
            let v = self.d1.apply(&self.d2.apply(&t[0]));
            (!v.is_zero()).then(|| format!("∂₁∂₂ = {v}"))
        }));
        let re = cases(&[r, e], policy, &salt("RE"));
        out.push(run_law("∂₁(r▶e) = r∂₁(e)", "XM1", &re, |t| {
            differ(&self.d1.apply(&self.act_e.apply(&t[0], &t[1])), &r.mul(&t[0], &self.d1.apply(&t[1])))
        }));
        let rl = cases(&[r, l], policy, &salt("RL"));
        out.push(run_law("∂₂(r▶l) = r▶∂₂(l)", "equivariance", &rl, |t| {
            differ(&self.d2.apply(&self.act_l.apply(&t[0], &t[1])), &self.act_e.apply(&t[0], &self.d2.apply(&t[1])))
        }));
        let ee = cases(&[e, e], policy, &salt("EE"));
        out.push(run_law("2XM1 ∂₂{e⊗e′} = ee′ − ∂₁(e′)▶e", "2XM1", &ee, |t| {
            let rhs = &e.mul(&t[0], &t[1]) - &self.act_e.apply(&self.d1.apply(&t[1]), &t[0]);
            differ(&self.d2.apply(&self.peiffer(&t[0], &t[1])), &rhs)
        }));
        let ll = cases(&[l, l], policy, &salt("LL"));
        out.push(run_law("2XM2 {∂₂l⊗∂₂l′} = ll′", "2XM2", &ll, |t| {
            differ(&self.peiffer(&self.d2.apply(&t[0]), &self.d2.apply(&t[1])), &l.mul(&t[0], &t[1]))
        }));
        let eee = cases(&[e, e, e], policy, &salt("EEE"));
        out.push(run_law("2XM3 {e⊗e′e″} = {ee′⊗e″} + ∂₁(e″)▶{e⊗e′}", "2XM3", &eee, |t| {
            let lhs = self.peiffer(&t[0], &e.mul(&t[1], &t[2]));
            let rhs = &self.peiffer(&e.mul(&t[0], &t[1]), &t[2])
                + &self.act_l.apply(&self.d1.apply(&t[2]), &self.peiffer(&t[0], &t[1]));
            differ(&lhs, &rhs)
        }));
        let le = cases(&[l, e], policy, &salt("LE"));
        out.push(run_law("2XM4 {∂₂l⊗e} = e▶′l − ∂₁(e)▶l", "2XM4", &le, |t| {
            let rhs = &self.act_el(&t[1], &t[0]) - &self.act_l.apply(&self.d1.apply(&t[1]), &t[0]);
            differ(&self.peiffer(&self.d2.apply(&t[0]), &t[1]), &rhs)
        }));
        out.push(run_law("2XM5 {e⊗∂₂l} = e▶′l", "2XM5", &le, |t| {
            differ(&self.peiffer(&t[1], &self.d2.apply(&t[0])), &self.act_el(&t[1], &t[0]))
        }));
        let ree = cases(&[r, e, e], policy, &salt("REE"));
        out.push(run_law("2XM6 r▶{e⊗e′} = {r▶e⊗e′}", "2XM6", &ree, |t| {
            differ(&self.act_l.apply(&t[0], &self.peiffer(&t[1], &t[2])), &self.peiffer(&self.act_e.apply(&t[0], &t[1]), &t[2]))
        }));
        out.push(run_law("2XM6 r▶{e⊗e′} = {e⊗r▶e′}", "2XM6", &ree, |t| {
            differ(&self.act_l.apply(&t[0], &self.peiffer(&t[1], &t[2])), &self.peiffer(&t[1], &self.act_e.apply(&t[0], &t[2])))
        }));
        // (L → E, ▶′) is a crossed module
        out.extend(prefixed("derived E▶′L", self.act_prime.audit(policy)));
        out.push(run_law("derived XM1 ∂₂(e▶′l) = e∂₂(l)", "XM1", &le, |t| {
            differ(&self.d2.apply(&self.act_el(&t[1], &t[0])), &e.mul(&t[1], &self.d2.apply(&t[0])))
        }));
        out.push(run_law("derived XM2 ∂₂(l)▶′l′ = ll′", "XM2", &ll, |t| {
            differ(&self.act_el(&self.d2.apply(&t[0]), &t[1]), &l.mul(&t[0], &t[1]))
        }));
        out
    }

    /// Printable summary of the structure constants, maps, actions and lifting;
    /// equal signatures mean the same 2-crossed module up to algebra names.
    pub fn signature(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (tag, alg) in [("L", &self.l), ("E", &self.e), ("R", &self.r)] {
            let basis = alg.probe_elements();
            out.push(format!("{tag} basis {}", basis.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(",")));
            for a in &basis {
                for b in &basis {
                    out.push(format!("{tag}: {a}·{b} = {}", alg.mul(a, b)));
                }
            }
        }
        for x in self.l.probe_elements() {
            out.push(format!("∂₂({x}) = {}", self.d2.apply(&x)));
        }
        for x in self.e.probe_elements() {
            out.push(format!("∂₁({x}) = {}", self.d1.apply(&x)));
            for y in self.e.probe_elements() {
                out.push(format!("{{{x}⊗{y}}} = {}", self.peiffer(&x, &y)));
            }
        }
        for g in self.r.probe_elements() {
            for x in self.e.probe_elements() {
                out.push(format!("{g}▶{x} = {}", self.act_e.apply(&g, &x)));
            }
            for x in self.l.probe_elements() {
                out.push(format!("{g}▶{x} = {}", self.act_l.apply(&g, &x)));
            }
        }
        out
    }
}

/// The 2-crossed module `0 → E → R` of a crossed module, with zero lifting.
pub fn crossed_as_two_crossed(cm: &CrossedModule, free_basis: Option<Vec<String>>, policy: &Policy) -> Result<Arc<TwoCrossedModule>> {
    let l = Algebra::zero_algebra(format!("{}.L", cm.name), cm.r.ring());
    TwoCrossedModule::new(
        TwoCrossedParts {
            name: cm.name.clone(),
            l: l.clone(),
            e: cm.e.clone(),
            r: cm.r.clone(),
            d2: LinearMap::zero(&l, &cm.e),
            d1: cm.boundary.clone(),
            act_e: cm.action.clone(),
            act_l: Action::zero(&cm.r, &l),
            lift: BilinearMap::zero(&cm.e, &cm.e, &l),
            free_basis,
        },
        policy,
    )
}

/// `ker ∂ ↪ E → R` with lifting `{e⊗e′} = ee′ − ∂(e′)▶e`.
pub fn kernel_two_crossed(p: &PreCrossedModule, policy: &Policy) -> Result<Arc<TwoCrossedModule>> {
    if !p.e.is_finite() || !p.r.is_finite() {
        return Err(Error::Unsupported("kernel computation needs finite-dimensional E and R".into()));
    }
    let ring = p.e.ring();
    let ebasis = p.e.basis().unwrap_or_default();
    let n = ebasis.len();
    let images: Vec<Vec<crate::Scalar>> =
        ebasis.iter().map(|k| linalg::coords(&p.r, &p.boundary.apply(&p.e.from_key(k.clone())))).collect();
    let m = p.r.dim().unwrap_or(0);
    let rows: Vec<Vec<crate::Scalar>> = (0..m).map(|i| (0..n).map(|j| images[j][i].clone()).collect()).collect();
    let kernel = linalg::nullspace(&rows, n, ring);
    // each kernel vector has a 1 in its own free column and 0 in the others
    let free_cols: Vec<usize> =
        kernel.iter().map(|v| (0..n).find(|&j| v[j].is_one() && kernel.iter().filter(|w| !w[j].is_zero()).count() == 1).expect("free column")).collect();
    let kvec: Vec<Element> = kernel.iter().map(|v| linalg::from_coords(&p.e, v)).collect();
    let to_ker = |u: &Element| -> Vec<crate::Scalar> {
        let c = linalg::coords(&p.e, u);
        free_cols.iter().map(|&j| c[j].clone()).collect()
    };
    let labels: Vec<String> = kvec
        .iter()
        .enumerate()
        .map(|(i, v)| match v.terms().iter().next() {
            Some((k, c)) if v.terms().len() == 1 && c.is_one() => format!("{}\u{302}", p.e.key_label(k)),
            _ => format!("k{}", i + 1),
        })
        .collect();
    let dim = kvec.len();
    let mut table = vec![vec![vec![ring.zero(); dim]; dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            table[i][j] = to_ker(&p.e.mul(&kvec[i], &kvec[j]));
        }
    }
    let l = Algebra::finite(format!("ker({})", p.name), ring, labels, table)?;
    let from_ker = |x: &[crate::Scalar]| linalg::from_coords(&l, x);
    let d2 = LinearMap::from_images(
        &l,
        &p.e,
        l.basis().unwrap_or_default().into_iter().zip(kvec.iter().cloned()).collect(),
    )?;
    let kv = kvec.clone();
    let act_l = Action::from_fn(&p.r, &l, |x, y| {
        let v: Element = y.terms().iter().fold(p.e.zero(), |acc, (k, c)| &acc + &kv[key_index(k)].scale(c));
        from_ker(&to_ker(&p.action.apply(x, &v)))
    });
    let lift = BilinearMap::from_fn(&p.e, &p.e, &l, |x, y| {
        let peiffer = &p.e.mul(x, y) - &p.action.apply(&p.boundary.apply(y), x);
        from_ker(&to_ker(&peiffer))
    });
    TwoCrossedModule::new(
        TwoCrossedParts {
            name: format!("ker {}", p.name),
            l,
            e: p.e.clone(),
            r: p.r.clone(),
            d2,
            d1: p.boundary.clone(),
            act_e: p.action.clone(),
            act_l,
            lift,
            free_basis: None,
        },
        policy,
    )
}

/// `f₀: R → R′`, `f₁: E → E′` between crossed modules.
#[derive(Clone, Debug)]
pub struct CrossedMorphism {
    pub source: Arc<CrossedModule>,
    pub target: Arc<CrossedModule>,
    pub f0: LinearMap,
    pub f1: LinearMap,
}

impl CrossedMorphism {
    pub fn new(source: &Arc<CrossedModule>, target: &Arc<CrossedModule>, f0: LinearMap, f1: LinearMap, policy: &Policy) -> Result<Self> {
        expect_map(&f0, &source.r, &target.r, "f₀")?;
        expect_map(&f1, &source.e, &target.e, "f₁")?;
        let f = CrossedMorphism { source: source.clone(), target: target.clone(), f0, f1 };
        first_failure(&f.audit(policy))?;
        Ok(f)
    }

    pub fn identity(a: &Arc<CrossedModule>) -> CrossedMorphism {
        CrossedMorphism { source: a.clone(), target: a.clone(), f0: LinearMap::identity(&a.r), f1: LinearMap::identity(&a.e) }
    }

    pub fn audit(&self, policy: &Policy) -> Vec<Check> {
        let (s, t) = (&self.source, &self.target);
        let es = cases(&[&s.e], policy, "cm-morphism:E");
        let re = cases(&[&s.r, &s.e], policy, "cm-morphism:RE");
        vec![
            self.f0.check_multiplicative("f₀ multiplicative", policy),
            self.f1.check_multiplicative("f₁ multiplicative", policy),
            run_law("f₀∂ = ∂′f₁", "square", &es, |u| {
                differ(&self.f0.apply(&s.boundary.apply(&u[0])), &t.boundary.apply(&self.f1.apply(&u[0])))
            }),
            run_law("f₁(r▶e) = f₀(r)▶f₁(e)", "equivariance", &re, |u| {
                differ(&self.f1.apply(&s.action.apply(&u[0], &u[1])), &t.action.apply(&self.f0.apply(&u[0]), &self.f1.apply(&u[1])))
            }),
        ]
    }

    /// Componentwise equality on generators.
    pub fn same_as(&self, other: &CrossedMorphism) -> Option<String> {
        if !Arc::ptr_eq(&self.source, &other.source) || !Arc::ptr_eq(&self.target, &other.target) {
            return Some("different source or target".into());
        }
        morphism_mismatch(&[("f₀", &self.f0, &other.f0), ("f₁", &self.f1, &other.f1)])
    }
}

fn morphism_mismatch(pairs: &[(&str, &LinearMap, &LinearMap)]) -> Option<String> {
    pairs.iter().find_map(|(name, a, b)| {
        let probe = a.source().probe_elements();
        a.disagreement(b, &probe).map(|(u, x, y)| format!("{name}({u}) = {x} vs {y}"))
    })
}

/// `(f₂, f₁, f₀)` between 2-crossed modules.
#[derive(Clone, Debug)]
pub struct TwoCrossedMorphism {
    pub source: Arc<TwoCrossedModule>,
    pub target: Arc<TwoCrossedModule>,
    pub f0: LinearMap,
    pub f1: LinearMap,
    pub f2: LinearMap,
}

impl TwoCrossedMorphism {
    pub fn new(
        source: &Arc<TwoCrossedModule>,
        target: &Arc<TwoCrossedModule>,
        f0: LinearMap,
        f1: LinearMap,
        f2: LinearMap,
        policy: &Policy,
    ) -> Result<Self> {
        let f = TwoCrossedMorphism::unchecked(source, target, f0, f1, f2)?;
        first_failure(&f.audit(policy))?;
        Ok(f)
    }

    pub fn unchecked(
        source: &Arc<TwoCrossedModule>,
        target: &Arc<TwoCrossedModule>,
        f0: LinearMap,
        f1: LinearMap,
        f2: LinearMap,
    ) -> Result<Self> {
        expect_map(&f0, &source.r, &target.r, "f₀")?;
        expect_map(&f1, &source.e, &target.e, "f₁")?;
        expect_map(&f2, &source.l, &target.l, "f₂")?;
        Ok(TwoCrossedMorphism { source: source.clone(), target: target.clone(), f0, f1, f2 })
    }

    pub fn identity(a: &Arc<TwoCrossedModule>) -> Self {
        TwoCrossedMorphism {
            source: a.clone(),
            target: a.clone(),
            f0: LinearMap::identity(&a.r),
            f1: LinearMap::identity(&a.e),
            f2: LinearMap::identity(&a.l),
        }
    }

    pub fn audit(&self, policy: &Policy) -> Vec<Check> {
        let (s, t) = (&self.source, &self.target);
        let es = cases(&[&s.e], policy, "morphism:E");
        let ls = cases(&[&s.l], policy, "morphism:L");
        let re = cases(&[&s.r, &s.e], policy, "morphism:RE");
        let rl = cases(&[&s.r, &s.l], policy, "morphism:RL");
        let ee = cases(&[&s.e, &s.e], policy, "morphism:EE");
        vec![
            self.f0.check_multiplicative("f₀ multiplicative", policy),
            self.f1.check_multiplicative("f₁ multiplicative", policy),
            self.f2.check_multiplicative("f₂ multiplicative", policy),
            run_law("f₀∂₁ = ∂₁′f₁", "square", &es, |u| {
                differ(&self.f0.apply(&s.d1.apply(&u[0])), &t.d1.apply(&self.f1.apply(&u[0])))
            }),
            run_law("f₁∂₂ = ∂₂′f₂", "square", &ls, |u| {
                differ(&self.f1.apply(&s.d2.apply(&u[0])), &t.d2.apply(&self.f2.apply(&u[0])))
            }),
            run_law("f₁(r▶e) = f₀(r)▶f₁(e)", "equivariance", &re, |u| {
                differ(&self.f1.apply(&s.act_e.apply(&u[0], &u[1])), &t.act_e.apply(&self.f0.apply(&u[0]), &self.f1.apply(&u[1])))
            }),
            run_law("f₂(r▶l) = f₀(r)▶f₂(l)", "equivariance", &rl, |u| {
                differ(&self.f2.apply(&s.act_l.apply(&u[0], &u[1])), &t.act_l.apply(&self.f0.apply(&u[0]), &self.f2.apply(&u[1])))
            }),
            run_law("f₂{e⊗e′} = {f₁e⊗f₁e′}", "lifting", &ee, |u| {
                differ(&self.f2.apply(&s.peiffer(&u[0], &u[1])), &t.peiffer(&self.f1.apply(&u[0]), &self.f1.apply(&u[1])))
            }),
        ]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &TwoCrossedMorphism) -> Result<TwoCrossedMorphism> {
        if !Arc::ptr_eq(&self.target, &other.source) {
            return Err(Error::CompositionMismatch(format!(
                "target {} is not source {}",
                self.target.name, other.source.name
            )));
        }
        Ok(TwoCrossedMorphism {
            source: self.source.clone(),
            target: other.target.clone(),
            f0: other.f0.after(&self.f0),
            f1: other.f1.after(&self.f1),
            f2: other.f2.after(&self.f2),
        })
    }

    /// Componentwise equality on generators; `None` when equal.
    pub fn mismatch(&self, other: &TwoCrossedMorphism) -> Option<String> {
        if !Arc::ptr_eq(&self.source, &other.source) || !Arc::ptr_eq(&self.target, &other.target) {
            return Some("different source or target".into());
        }
        morphism_mismatch(&[("f₀", &self.f0, &other.f0), ("f₁", &self.f1, &other.f1), ("f₂", &self.f2, &other.f2)])
    }
}

/// Generator-image table helper: `label ↦ element`.
pub fn images(source: &Algebra, pairs: &[(&str, Element)]) -> Result<BTreeMap<Key, Element>> {
    pairs.iter().map(|(l, v)| Ok((source.parse_key(l)?, v.clone()))).collect()
}
