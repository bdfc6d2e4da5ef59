//! Quadratic derivations, homotopies of 2-crossed module maps, and their groupoid
//! for domains that are free up to order one.
//!
//! Concatenation `⊞` and inversion depend on the recorded free basis `B` of the
//! domain's `R` and refuse to run without one.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use rand::Rng;

use crate::algebra::{Algebra, Element, Key};
use crate::cm_homotopy::{derivation_law, determining_generators, extend_on_generators, random_algebra_map, DerivationRule, Tally, agree, outcome};
use crate::crossed::{TwoCrossedModule, TwoCrossedMorphism};
use crate::error::{Error, Result};
use crate::maps::LinearMap;
use crate::report::{first_failure, Check, Report};
use crate::sampling::{cases, differ, run_law, Policy};
use crate::simplex::SimplexTower;

/// The pair of 2-crossed modules `𝒜 → 𝒜′` together with the simplex algebras of `𝒜′`.
#[derive(Debug)]
pub struct TcmSpace {
    pub source: Arc<TwoCrossedModule>,
    pub target: Arc<TwoCrossedModule>,
    pub tower: SimplexTower,
}

impl TcmSpace {
    pub fn new(source: &Arc<TwoCrossedModule>, target: &Arc<TwoCrossedModule>) -> Result<Arc<TcmSpace>> {
        Ok(Arc::new(TcmSpace { source: source.clone(), target: target.clone(), tower: SimplexTower::unchecked(target)? }))
    }

    /// `Λ₁′ = R′⋉E′`.
    pub fn lambda1(&self) -> &Algebra {
        &self.tower.levels[1]
    }

    fn basis(&self) -> Result<Vec<Key>> {
        self.source.free_basis().map(|b| b.to_vec())
    }
}

/// `t(ee′)` as dictated by the quadratic derivation law, from the values at `e` and `e′`.
#[allow(clippy::too_many_arguments)]
fn eq7_rhs(a: &TwoCrossedModule, f1e: &Element, f1e1: &Element, sde: &Element, sde1: &Element, te: &Element, te1: &Element) -> Element {
    let mut out = &a.peiffer(sde, f1e1) + &a.peiffer(sde1, f1e);
    out = &out + &(&a.act_el(f1e, te1) + &a.act_el(f1e1, te));
    out = &out + &(&a.act_el(sde, te1) + &a.act_el(sde1, te));
    &out + &a.l.mul(te, te1)
}

/// `t(r▶e)` as dictated by the quadratic derivation law.
fn eq8_rhs(a: &TwoCrossedModule, f0r: &Element, sr: &Element, f1e: &Element, sde: &Element, te: &Element) -> Element {
    let mut out = &a.act_l.apply(f0r, te) + &a.act_l.apply(&a.d1.apply(sr), te);
    out = &out + &a.peiffer(sr, f1e);
    &(&out - &a.peiffer(f1e, sr)) - &a.peiffer(sde, sr)
}

/// The map `t: E → L′` on a free `E` determined by its generator values through `t(ee′)`.
struct ProductExtension {
    target: Arc<TwoCrossedModule>,
    e: Algebra,
    f1: LinearMap,
    sd1: LinearMap,
    gens: BTreeMap<Key, Element>,
    cache: Mutex<HashMap<Key, Element>>,
}

impl ProductExtension {
    fn key_value(&self, k: &Key) -> Element {
        if let Some(v) = self.cache.lock().expect("cache").get(k) {
            return v.clone();
        }
        let v = match self.e.split_first(k) {
            (g, None) => self.gens.get(&g).cloned().unwrap_or_else(|| self.target.l.zero()),
            (g, Some(rest)) => {
                let (x, y) = (self.e.from_key(g.clone()), self.e.from_key(rest.clone()));
                let (tx, ty) = (self.key_value(&g), self.key_value(&rest));
                eq7_rhs(&self.target, &self.f1.apply(&x), &self.f1.apply(&y), &self.sd1.apply(&x), &self.sd1.apply(&y), &tx, &ty)
            }
        };
        self.cache.lock().expect("cache").insert(k.clone(), v.clone());
        v
    }

    fn apply(&self, u: &Element) -> Element {
        let mut out = self.target.l.zero();
        for (k, c) in u.terms() {
            out = &out + &self.key_value(k).scale(c);
        }
        out
    }
}

/// A pair `(s, t)` over a 2-crossed module morphism `f`.
#[derive(Clone, Debug)]
pub struct QuadraticDerivation {
    pub space: Arc<TcmSpace>,
    pub base: TwoCrossedMorphism,
    pub s: LinearMap,
    pub t: LinearMap,
}

impl QuadraticDerivation {
    /// Certifies every law on the policy's test tuples.
    pub fn new(space: &Arc<TcmSpace>, base: &TwoCrossedMorphism, s: LinearMap, t: LinearMap, policy: &Policy) -> Result<Self> {
        let (a, b) = (&space.source, &space.target);
        if !Arc::ptr_eq(&base.source, a) || !Arc::ptr_eq(&base.target, b) {
            return Err(Error::OwnerMismatch { expected: format!("{} → {}", a.name, b.name), found: format!("{} → {}", base.source.name, base.target.name) });
        }
        if s.source() != &a.r || s.target() != &b.e || t.source() != &a.e || t.target() != &b.l {
            return Err(Error::BadShape("s must map R → E′ and t must map E → L′".into()));
        }
        let q = QuadraticDerivation { space: space.clone(), base: base.clone(), s, t };
        first_failure(&q.audit(policy))?;
        Ok(q)
    }

    pub fn zero(space: &Arc<TcmSpace>, base: &TwoCrossedMorphism) -> Self {
        let (a, b) = (&space.source, &space.target);
        QuadraticDerivation { space: space.clone(), base: base.clone(), s: LinearMap::zero(&a.r, &b.e), t: LinearMap::zero(&a.e, &b.l) }
    }

    /// The s-derivation, t-product and t-action laws and the two simplified consequences on `∂₂(L)`.
    pub fn audit(&self, policy: &Policy) -> Vec<Check> {
        let (a, b, f) = (&self.space.source, &self.space.target, &self.base);
        let (s, t) = (&self.s, &self.t);
        let sd = |e: &Element| s.apply(&a.d1.apply(e));
        let td = |l: &Element| t.apply(&a.d2.apply(l));
        let ee = cases(&[&a.e, &a.e], policy, "qd:t-product");
        let re = cases(&[&a.r, &a.e], policy, "qd:t-action");
        let ll = cases(&[&a.l, &a.l], policy, "qd:simplify:LL");
        let rl = cases(&[&a.r, &a.l], policy, "qd:simplify:RL");
        vec![
            derivation_law("s(rr′) = f₀(r)▶s(r′) + f₀(r′)▶s(r) + s(r)s(r′)", "s-derivation", DerivationRule::Standard, &f.f0, &b.act_e, s, policy),
            run_law("t(ee′) expansion", "t-product", &ee, |u| {
                let (e, e1) = (&u[0], &u[1]);
                let rhs = eq7_rhs(b, &f.f1.apply(e), &f.f1.apply(e1), &sd(e), &sd(e1), &t.apply(e), &t.apply(e1));
                differ(&t.apply(&a.e.mul(e, e1)), &rhs)
            }),
            run_law("t(r▶e) expansion", "t-action", &re, |u| {
                let (r, e) = (&u[0], &u[1]);
                let rhs = eq8_rhs(b, &f.f0.apply(r), &s.apply(r), &f.f1.apply(e), &sd(e), &t.apply(e));
                differ(&t.apply(&a.act_e.apply(r, e)), &rhs)
            }),
            run_law("t(∂₂l ∂₂l′) = f₂(l)t∂₂(l′) + f₂(l′)t∂₂(l) + t∂₂(l)t∂₂(l′)", "simplify", &ll, |u| {
                let (l, l1) = (&u[0], &u[1]);
                let lhs = t.apply(&a.e.mul(&a.d2.apply(l), &a.d2.apply(l1)));
                let (x, y) = (td(l), td(l1));
                let rhs = &(&b.l.mul(&f.f2.apply(l), &y) + &b.l.mul(&f.f2.apply(l1), &x)) + &b.l.mul(&x, &y);
                differ(&lhs, &rhs)
            }),
            run_law("t(r▶∂₂l) = f₀(r)▶t∂₂(l) + ∂₁′s(r)▶f₂(l) + ∂₁′s(r)▶t∂₂(l)", "simplify", &rl, |u| {
                let (r, l) = (&u[0], &u[1]);
                let lhs = t.apply(&a.act_e.apply(r, &a.d2.apply(l)));
                let ds = b.d1.apply(&s.apply(r));
                let rhs = &(&b.act_l.apply(&f.f0.apply(r), &td(l)) + &b.act_l.apply(&ds, &f.f2.apply(l))) + &b.act_l.apply(&ds, &td(l));
                differ(&lhs, &rhs)
            }),
        ]
    }
}

/// Builds `(s, t)` from value tables and certifies it.
///
/// On a free `R` the generator entries of `s_data` determine `s`; any other
/// entry is compared with the forced value. A finite `R` takes basis values.
/// `t_data` is read the same way on `E`, with `t(ee′)` propagated on a free `E`.
pub fn make_quadratic_derivation(
    f: &TwoCrossedMorphism,
    s_data: &BTreeMap<Key, Element>,
    t_data: &BTreeMap<Key, Element>,
    policy: &Policy,
) -> Result<QuadraticDerivation> {
    let space = TcmSpace::new(&f.source, &f.target)?;
    let (a, b) = (&space.source, &space.target);
    let s = if a.r.is_finite() {
        LinearMap::from_images(&a.r, &b.e, s_data.clone())?
    } else {
        let gens: Vec<Key> = a.r.generators();
        let (on_gens, declared): (BTreeMap<_, _>, BTreeMap<_, _>) = s_data.clone().into_iter().partition(|(k, _)| gens.contains(k));
        let s = LinearMap::derivation(&f.f0, space.lambda1(), on_gens)?;
        check_declared(&a.r, &s, &declared, "s-derivation")?;
        s
    };
    let t = t_map(&space, f, &s, t_data)?;
    QuadraticDerivation::new(&space, f, s, t, policy)
}

fn check_declared(src: &Algebra, m: &LinearMap, declared: &BTreeMap<Key, Element>, tag: &str) -> Result<()> {
    for (k, v) in declared {
        let forced = m.apply(&src.from_key(k.clone()));
        if &forced != v {
            return Err(Error::violation(tag, vec![src.key_label(k), format!("declared {v}"), format!("forced {forced}")]));
        }
    }
    Ok(())
}

fn t_map(space: &Arc<TcmSpace>, f: &TwoCrossedMorphism, s: &LinearMap, t_data: &BTreeMap<Key, Element>) -> Result<LinearMap> {
    let (a, b) = (&space.source, &space.target);
    if a.e.is_finite() {
        return LinearMap::from_images(&a.e, &b.l, t_data.clone());
    }
    let gens = a.e.generators();
    let (on_gens, declared): (BTreeMap<_, _>, BTreeMap<_, _>) = t_data.clone().into_iter().partition(|(k, _)| gens.contains(k));
    for v in on_gens.values() {
        b.l.check_owner(v)?;
    }
    let ext = Arc::new(ProductExtension {
        target: b.clone(),
        e: a.e.clone(),
        f1: f.f1.clone(),
        sd1: s.after(&a.d1),
        gens: on_gens,
        cache: Mutex::new(HashMap::new()),
    });
    let t = LinearMap::pointwise(&a.e, &b.l, move |u| ext.apply(u));
    check_declared(&a.e, &t, &declared, "t-product")?;
    Ok(t)
}

/// `f → g` with `g` given by the source/target formulas.
#[derive(Clone, Debug)]
pub struct TCMHomotopy {
    pub qd: QuadraticDerivation,
    pub target: TwoCrossedMorphism,
}

impl TCMHomotopy {
    pub fn source(&self) -> &TwoCrossedMorphism {
        &self.qd.base
    }

    pub fn s(&self) -> &LinearMap {
        &self.qd.s
    }

    pub fn t(&self) -> &LinearMap {
        &self.qd.t
    }

    pub fn space(&self) -> &Arc<TcmSpace> {
        &self.qd.space
    }
}

/// A compact copy of an algebra map: basis table or generator images.
fn compact(m: &LinearMap) -> LinearMap {
    if m.source().is_finite() {
        m.materialize()
    } else {
        let images = m.generator_images().into_iter().collect();
        LinearMap::from_images(m.source(), m.target(), images).expect("generator images")
    }
}

/// `g₀ = f₀ + ∂₁′s`, `g₁ = f₁ + s∂₁ + ∂₂′t`, `g₂ = f₂ + t∂₂`, certified as a morphism.
pub fn apply_2cm_homotopy(qd: &QuadraticDerivation, policy: &Policy) -> Result<TCMHomotopy> {
    let (a, b, f) = (&qd.space.source, &qd.space.target, &qd.base);
    let g0 = f.f0.plus(&b.d1.after(&qd.s));
    let g1 = f.f1.plus(&qd.s.after(&a.d1)).plus(&b.d2.after(&qd.t));
    let g2 = f.f2.plus(&qd.t.after(&a.d2));
    let g = TwoCrossedMorphism::new(a, b, g0, g1, g2, policy)?;
    let short = TwoCrossedMorphism::unchecked(a, b, compact(&g.f0), compact(&g.f1), compact(&g.f2))?;
    for (name, x, y) in [("g₀", &g.f0, &short.f0), ("g₁", &g.f1, &short.f1), ("g₂", &g.f2, &short.f2)] {
        let probe = cases(&[x.source()], policy, &format!("compact:{name}"));
        if let Some(t) = probe.tuples.iter().find(|t| x.apply(&t[0]) != y.apply(&t[0])) {
            return Err(Error::violation("hom", vec![name.to_string(), t[0].to_string()]));
        }
    }
    Ok(TCMHomotopy { qd: qd.clone(), target: short })
}

fn composable(h: &TCMHomotopy, h1: &TCMHomotopy) -> Result<()> {
    if !Arc::ptr_eq(h.space(), h1.space()) && !(Arc::ptr_eq(&h.space().source, &h1.space().source) && Arc::ptr_eq(&h.space().target, &h1.space().target)) {
        return Err(Error::CompositionMismatch("homotopies between different 2-crossed modules".into()));
    }
    match h.target.mismatch(h1.source()) {
        Some(m) => Err(Error::CompositionMismatch(m)),
        None => Ok(()),
    }
}

/// The `f₀`-derivation extending `s⋆` on the free basis.
pub fn extend_derivation(space: &TcmSpace, f0: &LinearMap, star: &BTreeMap<Key, Element>) -> Result<LinearMap> {
    let basis = space.basis()?;
    if let Some(k) = star.keys().find(|k| !basis.contains(k)) {
        return Err(Error::BadShape(format!("{} is not in the free basis", space.source.r.key_label(k))));
    }
    LinearMap::derivation(f0, space.lambda1(), star.clone())
}

fn on_basis(space: &TcmSpace, f: impl Fn(&Element) -> Element) -> Result<BTreeMap<Key, Element>> {
    Ok(space.basis()?.into_iter().map(|b| {
        let v = f(&space.source.r.from_key(b.clone()));
        (b, v)
    }).collect())
}

/// `s ⊞ s′`: the `f₀`-derivation extending `s + s′` on `B`.
pub fn box_plus_s(h: &TCMHomotopy, h1: &TCMHomotopy) -> Result<LinearMap> {
    composable(h, h1)?;
    let sp = h.space();
    let star = on_basis(sp, |b| &h.s().apply(b) + &h1.s().apply(b))?;
    extend_derivation(sp, &h.source().f0, &star)
}

/// `X^(s,s′)`: the algebra map `R → Λ₂′` extending `b ↦ (f₀(b), s(b), s′(b), 0)`.
pub fn x_map_raw(space: &TcmSpace, f0: &LinearMap, s: &LinearMap, s1: &LinearMap) -> Result<LinearMap> {
    let tw = &space.tower;
    let zero_l = space.target.l.zero();
    let table = on_basis(space, |b| tw.quad(&f0.apply(b), &s.apply(b), &s1.apply(b), &zero_l))?;
    LinearMap::from_images(&space.source.r, &tw.levels[2], table)
}

pub fn x_map(h: &TCMHomotopy, h1: &TCMHomotopy) -> Result<LinearMap> {
    composable(h, h1)?;
    x_map_raw(h.space(), &h.source().f0, h.s(), h1.s())
}

/// `w^(s,s′)`: the last component of `X^(s,s′)`, computed on demand.
pub fn w_from_x(space: &Arc<TcmSpace>, x: LinearMap) -> LinearMap {
    let sp = space.clone();
    LinearMap::pointwise(&space.source.r, &space.target.l, move |r| {
        let [_, _, _, w] = sp.tower.unquad(&x.apply(r));
        w
    })
}

pub fn w_map(h: &TCMHomotopy, h1: &TCMHomotopy) -> Result<LinearMap> {
    Ok(w_from_x(h.space(), x_map(h, h1)?))
}

/// How `t ⊞ t′` is formed. `WithoutW` omits `w∘∂₁` and exists only to show that the checks notice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ConcatRule {
    #[default]
    Standard,
    WithoutW,
}

/// `(t ⊞ t′)(e) = t(e) + t′(e) + w^(s,s′)(∂₁e)`.
pub fn box_plus_t(h: &TCMHomotopy, h1: &TCMHomotopy) -> Result<LinearMap> {
    box_plus_t_with(h, h1, ConcatRule::Standard)
}

pub fn box_plus_t_with(h: &TCMHomotopy, h1: &TCMHomotopy, rule: ConcatRule) -> Result<LinearMap> {
    let w = w_map(h, h1)?;
    let sum = h.t().plus(h1.t());
    Ok(match rule {
        ConcatRule::Standard => sum.plus(&w.after(&h.space().source.d1)),
        ConcatRule::WithoutW => sum,
    })
}

/// `(s ⊞ s′, t ⊞ t′)`, connecting the source of `h` to the target of `h1`.
pub fn concat_2cm(h: &TCMHomotopy, h1: &TCMHomotopy, policy: &Policy) -> Result<TCMHomotopy> {
    concat_2cm_with(h, h1, policy, ConcatRule::Standard)
}

pub fn concat_2cm_with(h: &TCMHomotopy, h1: &TCMHomotopy, policy: &Policy, rule: ConcatRule) -> Result<TCMHomotopy> {
    let s = box_plus_s(h, h1)?;
    let t = box_plus_t_with(h, h1, rule)?;
    let t = if t.source().is_finite() { t.materialize() } else { t };
    let qd = QuadraticDerivation::new(h.space(), h.source(), s, t, policy)?;
    let c = apply_2cm_homotopy(&qd, policy)?;
    if let Some(m) = c.target.mismatch(&h1.target) {
        return Err(Error::violation("concat target", vec![m]));
    }
    Ok(c)
}

/// `(s̄, t̄)` with `s̄` extending `−s` on `B` over `g₀` and `t̄ = −t − w^(s,s̄)∘∂₁`.
pub fn invert_2cm(h: &TCMHomotopy, policy: &Policy) -> Result<TCMHomotopy> {
    let sp = h.space();
    let g = &h.target;
    let star = on_basis(sp, |b| -&h.s().apply(b))?;
    let sbar = extend_derivation(sp, &g.f0, &star)?;
    let w = w_from_x(sp, x_map_raw(sp, &h.source().f0, h.s(), &sbar)?);
    let tbar = h.t().negated().plus(&w.after(&sp.source.d1).negated());
    let tbar = if tbar.source().is_finite() { tbar.materialize() } else { tbar };
    let qd = QuadraticDerivation::new(sp, g, sbar, tbar, policy)?;
    let inv = apply_2cm_homotopy(&qd, policy)?;
    if let Some(m) = inv.target.mismatch(h.source()) {
        return Err(Error::violation("inverse target", vec![m]));
    }
    Ok(inv)
}

/// `Z`: the algebra map `R → Λ₃′` extending `b ↦ (f₀(b), s(b), s′(b), 0, s″(b), 0, 0)`.
pub fn z_map(h: &TCMHomotopy, h1: &TCMHomotopy, h2: &TCMHomotopy) -> Result<LinearMap> {
    composable(h, h1)?;
    composable(h1, h2)?;
    let sp = h.space();
    let tw = &sp.tower;
    let l0 = sp.target.l.zero();
    let table = on_basis(sp, |b| {
        tw.sept([&h.source().f0.apply(b), &h.s().apply(b), &h1.s().apply(b), &l0, &h2.s().apply(b), &l0, &l0])
    })?;
    LinearMap::from_images(&sp.source.r, &tw.levels[3], table)
}

/// The basis of a finite algebra, or every monomial of degree at most `max_degree` of a free one.
pub fn basis_up_to(alg: &Algebra, max_degree: usize) -> Vec<Element> {
    if !alg.is_free() {
        return alg.basis_elements();
    }
    let n = alg.generators().len() as u32;
    let mut layer: Vec<Vec<u32>> = vec![Vec::new()];
    let mut out = Vec::new();
    for _ in 0..max_degree {
        layer = layer
            .iter()
            .flat_map(|m| (m.last().copied().unwrap_or(0)..n).map(move |g| [m.as_slice(), &[g]].concat()))
            .collect();
        out.extend(layer.iter().map(|m| alg.from_key(Key::Mono(m.clone()))));
    }
    out
}

/// The w-change identity at each `r`, the faces of `Z`, and the component form of `Z`:
/// `Z(r) = (f₀, s, s′ − ∂₂′w^(s,s′), w^(s,s′), s″ − ∂₂′w^(s⊞s′,s″), w^(s⊞s′,s″) − w^(s′,s″), w^(s′,s″))`.
pub fn check_w_change(h: &TCMHomotopy, h1: &TCMHomotopy, h2: &TCMHomotopy, rs: &[Element], policy: &Policy) -> Result<Report> {
    let sp = h.space();
    let tw = &sp.tower;
    let b = &sp.target;
    let h01 = concat_2cm(h, h1, policy)?;
    let h12 = concat_2cm(h1, h2, policy)?;
    let w01 = w_map(h, h1)?;
    let w12 = w_map(h1, h2)?;
    let w01_2 = w_map(&h01, h2)?;
    let w0_12 = w_map(h, &h12)?;
    let xs = [x_map(h, h1)?, x_map(h, &h12)?, x_map(&h01, h2)?, x_map(h1, h2)?];
    let z = z_map(h, h1, h2)?;
    let mut report = Report::new("homotopy assoc");
    let mut wchange = Vec::new();
    let mut faces: Vec<Vec<Option<String>>> = vec![Vec::new(); 4];
    let mut form = Vec::new();
    let mut assoc_s = Vec::new();
    let mut assoc_t = Vec::new();
    let (l, rr) = (concat_2cm(&h01, h2, policy)?, concat_2cm(h, &h12, policy)?);
    for r in rs {
        let lhs = &w01.apply(r) + &w01_2.apply(r);
        let rhs = &w0_12.apply(r) + &w12.apply(r);
        if rs.len() == 1 {
            report.value("w^(s,s′) + w^(s⊞s′,s″)", format!("{lhs}"));
            report.value("w^(s,s′⊞s″) + w^(s′,s″)", format!("{rhs}"));
        }
        wchange.push(differ(&lhs, &rhs).map(|d| (r.to_string(), d)));
        let zr = z.apply(r);
        for (i, x) in xs.iter().enumerate() {
            faces[i].push(differ(&tw.face(3, i, &zr)?, &x.apply(r)).map(|d| format!("at {r}: {d}")));
        }
        let (w_a, w_b, w_c) = (w01.apply(r), w01_2.apply(r), w12.apply(r));
        let expected = tw.sept([
            &h.source().f0.apply(r),
            &h.s().apply(r),
            &(&h1.s().apply(r) - &b.d2.apply(&w_a)),
            &w_a,
            &(&h2.s().apply(r) - &b.d2.apply(&w_b)),
            &(&w_b - &w_c),
            &w_c,
        ]);
        form.push(differ(&zr, &expected).map(|d| format!("at {r}: {d}")));
        assoc_s.push(differ(&l.s().apply(r), &rr.s().apply(r)).map(|d| format!("at {r}: {d}")));
    }
    for e in basis_up_to(&sp.source.e, policy.max_degree) {
        assoc_t.push(differ(&l.t().apply(&e), &rr.t().apply(&e)).map(|d| format!("at {e}: {d}")));
    }
    let tally = |name: &str, tag: &str, v: &[Option<String>]| match v.iter().flatten().next() {
        None => Check::pass(name, tag, v.len(), None),
        Some(d) => Check::fail(name, tag, vec![d.clone()], Some(d.clone()), None),
    };
    let wc: Vec<Option<String>> = wchange.into_iter().map(|o| o.map(|(r, d)| format!("at {r}: {d}"))).collect();
    report.push(tally("w^(s,s′) + w^(s⊞s′,s″) = w^(s,s′⊞s″) + w^(s′,s″)", "wchange", &wc));
    for (i, name) in ["d₀Z = X^(s,s′)", "d₁Z = X^(s,s′⊞s″)", "d₂Z = X^(s⊞s′,s″)", "d₃Z = X^(s′,s″)"].iter().enumerate() {
        report.push(tally(name, "Z", &faces[i]));
    }
    report.push(tally("Z component form", "Z", &form));
    report.push(tally("(s⊞s′)⊞s″ = s⊞(s′⊞s″)", "associativity", &assoc_s));
    report.push(tally("(t⊞t′)⊞t″ = t⊞(t′⊞t″)", "associativity", &assoc_t));
    Ok(report)
}

/// Checks of `X`, `w` and `⊞` for one composable pair on test elements of `R`.
pub fn pair_checks(h: &TCMHomotopy, h1: &TCMHomotopy, policy: &Policy) -> Result<Vec<Check>> {
    let sp = h.space();
    let (a, b, tw) = (&sp.source, &sp.target, &sp.tower);
    let x = x_map(h, h1)?;
    let w = w_from_x(sp, x.clone());
    let ss = box_plus_s(h, h1)?;
    let tt = box_plus_t(h, h1)?;
    let f0 = &h.source().f0;
    let (s, s1) = (h.s(), h1.s());
    let rc = cases(&[&a.r], policy, "pair:R");
    let rr = cases(&[&a.r, &a.r], policy, "pair:RR");
    let ec = cases(&[&a.e], policy, "pair:E");
    let basis: Vec<Element> = sp.basis()?.into_iter().map(|k| a.r.from_key(k)).collect();
    Ok(vec![
        found("w(b) = 0 on B", "wzero", basis.len(), basis.iter().find(|r| !w.apply(r).is_zero()).map(|r| vec![r.to_string()])),
        run_law("(s⊞s′)(r) = s(r) + s′(r) − ∂₂′w(r)", "wprop", &rc, |u| {
            differ(&ss.apply(&u[0]), &(&(&s.apply(&u[0]) + &s1.apply(&u[0])) - &b.d2.apply(&w.apply(&u[0]))))
        }),
        run_law("X(r) = (f₀(r), s(r), s′(r) − ∂₂′w(r), w(r))", "X", &rc, |u| {
            let wr = w.apply(&u[0]);
            differ(&x.apply(&u[0]), &tw.quad(&f0.apply(&u[0]), &s.apply(&u[0]), &(&s1.apply(&u[0]) - &b.d2.apply(&wr)), &wr))
        }),
        run_law("d₁X(r) = (f₀(r), (s⊞s′)(r))", "X", &rc, |u| {
            differ(&tw.face(2, 1, &x.apply(&u[0])).expect("Λ₂"), &tw.pair(&f0.apply(&u[0]), &ss.apply(&u[0])))
        }),
        run_law("w(rr′) expansion", "xsimp", &rr, |u| {
            let (r, r1) = (&u[0], &u[1]);
            let (wr, wr1) = (w.apply(r), w.apply(r1));
            let (sr, sr1, tr, tr1) = (s.apply(r), s.apply(r1), s1.apply(r), s1.apply(r1));
            let mut rhs = &b.act_l.apply(&f0.apply(r), &wr1) + &b.act_l.apply(&f0.apply(r1), &wr);
            for (e, l) in [(&tr1, &wr), (&sr1, &wr), (&tr, &wr1), (&sr, &wr1)] {
                rhs = &rhs + &b.act_el(e, l);
            }
            rhs = &(&(&rhs - &b.peiffer(&tr1, &sr)) - &b.peiffer(&tr, &sr1)) - &b.l.mul(&wr, &wr1);
            differ(&w.apply(&a.r.mul(r, r1)), &rhs)
        }),
        run_law("(t⊞t′)(e) − t(e) − t′(e) = w(∂₁e)", "t-concat", &ec, |u| {
            differ(&(&(&tt.apply(&u[0]) - &h.t().apply(&u[0])) - &h1.t().apply(&u[0])), &w.apply(&a.d1.apply(&u[0])))
        }),
    ])
}

fn found(name: &str, tag: &str, cases: usize, witness: Option<Vec<String>>) -> Check {
    match witness {
        None => Check::pass(name, tag, cases, None),
        Some(w) => Check::fail(name, tag, w, None, None),
    }
}

/// A random 2-crossed module morphism, by rejection; the zero map when nothing is found.
pub fn random_tcm_morphism<R: Rng + ?Sized>(
    source: &Arc<TwoCrossedModule>,
    target: &Arc<TwoCrossedModule>,
    rng: &mut R,
    policy: &Policy,
) -> TwoCrossedMorphism {
    for _ in 0..100 {
        let Some(f1) = random_algebra_map(&source.e, &target.e, rng, policy) else { continue };
        let Some(f2) = random_algebra_map(&source.l, &target.l, rng, policy) else { continue };
        // When ∂₁ is onto the generators the square forces f₀; otherwise sample it.
        let f0 = if source.d1.generator_images().iter().all(|(_, v)| v.is_zero()) || source.r.is_finite() {
            match random_algebra_map(&source.r, &target.r, rng, policy) {
                Some(m) => m,
                None => continue,
            }
        } else {
            forced_f0(source, target, &f1).unwrap_or_else(|| LinearMap::zero(&source.r, &target.r))
        };
        if let Ok(f) = TwoCrossedMorphism::new(source, target, f0, f1, f2, policy) {
            return f;
        }
    }
    TwoCrossedMorphism::new(
        source,
        target,
        LinearMap::zero(&source.r, &target.r),
        LinearMap::zero(&source.e, &target.e),
        LinearMap::zero(&source.l, &target.l),
        policy,
    )
    .expect("the zero map is a morphism")
}

/// `f₀ = ∂₁′f₁` on generators that are boundaries of generators of `E`.
fn forced_f0(source: &TwoCrossedModule, target: &TwoCrossedModule, f1: &LinearMap) -> Option<LinearMap> {
    let mut images = BTreeMap::new();
    for g in source.r.generators() {
        let hit = source.e.generators().into_iter().find(|k| source.d1.apply(&source.e.from_key(k.clone())) == source.r.from_key(g.clone()))?;
        images.insert(g, target.d1.apply(&f1.apply(&source.e.from_key(hit))));
    }
    LinearMap::from_images(&source.r, &target.r, images).ok()
}

/// A random quadratic derivation over `f`, by generator propagation and rejection; zero when nothing is found.
pub fn random_quadratic_derivation<R: Rng + ?Sized>(space: &Arc<TcmSpace>, f: &TwoCrossedMorphism, rng: &mut R, policy: &Policy) -> QuadraticDerivation {
    let (a, b) = (&space.source, &space.target);
    for attempt in 0..60 {
        let s_gens = determining_generators(&a.r);
        let s_images: BTreeMap<Key, Element> = s_gens.iter().map(|g| (g.clone(), b.e.random_element(rng, 2))).collect();
        let Ok(s) = extend_on_generators(&f.f0, space.lambda1(), &s_images) else { continue };
        let t_images: BTreeMap<Key, Element> = if a.e.is_finite() {
            a.e.generators().into_iter().map(|k| (k, if attempt % 2 == 0 { b.l.zero() } else { b.l.random_element(rng, 2) })).collect()
        } else {
            a.e.generators().into_iter().map(|k| (k, b.l.random_element(rng, 2))).collect()
        };
        let Ok(t) = t_map(space, f, &s, &t_images) else { continue };
        if let Ok(q) = QuadraticDerivation::new(space, f, s, t, policy) {
            return q;
        }
    }
    QuadraticDerivation::zero(space, f)
}

/// Identity, inverse, associativity and bookkeeping laws on sampled homotopies.
///
/// Fails with `FreeBasisRequired` when the domain records no free basis.
pub fn tcm_groupoid_check(
    source: &Arc<TwoCrossedModule>,
    target: &Arc<TwoCrossedModule>,
    samples: usize,
    policy: &Policy,
) -> Result<Report> {
    tcm_groupoid_check_with(source, target, samples, policy, ConcatRule::Standard)
}

pub fn tcm_groupoid_check_with(
    source: &Arc<TwoCrossedModule>,
    target: &Arc<TwoCrossedModule>,
    samples: usize,
    policy: &Policy,
    rule: ConcatRule,
) -> Result<Report> {
    source.free_basis()?;
    let space = TcmSpace::new(source, target)?;
    let mut rng = policy.rng(&format!("tcm-groupoid:{}:{}", source.name, target.name));
    let mut valid = Tally::new("target g is a 2-crossed module morphism", "homotopy");
    let mut ids = Tally::new("s⊞0 = s, 0⊞s = s, t⊞0 = t, 0⊞t = t", "identity");
    let mut inv = Tally::new("(s,t)⊞(s̄,t̄) = 0 at f and (s̄,t̄)⊞(s,t) = 0 at g", "inverse");
    let mut tbar = Tally::new("t̄ = −t − w^(s,s̄)∘∂₁ and s⊞s̄ = 0", "inverse");
    let mut trans = Tally::new("concatenation connects f to h", "equivalence");
    let mut assoc = Tally::new("⊞ associative on s and t", "associativity");
    let mut pairs = Tally::new("wprop, X form, xsimp, w on B, t⊞t′ bookkeeping", "wprop");
    let mut nontrivial = 0usize;
    let zero_s = LinearMap::zero(&source.r, &target.e);
    let zero_t = LinearMap::zero(&source.e, &target.l);
    for i in 0..samples {
        let f = random_tcm_morphism(source, target, &mut rng, policy);
        let q = random_quadratic_derivation(&space, &f, &mut rng, policy);
        let wit = || vec![format!("sample {i}")];
        let h = match apply_2cm_homotopy(&q, policy) {
            Ok(h) => h,
            Err(e) => {
                valid.record(wit, Err(e.to_string()));
                continue;
            }
        };
        valid.record(wit, Ok(()));
        let Ok(h1) = apply_2cm_homotopy(&random_quadratic_derivation(&space, &h.target, &mut rng, policy), policy) else {
            valid.record(wit, Err("second homotopy".into()));
            continue;
        };
        let Ok(h2) = apply_2cm_homotopy(&random_quadratic_derivation(&space, &h1.target, &mut rng, policy), policy) else {
            valid.record(wit, Err("third homotopy".into()));
            continue;
        };
        let salt = format!("tcm-groupoid:{i}");
        let ediff = |x: &LinearMap, y: &LinearMap| crate::cm_homotopy::maps_differ(x, y, policy, &salt);
        if w_map(&h, &h1).is_ok_and(|w| ediff(&w.after(&source.d1), &zero_t).is_some()) {
            nontrivial += 1;
        }
        ids.record(wit, (|| {
            let z_f = outcome(apply_2cm_homotopy(&QuadraticDerivation::zero(&space, &f), policy))?;
            let z_g = outcome(apply_2cm_homotopy(&QuadraticDerivation::zero(&space, &h.target), policy))?;
            let l = outcome(concat_2cm_with(&z_f, &h, policy, rule))?;
            let r = outcome(concat_2cm_with(&h, &z_g, policy, rule))?;
            for c in [&l, &r] {
                agree(ediff(c.s(), h.s()))?;
                agree(ediff(c.t(), h.t()))?;
            }
            Ok(())
        })());
        let hinv = invert_2cm(&h, policy);
        inv.record(wit, (|| {
            let hinv = hinv.as_ref().map_err(|e| e.to_string())?;
            let c1 = outcome(concat_2cm_with(&h, hinv, policy, rule))?;
            let c2 = outcome(concat_2cm_with(hinv, &h, policy, rule))?;
            for c in [&c1, &c2] {
                agree(ediff(c.s(), &zero_s))?;
                agree(ediff(c.t(), &zero_t))?;
            }
            agree(c1.target.mismatch(&f))?;
            agree(c2.target.mismatch(&h.target))
        })());
        tbar.record(wit, (|| {
            let hinv = hinv.as_ref().map_err(|e| e.to_string())?;
            let w = outcome(w_map(&h, hinv))?;
            let expected = h.t().negated().plus(&w.after(&source.d1).negated());
            agree(ediff(hinv.t(), &expected))?;
            agree(ediff(&outcome(box_plus_s(&h, hinv))?, &zero_s))
        })());
        trans.record(wit, outcome(concat_2cm_with(&h, &h1, policy, rule)).map(|_| ()));
        assoc.record(wit, (|| {
            let r = cases(&[&source.r], policy, &salt);
            let rs: Vec<Element> = r.tuples.into_iter().map(|t| t[0].clone()).take(12).collect();
            let rep = outcome(check_w_change(&h, &h1, &h2, &rs, policy))?;
            let first = rep.failures().next().map(|c| format!("{}: {}", c.name, c.detail.clone().unwrap_or_default()));
            agree(first)
        })());
        pairs.record(wit, (|| {
            let checks = outcome(pair_checks(&h, &h1, policy))?;
            match checks.iter().find(|c| !c.passed()) {
                None => Ok(()),
                Some(c) => Err(format!("{}: {:?}", c.name, c.witness)),
            }
        })());
    }
    let mut report = Report::new("groupoid tcm");
    for t in [valid, ids, inv, tbar, trans, assoc, pairs] {
        report.push(t.finish(policy));
    }
    report.value("samples", samples);
    report.value("samples with w∘∂₁ ≠ 0", nontrivial);
    Ok(report)
}
