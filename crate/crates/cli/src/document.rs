//! The JSON input format and its resolution into validated structures.
//!
//! The format is described in `docs/schema.md` at the repository root; `fixtures/fixtures.json` is the reference example.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;

use xmod2_core::cm_homotopy::{apply_cm_homotopy, make_cm_derivation, CMHomotopy};
use xmod2_core::crossed::{CrossedModule, CrossedMorphism, PreCrossedModule, TwoCrossedModule, TwoCrossedMorphism, TwoCrossedParts};
use xmod2_core::tcm_homotopy::{apply_2cm_homotopy, make_quadratic_derivation, TCMHomotopy};
use xmod2_core::{Action, Algebra, BilinearMap, Element, Error, Key, LinearMap, Policy, Ring};

/// `{label: scalar}`.
type ElementData = BTreeMap<String, String>;
/// `{generator: element}`.
type MapData = BTreeMap<String, ElementData>;
/// `{left: {right: element}}`.
type PairData = BTreeMap<String, BTreeMap<String, ElementData>>;

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct RawDocument {
    ring: String,
    #[serde(default)]
    algebras: BTreeMap<String, RawAlgebra>,
    #[serde(default)]
    actions: BTreeMap<String, RawAction>,
    #[serde(default)]
    pre_crossed_modules: BTreeMap<String, RawCrossed>,
    #[serde(default)]
    crossed_modules: BTreeMap<String, RawCrossed>,
    #[serde(default)]
    two_crossed_modules: BTreeMap<String, RawTwoCrossed>,
    #[serde(default)]
    crossed_morphisms: BTreeMap<String, RawCrossedMorphism>,
    #[serde(default)]
    morphisms: BTreeMap<String, RawMorphism>,
    #[serde(default)]
    derivations: BTreeMap<String, RawDerivation>,
    #[serde(default)]
    quadratic_derivations: BTreeMap<String, RawDerivation>,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase", deny_unknown_fields)]
enum RawAlgebra {
    Finite {
        basis: Vec<String>,
        #[serde(default)]
        products: PairData,
    },
    Free {
        generators: Vec<String>,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAction {
    acting: String,
    acted: String,
    #[serde(default)]
    table: PairData,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCrossed {
    e: String,
    r: String,
    #[serde(default)]
    boundary: MapData,
    action: Option<String>,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct RawTwoCrossed {
    l: String,
    e: String,
    r: String,
    #[serde(default)]
    d2: MapData,
    #[serde(default)]
    d1: MapData,
    action_e: Option<String>,
    action_l: Option<String>,
    #[serde(default)]
    lift: PairData,
    free_basis: Option<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCrossedMorphism {
    source: String,
    target: String,
    #[serde(default)]
    f0: MapData,
    #[serde(default)]
    f1: MapData,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMorphism {
    source: String,
    target: String,
    #[serde(default)]
    f0: MapData,
    #[serde(default)]
    f1: MapData,
    #[serde(default)]
    f2: MapData,
}

/// A derivation over a named morphism, or over the target of an earlier derivation (`after`).
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDerivation {
    morphism: Option<String>,
    after: Option<String>,
    #[serde(default)]
    s: MapData,
    #[serde(default)]
    t: MapData,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LoadError {
    Io { path: String, message: String },
    Parse { line: usize, column: usize, message: String },
    UnresolvedReference { kind: &'static str, name: String, referrer: String },
    Validation { structure: String, axiom: String, witness: Vec<String>, message: String },
}

impl LoadError {
    pub fn kind(&self) -> &'static str {
        match self {
            LoadError::Io { .. } => "IoError",
            LoadError::Parse { .. } => "ParseError",
            LoadError::UnresolvedReference { .. } => "UnresolvedReference",
            LoadError::Validation { .. } => "ValidationError",
        }
    }

    fn invalid(structure: &str, err: Error) -> LoadError {
        LoadError::Validation {
            structure: structure.to_string(),
            axiom: err.axiom().unwrap_or("shape").to_string(),
            witness: err.witness().map(|w| w.to_vec()).unwrap_or_default(),
            message: err.to_string(),
        }
    }
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoadError::Io { path, message } => write!(f, "IoError: cannot read {path}: {message}"),
            LoadError::Parse { line, column, message } => write!(f, "ParseError at line {line}, column {column}: {message}"),
            LoadError::UnresolvedReference { kind, name, referrer } => {
                write!(f, "UnresolvedReference: {kind} {name:?} (referenced by {referrer})")
            }
            LoadError::Validation { structure, message, .. } => {
                write!(f, "ValidationError in {structure}: {message}")
            }
        }
    }
}

impl std::error::Error for LoadError {}

type Loaded<T> = std::result::Result<T, LoadError>;

/// A fully resolved input document; every structure in it has been validated.
pub struct SpecDocument {
    pub ring: Ring,
    pub algebras: BTreeMap<String, Algebra>,
    pub actions: BTreeMap<String, Action>,
    pub pre_crossed_modules: BTreeMap<String, PreCrossedModule>,
    pub crossed_modules: BTreeMap<String, Arc<CrossedModule>>,
    pub two_crossed_modules: BTreeMap<String, Arc<TwoCrossedModule>>,
    pub crossed_morphisms: BTreeMap<String, CrossedMorphism>,
    pub morphisms: BTreeMap<String, TwoCrossedMorphism>,
    pub derivations: BTreeMap<String, CMHomotopy>,
    pub quadratic_derivations: BTreeMap<String, TCMHomotopy>,
}

pub fn load_spec(path: &Path, policy: &Policy) -> Loaded<SpecDocument> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| LoadError::Io { path: path.display().to_string(), message: e.to_string() })?;
    load_spec_str(&text, policy)
}

pub fn load_spec_str(text: &str, policy: &Policy) -> Loaded<SpecDocument> {
    let raw: RawDocument = serde_json::from_str(text)
        .map_err(|e| {
            let suffix = format!(" at line {} column {}", e.line(), e.column());
            let message = e.to_string();
            LoadError::Parse { line: e.line(), column: e.column(), message: message.strip_suffix(&suffix).unwrap_or(&message).to_string() }
        })?;
    Resolver { raw: &raw, policy, doc: SpecDocument::empty(parse_ring(&raw.ring)?), pending: BTreeSet::new() }.run()
}

fn parse_ring(text: &str) -> Loaded<Ring> {
    let bad = |message: String| LoadError::Validation { structure: "ring".into(), axiom: "shape".into(), witness: vec![text.into()], message };
    let t = text.trim();
    if t == "rational" {
        return Ok(Ring::Rational);
    }
    let p = t.strip_prefix("prime").or_else(|| t.strip_prefix("mod")).ok_or_else(|| bad("expected \"rational\" or \"prime p\"".into()))?;
    let p: u64 = p.trim().parse().map_err(|_| bad("expected \"rational\" or \"prime p\"".into()))?;
    Ring::prime(p).map_err(|e| bad(e.to_string()))
}

impl SpecDocument {
    fn empty(ring: Ring) -> SpecDocument {
        SpecDocument {
            ring,
            algebras: BTreeMap::new(),
            actions: BTreeMap::new(),
            pre_crossed_modules: BTreeMap::new(),
            crossed_modules: BTreeMap::new(),
            two_crossed_modules: BTreeMap::new(),
            crossed_morphisms: BTreeMap::new(),
            morphisms: BTreeMap::new(),
            derivations: BTreeMap::new(),
            quadratic_derivations: BTreeMap::new(),
        }
    }
}

struct Resolver<'a> {
    raw: &'a RawDocument,
    policy: &'a Policy,
    doc: SpecDocument,
    /// Derivations under construction, to reject `after` cycles.
    pending: BTreeSet<String>,
}

fn unresolved(kind: &'static str, name: &str, referrer: &str) -> LoadError {
    LoadError::UnresolvedReference { kind, name: name.to_string(), referrer: referrer.to_string() }
}

impl Resolver<'_> {
    /// Sections are built in dependency order, each in name order.
    fn run(mut self) -> Loaded<SpecDocument> {
        let raw = self.raw;
        for (name, a) in &raw.algebras {
            let alg = self.algebra(name, a)?;
            self.doc.algebras.insert(name.clone(), alg);
        }
        for (name, a) in &raw.actions {
            let act = self.action(name, a)?;
            self.doc.actions.insert(name.clone(), act);
        }
        for (name, c) in &raw.pre_crossed_modules {
            let (e, r, boundary, action) = self.crossed_parts(name, c)?;
            let p = PreCrossedModule::new(name, &e, &r, boundary, action, self.policy).map_err(|err| LoadError::invalid(name, err))?;
            self.doc.pre_crossed_modules.insert(name.clone(), p);
        }
        for (name, c) in &raw.crossed_modules {
            let (e, r, boundary, action) = self.crossed_parts(name, c)?;
            let m = CrossedModule::new(name, &e, &r, boundary, action, self.policy).map_err(|err| LoadError::invalid(name, err))?;
            self.doc.crossed_modules.insert(name.clone(), Arc::new(m));
        }
        for (name, t) in &raw.two_crossed_modules {
            let m = self.two_crossed(name, t)?;
            self.doc.two_crossed_modules.insert(name.clone(), m);
        }
        for (name, m) in &raw.crossed_morphisms {
            let f = self.crossed_morphism(name, m)?;
            self.doc.crossed_morphisms.insert(name.clone(), f);
        }
        for (name, m) in &raw.morphisms {
            let f = self.morphism(name, m)?;
            self.doc.morphisms.insert(name.clone(), f);
        }
        for name in raw.derivations.keys() {
            self.derivation(name, name)?;
        }
        for name in raw.quadratic_derivations.keys() {
            self.quadratic(name, name)?;
        }
        Ok(self.doc)
    }

    fn scalar(&self, owner: &str, text: &str) -> Loaded<xmod2_core::Scalar> {
        self.doc.ring.parse(text).map_err(|e| LoadError::invalid(owner, e))
    }

    fn element(&self, owner: &str, alg: &Algebra, data: &ElementData) -> Loaded<Element> {
        let terms = data.iter().map(|(l, c)| Ok((l.as_str(), self.scalar(owner, c)?))).collect::<Loaded<Vec<_>>>()?;
        alg.parse_element(terms).map_err(|e| LoadError::invalid(owner, e))
    }

    fn key(&self, owner: &str, alg: &Algebra, label: &str) -> Loaded<Key> {
        alg.parse_key(label).map_err(|e| LoadError::invalid(owner, e))
    }

    fn get_algebra(&self, name: &str, referrer: &str) -> Loaded<Algebra> {
        self.doc.algebras.get(name).cloned().ok_or_else(|| unresolved("algebra", name, referrer))
    }

    fn get_action(&self, name: Option<&String>, acting: &Algebra, acted: &Algebra, referrer: &str) -> Loaded<Action> {
        let Some(name) = name else { return Ok(Action::zero(acting, acted)) };
        let act = self.doc.actions.get(name).cloned().ok_or_else(|| unresolved("action", name, referrer))?;
        if !act.acting().ptr_eq(acting) || !act.acted().ptr_eq(acted) {
            return Err(LoadError::invalid(
                referrer,
                Error::ActionMismatch(format!("{name} is an action of {} on {}", act.acting().name(), act.acted().name())),
            ));
        }
        Ok(act)
    }

    fn map(&self, owner: &str, source: &Algebra, target: &Algebra, data: &MapData) -> Loaded<LinearMap> {
        let mut images = BTreeMap::new();
        for (label, value) in data {
            images.insert(self.key(owner, source, label)?, self.element(owner, target, value)?);
        }
        LinearMap::from_images(source, target, images).map_err(|e| LoadError::invalid(owner, e))
    }

    fn pair_table(&self, owner: &str, left: &Algebra, right: &Algebra, target: &Algebra, data: &PairData) -> Loaded<BTreeMap<(Key, Key), Element>> {
        let mut table = BTreeMap::new();
        for (u, row) in data {
            let ku = self.key(owner, left, u)?;
            for (v, value) in row {
                table.insert((ku.clone(), self.key(owner, right, v)?), self.element(owner, target, value)?);
            }
        }
        Ok(table)
    }

    fn algebra(&self, name: &str, raw: &RawAlgebra) -> Loaded<Algebra> {
        let built = match raw {
            RawAlgebra::Free { generators } => Algebra::free(name, self.doc.ring, generators.clone()),
            RawAlgebra::Finite { basis, products } => {
                // a product given for (u, v) also fixes (v, u) unless that entry is given too
                let shell = Algebra::finite(name, self.doc.ring, basis.clone(), vec![vec![vec![self.doc.ring.zero(); basis.len()]; basis.len()]; basis.len()])
                    .map_err(|e| LoadError::invalid(name, e))?;
                let given = self.pair_table(name, &shell, &shell, &shell, products)?;
                let index = |k: &Key| match k {
                    Key::Basis(i) => *i as usize,
                    _ => unreachable!("finite algebras have basis keys"),
                };
                let n = basis.len();
                let mut table = vec![vec![vec![self.doc.ring.zero(); n]; n]; n];
                for ((u, v), value) in &given {
                    let (i, j) = (index(u), index(v));
                    for (k, c) in value.terms() {
                        table[i][j][index(k)] = c.clone();
                        if !given.contains_key(&(v.clone(), u.clone())) {
                            table[j][i][index(k)] = c.clone();
                        }
                    }
                }
                Algebra::finite(name, self.doc.ring, basis.clone(), table)
            }
        };
        built.map_err(|e| LoadError::invalid(name, e))
    }

    fn action(&self, name: &str, raw: &RawAction) -> Loaded<Action> {
        let acting = self.get_algebra(&raw.acting, name)?;
        let acted = self.get_algebra(&raw.acted, name)?;
        let table = self.pair_table(name, &acting, &acted, &acted, &raw.table)?;
        Action::validated(&acting, &acted, table, self.policy).map_err(|e| LoadError::invalid(name, e))
    }

    fn crossed_parts(&self, name: &str, raw: &RawCrossed) -> Loaded<(Algebra, Algebra, LinearMap, Action)> {
        let e = self.get_algebra(&raw.e, name)?;
        let r = self.get_algebra(&raw.r, name)?;
        let boundary = self.map(name, &e, &r, &raw.boundary)?;
        let action = self.get_action(raw.action.as_ref(), &r, &e, name)?;
        Ok((e, r, boundary, action))
    }

    fn two_crossed(&self, name: &str, raw: &RawTwoCrossed) -> Loaded<Arc<TwoCrossedModule>> {
        let l = self.get_algebra(&raw.l, name)?;
        let e = self.get_algebra(&raw.e, name)?;
        let r = self.get_algebra(&raw.r, name)?;
        let parts = TwoCrossedParts {
            name: name.to_string(),
            d2: self.map(name, &l, &e, &raw.d2)?,
            d1: self.map(name, &e, &r, &raw.d1)?,
            act_e: self.get_action(raw.action_e.as_ref(), &r, &e, name)?,
            act_l: self.get_action(raw.action_l.as_ref(), &r, &l, name)?,
            lift: BilinearMap::from_table(&e, &e, &l, self.pair_table(name, &e, &e, &l, &raw.lift)?).map_err(|err| LoadError::invalid(name, err))?,
            l,
            e,
            r,
            free_basis: raw.free_basis.clone(),
        };
        TwoCrossedModule::new(parts, self.policy).map_err(|err| LoadError::invalid(name, err))
    }

    fn crossed_morphism(&self, name: &str, raw: &RawCrossedMorphism) -> Loaded<CrossedMorphism> {
        let get = |n: &str| self.doc.crossed_modules.get(n).cloned().ok_or_else(|| unresolved("crossed module", n, name));
        let (a, b) = (get(&raw.source)?, get(&raw.target)?);
        let f0 = self.map(name, &a.r, &b.r, &raw.f0)?;
        let f1 = self.map(name, &a.e, &b.e, &raw.f1)?;
        CrossedMorphism::new(&a, &b, f0, f1, self.policy).map_err(|err| LoadError::invalid(name, err))
    }

    fn morphism(&self, name: &str, raw: &RawMorphism) -> Loaded<TwoCrossedMorphism> {
        let get = |n: &str| self.doc.two_crossed_modules.get(n).cloned().ok_or_else(|| unresolved("2-crossed module", n, name));
        let (a, b) = (get(&raw.source)?, get(&raw.target)?);
        let f0 = self.map(name, &a.r, &b.r, &raw.f0)?;
        let f1 = self.map(name, &a.e, &b.e, &raw.f1)?;
        let f2 = self.map(name, &a.l, &b.l, &raw.f2)?;
        TwoCrossedMorphism::new(&a, &b, f0, f1, f2, self.policy).map_err(|err| LoadError::invalid(name, err))
    }

    /// Which of `morphism` / `after` a derivation is based on.
    fn base<'r>(&self, name: &str, raw: &'r RawDerivation) -> Loaded<Base<'r>> {
        match (&raw.morphism, &raw.after) {
            (Some(m), None) => Ok(Base::Morphism(m)),
            (None, Some(h)) => Ok(Base::After(h)),
            _ => Err(LoadError::Validation {
                structure: name.to_string(),
                axiom: "shape".into(),
                witness: vec!["morphism".into(), "after".into()],
                message: "give exactly one of \"morphism\" and \"after\"".into(),
            }),
        }
    }

    fn derivation(&mut self, name: &str, referrer: &str) -> Loaded<CMHomotopy> {
        if let Some(h) = self.doc.derivations.get(name) {
            return Ok(h.clone());
        }
        let raw = self.raw.derivations.get(name).ok_or_else(|| unresolved("derivation", name, referrer))?;
        if !self.pending.insert(name.to_string()) {
            return Err(unresolved("derivation", name, referrer));
        }
        let f = match self.base(name, raw)? {
            Base::Morphism(m) => self.doc.crossed_morphisms.get(m).cloned().ok_or_else(|| unresolved("crossed morphism", m, name))?,
            Base::After(h) => self.derivation(h, name)?.target,
        };
        if !raw.t.is_empty() {
            return Err(LoadError::invalid(name, Error::BadShape("a crossed module derivation has no t component".into())));
        }
        let images = raw.s.iter().map(|(l, v)| Ok((self.key(name, &f.source.r, l)?, self.element(name, &f.target.e, v)?))).collect::<Loaded<_>>()?;
        let d = make_cm_derivation(&f, images, self.policy).map_err(|e| LoadError::invalid(name, e))?;
        let h = apply_cm_homotopy(&d, self.policy).map_err(|e| LoadError::invalid(name, e))?;
        self.pending.remove(name);
        self.doc.derivations.insert(name.to_string(), h.clone());
        Ok(h)
    }

    fn quadratic(&mut self, name: &str, referrer: &str) -> Loaded<TCMHomotopy> {
        if let Some(h) = self.doc.quadratic_derivations.get(name) {
            return Ok(h.clone());
        }
        let raw = self.raw.quadratic_derivations.get(name).ok_or_else(|| unresolved("quadratic derivation", name, referrer))?;
        if !self.pending.insert(name.to_string()) {
            return Err(unresolved("quadratic derivation", name, referrer));
        }
        let f = match self.base(name, raw)? {
            Base::Morphism(m) => self.doc.morphisms.get(m).cloned().ok_or_else(|| unresolved("morphism", m, name))?,
            Base::After(h) => self.quadratic(h, name)?.target,
        };
        let s = raw.s.iter().map(|(l, v)| Ok((self.key(name, &f.source.r, l)?, self.element(name, &f.target.e, v)?))).collect::<Loaded<_>>()?;
        let t = raw.t.iter().map(|(l, v)| Ok((self.key(name, &f.source.e, l)?, self.element(name, &f.target.l, v)?))).collect::<Loaded<_>>()?;
        let q = make_quadratic_derivation(&f, &s, &t, self.policy).map_err(|e| LoadError::invalid(name, e))?;
        let h = apply_2cm_homotopy(&q, self.policy).map_err(|e| LoadError::invalid(name, e))?;
        self.pending.remove(name);
        self.doc.quadratic_derivations.insert(name.to_string(), h.clone());
        Ok(h)
    }
}

enum Base<'r> {
    Morphism(&'r str),
    After(&'r str),
}
