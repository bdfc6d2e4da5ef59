//! Commutative non-unital algebras and their elements.
//!
//! Every basis key is a word in the algebra's generators: a finite basis element
//! is a single generator, a free monomial is the product of its variables, and a
//! semidirect product is generated by the generators of its two components.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use rand::Rng;

use crate::action::Action;
use crate::error::{Error, Result};
use crate::report::Check;
use crate::sampling::{cases, differ, run_law, Policy};
use crate::scalar::{Ring, Scalar};

/// A basis key in normal form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Key {
    /// Basis vector of a finite algebra.
    Basis(u32),
    /// Monomial of a free algebra: sorted, non-empty multiset of variable indices.
    Mono(Vec<u32>),
    /// Key of the acting component of a semidirect product.
    Left(Box<Key>),
    /// Key of the acted-on component of a semidirect product.
    Right(Box<Key>),
}

impl Key {
    pub fn left(k: Key) -> Key {
        Key::Left(Box::new(k))
    }

    pub fn right(k: Key) -> Key {
        Key::Right(Box::new(k))
    }
}

#[derive(Debug, PartialEq)]
pub enum Kind {
    Finite {
        basis: Vec<String>,
        /// `table[i][j]` lists the nonzero coordinates of `eᵢeⱼ`.
        table: Vec<Vec<Vec<(u32, Scalar)>>>,
    },
    Free {
        generators: Vec<String>,
    },
    /// `acting ⋉ acted`, with the action carrying both algebras.
    Semidirect(Action),
}

#[derive(Debug, PartialEq)]
struct Inner {
    name: String,
    ring: Ring,
    kind: Kind,
}

/// Shared handle to an immutable algebra descriptor.
#[derive(Clone)]
pub struct Algebra(Arc<Inner>);

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Algebra({})", self.0.name)
    }
}

impl Algebra {
    /// Finite algebra from a dense table `table[i][j][k]` (coefficient of `eₖ` in `eᵢeⱼ`).
    pub fn finite(name: impl Into<String>, ring: Ring, basis: Vec<String>, table: Vec<Vec<Vec<Scalar>>>) -> Result<Algebra> {
        let n = basis.len();
        distinct(&basis)?;
        if table.len() != n || table.iter().any(|row| row.len() != n || row.iter().any(|c| c.len() != n)) {
            return Err(Error::BadShape(format!("structure constants must be {n}×{n}×{n}")));
        }
        if table.iter().flatten().flatten().any(|c| c.ring() != ring) {
            return Err(Error::BadShape("structure constant from another ring".into()));
        }
        for i in 0..n {
            for j in i + 1..n {
                if table[i][j] != table[j][i] {
                    return Err(Error::NonCommutative(vec![basis[i].clone(), basis[j].clone()]));
                }
            }
        }
        let sparse = table
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|c| c.into_iter().enumerate().filter(|(_, s)| !s.is_zero()).map(|(k, s)| (k as u32, s)).collect())
                    .collect()
            })
            .collect();
        let alg = Algebra(Arc::new(Inner { name: name.into(), ring, kind: Kind::Finite { basis, table: sparse } }));
        alg.check_associative()?;
        Ok(alg)
    }

    /// Finite algebra from a list of nonzero products; each product is recorded in both orders.
    pub fn finite_from_products(
        name: impl Into<String>,
        ring: Ring,
        basis: &[&str],
        products: &[(&str, &str, &[(&str, i64)])],
    ) -> Result<Algebra> {
        let n = basis.len();
        let index = |l: &str| {
            basis.iter().position(|b| *b == l).ok_or_else(|| Error::BadShape(format!("unknown basis label {l:?}")))
        };
        let mut table = vec![vec![vec![ring.zero(); n]; n]; n];
        for (u, v, value) in products {
            let (i, j) = (index(u)?, index(v)?);
            for (label, c) in value.iter() {
                let k = index(label)?;
                table[i][j][k] = ring.int(*c);
                table[j][i][k] = ring.int(*c);
            }
        }
        Algebra::finite(name, ring, basis.iter().map(|s| s.to_string()).collect(), table)
    }

    /// The zero algebra.
    pub fn zero_algebra(name: impl Into<String>, ring: Ring) -> Algebra {
        Algebra(Arc::new(Inner { name: name.into(), ring, kind: Kind::Finite { basis: vec![], table: vec![] } }))
    }

    /// Non-unital free commutative algebra (constant-free polynomials).
    pub fn free(name: impl Into<String>, ring: Ring, generators: Vec<String>) -> Result<Algebra> {
        distinct(&generators)?;
        if generators.is_empty() {
            return Err(Error::BadShape("a free algebra needs at least one generator".into()));
        }
        Ok(Algebra(Arc::new(Inner { name: name.into(), ring, kind: Kind::Free { generators } })))
    }

    /// `acting ⋉ acted` with product `(r,e)(r′,e′) = (rr′, r▶e′ + r′▶e + ee′)`.
    pub fn semidirect(acting: &Algebra, acted: &Algebra, action: &Action) -> Result<Algebra> {
        if action.acting() != acting || action.acted() != acted {
            return Err(Error::ActionMismatch(format!(
                "action of {} on {} used for {} ⋉ {}",
                action.acting().name(),
                action.acted().name(),
                acting.name(),
                acted.name()
            )));
        }
        if acting.ring() != acted.ring() {
            return Err(Error::ActionMismatch("components over different rings".into()));
        }
        let name = format!("({})⋉({})", acting.name(), acted.name());
        Ok(Algebra(Arc::new(Inner { name, ring: acting.ring(), kind: Kind::Semidirect(action.clone()) })))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn ring(&self) -> Ring {
        self.0.ring
    }

    pub fn kind(&self) -> &Kind {
        &self.0.kind
    }

    pub fn ptr_eq(&self, other: &Algebra) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn is_free(&self) -> bool {
        matches!(self.kind(), Kind::Free { .. })
    }

    pub fn is_finite(&self) -> bool {
        match self.kind() {
            Kind::Finite { .. } => true,
            Kind::Free { .. } => false,
            Kind::Semidirect(a) => a.acting().is_finite() && a.acted().is_finite(),
        }
    }

    pub fn dim(&self) -> Option<usize> {
        match self.kind() {
            Kind::Finite { basis, .. } => Some(basis.len()),
            Kind::Free { .. } => None,
            Kind::Semidirect(a) => Some(a.acting().dim()? + a.acted().dim()?),
        }
    }

    /// Semidirect components `(acting, acted)`.
    pub fn components(&self) -> Option<(&Algebra, &Algebra)> {
        match self.kind() {
            Kind::Semidirect(a) => Some((a.acting(), a.acted())),
            _ => None,
        }
    }

    pub fn action(&self) -> Option<&Action> {
        match self.kind() {
            Kind::Semidirect(a) => Some(a),
            _ => None,
        }
    }

    /// Basis keys of a finite algebra.
    pub fn basis(&self) -> Option<Vec<Key>> {
        match self.kind() {
            Kind::Finite { basis, .. } => Some((0..basis.len() as u32).map(Key::Basis).collect()),
            Kind::Free { .. } => None,
            Kind::Semidirect(a) => {
                let mut keys: Vec<Key> = a.acting().basis()?.into_iter().map(Key::left).collect();
                keys.extend(a.acted().basis()?.into_iter().map(Key::right));
                Some(keys)
            }
        }
    }

    pub fn basis_elements(&self) -> Vec<Element> {
        self.basis().unwrap_or_default().into_iter().map(|k| self.from_key(k)).collect()
    }

    /// Algebra generators: every basis element of a finite algebra, the variables of a free one.
    pub fn generators(&self) -> Vec<Key> {
        match self.kind() {
            Kind::Finite { basis, .. } => (0..basis.len() as u32).map(Key::Basis).collect(),
            Kind::Free { generators } => (0..generators.len() as u32).map(|i| Key::Mono(vec![i])).collect(),
            Kind::Semidirect(a) => {
                let mut keys: Vec<Key> = a.acting().generators().into_iter().map(Key::left).collect();
                keys.extend(a.acted().generators().into_iter().map(Key::right));
                keys
            }
        }
    }

    pub fn generator_elements(&self) -> Vec<Element> {
        self.generators().into_iter().map(|k| self.from_key(k)).collect()
    }

    /// Generators plus, for infinite algebras, all products of two generators.
    pub fn probe_elements(&self) -> Vec<Element> {
        match self.kind() {
            Kind::Finite { .. } => self.basis_elements(),
            Kind::Free { generators } => {
                let n = generators.len() as u32;
                let mut out: Vec<Element> = (0..n).map(|i| self.from_key(Key::Mono(vec![i]))).collect();
                for i in 0..n {
                    for j in i..n {
                        out.push(self.from_key(Key::Mono(vec![i, j])));
                    }
                }
                out
            }
            Kind::Semidirect(a) => {
                let mut out: Vec<Element> = a.acting().probe_elements().iter().map(|r| self.inject_left(r)).collect();
                out.extend(a.acted().probe_elements().iter().map(|e| self.inject_right(e)));
                out
            }
        }
    }

    /// Splits a key into its first generator and the remaining word.
    pub fn split_first(&self, key: &Key) -> (Key, Option<Key>) {
        match (self.kind(), key) {
            (Kind::Finite { .. }, Key::Basis(_)) => (key.clone(), None),
            (Kind::Free { .. }, Key::Mono(m)) => {
                let rest = (m.len() > 1).then(|| Key::Mono(m[1..].to_vec()));
                (Key::Mono(vec![m[0]]), rest)
            }
            (Kind::Semidirect(a), Key::Left(k)) => {
                let (g, rest) = a.acting().split_first(k);
                (Key::left(g), rest.map(Key::left))
            }
            (Kind::Semidirect(a), Key::Right(k)) => {
                let (g, rest) = a.acted().split_first(k);
                (Key::right(g), rest.map(Key::right))
            }
            _ => panic!("key {key:?} does not belong to {}", self.name()),
        }
    }

    /// The generators whose product is `key`.
    pub fn word(&self, key: &Key) -> Vec<Key> {
        let mut out = Vec::new();
        let mut cur = Some(key.clone());
        while let Some(k) = cur {
            let (g, rest) = self.split_first(&k);
            out.push(g);
            cur = rest;
        }
        out
    }

    pub fn zero(&self) -> Element {
        Element { owner: self.clone(), terms: BTreeMap::new() }
    }

    pub fn from_key(&self, key: Key) -> Element {
        let mut terms = BTreeMap::new();
        terms.insert(key, self.ring().one());
        Element { owner: self.clone(), terms }
    }

    pub fn from_terms(&self, terms: impl IntoIterator<Item = (Key, Scalar)>) -> Element {
        let mut e = self.zero();
        for (k, c) in terms {
            e.add_term(k, &c);
        }
        e
    }

    pub fn check_owner(&self, u: &Element) -> Result<()> {
        if &u.owner == self {
            Ok(())
        } else {
            Err(Error::OwnerMismatch { expected: self.name().to_string(), found: u.owner.name().to_string() })
        }
    }

    /// Checked product.
    pub fn multiply(&self, u: &Element, v: &Element) -> Result<Element> {
        self.check_owner(u)?;
        self.check_owner(v)?;
        Ok(self.mul(u, v))
    }

    /// Product of two elements known to belong to this algebra.
    pub fn mul(&self, u: &Element, v: &Element) -> Element {
        debug_assert!(&u.owner == self && &v.owner == self, "owner mismatch in {}", self.name());
        match self.kind() {
            Kind::Semidirect(action) => {
                let (r1, e1) = self.split(u);
                let (r2, e2) = self.split(v);
                let (acting, acted) = (action.acting(), action.acted());
                let r = acting.mul(&r1, &r2);
                let e = &(&action.apply(&r1, &e2) + &action.apply(&r2, &e1)) + &acted.mul(&e1, &e2);
                self.join(&r, &e)
            }
            _ => {
                let mut out = self.zero();
                for (k1, c1) in &u.terms {
                    for (k2, c2) in &v.terms {
                        let c = c1 * c2;
                        self.add_key_product(&mut out, k1, k2, &c);
                    }
                }
                out
            }
        }
    }

    fn add_key_product(&self, out: &mut Element, k1: &Key, k2: &Key, c: &Scalar) {
        match (self.kind(), k1, k2) {
            (Kind::Finite { table, .. }, Key::Basis(i), Key::Basis(j)) => {
                for (k, s) in &table[*i as usize][*j as usize] {
                    out.add_term(Key::Basis(*k), &(c * s));
                }
            }
            (Kind::Free { .. }, Key::Mono(a), Key::Mono(b)) => {
                let mut m = a.clone();
                m.extend_from_slice(b);
                m.sort_unstable();
                out.add_term(Key::Mono(m), c);
            }
            _ => panic!("keys {k1:?}, {k2:?} do not belong to {}", self.name()),
        }
    }

    /// Product of the basis elements for two keys.
    pub fn key_product(&self, k1: &Key, k2: &Key) -> Element {
        self.mul(&self.from_key(k1.clone()), &self.from_key(k2.clone()))
    }

    /// Components `(r, e)` of a semidirect element.
    pub fn split(&self, u: &Element) -> (Element, Element) {
        let Kind::Semidirect(a) = self.kind() else { panic!("{} is not a semidirect product", self.name()) };
        let mut r = a.acting().zero();
        let mut e = a.acted().zero();
        for (k, c) in &u.terms {
            match k {
                Key::Left(k) => {
                    r.terms.insert((**k).clone(), c.clone());
                }
                Key::Right(k) => {
                    e.terms.insert((**k).clone(), c.clone());
                }
                _ => panic!("key {k:?} is not a semidirect key"),
            }
        }
        (r, e)
    }

    /// The semidirect element `(r, e)`.
    pub fn join(&self, r: &Element, e: &Element) -> Element {
        let Kind::Semidirect(a) = self.kind() else { panic!("{} is not a semidirect product", self.name()) };
        debug_assert!(&r.owner == a.acting() && &e.owner == a.acted());
        let mut terms = BTreeMap::new();
        for (k, c) in &r.terms {
            terms.insert(Key::left(k.clone()), c.clone());
        }
        for (k, c) in &e.terms {
            terms.insert(Key::right(k.clone()), c.clone());
        }
        Element { owner: self.clone(), terms }
    }

    pub fn inject_left(&self, r: &Element) -> Element {
        let (_, acted) = self.components().expect("semidirect");
        self.join(r, &acted.zero())
    }

    pub fn inject_right(&self, e: &Element) -> Element {
        let (acting, _) = self.components().expect("semidirect");
        self.join(&acting.zero(), e)
    }

    /// Nested semidirect components flattened left to right.
    pub fn flatten(&self, u: &Element) -> Vec<Element> {
        match self.kind() {
            Kind::Semidirect(a) => {
                let (r, e) = self.split(u);
                let mut out = a.acting().flatten(&r);
                out.extend(a.acted().flatten(&e));
                out
            }
            _ => vec![u.clone()],
        }
    }

    /// Random element; free monomials have degree at most `max_degree`.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R, max_degree: usize) -> Element {
        let ring = self.ring();
        match self.kind() {
            Kind::Finite { basis, .. } => {
                self.from_terms((0..basis.len() as u32).map(|i| (Key::Basis(i), ring.random(rng))))
            }
            Kind::Free { generators } => {
                let n = generators.len() as u32;
                let terms = rng.gen_range(1..=3);
                let mut e = self.zero();
                for _ in 0..terms {
                    let deg = rng.gen_range(1..=max_degree.max(1));
                    let mut m: Vec<u32> = (0..deg).map(|_| rng.gen_range(0..n)).collect();
                    m.sort_unstable();
                    e.add_term(Key::Mono(m), &ring.random_nonzero(rng));
                }
                e
            }
            Kind::Semidirect(a) => {
                let r = a.acting().random_element(rng, max_degree);
                let e = a.acted().random_element(rng, max_degree);
                self.join(&r, &e)
            }
        }
    }

    /// Printable label of a basis key.
    pub fn key_label(&self, key: &Key) -> String {
        match (self.kind(), key) {
            (Kind::Finite { basis, .. }, Key::Basis(i)) if (*i as usize) < basis.len() => basis[*i as usize].clone(),
            (Kind::Free { generators }, Key::Mono(m)) => monomial_label(generators, m),
            (Kind::Semidirect(_), _) => self.from_key(key.clone()).to_string(),
            _ => format!("{key:?}"),
        }
    }

    /// Reads a basis label or a monomial such as `x^2*y`, `x²y` is also accepted for single-letter variables.
    pub fn parse_key(&self, label: &str) -> Result<Key> {
        let unknown = || Error::BadShape(format!("{label:?} is not a basis label of {}", self.name()));
        match self.kind() {
            Kind::Finite { basis, .. } => {
                basis.iter().position(|b| b == label).map(|i| Key::Basis(i as u32)).ok_or_else(unknown)
            }
            Kind::Free { generators } => parse_monomial(generators, label).ok_or_else(unknown),
            Kind::Semidirect(_) => Err(unknown()),
        }
    }

    /// Element from `(label, coefficient)` pairs.
    pub fn parse_element<'a>(&self, terms: impl IntoIterator<Item = (&'a str, Scalar)>) -> Result<Element> {
        let mut e = self.zero();
        for (label, c) in terms {
            if c.ring() != self.ring() {
                return Err(Error::BadShape(format!("coefficient of {label:?} is over the wrong ring")));
            }
            e.add_term(self.parse_key(label)?, &c);
        }
        Ok(e)
    }

    fn check_associative(&self) -> Result<()> {
        let basis = self.basis_elements();
        for u in &basis {
            for v in &basis {
                let uv = self.mul(u, v);
                for w in &basis {
                    if self.mul(&uv, w) != self.mul(u, &self.mul(v, w)) {
                        return Err(Error::NonAssociative(vec![u.to_string(), v.to_string(), w.to_string()]));
                    }
                }
            }
        }
        Ok(())
    }

    /// Commutativity and associativity on test tuples (exhaustive when finite).
    pub fn certify(&self, policy: &Policy) -> Vec<Check> {
        let pairs = cases(&[self, self], policy, &format!("{}:comm", self.name()));
        let triples = cases(&[self, self, self], policy, &format!("{}:assoc", self.name()));
        vec![
            run_law("commutativity", "commutativity", &pairs, |t| differ(&self.mul(&t[0], &t[1]), &self.mul(&t[1], &t[0]))),
            run_law("associativity", "associativity", &triples, |t| {
                differ(&self.mul(&self.mul(&t[0], &t[1]), &t[2]), &self.mul(&t[0], &self.mul(&t[1], &t[2])))
            }),
        ]
    }
}

fn distinct(labels: &[String]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for l in labels {
        if l.is_empty() {
            return Err(Error::BadShape("empty label".into()));
        }
        if !seen.insert(l) {
            return Err(Error::DuplicateGenerator(l.clone()));
        }
    }
    Ok(())
}

const SUPERSCRIPTS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];

fn superscript(n: usize) -> String {
    n.to_string().chars().map(|c| SUPERSCRIPTS[c.to_digit(10).unwrap() as usize]).collect()
}

fn monomial_label(generators: &[String], m: &[u32]) -> String {
    let mut out = String::new();
    let mut i = 0;
    while i < m.len() {
        let mut j = i;
        while j < m.len() && m[j] == m[i] {
            j += 1;
        }
        let name = &generators[m[i] as usize];
        if !out.is_empty() && (name.chars().count() > 1 || out.chars().last().is_some_and(|c| c.is_ascii_digit())) {
            out.push('·');
        }
        out.push_str(name);
        if j - i > 1 {
            out.push_str(&superscript(j - i));
        }
        i = j;
    }
    out
}

fn parse_monomial(generators: &[String], label: &str) -> Option<Key> {
    let index = |name: &str| generators.iter().position(|g| g == name).map(|i| i as u32);
    let mut m = Vec::new();
    for factor in label.split(['*', '·', ' ']).filter(|f| !f.is_empty()) {
        if let Some(i) = index(factor) {
            m.push(i);
            continue;
        }
        if let Some((base, exp)) = factor.split_once('^') {
            let n: usize = exp.parse().ok()?;
            m.extend(std::iter::repeat_n(index(base)?, n));
            continue;
        }
        // Run of single-letter variables with optional superscript exponents, e.g. `x²y`.
        let chars: Vec<char> = factor.chars().collect();
        let mut k = 0;
        while k < chars.len() {
            let g = index(&chars[k].to_string())?;
            k += 1;
            let mut exp = String::new();
            while k < chars.len() {
                match SUPERSCRIPTS.iter().position(|s| *s == chars[k]) {
                    Some(d) => exp.push(char::from_digit(d as u32, 10).unwrap()),
                    None => break,
                }
                k += 1;
            }
            let n = if exp.is_empty() { 1 } else { exp.parse().ok()? };
            m.extend(std::iter::repeat_n(g, n));
        }
    }
    if m.is_empty() {
        return None;
    }
    m.sort_unstable();
    Some(Key::Mono(m))
}

/// A vector in an algebra, stored sparsely with no zero coefficients.
#[derive(Clone)]
pub struct Element {
    owner: Algebra,
    terms: BTreeMap<Key, Scalar>,
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && self.owner == other.owner
    }
}

impl Element {
    pub fn owner(&self) -> &Algebra {
        &self.owner
    }

    pub fn terms(&self) -> &BTreeMap<Key, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &Key) -> Scalar {
        self.terms.get(key).cloned().unwrap_or_else(|| self.owner.ring().zero())
    }

    pub fn add_term(&mut self, key: Key, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v = &*v + c;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c.clone());
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        let mut out = self.owner.zero();
        if c.is_zero() {
            return out;
        }
        for (k, v) in &self.terms {
            out.terms.insert(k.clone(), v * c);
        }
        out
    }

    pub fn scale_int(&self, n: i64) -> Element {
        self.scale(&self.owner.ring().int(n))
    }

    /// Maximum monomial degree (free algebras); 1 for finite keys.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(|k| if let Key::Mono(m) = k { m.len() } else { 1 }).max().unwrap_or(0)
    }

    fn assert_same(&self, other: &Element) {
        assert!(
            self.owner.ptr_eq(&other.owner) || self.owner == other.owner,
            "elements of {} and {} combined",
            self.owner.name(),
            other.owner.name()
        );
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        self.assert_same(rhs);
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), c);
        }
        out
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        self.assert_same(rhs);
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), &-c);
        }
        out
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = -&*v;
        }
        out
    }
}

impl Mul for &Element {
    type Output = Element;
    fn mul(self, rhs: &Element) -> Element {
        self.assert_same(rhs);
        self.owner.mul(self, rhs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Element {
            type Output = Element;
            fn $m(self, rhs: Element) -> Element {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        -&self
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.owner.components().is_some() {
            let parts: Vec<String> = self.owner.flatten(self).iter().map(|c| c.to_string()).collect();
            return write!(f, "({})", parts.join(", "));
        }
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            let label = self.owner.key_label(k);
            let (neg, mag) = if c.is_negative() { (true, -c) } else { (false, c.clone()) };
            let body = if mag.is_one() {
                label
            } else {
                let s = mag.to_string();
                if s.contains('/') {
                    format!("({s}){label}")
                } else {
                    format!("{s}{label}")
                }
            };
            match (first, neg) {
                (true, false) => write!(f, "{body}")?,
                (true, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, " + {body}")?,
                (false, true) => write!(f, " - {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ∈ {}", self, self.owner.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f1() -> Algebra {
        Algebra::finite_from_products("R", Ring::Rational, &["x", "x²"], &[("x", "x", &[("x²", 1)])]).unwrap()
    }

    #[test]
    fn finite_products() {
        let r = f1();
        let x = r.parse_element([("x", Ring::Rational.one())]).unwrap();
        assert_eq!((&x * &x).to_string(), "x²");
        assert!((&(&x * &x) * &x).is_zero());
    }

    #[test]
    fn non_commutative_table_rejected() {
        let q = Ring::Rational;
        let (o, z) = (q.one(), q.zero());
        // u·v = u but v·u = v
        let table = vec![
            vec![vec![z.clone(), z.clone()], vec![o.clone(), z.clone()]],
            vec![vec![z.clone(), o.clone()], vec![z.clone(), z.clone()]],
        ];
        let err = Algebra::finite("bad", q, vec!["u".into(), "v".into()], table).unwrap_err();
        assert!(matches!(err, Error::NonCommutative(_)));
    }

    #[test]
    fn non_associative_table_rejected() {
        // a·a = b, everything else zero except b·b = a: (aa)b = a ≠ a(ab) = 0
        let err = Algebra::finite_from_products(
            "bad",
            Ring::Rational,
            &["a", "b"],
            &[("a", "a", &[("b", 1)]), ("b", "b", &[("a", 1)])],
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonAssociative(_)));
    }

    #[test]
    fn free_polynomials() {
        let q = Ring::Rational;
        let r = Algebra::free("R", q, vec!["x".into()]).unwrap();
        let x = r.parse_element([("x", q.one())]).unwrap();
        let x2 = r.parse_element([("x^2", q.one())]).unwrap();
        assert_eq!(((&x + &x2) * x.clone()).to_string(), "x² + x³");
        assert_eq!(r.parse_key("x³").unwrap(), Key::Mono(vec![0, 0, 0]));
        assert!(matches!(
            Algebra::free("R", q, vec!["x".into(), "x".into()]),
            Err(Error::DuplicateGenerator(_))
        ));
        let r2 = Algebra::free("S", q, vec!["x".into(), "y".into()]).unwrap();
        assert_eq!(r2.parse_key("x^2*y").unwrap(), Key::Mono(vec![0, 0, 1]));
        assert_eq!(r2.key_label(&Key::Mono(vec![0, 0, 1])), "x²y");
    }

    #[test]
    fn normal_form_cancels() {
        let r = f1();
        let mut rng = rand::thread_rng();
        let u = r.random_element(&mut rng, 4);
        assert!((&u + &(-&u)).terms().is_empty());
    }

    #[test]
    fn owner_mismatch() {
        let r = f1();
        let s = Algebra::zero_algebra("0", Ring::Rational);
        assert!(matches!(r.multiply(&r.zero(), &s.zero()), Err(Error::OwnerMismatch { .. })));
    }
}
