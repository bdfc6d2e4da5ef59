//! Linear and bilinear maps between algebras.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::algebra::{Algebra, Element, Key};
use crate::error::{Error, Result};
use crate::report::Check;
use crate::sampling::{cases, differ, run_law, Policy};

type PointFn = Arc<dyn Fn(&Element) -> Element + Send + Sync>;

#[derive(Clone)]
enum Rule {
    /// Images of generators, multiplied along generator words. For a finite
    /// source every basis element is a generator, so this is the linear extension.
    Images(BTreeMap<Key, Element>),
    /// The `f₀`-derivation extending generator images: `s(r)` is the second
    /// component of the algebra map `r ↦ (f₀(r), s(r))` into `carrier = R′⋉E′`.
    Derivation { base: Box<LinearMap>, carrier: Algebra, images: BTreeMap<Key, Element> },
    /// Any other rule, evaluated on demand.
    Pointwise(PointFn),
}

#[derive(Clone)]
pub struct LinearMap {
    source: Algebra,
    target: Algebra,
    rule: Rule,
}

impl fmt::Debug for LinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.rule {
            Rule::Images(_) => "images",
            Rule::Derivation { .. } => "derivation",
            Rule::Pointwise(_) => "pointwise",
        };
        write!(f, "LinearMap({} → {}, {kind})", self.source.name(), self.target.name())
    }
}

fn check_generators(source: &Algebra, target: &Algebra, images: &BTreeMap<Key, Element>) -> Result<()> {
    let gens = source.generators();
    for (k, v) in images {
        if !gens.contains(k) {
            return Err(Error::BadShape(format!(
                "{} is not a generator of {}",
                source.key_label(k),
                source.name()
            )));
        }
        target.check_owner(v)?;
    }
    Ok(())
}

impl LinearMap {
    /// Map given by generator images (basis images for finite sources); missing generators map to zero.
    pub fn from_images(source: &Algebra, target: &Algebra, images: BTreeMap<Key, Element>) -> Result<LinearMap> {
        check_generators(source, target, &images)?;
        let images = images.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(LinearMap { source: source.clone(), target: target.clone(), rule: Rule::Images(images) })
    }

    /// The `base`-derivation into `carrier.acted()` extending generator images.
    pub fn derivation(base: &LinearMap, carrier: &Algebra, images: BTreeMap<Key, Element>) -> Result<LinearMap> {
        let (r2, e2) = carrier
            .components()
            .ok_or_else(|| Error::BadShape("derivation carrier must be a semidirect product".into()))?;
        if r2 != base.target() {
            return Err(Error::OwnerMismatch { expected: r2.name().into(), found: base.target().name().into() });
        }
        check_generators(base.source(), e2, &images)?;
        Ok(LinearMap {
            source: base.source().clone(),
            target: e2.clone(),
            rule: Rule::Derivation { base: Box::new(base.clone()), carrier: carrier.clone(), images },
        })
    }

    pub fn pointwise(source: &Algebra, target: &Algebra, f: impl Fn(&Element) -> Element + Send + Sync + 'static) -> LinearMap {
        LinearMap { source: source.clone(), target: target.clone(), rule: Rule::Pointwise(Arc::new(f)) }
    }

    pub fn identity(alg: &Algebra) -> LinearMap {
        LinearMap::pointwise(alg, alg, |u| u.clone())
    }

    pub fn zero(source: &Algebra, target: &Algebra) -> LinearMap {
        LinearMap { source: source.clone(), target: target.clone(), rule: Rule::Images(BTreeMap::new()) }
    }

    pub fn source(&self) -> &Algebra {
        &self.source
    }

    pub fn target(&self) -> &Algebra {
        &self.target
    }

    pub fn is_pointwise(&self) -> bool {
        matches!(self.rule, Rule::Pointwise(_))
    }

    /// Checked evaluation.
    pub fn eval(&self, u: &Element) -> Result<Element> {
        self.source.check_owner(u)?;
        Ok(self.apply(u))
    }

    pub fn apply(&self, u: &Element) -> Element {
        match &self.rule {
            Rule::Pointwise(f) => f(u),
            Rule::Images(images) => {
                let mut out = self.target.zero();
                for (k, c) in u.terms() {
                    let mut v: Option<Element> = None;
                    for g in self.source.word(k) {
                        let Some(img) = images.get(&g) else {
                            v = Some(self.target.zero());
                            break;
                        };
                        v = Some(match v {
                            None => img.clone(),
                            Some(acc) => self.target.mul(&acc, img),
                        });
                    }
                    out = &out + &v.expect("non-empty word").scale(c);
                }
                out
            }
            Rule::Derivation { base, carrier, images } => {
                let mut out = self.target.zero();
                for (k, c) in u.terms() {
                    let mut acc: Option<Element> = None;
                    for g in self.source.word(k) {
                        let gen = self.source.from_key(g.clone());
                        let s = images.get(&g).cloned().unwrap_or_else(|| self.target.zero());
                        let phi = carrier.join(&base.apply(&gen), &s);
                        acc = Some(match acc {
                            None => phi,
                            Some(a) => carrier.mul(&a, &phi),
                        });
                    }
                    let (_, s) = carrier.split(&acc.expect("non-empty word"));
                    out = &out + &s.scale(c);
                }
                out
            }
        }
    }

    /// Values on the source generators.
    pub fn generator_images(&self) -> Vec<(Key, Element)> {
        self.source.generators().into_iter().map(|g| {
            let v = self.apply(&self.source.from_key(g.clone()));
            (g, v)
        }).collect()
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &LinearMap) -> LinearMap {
        let (a, b) = (self.clone(), inner.clone());
        LinearMap::pointwise(&inner.source, &self.target, move |u| a.apply(&b.apply(u)))
    }

    pub fn plus(&self, other: &LinearMap) -> LinearMap {
        let (a, b) = (self.clone(), other.clone());
        LinearMap::pointwise(&self.source, &self.target, move |u| &a.apply(u) + &b.apply(u))
    }

    pub fn negated(&self) -> LinearMap {
        let a = self.clone();
        LinearMap::pointwise(&self.source, &self.target, move |u| -&a.apply(u))
    }

    /// Tabulates a map with finite source on its basis.
    pub fn materialize(&self) -> LinearMap {
        match self.source.basis() {
            Some(basis) => {
                let images = basis
                    .into_iter()
                    .map(|k| {
                        let v = self.apply(&self.source.from_key(k.clone()));
                        (k, v)
                    })
                    .filter(|(_, v)| !v.is_zero())
                    .collect();
                LinearMap { source: self.source.clone(), target: self.target.clone(), rule: Rule::Images(images) }
            }
            None => self.clone(),
        }
    }

    /// First element of `probe` on which the maps differ.
    pub fn disagreement(&self, other: &LinearMap, probe: &[Element]) -> Option<(Element, Element, Element)> {
        probe.iter().find_map(|u| {
            let (a, b) = (self.apply(u), other.apply(u));
            (a != b).then(|| (u.clone(), a, b))
        })
    }

    /// Multiplicativity on test pairs.
    pub fn check_multiplicative(&self, name: &str, policy: &Policy) -> Check {
        let s = &self.source;
        let pairs = cases(&[s, s], policy, &format!("{name}:hom"));
        run_law(name, "hom", &pairs, |t| {
            differ(&self.apply(&s.mul(&t[0], &t[1])), &self.target.mul(&self.apply(&t[0]), &self.apply(&t[1])))
        })
    }
}

/// A bilinear map given by its values on pairs of basis keys (missing pairs are zero).
#[derive(Clone, Debug, PartialEq)]
pub struct BilinearMap {
    left: Algebra,
    right: Algebra,
    target: Algebra,
    table: BTreeMap<(Key, Key), Element>,
}

impl BilinearMap {
    pub fn from_table(left: &Algebra, right: &Algebra, target: &Algebra, table: BTreeMap<(Key, Key), Element>) -> Result<BilinearMap> {
        for v in table.values() {
            target.check_owner(v)?;
        }
        let table = table.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(BilinearMap { left: left.clone(), right: right.clone(), target: target.clone(), table })
    }

    pub fn zero(left: &Algebra, right: &Algebra, target: &Algebra) -> BilinearMap {
        BilinearMap { left: left.clone(), right: right.clone(), target: target.clone(), table: BTreeMap::new() }
    }

    /// Tabulates `f` on basis pairs of finite algebras.
    pub fn from_fn(left: &Algebra, right: &Algebra, target: &Algebra, f: impl Fn(&Element, &Element) -> Element) -> BilinearMap {
        let mut table = BTreeMap::new();
        for a in left.basis().unwrap_or_default() {
            for b in right.basis().unwrap_or_default() {
                let v = f(&left.from_key(a.clone()), &right.from_key(b.clone()));
                if !v.is_zero() {
                    table.insert((a.clone(), b), v);
                }
            }
        }
        BilinearMap { left: left.clone(), right: right.clone(), target: target.clone(), table }
    }

    pub fn target(&self) -> &Algebra {
        &self.target
    }

    pub fn left(&self) -> &Algebra {
        &self.left
    }

    pub fn table(&self) -> &BTreeMap<(Key, Key), Element> {
        &self.table
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_empty()
    }

    pub fn apply(&self, u: &Element, v: &Element) -> Element {
        let mut out = self.target.zero();
        if self.table.is_empty() {
            return out;
        }
        for (k1, c1) in u.terms() {
            for (k2, c2) in v.terms() {
                if let Some(val) = self.table.get(&(k1.clone(), k2.clone())) {
                    out = &out + &val.scale(&(c1 * c2));
                }
            }
        }
        out
    }
}
