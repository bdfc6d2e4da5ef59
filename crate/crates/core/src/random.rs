//! Random small structures over a prime field, for property runs.
//!
//! Algebras are subalgebras of `κ × κ × N` with `N = κ[x,y]₊/(degree ≥ 3)`,
//! spanned by a few random elements. Boundaries come from generator images,
//! actions from the affine solution space of A1 and XM1, and 2-crossed
//! modules from the kernel construction. Everything is rejection-sampled.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;

use crate::action::Action;
use crate::algebra::{Algebra, Element, Key};
use crate::cm_homotopy::random_algebra_map;
use crate::crossed::{kernel_two_crossed, PreCrossedModule, TwoCrossedModule};
use crate::linalg::{coords, rank, rref, solve, solve_affine, AffineSpace};
use crate::sampling::Policy;
use crate::scalar::{Ring, Scalar};

/// `κe₁ × κe₂ × N`, with `N` spanned by `x, y, x², xy, y²`.
pub fn ambient(ring: Ring) -> Algebra {
    Algebra::finite_from_products(
        "ambient",
        ring,
        &["e₁", "e₂", "x", "y", "x²", "xy", "y²"],
        &[
            ("e₁", "e₁", &[("e₁", 1)]),
            ("e₂", "e₂", &[("e₂", 1)]),
            ("x", "x", &[("x²", 1)]),
            ("x", "y", &[("xy", 1)]),
            ("y", "y", &[("y²", 1)]),
        ],
    )
    .expect("ambient algebra")
}

/// Echelon basis of the subalgebra generated by `gens`.
fn subalgebra_span(amb: &Algebra, gens: &[Element]) -> Vec<Element> {
    let n = amb.dim().expect("finite");
    let mut span: Vec<Element> = Vec::new();
    let add = |span: &mut Vec<Element>, v: Element| {
        let mut rows: Vec<Vec<Scalar>> = span.iter().map(|u| coords(amb, u)).collect();
        rows.push(coords(amb, &v));
        if rank(&rows, n) > span.len() {
            span.push(v);
            true
        } else {
            false
        }
    };
    for g in gens {
        add(&mut span, g.clone());
    }
    let mut changed = true;
    while changed {
        changed = false;
        let current = span.clone();
        for u in &current {
            for v in &current {
                if add(&mut span, amb.mul(u, v)) {
                    changed = true;
                }
            }
        }
    }
    let mut rows: Vec<Vec<Scalar>> = span.iter().map(|u| coords(amb, u)).collect();
    rref(&mut rows, n);
    rows.iter().map(|r| crate::linalg::from_coords(amb, r)).collect()
}

/// Each basis coefficient is nonzero with probability 1/3.
fn sparse_element<R: Rng + ?Sized>(alg: &Algebra, rng: &mut R) -> Element {
    let ring = alg.ring();
    let terms: Vec<(Key, Scalar)> = alg
        .basis()
        .unwrap_or_default()
        .into_iter()
        .filter_map(|k| (rng.gen_range(0..3) == 0).then(|| (k, ring.random_nonzero(rng))))
        .collect();
    alg.from_terms(terms)
}

/// A random commutative associative algebra of dimension between 1 and `max_dim`.
pub fn random_algebra<R: Rng + ?Sized>(name: &str, prefix: &str, ring: Ring, max_dim: usize, rng: &mut R) -> Algebra {
    let amb = ambient(ring);
    let n = amb.dim().expect("finite");
    loop {
        let want = rng.gen_range(1..=max_dim);
        let k = rng.gen_range(1..=want);
        let gens: Vec<Element> = (0..k).map(|_| sparse_element(&amb, rng)).collect();
        let basis = subalgebra_span(&amb, &gens);
        if basis.len() != want {
            continue;
        }
        let d = basis.len();
        let cols: Vec<Vec<Scalar>> = basis.iter().map(|u| coords(&amb, u)).collect();
        let rows: Vec<Vec<Scalar>> = (0..n).map(|i| (0..d).map(|j| cols[j][i].clone()).collect()).collect();
        let express = |v: &Element| solve(&rows, &coords(&amb, v), d, ring).expect("closed under products").point;
        let table: Vec<Vec<Vec<Scalar>>> =
            (0..d).map(|i| (0..d).map(|j| express(&amb.mul(&basis[i], &basis[j]))).collect()).collect();
        let labels = (1..=d).map(|i| format!("{prefix}{i}")).collect();
        return Algebra::finite(name, ring, labels, table).expect("subalgebra of an associative algebra");
    }
}

/// All actions `R ▶ E` satisfying A1 and XM1 for the boundary `d`, as an affine space of tables.
fn sample_action<R: Rng + ?Sized>(r: &Algebra, e: &Algebra, d: &crate::maps::LinearMap, rng: &mut R) -> Option<Action> {
    let ring = r.ring();
    let (rb, eb) = (r.basis()?, e.basis()?);
    let (nr, ne) = (rb.len(), eb.len());
    let build = |x: &[Scalar]| -> Action {
        let mut table = BTreeMap::new();
        for (i, ri) in rb.iter().enumerate() {
            for (j, ej) in eb.iter().enumerate() {
                let base = (i * ne + j) * ne;
                let v = e.from_terms(eb.iter().cloned().zip(x[base..base + ne].iter().cloned()));
                table.insert((ri.clone(), ej.clone()), v);
            }
        }
        Action::from_table(r, e, table).expect("basis table")
    };
    let space = solve_affine(ring, nr * ne * ne, |x| {
        let act = build(x);
        let mut out = Vec::new();
        for ri in r.basis_elements() {
            for e1 in e.basis_elements() {
                let moved = act.apply(&ri, &e1);
                out.push(&d.apply(&moved) - &r.mul(&ri, &d.apply(&e1)));
                for e2 in e.basis_elements() {
                    out.push(&act.apply(&ri, &e.mul(&e1, &e2)) - &e.mul(&moved, &e2));
                }
            }
        }
        out
    })?;
    // A2 is quadratic, so keep only a random subset of directions to raise the acceptance rate
    let kept = AffineSpace {
        point: space.point.clone(),
        directions: space.directions.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect(),
    };
    Some(build(&kept.sample(rng, ring)))
}

/// A random pre-crossed module with `dim E, dim R ≤ max_dim`, validated.
pub fn random_precrossed<R: Rng + ?Sized>(ring: Ring, max_dim: usize, rng: &mut R, policy: &Policy) -> PreCrossedModule {
    loop {
        let r = random_algebra("R", "r", ring, max_dim, rng);
        let e = random_algebra("E", "e", ring, max_dim, rng);
        // a zero boundary a quarter of the time, so that L = E is well represented
        let d = if rng.gen_range(0..4) == 0 {
            Some(crate::maps::LinearMap::zero(&e, &r))
        } else {
            (0..20).find_map(|_| random_algebra_map(&e, &r, rng, policy))
        };
        let Some(d) = d else { continue };
        let Some(act) = sample_action(&r, &e, &d, rng) else { continue };
        if let Ok(p) = PreCrossedModule::new("random", &e, &r, d, act, policy) {
            return p;
        }
    }
}

/// A random valid 2-crossed module `ker ∂ → E → R` with `dim E, dim R ≤ max_dim`.
pub fn random_two_crossed<R: Rng + ?Sized>(ring: Ring, max_dim: usize, rng: &mut R, policy: &Policy) -> Arc<TwoCrossedModule> {
    loop {
        let p = random_precrossed(ring, max_dim, rng, policy);
        if let Ok(m) = kernel_two_crossed(&p, policy) {
            return m;
        }
    }
}

/// Random generator images for a derivation or morphism out of `source`.
pub fn random_images<R: Rng + ?Sized>(keys: &[Key], target: &Algebra, rng: &mut R) -> BTreeMap<Key, Element> {
    keys.iter().map(|k| (k.clone(), target.random_element(rng, 2))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_structures_validate() {
        let ring = Ring::Prime(5);
        let policy = Policy::default();
        let mut rng = policy.rng("random-test");
        for _ in 0..5 {
            let m = random_two_crossed(ring, 2, &mut rng, &policy);
            assert!(m.e.dim().unwrap() <= 2 && m.r.dim().unwrap() <= 2);
            assert!(m.audit(&policy).iter().all(|c| c.passed()));
        }
    }
}
