//! Exact linear algebra over the coefficient field.

use std::collections::BTreeMap;

use rand::Rng;

use crate::algebra::{Algebra, Element, Key};
use crate::scalar::{Ring, Scalar};

/// Reduces `rows` (each of length `ncols`) to reduced row echelon form; returns pivot columns.
pub fn rref(rows: &mut Vec<Vec<Scalar>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].inverse().expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..ncols {
                    let d = &f * &rows[r][j];
                    rows[i][j] = &rows[i][j] - &d;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vec<Scalar>], ncols: usize) -> usize {
    rref(&mut rows.to_vec(), ncols).len()
}

/// Basis of `{x : Ax = 0}`.
pub fn nullspace(rows: &[Vec<Scalar>], ncols: usize, ring: Ring) -> Vec<Vec<Scalar>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![ring.zero(); ncols];
            v[f] = ring.one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -&m[i][f];
            }
            v
        })
        .collect()
}

/// Solution set `{point + Σ tᵢ·directionᵢ}` of a linear system.
#[derive(Clone, Debug)]
pub struct AffineSpace {
    pub point: Vec<Scalar>,
    pub directions: Vec<Vec<Scalar>>,
}

impl AffineSpace {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, ring: Ring) -> Vec<Scalar> {
        let mut x = self.point.clone();
        for d in &self.directions {
            let t = ring.random(rng);
            for (xi, di) in x.iter_mut().zip(d) {
                *xi = &*xi + &(&t * di);
            }
        }
        x
    }
}

/// Solves `Ax = b`, `None` when inconsistent.
pub fn solve(rows: &[Vec<Scalar>], rhs: &[Scalar], ncols: usize, ring: Ring) -> Option<AffineSpace> {
    let mut aug: Vec<Vec<Scalar>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut r = r.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut point = vec![ring.zero(); ncols];
    for (i, &p) in pivots.iter().enumerate() {
        point[p] = aug[i][ncols].clone();
    }
    Some(AffineSpace { point, directions: nullspace(rows, ncols, ring) })
}

/// Solves `residual(x) = 0` for a residual that is affine in `x ∈ κⁿ`.
///
/// The system is recovered by probing the residual at zero and at unit vectors.
pub fn solve_affine(ring: Ring, n: usize, residual: impl Fn(&[Scalar]) -> Vec<Element>) -> Option<AffineSpace> {
    let zero = vec![ring.zero(); n];
    let base = flatten(&residual(&zero));
    let columns: Vec<BTreeMap<(usize, Key), Scalar>> = (0..n)
        .map(|k| {
            let mut x = zero.clone();
            x[k] = ring.one();
            flatten(&residual(&x))
        })
        .collect();
    let mut rows_index: Vec<(usize, Key)> = base.keys().cloned().collect();
    for c in &columns {
        rows_index.extend(c.keys().cloned());
    }
    rows_index.sort();
    rows_index.dedup();
    let get = |m: &BTreeMap<(usize, Key), Scalar>, k: &(usize, Key)| m.get(k).cloned().unwrap_or_else(|| ring.zero());
    let rows: Vec<Vec<Scalar>> = rows_index
        .iter()
        .map(|k| columns.iter().map(|c| &get(c, k) - &get(&base, k)).collect())
        .collect();
    let rhs: Vec<Scalar> = rows_index.iter().map(|k| -&get(&base, k)).collect();
    solve(&rows, &rhs, n, ring)
}

fn flatten(values: &[Element]) -> BTreeMap<(usize, Key), Scalar> {
    let mut out = BTreeMap::new();
    for (i, v) in values.iter().enumerate() {
        for (k, c) in v.terms() {
            out.insert((i, k.clone()), c.clone());
        }
    }
    out
}

/// Coordinates in the basis of a finite algebra.
pub fn coords(alg: &Algebra, u: &Element) -> Vec<Scalar> {
    alg.basis().expect("finite algebra").iter().map(|k| u.coeff(k)).collect()
}

pub fn from_coords(alg: &Algebra, x: &[Scalar]) -> Element {
    alg.from_terms(alg.basis().expect("finite algebra").into_iter().zip(x.iter().cloned()))
}

/// A finite algebra written as generated by a subset of its basis.
///
/// `words[w]` is a product of generators (indices into `gens`) and every basis
/// element `i` equals `Σ c · words[w]` for `(w, c)` in `expr[i]`.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub gens: Vec<Key>,
    pub words: Vec<Vec<usize>>,
    pub expr: Vec<Vec<(usize, Scalar)>>,
}

pub fn presentation(alg: &Algebra) -> Presentation {
    let basis = alg.basis().expect("finite algebra");
    let n = basis.len();
    let ring = alg.ring();
    let mut gens: Vec<Key> = Vec::new();
    let mut words: Vec<Vec<usize>> = Vec::new();
    let mut values: Vec<Element> = Vec::new();
    let vecs = |values: &Vec<Element>| values.iter().map(|v| coords(alg, v)).collect::<Vec<_>>();
    for k in &basis {
        let e = alg.from_key(k.clone());
        let mut trial = vecs(&values);
        trial.push(coords(alg, &e));
        if rank(&trial, n) == values.len() {
            continue;
        }
        gens.push(k.clone());
        let gi = gens.len() - 1;
        words.push(vec![gi]);
        values.push(e);
        // close the span under multiplication by generators
        let mut changed = true;
        while changed {
            changed = false;
            for w in 0..words.len() {
                for (g, gk) in gens.iter().enumerate() {
                    let v = alg.mul(&values[w], &alg.from_key(gk.clone()));
                    let mut trial = vecs(&values);
                    trial.push(coords(alg, &v));
                    if rank(&trial, n) > values.len() {
                        let mut word = words[w].clone();
                        word.push(g);
                        words.push(word);
                        values.push(v);
                        changed = true;
                    }
                }
            }
        }
    }
    // express each basis vector through the spanning words
    let m = values.len();
    let columns = vecs(&values);
    let rows: Vec<Vec<Scalar>> = (0..n).map(|i| (0..m).map(|w| columns[w][i].clone()).collect()).collect();
    let expr = (0..n)
        .map(|i| {
            let rhs: Vec<Scalar> = (0..n).map(|j| if i == j { ring.one() } else { ring.zero() }).collect();
            let sol = solve(&rows, &rhs, m, ring).expect("words span the algebra");
            sol.point.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect()
        })
        .collect();
    Presentation { gens, words, expr }
}

impl Presentation {
    /// Basis images of the multiplicative extension of `images` (one per generator),
    /// multiplying with `mul`.
    pub fn extend(&self, images: &[Element], mul: impl Fn(&Element, &Element) -> Element) -> Vec<Element> {
        let word_values: Vec<Element> = self
            .words
            .iter()
            .map(|w| {
                let mut acc = images[w[0]].clone();
                for &g in &w[1..] {
                    acc = mul(&acc, &images[g]);
                }
                acc
            })
            .collect();
        self.expr
            .iter()
            .map(|terms| {
                let mut acc = images.first().map(|i| i.owner().zero()).expect("at least one generator");
                for (w, c) in terms {
                    acc = &acc + &word_values[*w].scale(c);
                }
                acc
            })
            .collect()
    }
}
