//! Test-set generation: exhaustive over finite bases, seeded samples otherwise.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{Algebra, Element};

/// Degree bound, sample count and seed for checks over infinite-dimensional algebras.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Policy {
    pub max_degree: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for Policy {
    fn default() -> Self {
        Policy { max_degree: 4, samples: 100, seed: 0 }
    }
}

impl Policy {
    pub fn with_seed(seed: u64) -> Policy {
        Policy { seed, ..Policy::default() }
    }

    /// Deterministic generator for the named check.
    pub fn rng(&self, salt: &str) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ fnv(salt))
    }

    pub fn sampled(&self) -> Coverage {
        Coverage::Sampled { max_degree: self.max_degree, samples: self.samples, seed: self.seed }
    }
}

fn fnv(text: &str) -> u64 {
    text.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
}

/// How thoroughly a law was checked.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum Coverage {
    Exhaustive,
    Sampled { max_degree: usize, samples: usize, seed: u64 },
}

pub struct Cases {
    pub tuples: Vec<Vec<Element>>,
    pub coverage: Coverage,
}

/// Tuples of test elements, one entry per algebra in `algs`.
///
/// When every algebra is finite the full cartesian product of bases is returned.
/// Otherwise the product of probe sets (generators and their pairwise products)
/// is followed by `policy.samples` random tuples of degree at most `policy.max_degree`.
pub fn cases(algs: &[&Algebra], policy: &Policy, salt: &str) -> Cases {
    if algs.iter().all(|a| a.is_finite()) {
        let sets: Vec<Vec<Element>> = algs.iter().map(|a| a.basis_elements()).collect();
        return Cases { tuples: product(&sets), coverage: Coverage::Exhaustive };
    }
    let sets: Vec<Vec<Element>> = algs.iter().map(|a| a.probe_elements()).collect();
    let mut tuples = product(&sets);
    let mut rng = policy.rng(salt);
    for _ in 0..policy.samples {
        tuples.push(algs.iter().map(|a| a.random_element(&mut rng, policy.max_degree)).collect());
    }
    Cases { tuples, coverage: policy.sampled() }
}

fn product(sets: &[Vec<Element>]) -> Vec<Vec<Element>> {
    let mut out: Vec<Vec<Element>> = vec![Vec::new()];
    for set in sets {
        let mut next = Vec::with_capacity(out.len() * set.len());
        for prefix in &out {
            for e in set {
                let mut t = prefix.clone();
                t.push(e.clone());
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// Evaluates `law` on every tuple; `law` returns a description of the mismatch on failure.
pub fn run_law<F>(name: &str, tag: &str, cases: &Cases, law: F) -> crate::report::Check
where
    F: Fn(&[Element]) -> Option<String>,
{
    use crate::report::Check;
    for t in &cases.tuples {
        if let Some(detail) = law(t) {
            let witness = t.iter().map(|e| e.to_string()).collect();
            return Check::fail(name, tag, witness, Some(detail), Some(cases.coverage.clone()));
        }
    }
    Check::pass(name, tag, cases.tuples.len(), Some(cases.coverage.clone()))
}

/// Mismatch description for a two-sided identity, `None` when both sides agree.
pub fn differ(lhs: &Element, rhs: &Element) -> Option<String> {
    (lhs != rhs).then(|| format!("lhs = {lhs}, rhs = {rhs}"))
}
