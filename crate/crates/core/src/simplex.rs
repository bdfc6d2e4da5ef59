//! The simplex algebras of a 2-crossed module.
//!
//! ```text
//! Λ₀ = R
//! Λ₁ = R ⋉ E                          (r, e)
//! Λ₂ = Λ₁ ⋉• (E ⋉′ L)                  (r, e, e′, l)
//! Λ₃ = Λ₂ ⋉† ((E ⋉′ L) ⋉∗ L)           (r, e, e′, l, e″, l′, l″)
//! ```
//!
//! with faces `dᵢ: Λₙ → Λₙ₋₁` and degeneracies `sᵢ: Λₙ → Λₙ₊₁`.

use std::sync::Arc;

use crate::action::Action;
use crate::algebra::{Algebra, Element};
use crate::crossed::TwoCrossedModule;
use crate::error::{Error, Result};
use crate::report::{first_failure, Check, Report};
use crate::sampling::{cases, differ, run_law, Policy};

/// `(r,e) ▶• (e′,l) = (ee′ + r▶e′, ∂₁(e)▶l + r▶l − {e′⊗e})`.
pub fn bullet_formula(a: &TwoCrossedModule, r: &Element, e: &Element, e1: &Element, l: &Element) -> (Element, Element) {
    let first = &a.e.mul(e, e1) + &a.act_e.apply(r, e1);
    let second = &(&a.act_l.apply(&a.d1.apply(e), l) + &a.act_l.apply(r, l)) - &a.peiffer(e1, e);
    (first, second)
}

/// `(e,l) ▶∗ l′ = e▶′l′ + ll′`.
pub fn star_formula(a: &TwoCrossedModule, e: &Element, l: &Element, l1: &Element) -> Element {
    &a.act_el(e, l1) + &a.l.mul(l, l1)
}

/// `(r,e) ▶¹ (e′,l,l′) = (r▶e′ + ee′, r▶l + ∂₁(e)▶l − {e′⊗e}, r▶l′ + ∂₁(e)▶l′)`.
pub fn one_formula(a: &TwoCrossedModule, r: &Element, e: &Element, y: [&Element; 3]) -> [Element; 3] {
    let [e1, l, l1] = y;
    let de = a.d1.apply(e);
    [
        &a.act_e.apply(r, e1) + &a.e.mul(e, e1),
        &(&a.act_l.apply(r, l) + &a.act_l.apply(&de, l)) - &a.peiffer(e1, e),
        &a.act_l.apply(r, l1) + &a.act_l.apply(&de, l1),
    ]
}

/// `(e,l″) ▶² (e′,l,l′) = (ee′, e▶′l + e′▶′l″ + l″l, ∂₁(e)▶l′ − {∂₂(l)+e′ ⊗ ∂₂(l″)+e})`.
pub fn two_formula(a: &TwoCrossedModule, e: &Element, l2: &Element, y: [&Element; 3]) -> [Element; 3] {
    let [e1, l, l1] = y;
    [
        a.e.mul(e, e1),
        &(&a.act_el(e, l) + &a.act_el(e1, l2)) + &a.l.mul(l2, l),
        &a.act_l.apply(&a.d1.apply(e), l1) - &a.peiffer(&(&a.d2.apply(l) + e1), &(&a.d2.apply(l2) + e)),
    ]
}

/// The five auxiliary actions and the algebras they build.
#[derive(Clone, Debug)]
pub struct Carriers {
    pub lambda1: Algebra,
    /// `E ⋉ L` along `▶′`.
    pub el: Algebra,
    pub bullet: Action,
    pub lambda2: Algebra,
    pub star: Action,
    /// `(E ⋉ L) ⋉ L` along `▶∗`.
    pub ell: Algebra,
    pub one: Action,
    pub two: Action,
    pub dagger: Action,
    pub lambda3: Algebra,
}

impl Carriers {
    pub fn new(a: &TwoCrossedModule) -> Result<Carriers> {
        let lambda1 = Algebra::semidirect(&a.r, &a.e, &a.act_e)?;
        let el = Algebra::semidirect(&a.e, &a.l, &a.act_prime)?;
        let bullet = Action::from_fn(&lambda1, &el, |x, y| {
            let (r, e) = lambda1.split(x);
            let (e1, l) = el.split(y);
            let (u, v) = bullet_formula(a, &r, &e, &e1, &l);
            el.join(&u, &v)
        });
        let lambda2 = Algebra::semidirect(&lambda1, &el, &bullet)?;
        let star = Action::from_fn(&el, &a.l, |x, l1| {
            let (e, l) = el.split(x);
            star_formula(a, &e, &l, l1)
        });
        let ell = Algebra::semidirect(&el, &a.l, &star)?;
        let triple = |y: &Element| {
            let (x, l1) = ell.split(y);
            let (e1, l) = el.split(&x);
            [e1, l, l1]
        };
        let untriple = |v: [Element; 3]| {
            let [e1, l, l1] = v;
            ell.join(&el.join(&e1, &l), &l1)
        };
        let one_value = |x: &Element, y: &Element| {
            let (r, e) = lambda1.split(x);
            let [e1, l, l1] = triple(y);
            untriple(one_formula(a, &r, &e, [&e1, &l, &l1]))
        };
        let two_value = |x: &Element, y: &Element| {
            let (e, l2) = el.split(x);
            let [e1, l, l1] = triple(y);
            untriple(two_formula(a, &e, &l2, [&e1, &l, &l1]))
        };
        let one = Action::from_fn(&lambda1, &ell, one_value);
        let two = Action::from_fn(&el, &ell, two_value);
        let (one_c, two_c) = (one.clone(), two.clone());
        let dagger = Action::from_fn(&lambda2, &ell, |x, y| {
            let (p, q) = lambda2.split(x);
            &one_c.apply(&p, y) + &two_c.apply(&q, y)
        });
        let lambda3 = Algebra::semidirect(&lambda2, &ell, &dagger)?;
        Ok(Carriers { lambda1, el, bullet, lambda2, star, ell, one, two, dagger, lambda3 })
    }

    /// A1/A2 for each auxiliary action, commutativity/associativity of each level,
    /// and agreement of each tabulated action with its defining formula.
    pub fn audit(&self, a: &TwoCrossedModule, policy: &Policy) -> Vec<Check> {
        let mut out = Vec::new();
        for (name, act) in [("▶•", &self.bullet), ("▶∗", &self.star), ("▶¹", &self.one), ("▶²", &self.two), ("▶†", &self.dagger)] {
            for mut c in act.audit(policy) {
                c.name = format!("{name} {}", c.name);
                out.push(c);
            }
        }
        for (name, alg) in [("Λ₁", &self.lambda1), ("Λ₂", &self.lambda2), ("Λ₃", &self.lambda3)] {
            for mut c in alg.certify(policy) {
                c.name = format!("{name} {}", c.name);
                out.push(c);
            }
        }
        out.extend(self.formula_checks(a, policy));
        out
    }

    fn formula_checks(&self, a: &TwoCrossedModule, policy: &Policy) -> Vec<Check> {
        let (l1, el, ell) = (&self.lambda1, &self.el, &self.ell);
        let triple = |y: &Element| {
            let (x, l1) = ell.split(y);
            let (e1, l) = el.split(&x);
            [e1, l, l1]
        };
        let c1 = cases(&[&a.r, &a.e, &a.e, &a.l], policy, "formula:bullet");
        let c2 = cases(&[&a.e, &a.l, &a.l], policy, "formula:star");
        let c3 = cases(&[l1, ell], policy, "formula:one");
        let c4 = cases(&[el, ell], policy, "formula:two");
        let c5 = cases(&[&self.lambda2, ell], policy, "formula:dagger");
        vec![
            run_law("▶• table = formula", "▶•", &c1, |t| {
                let lhs = self.bullet.apply(&l1.join(&t[0], &t[1]), &el.join(&t[2], &t[3]));
                let (u, v) = bullet_formula(a, &t[0], &t[1], &t[2], &t[3]);
                differ(&lhs, &el.join(&u, &v))
            }),
            run_law("▶∗ table = formula", "▶∗", &c2, |t| {
                differ(&self.star.apply(&el.join(&t[0], &t[1]), &t[2]), &star_formula(a, &t[0], &t[1], &t[2]))
            }),
            run_law("▶¹ table = formula", "▶¹", &c3, |t| {
                let (r, e) = l1.split(&t[0]);
                let [x, y, z] = triple(&t[1]);
                let [u, v, w] = one_formula(a, &r, &e, [&x, &y, &z]);
                differ(&self.one.apply(&t[0], &t[1]), &ell.join(&el.join(&u, &v), &w))
            }),
            run_law("▶² table = formula", "▶²", &c4, |t| {
                let (e, l2) = el.split(&t[0]);
                let [x, y, z] = triple(&t[1]);
                let [u, v, w] = two_formula(a, &e, &l2, [&x, &y, &z]);
                differ(&self.two.apply(&t[0], &t[1]), &ell.join(&el.join(&u, &v), &w))
            }),
            run_law("▶† = ▶¹ on (r,e,0,0) plus ▶² on (0,0,e,l)", "▶†", &c5, |t| {
                let (p, q) = self.lambda2.split(&t[0]);
                differ(&self.dagger.apply(&t[0], &t[1]), &(&self.one.apply(&p, &t[1]) + &self.two.apply(&q, &t[1])))
            }),
        ]
    }
}

pub type Operator = Arc<dyn Fn(&Element) -> Element + Send + Sync>;

/// The four levels with their faces and degeneracies.
#[derive(Clone)]
pub struct SimplexTower {
    pub base: Arc<TwoCrossedModule>,
    pub carriers: Carriers,
    /// `levels[n] = Λₙ`.
    pub levels: [Algebra; 4],
}

impl std::fmt::Debug for SimplexTower {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SimplexTower({})", self.base.name)
    }
}

/// Builds the tower and certifies actions, algebras and face/degeneracy maps.
pub fn build_tower(a: &Arc<TwoCrossedModule>, policy: &Policy) -> Result<SimplexTower> {
    let t = SimplexTower::unchecked(a)?;
    first_failure(&t.audit(policy))?;
    Ok(t)
}

impl SimplexTower {
    pub fn unchecked(a: &Arc<TwoCrossedModule>) -> Result<SimplexTower> {
        let carriers = Carriers::new(a)?;
        let levels = [a.r.clone(), carriers.lambda1.clone(), carriers.lambda2.clone(), carriers.lambda3.clone()];
        Ok(SimplexTower { base: a.clone(), carriers, levels })
    }

    pub fn audit(&self, policy: &Policy) -> Vec<Check> {
        let mut out = self.carriers.audit(&self.base, policy);
        out.extend(self.operators().multiplicativity(self, policy));
        out
    }

    pub fn dims(&self) -> Vec<Option<usize>> {
        self.levels.iter().map(|l| l.dim()).collect()
    }

    pub fn pair(&self, r: &Element, e: &Element) -> Element {
        self.carriers.lambda1.join(r, e)
    }

    pub fn unpair(&self, x: &Element) -> [Element; 2] {
        let (r, e) = self.carriers.lambda1.split(x);
        [r, e]
    }

    /// `(r, e, e′, l) ∈ Λ₂`.
    pub fn quad(&self, r: &Element, e: &Element, e1: &Element, l: &Element) -> Element {
        let c = &self.carriers;
        c.lambda2.join(&c.lambda1.join(r, e), &c.el.join(e1, l))
    }

    pub fn unquad(&self, x: &Element) -> [Element; 4] {
        let c = &self.carriers;
        let (p, q) = c.lambda2.split(x);
        let (r, e) = c.lambda1.split(&p);
        let (e1, l) = c.el.split(&q);
        [r, e, e1, l]
    }

    /// `(r, e, e′, l, e″, l′, l″) ∈ Λ₃`.
    pub fn sept(&self, v: [&Element; 7]) -> Element {
        let c = &self.carriers;
        let low = self.quad(v[0], v[1], v[2], v[3]);
        let high = c.ell.join(&c.el.join(v[4], v[5]), v[6]);
        c.lambda3.join(&low, &high)
    }

    pub fn unsept(&self, x: &Element) -> [Element; 7] {
        let c = &self.carriers;
        let (low, high) = c.lambda3.split(x);
        let [r, e, e1, l] = self.unquad(&low);
        let (p, l2) = c.ell.split(&high);
        let (e2, l1) = c.el.split(&p);
        [r, e, e1, l, e2, l1, l2]
    }

    fn check_level(&self, n: usize, i: usize, u: &Element) -> Result<()> {
        if n > 3 || i > n {
            return Err(Error::IndexOutOfRange { level: n, index: i });
        }
        self.levels[n].check_owner(u)
    }

    /// `dᵢ: Λₙ → Λₙ₋₁`.
    pub fn face(&self, n: usize, i: usize, u: &Element) -> Result<Element> {
        if n == 0 {
            return Err(Error::IndexOutOfRange { level: n, index: i });
        }
        self.check_level(n, i, u)?;
        Ok(self.face_formula(n, i, u))
    }

    /// `sᵢ: Λₙ → Λₙ₊₁`.
    pub fn degeneracy(&self, n: usize, i: usize, u: &Element) -> Result<Element> {
        if n >= 3 {
            return Err(Error::IndexOutOfRange { level: n, index: i });
        }
        self.check_level(n, i, u)?;
        Ok(self.degeneracy_formula(n, i, u))
    }

    fn face_formula(&self, n: usize, i: usize, u: &Element) -> Element {
        let a = &self.base;
        match n {
            1 => {
                let [r, e] = self.unpair(u);
                match i {
                    0 => r,
                    _ => &r + &a.d1.apply(&e),
                }
            }
            2 => {
                let [r, e, e1, l] = self.unquad(u);
                match i {
                    0 => self.pair(&r, &e),
                    1 => self.pair(&r, &(&e + &e1)),
                    _ => self.pair(&(&r + &a.d1.apply(&e)), &(&e1 + &a.d2.apply(&l))),
                }
            }
            _ => {
                let [r, e, e1, l, e2, l1, l2] = self.unsept(u);
                match i {
                    0 => self.quad(&r, &e, &e1, &l),
                    1 => self.quad(&r, &e, &(&e1 + &e2), &(&l + &l1)),
                    2 => self.quad(&r, &(&e + &e1), &e2, &(&l1 + &l2)),
                    _ => self.quad(&(&r + &a.d1.apply(&e)), &(&e1 + &a.d2.apply(&l)), &(&e2 + &a.d2.apply(&l1)), &l2),
                }
            }
        }
    }

    fn degeneracy_formula(&self, n: usize, i: usize, u: &Element) -> Element {
        let a = &self.base;
        let (e0, l0) = (a.e.zero(), a.l.zero());
        match n {
            0 => self.pair(u, &e0),
            1 => {
                let [r, e] = self.unpair(u);
                match i {
                    0 => self.quad(&r, &e, &e0, &l0),
                    _ => self.quad(&r, &e0, &e, &l0),
                }
            }
            _ => {
                let [r, e, e1, l] = self.unquad(u);
                match i {
                    0 => self.sept([&r, &e, &e1, &l, &e0, &l0, &l0]),
                    1 => self.sept([&r, &e, &e0, &l0, &e1, &l, &l0]),
                    _ => self.sept([&r, &e0, &e, &l0, &e1, &l0, &l]),
                }
            }
        }
    }

    /// The faces and degeneracies as replaceable operators.
    pub fn operators(&self) -> Operators {
        let faces = (0..4)
            .map(|n| {
                (0..if n == 0 { 0 } else { n + 1 })
                    .map(|i| {
                        let t = self.clone();
                        Arc::new(move |u: &Element| t.face_formula(n, i, u)) as Operator
                    })
                    .collect()
            })
            .collect();
        let degeneracies = (0..4)
            .map(|n| {
                (0..if n == 3 { 0 } else { n + 1 })
                    .map(|i| {
                        let t = self.clone();
                        Arc::new(move |u: &Element| t.degeneracy_formula(n, i, u)) as Operator
                    })
                    .collect()
            })
            .collect();
        Operators { faces, degeneracies }
    }
}

fn sub(n: usize) -> char {
    ['₀', '₁', '₂', '₃', '₄'][n]
}

/// `faces[n][i] = dᵢ: Λₙ → Λₙ₋₁`, `degeneracies[n][i] = sᵢ: Λₙ → Λₙ₊₁`.
#[derive(Clone)]
pub struct Operators {
    pub faces: Vec<Vec<Operator>>,
    pub degeneracies: Vec<Vec<Operator>>,
}

impl Operators {
    pub fn replace_face(&mut self, n: usize, i: usize, f: impl Fn(&Element) -> Element + Send + Sync + 'static) {
        self.faces[n][i] = Arc::new(f);
    }

    fn d(&self, n: usize, i: usize, u: &Element) -> Element {
        self.faces[n][i](u)
    }

    fn s(&self, n: usize, i: usize, u: &Element) -> Element {
        self.degeneracies[n][i](u)
    }

    /// Every face and degeneracy is multiplicative.
    pub fn multiplicativity(&self, t: &SimplexTower, policy: &Policy) -> Vec<Check> {
        let mut out = Vec::new();
        for n in 0..4 {
            let lam = &t.levels[n];
            let pairs = cases(&[lam, lam], policy, &format!("mult:{n}"));
            for i in 0..self.faces[n].len() {
                let target = &t.levels[n - 1];
                out.push(run_law(&format!("d{} on Λ{} multiplicative", sub(i), sub(n)), "hom", &pairs, |p| {
                    differ(&self.d(n, i, &lam.mul(&p[0], &p[1])), &target.mul(&self.d(n, i, &p[0]), &self.d(n, i, &p[1])))
                }));
            }
            for i in 0..self.degeneracies[n].len() {
                let target = &t.levels[n + 1];
                out.push(run_law(&format!("s{} on Λ{} multiplicative", sub(i), sub(n)), "hom", &pairs, |p| {
                    differ(&self.s(n, i, &lam.mul(&p[0], &p[1])), &target.mul(&self.s(n, i, &p[0]), &self.s(n, i, &p[1])))
                }));
            }
        }
        out
    }

    /// The standard simplicial identities at every constructed level.
    pub fn identities(&self, t: &SimplexTower, policy: &Policy) -> Vec<Check> {
        let mut out = Vec::new();
        // dᵢdⱼ = dⱼ₋₁dᵢ (i < j) on Λ₂ and Λ₃
        for n in 2..4 {
            let elems = cases(&[&t.levels[n]], policy, &format!("dd:{n}"));
            for j in 0..=n {
                for i in 0..j {
                    let name = format!("d{}d{} = d{}d{} on Λ{}", sub(i), sub(j), sub(j - 1), sub(i), sub(n));
                    out.push(run_law(&name, "simplicial", &elems, |u| {
                        differ(&self.d(n - 1, i, &self.d(n, j, &u[0])), &self.d(n - 1, j - 1, &self.d(n, i, &u[0])))
                    }));
                }
            }
        }
        // dᵢsⱼ on Λₙ with sⱼ: Λₙ → Λₙ₊₁
        for n in 0..3 {
            let elems = cases(&[&t.levels[n]], policy, &format!("ds:{n}"));
            for j in 0..=n {
                for i in 0..=n + 1 {
                    let (name, rhs): (String, Box<dyn Fn(&Element) -> Element>) = if i < j {
                        (
                            format!("d{}s{} = s{}d{} on Λ{}", sub(i), sub(j), sub(j - 1), sub(i), sub(n)),
                            Box::new(move |u: &Element| self.s(n - 1, j - 1, &self.d(n, i, u))),
                        )
                    } else if i == j || i == j + 1 {
                        (format!("d{}s{} = id on Λ{}", sub(i), sub(j), sub(n)), Box::new(|u: &Element| u.clone()))
                    } else {
                        (
                            format!("d{}s{} = s{}d{} on Λ{}", sub(i), sub(j), sub(j), sub(i - 1), sub(n)),
                            Box::new(move |u: &Element| self.s(n - 1, j, &self.d(n, i - 1, u))),
                        )
                    };
                    out.push(run_law(&name, "simplicial", &elems, |u| {
                        differ(&self.d(n + 1, i, &self.s(n, j, &u[0])), &rhs(&u[0]))
                    }));
                }
            }
        }
        // sᵢsⱼ = sⱼ₊₁sᵢ (i ≤ j) on Λ₀ and Λ₁
        for n in 0..2 {
            let elems = cases(&[&t.levels[n]], policy, &format!("ss:{n}"));
            for j in 0..=n {
                for i in 0..=j {
                    let name = format!("s{}s{} = s{}s{} on Λ{}", sub(i), sub(j), sub(j + 1), sub(i), sub(n));
                    out.push(run_law(&name, "simplicial", &elems, |u| {
                        differ(&self.s(n + 1, i, &self.s(n, j, &u[0])), &self.s(n + 1, j + 1, &self.s(n, i, &u[0])))
                    }));
                }
            }
        }
        out
    }
}

/// Multiplicativity of every face and degeneracy plus the full list of simplicial identities.
pub fn check_simplicial_identities(t: &SimplexTower, policy: &Policy) -> Report {
    check_with_operators(t, &t.operators(), policy)
}

pub fn check_with_operators(t: &SimplexTower, ops: &Operators, policy: &Policy) -> Report {
    let mut report = Report::new("simplicial");
    report.checks.extend(ops.multiplicativity(t, policy));
    report.checks.extend(ops.identities(t, policy));
    report
}
