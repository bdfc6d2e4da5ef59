//! Algebra actions `r▶m`, stored as a table on generator pairs.
//!
//! Acting words act by iterated generator action, `(gg′)▶m = g▶(g′▶m)`, and acted
//! words are reached through `g▶(h·w) = (g▶h)·w`. For a genuine action both rules
//! are forced, so the table determines the action.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::algebra::{Algebra, Element, Key};
use crate::error::Result;
use crate::report::{first_failure, Check};
use crate::sampling::{cases, differ, run_law, Policy};

#[derive(PartialEq)]
struct Data {
    acting: Algebra,
    acted: Algebra,
    table: BTreeMap<(Key, Key), Element>,
}

#[derive(Clone)]
pub struct Action(Arc<Data>);

impl PartialEq for Action {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl fmt::Debug for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Action({} on {})", self.0.acting.name(), self.0.acted.name())
    }
}

impl Action {
    /// Unvalidated action from generator-pair values; missing pairs act by zero.
    pub fn from_table(acting: &Algebra, acted: &Algebra, table: BTreeMap<(Key, Key), Element>) -> Result<Action> {
        let gens_r = acting.generators();
        let gens_m = acted.generators();
        for ((g, h), v) in &table {
            if !gens_r.contains(g) || !gens_m.contains(h) {
                return Err(crate::Error::BadShape(format!(
                    "action entry {} ▶ {} is not on generators",
                    acting.key_label(g),
                    acted.key_label(h)
                )));
            }
            acted.check_owner(v)?;
        }
        let table = table.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(Action(Arc::new(Data { acting: acting.clone(), acted: acted.clone(), table })))
    }

    /// Validated action: fails with the first A1/A2 violation.
    pub fn validated(
        acting: &Algebra,
        acted: &Algebra,
        table: BTreeMap<(Key, Key), Element>,
        policy: &Policy,
    ) -> Result<Action> {
        let a = Action::from_table(acting, acted, table)?;
        first_failure(&a.audit(policy))?;
        Ok(a)
    }

    pub fn zero(acting: &Algebra, acted: &Algebra) -> Action {
        Action(Arc::new(Data { acting: acting.clone(), acted: acted.clone(), table: BTreeMap::new() }))
    }

    /// Tabulates `f` on generator pairs.
    pub fn from_fn(acting: &Algebra, acted: &Algebra, f: impl Fn(&Element, &Element) -> Element) -> Action {
        let mut table = BTreeMap::new();
        for g in acting.generators() {
            let ge = acting.from_key(g.clone());
            for h in acted.generators() {
                let v = f(&ge, &acted.from_key(h.clone()));
                if !v.is_zero() {
                    table.insert((g.clone(), h), v);
                }
            }
        }
        Action(Arc::new(Data { acting: acting.clone(), acted: acted.clone(), table }))
    }

    pub fn acting(&self) -> &Algebra {
        &self.0.acting
    }

    pub fn acted(&self) -> &Algebra {
        &self.0.acted
    }

    pub fn table(&self) -> &BTreeMap<(Key, Key), Element> {
        &self.0.table
    }

    pub fn is_zero(&self) -> bool {
        self.0.table.is_empty()
    }

    /// `r ▶ m`.
    pub fn apply(&self, r: &Element, m: &Element) -> Element {
        let acted = &self.0.acted;
        let mut out = acted.zero();
        if self.0.table.is_empty() || m.is_zero() {
            return out;
        }
        for (rk, rc) in r.terms() {
            let mut v = m.clone();
            for g in self.0.acting.word(rk).iter().rev() {
                v = self.apply_generator(g, &v);
                if v.is_zero() {
                    break;
                }
            }
            out = &out + &v.scale(rc);
        }
        out
    }

    /// Checked `r ▶ m`.
    pub fn act(&self, r: &Element, m: &Element) -> Result<Element> {
        self.0.acting.check_owner(r)?;
        self.0.acted.check_owner(m)?;
        Ok(self.apply(r, m))
    }

    fn apply_generator(&self, g: &Key, m: &Element) -> Element {
        let acted = &self.0.acted;
        let mut out = acted.zero();
        for (mk, c) in m.terms() {
            let (h, rest) = acted.split_first(mk);
            let Some(base) = self.0.table.get(&(g.clone(), h)) else { continue };
            let v = match rest {
                Some(rest) => acted.mul(base, &acted.from_key(rest)),
                None => base.clone(),
            };
            out = &out + &v.scale(c);
        }
        out
    }

    /// A1 and A2 on test tuples; semidirect acting algebras are also checked
    /// through the reduced conditions on pure components.
    pub fn audit(&self, policy: &Policy) -> Vec<Check> {
        let (r, m) = (&self.0.acting, &self.0.acted);
        let salt = format!("{}▶{}", r.name(), m.name());
        let a1 = cases(&[r, m, m], policy, &format!("{salt}:A1"));
        let a2 = cases(&[r, r, m], policy, &format!("{salt}:A2"));
        let mut out = vec![
            run_law("A1", "A1", &a1, |t| differ(&self.apply(&t[0], &m.mul(&t[1], &t[2])), &m.mul(&self.apply(&t[0], &t[1]), &t[2]))),
            run_law("A2", "A2", &a2, |t| self.a2_defect(&t[0], &t[1], &t[2])),
        ];
        if let Some((x, y)) = r.components() {
            let left = |u: &Element| r.inject_left(u);
            let right = |u: &Element| r.inject_right(u);
            let rr = cases(&[x, x, m], policy, &format!("{salt}:RR"));
            let ee = cases(&[y, y, m], policy, &format!("{salt}:EE"));
            let re = cases(&[x, y, m], policy, &format!("{salt}:RE"));
            let add = cases(&[x, y, m], policy, &format!("{salt}:add"));
            out.push(run_law("A2 on (r,0)(r′,0)", "A2", &rr, |t| self.a2_defect(&left(&t[0]), &left(&t[1]), &t[2])));
            out.push(run_law("A2 on (0,e)(0,e′)", "A2", &ee, |t| self.a2_defect(&right(&t[0]), &right(&t[1]), &t[2])));
            out.push(run_law("A2 on (r,0)(0,e′)", "A2", &re, |t| self.a2_defect(&left(&t[0]), &right(&t[1]), &t[2])));
            out.push(run_law("additivity (r,e) = (r,0)+(0,e)", "A2", &add, |t| {
                let whole = r.join(&t[0], &t[1]);
                differ(&self.apply(&whole, &t[2]), &(&self.apply(&left(&t[0]), &t[2]) + &self.apply(&right(&t[1]), &t[2])))
            }));
        }
        out
    }

    fn a2_defect(&self, r1: &Element, r2: &Element, m: &Element) -> Option<String> {
        let r = &self.0.acting;
        differ(&self.apply(&r.mul(r1, r2), m), &self.apply(r1, &self.apply(r2, m)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Ring;

    #[test]
    fn a1_violation_detected() {
        let q = Ring::Rational;
        let r = Algebra::finite_from_products("R", q, &["p"], &[]).unwrap();
        let e = Algebra::finite_from_products("E", q, &["a", "b"], &[("a", "a", &[("b", 1)])]).unwrap();
        let mut table = BTreeMap::new();
        table.insert((Key::Basis(0), Key::Basis(0)), e.from_key(Key::Basis(0)));
        let err = Action::validated(&r, &e, table, &Policy::default()).unwrap_err();
        assert_eq!(err.axiom(), Some("A1"));
        assert_eq!(err.witness().unwrap(), ["p", "a", "a"]);
    }

    #[test]
    fn multiplication_action_on_free_algebra() {
        let q = Ring::Rational;
        let r = Algebra::free("R", q, vec!["x".into(), "y".into()]).unwrap();
        let act = Action::from_fn(&r, &r, |u, v| u * v);
        assert!(act.audit(&Policy::default()).iter().all(|c| c.passed()));
        let x2y = r.parse_element([("x^2*y", q.one())]).unwrap();
        let y = r.parse_element([("y", q.one())]).unwrap();
        assert_eq!(act.apply(&x2y, &y), &x2y * &y);
    }
}
