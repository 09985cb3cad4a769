//! The marked rewriting system `R`.

use std::fmt;

use serde::Serialize;

use super::LabTerm;
use crate::syntax::{Selector, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RRule {
    Abs1,
    Abs2,
    Abs3,
    Abs4,
    App,
    ConsVar,
    New,
    IdVar,
    Clos,
    Ass,
    IdR,
    IdShift,
    ConsShift,
    Map,
    Pi1,
    Pi2,
    Alpha,
    Xi,
}

impl RRule {
    pub const ALL: [RRule; 18] = [
        RRule::Abs1,
        RRule::Abs2,
        RRule::Abs3,
        RRule::Abs4,
        RRule::App,
        RRule::ConsVar,
        RRule::New,
        RRule::IdVar,
        RRule::Clos,
        RRule::Ass,
        RRule::IdR,
        RRule::IdShift,
        RRule::ConsShift,
        RRule::Map,
        RRule::Pi1,
        RRule::Pi2,
        RRule::Alpha,
        RRule::Xi,
    ];
}

impl fmt::Display for RRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RRule::Alpha => f.write_str("alpha"),
            RRule::Xi => f.write_str("xi"),
            r => fmt::Debug::fmt(r, f),
        }
    }
}

/// One step of `R`; `fresh` is the new binder of `α`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct RStep {
    pub rule: RRule,
    pub position: Vec<Selector>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fresh: Option<Var>,
}

/// `⟨π_a∘s, a\a⟩∘M`
fn lifted_body(s: &LabTerm, a: &Var, m: &LabTerm) -> LabTerm {
    LabTerm::clos(
        None,
        LabTerm::cons(LabTerm::comp(None, LabTerm::Pi(a.clone()), s.clone()), LabTerm::Var(a.clone()), a),
        m.clone(),
    )
}

/// The contractum of `rule` at the root of `t`, or `None` if it does not match.
pub fn contract(t: &LabTerm, rule: RRule, fresh: Option<&Var>) -> Option<LabTerm> {
    use LabTerm as L;
    Some(match (rule, t) {
        (RRule::Abs1, L::Clos(_, s, l)) => match &**l {
            L::Lam(a, m) => L::lam(a, lifted_body(s, a, m)),
            _ => return None,
        },
        (RRule::Abs2, L::Clos(_, s, l)) => match &**l {
            L::Bold(a, _, m) => L::bold(a, None, lifted_body(s, a, m)),
            _ => return None,
        },
        (RRule::Abs3, L::Clos(_, s, l)) => match &**l {
            L::Lam(a, m) => L::bold(a, None, lifted_body(s, a, m)),
            _ => return None,
        },
        (RRule::Abs4, L::Clos(_, s, l)) => match &**l {
            L::Bold(a, _, m) => L::lam(a, lifted_body(s, a, m)),
            _ => return None,
        },
        (RRule::App, L::Clos(_, s, b)) => match &**b {
            L::App(m, n) => L::app(
                L::clos(None, (**s).clone(), (**m).clone()),
                L::clos(None, (**s).clone(), (**n).clone()),
            ),
            _ => return None,
        },
        (RRule::ConsVar, L::Clos(_, c, b)) => match (&**c, &**b) {
            (L::Cons(_, n, a), L::Var(v)) if a == v => (**n).clone(),
            _ => return None,
        },
        (RRule::New, L::Clos(_, c, b)) => match (&**c, &**b) {
            (L::Cons(s, _, a), L::Var(v)) if a != v => L::clos(None, (**s).clone(), (**b).clone()),
            _ => return None,
        },
        (RRule::IdVar, L::Clos(_, s, b)) => match (&**s, &**b) {
            (L::Id, L::Var(_)) => (**b).clone(),
            _ => return None,
        },
        (RRule::Clos, L::Clos(_, s, b)) => match &**b {
            L::Clos(_, q, m) => L::clos(None, L::comp(None, (**s).clone(), (**q).clone()), (**m).clone()),
            _ => return None,
        },
        (RRule::Ass, L::Comp(_, s, b)) => match &**b {
            L::Comp(_, q, r) => L::comp(None, L::comp(None, (**s).clone(), (**q).clone()), (**r).clone()),
            _ => return None,
        },
        (RRule::IdR, L::Comp(_, s, r)) if **r == L::Id => (**s).clone(),
        (RRule::IdShift, L::Comp(_, s, r)) => match (&**s, &**r) {
            (L::Id, L::Pi(_)) => (**r).clone(),
            _ => return None,
        },
        (RRule::ConsShift, L::Comp(_, c, r)) => match (&**c, &**r) {
            (L::Cons(s, _, a), L::Pi(b)) if a == b => (**s).clone(),
            _ => return None,
        },
        (RRule::Map, L::Comp(_, s, c)) => match &**c {
            L::Cons(q, n, a) => L::cons(
                L::comp(None, (**s).clone(), (**q).clone()),
                L::clos(None, (**s).clone(), (**n).clone()),
                a,
            ),
            _ => return None,
        },
        (RRule::Pi1, L::Clos(_, p, b)) => match (&**p, &**b) {
            (L::Pi(a), L::Var(v)) if a != v => (**b).clone(),
            _ => return None,
        },
        (RRule::Pi2, L::Clos(_, c, b)) => match (&**c, &**b) {
            (L::Comp(_, s, p), L::Var(v)) => match &**p {
                L::Pi(a) if a != v => L::clos(None, (**s).clone(), (**b).clone()),
                _ => return None,
            },
            _ => return None,
        },
        (RRule::Alpha, L::Bold(a, _, m)) => {
            let b = fresh?;
            L::lam(
                b,
                L::clos(
                    None,
                    L::cons(L::Pi(b.clone()), L::Var(b.clone()), a),
                    (**m).clone(),
                ),
            )
        }
        (RRule::Xi, L::Bold(a, _, m)) => L::lam(a, (**m).clone()),
        _ => return None,
    })
}

/// Applies one `R` step.
pub fn r_step(t: &LabTerm, step: &RStep) -> Option<LabTerm> {
    t.replace(&step.position, &mut |x| contract(x, step.rule, step.fresh.as_ref()))
}

/// Every `R` redex of `t`; `α` uses `fresh` as the new binder.
pub fn r_redexes(t: &LabTerm, fresh: &Var) -> Vec<RStep> {
    let mut out = Vec::new();
    for position in t.positions() {
        let node = t.at(&position).expect("own position");
        for rule in RRule::ALL {
            let f = (rule == RRule::Alpha).then(|| fresh.clone());
            if contract(node, rule, f.as_ref()).is_some() {
                out.push(RStep {
                    rule,
                    position: position.clone(),
                    fresh: f,
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::star;
    use super::*;
    use crate::syntax::{parse_term, var};

    fn st(s: &str) -> LabTerm {
        star(&parse_term(s).unwrap())
    }

    #[test]
    fn alpha_renames() {
        let t = st("lam x. pi_x * x");
        let r = contract(&t, RRule::Alpha, Some(&var("y"))).unwrap();
        assert_eq!(r.to_string(), "lam y. <pi_y, y/x> * pi_x * x");
    }

    #[test]
    fn xi_pales() {
        let t = LabTerm::bold(&var("x"), None, st("id * y"));
        assert_eq!(contract(&t, RRule::Xi, None).unwrap().to_string(), "lam x. id * y");
    }

    #[test]
    fn abs1() {
        let t = st("id * lam x. x");
        assert_eq!(
            contract(&t, RRule::Abs1, None).unwrap().to_string(),
            "lam x. <pi_x * id, x/x> * x"
        );
        assert!(contract(&t, RRule::Abs2, None).is_none());
    }

    #[test]
    fn side_conditions() {
        assert!(contract(&st("pi_x * x"), RRule::Pi1, None).is_none());
        assert!(contract(&st("pi_x * y"), RRule::Pi1, None).is_some());
        assert!(contract(&st("<id, y/x> * x"), RRule::New, None).is_none());
        assert!(contract(&st("(id * pi_x) * x"), RRule::Pi2, None).is_none());
    }

    #[test]
    fn positions_are_paths() {
        let t = st("lam z. id * (pi_x * y)");
        let rs = r_redexes(&t, &var("z"));
        let names: Vec<String> = rs.iter().map(|r| r.rule.to_string()).collect();
        assert_eq!(names, ["Clos", "Pi1"]);
        let out = r_step(&t, &rs[0]).unwrap();
        assert_eq!(out.to_string(), "lam z. (id * pi_x) * y");
    }
}
