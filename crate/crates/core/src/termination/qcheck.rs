//! The labelled system `Q`: rule schemas, the bounded LPO check, and label
//! coherence of actual `R` steps.

use std::collections::HashSet;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use super::lpo::lpo_greater;
use super::rsys::{r_step, RRule, RStep};
use super::{label, LabTerm};
use crate::syntax::{var, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum QRule {
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
    Decr1,
    Decr2,
    Decr3,
}

impl QRule {
    pub const ALL: [QRule; 21] = [
        QRule::Abs1,
        QRule::Abs2,
        QRule::Abs3,
        QRule::Abs4,
        QRule::App,
        QRule::ConsVar,
        QRule::New,
        QRule::IdVar,
        QRule::Clos,
        QRule::Ass,
        QRule::IdR,
        QRule::IdShift,
        QRule::ConsShift,
        QRule::Map,
        QRule::Pi1,
        QRule::Pi2,
        QRule::Alpha,
        QRule::Xi,
        QRule::Decr1,
        QRule::Decr2,
        QRule::Decr3,
    ];

    pub fn of(r: RRule) -> QRule {
        match r {
            RRule::Abs1 => QRule::Abs1,
            RRule::Abs2 => QRule::Abs2,
            RRule::Abs3 => QRule::Abs3,
            RRule::Abs4 => QRule::Abs4,
            RRule::App => QRule::App,
            RRule::ConsVar => QRule::ConsVar,
            RRule::New => QRule::New,
            RRule::IdVar => QRule::IdVar,
            RRule::Clos => QRule::Clos,
            RRule::Ass => QRule::Ass,
            RRule::IdR => QRule::IdR,
            RRule::IdShift => QRule::IdShift,
            RRule::ConsShift => QRule::ConsShift,
            RRule::Map => QRule::Map,
            RRule::Pi1 => QRule::Pi1,
            RRule::Pi2 => QRule::Pi2,
            RRule::Alpha => QRule::Alpha,
            RRule::Xi => QRule::Xi,
        }
    }
}

impl fmt::Display for QRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QRule::Alpha => f.write_str("alpha"),
            QRule::Xi => f.write_str("xi"),
            r => fmt::Debug::fmt(r, f),
        }
    }
}

/// The label variables `i`, `j`, `k` of a schema.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct LabelParams {
    pub i: u32,
    pub j: u32,
    pub k: u32,
}

/// What the schema variables `s, q, r, M, N` stand for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaArgs {
    pub s: LabTerm,
    pub q: LabTerm,
    pub r: LabTerm,
    pub m: LabTerm,
    pub n: LabTerm,
}

impl Default for SchemaArgs {
    /// Distinct constants.
    fn default() -> Self {
        SchemaArgs {
            s: LabTerm::meta("s"),
            q: LabTerm::meta("q"),
            r: LabTerm::meta("r"),
            m: LabTerm::meta("M"),
            n: LabTerm::meta("N"),
        }
    }
}

/// `(lhs, rhs)` of a schema instance, or `None` when a side condition fails.
pub fn q_instance(
    rule: QRule,
    p: LabelParams,
    a: &Var,
    b: &Var,
    x: &SchemaArgs,
) -> Option<(LabTerm, LabTerm)> {
    use LabTerm as L;
    let LabelParams { i, j, k } = p;
    let va = || L::Var(a.clone());
    let vb = || L::Var(b.clone());
    let pa = || L::Pi(a.clone());
    // ⟨π_a ∘_k s, a\a⟩ ∘_i M
    let lifted = || {
        L::clos(
            Some(i),
            L::cons(L::comp(Some(k), pa(), x.s.clone()), va(), a),
            x.m.clone(),
        )
    };
    let ok = |c: bool| if c { Some(()) } else { None };
    Some(match rule {
        QRule::Abs1 | QRule::Abs3 => {
            ok(i >= k)?;
            let lhs = L::clos(Some(i + 1), x.s.clone(), L::lam(a, x.m.clone()));
            let rhs = if rule == QRule::Abs1 {
                L::lam(a, lifted())
            } else {
                L::bold(a, Some(i + 1), lifted())
            };
            (lhs, rhs)
        }
        QRule::Abs2 | QRule::Abs4 => {
            ok(i == j + k)?;
            let lhs = L::clos(Some(i + 1), x.s.clone(), L::bold(a, Some(j + 1), x.m.clone()));
            let rhs = if rule == QRule::Abs2 {
                L::bold(a, Some(i + 1), lifted())
            } else {
                L::lam(a, lifted())
            };
            (lhs, rhs)
        }
        QRule::App => {
            ok(i >= j && i >= k)?;
            (
                L::clos(Some(i), x.s.clone(), L::app(x.m.clone(), x.n.clone())),
                L::app(
                    L::clos(Some(j), x.s.clone(), x.m.clone()),
                    L::clos(Some(k), x.s.clone(), x.n.clone()),
                ),
            )
        }
        QRule::ConsVar => (
            L::clos(Some(i), L::cons(x.s.clone(), x.n.clone(), a), va()),
            x.n.clone(),
        ),
        QRule::New => {
            ok(a != b && i >= j)?;
            (
                L::clos(Some(i), L::cons(x.s.clone(), x.n.clone(), a), vb()),
                L::clos(Some(j), x.s.clone(), vb()),
            )
        }
        QRule::IdVar => (L::clos(Some(0), L::Id, va()), va()),
        QRule::Clos => (
            L::clos(
                Some(i + j + k),
                x.s.clone(),
                L::clos(Some(j + k), x.q.clone(), x.m.clone()),
            ),
            L::clos(
                Some(i + j + k),
                L::comp(Some(i + j), x.s.clone(), x.q.clone()),
                x.m.clone(),
            ),
        ),
        QRule::Ass => (
            L::comp(
                Some(i + j + k),
                x.s.clone(),
                L::comp(Some(j + k), x.q.clone(), x.r.clone()),
            ),
            L::comp(
                Some(i + j + k),
                L::comp(Some(i + j), x.s.clone(), x.q.clone()),
                x.r.clone(),
            ),
        ),
        QRule::IdR => (L::comp(Some(i), x.s.clone(), L::Id), x.s.clone()),
        QRule::IdShift => (L::comp(Some(0), L::Id, pa()), pa()),
        QRule::ConsShift => (
            L::comp(Some(i), L::cons(x.s.clone(), x.n.clone(), a), pa()),
            x.s.clone(),
        ),
        QRule::Map => {
            ok(i >= j && i >= k)?;
            (
                L::comp(Some(i), x.s.clone(), L::cons(x.q.clone(), x.n.clone(), a)),
                L::cons(
                    L::comp(Some(j), x.s.clone(), x.q.clone()),
                    L::clos(Some(k), x.s.clone(), x.n.clone()),
                    a,
                ),
            )
        }
        QRule::Pi1 => {
            ok(a != b)?;
            (L::clos(Some(0), pa(), vb()), vb())
        }
        QRule::Pi2 => {
            ok(a != b)?;
            (
                L::clos(Some(i), L::comp(Some(i), x.s.clone(), pa()), vb()),
                L::clos(Some(i), x.s.clone(), vb()),
            )
        }
        QRule::Alpha => (
            L::bold(a, Some(i + 1), x.m.clone()),
            L::lam(
                b,
                L::clos(Some(i), L::cons(L::Pi(b.clone()), vb(), a), x.m.clone()),
            ),
        ),
        QRule::Xi => (
            L::bold(a, Some(i + 1), x.m.clone()),
            L::lam(a, x.m.clone()),
        ),
        QRule::Decr1 => {
            ok(i > j)?;
            (L::bold(a, Some(i), x.m.clone()), L::bold(a, Some(j), x.m.clone()))
        }
        QRule::Decr2 => {
            ok(i > j)?;
            (
                L::clos(Some(i), x.s.clone(), x.m.clone()),
                L::clos(Some(j), x.s.clone(), x.m.clone()),
            )
        }
        QRule::Decr3 => {
            ok(i > j)?;
            (
                L::comp(Some(i), x.s.clone(), x.q.clone()),
                L::comp(Some(j), x.s.clone(), x.q.clone()),
            )
        }
    })
}

fn max_label(t: &LabTerm) -> u32 {
    let own = match t {
        LabTerm::Bold(_, Some(l), _) | LabTerm::Clos(Some(l), ..) | LabTerm::Comp(Some(l), ..) => *l,
        _ => 0,
    };
    t.children()
        .into_iter()
        .map(|(_, c)| max_label(c))
        .fold(own, u32::max)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QFailure {
    pub rule: QRule,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QReport {
    pub rules_checked: usize,
    pub instances: usize,
    pub failures: Vec<QFailure>,
    /// Only labels up to this bound were instantiated.
    pub label_bound: u32,
}

/// Every instance of every schema with labels at most `label_bound` and
/// binder names from `{x, y}`, checked for `lhs >lpo rhs`.
pub fn check_q_decrease(label_bound: u32) -> QReport {
    let names = [var("x"), var("y")];
    let args = SchemaArgs::default();
    let mut seen = HashSet::new();
    let mut instances = Vec::new();
    for rule in QRule::ALL {
        for i in 0..=label_bound {
            for j in 0..=label_bound {
                for k in 0..=label_bound {
                    for a in &names {
                        for b in &names {
                            let p = LabelParams { i, j, k };
                            let Some((lhs, rhs)) = q_instance(rule, p, a, b, &args) else {
                                continue;
                            };
                            if max_label(&lhs).max(max_label(&rhs)) > label_bound {
                                continue;
                            }
                            if seen.insert((lhs.clone(), rhs.clone())) {
                                instances.push((rule, lhs, rhs));
                            }
                        }
                    }
                }
            }
        }
    }
    let failures = instances
        .par_iter()
        .filter(|(_, l, r)| !lpo_greater(l, r))
        .map(|(rule, l, r)| QFailure {
            rule: *rule,
            lhs: l.to_string(),
            rhs: r.to_string(),
        })
        .collect();
    QReport {
        rules_checked: QRule::ALL.len(),
        instances: instances.len(),
        failures,
        label_bound,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoherenceError {
    #[error("`{0}` does not apply")]
    NoStep(RRule),
    #[error("labelled redex `{redex}` is not an instance of the {rule} schema")]
    NotAnInstance { rule: QRule, redex: String },
    #[error("`{from}` does not reach `{to}` by Decr steps")]
    NotDecr { from: String, to: String },
}

fn lab_of(t: &LabTerm) -> Option<u32> {
    match t {
        LabTerm::Bold(_, l, _) | LabTerm::Clos(l, ..) | LabTerm::Comp(l, ..) => *l,
        _ => None,
    }
}

/// Schema parameters read off a labelled redex, free labels taken maximal.
fn read_instance(step: &RStep, t: &LabTerm) -> Option<(LabelParams, Var, Var, SchemaArgs)> {
    use LabTerm as L;
    let mut x = SchemaArgs::default();
    let top = lab_of(t).unwrap_or(0);
    let mut p = LabelParams { i: top, j: top, k: top };
    let (a, b);
    match (step.rule, t) {
        (RRule::Abs1 | RRule::Abs3 | RRule::Abs2 | RRule::Abs4, L::Clos(_, s, l)) => {
            let i = top.checked_sub(1)?;
            x.s = (**s).clone();
            match &**l {
                L::Lam(v, m) => {
                    a = v.clone();
                    x.m = (**m).clone();
                    p = LabelParams { i, j: 0, k: i };
                }
                L::Bold(v, Some(jl), m) => {
                    a = v.clone();
                    x.m = (**m).clone();
                    let j = jl.checked_sub(1)?;
                    p = LabelParams { i, j, k: i.checked_sub(j)? };
                }
                _ => return None,
            }
            b = a.clone();
        }
        (RRule::App, L::Clos(_, s, body)) => {
            let L::App(m, n) = &**body else { return None };
            x.s = (**s).clone();
            x.m = (**m).clone();
            x.n = (**n).clone();
            a = var("x");
            b = a.clone();
        }
        (RRule::ConsVar | RRule::New, L::Clos(_, c, v)) => {
            let (L::Cons(s, n, av), L::Var(bv)) = (&**c, &**v) else { return None };
            x.s = (**s).clone();
            x.n = (**n).clone();
            a = av.clone();
            b = bv.clone();
        }
        (RRule::IdVar, L::Clos(_, _, v)) => {
            let L::Var(av) = &**v else { return None };
            a = av.clone();
            b = a.clone();
        }
        (RRule::Clos, L::Clos(_, s, inner)) | (RRule::Ass, L::Comp(_, s, inner)) => {
            let inner_l = lab_of(inner)?;
            let (q, m) = match &**inner {
                L::Clos(_, q, m) | L::Comp(_, q, m) => (q, m),
                _ => return None,
            };
            x.s = (**s).clone();
            x.q = (**q).clone();
            if step.rule == RRule::Clos {
                x.m = (**m).clone();
            } else {
                x.r = (**m).clone();
            }
            p = LabelParams { i: top.checked_sub(inner_l)?, j: inner_l, k: 0 };
            a = var("x");
            b = a.clone();
        }
        (RRule::IdR, L::Comp(_, s, _)) => {
            x.s = (**s).clone();
            a = var("x");
            b = a.clone();
        }
        (RRule::IdShift, L::Comp(_, _, pi)) => {
            let L::Pi(av) = &**pi else { return None };
            a = av.clone();
            b = a.clone();
        }
        (RRule::ConsShift, L::Comp(_, c, _)) => {
            let L::Cons(s, n, av) = &**c else { return None };
            x.s = (**s).clone();
            x.n = (**n).clone();
            a = av.clone();
            b = a.clone();
        }
        (RRule::Map, L::Comp(_, s, c)) => {
            let L::Cons(q, n, av) = &**c else { return None };
            x.s = (**s).clone();
            x.q = (**q).clone();
            x.n = (**n).clone();
            a = av.clone();
            b = a.clone();
        }
        (RRule::Pi1, L::Clos(_, pi, v)) => {
            let (L::Pi(av), L::Var(bv)) = (&**pi, &**v) else { return None };
            a = av.clone();
            b = bv.clone();
        }
        (RRule::Pi2, L::Clos(_, c, v)) => {
            let (L::Comp(_, s, pi), L::Var(bv)) = (&**c, &**v) else { return None };
            let L::Pi(av) = &**pi else { return None };
            x.s = (**s).clone();
            a = av.clone();
            b = bv.clone();
        }
        (RRule::Alpha | RRule::Xi, L::Bold(av, _, m)) => {
            x.m = (**m).clone();
            p.i = top.checked_sub(1)?;
            a = av.clone();
            b = step.fresh.clone().unwrap_or_else(|| a.clone());
        }
        _ => return None,
    }
    Some((p, a, b, x))
}

/// `u →Decr* v`: equal up to labels, each label of `u` at least that of `v`.
fn decr_reaches(u: &LabTerm, v: &LabTerm) -> bool {
    use LabTerm as L;
    let labels_ok = match (u, v) {
        (L::Bold(a, Some(i), _), L::Bold(b, Some(j), _)) => a == b && i >= j,
        (L::Clos(Some(i), ..), L::Clos(Some(j), ..)) | (L::Comp(Some(i), ..), L::Comp(Some(j), ..)) => {
            i >= j
        }
        (L::Var(a), L::Var(b)) | (L::Pi(a), L::Pi(b)) | (L::Lam(a, _), L::Lam(b, _)) => a == b,
        (L::Cons(_, _, a), L::Cons(_, _, b)) => a == b,
        (L::Id, L::Id) | (L::App(..), L::App(..)) => true,
        (L::Meta(a), L::Meta(b)) => a == b,
        _ => false,
    };
    labels_ok
        && u.children()
            .into_iter()
            .zip(v.children())
            .all(|((_, x), (_, y))| decr_reaches(x, y))
}

/// For an `R` step `t1 → t2`: `label(t1)` rewrites by the matching `Q` rule
/// to a term that reaches `label(t2)` by `Decr` steps.
pub fn check_label_coherence(t1: &LabTerm, step: &RStep) -> Result<(), CoherenceError> {
    let t2 = r_step(t1, step).ok_or(CoherenceError::NoStep(step.rule))?;
    let l1 = label(t1);
    let l2 = label(&t2);
    let rule = QRule::of(step.rule);
    let redex = l1.at(&step.position).ok_or(CoherenceError::NoStep(step.rule))?;
    let not_instance = || CoherenceError::NotAnInstance {
        rule,
        redex: redex.to_string(),
    };
    let (p, a, b, args) = read_instance(step, redex).ok_or_else(not_instance)?;
    let (lhs, rhs) = q_instance(rule, p, &a, &b, &args).ok_or_else(not_instance)?;
    if &lhs != redex {
        return Err(not_instance());
    }
    let u = l1
        .replace(&step.position, &mut |_| Some(rhs.clone()))
        .expect("position exists");
    if !decr_reaches(&u, &l2) {
        return Err(CoherenceError::NotDecr {
            from: u.to_string(),
            to: l2.to_string(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::super::lpo::{lpo_greater_with, CompStatus};
    use super::super::star;
    use super::*;
    use crate::syntax::parse_term;

    fn inst(rule: QRule, i: u32, j: u32, k: u32) -> (LabTerm, LabTerm) {
        q_instance(rule, LabelParams { i, j, k }, &var("x"), &var("y"), &SchemaArgs::default()).unwrap()
    }

    #[test]
    fn xi_at_zero() {
        let (l, r) = inst(QRule::Xi, 0, 0, 0);
        assert_eq!(l.to_string(), "LAM_1 x. M");
        assert!(lpo_greater(&l, &r));
    }

    #[test]
    fn clos_one_one_one() {
        let (l, r) = inst(QRule::Clos, 1, 1, 1);
        assert_eq!(l.to_string(), "s *_3 q *_2 M");
        assert_eq!(r.to_string(), "(s *_2 q) *_3 M");
        assert!(lpo_greater(&l, &r));
    }

    #[test]
    fn left_to_right_status_fails_on_clos() {
        let (l, r) = inst(QRule::Clos, 0, 1, 0);
        assert!(lpo_greater_with(&l, &r, CompStatus::RightToLeft));
        assert!(!lpo_greater_with(&l, &r, CompStatus::LeftToRight));
    }

    #[test]
    fn bounded_check() {
        for b in 1..=3 {
            let rep = check_q_decrease(b);
            assert_eq!(rep.rules_checked, 21);
            assert!(rep.failures.is_empty(), "{:?}", rep.failures);
        }
    }

    #[test]
    fn coherence_on_small_examples() {
        let t = star(&parse_term("id * lam x. pi_x * x").unwrap());
        let step = RStep { rule: RRule::Abs2, position: vec![], fresh: None };
        check_label_coherence(&t, &step).unwrap();
        let t = star(&parse_term("lam x. <id, pi_x * x/x> * y").unwrap());
        let step = RStep {
            rule: RRule::New,
            position: vec![crate::syntax::Selector::LamBody],
            fresh: None,
        };
        check_label_coherence(&t, &step).unwrap();
    }
}
