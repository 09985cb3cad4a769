//! Mirroring `σπα` steps on terms as `R` steps on marked terms.

use super::rsys::{r_step, RRule, RStep};
use super::{star, LabTerm};
use crate::rewrite::{step_expr, Expr, Redex, RuleName};
use crate::syntax::{Selector, Term};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EmbedError {
    #[error("`{0}` has no counterpart in R")]
    UnsupportedRule(RuleName),
    #[error("the redex does not contract in `{0}`")]
    NoStep(String),
    #[error("no R derivation from `{from}` to `{to}`")]
    NoEmbedding { from: String, to: String },
}

fn direct(rule: RuleName) -> Option<RRule> {
    Some(match rule {
        RuleName::App => RRule::App,
        RuleName::ConsVar => RRule::ConsVar,
        RuleName::New => RRule::New,
        RuleName::IdVar => RRule::IdVar,
        RuleName::Clos => RRule::Clos,
        RuleName::Ass => RRule::Ass,
        RuleName::IdR => RRule::IdR,
        RuleName::IdShift => RRule::IdShift,
        RuleName::ConsShift => RRule::ConsShift,
        RuleName::Map => RRule::Map,
        RuleName::Pi1 => RRule::Pi1,
        RuleName::Pi2 => RRule::Pi2,
        RuleName::Alpha1 => RRule::Alpha,
        _ => return None,
    })
}

/// Bold `λ`s of `t` that are plain at the same place in `target`.
fn paled(t: &LabTerm, target: &LabTerm) -> Vec<Vec<Selector>> {
    t.positions()
        .into_iter()
        .filter(|p| {
            matches!(t.at(p), Some(LabTerm::Bold(..))) && matches!(target.at(p), Some(LabTerm::Lam(..)))
        })
        .collect()
}

/// An `R` derivation `m1* ↠ m2*` for the `σπα` step `m1 → m2` at `redex`:
/// the step of the same name (an `Abs` variant chosen by the marks on both
/// sides), then `ξ` wherever a mark has gone.
pub fn embed_step(m1: &Term, m2: &Term, redex: &Redex) -> Result<Vec<RStep>, EmbedError> {
    let from = star(m1);
    let to = star(m2);
    let no_embedding = || EmbedError::NoEmbedding {
        from: from.to_string(),
        to: to.to_string(),
    };
    let rule = match redex.rule {
        RuleName::Abs => {
            let before = matches!(
                from.at(&redex.position),
                Some(LabTerm::Clos(_, _, l)) if matches!(**l, LabTerm::Bold(..))
            );
            let after = matches!(to.at(&redex.position), Some(LabTerm::Bold(..)));
            match (before, after) {
                (false, false) => RRule::Abs1,
                (true, true) => RRule::Abs2,
                (false, true) => RRule::Abs3,
                (true, false) => RRule::Abs4,
            }
        }
        r => direct(r).ok_or(EmbedError::UnsupportedRule(r))?,
    };
    let first = RStep {
        rule,
        position: redex.position.clone(),
        fresh: redex.fresh.clone(),
    };
    let mut cur = r_step(&from, &first).ok_or_else(|| EmbedError::NoStep(from.to_string()))?;
    let mut steps = vec![first];
    // Each ξ removes one mark, so the number of marks bounds the search.
    for p in paled(&cur, &to) {
        let xi = RStep {
            rule: RRule::Xi,
            position: p,
            fresh: None,
        };
        cur = r_step(&cur, &xi).ok_or_else(no_embedding)?;
        steps.push(xi);
    }
    if cur != to {
        return Err(no_embedding());
    }
    // The σπα step itself must agree with the erasure.
    let check = step_expr(&Expr::Term(m1.clone()), redex).map_err(|_| no_embedding())?;
    if check != Expr::Term(m2.clone()) {
        return Err(no_embedding());
    }
    Ok(steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_term, var};

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn names(v: &[RStep]) -> Vec<String> {
        v.iter().map(|s| s.rule.to_string()).collect()
    }

    fn redex(rule: RuleName, position: Vec<Selector>, fresh: Option<&str>) -> Redex {
        Redex {
            position,
            rule,
            fresh: fresh.map(var),
        }
    }

    #[test]
    fn new_then_xi() {
        let r = redex(RuleName::New, vec![Selector::LamBody], None);
        let steps = embed_step(&t("lam x. <id, pi_x * x/x> * y"), &t("lam x. id * y"), &r).unwrap();
        assert_eq!(names(&steps), ["New", "xi"]);
    }

    #[test]
    fn abs_subcases() {
        let r = redex(RuleName::Abs, vec![], None);
        let cases = [
            ("id * lam x. x", "lam x. <pi_x * id, x/x> * x", "Abs1"),
            ("id * lam x. pi_x * x", "lam x. <pi_x * id, x/x> * pi_x * x", "Abs2"),
            ("<id, x/y> * lam x. x", "lam x. <pi_x * <id, x/y>, x/x> * x", "Abs3"),
            (
                "<id, lam y. y/x> * lam x. pi_x * x",
                "lam x. <pi_x * <id, lam y. y/x>, x/x> * pi_x * x",
                "Abs4",
            ),
        ];
        for (a, b, want) in cases {
            let steps = embed_step(&t(a), &t(b), &r).unwrap();
            assert_eq!(names(&steps), [want], "{a}");
        }
    }

    #[test]
    fn alpha() {
        let r = redex(RuleName::Alpha1, vec![], Some("y"));
        let steps = embed_step(&t("lam x. pi_x * x"), &t("lam y. <pi_y, y/x> * pi_x * x"), &r).unwrap();
        assert_eq!(names(&steps), ["alpha"]);
    }
}
