//! Derivability of judgements.
//!
//! Every judgement shape is the conclusion of at most one rule (for a variable,
//! the last context entry decides between (i) and (ii)), so checking is a
//! single bottom-up pass and the derivation it builds is the only one.

use std::fmt;

use serde::Serialize;

use crate::syntax::{Context, Judgement, Selector, Subst, Term, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Rule {
    /// `Γ,a ⊢ a`
    I,
    /// `Γ ⊢ a` gives `Γ,b ⊢ a` for `a ≠ b`
    II,
    /// application
    III,
    /// abstraction
    IV,
    /// closure `s∘M`
    V,
    /// `Γ ⊢ id ▷ Γ`
    VI,
    /// `Γ,a ⊢ π_a ▷ Γ`
    VII,
    /// cons
    VIII,
    /// composition
    IX,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::I => "(i)",
            Rule::II => "(ii)",
            Rule::III => "(iii)",
            Rule::IV => "(iv)",
            Rule::V => "(v)",
            Rule::VI => "(vi)",
            Rule::VII => "(vii)",
            Rule::VIII => "(viii)",
            Rule::IX => "(ix)",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub conclusion: Judgement,
    pub rule: Rule,
    pub premises: Vec<Derivation>,
}

impl Derivation {
    /// Codomain, for substitution derivations.
    pub fn codomain(&self) -> Option<&Context> {
        match &self.conclusion {
            Judgement::Subst(_, _, d) => Some(d),
            Judgement::Term(..) => None,
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.premises.iter().map(Derivation::node_count).sum::<usize>()
    }

    /// Pre-order walk.
    pub fn visit(&self, f: &mut impl FnMut(&Derivation)) {
        f(self);
        for p in &self.premises {
            p.visit(f);
        }
    }

    fn render(&self, depth: usize, out: &mut String) {
        use std::fmt::Write;
        let _ = writeln!(out, "{:indent$}{} {}", "", self.rule, self.conclusion, indent = depth * 2);
        for p in &self.premises {
            p.render(depth + 1, out);
        }
    }
}

impl fmt::Display for Derivation {
    /// Indented tree, conclusion first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.render(0, &mut s);
        f.write_str(s.trim_end())
    }
}

/// Why a judgement has no derivation.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not derivable at [{}]: {reason} (in `{at}`)", path.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(", "))]
pub struct NotDerivable {
    /// From the root of the judgement to the offending subexpression.
    pub path: Vec<Selector>,
    /// The premise that failed.
    pub at: Box<Judgement>,
    pub reason: String,
}

fn fail(path: &[Selector], at: Judgement, reason: String) -> NotDerivable {
    NotDerivable {
        path: path.to_vec(),
        at: Box::new(at),
        reason,
    }
}

struct Walk {
    path: Vec<Selector>,
}

impl Walk {
    fn under<T>(&mut self, sel: Selector, f: impl FnOnce(&mut Walk) -> T) -> T {
        self.path.push(sel);
        let r = f(self);
        self.path.pop();
        r
    }

    fn term(&mut self, ctx: &Context, m: &Term) -> Result<Derivation, NotDerivable> {
        let conclusion = Judgement::Term(ctx.clone(), m.clone());
        match m {
            Term::Var(a) => self.variable(ctx, a),
            Term::App(f, n) => {
                let d1 = self.under(Selector::AppFun, |w| w.term(ctx, f))?;
                let d2 = self.under(Selector::AppArg, |w| w.term(ctx, n))?;
                Ok(Derivation {
                    conclusion,
                    rule: Rule::III,
                    premises: vec![d1, d2],
                })
            }
            Term::Lam(a, body) => {
                let d = self.under(Selector::LamBody, |w| w.term(&ctx.extended(a), body))?;
                Ok(Derivation {
                    conclusion,
                    rule: Rule::IV,
                    premises: vec![d],
                })
            }
            Term::Clos(s, body) => {
                let ds = self.under(Selector::ClosSub, |w| w.subst(ctx, s))?;
                let delta = ds.codomain().expect("substitution derivation").clone();
                let dm = self.under(Selector::ClosTerm, |w| w.term(&delta, body))?;
                Ok(Derivation {
                    conclusion,
                    rule: Rule::V,
                    premises: vec![ds, dm],
                })
            }
        }
    }

    fn variable(&mut self, ctx: &Context, a: &Var) -> Result<Derivation, NotDerivable> {
        let conclusion = Judgement::Term(ctx.clone(), Term::Var(a.clone()));
        let Some((init, last)) = ctx.split_last() else {
            return Err(fail(
                &self.path,
                conclusion,
                format!("variable `{a}` does not occur in the context"),
            ));
        };
        if last == a {
            return Ok(Derivation {
                conclusion,
                rule: Rule::I,
                premises: vec![],
            });
        }
        let d = self.variable(&init, a)?;
        Ok(Derivation {
            conclusion,
            rule: Rule::II,
            premises: vec![d],
        })
    }

    fn subst(&mut self, ctx: &Context, s: &Subst) -> Result<Derivation, NotDerivable> {
        match s {
            Subst::Id => Ok(Derivation {
                conclusion: Judgement::Subst(ctx.clone(), Subst::Id, ctx.clone()),
                rule: Rule::VI,
                premises: vec![],
            }),
            Subst::Pi(a) => match ctx.split_last() {
                Some((init, last)) if last == a => Ok(Derivation {
                    conclusion: Judgement::Subst(ctx.clone(), s.clone(), init),
                    rule: Rule::VII,
                    premises: vec![],
                }),
                _ => Err(fail(
                    &self.path,
                    Judgement::Subst(ctx.clone(), s.clone(), Context::empty()),
                    format!("pi_{a} needs a context ending in `{a}`, got `{ctx}`"),
                )),
            },
            Subst::Cons(rest, n, a) => {
                let d1 = self.under(Selector::ConsSub, |w| w.subst(ctx, rest))?;
                let d2 = self.under(Selector::ConsTerm, |w| w.term(ctx, n))?;
                let cod = d1.codomain().expect("substitution derivation").extended(a);
                Ok(Derivation {
                    conclusion: Judgement::Subst(ctx.clone(), s.clone(), cod),
                    rule: Rule::VIII,
                    premises: vec![d1, d2],
                })
            }
            Subst::Comp(l, r) => {
                let d1 = self.under(Selector::CompLeft, |w| w.subst(ctx, l))?;
                let mid = d1.codomain().expect("substitution derivation").clone();
                let d2 = self.under(Selector::CompRight, |w| w.subst(&mid, r))?;
                let cod = d2.codomain().expect("substitution derivation").clone();
                Ok(Derivation {
                    conclusion: Judgement::Subst(ctx.clone(), s.clone(), cod),
                    rule: Rule::IX,
                    premises: vec![d1, d2],
                })
            }
        }
    }
}

/// The unique derivation of `j`, or the first failure met bottom-up.
pub fn derive(j: &Judgement) -> Result<Derivation, NotDerivable> {
    let mut w = Walk { path: Vec::new() };
    match j {
        Judgement::Term(g, m) => w.term(g, m),
        Judgement::Subst(g, s, d) => {
            let der = w.subst(g, s)?;
            let got = der.codomain().expect("substitution derivation");
            if got != d {
                return Err(fail(
                    &[],
                    j.clone(),
                    format!("codomain is `{got}`, not `{d}`"),
                ));
            }
            Ok(der)
        }
    }
}

pub fn is_derivable(j: &Judgement) -> bool {
    derive(j).is_ok()
}

/// The unique `Δ` with `Γ ⊢ s ▷ Δ`.
pub fn infer_codomain(ctx: &Context, s: &Subst) -> Result<Context, NotDerivable> {
    let mut w = Walk { path: Vec::new() };
    let d = w.subst(ctx, s)?;
    Ok(d.codomain().expect("substitution derivation").clone())
}

/// `λΓ.M`, with `λ(Σ,a).M = λΣ.(λa.M)`.
pub fn lambda_closure(ctx: &Context, m: &Term) -> Term {
    ctx.iter()
        .rev()
        .fold(m.clone(), |acc, a| Term::Lam(a.clone(), Box::new(acc)))
}

/// Rules whose conclusion has the shape of `j`, ignoring premises.
pub fn shape_rules(j: &Judgement) -> Vec<Rule> {
    match j {
        Judgement::Term(g, Term::Var(a)) => {
            let mut out = Vec::new();
            if let Some(last) = g.last() {
                if last == a {
                    out.push(Rule::I);
                } else {
                    out.push(Rule::II);
                }
            }
            out
        }
        Judgement::Term(_, Term::App(..)) => vec![Rule::III],
        Judgement::Term(_, Term::Lam(..)) => vec![Rule::IV],
        Judgement::Term(_, Term::Clos(..)) => vec![Rule::V],
        Judgement::Subst(g, Subst::Id, d) => {
            if g == d {
                vec![Rule::VI]
            } else {
                vec![]
            }
        }
        Judgement::Subst(g, Subst::Pi(a), d) => match g.split_last() {
            Some((init, last)) if last == a && &init == d => vec![Rule::VII],
            _ => vec![],
        },
        Judgement::Subst(_, Subst::Cons(_, _, a), d) => {
            if d.last() == Some(a) {
                vec![Rule::VIII]
            } else {
                vec![]
            }
        }
        Judgement::Subst(_, Subst::Comp(..), _) => vec![Rule::IX],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_context, parse_judgement, parse_subst, parse_term, var};

    fn j(s: &str) -> Judgement {
        parse_judgement(s).unwrap()
    }

    #[test]
    fn projection_then_variable() {
        let d = derive(&j("x, x |- pi_x * x")).unwrap();
        assert_eq!(d.rule, Rule::V);
        assert_eq!(d.premises[0].rule, Rule::VII);
        assert_eq!(d.premises[1].rule, Rule::I);
    }

    #[test]
    fn derivation_example() {
        let d = derive(&j("x, x, y |- pi_y * pi_x * x")).unwrap();
        assert_eq!(d.node_count(), 5);
    }

    #[test]
    fn ill_formed_in_every_context() {
        for ctx in ["", "x", "y", "x, y", "y, x", "x, y, x"] {
            for body in ["x", "y", "lam y. y"] {
                let src = format!("{ctx} |- lam x. pi_y * {body}");
                assert!(derive(&j(&src)).is_err(), "{src}");
            }
        }
    }

    #[test]
    fn shadowing() {
        assert!(derive(&j("|- lam x. lam x. x")).is_ok());
        let d = derive(&j("x, y |- x")).unwrap();
        assert_eq!(d.rule, Rule::II);
        assert!(derive(&j("|- x")).is_err());
    }

    #[test]
    fn codomains() {
        let g = parse_context("x, x").unwrap();
        assert_eq!(
            infer_codomain(&g, &Subst::Pi(var("x"))).unwrap(),
            parse_context("x").unwrap()
        );
        assert_eq!(infer_codomain(&g, &Subst::Id).unwrap(), g);
        assert_eq!(
            infer_codomain(&parse_context("x").unwrap(), &parse_subst("<id, x/y>").unwrap())
                .unwrap(),
            parse_context("x, y").unwrap()
        );
        assert!(infer_codomain(&g, &Subst::Pi(var("y"))).is_err());
        assert!(derive(&j("x |- <id, x/y> |> x")).is_err());
    }

    #[test]
    fn failure_path() {
        let e = derive(&j("x |- x (lam y. pi_x * y)")).unwrap_err();
        assert_eq!(
            e.path,
            vec![Selector::AppArg, Selector::LamBody, Selector::ClosSub]
        );
    }

    #[test]
    fn closures_of_contexts() {
        let m = parse_term("z").unwrap();
        assert_eq!(lambda_closure(&Context::empty(), &m), m);
        assert_eq!(
            lambda_closure(&parse_context("x, y, z").unwrap(), &m),
            parse_term("lam x y z. z").unwrap()
        );
    }
}
