//! One-step reduction in λπ.
//!
//! Terms and substitutions reduce by `→`; term judgements reduce by `⇝`,
//! which adds the context-renaming rule `Alpha2`. Every redex is addressed by
//! a path of [`Selector`]s from the root.

mod nf;
mod normalize;

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::freevars::{fv_judgement, fv_term};
use crate::syntax::{Context, Judgement, Node, Selector, Subst, Term, Var};

pub use nf::{classify_subst_nf, is_pure, SubstShape};
pub use normalize::{
    normalize, normalize_lpi, normalize_spa, Status, Step, Strategy, Trace, SPA_STEP_CAP,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RuleName {
    Beta,
    Abs,
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
    Alpha1,
    Alpha2,
    StrongAbs,
    IdTerm,
    IdSubst,
}

impl RuleName {
    pub const ALL: [RuleName; 19] = [
        RuleName::Beta,
        RuleName::Abs,
        RuleName::App,
        RuleName::ConsVar,
        RuleName::New,
        RuleName::IdVar,
        RuleName::Clos,
        RuleName::Ass,
        RuleName::IdR,
        RuleName::IdShift,
        RuleName::ConsShift,
        RuleName::Map,
        RuleName::Pi1,
        RuleName::Pi2,
        RuleName::Alpha1,
        RuleName::Alpha2,
        RuleName::StrongAbs,
        RuleName::IdTerm,
        RuleName::IdSubst,
    ];

    pub fn is_alpha(self) -> bool {
        matches!(self, RuleName::Alpha1 | RuleName::Alpha2)
    }

    /// Only active with [`RewriteConfig::extra_rules`].
    pub fn is_optional(self) -> bool {
        matches!(
            self,
            RuleName::StrongAbs | RuleName::IdTerm | RuleName::IdSubst
        )
    }
}

impl fmt::Display for RuleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl std::str::FromStr for RuleName {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleName::ALL
            .into_iter()
            .find(|r| r.to_string() == s)
            .ok_or_else(|| format!("unknown rule `{s}`"))
    }
}

/// `σπα` is λπ without `Beta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Calculus {
    Spa,
    Lpi,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteConfig {
    /// Enables `StrongAbs`, `IdTerm` and `IdSubst`.
    pub extra_rules: bool,
    /// Preferred names for renaming, tried cyclically.
    pub vocab: Vec<Var>,
}

impl Default for RewriteConfig {
    fn default() -> Self {
        RewriteConfig {
            extra_rules: false,
            vocab: ["x", "y", "z"]
                .iter()
                .map(|v| Var::new(v).expect("valid"))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Redex {
    pub position: Vec<Selector>,
    pub rule: RuleName,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fresh: Option<Var>,
}

impl fmt::Display for Redex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at [", self.rule)?;
        for (i, s) in self.position.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("]")?;
        if let Some(b) = &self.fresh {
            write!(f, " fresh {b}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RewriteError {
    #[error("no {rule} redex at the given position")]
    InvalidRedex { rule: RuleName },
    #[error("internal step limit of {0} reached")]
    InternalLimit(usize),
}

/// `base` itself if allowed, else the suffix-stripped stem followed by the
/// first free number.
pub fn fresh(base: &Var, forbidden: &BTreeSet<Var>) -> Var {
    if !forbidden.contains(base) {
        return base.clone();
    }
    let stem = base.as_str().trim_end_matches(|c: char| c.is_ascii_digit());
    (1..)
        .map(|k| Var::new(&format!("{stem}{k}")).expect("stem is a valid prefix"))
        .find(|v| !forbidden.contains(v))
        .expect("unbounded supply")
}

/// The name replacing `renamed`: the vocabulary is scanned cyclically starting
/// just after `renamed`, and [`fresh`] is the fallback.
pub fn choose_fresh(renamed: &Var, forbidden: &BTreeSet<Var>, vocab: &[Var]) -> Var {
    let start = vocab
        .iter()
        .position(|v| v == renamed)
        .map_or(0, |i| i + 1);
    (0..vocab.len())
        .map(|k| &vocab[(start + k) % vocab.len()])
        .find(|v| *v != renamed && !forbidden.contains(*v))
        .cloned()
        .unwrap_or_else(|| {
            let mut f = forbidden.clone();
            f.insert(renamed.clone());
            fresh(renamed, &f)
        })
}

/// `⇑_Δ(s)`: `⇑_nil(s) = s`, `⇑_{Σ,a}(s) = ⟨π_a ∘ ⇑_Σ(s), a\a⟩`.
pub fn lift(delta: &Context, s: &Subst) -> Subst {
    delta.iter().fold(s.clone(), |acc, a| {
        Subst::cons(Subst::comp(Subst::Pi(a.clone()), acc), Term::Var(a.clone()), a)
    })
}

/// `⟨π_b, b\a⟩`
pub fn renaming(a: &Var, b: &Var) -> Subst {
    Subst::cons(Subst::Pi(b.clone()), Term::Var(b.clone()), a)
}

/// An owned term or substitution.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Term(Term),
    Subst(Subst),
}

impl Expr {
    pub fn as_node(&self) -> Node<'_> {
        match self {
            Expr::Term(t) => Node::Term(t),
            Expr::Subst(s) => Node::Subst(s),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Term(t) => t.fmt(f),
            Expr::Subst(s) => s.fmt(f),
        }
    }
}

/// Rules matching at the root of a term, in enumeration order.
fn term_rules(m: &Term, calc: Calculus, cfg: &RewriteConfig) -> Vec<(RuleName, Option<Var>)> {
    let mut out = Vec::new();
    match m {
        Term::App(f, _) => {
            if calc == Calculus::Lpi && matches!(**f, Term::Lam(..)) {
                out.push((RuleName::Beta, None));
            }
        }
        Term::Lam(a, _) => {
            let fv = fv_term(m).support();
            if fv.contains(a) {
                out.push((RuleName::Alpha1, Some(choose_fresh(a, &fv, &cfg.vocab))));
            }
        }
        Term::Var(_) => {}
        Term::Clos(s, body) => {
            match (&**s, &**body) {
                (_, Term::Lam(..)) => out.push((RuleName::Abs, None)),
                (_, Term::App(..)) => out.push((RuleName::App, None)),
                (Subst::Cons(_, _, a), Term::Var(b)) => out.push((
                    if a == b {
                        RuleName::ConsVar
                    } else {
                        RuleName::New
                    },
                    None,
                )),
                (Subst::Id, Term::Var(_)) => out.push((RuleName::IdVar, None)),
                (_, Term::Clos(..)) => out.push((RuleName::Clos, None)),
                (Subst::Pi(a), Term::Var(b)) if a != b => out.push((RuleName::Pi1, None)),
                (Subst::Comp(_, q), Term::Var(b))
                    if matches!(&**q, Subst::Pi(a) if a != b) =>
                {
                    out.push((RuleName::Pi2, None))
                }
                _ => {}
            }
            if cfg.extra_rules {
                if let Term::Lam(a, _) = &**body {
                    let mut forbidden = fv_term(m).support();
                    forbidden.insert(a.clone());
                    out.push((RuleName::StrongAbs, Some(choose_fresh(a, &forbidden, &cfg.vocab))));
                }
                if **s == Subst::Id {
                    out.push((RuleName::IdTerm, None));
                }
            }
        }
    }
    out
}

fn subst_rules(s: &Subst, cfg: &RewriteConfig) -> Vec<RuleName> {
    let mut out = Vec::new();
    if let Subst::Comp(l, r) = s {
        match (&**l, &**r) {
            (_, Subst::Comp(..)) => out.push(RuleName::Ass),
            (_, Subst::Id) => out.push(RuleName::IdR),
            (Subst::Id, Subst::Pi(_)) => out.push(RuleName::IdShift),
            (Subst::Cons(_, _, a), Subst::Pi(b)) if a == b => out.push(RuleName::ConsShift),
            (_, Subst::Cons(..)) => out.push(RuleName::Map),
            _ => {}
        }
        if cfg.extra_rules && **l == Subst::Id {
            out.push(RuleName::IdSubst);
        }
    }
    out
}

fn collect(node: Node<'_>, path: &mut Vec<Selector>, calc: Calculus, cfg: &RewriteConfig, out: &mut Vec<Redex>) {
    match node {
        Node::Term(m) => {
            for (rule, fresh) in term_rules(m, calc, cfg) {
                out.push(Redex {
                    position: path.clone(),
                    rule,
                    fresh,
                });
            }
        }
        Node::Subst(s) => {
            for rule in subst_rules(s, cfg) {
                out.push(Redex {
                    position: path.clone(),
                    rule,
                    fresh: None,
                });
            }
        }
    }
    let children: &[Selector] = match node {
        Node::Term(Term::Var(_)) | Node::Subst(Subst::Id | Subst::Pi(_)) => &[],
        Node::Term(Term::Lam(..)) => &[Selector::LamBody],
        Node::Term(Term::App(..)) => &[Selector::AppFun, Selector::AppArg],
        Node::Term(Term::Clos(..)) => &[Selector::ClosSub, Selector::ClosTerm],
        Node::Subst(Subst::Cons(..)) => &[Selector::ConsSub, Selector::ConsTerm],
        Node::Subst(Subst::Comp(..)) => &[Selector::CompLeft, Selector::CompRight],
    };
    for sel in children {
        let child = node.child(*sel).expect("selector fits node");
        path.push(*sel);
        collect(child, path, calc, cfg, out);
        path.pop();
    }
}

/// Redexes of a bare term or substitution, leftmost-outermost first.
pub fn redexes_expr(node: Node<'_>, calc: Calculus, cfg: &RewriteConfig) -> Vec<Redex> {
    let mut out = Vec::new();
    collect(node, &mut Vec::new(), calc, cfg, &mut out);
    out
}

/// `Alpha2` candidates, one per qualifying context position, in order.
pub fn alpha2_redexes(ctx: &Context, m: &Term, cfg: &RewriteConfig) -> Vec<Redex> {
    let mut out = Vec::new();
    for i in 0..ctx.len() {
        let a = &ctx.entries()[i];
        let tail = ctx.suffix(i);
        let fv = fv_judgement(&tail, m).support();
        if fv.contains(a) {
            out.push(Redex {
                position: vec![Selector::CtxIndex(i + 1)],
                rule: RuleName::Alpha2,
                fresh: Some(choose_fresh(a, &fv, &cfg.vocab)),
            });
        }
    }
    out
}

/// All redexes of a judgement: `Alpha2` candidates first, then the term or
/// substitution in pre-order.
pub fn redexes(j: &Judgement, calc: Calculus, cfg: &RewriteConfig) -> Vec<Redex> {
    match j {
        Judgement::Term(g, m) => {
            let mut out = alpha2_redexes(g, m, cfg);
            out.extend(redexes_expr(Node::Term(m), calc, cfg));
            out
        }
        Judgement::Subst(_, s, _) => redexes_expr(Node::Subst(s), calc, cfg),
    }
}

fn contract_term(m: &Term, rule: RuleName, fresh: Option<&Var>) -> Option<Term> {
    use RuleName::*;
    Some(match (rule, m) {
        (Beta, Term::App(f, n)) => {
            let Term::Lam(a, body) = &**f else { return None };
            Term::clos(Subst::cons(Subst::Id, (**n).clone(), a), (**body).clone())
        }
        (Alpha1, Term::Lam(a, body)) => {
            let b = fresh?;
            let fv = fv_term(m).support();
            if !fv.contains(a) || fv.contains(b) {
                return None;
            }
            Term::lam(b, Term::clos(renaming(a, b), (**body).clone()))
        }
        (_, Term::Clos(s, body)) => contract_closure(s, body, rule, fresh)?,
        _ => return None,
    })
}

fn contract_closure(s: &Subst, body: &Term, rule: RuleName, fresh: Option<&Var>) -> Option<Term> {
    use RuleName::*;
    Some(match (rule, s, body) {
        (Abs, _, Term::Lam(a, m)) => Term::lam(
            a,
            Term::clos(lift(&Context::new(vec![a.clone()]), s), (**m).clone()),
        ),
        (StrongAbs, _, Term::Lam(a, m)) => {
            let b = fresh?;
            Term::lam(
                b,
                Term::clos(
                    Subst::cons(Subst::comp(Subst::Pi(b.clone()), s.clone()), Term::Var(b.clone()), a),
                    (**m).clone(),
                ),
            )
        }
        (App, _, Term::App(m, n)) => Term::app(
            Term::clos(s.clone(), (**m).clone()),
            Term::clos(s.clone(), (**n).clone()),
        ),
        (ConsVar, Subst::Cons(_, n, a), Term::Var(b)) if a == b => (**n).clone(),
        (New, Subst::Cons(r, _, a), Term::Var(b)) if a != b => {
            Term::clos((**r).clone(), body.clone())
        }
        (IdVar, Subst::Id, Term::Var(_)) => body.clone(),
        (Clos, _, Term::Clos(q, m)) => {
            Term::clos(Subst::comp(s.clone(), (**q).clone()), (**m).clone())
        }
        (Pi1, Subst::Pi(a), Term::Var(b)) if a != b => body.clone(),
        (Pi2, Subst::Comp(r, p), Term::Var(b)) => match &**p {
            Subst::Pi(a) if a != b => Term::clos((**r).clone(), body.clone()),
            _ => return None,
        },
        (IdTerm, Subst::Id, _) => body.clone(),
        _ => return None,
    })
}

fn contract_subst(s: &Subst, rule: RuleName) -> Option<Subst> {
    use RuleName::*;
    let Subst::Comp(l, r) = s else { return None };
    Some(match (rule, &**l, &**r) {
        (Ass, _, Subst::Comp(q, t)) => {
            Subst::comp(Subst::comp((**l).clone(), (**q).clone()), (**t).clone())
        }
        (IdR, _, Subst::Id) => (**l).clone(),
        (IdShift, Subst::Id, Subst::Pi(_)) => (**r).clone(),
        (ConsShift, Subst::Cons(q, _, a), Subst::Pi(b)) if a == b => (**q).clone(),
        (Map, _, Subst::Cons(q, n, a)) => Subst::cons(
            Subst::comp((**l).clone(), (**q).clone()),
            Term::clos((**l).clone(), (**n).clone()),
            a,
        ),
        (IdSubst, Subst::Id, _) => (**r).clone(),
        _ => return None,
    })
}

fn contract(node: Node<'_>, rule: RuleName, fresh: Option<&Var>) -> Option<Expr> {
    match node {
        Node::Term(m) => contract_term(m, rule, fresh).map(Expr::Term),
        Node::Subst(s) => contract_subst(s, rule).map(Expr::Subst),
    }
}

fn replace_term(m: &Term, path: &[Selector], f: &mut dyn FnMut(Node<'_>) -> Option<Expr>) -> Option<Term> {
    let Some((sel, rest)) = path.split_first() else {
        return match f(Node::Term(m))? {
            Expr::Term(t) => Some(t),
            Expr::Subst(_) => None,
        };
    };
    Some(match (sel, m) {
        (Selector::LamBody, Term::Lam(a, b)) => Term::lam(a, replace_term(b, rest, f)?),
        (Selector::AppFun, Term::App(x, y)) => Term::app(replace_term(x, rest, f)?, (**y).clone()),
        (Selector::AppArg, Term::App(x, y)) => Term::app((**x).clone(), replace_term(y, rest, f)?),
        (Selector::ClosSub, Term::Clos(s, b)) => Term::clos(replace_subst(s, rest, f)?, (**b).clone()),
        (Selector::ClosTerm, Term::Clos(s, b)) => Term::clos((**s).clone(), replace_term(b, rest, f)?),
        _ => return None,
    })
}

fn replace_subst(s: &Subst, path: &[Selector], f: &mut dyn FnMut(Node<'_>) -> Option<Expr>) -> Option<Subst> {
    let Some((sel, rest)) = path.split_first() else {
        return match f(Node::Subst(s))? {
            Expr::Subst(q) => Some(q),
            Expr::Term(_) => None,
        };
    };
    Some(match (sel, s) {
        (Selector::ConsSub, Subst::Cons(q, n, a)) => Subst::cons(replace_subst(q, rest, f)?, (**n).clone(), a),
        (Selector::ConsTerm, Subst::Cons(q, n, a)) => Subst::cons((**q).clone(), replace_term(n, rest, f)?, a),
        (Selector::CompLeft, Subst::Comp(l, r)) => Subst::comp(replace_subst(l, rest, f)?, (**r).clone()),
        (Selector::CompRight, Subst::Comp(l, r)) => Subst::comp((**l).clone(), replace_subst(r, rest, f)?),
        _ => return None,
    })
}

/// Contracts `r` inside a bare term or substitution. `Alpha2` is not a rule
/// of `→` and is rejected here.
pub fn step_expr(e: &Expr, r: &Redex) -> Result<Expr, RewriteError> {
    let invalid = RewriteError::InvalidRedex { rule: r.rule };
    let mut f = |n: Node<'_>| contract(n, r.rule, r.fresh.as_ref());
    let out = match e {
        Expr::Term(m) => replace_term(m, &r.position, &mut f).map(Expr::Term),
        Expr::Subst(s) => replace_subst(s, &r.position, &mut f).map(Expr::Subst),
    };
    out.ok_or(invalid)
}

/// `Γ,a,Δ ⊢ M ⇝ Γ,b,Δ ⊢ ⇑_Δ⟨π_b, b\a⟩ ∘ M`, with `a` at 1-based `index`.
pub fn alpha2(ctx: &Context, m: &Term, index: usize, b: &Var) -> Option<Judgement> {
    if index == 0 || index > ctx.len() {
        return None;
    }
    let a = &ctx.entries()[index - 1];
    let fv = fv_judgement(&ctx.suffix(index - 1), m).support();
    if !fv.contains(a) || fv.contains(b) {
        return None;
    }
    let delta = ctx.suffix(index);
    let s = lift(&delta, &renaming(a, b));
    Some(Judgement::Term(ctx.with_entry(index - 1, b), Term::clos(s, m.clone())))
}

/// Contracts one redex of a judgement. The context changes only under `Alpha2`.
pub fn step(j: &Judgement, r: &Redex) -> Result<Judgement, RewriteError> {
    let invalid = RewriteError::InvalidRedex { rule: r.rule };
    match (j, r.rule, r.position.as_slice()) {
        (Judgement::Term(g, m), RuleName::Alpha2, [Selector::CtxIndex(i)]) => {
            alpha2(g, m, *i, r.fresh.as_ref().ok_or(invalid.clone())?).ok_or(invalid)
        }
        (_, RuleName::Alpha2, _) => Err(invalid),
        (Judgement::Term(g, m), _, _) => match step_expr(&Expr::Term(m.clone()), r)? {
            Expr::Term(m2) => Ok(Judgement::Term(g.clone(), m2)),
            Expr::Subst(_) => Err(invalid),
        },
        (Judgement::Subst(g, s, d), _, _) => match step_expr(&Expr::Subst(s.clone()), r)? {
            Expr::Subst(s2) => Ok(Judgement::Subst(g.clone(), s2, d.clone())),
            Expr::Term(_) => Err(invalid),
        },
    }
}

/// All one-step successors, paired with the redex used.
pub fn successors(j: &Judgement, calc: Calculus, cfg: &RewriteConfig) -> Vec<(Redex, Judgement)> {
    redexes(j, calc, cfg)
        .into_iter()
        .map(|r| {
            let next = step(j, &r).expect("enumerated redexes contract");
            (r, next)
        })
        .collect()
}
