//! The name-free calculus λσ, and the translation of derivable judgements
//! into it.
//!
//! [`translate`] follows the plain correspondence, where a variable becomes the
//! numeral `n̲ = ((π∘π)∘…∘π)∘1`. [`translate_ext`] keeps numerals as atoms
//! ([`NTerm::Idx`]) and records the context length; that is what separates
//! `x,y ⊢ x` (`2 ⊢ #2`) from `x,y ⊢ π_y∘x` (`2 ⊢ p * #1`).

use std::fmt;

use crate::syntax::{Judgement, Selector};
use crate::wellformed::{derive, Derivation, NotDerivable, Rule};

/// Internal safety cap for σ-normalization; σ is strongly normalizing.
pub const SIGMA_STEP_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NTerm {
    One,
    /// Numeral kept as an atom (extended terms only).
    Idx(u32),
    App(Box<NTerm>, Box<NTerm>),
    Lam(Box<NTerm>),
    Clos(Box<NSubst>, Box<NTerm>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NSubst {
    Id,
    Pi,
    Cons(Box<NSubst>, Box<NTerm>),
    Comp(Box<NSubst>, Box<NSubst>),
}

impl NTerm {
    pub fn app(f: NTerm, a: NTerm) -> NTerm {
        NTerm::App(Box::new(f), Box::new(a))
    }

    pub fn lam(b: NTerm) -> NTerm {
        NTerm::Lam(Box::new(b))
    }

    pub fn clos(s: NSubst, m: NTerm) -> NTerm {
        NTerm::Clos(Box::new(s), Box::new(m))
    }

    /// `n` if this is the numeral `n̲` in either representation.
    pub fn numeral_value(&self) -> Option<u32> {
        match self {
            NTerm::One => Some(1),
            NTerm::Idx(n) => Some(*n),
            NTerm::Clos(s, body) if **body == NTerm::One => pi_chain_len(s).map(|k| k + 1),
            _ => None,
        }
    }

    /// Replaces every `Idx(n)` by its encoding `n̲`.
    pub fn expand(&self) -> NTerm {
        match self {
            NTerm::One => NTerm::One,
            NTerm::Idx(n) => numeral(*n),
            NTerm::App(f, a) => NTerm::app(f.expand(), a.expand()),
            NTerm::Lam(b) => NTerm::lam(b.expand()),
            NTerm::Clos(s, m) => NTerm::clos(s.expand(), m.expand()),
        }
    }

    /// Built from numerals by application and abstraction only.
    pub fn is_pure(&self) -> bool {
        match self {
            NTerm::App(f, a) => f.is_pure() && a.is_pure(),
            NTerm::Lam(b) => b.is_pure(),
            t => t.numeral_value().is_some(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            NTerm::One | NTerm::Idx(_) => 1,
            NTerm::App(f, a) => 1 + f.size() + a.size(),
            NTerm::Lam(b) => 1 + b.size(),
            NTerm::Clos(s, m) => 1 + s.size() + m.size(),
        }
    }
}

impl NSubst {
    pub fn cons(s: NSubst, v: NTerm) -> NSubst {
        NSubst::Cons(Box::new(s), Box::new(v))
    }

    pub fn comp(s: NSubst, q: NSubst) -> NSubst {
        NSubst::Comp(Box::new(s), Box::new(q))
    }

    pub fn expand(&self) -> NSubst {
        match self {
            NSubst::Id => NSubst::Id,
            NSubst::Pi => NSubst::Pi,
            NSubst::Cons(s, v) => NSubst::cons(s.expand(), v.expand()),
            NSubst::Comp(s, q) => NSubst::comp(s.expand(), q.expand()),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            NSubst::Id | NSubst::Pi => 1,
            NSubst::Cons(s, v) => 1 + s.size() + v.size(),
            NSubst::Comp(s, q) => 1 + s.size() + q.size(),
        }
    }
}

/// Length of a left-nested chain `((π∘π)∘…)∘π`.
fn pi_chain_len(s: &NSubst) -> Option<u32> {
    match s {
        NSubst::Pi => Some(1),
        NSubst::Comp(l, r) if **r == NSubst::Pi => pi_chain_len(l).map(|k| k + 1),
        _ => None,
    }
}

/// `n̲`: `1`, then `π∘1`, `(π∘π)∘1`, … Panics on `n = 0`.
pub fn numeral(n: u32) -> NTerm {
    assert!(n >= 1, "numerals start at 1");
    if n == 1 {
        return NTerm::One;
    }
    let chain = (2..n).fold(NSubst::Pi, |acc, _| NSubst::comp(acc, NSubst::Pi));
    NTerm::clos(chain, NTerm::One)
}

/// `⇑(s) = ⟨π∘s, 1⟩`, applied `n` times.
pub fn nameless_lift(n: usize, s: &NSubst) -> NSubst {
    (0..n).fold(s.clone(), |acc, _| {
        NSubst::cons(NSubst::comp(NSubst::Pi, acc), NTerm::One)
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NExpr {
    Term(NTerm),
    Subst(NSubst),
}

/// `m ⊢ U` or `m ⊢ u`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NamelessJudgement {
    pub len: usize,
    pub body: NExpr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Numerals {
    Encoded,
    Atoms,
}

fn tr_term(d: &Derivation, mode: Numerals) -> NTerm {
    match tr(d, mode) {
        NExpr::Term(t) => t,
        NExpr::Subst(_) => unreachable!("term premise"),
    }
}

fn tr_subst(d: &Derivation, mode: Numerals) -> NSubst {
    match tr(d, mode) {
        NExpr::Subst(s) => s,
        NExpr::Term(_) => unreachable!("substitution premise"),
    }
}

fn tr(d: &Derivation, mode: Numerals) -> NExpr {
    let p = &d.premises;
    NExpr::Term(match d.rule {
        Rule::I => match mode {
            Numerals::Encoded => NTerm::One,
            Numerals::Atoms => NTerm::Idx(1),
        },
        Rule::II => {
            let n = tr_term(&p[0], mode)
                .numeral_value()
                .expect("variables translate to numerals");
            match mode {
                Numerals::Encoded => numeral(n + 1),
                Numerals::Atoms => NTerm::Idx(n + 1),
            }
        }
        Rule::III => NTerm::app(tr_term(&p[0], mode), tr_term(&p[1], mode)),
        Rule::IV => NTerm::lam(tr_term(&p[0], mode)),
        Rule::V => NTerm::clos(tr_subst(&p[0], mode), tr_term(&p[1], mode)),
        Rule::VI => return NExpr::Subst(NSubst::Id),
        Rule::VII => return NExpr::Subst(NSubst::Pi),
        Rule::VIII => {
            return NExpr::Subst(NSubst::cons(tr_subst(&p[0], mode), tr_term(&p[1], mode)))
        }
        Rule::IX => {
            return NExpr::Subst(NSubst::comp(tr_subst(&p[0], mode), tr_subst(&p[1], mode)))
        }
    })
}

/// The name-free term or substitution corresponding to a derivation.
pub fn translate(d: &Derivation) -> NExpr {
    tr(d, Numerals::Encoded)
}

/// The name-free judgement corresponding to a derivation.
pub fn translate_ext(d: &Derivation) -> NamelessJudgement {
    NamelessJudgement {
        len: d.conclusion.context().len(),
        body: tr(d, Numerals::Atoms),
    }
}

/// `Γ ⊢ M ≃ Δ ⊢ N`: equal plain translations.
pub fn simeq(j1: &Judgement, j2: &Judgement) -> Result<bool, NotDerivable> {
    Ok(translate(&derive(j1)?) == translate(&derive(j2)?))
}

/// `≡α`: equal extended translations, context length included.
pub fn alpha_eq(j1: &Judgement, j2: &Judgement) -> Result<bool, NotDerivable> {
    Ok(translate_ext(&derive(j1)?) == translate_ext(&derive(j2)?))
}

// --- σ-reduction -----------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SigmaRule {
    Beta,
    Abs,
    App,
    ConsVar,
    IdVar,
    Clos,
    Ass,
    IdR,
    IdShift,
    ConsShift,
    Map,
}

fn term_rule(t: &NTerm, with_beta: bool) -> Option<SigmaRule> {
    match t {
        NTerm::App(f, _) if with_beta && matches!(**f, NTerm::Lam(_)) => Some(SigmaRule::Beta),
        NTerm::Clos(s, body) => match (&**s, &**body) {
            (_, NTerm::Lam(_)) => Some(SigmaRule::Abs),
            (_, NTerm::App(..)) => Some(SigmaRule::App),
            (NSubst::Cons(..), NTerm::One) => Some(SigmaRule::ConsVar),
            (NSubst::Id, NTerm::One) => Some(SigmaRule::IdVar),
            (_, NTerm::Clos(..)) => Some(SigmaRule::Clos),
            _ => None,
        },
        _ => None,
    }
}

fn subst_rule(s: &NSubst) -> Option<SigmaRule> {
    let NSubst::Comp(l, r) = s else { return None };
    match (&**l, &**r) {
        (_, NSubst::Comp(..)) => Some(SigmaRule::Ass),
        (_, NSubst::Id) => Some(SigmaRule::IdR),
        (NSubst::Id, NSubst::Pi) => Some(SigmaRule::IdShift),
        (NSubst::Cons(..), NSubst::Pi) => Some(SigmaRule::ConsShift),
        (_, NSubst::Cons(..)) => Some(SigmaRule::Map),
        _ => None,
    }
}

fn contract_term(t: &NTerm, rule: SigmaRule) -> NTerm {
    match (rule, t) {
        (SigmaRule::Beta, NTerm::App(f, v)) => {
            let NTerm::Lam(u) = &**f else { unreachable!() };
            NTerm::clos(NSubst::cons(NSubst::Id, (**v).clone()), (**u).clone())
        }
        (SigmaRule::Abs, NTerm::Clos(s, body)) => {
            let NTerm::Lam(u) = &**body else { unreachable!() };
            NTerm::lam(NTerm::clos(nameless_lift(1, s), (**u).clone()))
        }
        (SigmaRule::App, NTerm::Clos(s, body)) => {
            let NTerm::App(u, v) = &**body else { unreachable!() };
            NTerm::app(
                NTerm::clos((**s).clone(), (**u).clone()),
                NTerm::clos((**s).clone(), (**v).clone()),
            )
        }
        (SigmaRule::ConsVar, NTerm::Clos(s, _)) => {
            let NSubst::Cons(_, v) = &**s else { unreachable!() };
            (**v).clone()
        }
        (SigmaRule::IdVar, NTerm::Clos(..)) => NTerm::One,
        (SigmaRule::Clos, NTerm::Clos(s, body)) => {
            let NTerm::Clos(q, m) = &**body else { unreachable!() };
            NTerm::clos(NSubst::comp((**s).clone(), (**q).clone()), (**m).clone())
        }
        _ => unreachable!("rule was matched at this node"),
    }
}

fn contract_subst(s: &NSubst, rule: SigmaRule) -> NSubst {
    let NSubst::Comp(l, r) = s else { unreachable!() };
    match (rule, &**l, &**r) {
        (SigmaRule::Ass, _, NSubst::Comp(q, w)) => {
            NSubst::comp(NSubst::comp((**l).clone(), (**q).clone()), (**w).clone())
        }
        (SigmaRule::IdR, _, _) => (**l).clone(),
        (SigmaRule::IdShift, _, _) => NSubst::Pi,
        (SigmaRule::ConsShift, NSubst::Cons(u, _), _) => (**u).clone(),
        (SigmaRule::Map, _, NSubst::Cons(q, v)) => NSubst::cons(
            NSubst::comp((**l).clone(), (**q).clone()),
            NTerm::clos((**l).clone(), (**v).clone()),
        ),
        _ => unreachable!("rule was matched at this node"),
    }
}

/// Where the next σ-step is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SigmaStrategy {
    LeftmostOutermost,
    RightmostInnermost,
}

/// One step at the chosen redex, or `None` when normal.
fn step_term(t: &NTerm, st: SigmaStrategy, beta: bool) -> Option<NTerm> {
    let here = term_rule(t, beta);
    if st == SigmaStrategy::LeftmostOutermost {
        if let Some(r) = here {
            return Some(contract_term(t, r));
        }
    }
    let inner = match t {
        NTerm::One | NTerm::Idx(_) => None,
        NTerm::Lam(b) => step_term(b, st, beta).map(NTerm::lam),
        NTerm::App(f, a) => match st {
            SigmaStrategy::LeftmostOutermost => step_term(f, st, beta)
                .map(|f2| NTerm::app(f2, (**a).clone()))
                .or_else(|| step_term(a, st, beta).map(|a2| NTerm::app((**f).clone(), a2))),
            SigmaStrategy::RightmostInnermost => step_term(a, st, beta)
                .map(|a2| NTerm::app((**f).clone(), a2))
                .or_else(|| step_term(f, st, beta).map(|f2| NTerm::app(f2, (**a).clone()))),
        },
        NTerm::Clos(s, m) => match st {
            SigmaStrategy::LeftmostOutermost => step_subst(s, st, beta)
                .map(|s2| NTerm::clos(s2, (**m).clone()))
                .or_else(|| step_term(m, st, beta).map(|m2| NTerm::clos((**s).clone(), m2))),
            SigmaStrategy::RightmostInnermost => step_term(m, st, beta)
                .map(|m2| NTerm::clos((**s).clone(), m2))
                .or_else(|| step_subst(s, st, beta).map(|s2| NTerm::clos(s2, (**m).clone()))),
        },
    };
    inner.or_else(|| here.map(|r| contract_term(t, r)))
}

fn step_subst(s: &NSubst, st: SigmaStrategy, beta: bool) -> Option<NSubst> {
    let here = subst_rule(s);
    if st == SigmaStrategy::LeftmostOutermost {
        if let Some(r) = here {
            return Some(contract_subst(s, r));
        }
    }
    let inner = match s {
        NSubst::Id | NSubst::Pi => None,
        NSubst::Cons(u, v) => match st {
            SigmaStrategy::LeftmostOutermost => step_subst(u, st, beta)
                .map(|u2| NSubst::cons(u2, (**v).clone()))
                .or_else(|| step_term(v, st, beta).map(|v2| NSubst::cons((**u).clone(), v2))),
            SigmaStrategy::RightmostInnermost => step_term(v, st, beta)
                .map(|v2| NSubst::cons((**u).clone(), v2))
                .or_else(|| step_subst(u, st, beta).map(|u2| NSubst::cons(u2, (**v).clone()))),
        },
        NSubst::Comp(l, r) => match st {
            SigmaStrategy::LeftmostOutermost => step_subst(l, st, beta)
                .map(|l2| NSubst::comp(l2, (**r).clone()))
                .or_else(|| step_subst(r, st, beta).map(|r2| NSubst::comp((**l).clone(), r2))),
            SigmaStrategy::RightmostInnermost => step_subst(r, st, beta)
                .map(|r2| NSubst::comp((**l).clone(), r2))
                .or_else(|| step_subst(l, st, beta).map(|l2| NSubst::comp(l2, (**r).clone()))),
        },
    };
    inner.or_else(|| here.map(|r| contract_subst(s, r)))
}

/// `σ(U)` with the given strategy; numeral atoms are expanded first.
pub fn sigma_normalize_with(e: &NExpr, st: SigmaStrategy) -> NExpr {
    let mut cur = match e {
        NExpr::Term(t) => NExpr::Term(t.expand()),
        NExpr::Subst(s) => NExpr::Subst(s.expand()),
    };
    for _ in 0..SIGMA_STEP_CAP {
        let next = match &cur {
            NExpr::Term(t) => step_term(t, st, false).map(NExpr::Term),
            NExpr::Subst(s) => step_subst(s, st, false).map(NExpr::Subst),
        };
        match next {
            Some(n) => cur = n,
            None => return cur,
        }
    }
    panic!("σ-normalization exceeded {SIGMA_STEP_CAP} steps");
}

pub fn sigma_normalize(e: &NExpr) -> NExpr {
    sigma_normalize_with(e, SigmaStrategy::LeftmostOutermost)
}

pub fn sigma_normalize_term(t: &NTerm) -> NTerm {
    match sigma_normalize(&NExpr::Term(t.clone())) {
        NExpr::Term(t) => t,
        NExpr::Subst(_) => unreachable!(),
    }
}

/// One leftmost-outermost λσ step, `Beta` included.
pub fn lambda_sigma_step(t: &NTerm) -> Option<NTerm> {
    step_term(t, SigmaStrategy::LeftmostOutermost, true)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BetaError {
    #[error("term is not pure")]
    NotPure,
    #[error("no Beta redex at the given position")]
    NotARedex,
}

/// Positions of `(λU)V` in a pure term; numerals are leaves.
pub fn beta_positions(t: &NTerm) -> Vec<Vec<Selector>> {
    fn go(t: &NTerm, path: &mut Vec<Selector>, out: &mut Vec<Vec<Selector>>) {
        match t {
            NTerm::App(f, a) => {
                if matches!(**f, NTerm::Lam(_)) {
                    out.push(path.clone());
                }
                path.push(Selector::AppFun);
                go(f, path, out);
                path.pop();
                path.push(Selector::AppArg);
                go(a, path, out);
                path.pop();
            }
            NTerm::Lam(b) => {
                path.push(Selector::LamBody);
                go(b, path, out);
                path.pop();
            }
            _ => {}
        }
    }
    let mut out = Vec::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

/// `U →β σ(V)` where `U →Beta V` at `position`; `U` must be pure.
pub fn beta_step_pure(u: &NTerm, position: &[Selector]) -> Result<NTerm, BetaError> {
    if !u.is_pure() {
        return Err(BetaError::NotPure);
    }
    fn go(t: &NTerm, path: &[Selector]) -> Result<NTerm, BetaError> {
        match (path.split_first(), t) {
            (None, NTerm::App(f, _)) if matches!(**f, NTerm::Lam(_)) => {
                Ok(contract_term(t, SigmaRule::Beta))
            }
            (Some((Selector::AppFun, rest)), NTerm::App(f, a)) => {
                Ok(NTerm::app(go(f, rest)?, (**a).clone()))
            }
            (Some((Selector::AppArg, rest)), NTerm::App(f, a)) => {
                Ok(NTerm::app((**f).clone(), go(a, rest)?))
            }
            (Some((Selector::LamBody, rest)), NTerm::Lam(b)) => Ok(NTerm::lam(go(b, rest)?)),
            _ => Err(BetaError::NotARedex),
        }
    }
    Ok(sigma_normalize_term(&go(u, position)?))
}

/// Leftmost β-normal form of a pure term within `fuel` steps.
pub fn beta_normalize_pure(u: &NTerm, fuel: usize) -> Option<NTerm> {
    let mut cur = sigma_normalize_term(u);
    for _ in 0..fuel {
        let Some(p) = beta_positions(&cur).into_iter().next() else {
            return Some(cur);
        };
        cur = beta_step_pure(&cur, &p).expect("pure term with a redex");
    }
    None
}

// --- printing ----------------------------------------------------------------

fn fmt_term(t: &NTerm, f: &mut fmt::Formatter<'_>, arg: bool, fun: bool) -> fmt::Result {
    match t {
        NTerm::One => f.write_str("1"),
        NTerm::Idx(n) => write!(f, "#{n}"),
        NTerm::App(a, b) => {
            if arg {
                f.write_str("(")?;
            }
            fmt_term(a, f, false, true)?;
            f.write_str(" ")?;
            fmt_term(b, f, true, false)?;
            if arg {
                f.write_str(")")?;
            }
            Ok(())
        }
        NTerm::Lam(_) | NTerm::Clos(..) => {
            let wrap = arg || fun;
            if wrap {
                f.write_str("(")?;
            }
            match t {
                NTerm::Lam(b) => {
                    f.write_str("\\ ")?;
                    fmt_term(b, f, false, false)?;
                }
                NTerm::Clos(s, m) => {
                    fmt_head(s, f)?;
                    f.write_str(" * ")?;
                    fmt_term(m, f, false, false)?;
                }
                _ => unreachable!(),
            }
            if wrap {
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}

fn fmt_head(s: &NSubst, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if matches!(s, NSubst::Comp(..)) {
        write!(f, "({s})")
    } else {
        write!(f, "{s}")
    }
}

impl fmt::Display for NTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_term(self, f, false, false)
    }
}

impl fmt::Display for NSubst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NSubst::Id => f.write_str("id"),
            NSubst::Pi => f.write_str("p"),
            NSubst::Cons(u, v) => write!(f, "<{u}, {v}>"),
            NSubst::Comp(l, r) => {
                fmt_head(l, f)?;
                write!(f, " * {r}")
            }
        }
    }
}

impl fmt::Display for NExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NExpr::Term(t) => t.fmt(f),
            NExpr::Subst(s) => s.fmt(f),
        }
    }
}

impl fmt::Display for NamelessJudgement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} |- {}", self.len, self.body)
    }
}
