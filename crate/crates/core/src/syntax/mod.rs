//! Named terms, substitutions, contexts and judgements.
//!
//! The concrete syntax is plain ASCII:
//!
//! | math            | text          |
//! |-----------------|---------------|
//! | `λx.M`          | `lam x. M`    |
//! | `s∘M`, `s∘q`    | `s * M`       |
//! | `π_x`           | `pi_x`        |
//! | `⟨s, N\x⟩`      | `<s, N/x>`    |
//! | `Γ ⊢ M`         | `G |- M`      |
//! | `Γ ⊢ s ▷ Δ`     | `G |- s |> D` |

mod gen;
mod parse;
mod print;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use gen::{enumerate_judgements, generate, generate_subst_judgements, Generator, MAX_CONTEXT};
pub use parse::{
    parse, parse_context, parse_judgement, parse_subst, parse_term, Category, ParseError, Parsed,
};
pub(crate) use parse::{Builder, Expr, Parser, Tok};

/// A variable name. Cheap to clone.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(Arc<str>);

const RESERVED: [&str; 3] = ["id", "pi", "lam"];

impl Var {
    /// Builds a variable, checking the identifier rules.
    pub fn new(name: &str) -> Result<Var, InvalidVar> {
        if Var::is_valid(name) {
            Ok(Var(Arc::from(name)))
        } else {
            Err(InvalidVar(name.to_string()))
        }
    }

    /// Lowercase letter, then letters, digits or underscores; not `id`, `pi`, `lam`,
    /// and not starting with `pi_` (that prefix spells a projection).
    pub fn is_valid(name: &str) -> bool {
        let mut chars = name.chars();
        let Some(first) = chars.next() else {
            return false;
        };
        first.is_ascii_lowercase()
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
            && !RESERVED.contains(&name)
            && !name.starts_with("pi_")
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

/// Shorthand for tests and examples; panics on an invalid name.
pub fn var(name: &str) -> Var {
    Var::new(name).unwrap_or_else(|e| panic!("{e}"))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid variable name `{0}`")]
pub struct InvalidVar(pub String);

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for Var {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Var {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Var::new(&s).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Var),
    App(Box<Term>, Box<Term>),
    Lam(Var, Box<Term>),
    /// `s ∘ M`
    Clos(Box<Subst>, Box<Term>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subst {
    Id,
    Pi(Var),
    /// `⟨rest, term\target⟩`
    Cons(Box<Subst>, Box<Term>, Var),
    /// `left ∘ right`
    Comp(Box<Subst>, Box<Subst>),
}

impl Term {
    pub fn var(v: &Var) -> Term {
        Term::Var(v.clone())
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn lam(v: &Var, body: Term) -> Term {
        Term::Lam(v.clone(), Box::new(body))
    }

    pub fn clos(s: Subst, body: Term) -> Term {
        Term::Clos(Box::new(s), Box::new(body))
    }

    /// Number of term and substitution constructors.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(f, a) => 1 + f.size() + a.size(),
            Term::Lam(_, b) => 1 + b.size(),
            Term::Clos(s, m) => 1 + s.size() + m.size(),
        }
    }

    pub fn grammar_class(&self) -> GrammarClass {
        match self {
            Term::Var(_) => GrammarClass::Var,
            Term::App(..) => GrammarClass::App,
            Term::Lam(..) => GrammarClass::Abs,
            Term::Clos(..) => GrammarClass::Clos,
        }
    }
}

impl Subst {
    pub fn pi(v: &Var) -> Subst {
        Subst::Pi(v.clone())
    }

    pub fn cons(rest: Subst, term: Term, target: &Var) -> Subst {
        Subst::Cons(Box::new(rest), Box::new(term), target.clone())
    }

    pub fn comp(left: Subst, right: Subst) -> Subst {
        Subst::Comp(Box::new(left), Box::new(right))
    }

    pub fn size(&self) -> usize {
        match self {
            Subst::Id | Subst::Pi(_) => 1,
            Subst::Cons(s, n, _) => 1 + s.size() + n.size(),
            Subst::Comp(s, q) => 1 + s.size() + q.size(),
        }
    }

    pub fn grammar_class(&self) -> GrammarClass {
        match self {
            Subst::Id => GrammarClass::Id,
            Subst::Pi(_) => GrammarClass::Pi,
            Subst::Cons(..) => GrammarClass::Cons,
            Subst::Comp(..) => GrammarClass::Comp,
        }
    }
}

/// Root classes of the term/substitution grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GrammarClass {
    Var,
    App,
    Abs,
    Clos,
    Id,
    Pi,
    Cons,
    Comp,
}

/// An ordered list of variables; repetitions are allowed and significant.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Context(Vec<Var>);

impl Context {
    pub fn new(entries: Vec<Var>) -> Context {
        Context(entries)
    }

    pub fn empty() -> Context {
        Context(Vec::new())
    }

    pub fn entries(&self) -> &[Var] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<&Var> {
        self.0.last()
    }

    /// `Γ, a`
    pub fn extended(&self, a: &Var) -> Context {
        let mut v = self.0.clone();
        v.push(a.clone());
        Context(v)
    }

    /// Splits `Γ, a` into `(Γ, a)`.
    pub fn split_last(&self) -> Option<(Context, &Var)> {
        let (last, init) = self.0.split_last()?;
        Some((Context(init.to_vec()), last))
    }

    pub fn with_entry(&self, index: usize, v: &Var) -> Context {
        let mut entries = self.0.clone();
        entries[index] = v.clone();
        Context(entries)
    }

    pub fn prefix(&self, n: usize) -> Context {
        Context(self.0[..n].to_vec())
    }

    pub fn suffix(&self, from: usize) -> Context {
        Context(self.0[from..].to_vec())
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Var> {
        self.0.iter()
    }
}

impl From<Vec<Var>> for Context {
    fn from(v: Vec<Var>) -> Context {
        Context(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Judgement {
    /// `Γ ⊢ M`
    Term(Context, Term),
    /// `Γ ⊢ s ▷ Δ`
    Subst(Context, Subst, Context),
}

impl Judgement {
    pub fn context(&self) -> &Context {
        match self {
            Judgement::Term(g, _) | Judgement::Subst(g, _, _) => g,
        }
    }

    pub fn term(&self) -> Option<&Term> {
        match self {
            Judgement::Term(_, m) => Some(m),
            Judgement::Subst(..) => None,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Judgement::Term(_, m) => m.size(),
            Judgement::Subst(_, s, _) => s.size(),
        }
    }

    pub fn is_term(&self) -> bool {
        matches!(self, Judgement::Term(..))
    }
}

/// One step down into a judgement, term or substitution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Selector {
    LamBody,
    AppFun,
    AppArg,
    ClosSub,
    ClosTerm,
    ConsSub,
    ConsTerm,
    CompLeft,
    CompRight,
    /// 1-based context entry of a term judgement.
    CtxIndex(usize),
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Selector::LamBody => f.write_str("lam-body"),
            Selector::AppFun => f.write_str("app-fun"),
            Selector::AppArg => f.write_str("app-arg"),
            Selector::ClosSub => f.write_str("clos-sub"),
            Selector::ClosTerm => f.write_str("clos-term"),
            Selector::ConsSub => f.write_str("cons-sub"),
            Selector::ConsTerm => f.write_str("cons-term"),
            Selector::CompLeft => f.write_str("comp-left"),
            Selector::CompRight => f.write_str("comp-right"),
            Selector::CtxIndex(i) => write!(f, "ctx-index({i})"),
        }
    }
}

impl std::str::FromStr for Selector {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "lam-body" => Selector::LamBody,
            "app-fun" => Selector::AppFun,
            "app-arg" => Selector::AppArg,
            "clos-sub" => Selector::ClosSub,
            "clos-term" => Selector::ClosTerm,
            "cons-sub" => Selector::ConsSub,
            "cons-term" => Selector::ConsTerm,
            "comp-left" => Selector::CompLeft,
            "comp-right" => Selector::CompRight,
            _ => {
                let n = s
                    .strip_prefix("ctx-index(")
                    .and_then(|r| r.strip_suffix(')'))
                    .and_then(|n| n.parse().ok())
                    .ok_or_else(|| format!("unknown selector `{s}`"))?;
                Selector::CtxIndex(n)
            }
        })
    }
}

impl Serialize for Selector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Selector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// Either sort of expression, by reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Node<'a> {
    Term(&'a Term),
    Subst(&'a Subst),
}

impl<'a> Node<'a> {
    /// Follows one selector; `None` if it does not apply here.
    pub fn child(self, sel: Selector) -> Option<Node<'a>> {
        Some(match (self, sel) {
            (Node::Term(Term::Lam(_, b)), Selector::LamBody) => Node::Term(b),
            (Node::Term(Term::App(m, _)), Selector::AppFun) => Node::Term(m),
            (Node::Term(Term::App(_, n)), Selector::AppArg) => Node::Term(n),
            (Node::Term(Term::Clos(s, _)), Selector::ClosSub) => Node::Subst(s),
            (Node::Term(Term::Clos(_, m)), Selector::ClosTerm) => Node::Term(m),
            (Node::Subst(Subst::Cons(s, _, _)), Selector::ConsSub) => Node::Subst(s),
            (Node::Subst(Subst::Cons(_, n, _)), Selector::ConsTerm) => Node::Term(n),
            (Node::Subst(Subst::Comp(s, _)), Selector::CompLeft) => Node::Subst(s),
            (Node::Subst(Subst::Comp(_, q)), Selector::CompRight) => Node::Subst(q),
            _ => return None,
        })
    }

    pub fn at(self, path: &[Selector]) -> Option<Node<'a>> {
        path.iter().try_fold(self, |n, s| n.child(*s))
    }
}

impl std::str::FromStr for Term {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_term(s)
    }
}

impl std::str::FromStr for Subst {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_subst(s)
    }
}

impl std::str::FromStr for Judgement {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_judgement(s)
    }
}

impl std::str::FromStr for Context {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_context(s)
    }
}
