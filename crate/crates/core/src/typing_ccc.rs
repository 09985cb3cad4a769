//! Simply typed judgements and their values as arrows of a cartesian closed
//! category.
//!
//! Typed syntax: `x:A, y:A -> B |- lam z:A. y z : A -> B` and
//! `x:A, x:B |- pi_x |> x:A`.

use std::fmt;

use crate::syntax::{Builder, Context, Expr, Judgement, ParseError, Parser, Subst, Term, Tok, Var};
use crate::wellformed::Rule;

#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Type {
    Base(String),
    Arrow(Box<Type>, Box<Type>),
}

impl Type {
    pub fn base(name: &str) -> Type {
        Type::Base(name.to_string())
    }

    pub fn arrow(dom: Type, cod: Type) -> Type {
        Type::Arrow(Box::new(dom), Box::new(cod))
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Base(n) => f.write_str(n),
            Type::Arrow(a, b) if matches!(**a, Type::Arrow(..)) => write!(f, "({a}) -> {b}"),
            Type::Arrow(a, b) => write!(f, "{a} -> {b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TypedContext(pub Vec<(Var, Type)>);

impl TypedContext {
    pub fn entries(&self) -> &[(Var, Type)] {
        &self.0
    }

    pub fn extended(&self, a: &Var, ty: &Type) -> TypedContext {
        let mut v = self.0.clone();
        v.push((a.clone(), ty.clone()));
        TypedContext(v)
    }

    pub fn split_last(&self) -> Option<(TypedContext, &(Var, Type))> {
        let (last, init) = self.0.split_last()?;
        Some((TypedContext(init.to_vec()), last))
    }

    pub fn erase(&self) -> Context {
        Context::new(self.0.iter().map(|(v, _)| v.clone()).collect())
    }
}

impl fmt::Display for TypedContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (v, t)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}:{t}")?;
        }
        Ok(())
    }
}

/// Terms whose binders carry a type.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TTerm {
    Var(Var),
    App(Box<TTerm>, Box<TTerm>),
    Lam(Var, Type, Box<TTerm>),
    Clos(Box<TSubst>, Box<TTerm>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TSubst {
    Id,
    Pi(Var),
    Cons(Box<TSubst>, Box<TTerm>, Var),
    Comp(Box<TSubst>, Box<TSubst>),
}

impl TTerm {
    pub fn erase(&self) -> Term {
        match self {
            TTerm::Var(v) => Term::Var(v.clone()),
            TTerm::App(f, a) => Term::app(f.erase(), a.erase()),
            TTerm::Lam(v, _, b) => Term::lam(v, b.erase()),
            TTerm::Clos(s, m) => Term::clos(s.erase(), m.erase()),
        }
    }
}

impl TSubst {
    pub fn erase(&self) -> Subst {
        match self {
            TSubst::Id => Subst::Id,
            TSubst::Pi(v) => Subst::pi(v),
            TSubst::Cons(s, n, v) => Subst::cons(s.erase(), n.erase(), v),
            TSubst::Comp(s, q) => Subst::comp(s.erase(), q.erase()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TypedJudgement {
    Term(TypedContext, TTerm, Type),
    Subst(TypedContext, TSubst, TypedContext),
}

impl TypedJudgement {
    pub fn context(&self) -> &TypedContext {
        match self {
            TypedJudgement::Term(g, ..) | TypedJudgement::Subst(g, ..) => g,
        }
    }

    pub fn erase(&self) -> Judgement {
        match self {
            TypedJudgement::Term(g, m, _) => Judgement::Term(g.erase(), m.erase()),
            TypedJudgement::Subst(g, s, d) => Judgement::Subst(g.erase(), s.erase(), d.erase()),
        }
    }
}

// --- printing ----------------------------------------------------------------

fn fmt_tterm(t: &TTerm, f: &mut fmt::Formatter<'_>, slot: u8) -> fmt::Result {
    // slot: 0 open, 1 function position, 2 argument position
    match t {
        TTerm::Var(v) => write!(f, "{v}"),
        TTerm::App(a, b) => {
            if slot == 2 {
                f.write_str("(")?;
            }
            fmt_tterm(a, f, 1)?;
            f.write_str(" ")?;
            fmt_tterm(b, f, 2)?;
            if slot == 2 {
                f.write_str(")")?;
            }
            Ok(())
        }
        TTerm::Lam(..) | TTerm::Clos(..) => {
            if slot != 0 {
                f.write_str("(")?;
            }
            match t {
                TTerm::Lam(v, ty, b) => {
                    write!(f, "lam {v}:{ty}. ")?;
                    fmt_tterm(b, f, 0)?;
                }
                TTerm::Clos(s, m) => {
                    fmt_chain_head(s, f)?;
                    f.write_str(" * ")?;
                    fmt_tterm(m, f, 0)?;
                }
                _ => unreachable!(),
            }
            if slot != 0 {
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}

fn fmt_chain_head(s: &TSubst, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if matches!(s, TSubst::Comp(..)) {
        write!(f, "({s})")
    } else {
        write!(f, "{s}")
    }
}

impl fmt::Display for TTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_tterm(self, f, 0)
    }
}

impl fmt::Display for TSubst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TSubst::Id => f.write_str("id"),
            TSubst::Pi(v) => write!(f, "pi_{v}"),
            TSubst::Cons(s, n, v) => write!(f, "<{s}, {n}/{v}>"),
            TSubst::Comp(s, q) => {
                fmt_chain_head(s, f)?;
                write!(f, " * {q}")
            }
        }
    }
}

impl fmt::Display for TypedJudgement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.context();
        if !g.0.is_empty() {
            write!(f, "{g} ")?;
        }
        match self {
            TypedJudgement::Term(_, m, ty) => write!(f, "|- {m} : {ty}"),
            TypedJudgement::Subst(_, s, d) if d.0.is_empty() => write!(f, "|- {s} |>"),
            TypedJudgement::Subst(_, s, d) => write!(f, "|- {s} |> {d}"),
        }
    }
}

// --- parsing -----------------------------------------------------------------

struct Typed;

impl Builder for Typed {
    type Term = TTerm;
    type Subst = TSubst;
    type Binder = (Var, Type);

    fn binder(p: &mut Parser) -> Result<(Var, Type), ParseError> {
        let v = p.var()?;
        p.expect(Tok::Colon)?;
        Ok((v, parse_type_at(p)?))
    }
    fn var(v: Var) -> TTerm {
        TTerm::Var(v)
    }
    fn app(f: TTerm, a: TTerm) -> TTerm {
        TTerm::App(Box::new(f), Box::new(a))
    }
    fn lam((v, ty): (Var, Type), body: TTerm) -> TTerm {
        TTerm::Lam(v, ty, Box::new(body))
    }
    fn clos(s: TSubst, m: TTerm) -> TTerm {
        TTerm::Clos(Box::new(s), Box::new(m))
    }
    fn id() -> TSubst {
        TSubst::Id
    }
    fn pi(v: Var) -> TSubst {
        TSubst::Pi(v)
    }
    fn cons(s: TSubst, n: TTerm, v: Var) -> TSubst {
        TSubst::Cons(Box::new(s), Box::new(n), v)
    }
    fn comp(s: TSubst, q: TSubst) -> TSubst {
        TSubst::Comp(Box::new(s), Box::new(q))
    }
}

fn parse_type_at(p: &mut Parser) -> Result<Type, ParseError> {
    let dom = if p.eat(&Tok::LParen) {
        let t = parse_type_at(p)?;
        p.expect(Tok::RParen)?;
        t
    } else {
        Type::Base(p.ty_name()?)
    };
    if p.eat(&Tok::Arrow) {
        Ok(Type::arrow(dom, parse_type_at(p)?))
    } else {
        Ok(dom)
    }
}

fn typed_context(p: &mut Parser) -> Result<TypedContext, ParseError> {
    let mut out = Vec::new();
    if matches!(p.peek(), Tok::Ident(_)) {
        loop {
            out.push(Typed::binder(p)?);
            if !p.eat(&Tok::Comma) {
                break;
            }
        }
    }
    Ok(TypedContext(out))
}

pub fn parse_type(text: &str) -> Result<Type, ParseError> {
    let mut p = Parser::new(text)?;
    let t = parse_type_at(&mut p)?;
    p.finish()?;
    Ok(t)
}

pub fn parse_typed_judgement(text: &str) -> Result<TypedJudgement, ParseError> {
    let mut p = Parser::new(text)?;
    let g = typed_context(&mut p)?;
    p.expect(Tok::Turnstile)?;
    let j = match p.expr::<Typed>()? {
        Expr::Term(m) => {
            p.expect(Tok::Colon)?;
            TypedJudgement::Term(g, m, parse_type_at(&mut p)?)
        }
        Expr::Subst(s) => {
            p.expect(Tok::Triangle)?;
            let d = typed_context(&mut p)?;
            TypedJudgement::Subst(g, s, d)
        }
    };
    p.finish()?;
    Ok(j)
}

impl std::str::FromStr for TypedJudgement {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        parse_typed_judgement(s)
    }
}

// --- typing ------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypedDerivation {
    pub conclusion: TypedJudgement,
    pub rule: Rule,
    pub premises: Vec<TypedDerivation>,
}

impl TypedDerivation {
    fn ty(&self) -> &Type {
        match &self.conclusion {
            TypedJudgement::Term(_, _, t) => t,
            TypedJudgement::Subst(..) => unreachable!("term derivation"),
        }
    }

    fn codomain(&self) -> &TypedContext {
        match &self.conclusion {
            TypedJudgement::Subst(_, _, d) => d,
            TypedJudgement::Term(..) => unreachable!("substitution derivation"),
        }
    }

    fn render(&self, depth: usize, out: &mut String) {
        use std::fmt::Write;
        let _ = writeln!(out, "{:w$}{} {}", "", self.rule, self.conclusion, w = depth * 2);
        for p in &self.premises {
            p.render(depth + 1, out);
        }
    }
}

impl fmt::Display for TypedDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.render(0, &mut s);
        f.write_str(s.trim_end())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not derivable: {reason} (at `{at}`)")]
pub struct TypeError {
    pub at: String,
    pub reason: String,
}

fn err(at: impl fmt::Display, reason: String) -> TypeError {
    TypeError {
        at: at.to_string(),
        reason,
    }
}

fn infer_term(g: &TypedContext, m: &TTerm) -> Result<TypedDerivation, TypeError> {
    match m {
        TTerm::Var(a) => {
            let Some((init, (last, ty))) = g.split_last() else {
                return Err(err(m, format!("`{a}` is not in the context")));
            };
            if last == a {
                return Ok(TypedDerivation {
                    conclusion: TypedJudgement::Term(g.clone(), m.clone(), ty.clone()),
                    rule: Rule::I,
                    premises: vec![],
                });
            }
            let d = infer_term(&init, m)?;
            Ok(TypedDerivation {
                conclusion: TypedJudgement::Term(g.clone(), m.clone(), d.ty().clone()),
                rule: Rule::II,
                premises: vec![d],
            })
        }
        TTerm::App(f, a) => {
            let df = infer_term(g, f)?;
            let da = infer_term(g, a)?;
            let Type::Arrow(dom, cod) = df.ty() else {
                return Err(err(m, format!("`{f}` has type `{}`, not a function type", df.ty())));
            };
            if **dom != *da.ty() {
                return Err(err(m, format!("argument has type `{}`, expected `{dom}`", da.ty())));
            }
            Ok(TypedDerivation {
                conclusion: TypedJudgement::Term(g.clone(), m.clone(), (**cod).clone()),
                rule: Rule::III,
                premises: vec![df, da],
            })
        }
        TTerm::Lam(a, ty, body) => {
            let d = infer_term(&g.extended(a, ty), body)?;
            let t = Type::arrow(ty.clone(), d.ty().clone());
            Ok(TypedDerivation {
                conclusion: TypedJudgement::Term(g.clone(), m.clone(), t),
                rule: Rule::IV,
                premises: vec![d],
            })
        }
        TTerm::Clos(s, body) => {
            let ds = infer_subst(g, s)?;
            let dm = infer_term(ds.codomain(), body)?;
            Ok(TypedDerivation {
                conclusion: TypedJudgement::Term(g.clone(), m.clone(), dm.ty().clone()),
                rule: Rule::V,
                premises: vec![ds, dm],
            })
        }
    }
}

fn infer_subst(g: &TypedContext, s: &TSubst) -> Result<TypedDerivation, TypeError> {
    let done = |cod: TypedContext, rule, premises| TypedDerivation {
        conclusion: TypedJudgement::Subst(g.clone(), s.clone(), cod),
        rule,
        premises,
    };
    match s {
        TSubst::Id => Ok(done(g.clone(), Rule::VI, vec![])),
        TSubst::Pi(a) => match g.split_last() {
            Some((init, (last, _))) if last == a => Ok(done(init, Rule::VII, vec![])),
            _ => Err(err(s, format!("pi_{a} needs a context ending in `{a}`, got `{g}`"))),
        },
        TSubst::Cons(rest, n, a) => {
            let d1 = infer_subst(g, rest)?;
            let d2 = infer_term(g, n)?;
            let cod = d1.codomain().extended(a, d2.ty());
            Ok(done(cod, Rule::VIII, vec![d1, d2]))
        }
        TSubst::Comp(l, r) => {
            let d1 = infer_subst(g, l)?;
            let d2 = infer_subst(d1.codomain(), r)?;
            let cod = d2.codomain().clone();
            Ok(done(cod, Rule::IX, vec![d1, d2]))
        }
    }
}

/// The unique typed derivation of `j`.
pub fn typecheck(j: &TypedJudgement) -> Result<TypedDerivation, TypeError> {
    match j {
        TypedJudgement::Term(g, m, ty) => {
            let d = infer_term(g, m)?;
            if d.ty() != ty {
                return Err(err(j, format!("has type `{}`, not `{ty}`", d.ty())));
            }
            Ok(d)
        }
        TypedJudgement::Subst(g, s, cod) => {
            let d = infer_subst(g, s)?;
            if d.codomain() != cod {
                return Err(err(j, format!("codomain is `{}`, not `{cod}`", d.codomain())));
            }
            Ok(d)
        }
    }
}

// --- categorical values ------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ObjExpr {
    Terminal,
    Prod(Box<ObjExpr>, Box<ObjExpr>),
    TypeObj(Type),
}

impl fmt::Display for ObjExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObjExpr::Terminal => f.write_str("1"),
            ObjExpr::Prod(a, b) => {
                if matches!(**a, ObjExpr::Prod(..)) {
                    write!(f, "({a})")?;
                } else {
                    write!(f, "{a}")?;
                }
                f.write_str(" x ")?;
                match &**b {
                    ObjExpr::TypeObj(Type::Arrow(..)) | ObjExpr::Prod(..) => write!(f, "({b})"),
                    _ => write!(f, "{b}"),
                }
            }
            ObjExpr::TypeObj(t) => write!(f, "{t}"),
        }
    }
}

/// `(…(1 × A₁) × …) × Aₙ`
pub fn context_object(g: &TypedContext) -> ObjExpr {
    g.0.iter().fold(ObjExpr::Terminal, |acc, (_, t)| {
        ObjExpr::Prod(Box::new(acc), Box::new(ObjExpr::TypeObj(t.clone())))
    })
}

/// `Seq(f, g)` is `f` followed by `g`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ArrowExpr {
    IdA,
    Pr1,
    Pr2,
    Pair(Box<ArrowExpr>, Box<ArrowExpr>),
    Curry(Box<ArrowExpr>),
    Ev,
    Seq(Box<ArrowExpr>, Box<ArrowExpr>),
}

impl ArrowExpr {
    fn seq(f: ArrowExpr, g: ArrowExpr) -> ArrowExpr {
        ArrowExpr::Seq(Box::new(f), Box::new(g))
    }

    fn pair(f: ArrowExpr, g: ArrowExpr) -> ArrowExpr {
        ArrowExpr::Pair(Box::new(f), Box::new(g))
    }
}

impl fmt::Display for ArrowExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArrowExpr::IdA => f.write_str("id"),
            ArrowExpr::Pr1 => f.write_str("pr1"),
            ArrowExpr::Pr2 => f.write_str("pr2"),
            ArrowExpr::Ev => f.write_str("ev"),
            ArrowExpr::Pair(a, b) => write!(f, "<{a}, {b}>"),
            ArrowExpr::Curry(a) => write!(f, "cur({a})"),
            ArrowExpr::Seq(a, b) => {
                write!(f, "{a} ; ")?;
                if matches!(**b, ArrowExpr::Seq(..)) {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
        }
    }
}

/// The arrow assigned to a typed derivation.
pub fn ccc_arrow(d: &TypedDerivation) -> ArrowExpr {
    let p = &d.premises;
    match d.rule {
        Rule::I => ArrowExpr::Pr2,
        Rule::II => ArrowExpr::seq(ArrowExpr::Pr1, ccc_arrow(&p[0])),
        Rule::III => ArrowExpr::seq(
            ArrowExpr::pair(ccc_arrow(&p[0]), ccc_arrow(&p[1])),
            ArrowExpr::Ev,
        ),
        Rule::IV => ArrowExpr::Curry(Box::new(ccc_arrow(&p[0]))),
        Rule::V | Rule::IX => ArrowExpr::seq(ccc_arrow(&p[0]), ccc_arrow(&p[1])),
        Rule::VI => ArrowExpr::IdA,
        Rule::VII => ArrowExpr::Pr1,
        Rule::VIII => ArrowExpr::pair(ccc_arrow(&p[0]), ccc_arrow(&p[1])),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wellformed::is_derivable;

    fn tj(s: &str) -> TypedJudgement {
        parse_typed_judgement(s).unwrap()
    }

    #[test]
    fn rightmost_occurrence_decides() {
        assert!(typecheck(&tj("x:A, x:B |- x : B")).is_ok());
        assert!(typecheck(&tj("x:A, x:B |- x : A")).is_err());
        assert!(typecheck(&tj("x:A, x:B |- pi_x * x : A")).is_ok());
        assert!(typecheck(&tj("x:A, x:B |- pi_x |> x:A")).is_ok());
    }

    #[test]
    fn functions() {
        let j = tj("f:A -> B, a:A |- f a : B");
        let d = typecheck(&j).unwrap();
        assert_eq!(ccc_arrow(&d).to_string(), "<pr1 ; pr2, pr2> ; ev");
        assert!(typecheck(&tj("|- lam x:A y:B. x : A -> B -> A")).is_ok());
        assert!(typecheck(&tj("|- lam x:A y:B. x : (A -> B) -> A")).is_err());
        assert!(typecheck(&tj("a:A |- a a : A")).is_err());
    }

    #[test]
    fn arrows() {
        let d = typecheck(&tj("x:A, x:B |- pi_x * x : A")).unwrap();
        assert_eq!(
            ccc_arrow(&d),
            ArrowExpr::seq(ArrowExpr::Pr1, ArrowExpr::Pr2)
        );
        assert_eq!(ccc_arrow(&d).to_string(), "pr1 ; pr2");
        let d = typecheck(&tj("x:A |- id |> x:A")).unwrap();
        assert_eq!(ccc_arrow(&d), ArrowExpr::IdA);
        let d = typecheck(&tj("|- lam x:A. x : A -> A")).unwrap();
        assert_eq!(ccc_arrow(&d).to_string(), "cur(pr2)");
        let d = typecheck(&tj("x:A |- <id, x/y> |> x:A, y:A")).unwrap();
        assert_eq!(ccc_arrow(&d).to_string(), "<id, pr2>");
    }

    #[test]
    fn objects() {
        assert_eq!(context_object(&TypedContext::default()), ObjExpr::Terminal);
        let j = tj("x:A, y:B -> C |- x : A");
        assert_eq!(context_object(j.context()).to_string(), "(1 x A) x (B -> C)");
    }

    #[test]
    fn printing_round_trips() {
        for s in [
            "x:A, x:B |- pi_x * x : A",
            "|- lam x:A. lam y:(A -> B) -> C. y : A -> ((A -> B) -> C) -> (A -> B) -> C",
            "f:A -> B, a:A |- (lam x:A. f x) a : B",
            "x:A |- <id, x/y> |> x:A, y:A",
            "x:A |- pi_x |>",
        ] {
            let j = tj(s);
            assert_eq!(tj(&j.to_string()), j, "{s}");
        }
    }

    #[test]
    fn erasure_is_wellformed() {
        let j = tj("x:A, x:B |- pi_x * x : A");
        assert!(is_derivable(&j.erase()));
    }
}
