use std::fmt::{self, Display, Formatter, Write};

use super::{Context, Judgement, Subst, Term};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Slot {
    /// Anything fits: top level, chain tails, cons entries, parenthesized.
    Open,
    AppFun,
    AppArg,
}

fn term(f: &mut Formatter<'_>, t: &Term, slot: Slot) -> fmt::Result {
    let needs_parens = match (t, slot) {
        (Term::Var(_), _) => false,
        (Term::App(..), Slot::AppArg) => true,
        (Term::App(..), _) => false,
        (Term::Lam(..) | Term::Clos(..), Slot::Open) => false,
        (Term::Lam(..) | Term::Clos(..), _) => true,
    };
    if needs_parens {
        f.write_char('(')?;
    }
    match t {
        Term::Var(v) => write!(f, "{v}")?,
        Term::App(m, n) => {
            term(f, m, Slot::AppFun)?;
            f.write_char(' ')?;
            term(f, n, Slot::AppArg)?;
        }
        Term::Lam(..) => {
            f.write_str("lam")?;
            let mut cur = t;
            while let Term::Lam(v, body) = cur {
                write!(f, " {v}")?;
                cur = body;
            }
            f.write_str(". ")?;
            term(f, cur, Slot::Open)?;
        }
        Term::Clos(s, m) => {
            chain_head(f, s)?;
            f.write_str(" * ")?;
            term(f, m, Slot::Open)?;
        }
    }
    if needs_parens {
        f.write_char(')')?;
    }
    Ok(())
}

/// Left operand of `*`: a composition there must be bracketed, since bare
/// chains associate to the right.
fn chain_head(f: &mut Formatter<'_>, s: &Subst) -> fmt::Result {
    if matches!(s, Subst::Comp(..)) {
        f.write_char('(')?;
        subst(f, s)?;
        f.write_char(')')
    } else {
        subst(f, s)
    }
}

fn subst(f: &mut Formatter<'_>, s: &Subst) -> fmt::Result {
    match s {
        Subst::Id => f.write_str("id"),
        Subst::Pi(v) => write!(f, "pi_{v}"),
        Subst::Cons(..) => {
            let mut entries = Vec::new();
            let mut cur = s;
            while let Subst::Cons(rest, n, a) = cur {
                entries.push((n, a));
                cur = rest;
            }
            f.write_char('<')?;
            subst(f, cur)?;
            for (n, a) in entries.into_iter().rev() {
                f.write_str(", ")?;
                term(f, n, Slot::Open)?;
                write!(f, "/{a}")?;
            }
            f.write_char('>')
        }
        Subst::Comp(l, r) => {
            chain_head(f, l)?;
            f.write_str(" * ")?;
            subst(f, r)
        }
    }
}

impl Display for Term {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        term(f, self, Slot::Open)
    }
}

impl Display for Subst {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        subst(f, self)
    }
}

impl Display for Context {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl Display for Judgement {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        let ctx = self.context();
        if ctx.is_empty() {
            f.write_str("|- ")?;
        } else {
            write!(f, "{ctx} |- ")?;
        }
        match self {
            Judgement::Term(_, m) => write!(f, "{m}"),
            Judgement::Subst(_, s, d) if d.is_empty() => write!(f, "{s} |>"),
            Judgement::Subst(_, s, d) => write!(f, "{s} |> {d}"),
        }
    }
}
