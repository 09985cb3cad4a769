//! Strong normalization of `σπα`, made executable.
//!
//! `σπα` steps are mirrored in the marked system `R` ([`rsys`]), whose terms
//! get labelled by [`measure`] into the system `Q` ([`qcheck`]), which is
//! ordered by a lexicographic path order ([`lpo`]).

use std::fmt;

use crate::freevars::fv_term;
use crate::syntax::{Selector, Subst, Term, Var};

mod embed;
mod lpo;
mod qcheck;
mod rsys;

pub use embed::{embed_step, EmbedError};
pub use lpo::{lpo_greater, lpo_greater_with, CompStatus, Precedence, Symbol};
pub use qcheck::{
    check_label_coherence, check_q_decrease, q_instance, CoherenceError, LabelParams, QFailure,
    QReport, QRule, SchemaArgs,
};
pub use rsys::{r_redexes, r_step, RRule, RStep};

/// Ground terms and substitutions of `R` and `Q` in one tree. Labels are
/// `None` in `R` and `Some` in `Q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LabTerm {
    Var(Var),
    App(Box<LabTerm>, Box<LabTerm>),
    Lam(Var, Box<LabTerm>),
    Bold(Var, Option<u32>, Box<LabTerm>),
    Clos(Option<u32>, Box<LabTerm>, Box<LabTerm>),
    Id,
    Pi(Var),
    Cons(Box<LabTerm>, Box<LabTerm>, Var),
    Comp(Option<u32>, Box<LabTerm>, Box<LabTerm>),
    /// Generic argument standing for a schema variable; measure 0.
    Meta(String),
}

impl LabTerm {
    pub fn app(f: LabTerm, a: LabTerm) -> LabTerm {
        LabTerm::App(Box::new(f), Box::new(a))
    }

    pub fn lam(a: &Var, b: LabTerm) -> LabTerm {
        LabTerm::Lam(a.clone(), Box::new(b))
    }

    pub fn bold(a: &Var, l: Option<u32>, b: LabTerm) -> LabTerm {
        LabTerm::Bold(a.clone(), l, Box::new(b))
    }

    pub fn clos(l: Option<u32>, s: LabTerm, m: LabTerm) -> LabTerm {
        LabTerm::Clos(l, Box::new(s), Box::new(m))
    }

    pub fn comp(l: Option<u32>, s: LabTerm, q: LabTerm) -> LabTerm {
        LabTerm::Comp(l, Box::new(s), Box::new(q))
    }

    pub fn cons(s: LabTerm, n: LabTerm, a: &Var) -> LabTerm {
        LabTerm::Cons(Box::new(s), Box::new(n), a.clone())
    }

    pub fn meta(name: &str) -> LabTerm {
        LabTerm::Meta(name.to_string())
    }

    pub fn children(&self) -> Vec<(Selector, &LabTerm)> {
        match self {
            LabTerm::App(f, a) => vec![(Selector::AppFun, &**f), (Selector::AppArg, &**a)],
            LabTerm::Lam(_, b) | LabTerm::Bold(_, _, b) => vec![(Selector::LamBody, &**b)],
            LabTerm::Clos(_, s, m) => vec![(Selector::ClosSub, &**s), (Selector::ClosTerm, &**m)],
            LabTerm::Cons(s, n, _) => vec![(Selector::ConsSub, &**s), (Selector::ConsTerm, &**n)],
            LabTerm::Comp(_, s, q) => vec![(Selector::CompLeft, &**s), (Selector::CompRight, &**q)],
            LabTerm::Var(_) | LabTerm::Id | LabTerm::Pi(_) | LabTerm::Meta(_) => vec![],
        }
    }

    pub fn at(&self, path: &[Selector]) -> Option<&LabTerm> {
        let Some((first, rest)) = path.split_first() else {
            return Some(self);
        };
        let (_, c) = self.children().into_iter().find(|(s, _)| s == first)?;
        c.at(rest)
    }

    /// Replaces the subtree at `path` by `f` of it.
    pub fn replace(
        &self,
        path: &[Selector],
        f: &mut dyn FnMut(&LabTerm) -> Option<LabTerm>,
    ) -> Option<LabTerm> {
        let Some((first, rest)) = path.split_first() else {
            return f(self);
        };
        let b = |t: &LabTerm, f: &mut dyn FnMut(&LabTerm) -> Option<LabTerm>| {
            t.replace(rest, f).map(Box::new)
        };
        Some(match (first, self) {
            (Selector::AppFun, LabTerm::App(x, y)) => LabTerm::App(b(x, f)?, y.clone()),
            (Selector::AppArg, LabTerm::App(x, y)) => LabTerm::App(x.clone(), b(y, f)?),
            (Selector::LamBody, LabTerm::Lam(a, x)) => LabTerm::Lam(a.clone(), b(x, f)?),
            (Selector::LamBody, LabTerm::Bold(a, l, x)) => LabTerm::Bold(a.clone(), *l, b(x, f)?),
            (Selector::ClosSub, LabTerm::Clos(l, x, y)) => LabTerm::Clos(*l, b(x, f)?, y.clone()),
            (Selector::ClosTerm, LabTerm::Clos(l, x, y)) => LabTerm::Clos(*l, x.clone(), b(y, f)?),
            (Selector::ConsSub, LabTerm::Cons(x, y, a)) => LabTerm::Cons(b(x, f)?, y.clone(), a.clone()),
            (Selector::ConsTerm, LabTerm::Cons(x, y, a)) => LabTerm::Cons(x.clone(), b(y, f)?, a.clone()),
            (Selector::CompLeft, LabTerm::Comp(l, x, y)) => LabTerm::Comp(*l, b(x, f)?, y.clone()),
            (Selector::CompRight, LabTerm::Comp(l, x, y)) => LabTerm::Comp(*l, x.clone(), b(y, f)?),
            _ => return None,
        })
    }

    /// Pre-order positions of every subtree.
    pub fn positions(&self) -> Vec<Vec<Selector>> {
        fn go(t: &LabTerm, path: &mut Vec<Selector>, out: &mut Vec<Vec<Selector>>) {
            out.push(path.clone());
            for (s, c) in t.children() {
                path.push(s);
                go(c, path, out);
                path.pop();
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Drops marks and labels. `None` if a [`LabTerm::Meta`] occurs or the
    /// sorts are mixed up.
    pub fn erase_term(&self) -> Option<Term> {
        Some(match self {
            LabTerm::Var(a) => Term::Var(a.clone()),
            LabTerm::App(f, a) => Term::app(f.erase_term()?, a.erase_term()?),
            LabTerm::Lam(a, b) | LabTerm::Bold(a, _, b) => Term::lam(a, b.erase_term()?),
            LabTerm::Clos(_, s, m) => Term::clos(s.erase_subst()?, m.erase_term()?),
            _ => return None,
        })
    }

    pub fn erase_subst(&self) -> Option<Subst> {
        Some(match self {
            LabTerm::Id => Subst::Id,
            LabTerm::Pi(a) => Subst::pi(a),
            LabTerm::Cons(s, n, a) => Subst::cons(s.erase_subst()?, n.erase_term()?, a),
            LabTerm::Comp(_, s, q) => Subst::comp(s.erase_subst()?, q.erase_subst()?),
            _ => return None,
        })
    }

    /// Removes labels, keeping marks.
    pub fn unlabel(&self) -> LabTerm {
        self.map_labels(&mut |_| None)
    }

    fn map_labels(&self, f: &mut impl FnMut(&LabTerm) -> Option<u32>) -> LabTerm {
        match self {
            LabTerm::Var(_) | LabTerm::Id | LabTerm::Pi(_) | LabTerm::Meta(_) => self.clone(),
            LabTerm::App(x, y) => LabTerm::app(x.map_labels(f), y.map_labels(f)),
            LabTerm::Lam(a, x) => LabTerm::lam(a, x.map_labels(f)),
            LabTerm::Bold(a, _, x) => LabTerm::bold(a, f(self), x.map_labels(f)),
            LabTerm::Clos(_, x, y) => LabTerm::clos(f(self), x.map_labels(f), y.map_labels(f)),
            LabTerm::Cons(x, y, a) => LabTerm::cons(x.map_labels(f), y.map_labels(f), a),
            LabTerm::Comp(_, x, y) => LabTerm::comp(f(self), x.map_labels(f), y.map_labels(f)),
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|(_, c)| c.size()).sum::<usize>()
    }
}

/// `|·|`: `λ` adds one, `∘` adds, application and cons take the maximum.
pub fn measure(t: &LabTerm) -> u32 {
    match t {
        LabTerm::Var(_) | LabTerm::Id | LabTerm::Pi(_) | LabTerm::Meta(_) => 0,
        LabTerm::Lam(_, b) | LabTerm::Bold(_, _, b) => measure(b) + 1,
        LabTerm::Clos(_, s, m) => measure(s) + measure(m),
        LabTerm::Comp(_, s, q) => measure(s) + measure(q),
        LabTerm::App(f, a) => measure(f).max(measure(a)),
        LabTerm::Cons(s, n, _) => measure(s).max(measure(n)),
    }
}

pub fn measure_term(m: &Term) -> u32 {
    measure(&star(m))
}

pub fn measure_subst(s: &Subst) -> u32 {
    measure(&star_subst(s))
}

/// `M*`: `λa.L` becomes bold when `a ∈ ⋃ᵢ FVᵢ(λa.L)`.
pub fn star(m: &Term) -> LabTerm {
    match m {
        Term::Var(a) => LabTerm::Var(a.clone()),
        Term::App(f, a) => LabTerm::app(star(f), star(a)),
        Term::Lam(a, b) => {
            if fv_term(m).support().contains(a) {
                LabTerm::bold(a, None, star(b))
            } else {
                LabTerm::lam(a, star(b))
            }
        }
        Term::Clos(s, b) => LabTerm::clos(None, star_subst(s), star(b)),
    }
}

pub fn star_subst(s: &Subst) -> LabTerm {
    match s {
        Subst::Id => LabTerm::Id,
        Subst::Pi(a) => LabTerm::Pi(a.clone()),
        Subst::Cons(q, n, a) => LabTerm::cons(star_subst(q), star(n), a),
        Subst::Comp(l, r) => LabTerm::comp(None, star_subst(l), star_subst(r)),
    }
}

/// Labels every `∘` and every bold `λ` by the measure of the subtree it heads.
pub fn label(t: &LabTerm) -> LabTerm {
    t.map_labels(&mut |x| Some(measure(x)))
}

fn lab(f: &mut fmt::Formatter<'_>, l: Option<u32>) -> fmt::Result {
    match l {
        Some(i) => write!(f, "_{i}"),
        None => Ok(()),
    }
}

fn fmt_lab(t: &LabTerm, f: &mut fmt::Formatter<'_>, slot: u8) -> fmt::Result {
    let wrap = match t {
        LabTerm::App(..) => slot == 2,
        LabTerm::Lam(..) | LabTerm::Bold(..) | LabTerm::Clos(..) => slot != 0,
        LabTerm::Comp(..) => slot == 3,
        _ => false,
    };
    if wrap {
        f.write_str("(")?;
    }
    match t {
        LabTerm::Var(a) => write!(f, "{a}")?,
        LabTerm::Id => f.write_str("id")?,
        LabTerm::Pi(a) => write!(f, "pi_{a}")?,
        LabTerm::Meta(n) => f.write_str(n)?,
        LabTerm::App(x, y) => {
            fmt_lab(x, f, 1)?;
            f.write_str(" ")?;
            fmt_lab(y, f, 2)?;
        }
        LabTerm::Lam(a, b) => {
            write!(f, "lam {a}. ")?;
            fmt_lab(b, f, 0)?;
        }
        LabTerm::Bold(a, l, b) => {
            f.write_str("LAM")?;
            lab(f, *l)?;
            write!(f, " {a}. ")?;
            fmt_lab(b, f, 0)?;
        }
        LabTerm::Clos(l, s, m) | LabTerm::Comp(l, s, m) => {
            fmt_lab(s, f, 3)?;
            f.write_str(" *")?;
            lab(f, *l)?;
            f.write_str(" ")?;
            fmt_lab(m, f, 0)?;
        }
        LabTerm::Cons(s, n, a) => {
            f.write_str("<")?;
            fmt_lab(s, f, 0)?;
            f.write_str(", ")?;
            fmt_lab(n, f, 0)?;
            write!(f, "/{a}>")?;
        }
    }
    if wrap {
        f.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for LabTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_lab(self, f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_subst, parse_term};

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn measures() {
        assert_eq!(measure_subst(&Subst::Id), 0);
        assert_eq!(measure_term(&t("lam x. x")), 1);
        assert_eq!(measure_term(&t("<pi_x, x/x> * lam y. y")), 1);
        assert_eq!(measure_term(&t("(lam x. x) (lam x y. x)")), 2);
        assert_eq!(measure_subst(&parse_subst("<id, lam x. x/y> * <id, lam x. x/y>").unwrap()), 2);
    }

    #[test]
    fn marking() {
        assert_eq!(star(&t("lam x. pi_x * x")).to_string(), "LAM x. pi_x * x");
        assert_eq!(star(&t("lam x. x")).to_string(), "lam x. x");
        assert_eq!(
            star(&t("lam x. <id, pi_x * x/x> * y")).to_string(),
            "LAM x. <id, pi_x * x/x> * y"
        );
        assert_eq!(star(&t("lam x. id * y")).to_string(), "lam x. id * y");
    }

    #[test]
    fn labelling() {
        assert_eq!(label(&star(&t("id * x"))).to_string(), "id *_0 x");
        assert_eq!(label(&star(&t("lam x. pi_x * x"))).to_string(), "LAM_1 x. pi_x *_0 x");
        assert_eq!(label(&star(&t("(pi_x * pi_y) * z"))).to_string(), "(pi_x *_0 pi_y) *_0 z");
    }

    #[test]
    fn erasure_round_trip() {
        let m = t("lam x. <id * pi_y, lam z. x z/x> * pi_x * x");
        let l = label(&star(&m));
        assert_eq!(l.erase_term(), Some(m));
        assert_eq!(l.unlabel(), star(&l.erase_term().unwrap()));
    }
}
