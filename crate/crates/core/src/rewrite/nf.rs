use crate::syntax::{Subst, Term, Var};

/// The four shapes a normal substitution can take.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubstShape {
    /// `id`
    I,
    /// `π_{a1…an}`, left-nested, `n ≥ 1`
    PiChain(Vec<Var>),
    /// `⟨id, N1\b1, …, Nk\bk⟩`, `k ≥ 1`
    ConsOverId(Vec<(Term, Var)>),
    /// `⟨π_{a1…an}, N1\b1, …⟩`
    ConsOverPiChain(Vec<Var>, Vec<(Term, Var)>),
}

/// `((π_a1 ∘ π_a2) ∘ …) ∘ π_an`
fn pi_chain(s: &Subst) -> Option<Vec<Var>> {
    match s {
        Subst::Pi(a) => Some(vec![a.clone()]),
        Subst::Comp(l, r) => {
            let Subst::Pi(a) = &**r else { return None };
            let mut v = pi_chain(l)?;
            v.push(a.clone());
            Some(v)
        }
        _ => None,
    }
}

/// Recognizes shapes (i)–(iv); `None` for anything else.
pub fn classify_subst_nf(s: &Subst) -> Option<SubstShape> {
    if *s == Subst::Id {
        return Some(SubstShape::I);
    }
    if let Some(v) = pi_chain(s) {
        return Some(SubstShape::PiChain(v));
    }
    let mut entries = Vec::new();
    let mut cur = s;
    while let Subst::Cons(rest, n, b) = cur {
        entries.push(((**n).clone(), b.clone()));
        cur = rest;
    }
    if entries.is_empty() {
        return None;
    }
    entries.reverse();
    if *cur == Subst::Id {
        Some(SubstShape::ConsOverId(entries))
    } else {
        pi_chain(cur).map(|v| SubstShape::ConsOverPiChain(v, entries))
    }
}

/// No closure anywhere inside.
pub fn is_pure(m: &Term) -> bool {
    match m {
        Term::Var(_) => true,
        Term::App(f, a) => is_pure(f) && is_pure(a),
        Term::Lam(_, b) => is_pure(b),
        Term::Clos(..) => false,
    }
}
