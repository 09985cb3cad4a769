//! Free variables by level.
//!
//! `FV(L)` is an infinite sequence of sets; level `i` holds the variables with
//! a free occurrence sitting under `i - 1` shifts. Only finitely many levels
//! are ever non-empty, so [`FvSeq`] stores a prefix and drops trailing empties.

use std::collections::BTreeSet;
use std::fmt;

use crate::syntax::{Context, Subst, Term, Var};
use crate::wellformed::lambda_closure;

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct FvSeq {
    levels: Vec<BTreeSet<Var>>,
}

impl FvSeq {
    pub fn empty() -> FvSeq {
        FvSeq::default()
    }

    /// `⟨{a}, ∅, …⟩`
    pub fn singleton(a: &Var) -> FvSeq {
        FvSeq {
            levels: vec![BTreeSet::from([a.clone()])],
        }
    }

    /// Builds a sequence from level 1 onward, canonicalizing.
    pub fn from_levels(levels: Vec<BTreeSet<Var>>) -> FvSeq {
        let mut s = FvSeq { levels };
        s.trim();
        s
    }

    fn trim(&mut self) {
        while self.levels.last().is_some_and(|l| l.is_empty()) {
            self.levels.pop();
        }
    }

    /// Stored levels, level 1 first; never ends with an empty set.
    pub fn levels(&self) -> &[BTreeSet<Var>] {
        &self.levels
    }

    /// Level `i`, 1-based. Level 0 does not exist and panics.
    pub fn level(&self, i: usize) -> BTreeSet<Var> {
        assert!(i >= 1, "levels are 1-based");
        self.levels.get(i - 1).cloned().unwrap_or_default()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn union(&self, other: &FvSeq) -> FvSeq {
        let n = self.levels.len().max(other.levels.len());
        let levels = (0..n)
            .map(|i| {
                let mut l = self.levels.get(i).cloned().unwrap_or_default();
                if let Some(o) = other.levels.get(i) {
                    l.extend(o.iter().cloned());
                }
                l
            })
            .collect();
        FvSeq { levels }
    }

    /// `O_λa`: removes `a` from level 1 and merges level 2 into it.
    pub fn under_lambda(&self, a: &Var) -> FvSeq {
        let mut it = self.levels.iter();
        let mut first = it.next().cloned().unwrap_or_default();
        first.remove(a);
        if let Some(second) = it.next() {
            first.extend(second.iter().cloned());
        }
        let mut levels = vec![first];
        levels.extend(it.cloned());
        FvSeq::from_levels(levels)
    }

    /// `O_π`: every level moves up by one.
    pub fn shifted(&self) -> FvSeq {
        if self.is_empty() {
            return FvSeq::empty();
        }
        let mut levels = Vec::with_capacity(self.levels.len() + 1);
        levels.push(BTreeSet::new());
        levels.extend(self.levels.iter().cloned());
        FvSeq { levels }
    }

    /// Union of all levels.
    pub fn support(&self) -> BTreeSet<Var> {
        self.levels.iter().flatten().cloned().collect()
    }

    /// Levelwise inclusion.
    pub fn subseteq(&self, other: &FvSeq) -> bool {
        self.levels
            .iter()
            .enumerate()
            .all(|(i, l)| other.levels.get(i).is_some_and(|o| l.is_subset(o)) || l.is_empty())
    }

    /// `A ⊑ B`: each `A_i` lies in `⋃_{j≥i} B_j`.
    pub fn sqsubseteq(&self, other: &FvSeq) -> bool {
        let mut suffix: BTreeSet<Var> = BTreeSet::new();
        let mut unions = vec![BTreeSet::new(); other.levels.len()];
        for (i, l) in other.levels.iter().enumerate().rev() {
            suffix.extend(l.iter().cloned());
            unions[i] = suffix.clone();
        }
        self.levels.iter().enumerate().all(|(i, l)| {
            l.is_empty() || unions.get(i).is_some_and(|u| l.is_subset(u))
        })
    }
}

impl fmt::Display for FvSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, l) in self.levels.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("{")?;
            for (k, v) in l.iter().enumerate() {
                if k > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{v}")?;
            }
            f.write_str("}")?;
        }
        f.write_str("]")
    }
}

impl serde::Serialize for FvSeq {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.levels.iter())
    }
}

pub fn fv_term(m: &Term) -> FvSeq {
    match m {
        Term::Var(a) => FvSeq::singleton(a),
        Term::App(m, n) => fv_term(m).union(&fv_term(n)),
        Term::Lam(a, body) => fv_term(body).under_lambda(a),
        Term::Clos(s, body) => apply_o(s, &fv_term(body)),
    }
}

/// The operator `O_s`. The subscript of `π` plays no part.
pub fn apply_o(s: &Subst, a: &FvSeq) -> FvSeq {
    match s {
        Subst::Id => a.clone(),
        Subst::Pi(_) => a.shifted(),
        Subst::Comp(s, q) => apply_o(s, &apply_o(q, a)),
        Subst::Cons(s, n, b) => apply_o(s, &a.under_lambda(b)).union(&fv_term(n)),
    }
}

/// `FV(s) = O_s(⟨∅, ∅, …⟩)`.
pub fn fv_subst(s: &Subst) -> FvSeq {
    apply_o(s, &FvSeq::empty())
}

/// `FV(Γ ⊢ M) = FV(λΓ.M)`.
pub fn fv_judgement(ctx: &Context, m: &Term) -> FvSeq {
    fv_term(&lambda_closure(ctx, m))
}

pub fn seq_subseteq(a: &FvSeq, b: &FvSeq) -> bool {
    a.subseteq(b)
}

pub fn seq_sqsubseteq(a: &FvSeq, b: &FvSeq) -> bool {
    a.sqsubseteq(b)
}

pub fn support(a: &FvSeq) -> BTreeSet<Var> {
    a.support()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_judgement, parse_subst, parse_term, var, Judgement};

    fn seq(levels: &[&[&str]]) -> FvSeq {
        FvSeq::from_levels(
            levels
                .iter()
                .map(|l| l.iter().map(|v| var(v)).collect())
                .collect(),
        )
    }

    fn fv(src: &str) -> FvSeq {
        fv_term(&parse_term(src).unwrap())
    }

    #[test]
    fn operators() {
        assert_eq!(apply_o(&Subst::Id, &seq(&[&["x"]])), seq(&[&["x"]]));
        assert_eq!(
            apply_o(&Subst::Pi(var("x")), &seq(&[&["y"]])),
            seq(&[&[], &["y"]])
        );
        assert_eq!(
            apply_o(&parse_subst("<id, z/x>").unwrap(), &seq(&[&["x"]])),
            seq(&[&["z"]])
        );
    }

    #[test]
    fn substitutions() {
        assert_eq!(fv_subst(&Subst::Id), FvSeq::empty());
        assert_eq!(fv_subst(&parse_subst("<id, x/y>").unwrap()), seq(&[&["x"]]));
        assert_eq!(
            fv_subst(&parse_subst("pi_x * <id, y/z>").unwrap()),
            seq(&[&[], &["y"]])
        );
    }

    #[test]
    fn judgements() {
        let f = |s: &str| match parse_judgement(s).unwrap() {
            Judgement::Term(g, m) => fv_judgement(&g, &m),
            j => panic!("{j}"),
        };
        assert_eq!(f("x |- pi_x * x"), seq(&[&["x"]]));
        assert_eq!(f("x, z |- pi_z * pi_x * x"), seq(&[&["x"]]));
        assert_eq!(f("|- lam x. x"), FvSeq::empty());
    }

    #[test]
    fn comparisons() {
        assert!(seq(&[&["x"]]).subseteq(&seq(&[&["x"], &["y"]])));
        assert!(!seq(&[&["x"], &["y"]]).subseteq(&seq(&[&["x"]])));
        assert!(FvSeq::empty().subseteq(&seq(&[&["q"]])));
        assert!(seq(&[&["y"]]).sqsubseteq(&seq(&[&[], &["y"]])));
        assert!(!seq(&[&[], &["y"]]).sqsubseteq(&seq(&[&["y"]])));
        assert_eq!(seq(&[&[], &["x"]]).support(), BTreeSet::from([var("x")]));
    }

    #[test]
    fn rendering() {
        assert_eq!(fv("x (pi_z * pi_y * x)").to_string(), "[{x}, {}, {x}]");
        assert_eq!(fv("lam x. x").to_string(), "[]");
    }

    #[test]
    fn canonical_after_lambda() {
        assert!(fv("lam x. x").levels().is_empty());
        assert_eq!(fv("lam y. pi_y * x"), seq(&[&["x"]]));
    }
}
