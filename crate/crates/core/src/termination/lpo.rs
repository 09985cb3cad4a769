//! Lexicographic path order over labelled terms.

use super::LabTerm;
use crate::syntax::Var;

/// Function symbols of `Q`. Closures and compositions share `∘ᵢ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Symbol {
    Var(Var),
    Pi(Var),
    Id,
    Meta(String),
    App,
    Lam(Var),
    Bold(Var, u32),
    Circ(u32),
    Cons(Var),
    /// Unlabelled bold `λ` or `∘`; compares with nothing.
    Unlabelled,
}

impl Symbol {
    pub fn of(t: &LabTerm) -> Symbol {
        match t {
            LabTerm::Var(a) => Symbol::Var(a.clone()),
            LabTerm::Pi(a) => Symbol::Pi(a.clone()),
            LabTerm::Id => Symbol::Id,
            LabTerm::Meta(n) => Symbol::Meta(n.clone()),
            LabTerm::App(..) => Symbol::App,
            LabTerm::Lam(a, _) => Symbol::Lam(a.clone()),
            LabTerm::Bold(a, Some(i), _) => Symbol::Bold(a.clone(), *i),
            LabTerm::Clos(Some(i), ..) | LabTerm::Comp(Some(i), ..) => Symbol::Circ(*i),
            LabTerm::Cons(_, _, a) => Symbol::Cons(a.clone()),
            LabTerm::Bold(_, None, _) | LabTerm::Clos(None, ..) | LabTerm::Comp(None, ..) => {
                Symbol::Unlabelled
            }
        }
    }
}

/// The precedence of the termination proof for `Q`, transitively closed:
///
/// ```text
/// 𝝀_{i+1}a > ∘ᵢ > 𝝀ᵢa      ∘ᵢ > λa, ·, ⟨-,-\a⟩, π_a, a
/// 𝝀ᵢa > λb, ⟨-,-\a⟩, π_b, b
/// 𝝀ᵢa > 𝝀ⱼa and ∘ᵢ > ∘ⱼ    for i > j
/// ```
#[derive(Debug, Clone, Copy, Default)]
pub struct Precedence;

fn below_all(g: &Symbol) -> bool {
    matches!(
        g,
        Symbol::Lam(_) | Symbol::App | Symbol::Cons(_) | Symbol::Pi(_) | Symbol::Var(_)
    )
}

impl Precedence {
    pub fn gt(&self, f: &Symbol, g: &Symbol) -> bool {
        match (f, g) {
            (Symbol::Circ(i), Symbol::Circ(j)) => j < i,
            (Symbol::Circ(i), Symbol::Bold(_, j)) => j <= i,
            (Symbol::Circ(_), g) => below_all(g),
            (Symbol::Bold(_, i), Symbol::Bold(_, j)) => j < i,
            (Symbol::Bold(_, i), Symbol::Circ(j)) => j < i,
            (Symbol::Bold(_, i), Symbol::App) => *i >= 1,
            (Symbol::Bold(a, i), Symbol::Cons(b)) => *i >= 1 || a == b,
            (Symbol::Bold(..), g) => below_all(g),
            _ => false,
        }
    }

    /// The generating pairs as listed in the proof, over the given symbols.
    pub fn base_pairs(&self, symbols: &[Symbol]) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (x, f) in symbols.iter().enumerate() {
            for (y, g) in symbols.iter().enumerate() {
                let direct = match (f, g) {
                    (Symbol::Bold(_, i), Symbol::Circ(j)) => *i == j + 1,
                    (Symbol::Circ(i), Symbol::Bold(_, j)) => i == j,
                    (Symbol::Circ(i), Symbol::Circ(j)) => i > j,
                    (Symbol::Circ(_), g) => below_all(g),
                    (Symbol::Bold(a, i), Symbol::Bold(b, j)) => a == b && i > j,
                    (Symbol::Bold(a, _), Symbol::Cons(b)) => a == b,
                    (Symbol::Bold(..), g) => matches!(g, Symbol::Lam(_) | Symbol::Pi(_) | Symbol::Var(_)),
                    _ => false,
                };
                if direct {
                    out.push((x, y));
                }
            }
        }
        out
    }
}

/// Lexicographic status of `∘ᵢ`; every other symbol compares left to right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CompStatus {
    LeftToRight,
    #[default]
    RightToLeft,
}

fn args(t: &LabTerm) -> Vec<&LabTerm> {
    t.children().into_iter().map(|(_, c)| c).collect()
}

fn geq(s: &LabTerm, t: &LabTerm, st: CompStatus) -> bool {
    s == t || gt(s, t, st)
}

fn gt(s: &LabTerm, t: &LabTerm, st: CompStatus) -> bool {
    let ss = args(s);
    if ss.iter().any(|si| geq(si, t, st)) {
        return true;
    }
    let (f, g) = (Symbol::of(s), Symbol::of(t));
    let ts = args(t);
    if Precedence.gt(&f, &g) {
        return ts.iter().all(|tj| gt(s, tj, st));
    }
    if f == g && f != Symbol::Unlabelled && ss.len() == ts.len() {
        let mut pairs: Vec<(&LabTerm, &LabTerm)> = ss.iter().copied().zip(ts.iter().copied()).collect();
        if matches!(f, Symbol::Circ(_)) && st == CompStatus::RightToLeft {
            pairs.reverse();
        }
        for (a, b) in pairs {
            if a == b {
                continue;
            }
            return gt(a, b, st) && ts.iter().all(|tj| gt(s, tj, st));
        }
        return false;
    }
    false
}

/// `t1 >lpo t2` with right-to-left status for `∘ᵢ`.
pub fn lpo_greater(t1: &LabTerm, t2: &LabTerm) -> bool {
    gt(t1, t2, CompStatus::RightToLeft)
}

pub fn lpo_greater_with(t1: &LabTerm, t2: &LabTerm, status: CompStatus) -> bool {
    gt(t1, t2, status)
}

/// Transitive closure of a relation on `0..n`.
#[cfg(test)]
fn closure(n: usize, pairs: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut r = vec![vec![false; n]; n];
    for &(a, b) in pairs {
        r[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if r[i][k] {
                let row = r[k].clone();
                for (j, &hit) in row.iter().enumerate() {
                    if hit {
                        r[i][j] = true;
                    }
                }
            }
        }
    }
    r
}
