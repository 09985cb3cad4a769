//! A plain de Bruijn β-normalizer with textbook shifting, kept apart from the
//! rest of the crate so it can serve as a reference.

use std::collections::HashMap;

use crate::nameless::NTerm;
use crate::syntax::{Term, Var};

/// Indices start at 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Db {
    Var(usize),
    Lam(Box<Db>),
    App(Box<Db>, Box<Db>),
}

impl Db {
    pub fn size(&self) -> usize {
        match self {
            Db::Var(_) => 1,
            Db::Lam(b) => 1 + b.size(),
            Db::App(f, a) => 1 + f.size() + a.size(),
        }
    }
}

/// Closure-free named term to de Bruijn; `env` lists binders outermost first.
pub fn from_named(t: &Term, env: &[Var]) -> Option<Db> {
    fn go(t: &Term, env: &mut Vec<Var>) -> Option<Db> {
        match t {
            Term::Var(v) => env.iter().rev().position(|w| w == v).map(Db::Var),
            Term::Lam(a, b) => {
                env.push(a.clone());
                let r = go(b, env);
                env.pop();
                Some(Db::Lam(Box::new(r?)))
            }
            Term::App(f, a) => Some(Db::App(Box::new(go(f, env)?), Box::new(go(a, env)?))),
            Term::Clos(..) => None,
        }
    }
    go(t, &mut env.to_vec())
}

/// Pure name-free term (numerals as leaves) to de Bruijn.
pub fn from_nameless(t: &NTerm) -> Option<Db> {
    match t {
        NTerm::App(f, a) => Some(Db::App(Box::new(from_nameless(f)?), Box::new(from_nameless(a)?))),
        NTerm::Lam(b) => Some(Db::Lam(Box::new(from_nameless(b)?))),
        t => t.numeral_value().map(|n| Db::Var(n as usize - 1)),
    }
}

fn shift(t: &Db, d: isize, cutoff: usize) -> Db {
    match t {
        Db::Var(k) if *k >= cutoff => Db::Var((*k as isize + d) as usize),
        Db::Var(k) => Db::Var(*k),
        Db::Lam(b) => Db::Lam(Box::new(shift(b, d, cutoff + 1))),
        Db::App(f, a) => Db::App(Box::new(shift(f, d, cutoff)), Box::new(shift(a, d, cutoff))),
    }
}

fn subst(t: &Db, j: usize, s: &Db) -> Db {
    match t {
        Db::Var(k) if *k == j => s.clone(),
        Db::Var(k) => Db::Var(*k),
        Db::Lam(b) => Db::Lam(Box::new(subst(b, j + 1, &shift(s, 1, 0)))),
        Db::App(f, a) => Db::App(Box::new(subst(f, j, s)), Box::new(subst(a, j, s))),
    }
}

/// `(λM) N → ↑⁻¹(M[0 := ↑N])`
fn beta(body: &Db, arg: &Db) -> Db {
    shift(&subst(body, 0, &shift(arg, 1, 0)), -1, 0)
}

fn step(t: &Db) -> Option<Db> {
    match t {
        Db::App(f, a) => {
            if let Db::Lam(b) = &**f {
                return Some(beta(b, a));
            }
            step(f)
                .map(|f2| Db::App(Box::new(f2), a.clone()))
                .or_else(|| step(a).map(|a2| Db::App(f.clone(), Box::new(a2))))
        }
        Db::Lam(b) => step(b).map(|b2| Db::Lam(Box::new(b2))),
        Db::Var(_) => None,
    }
}

/// Normal-order β-normal form, or `None` after `fuel` steps or once a term
/// grows beyond `max_size`.
pub fn normalize(t: &Db, fuel: usize, max_size: usize) -> Option<Db> {
    let mut cur = t.clone();
    for _ in 0..fuel {
        match step(&cur) {
            None => return Some(cur),
            Some(n) if n.size() > max_size => return None,
            Some(n) => cur = n,
        }
    }
    None
}

/// Memoizing front end for repeated queries.
#[derive(Default)]
pub struct Oracle {
    cache: HashMap<Db, Option<Db>>,
}

impl Oracle {
    pub fn normal_form(&mut self, t: &Db, fuel: usize, max_size: usize) -> Option<Db> {
        self.cache
            .entry(t.clone())
            .or_insert_with(|| normalize(t, fuel, max_size))
            .clone()
    }
}
