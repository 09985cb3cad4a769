#![allow(dead_code)]

use lampi::rewrite::RewriteConfig;
use lampi::syntax::{generate, generate_subst_judgements, var, Context, Judgement, Subst, Term, Var};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn names() -> Vec<Var> {
    ["x", "y", "z"].iter().map(|n| var(n)).collect()
}

fn pick(rng: &mut ChaCha8Rng) -> Var {
    let n = names();
    n[rng.gen_range(0..n.len())].clone()
}

/// A term that need not be well formed.
pub fn raw_term(rng: &mut ChaCha8Rng, depth: u32) -> Term {
    if depth == 0 {
        return Term::Var(pick(rng));
    }
    match rng.gen_range(0..5) {
        0 => Term::Var(pick(rng)),
        1 => Term::app(raw_term(rng, depth - 1), raw_term(rng, depth - 1)),
        2 => Term::lam(&pick(rng), raw_term(rng, depth - 1)),
        _ => Term::clos(raw_subst(rng, depth - 1), raw_term(rng, depth - 1)),
    }
}

pub fn raw_subst(rng: &mut ChaCha8Rng, depth: u32) -> Subst {
    if depth == 0 {
        return if rng.gen_bool(0.5) { Subst::Id } else { Subst::pi(&pick(rng)) };
    }
    match rng.gen_range(0..4) {
        0 => Subst::Id,
        1 => Subst::pi(&pick(rng)),
        2 => Subst::cons(raw_subst(rng, depth - 1), raw_term(rng, depth - 1), &pick(rng)),
        _ => Subst::comp(raw_subst(rng, depth - 1), raw_subst(rng, depth - 1)),
    }
}

pub fn raw_context(rng: &mut ChaCha8Rng, max: usize) -> Context {
    let n = rng.gen_range(0..=max);
    Context::new((0..n).map(|_| pick(rng)).collect())
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A derivable judgement; every fourth seed gives a substitution judgement.
pub fn judgement(seed: u64, budget: usize) -> Judgement {
    if seed % 4 == 3 {
        generate_subst_judgements(seed, 1, budget, &names()).remove(0)
    } else {
        generate(seed, budget, &names())
    }
}

pub fn term_judgement(seed: u64, budget: usize) -> (Context, Term) {
    match generate(seed, budget, &names()) {
        Judgement::Term(g, m) => (g, m),
        Judgement::Subst(..) => unreachable!(),
    }
}

pub fn cfg(extra_rules: bool) -> RewriteConfig {
    RewriteConfig {
        extra_rules,
        ..RewriteConfig::default()
    }
}
