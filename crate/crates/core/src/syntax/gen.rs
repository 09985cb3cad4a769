//! Random and exhaustive production of derivable judgements.
//!
//! Both walk the inference rules top-down, so everything produced is
//! derivable by construction. Size is the constructor count of
//! [`Term::size`]; binder names and π subscripts are not counted.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Context, Judgement, Subst, Term, Var};

/// Longest context the generator starts from.
pub const MAX_CONTEXT: usize = 2;

/// Seeded generator of derivable judgements.
pub struct Generator {
    rng: ChaCha8Rng,
    vocab: Vec<Var>,
}

fn min_term(ctx: &Context) -> usize {
    if ctx.is_empty() {
        2
    } else {
        1
    }
}

impl Generator {
    pub fn new(seed: u64, vocab: &[Var]) -> Generator {
        assert!(!vocab.is_empty(), "vocabulary must be non-empty");
        Generator {
            rng: ChaCha8Rng::seed_from_u64(seed),
            vocab: vocab.to_vec(),
        }
    }

    fn pick_var(&mut self) -> Var {
        self.vocab.choose(&mut self.rng).expect("non-empty").clone()
    }

    fn context(&mut self, budget: usize) -> Context {
        let lo = usize::from(budget < 2);
        let len = self.rng.gen_range(lo..=MAX_CONTEXT);
        Context::new((0..len).map(|_| self.pick_var()).collect())
    }

    /// A derivable `Γ ⊢ M` with `M.size() <= budget`.
    pub fn term_judgement(&mut self, budget: usize) -> Judgement {
        let budget = budget.max(1);
        let ctx = self.context(budget);
        let target = self.rng.gen_range(min_term(&ctx)..=budget.max(min_term(&ctx)));
        let m = self.term(&ctx, target);
        Judgement::Term(ctx, m)
    }

    /// A derivable `Γ ⊢ s ▷ Δ` with `s.size() <= budget`.
    pub fn subst_judgement(&mut self, budget: usize) -> Judgement {
        let budget = budget.max(1);
        let ctx = self.context(budget);
        let target = self.rng.gen_range(1..=budget);
        let (s, cod) = self.subst(&ctx, target);
        Judgement::Subst(ctx, s, cod)
    }

    /// Term of size at most `n` in `ctx`; `n >= min_term(ctx)`.
    fn term(&mut self, ctx: &Context, n: usize) -> Term {
        let m = min_term(ctx);
        debug_assert!(n >= m);
        let big = n.min(8) as u32;
        let mut choices: Vec<(u8, u32)> = Vec::new();
        if !ctx.is_empty() {
            choices.push((0, 3));
        }
        if n >= 2 {
            choices.push((1, 2 + big / 2));
        }
        if n > 2 * m {
            choices.push((2, big));
        }
        if n >= 2 + m {
            choices.push((3, big));
        }
        let rule = choices
            .choose_weighted(&mut self.rng, |c| c.1)
            .expect("some rule fits")
            .0;
        match rule {
            0 => Term::Var(ctx.entries().choose(&mut self.rng).unwrap().clone()),
            1 => {
                let a = self.pick_var();
                let body = self.term(&ctx.extended(&a), n - 1);
                Term::Lam(a, Box::new(body))
            }
            2 => {
                let left = self.rng.gen_range(m..=n - 1 - m);
                let f = self.term(ctx, left);
                let rest = n - 1 - f.size();
                let a = self.term(ctx, rest);
                Term::app(f, a)
            }
            _ => {
                for _ in 0..8 {
                    let k = self.rng.gen_range(1..=n - 2);
                    let (s, cod) = self.subst(ctx, k);
                    let rest = n - 1 - s.size();
                    if rest >= min_term(&cod) {
                        let body = self.term(&cod, rest);
                        return Term::clos(s, body);
                    }
                }
                let body = self.term(ctx, n - 2);
                Term::clos(Subst::Id, body)
            }
        }
    }

    /// Substitution of size at most `n >= 1` from `ctx`, with its codomain.
    fn subst(&mut self, ctx: &Context, n: usize) -> (Subst, Context) {
        let big = n.min(8) as u32;
        let mut choices: Vec<(u8, u32)> = vec![(0, 2)];
        if !ctx.is_empty() {
            choices.push((1, 3));
        }
        if n >= 2 + min_term(ctx) {
            choices.push((2, big));
        }
        if n >= 3 {
            choices.push((3, big / 2));
        }
        let rule = choices
            .choose_weighted(&mut self.rng, |c| c.1)
            .expect("id always fits")
            .0;
        match rule {
            0 => (Subst::Id, ctx.clone()),
            1 => {
                let (init, last) = ctx.split_last().unwrap();
                (Subst::Pi(last.clone()), init)
            }
            2 => {
                let k = self.rng.gen_range(1..=n - 1 - min_term(ctx));
                let (s, cod) = self.subst(ctx, k);
                let t = self.term(ctx, n - 1 - s.size());
                let a = self.pick_var();
                let cod = cod.extended(&a);
                (Subst::cons(s, t, &a), cod)
            }
            _ => {
                let k = self.rng.gen_range(1..=n - 2);
                let (s, mid) = self.subst(ctx, k);
                let (q, cod) = self.subst(&mid, n - 1 - s.size());
                (Subst::comp(s, q), cod)
            }
        }
    }
}

/// The judgement produced from `seed`; identical seeds give identical output.
pub fn generate(seed: u64, size_budget: usize, vocab: &[Var]) -> Judgement {
    Generator::new(seed, vocab).term_judgement(size_budget)
}

/// `count` substitution judgements from consecutive seeds starting at `seed`.
pub fn generate_subst_judgements(
    seed: u64,
    count: usize,
    size_budget: usize,
    vocab: &[Var],
) -> Vec<Judgement> {
    (0..count as u64)
        .map(|i| Generator::new(seed.wrapping_add(i), vocab).subst_judgement(size_budget))
        .collect()
}

/// Exhaustive enumeration of derivable term judgements.
struct Enumerator<'a> {
    vocab: &'a [Var],
    terms: HashMap<(Context, usize), Vec<Term>>,
    substs: HashMap<(Context, usize), Vec<(Subst, Context)>>,
}

impl Enumerator<'_> {
    /// Terms of size exactly `n`.
    fn terms(&mut self, ctx: &Context, n: usize) -> Vec<Term> {
        if let Some(v) = self.terms.get(&(ctx.clone(), n)) {
            return v.clone();
        }
        let mut out = Vec::new();
        if n == 1 {
            let mut seen = Vec::new();
            for v in ctx.iter() {
                if !seen.contains(v) {
                    seen.push(v.clone());
                    out.push(Term::Var(v.clone()));
                }
            }
        }
        if n >= 2 {
            for a in self.vocab {
                for body in self.terms(&ctx.extended(a), n - 1) {
                    out.push(Term::Lam(a.clone(), Box::new(body)));
                }
            }
        }
        if n >= 3 {
            for k in 1..n - 1 {
                let fs = self.terms(ctx, k);
                if fs.is_empty() {
                    continue;
                }
                let args = self.terms(ctx, n - 1 - k);
                for f in &fs {
                    for a in &args {
                        out.push(Term::app(f.clone(), a.clone()));
                    }
                }
            }
            for k in 1..n - 1 {
                for (s, cod) in self.substs(ctx, k) {
                    for m in self.terms(&cod, n - 1 - k) {
                        out.push(Term::clos(s.clone(), m));
                    }
                }
            }
        }
        self.terms.insert((ctx.clone(), n), out.clone());
        out
    }

    fn substs(&mut self, ctx: &Context, n: usize) -> Vec<(Subst, Context)> {
        if let Some(v) = self.substs.get(&(ctx.clone(), n)) {
            return v.clone();
        }
        let mut out = Vec::new();
        if n == 1 {
            out.push((Subst::Id, ctx.clone()));
            if let Some((init, last)) = ctx.split_last() {
                out.push((Subst::Pi(last.clone()), init));
            }
        }
        if n >= 3 {
            for k in 1..n - 1 {
                let ss = self.substs(ctx, k);
                let ns = self.terms(ctx, n - 1 - k);
                for (s, cod) in &ss {
                    for t in &ns {
                        for a in self.vocab {
                            out.push((Subst::cons(s.clone(), t.clone(), a), cod.extended(a)));
                        }
                    }
                }
                for (s, mid) in ss {
                    for (q, cod) in self.substs(&mid, n - 1 - k) {
                        out.push((Subst::comp(s.clone(), q), cod));
                    }
                }
            }
        }
        self.substs.insert((ctx.clone(), n), out.clone());
        out
    }
}

fn contexts(vocab: &[Var], max_len: usize) -> Vec<Context> {
    let mut all = vec![Context::empty()];
    let mut layer = vec![Context::empty()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|c| vocab.iter().map(move |v| c.extended(v)))
            .collect();
        all.extend(layer.iter().cloned());
    }
    all
}

/// Every derivable `Γ ⊢ M` with `|Γ| <= max_context` over `vocab` and
/// `M.size() <= max_size`.
pub fn enumerate_judgements(max_size: usize, vocab: &[Var], max_context: usize) -> Vec<Judgement> {
    let mut e = Enumerator {
        vocab,
        terms: HashMap::new(),
        substs: HashMap::new(),
    };
    let mut out = Vec::new();
    for ctx in contexts(vocab, max_context) {
        for n in 1..=max_size {
            for m in e.terms(&ctx, n) {
                out.push(Judgement::Term(ctx.clone(), m));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::var;

    #[test]
    fn budget_one_is_a_variable() {
        for seed in 0..50 {
            let j = generate(seed, 1, &[var("x")]);
            let Judgement::Term(ctx, Term::Var(v)) = &j else {
                panic!("{j}")
            };
            assert_eq!(v, &var("x"));
            assert!(ctx.iter().any(|c| c == v));
        }
    }

    #[test]
    fn deterministic() {
        let vocab = [var("x"), var("y"), var("z")];
        for seed in 0..50 {
            assert_eq!(generate(seed, 9, &vocab), generate(seed, 9, &vocab));
        }
    }

    #[test]
    fn respects_budget() {
        let vocab = [var("x"), var("y")];
        for seed in 0..500 {
            for b in 1..10 {
                assert!(generate(seed, b, &vocab).size() <= b);
            }
        }
    }

    #[test]
    fn enumeration_small_counts() {
        let vocab = [var("x")];
        // |- lam x. x ; x |- x ; x |- lam x. x ; x, x |- x ...
        let js = enumerate_judgements(2, &vocab, 1);
        let printed: Vec<String> = js.iter().map(|j| j.to_string()).collect();
        assert_eq!(printed, vec!["|- lam x. x", "x |- x", "x |- lam x. x"]);
    }
}
