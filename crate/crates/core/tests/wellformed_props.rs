mod common;

use std::collections::BTreeMap;

use lampi::syntax::{enumerate_judgements, var, Context, Judgement, Subst, Term, Var, MAX_CONTEXT};
use lampi::wellformed::{derive, lambda_closure, shape_rules, Derivation};
use proptest::prelude::*;

/// Number of derivations of `Γ ⊢ M`, trying every rule at every node.
fn count_term(g: &Context, m: &Term) -> u64 {
    match m {
        Term::Var(a) => {
            let Some((init, last)) = g.split_last() else { return 0 };
            let by_i = u64::from(last == a);
            let by_ii = if last != a { count_term(&init, m) } else { 0 };
            by_i + by_ii
        }
        Term::App(f, n) => count_term(g, f) * count_term(g, n),
        Term::Lam(a, b) => count_term(&g.extended(a), b),
        Term::Clos(s, b) => count_subst(g, s)
            .iter()
            .map(|(d, c)| c * count_term(d, b))
            .sum(),
    }
}

/// Every `Δ` with `Γ ⊢ s ▷ Δ`, with its number of derivations.
fn count_subst(g: &Context, s: &Subst) -> BTreeMap<Context, u64> {
    let mut out = BTreeMap::new();
    match s {
        Subst::Id => {
            out.insert(g.clone(), 1);
        }
        Subst::Pi(a) => {
            if let Some((init, last)) = g.split_last() {
                if last == a {
                    out.insert(init, 1);
                }
            }
        }
        Subst::Cons(rest, n, a) => {
            let cn = count_term(g, n);
            for (d, c) in count_subst(g, rest) {
                *out.entry(d.extended(a)).or_insert(0) += c * cn;
            }
        }
        Subst::Comp(l, r) => {
            for (mid, c1) in count_subst(g, l) {
                for (d, c2) in count_subst(&mid, r) {
                    *out.entry(d).or_insert(0) += c1 * c2;
                }
            }
        }
    }
    out.retain(|_, c| *c > 0);
    out
}

fn count(j: &Judgement) -> u64 {
    match j {
        Judgement::Term(g, m) => count_term(g, m),
        Judgement::Subst(g, s, d) => count_subst(g, s).get(d).copied().unwrap_or(0),
    }
}

fn check_shapes(d: &Derivation) {
    d.visit(&mut |n: &Derivation| {
        assert_eq!(shape_rules(&n.conclusion), vec![n.rule], "{}", n.conclusion);
    });
}

#[test]
fn derivations_are_unique_up_to_size_six() {
    let names: Vec<Var> = ["x", "y"].iter().map(|n| var(n)).collect();
    let all = enumerate_judgements(6, &names, MAX_CONTEXT);
    assert!(all.len() > 1000);
    for j in &all {
        assert_eq!(count(j), 1, "{j}");
        check_shapes(&derive(j).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn search_agrees_with_derive_on_raw_judgements(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let g = common::raw_context(&mut rng, 3);
        let m = common::raw_term(&mut rng, 4);
        let j = Judgement::Term(g, m);
        let n = count(&j);
        prop_assert!(n <= 1, "{} has {} derivations", j, n);
        prop_assert_eq!(n == 1, derive(&j).is_ok(), "{}", j);
    }

    #[test]
    fn search_agrees_on_raw_substitutions(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let g = common::raw_context(&mut rng, 3);
        let s = common::raw_subst(&mut rng, 4);
        let cods = count_subst(&g, &s);
        prop_assert!(cods.len() <= 1);
        for (d, c) in cods {
            prop_assert_eq!(c, 1);
            prop_assert!(derive(&Judgement::Subst(g.clone(), s.clone(), d)).is_ok());
        }
    }

    #[test]
    fn generation_lemma(seed in any::<u64>()) {
        let j = common::judgement(seed, 30);
        check_shapes(&derive(&j).unwrap());
    }

    #[test]
    fn closure_equivalence(seed in any::<u64>(), split in 0usize..4) {
        let mut rng = common::rng(seed);
        let g = common::raw_context(&mut rng, 3);
        let m = common::raw_term(&mut rng, 4);
        let k = split.min(g.len());
        let prefix = g.prefix(k);
        let closed = lambda_closure(&g.suffix(k), &m);
        prop_assert_eq!(
            derive(&Judgement::Term(g.clone(), m.clone())).is_ok(),
            derive(&Judgement::Term(prefix, closed)).is_ok()
        );
    }
}
