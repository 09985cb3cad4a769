mod common;

use std::collections::BTreeSet;

use lampi::freevars::{apply_o, fv_subst, fv_term, FvSeq};
use lampi::syntax::{Subst, Term, Var};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn raw_seq(rng: &mut ChaCha8Rng) -> FvSeq {
    let names = common::names();
    let len = rng.gen_range(0..5);
    FvSeq::from_levels(
        (0..len)
            .map(|_| names.iter().filter(|_| rng.gen_bool(0.4)).cloned().collect())
            .collect(),
    )
}

/// A sequence `⊑ b`: every name dropped or moved to a level no higher.
fn lowered(rng: &mut ChaCha8Rng, b: &FvSeq) -> FvSeq {
    let mut levels: Vec<BTreeSet<Var>> = vec![BTreeSet::new(); b.levels().len()];
    for (j, level) in b.levels().iter().enumerate() {
        for v in level {
            if rng.gen_bool(0.8) {
                levels[rng.gen_range(0..=j)].insert(v.clone());
            }
        }
    }
    FvSeq::from_levels(levels)
}

/// A sequence `⊆ b`.
fn thinned(rng: &mut ChaCha8Rng, b: &FvSeq) -> FvSeq {
    FvSeq::from_levels(
        b.levels()
            .iter()
            .map(|l| l.iter().filter(|_| rng.gen_bool(0.7)).cloned().collect())
            .collect(),
    )
}

fn canonical(a: &FvSeq) -> bool {
    a.levels().last().is_none_or(|l| !l.is_empty())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn composition_is_associative_for_fv(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let s = common::raw_subst(&mut rng, 3);
        let q = common::raw_subst(&mut rng, 3);
        let m = common::raw_term(&mut rng, 3);
        prop_assert_eq!(
            fv_term(&Term::clos(Subst::comp(s.clone(), q.clone()), m.clone())),
            fv_term(&Term::clos(s, Term::clos(q, m)))
        );
    }

    #[test]
    fn cons_closure_is_a_redex_for_fv(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let s = common::raw_subst(&mut rng, 3);
        let n = common::raw_term(&mut rng, 3);
        let m = common::raw_term(&mut rng, 3);
        let a = common::names()[rng.gen_range(0..3)].clone();
        prop_assert_eq!(
            fv_term(&Term::clos(Subst::cons(s.clone(), n.clone(), &a), m.clone())),
            fv_term(&Term::app(Term::clos(s, Term::lam(&a, m)), n))
        );
    }

    #[test]
    fn apply_o_is_monotone(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let s = common::raw_subst(&mut rng, 3);
        let b = raw_seq(&mut rng);
        let a = thinned(&mut rng, &b);
        prop_assert!(a.subseteq(&b));
        prop_assert!(apply_o(&s, &a).subseteq(&apply_o(&s, &b)));
        let c = lowered(&mut rng, &b);
        prop_assert!(c.sqsubseteq(&b), "{} {}", c, b);
        prop_assert!(apply_o(&s, &c).sqsubseteq(&apply_o(&s, &b)));
    }

    #[test]
    fn union_is_monotone(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let b = raw_seq(&mut rng);
        let c = raw_seq(&mut rng);
        let a = thinned(&mut rng, &b);
        prop_assert!(a.union(&c).subseteq(&b.union(&c)));
        prop_assert!(c.union(&a).subseteq(&c.union(&b)));
        let l = lowered(&mut rng, &b);
        prop_assert!(l.union(&c).sqsubseteq(&b.union(&c)));
        prop_assert!(c.union(&l).sqsubseteq(&c.union(&b)));
    }

    #[test]
    fn inclusion_implies_suffix_inclusion(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let a = raw_seq(&mut rng);
        let b = raw_seq(&mut rng);
        if a.subseteq(&b) {
            prop_assert!(a.sqsubseteq(&b));
        }
        prop_assert!(a.sqsubseteq(&a));
    }

    #[test]
    fn results_are_canonical(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let m = common::raw_term(&mut rng, 4);
        let s = common::raw_subst(&mut rng, 4);
        let a = raw_seq(&mut rng);
        let b = raw_seq(&mut rng);
        prop_assert!(canonical(&fv_term(&m)));
        prop_assert!(canonical(&fv_subst(&s)));
        prop_assert!(canonical(&apply_o(&s, &a)));
        prop_assert!(canonical(&a.union(&b)));
        prop_assert!(canonical(&a.shifted()));
        prop_assert!(canonical(&a.under_lambda(&common::names()[0])));
    }
}
