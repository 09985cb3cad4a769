mod common;

use lampi::freevars::{apply_o, fv_judgement, fv_term, FvSeq};
use lampi::nameless::alpha_eq;
use lampi::rewrite::{
    classify_subst_nf, is_pure, normalize, normalize_spa, redexes, successors, Calculus, RuleName,
    Strategy, SPA_STEP_CAP,
};
use lampi::syntax::{Judgement, Subst, Term};
use lampi::wellformed::derive;
use proptest::prelude::*;
use rand::Rng;

const CALCULI: [Calculus; 2] = [Calculus::Spa, Calculus::Lpi];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn every_step_keeps_derivability(seed in any::<u64>(), extra in any::<bool>()) {
        let cfg = common::cfg(extra);
        let j = common::judgement(seed, 30);
        for calc in CALCULI {
            for (r, k) in successors(&j, calc, &cfg) {
                prop_assert!(derive(&k).is_ok(), "{} by {} gives {}", j, r, k);
                if let (Judgement::Subst(_, _, d1), Judgement::Subst(_, _, d2)) = (&j, &k) {
                    prop_assert_eq!(d1, d2);
                }
            }
        }
    }

    #[test]
    fn fv_never_grows(seed in any::<u64>(), extra in any::<bool>()) {
        let cfg = common::cfg(extra);
        let j = common::judgement(seed, 30);
        let mut rng = common::rng(seed);
        let samples: Vec<FvSeq> = (0..4)
            .map(|_| fv_term(&common::raw_term(&mut rng, 3)))
            .collect();
        for calc in CALCULI {
            for (r, k) in successors(&j, calc, &cfg) {
                match (&j, &k) {
                    (Judgement::Term(g1, m1), Judgement::Term(g2, m2)) => {
                        prop_assert!(fv_judgement(g2, m2).sqsubseteq(&fv_judgement(g1, m1)));
                        if r.rule != RuleName::Alpha2 {
                            prop_assert!(fv_term(m2).sqsubseteq(&fv_term(m1)), "{} by {}", j, r);
                        }
                        if matches!(r.rule, RuleName::Abs | RuleName::Alpha1) {
                            prop_assert_eq!(fv_term(m2), fv_term(m1), "{} by {}", j, r);
                        }
                    }
                    (Judgement::Subst(_, s1, _), Judgement::Subst(_, s2, _)) => {
                        for a in &samples {
                            prop_assert!(apply_o(s2, a).sqsubseteq(&apply_o(s1, a)), "{} by {}", j, r);
                        }
                    }
                    _ => prop_assert!(false, "step changed the judgement kind"),
                }
            }
        }
    }

    #[test]
    fn normal_forms_have_the_listed_shapes(seed in any::<u64>(), extra in any::<bool>()) {
        let j = common::judgement(seed, 40);
        let t = normalize_spa(&j, &common::cfg(extra)).unwrap();
        match t.last() {
            Judgement::Term(_, m) => prop_assert!(is_pure(m), "{}", t.last()),
            Judgement::Subst(_, s, _) => prop_assert!(classify_subst_nf(s).is_some(), "{}", s),
        }
    }

    #[test]
    fn lookup_in_a_cons_list(seed in any::<u64>(), pad in 0usize..4) {
        let cfg = common::cfg(false);
        let (g, n) = common::term_judgement(seed, 20);
        let names = common::names();
        let mut rng = common::rng(seed);
        let a = names[rng.gen_range(0..3)].clone();
        let mut s = Subst::cons(Subst::Id, n.clone(), &a);
        for _ in 0..pad {
            let others: Vec<_> = names.iter().filter(|b| **b != a).collect();
            let b = others[rng.gen_range(0..others.len())];
            let filler = match g.last() {
                Some(v) => Term::Var(v.clone()),
                None => n.clone(),
            };
            s = Subst::cons(s, filler, b);
        }
        let lookup = Judgement::Term(g.clone(), Term::clos(s, Term::Var(a)));
        prop_assert!(derive(&lookup).is_ok());
        let got = normalize_spa(&lookup, &cfg).unwrap();
        let want = normalize_spa(&Judgement::Term(g, n), &cfg).unwrap();
        prop_assert_eq!(got.last(), want.last());
    }

    #[test]
    fn any_two_orders_agree(seed in any::<u64>(), s1 in any::<u64>(), s2 in any::<u64>(), extra in any::<bool>()) {
        let cfg = common::cfg(extra);
        let j = common::judgement(seed, 30);
        let a = normalize(&j, Calculus::Spa, Strategy::Random(s1), SPA_STEP_CAP, &cfg);
        let b = normalize(&j, Calculus::Spa, Strategy::Random(s2), SPA_STEP_CAP, &cfg);
        prop_assert_eq!(alpha_eq(a.last(), b.last()), Ok(true), "{} vs {}", a.last(), b.last());
    }

    #[test]
    fn renamed_binder_is_not_renamed_again(seed in any::<u64>()) {
        let cfg = common::cfg(false);
        let j = common::judgement(seed, 30);
        let t = normalize(&j, Calculus::Spa, Strategy::Random(seed), SPA_STEP_CAP, &cfg);
        for st in t.steps.iter().filter(|s| s.redex.rule == RuleName::Alpha1) {
            let again = redexes(&st.result, Calculus::Spa, &cfg)
                .into_iter()
                .any(|r| r.rule == RuleName::Alpha1 && r.position == st.redex.position);
            prop_assert!(!again, "{}", st.result);
        }
    }
}
