mod common;

use lampi::rewrite::{normalize, Calculus, Strategy};
use lampi::syntax::Judgement;
use lampi::termination::{
    check_label_coherence, check_q_decrease, embed_step, label, lpo_greater, r_step, star, LabTerm,
};
use lampi::wellformed::lambda_closure;
use proptest::prelude::*;

fn closed(seed: u64, budget: usize) -> Judgement {
    let (g, m) = common::term_judgement(seed, budget);
    Judgement::Term(Default::default(), lambda_closure(&g, &m))
}

fn subterms(t: &LabTerm, out: &mut Vec<LabTerm>) {
    out.push(t.clone());
    for (_, c) in t.children() {
        subterms(c, out);
    }
}

/// Labelled marked terms along a random trace, with their subterms.
fn pool(seed: u64) -> Vec<LabTerm> {
    let cfg = common::cfg(false);
    let t = normalize(&closed(seed, 16), Calculus::Spa, Strategy::Random(seed), 6, &cfg);
    let mut out = Vec::new();
    for j in t.judgements() {
        let Judgement::Term(_, m) = j else { unreachable!() };
        subterms(&label(&star(m)), &mut out);
    }
    out.sort_by_key(LabTerm::size);
    out.dedup();
    let stride = out.len().div_ceil(24).max(1);
    out.into_iter().step_by(stride).collect()
}

#[test]
fn every_q_instance_decreases() {
    let q = check_q_decrease(3);
    assert!(q.instances > 100, "{}", q.instances);
    assert!(q.failures.is_empty(), "{:?}", q.failures);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn steps_embed_coherently(seed in any::<u64>()) {
        let cfg = common::cfg(false);
        let j = closed(seed, 30);
        let t = normalize(&j, Calculus::Spa, Strategy::Random(seed), 200, &cfg);
        let mut prev = j;
        for st in &t.steps {
            let (Judgement::Term(_, m1), Judgement::Term(_, m2)) = (&prev, &st.result) else {
                unreachable!()
            };
            let rsteps = embed_step(m1, m2, &st.redex);
            prop_assert!(rsteps.is_ok(), "{} by {}: {:?}", m1, st.redex, rsteps);
            let mut cur = star(m1);
            for rs in rsteps.unwrap() {
                prop_assert!(check_label_coherence(&cur, &rs).is_ok(), "{} by {}", cur, rs.rule);
                cur = r_step(&cur, &rs).unwrap();
            }
            prop_assert_eq!(cur, star(m2));
            prev = st.result.clone();
        }
    }

    #[test]
    fn lpo_is_a_strict_order_with_the_subterm_property(seed in any::<u64>()) {
        let ts = pool(seed);
        for a in &ts {
            prop_assert!(!lpo_greater(a, a), "{}", a);
            for (_, c) in a.children() {
                prop_assert!(lpo_greater(a, c), "{} {}", a, c);
            }
        }
        for a in &ts {
            for b in ts.iter().filter(|b| lpo_greater(a, b)) {
                prop_assert!(!lpo_greater(b, a), "{} {}", a, b);
                for c in ts.iter().filter(|c| lpo_greater(b, c)) {
                    prop_assert!(lpo_greater(a, c), "{} {} {}", a, b, c);
                }
            }
        }
    }
}

#[test]
fn pools_are_not_trivial() {
    let sizes: usize = (0..20).map(|s| pool(s).len()).sum();
    assert!(sizes > 200, "{sizes}");
}
