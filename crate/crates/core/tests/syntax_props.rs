mod common;

use lampi::syntax::{parse, Category, Judgement, Parsed};
use lampi::wellformed::derive;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn judgements_round_trip(seed in any::<u64>(), budget in 1usize..30) {
        let j = common::judgement(seed, budget);
        let text = j.to_string();
        prop_assert_eq!(parse(&text, Category::Judgement).unwrap(), Parsed::Judgement(j.clone()));
        prop_assert_eq!(
            parse(&j.context().to_string(), Category::Context).unwrap(),
            Parsed::Context(j.context().clone())
        );
        match &j {
            Judgement::Term(_, m) => {
                let back = parse(&m.to_string(), Category::Term).unwrap();
                prop_assert_eq!(&back, &Parsed::Term(m.clone()));
                let Parsed::Term(b) = back else { unreachable!() };
                prop_assert_eq!(b.grammar_class(), m.grammar_class());
            }
            Judgement::Subst(_, s, _) => {
                let back = parse(&s.to_string(), Category::Subst).unwrap();
                prop_assert_eq!(&back, &Parsed::Subst(s.clone()));
                let Parsed::Subst(b) = back else { unreachable!() };
                prop_assert_eq!(b.grammar_class(), s.grammar_class());
            }
        }
    }

    #[test]
    fn raw_terms_round_trip(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let m = common::raw_term(&mut rng, 5);
        let s = common::raw_subst(&mut rng, 4);
        prop_assert_eq!(parse(&m.to_string(), Category::Term).unwrap(), Parsed::Term(m));
        prop_assert_eq!(parse(&s.to_string(), Category::Subst).unwrap(), Parsed::Subst(s));
    }

    #[test]
    fn generated_judgements_are_derivable(seed in any::<u64>(), budget in 1usize..40) {
        let j = common::judgement(seed, budget);
        prop_assert!(derive(&j).is_ok(), "{}", j);
        prop_assert!(j.size() <= budget);
    }
}
