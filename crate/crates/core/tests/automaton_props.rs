use maxdelay::periodic::{member, Lasso};
use maxdelay::reduce::{diagonal_lift, parity_to_max, safety_to_max, ParityAutomaton, SafetyAutomaton};
use maxdelay::{apply_ops, parse_automaton, serialize_automaton, CounterValuation, MaxAutomaton, Word};
use maxdelay_testkit::{
    parity_accepts, random_automaton, random_lasso, random_parity, random_safety, random_word, rng,
    safety_accepts, Shape,
};
use proptest::prelude::*;

fn automaton(seed: u64, shape: &Shape) -> MaxAutomaton {
    random_automaton(&mut rng(seed), shape)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(250))]

    #[test]
    fn runs_are_deterministic(seed in any::<u64>(), len in 0usize..20) {
        let a = automaton(seed, &Shape::plain(3, 2, 3, 3));
        let w = random_word(&mut rng(seed ^ 1), 3, len);
        prop_assert_eq!(a.run_finite(a.initial(), &w).unwrap(), a.run_finite(a.initial(), &w).unwrap());
    }

    #[test]
    fn samples_follow_apply_ops(seed in any::<u64>(), len in 0usize..20) {
        let a = automaton(seed, &Shape::plain(3, 2, 3, 3));
        let w = random_word(&mut rng(seed ^ 2), 3, len);
        let run = a.run_finite(a.initial(), &w).unwrap();
        prop_assert_eq!(run.states.len(), run.labels.len() + 1);
        let mut nu = CounterValuation::zero(a.num_counters());
        let mut q = a.initial();
        for (i, &l) in w.iter().enumerate() {
            prop_assert_eq!(run.states[i], q);
            prop_assert_eq!(&run.labels[i], a.label(q, l));
            nu = apply_ops(&nu, a.label(q, l)).unwrap();
            q = a.next(q, l);
            for c in a.counter_ids() {
                prop_assert_eq!(&run.samples_of(c)[i + 1], nu.get(c));
            }
        }
        for c in a.counter_ids() {
            prop_assert_eq!(run.samples_of(c).len(), w.len() + 1);
        }
    }

    #[test]
    fn text_format_round_trips(seed in any::<u64>(), product in any::<bool>()) {
        let shape = if product { Shape::product(3, 2, 2, 2, 3) } else { Shape::plain(3, 2, 3, 3) };
        let a = automaton(seed, &shape);
        let text = serialize_automaton(&a);
        prop_assert_eq!(parse_automaton(&text).unwrap(), a);
    }

    #[test]
    fn safety_reduction_matches_direct_evaluation(seed in any::<u64>()) {
        let mut g = rng(seed);
        let s = random_safety(&mut g, 4, 2);
        prop_assert_eq!(SafetyAutomaton::parse(&s.serialize()).unwrap(), s.clone());
        let a = safety_to_max(&s).unwrap();
        for _ in 0..10 {
            let lasso = random_lasso(&mut g, 2, 5, 4);
            prop_assert_eq!(member(&a, &lasso).unwrap(), safety_accepts(&s, &lasso));
        }
    }

    #[test]
    fn parity_reduction_matches_direct_evaluation(seed in any::<u64>(), colors in 0u32..5) {
        let mut g = rng(seed);
        let p = random_parity(&mut g, 4, 2, colors);
        prop_assert_eq!(ParityAutomaton::parse(&p.serialize()).unwrap(), p.clone());
        let a = parity_to_max(&p).unwrap();
        for _ in 0..10 {
            let lasso = random_lasso(&mut g, 2, 5, 4);
            prop_assert_eq!(member(&a, &lasso).unwrap(), parity_accepts(&p, &lasso));
        }
    }

    #[test]
    fn diagonal_lift_preserves_membership(seed in any::<u64>()) {
        let mut g = rng(seed);
        let a = random_automaton(&mut g, &Shape::plain(3, 2, 2, 2));
        let lifted = diagonal_lift(&a).unwrap();
        let lasso = random_lasso(&mut g, 2, 4, 4);
        let lift = |w: &Word| -> Word { w.iter().map(|l| lifted.alphabet().pair(l.0, l.0).unwrap()).collect() };
        let diag = Lasso::new(lift(&lasso.u), lift(&lasso.v)).unwrap();
        prop_assert_eq!(member(&lifted, &diag).unwrap(), member(&a, &lasso).unwrap());
        // leaving the diagonal once is fatal
        let mut u = lift(&lasso.u);
        u.push(lifted.alphabet().pair(0, 1).unwrap());
        prop_assert!(!member(&lifted, &Lasso::new(u, diag.v.clone()).unwrap()).unwrap());
    }
}

#[test]
fn r1_samples() {
    let a = parse_automaton(
        "alphabet: a b\ncounters: c\nstates: q\ninitial: q\naccept: bounded c\ntrans: q a q : inc c\ntrans: q b q : reset c\n",
    )
    .unwrap();
    let c = a.counter_id("c").unwrap();
    let run = a.run_finite(a.initial(), &a.alphabet().parse_word("a a b").unwrap()).unwrap();
    let values: Vec<u32> = run.samples_of(c).iter().map(|v| v.try_into().unwrap()).collect();
    assert_eq!(values, [0, 1, 2, 0]);
    let run = a.run_finite(a.initial(), &a.alphabet().parse_word("b a").unwrap()).unwrap();
    let values: Vec<u32> = run.samples_of(c).iter().map(|v| v.try_into().unwrap()).collect();
    assert_eq!(values, [0, 0, 1]);
}
