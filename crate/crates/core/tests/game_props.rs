use maxdelay::equivalence::{project_input, projected_signature, DEFAULT_BUDGET};
use maxdelay::game::block::{block_arena, spans_longest_visible};
use maxdelay::game::{
    play, simulate_block, Arena, Copycat, DelayClass, DelayFunction, RandomInput, RandomOutput,
    Turn,
};
use maxdelay::game::ClassGame;
use maxdelay::{Alphabet, Error, MaxAutomaton};
use maxdelay_testkit::{all_words, random_automaton, random_word, rng, Shape};
use proptest::prelude::*;
use rand::Rng;

fn delay() -> impl Strategy<Value = DelayFunction> {
    (prop::collection::vec(1u64..5, 0..4), 1u64..4).prop_map(|(p, t)| DelayFunction::new(p, t).unwrap())
}

fn arena() -> Arena {
    Arena::from_alphabet(&Alphabet::product(["x", "y", "z"], ["p", "q"]).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn replays_are_identical(f in delay(), seed in any::<u64>(), rounds in 1usize..60) {
        let run = || {
            play(&f, &arena(), &mut RandomInput::new(3, seed), &mut RandomOutput::new(2, seed + 1), rounds).unwrap()
        };
        prop_assert_eq!(run(), run());
    }

    #[test]
    fn lookahead_law(f in delay(), seed in any::<u64>(), rounds in 1usize..60) {
        let record = play(&f, &arena(), &mut RandomInput::new(3, seed), &mut RandomOutput::new(2, seed), rounds).unwrap();
        let mut revealed = 0u64;
        for (i, r) in record.rounds.iter().enumerate() {
            prop_assert_eq!(r.input.len() as u64, f.value(i));
            revealed += f.value(i);
            prop_assert_eq!(r.lookahead, revealed - (i as u64 + 1));
            prop_assert_eq!(r.lookahead, f.lookahead_after(i));
        }
        prop_assert_eq!(record.alpha().len() as u64, revealed);
        prop_assert_eq!(record.beta().len(), rounds);
    }

    #[test]
    fn classification_follows_values(f in delay()) {
        let tail_ones = f.tail() == 1;
        let constant = tail_ones && (1..8).all(|i| f.value(i) == 1);
        let expected = if constant {
            DelayClass::Constant
        } else if tail_ones {
            DelayClass::Bounded
        } else {
            DelayClass::Unbounded
        };
        prop_assert_eq!(f.classify(), expected);
        prop_assert_eq!(f.to_string().parse::<DelayFunction>().unwrap(), f);
    }

    #[test]
    fn larger_delay_keeps_longest_block_sound(f in delay(), extra in prop::collection::vec(0u64..3, 6), seed in 0u64..1000) {
        let bigger = DelayFunction::new(
            (0..6).map(|i| f.value(i) + extra[i]).collect(),
            f.tail() + extra[5],
        )
        .unwrap();
        for g in [&f, &bigger] {
            let sim = simulate_block(g, "i-random", "o-longest-block", 300, seed).unwrap();
            prop_assert_eq!(spans_longest_visible(&sim, g), Ok(()));
        }
    }
}

#[test]
fn zero_rounds_are_refused() {
    let f = DelayFunction::constant(1).unwrap();
    let err = play(&f, &block_arena(), &mut RandomInput::new(3, 0), &mut Copycat, 0);
    assert!(matches!(err, Err(Error::Protocol(_))));
}

#[test]
fn unbounded_side_spans_and_grows() {
    let f: DelayFunction = "2*".parse().unwrap();
    let mut previous = 0;
    for rounds in [100, 250, 500] {
        let sim = simulate_block(&f, "i-spoiler:5", "o-longest-block", rounds, 0).unwrap();
        spans_longest_visible(&sim, &f).unwrap();
        assert!(sim.stats.max_output() >= previous);
        previous = sim.stats.max_output();
    }
    assert!(previous >= 10);
}

/// The longest-block output strategy commits at a `#` to the longest block it
/// can see. Under `f = ℓ+1, 1, 1, ...` it sees ℓ letters past the `#`, so its
/// completed output blocks, counted with their `#`, have length `ℓ + 1`.
#[test]
fn bounded_side_keeps_output_blocks_within_lookahead_plus_one() {
    for l in [2u64, 5] {
        let f = DelayFunction::new(vec![l + 1], 1).unwrap();
        let spoiler = format!("i-spoiler:{l}");
        let mut inputs = 0;
        let mut sims = vec![simulate_block(&f, &spoiler, "o-longest-block", 2000, 0).unwrap()];
        for seed in 0..100 {
            sims.push(simulate_block(&f, &spoiler, "o-random", 2000, seed).unwrap());
        }
        for sim in &sims {
            assert!(sim.stats.max_output() <= l as usize + 1, "{:?}", sim.stats.output_lengths());
            inputs = inputs.max(sim.stats.max_input());
        }
        assert_eq!(sims[0].stats.max_output(), l as usize + 1);
        assert!(inputs >= 50);
    }
}

fn toy(seed: u64) -> MaxAutomaton {
    random_automaton(&mut rng(seed), &Shape::product(2, 1, 2, 2, 2))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn class_game_keeps_one_ahead(seed in any::<u64>(), steps in 1usize..8) {
        let a = toy(seed);
        let mut game = ClassGame::new(&a, DEFAULT_BUDGET).unwrap();
        let mut g = rng(seed ^ 9);
        for r in 0..steps as u32 {
            let r = r / 4;
            while game.turn() == Turn::I {
                let d = game.threshold(r).unwrap() as usize;
                let x = random_word(&mut g, 2, d + 1);
                game.submit_i_word(r, &x).unwrap();
            }
            prop_assert_eq!(game.i_moves().len(), game.o_moves().len() + 2);
            let legal = game.legal_o_moves().unwrap();
            prop_assert!(!legal.is_empty());
            game.submit_o_move(&legal[g.gen_range(0..legal.len())]).unwrap();
            prop_assert_eq!(game.i_moves().len(), game.o_moves().len() + 1);
        }
        // representatives realize both classes of each answered round
        for i in 0..game.o_moves().len() {
            let w = game.representative(i).unwrap();
            let r = game.o_moves()[i].r;
            prop_assert_eq!(&maxdelay::equivalence::word_signature(&a, &w, r).unwrap(), &game.o_moves()[i].signature);
            let x = project_input(&a, &w).unwrap();
            prop_assert_eq!(game.input_class(r, &x).unwrap(), game.i_moves()[i].class);
        }
        prop_assert!(game.weakly_increasing());
    }

    #[test]
    fn legality_is_representative_independent(seed in any::<u64>(), cap in 0u32..=1) {
        let a = toy(seed);
        let mut game = ClassGame::new(&a, DEFAULT_BUDGET).unwrap();
        let mut by_class = std::collections::BTreeMap::new();
        for x in all_words(2, 6) {
            let class = game.input_class(cap, &x).unwrap();
            let sig = projected_signature(&a, &x, cap).unwrap();
            if let Some(old) = by_class.insert(class, sig.clone()) {
                prop_assert_eq!(old, sig);
            }
        }
    }

    #[test]
    fn long_words_are_legal_i_moves(seed in any::<u64>(), cap in 0u32..=1) {
        let a = toy(seed);
        let mut game = ClassGame::new(&a, DEFAULT_BUDGET).unwrap();
        let d = game.threshold(cap).unwrap() as usize;
        let mut g = rng(seed ^ 4);
        for _ in 0..10 {
            let extra = g.gen_range(0..5);
            let x = random_word(&mut g, 2, d + extra);
            let class = game.input_class(cap, &x).unwrap();
            prop_assert!(game.is_infinite(cap, class).unwrap());
        }
    }
}

#[test]
fn class_game_move_rules() {
    // every letter increments, so at cap 1 the empty word is alone in its class
    let a = maxdelay::parse_automaton(
        "alphabet_input: x y\nalphabet_output: p q\ncounters: c\nstates: s\ninitial: s\naccept: bounded c\n\
         trans: s x|p s : inc c\ntrans: s x|q s : inc c\ntrans: s y|p s : inc c\ntrans: s y|q s : inc c\n",
    )
    .unwrap();
    let mut game = ClassGame::new(&a, DEFAULT_BUDGET).unwrap();
    assert_eq!(game.threshold(1).unwrap(), 1);
    assert!(matches!(game.submit_i_word(1, &[]), Err(Error::IllegalMove(_))));
    let x = vec![maxdelay::LetterId(0); 2];
    game.submit_i_word(2, &x[..1]).unwrap_err();
    game.submit_i_word(2, &x).unwrap();
    game.submit_i_word(1, &x).unwrap();
    assert!(!game.weakly_increasing());
    assert!(matches!(game.submit_i_word(1, &x), Err(Error::Protocol(_))));
    let t = game.transcript().unwrap();
    assert_eq!(t.unbounded, "indeterminate");
    assert_eq!(t.next, Turn::O);

    let b = random_automaton(&mut rng(3), &Shape::plain(2, 1, 2, 1));
    assert!(matches!(ClassGame::new(&b, DEFAULT_BUDGET), Err(Error::NotProduct)));
}
