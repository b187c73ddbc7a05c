//! Random instances and brute-force oracles for tests.
//!
//! The oracles here work from definitions and direct simulation, and share
//! no code with the signature algebra beyond the automaton data types and
//! the reference transfer enumeration.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use maxdelay::equivalence::{word_signature, WordSignature};
use maxdelay::periodic::Lasso;
use maxdelay::reduce::{DeterministicAutomaton, ParityAutomaton, SafetyAutomaton};
use maxdelay::transfer::naive::transfers_naive;
use maxdelay::{
    Alphabet, Capped, CounterId, CounterOp, Formula, LetterId, MaxAutomaton, OpSequence, StateId,
    Word,
};
use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::Rng;
pub use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Size limits for random automata.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub max_states: usize,
    pub max_counters: usize,
    /// Plain alphabet size, or the input size of a product alphabet.
    pub letters: usize,
    /// Output size of a product alphabet; `None` for plain alphabets.
    pub outputs: Option<usize>,
    pub max_ops: usize,
}

impl Shape {
    pub fn plain(max_states: usize, max_counters: usize, letters: usize, max_ops: usize) -> Self {
        Shape {
            max_states,
            max_counters,
            letters,
            outputs: None,
            max_ops,
        }
    }

    pub fn product(max_states: usize, max_counters: usize, inputs: usize, outputs: usize, max_ops: usize) -> Self {
        Shape {
            max_states,
            max_counters,
            letters: inputs,
            outputs: Some(outputs),
            max_ops,
        }
    }
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

pub fn random_op<R: Rng>(rng: &mut R, k: usize) -> CounterOp {
    let kind = rng.gen_range(0..3);
    let mut c = || CounterId(rng.gen_range(0..k));
    match kind {
        0 => CounterOp::Inc(c()),
        1 => CounterOp::Reset(c()),
        _ => CounterOp::Max {
            target: c(),
            left: c(),
            right: c(),
        },
    }
}

pub fn random_ops<R: Rng>(rng: &mut R, k: usize, max_len: usize) -> OpSequence {
    let len = rng.gen_range(0..=max_len);
    OpSequence((0..len).map(|_| random_op(rng, k)).collect())
}

pub fn random_formula<R: Rng>(rng: &mut R, k: usize, depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.4) {
        let c = CounterId(rng.gen_range(0..k));
        return if rng.gen_bool(0.5) {
            Formula::bounded(c)
        } else {
            Formula::unbounded(c)
        };
    }
    let items = (0..2).map(|_| random_formula(rng, k, depth - 1)).collect();
    match rng.gen_range(0..3) {
        0 => Formula::and(items),
        1 => Formula::or(items),
        _ => Formula::not(random_formula(rng, k, depth - 1)),
    }
}

pub fn random_automaton<R: Rng>(rng: &mut R, shape: &Shape) -> MaxAutomaton {
    let n = rng.gen_range(1..=shape.max_states);
    let k = rng.gen_range(1..=shape.max_counters);
    let alphabet = match shape.outputs {
        None => Alphabet::plain(names("a", shape.letters)).unwrap(),
        Some(o) => Alphabet::product(names("i", shape.letters), names("o", o)).unwrap(),
    };
    let sigma = alphabet.len();
    let delta = (0..n)
        .map(|_| (0..sigma).map(|_| StateId(rng.gen_range(0..n))).collect())
        .collect();
    let labels = (0..n)
        .map(|_| (0..sigma).map(|_| random_ops(rng, k, shape.max_ops)).collect())
        .collect();
    let accept = random_formula(rng, k, 2);
    MaxAutomaton::new(names("q", n), names("c", k), alphabet, StateId(0), delta, labels, accept).unwrap()
}

pub fn random_word<R: Rng>(rng: &mut R, letters: usize, len: usize) -> Word {
    (0..len).map(|_| LetterId(rng.gen_range(0..letters))).collect()
}

pub fn random_lasso<R: Rng>(rng: &mut R, letters: usize, max_u: usize, max_v: usize) -> Lasso {
    let ul = rng.gen_range(0..=max_u);
    let u = random_word(rng, letters, ul);
    let vl = rng.gen_range(1..=max_v);
    let v = random_word(rng, letters, vl);
    Lasso::new(u, v).unwrap()
}

fn random_base<R: Rng>(rng: &mut R, max_states: usize, letters: usize) -> DeterministicAutomaton {
    let n = rng.gen_range(1..=max_states);
    let delta = (0..n)
        .map(|_| (0..letters).map(|_| StateId(rng.gen_range(0..n))).collect())
        .collect();
    DeterministicAutomaton::new(names("q", n), Alphabet::plain(names("a", letters)).unwrap(), StateId(0), delta)
        .unwrap()
}

pub fn random_safety<R: Rng>(rng: &mut R, max_states: usize, letters: usize) -> SafetyAutomaton {
    let base = random_base(rng, max_states, letters);
    let safe = (0..base.num_states()).map(|_| rng.gen_bool(0.7)).collect();
    SafetyAutomaton::new(base, safe).unwrap()
}

pub fn random_parity<R: Rng>(rng: &mut R, max_states: usize, letters: usize, max_color: u32) -> ParityAutomaton {
    let base = random_base(rng, max_states, letters);
    let colors = (0..base.num_states()).map(|_| rng.gen_range(0..=max_color)).collect();
    ParityAutomaton::new(base, colors).unwrap()
}

/// States entered infinitely often on `u·v^ω`, plus every state visited.
fn lasso_states(a: &DeterministicAutomaton, lasso: &Lasso) -> (BTreeSet<StateId>, BTreeSet<StateId>) {
    let mut visited = BTreeSet::from([a.initial()]);
    let mut q = a.initial();
    for &l in &lasso.u {
        q = a.next(q, l);
        visited.insert(q);
    }
    // After |Q| + 1 repetitions of v the states at loop starts have cycled.
    let n = a.num_states();
    let mut boundary = Vec::new();
    for _ in 0..=n {
        boundary.push(q);
        for &l in &lasso.v {
            q = a.next(q, l);
            visited.insert(q);
        }
    }
    let entry = boundary[n];
    let mut recurring = BTreeSet::new();
    let mut p = entry;
    loop {
        for &l in &lasso.v {
            p = a.next(p, l);
            recurring.insert(p);
        }
        if p == entry {
            break;
        }
    }
    (visited, recurring)
}

/// Whether the run on the lasso only visits safe states.
pub fn safety_accepts(s: &SafetyAutomaton, lasso: &Lasso) -> bool {
    let (visited, _) = lasso_states(&s.base, lasso);
    visited.iter().all(|&q| s.is_safe(q))
}

/// Whether the least color entered infinitely often is even.
pub fn parity_accepts(p: &ParityAutomaton, lasso: &Lasso) -> bool {
    let (_, recurring) = lasso_states(&p.base, lasso);
    recurring.iter().map(|&q| p.color(q)).min().expect("loop is nonempty") % 2 == 0
}

/// Running maximum of every counter over `u·v^times`.
fn max_over(a: &MaxAutomaton, lasso: &Lasso, times: usize) -> Vec<BigUint> {
    let run = a.run_finite(a.initial(), &lasso.unroll(times)).unwrap();
    a.counter_ids().map(|c| run.max_sample(c)).collect()
}

/// Counters whose running maximum keeps growing from `v^K` to `v^2K` for
/// `K = 16, 32, 64`. `None` if the three horizons disagree.
pub fn growth_unbounded(a: &MaxAutomaton, lasso: &Lasso) -> Option<BTreeSet<CounterId>> {
    let mut verdict: Option<BTreeSet<CounterId>> = None;
    for k in [16, 32, 64] {
        let short = max_over(a, lasso, k);
        let long = max_over(a, lasso, 2 * k);
        let grown: BTreeSet<CounterId> = a
            .counter_ids()
            .filter(|c| long[c.0] > short[c.0])
            .collect();
        match &verdict {
            Some(v) if *v != grown => return None,
            _ => verdict = Some(grown),
        }
    }
    verdict
}

/// Membership according to the growth oracle.
pub fn growth_member(a: &MaxAutomaton, lasso: &Lasso) -> Option<bool> {
    let unbounded = growth_unbounded(a, lasso)?;
    let map: BTreeMap<CounterId, bool> = a.counter_ids().map(|c| (c, !unbounded.contains(&c))).collect();
    Some(a.accept().eval(&map).unwrap())
}

/// The four quantities of the cap-`m` equivalence, computed from the
/// definitions by enumerating label-infixes, operation-suffixes and
/// label-prefixes of `labels`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DefinitionalProfile {
    pub infix: Vec<Capped>,
    pub suffix: Vec<Capped>,
    pub transfer: Vec<Vec<Capped>>,
    pub prefix: Vec<Vec<Capped>>,
}

fn best_trace(ops: &[CounterOp], c: CounterId, k: usize, cap: u32) -> Capped {
    // best over operation-suffixes of `ops` and over source counters
    (0..=ops.len())
        .flat_map(|start| (0..k).map(move |e| (start, e)))
        .map(|(start, e)| transfers_naive(&ops[start..], CounterId(e), c, cap))
        .max()
        .unwrap_or(Capped::BOTTOM)
}

pub fn definitional_profile(labels: &[OpSequence], k: usize, cap: u32) -> DefinitionalProfile {
    let flat = |from: usize, to: usize| -> Vec<CounterOp> {
        labels[from..to].iter().flat_map(|l| l.ops().iter().copied()).collect()
    };
    let n = labels.len();
    let all = flat(0, n);
    let counters = || (0..k).map(CounterId);
    let suffix = counters().map(|c| best_trace(&all, c, k, cap)).collect();
    let mut infix = vec![Capped::BOTTOM; k];
    for i in 0..=n {
        for j in i..=n {
            let part = flat(i, j);
            for (c, best) in infix.iter_mut().enumerate() {
                *best = (*best).max(best_trace(&part, CounterId(c), k, cap));
            }
        }
    }
    let transfer = counters()
        .map(|c| counters().map(|d| transfers_naive(&all, c, d, cap)).collect())
        .collect();
    let prefix = counters()
        .map(|c| {
            counters()
                .map(|d| {
                    (0..=n)
                        .map(|j| transfers_naive(&flat(0, j), c, d, cap))
                        .max()
                        .expect("nonempty range")
                })
                .collect()
        })
        .collect();
    DefinitionalProfile {
        infix,
        suffix,
        transfer,
        prefix,
    }
}

/// Transition profile plus definitional profile of the labels read from
/// every state: the word-level equivalence from its definition.
pub fn definitional_word_class(a: &MaxAutomaton, w: &[LetterId], cap: u32) -> (Vec<StateId>, Vec<DefinitionalProfile>) {
    let profile = a.state_ids().map(|q| a.run_state(q, w)).collect();
    let per_state = a
        .state_ids()
        .map(|q| definitional_profile(&a.run_labels(q, w), a.num_counters(), cap))
        .collect();
    (profile, per_state)
}

/// Every word over `letters` letters of length at most `max_len`, shortest first.
pub fn all_words(letters: usize, max_len: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * letters);
        for w in &layer {
            for l in 0..letters {
                let mut v: Word = w.clone();
                v.push(LetterId(l));
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Number of definitional word classes among all words up to each length.
pub fn brute_class_counts(a: &MaxAutomaton, cap: u32, max_len: usize) -> Vec<usize> {
    let mut seen = HashSet::new();
    let mut counts = Vec::new();
    for len in 0..=max_len {
        for w in all_words(a.alphabet().len(), len).into_iter().filter(|w| w.len() == len) {
            seen.insert(definitional_word_class(a, &w, cap));
        }
        counts.push(seen.len());
    }
    counts
}

/// `{[x⊗y] : |y| = |x|}` by enumerating every output word.
pub fn brute_projected(a: &MaxAutomaton, x: &[LetterId], cap: u32) -> BTreeSet<WordSignature> {
    let (_, outputs) = a.alphabet().components().unwrap();
    all_words(outputs.len(), x.len())
        .into_iter()
        .filter(|y| y.len() == x.len())
        .map(|y| {
            let joint: Word = x
                .iter()
                .zip(&y)
                .map(|(i, o)| a.alphabet().pair(i.0, o.0).unwrap())
                .collect();
            word_signature(a, &joint, cap).unwrap()
        })
        .collect()
}

/// Threshold by scanning every input word up to `max_len`, or `None` when
/// the scan is too short to be conclusive. With `N` projected classes, an
/// infinite class holds a word of length in `N..2N` and a finite class only
/// words shorter than `N`; the scan is conclusive when `2N − 1 <= max_len`.
pub fn brute_threshold(a: &MaxAutomaton, cap: u32, max_len: usize) -> Option<u64> {
    use maxdelay::equivalence::projected_signature;
    let (inputs, _) = a.alphabet().components().unwrap();
    let words = all_words(inputs.len(), max_len);
    let mut classes = Vec::with_capacity(words.len());
    let mut distinct = BTreeSet::new();
    for x in &words {
        let class = projected_signature(a, x, cap).unwrap();
        distinct.insert(class.clone());
        if 2 * distinct.len() > max_len + 1 {
            return None;
        }
        classes.push(class);
    }
    let n = distinct.len();
    let infinite: BTreeSet<_> = words
        .iter()
        .zip(&classes)
        .filter(|(x, _)| x.len() >= n)
        .map(|(_, c)| c)
        .collect();
    let longest_finite = words
        .iter()
        .zip(&classes)
        .filter(|(_, c)| !infinite.contains(c))
        .map(|(x, _)| x.len() as u64)
        .max();
    Some(longest_finite.map_or(0, |l| l + 1))
}

/// Picks a random element.
pub fn pick<'a, T, R: Rng>(rng: &mut R, items: &'a [T]) -> &'a T {
    items.choose(rng).expect("nonempty")
}
