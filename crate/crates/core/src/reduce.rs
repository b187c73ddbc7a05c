//! Translations of safety and parity automata into max-automata, and the
//! diagonal lift turning a max-automaton into a delay-game winning condition.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::automaton::{Alphabet, CounterId, CounterOp, LetterId, MaxAutomaton, OpSequence, StateId};
use crate::error::{Error, Result};
use crate::format::{parse_source, write_alphabet, Skeleton};
use crate::formula::Formula;

/// A deterministic complete automaton without counters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeterministicAutomaton {
    states: Vec<String>,
    alphabet: Alphabet,
    initial: StateId,
    delta: Vec<Vec<StateId>>,
}

impl DeterministicAutomaton {
    pub fn new(
        states: Vec<String>,
        alphabet: Alphabet,
        initial: StateId,
        delta: Vec<Vec<StateId>>,
    ) -> Result<Self> {
        if states.is_empty() || initial.0 >= states.len() {
            return Err(Error::Structure("initial state out of range".into()));
        }
        if delta.len() != states.len()
            || delta
                .iter()
                .any(|row| row.len() != alphabet.len() || row.iter().any(|q| q.0 >= states.len()))
        {
            return Err(Error::Structure("delta not total".into()));
        }
        Ok(DeterministicAutomaton {
            states,
            alphabet,
            initial,
            delta,
        })
    }

    fn from_skeleton(sk: Skeleton) -> Result<Self> {
        Self::new(sk.states, sk.alphabet, sk.initial, sk.delta)
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn next(&self, q: StateId, a: LetterId) -> StateId {
        self.delta[q.0][a.0]
    }

    pub fn run_state(&self, q: StateId, w: &[LetterId]) -> StateId {
        w.iter().fold(q, |q, &a| self.next(q, a))
    }

    fn state_id(&self, name: &str, line: usize) -> Result<StateId> {
        self.states
            .iter()
            .position(|s| s == name)
            .map(StateId)
            .ok_or_else(|| Error::Parse {
                line,
                message: format!("unknown state `{name}`"),
            })
    }

    fn write_body(&self, out: &mut String) {
        write_alphabet(out, &self.alphabet);
        let _ = writeln!(out, "states: {}", self.states.join(" "));
        let _ = writeln!(out, "initial: {}", self.states[self.initial.0]);
        for (p, row) in self.delta.iter().enumerate() {
            for (a, q) in row.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "trans: {} {} {}",
                    self.states[p],
                    self.alphabet.letter(LetterId(a)),
                    self.states[q.0]
                );
            }
        }
    }
}

/// Deterministic safety automaton: a word is accepted iff its run never
/// leaves the safe states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SafetyAutomaton {
    pub base: DeterministicAutomaton,
    safe: Vec<bool>,
}

impl SafetyAutomaton {
    pub fn new(base: DeterministicAutomaton, safe: Vec<bool>) -> Result<Self> {
        if safe.len() != base.num_states() {
            return Err(Error::Structure("safety flags must cover every state".into()));
        }
        Ok(SafetyAutomaton { base, safe })
    }

    /// Parses the text format with a `safe:` line.
    pub fn parse(text: &str) -> Result<Self> {
        let (sk, line, names) = parse_source(text, "safe")?;
        let base = DeterministicAutomaton::from_skeleton(sk)?;
        let mut safe = vec![false; base.num_states()];
        for name in &names {
            safe[base.state_id(name, line)?.0] = true;
        }
        Self::new(base, safe)
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        self.base.write_body(&mut out);
        let safe: Vec<&str> = self
            .base
            .states
            .iter()
            .zip(&self.safe)
            .filter(|(_, &s)| s)
            .map(|(n, _)| n.as_str())
            .collect();
        let _ = writeln!(out, "safe: {}", safe.join(" "));
        out
    }

    pub fn is_safe(&self, q: StateId) -> bool {
        self.safe[q.0]
    }
}

/// Deterministic parity automaton with min-parity acceptance: a word is
/// accepted iff the least color seen infinitely often is even.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityAutomaton {
    pub base: DeterministicAutomaton,
    colors: Vec<u32>,
}

impl ParityAutomaton {
    pub fn new(base: DeterministicAutomaton, colors: Vec<u32>) -> Result<Self> {
        if colors.len() != base.num_states() {
            return Err(Error::Structure("every state needs a color".into()));
        }
        Ok(ParityAutomaton { base, colors })
    }

    /// Parses the text format with a `colors: q0=0 q1=1` line.
    pub fn parse(text: &str) -> Result<Self> {
        let (sk, line, entries) = parse_source(text, "colors")?;
        let base = DeterministicAutomaton::from_skeleton(sk)?;
        let bad = |message: String| Error::Parse { line, message };
        let mut colors = vec![None; base.num_states()];
        for entry in &entries {
            let (name, color) = entry
                .split_once('=')
                .ok_or_else(|| bad(format!("expected `STATE=COLOR`, got `{entry}`")))?;
            let color: u32 = color
                .parse()
                .map_err(|_| bad(format!("invalid color `{color}`")))?;
            let q = base.state_id(name, line)?;
            if colors[q.0].replace(color).is_some() {
                return Err(bad(format!("state `{name}` colored twice")));
            }
        }
        let colors = colors
            .into_iter()
            .enumerate()
            .map(|(q, c)| c.ok_or_else(|| bad(format!("state `{}` has no color", base.states[q]))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(base, colors)
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        self.base.write_body(&mut out);
        let colors: Vec<String> = self
            .base
            .states
            .iter()
            .zip(&self.colors)
            .map(|(n, c)| format!("{n}={c}"))
            .collect();
        let _ = writeln!(out, "colors: {}", colors.join(" "));
        out
    }

    pub fn color(&self, q: StateId) -> u32 {
        self.colors[q.0]
    }
}

/// One counter `k<j>` per color `j`, incremented on every transition into a
/// state of color `j`. The formula says that every odd color seen
/// infinitely often is dominated by a smaller even color seen infinitely
/// often.
pub fn parity_to_max(p: &ParityAutomaton) -> Result<MaxAutomaton> {
    let used: Vec<u32> = p.colors.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let counter_of = |color: u32| CounterId(used.binary_search(&color).expect("color in use"));
    let counters: Vec<String> = used.iter().map(|c| format!("k{c}")).collect();
    let b = &p.base;
    let labels = b
        .delta
        .iter()
        .map(|row| {
            row.iter()
                .map(|&q| OpSequence(vec![CounterOp::Inc(counter_of(p.color(q)))]))
                .collect()
        })
        .collect();
    let (even, odd): (Vec<u32>, Vec<u32>) = used.iter().partition(|&&c| c % 2 == 0);
    let accept = if odd.is_empty() {
        Formula::or(even.iter().map(|&c| Formula::unbounded(counter_of(c))).collect())
    } else if even.is_empty() {
        let k = counter_of(odd[0]);
        Formula::and(vec![Formula::bounded(k), Formula::unbounded(k)])
    } else {
        Formula::and(
            odd.iter()
                .map(|&j| {
                    let mut alts: Vec<Formula> = even
                        .iter()
                        .filter(|&&i| i < j)
                        .map(|&i| Formula::unbounded(counter_of(i)))
                        .collect();
                    alts.push(Formula::bounded(counter_of(j)));
                    Formula::or(alts)
                })
                .collect(),
        )
    };
    MaxAutomaton::new(
        b.states.clone(),
        counters,
        b.alphabet.clone(),
        b.initial,
        b.delta.clone(),
        labels,
        accept,
    )
}

/// Non-safe states become sinks; a fresh counter `c` is incremented on every
/// transition into a safe state and must be unbounded.
pub fn safety_to_max(s: &SafetyAutomaton) -> Result<MaxAutomaton> {
    let b = &s.base;
    let c = CounterId(0);
    let mut delta = Vec::with_capacity(b.num_states());
    let mut labels = Vec::with_capacity(b.num_states());
    for (p, row) in b.delta.iter().enumerate() {
        if s.safe[p] {
            delta.push(row.clone());
            labels.push(
                row.iter()
                    .map(|&q| {
                        if s.safe[q.0] {
                            OpSequence(vec![CounterOp::Inc(c)])
                        } else {
                            OpSequence::empty()
                        }
                    })
                    .collect(),
            );
        } else {
            delta.push(vec![StateId(p); row.len()]);
            labels.push(vec![OpSequence::empty(); row.len()]);
        }
    }
    MaxAutomaton::new(
        b.states.clone(),
        vec!["c".into()],
        b.alphabet.clone(),
        b.initial,
        delta,
        labels,
        Formula::unbounded(c),
    )
}

fn fresh_name(taken: &[String], base: &str) -> String {
    let mut name = base.to_string();
    while taken.contains(&name) {
        name.push('_');
    }
    name
}

/// Automaton over `Σ×Σ` that behaves like `a` on letters `a|a` and sends
/// every other letter to a rejecting sink.
pub fn diagonal_lift(a: &MaxAutomaton) -> Result<MaxAutomaton> {
    if a.alphabet().is_product() {
        return Err(Error::Structure("diagonal lift needs a plain alphabet".into()));
    }
    let names: Vec<String> = a.alphabet().letters().iter().map(|l| l.to_string()).collect();
    let sigma = names.len();
    let alphabet = Alphabet::product(names.clone(), names)?;
    let mut states = a.states().to_vec();
    let sink = StateId(states.len());
    states.push(fresh_name(a.states(), "sink"));
    let mut counters = a.counters().to_vec();
    let sink_counter = CounterId(counters.len());
    counters.push(fresh_name(a.counters(), "sink"));
    let mut delta = Vec::with_capacity(states.len());
    let mut labels = Vec::with_capacity(states.len());
    for q in a.state_ids() {
        let mut row = Vec::with_capacity(sigma * sigma);
        let mut lrow = Vec::with_capacity(sigma * sigma);
        for i in 0..sigma {
            for o in 0..sigma {
                if i == o {
                    row.push(a.next(q, LetterId(i)));
                    lrow.push(a.label(q, LetterId(i)).clone());
                } else {
                    row.push(sink);
                    lrow.push(OpSequence::empty());
                }
            }
        }
        delta.push(row);
        labels.push(lrow);
    }
    delta.push(vec![sink; sigma * sigma]);
    labels.push(vec![OpSequence(vec![CounterOp::Inc(sink_counter)]); sigma * sigma]);
    let accept = Formula::and(vec![a.accept().clone(), Formula::bounded(sink_counter)]);
    MaxAutomaton::new(states, counters, alphabet, a.initial(), delta, labels, accept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::periodic::{member, Lasso};

    const NO_B: &str = "\
alphabet: a b
states: ok bad
initial: ok
safe: ok
trans: ok a ok
trans: ok b bad
trans: bad a bad
trans: bad b bad
";

    const PARITY01: &str = "\
alphabet: a b
states: p q
initial: p
colors: p=0 q=1
trans: p a p
trans: p b q
trans: q a p
trans: q b q
";

    fn lasso(a: &MaxAutomaton, u: &str, v: &str) -> Lasso {
        Lasso::new(
            a.alphabet().parse_word(u).unwrap(),
            a.alphabet().parse_word(v).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn safety_example() {
        let s = SafetyAutomaton::parse(NO_B).unwrap();
        let m = safety_to_max(&s).unwrap();
        assert_eq!(m.num_states(), 2);
        assert!(member(&m, &lasso(&m, "", "a")).unwrap());
        assert!(!member(&m, &lasso(&m, "", "ab")).unwrap());
        assert_eq!(SafetyAutomaton::parse(&s.serialize()).unwrap(), s);
    }

    #[test]
    fn unsafe_initial_rejects_everything() {
        let s = SafetyAutomaton::parse(&NO_B.replace("initial: ok", "initial: bad")).unwrap();
        let m = safety_to_max(&s).unwrap();
        assert!(!member(&m, &lasso(&m, "", "a")).unwrap());
    }

    #[test]
    fn parity_formula_shapes() {
        let p = ParityAutomaton::parse(PARITY01).unwrap();
        let m = parity_to_max(&p).unwrap();
        assert_eq!(m.accept().display(m.counters()).to_string(), "!bounded k0 | bounded k1");
        assert!(member(&m, &lasso(&m, "", "ab")).unwrap());
        assert!(!member(&m, &lasso(&m, "a", "b")).unwrap());
        assert_eq!(ParityAutomaton::parse(&p.serialize()).unwrap(), p);

        let zero = ParityAutomaton::parse(&PARITY01.replace("q=1", "q=0")).unwrap();
        let m = parity_to_max(&zero).unwrap();
        assert_eq!(m.accept().display(m.counters()).to_string(), "!bounded k0");
        assert!(member(&m, &lasso(&m, "", "b")).unwrap());

        let one = ParityAutomaton::parse(&PARITY01.replace("p=0", "p=1")).unwrap();
        let m = parity_to_max(&one).unwrap();
        assert!(!member(&m, &lasso(&m, "", "a")).unwrap());
        assert!(!member(&m, &lasso(&m, "", "ab")).unwrap());
    }

    #[test]
    fn missing_color_is_reported() {
        let err = ParityAutomaton::parse(&PARITY01.replace(" q=1", "")).unwrap_err();
        assert!(err.to_string().contains("no color"), "{err}");
    }

    #[test]
    fn lift_of_r1() {
        let a = crate::format::parse_automaton(
            "alphabet: a b\ncounters: c\nstates: q\ninitial: q\naccept: !bounded c\ntrans: q a q : inc c\ntrans: q b q : reset c\n",
        )
        .unwrap();
        let lift = diagonal_lift(&a).unwrap();
        assert_eq!(lift.alphabet().len(), 4);
        assert!(member(&lift, &lasso(&lift, "", "a|a")).unwrap());
        assert!(!member(&lift, &lasso(&lift, "", "a|a b|b")).unwrap());
        assert!(!member(&lift, &lasso(&lift, "a|a", "a|b a|a")).unwrap());
        assert!(diagonal_lift(&lift).is_err());
    }
}
