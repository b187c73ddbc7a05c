//! Max-automata: deterministic automata whose transitions carry sequences of
//! counter operations, accepting by a boolean combination of
//! "counter is bounded" conditions.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::Formula;

macro_rules! index_newtype {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(
            Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
        )]
        pub struct $name(pub usize);

        impl $name {
            pub fn index(self) -> usize {
                self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }
    };
}

index_newtype!(
    /// Index of a state in [`MaxAutomaton::states`].
    StateId
);
index_newtype!(
    /// Index of a counter in [`MaxAutomaton::counters`].
    CounterId
);
index_newtype!(
    /// Index of a letter in an [`Alphabet`].
    LetterId
);

/// A finite word, as letter indices into the owning alphabet.
pub type Word = Vec<LetterId>;

/// A single counter operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CounterOp {
    Inc(CounterId),
    Reset(CounterId),
    /// `target := max(left, right)`
    Max {
        target: CounterId,
        left: CounterId,
        right: CounterId,
    },
}

impl CounterOp {
    pub fn counters(&self) -> impl Iterator<Item = CounterId> {
        let ids = match *self {
            CounterOp::Inc(c) | CounterOp::Reset(c) => [Some(c), None, None],
            CounterOp::Max {
                target,
                left,
                right,
            } => [Some(target), Some(left), Some(right)],
        };
        ids.into_iter().flatten()
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        OpDisplay { op: self, names }
    }
}

struct OpDisplay<'a> {
    op: &'a CounterOp,
    names: &'a [String],
}

impl fmt::Display for OpDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = |c: CounterId| self.names[c.0].as_str();
        match *self.op {
            CounterOp::Inc(c) => write!(f, "inc {}", n(c)),
            CounterOp::Reset(c) => write!(f, "reset {}", n(c)),
            CounterOp::Max {
                target,
                left,
                right,
            } => write!(f, "max {} {} {}", n(target), n(left), n(right)),
        }
    }
}

/// An ordered, possibly empty, sequence of counter operations labelling one transition.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpSequence(pub Vec<CounterOp>);

impl OpSequence {
    pub fn new(ops: Vec<CounterOp>) -> Self {
        OpSequence(ops)
    }

    pub fn empty() -> Self {
        OpSequence(Vec::new())
    }

    pub fn ops(&self) -> &[CounterOp] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Concatenation of a sequence of labels.
    pub fn flatten<'a>(labels: impl IntoIterator<Item = &'a OpSequence>) -> OpSequence {
        OpSequence(labels.into_iter().flat_map(|l| l.0.iter().copied()).collect())
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        SeqDisplay { seq: self, names }
    }
}

struct SeqDisplay<'a> {
    seq: &'a OpSequence,
    names: &'a [String],
}

impl fmt::Display for SeqDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, op) in self.seq.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ; ")?;
            }
            write!(f, "{}", op.display(self.names))?;
        }
        Ok(())
    }
}

impl From<Vec<CounterOp>> for OpSequence {
    fn from(ops: Vec<CounterOp>) -> Self {
        OpSequence(ops)
    }
}

/// Total map from counters to non-negative integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CounterValuation(Vec<BigUint>);

impl CounterValuation {
    pub fn zero(counters: usize) -> Self {
        CounterValuation(vec![BigUint::zero(); counters])
    }

    pub fn from_values(values: Vec<BigUint>) -> Self {
        CounterValuation(values)
    }

    pub fn get(&self, c: CounterId) -> &BigUint {
        &self.0[c.0]
    }

    pub fn values(&self) -> &[BigUint] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn apply_in_place(&mut self, pi: &OpSequence) {
        for op in &pi.0 {
            match *op {
                CounterOp::Inc(c) => self.0[c.0] += 1u32,
                CounterOp::Reset(c) => self.0[c.0].set_zero(),
                CounterOp::Max {
                    target,
                    left,
                    right,
                } => {
                    let v = std::cmp::max(&self.0[left.0], &self.0[right.0]).clone();
                    self.0[target.0] = v;
                }
            }
        }
    }
}

/// Applies `pi` to `v` from left to right.
pub fn apply_ops(v: &CounterValuation, pi: &OpSequence) -> Result<CounterValuation> {
    for op in &pi.0 {
        for c in op.counters() {
            if c.0 >= v.len() {
                return Err(Error::CounterOutOfRange {
                    index: c.0,
                    count: v.len(),
                });
            }
        }
    }
    let mut out = v.clone();
    out.apply_in_place(pi);
    Ok(out)
}

/// A letter of an alphabet; product alphabets use ordered pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Plain(String),
    Pair(String, String),
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Plain(a) => f.write_str(a),
            Letter::Pair(a, b) => write!(f, "{a}|{b}"),
        }
    }
}

/// An ordered alphabet. Product alphabets enumerate pairs input-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    letters: Vec<Letter>,
    product: Option<(Vec<String>, Vec<String>)>,
    lookup: HashMap<String, LetterId>,
}

impl Alphabet {
    pub fn plain<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let letters: Vec<Letter> = names.into_iter().map(|s| Letter::Plain(s.into())).collect();
        Self::build(letters, None)
    }

    pub fn product<S: Into<String>, T: Into<String>>(
        input: impl IntoIterator<Item = S>,
        output: impl IntoIterator<Item = T>,
    ) -> Result<Self> {
        let input: Vec<String> = input.into_iter().map(Into::into).collect();
        let output: Vec<String> = output.into_iter().map(Into::into).collect();
        if input.is_empty() || output.is_empty() {
            return Err(Error::Structure("product alphabet components must be nonempty".into()));
        }
        let letters = input
            .iter()
            .flat_map(|a| output.iter().map(move |b| Letter::Pair(a.clone(), b.clone())))
            .collect();
        Self::build(letters, Some((input, output)))
    }

    fn build(letters: Vec<Letter>, product: Option<(Vec<String>, Vec<String>)>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::Structure("alphabet must be nonempty".into()));
        }
        if let Some((i, o)) = &product {
            for name in i.iter().chain(o) {
                if name.is_empty() || name.contains('|') || name.chars().any(char::is_whitespace) {
                    return Err(Error::Structure(format!("invalid letter name `{name}`")));
                }
            }
            for names in [i, o] {
                let mut sorted = names.clone();
                sorted.sort();
                sorted.dedup();
                if sorted.len() != names.len() {
                    return Err(Error::Structure("duplicate letter in alphabet".into()));
                }
            }
        }
        let mut lookup = HashMap::new();
        for (i, l) in letters.iter().enumerate() {
            let key = l.to_string();
            if let Letter::Plain(name) = l {
                if name.is_empty() || name.contains('|') || name.chars().any(char::is_whitespace)
                {
                    return Err(Error::Structure(format!("invalid letter name `{name}`")));
                }
            }
            if lookup.insert(key.clone(), LetterId(i)).is_some() {
                return Err(Error::Structure(format!("duplicate letter `{key}`")));
            }
        }
        Ok(Alphabet {
            letters,
            product,
            lookup,
        })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn letter(&self, id: LetterId) -> &Letter {
        &self.letters[id.0]
    }

    pub fn ids(&self) -> impl Iterator<Item = LetterId> {
        (0..self.letters.len()).map(LetterId)
    }

    pub fn is_product(&self) -> bool {
        self.product.is_some()
    }

    /// Input and output components of a product alphabet.
    pub fn components(&self) -> Option<(&[String], &[String])> {
        self.product.as_ref().map(|(i, o)| (i.as_slice(), o.as_slice()))
    }

    /// Joint letter for input index `input` and output index `output`.
    pub fn pair(&self, input: usize, output: usize) -> Result<LetterId> {
        let (i, o) = self.product.as_ref().ok_or(Error::NotProduct)?;
        if input >= i.len() || output >= o.len() {
            return Err(Error::LetterOutOfRange {
                index: input * o.len() + output,
                count: self.len(),
            });
        }
        Ok(LetterId(input * o.len() + output))
    }

    /// Splits a joint letter into its input and output component indices.
    pub fn split(&self, letter: LetterId) -> Result<(usize, usize)> {
        let (_, o) = self.product.as_ref().ok_or(Error::NotProduct)?;
        Ok((letter.0 / o.len(), letter.0 % o.len()))
    }

    pub fn lookup(&self, name: &str) -> Result<LetterId> {
        self.lookup
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownLetter(name.to_string()))
    }

    fn single_char_letters(&self) -> bool {
        self.product.is_none()
            && self
                .letters
                .iter()
                .all(|l| matches!(l, Letter::Plain(s) if s.chars().count() == 1))
    }

    /// Parses a word. Letters are whitespace-separated; over a plain alphabet
    /// of one-character letters a token may also be a run of letters (`aab`).
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let mut word = Vec::new();
        for token in text.split_whitespace() {
            if let Some(&id) = self.lookup.get(token) {
                word.push(id);
            } else if self.single_char_letters() {
                for ch in token.chars() {
                    word.push(self.lookup(ch.encode_utf8(&mut [0; 4]))?);
                }
            } else {
                return Err(Error::UnknownLetter(token.to_string()));
            }
        }
        Ok(word)
    }

    pub fn format_word(&self, word: &[LetterId]) -> String {
        let parts: Vec<String> = word.iter().map(|&a| self.letters[a.0].to_string()).collect();
        if self.single_char_letters() {
            parts.concat()
        } else {
            parts.join(" ")
        }
    }
}

/// A deterministic, complete max-automaton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxAutomaton {
    states: Vec<String>,
    counters: Vec<String>,
    alphabet: Alphabet,
    initial: StateId,
    delta: Vec<Vec<StateId>>,
    labels: Vec<Vec<OpSequence>>,
    accept: Formula,
}

impl MaxAutomaton {
    /// Builds an automaton from index-based tables, checking totality and
    /// that every referenced counter and state exists.
    pub fn new(
        states: Vec<String>,
        counters: Vec<String>,
        alphabet: Alphabet,
        initial: StateId,
        delta: Vec<Vec<StateId>>,
        labels: Vec<Vec<OpSequence>>,
        accept: Formula,
    ) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::Structure("automaton needs at least one state".into()));
        }
        if initial.0 >= states.len() {
            return Err(Error::Structure("initial state out of range".into()));
        }
        if delta.len() != states.len() || labels.len() != states.len() {
            return Err(Error::Structure("delta not total".into()));
        }
        for (row, lrow) in delta.iter().zip(&labels) {
            if row.len() != alphabet.len() || lrow.len() != alphabet.len() {
                return Err(Error::Structure("delta not total".into()));
            }
            if row.iter().any(|q| q.0 >= states.len()) {
                return Err(Error::Structure("transition target out of range".into()));
            }
            for c in lrow.iter().flat_map(|l| l.0.iter()).flat_map(|op| op.counters()) {
                if c.0 >= counters.len() {
                    return Err(Error::CounterOutOfRange {
                        index: c.0,
                        count: counters.len(),
                    });
                }
            }
        }
        if let Some(c) = accept.counters().into_iter().find(|c| c.0 >= counters.len()) {
            return Err(Error::CounterOutOfRange {
                index: c.0,
                count: counters.len(),
            });
        }
        check_unique(&states, "state")?;
        check_unique(&counters, "counter")?;
        Ok(MaxAutomaton {
            states,
            counters,
            alphabet,
            initial,
            delta,
            labels,
            accept,
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn counters(&self) -> &[String] {
        &self.counters
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_counters(&self) -> usize {
        self.counters.len()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn accept(&self) -> &Formula {
        &self.accept
    }

    pub fn state_ids(&self) -> impl Iterator<Item = StateId> {
        (0..self.states.len()).map(StateId)
    }

    pub fn counter_ids(&self) -> impl Iterator<Item = CounterId> {
        (0..self.counters.len()).map(CounterId)
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q.0]
    }

    pub fn counter_name(&self, c: CounterId) -> &str {
        &self.counters[c.0]
    }

    pub fn state_id(&self, name: &str) -> Result<StateId> {
        self.states
            .iter()
            .position(|s| s == name)
            .map(StateId)
            .ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    pub fn counter_id(&self, name: &str) -> Result<CounterId> {
        self.counters
            .iter()
            .position(|s| s == name)
            .map(CounterId)
            .ok_or_else(|| Error::UnknownCounter(name.to_string()))
    }

    pub fn next(&self, q: StateId, a: LetterId) -> StateId {
        self.delta[q.0][a.0]
    }

    pub fn label(&self, q: StateId, a: LetterId) -> &OpSequence {
        &self.labels[q.0][a.0]
    }

    /// `δ*(q, w)`.
    pub fn run_state(&self, q: StateId, w: &[LetterId]) -> StateId {
        w.iter().fold(q, |q, &a| self.next(q, a))
    }

    /// The sequence of transition labels on the run from `q` over `w`.
    pub fn run_labels(&self, q: StateId, w: &[LetterId]) -> Vec<OpSequence> {
        let mut state = q;
        let mut out = Vec::with_capacity(w.len());
        for &a in w {
            out.push(self.label(state, a).clone());
            state = self.next(state, a);
        }
        out
    }

    pub fn check_word(&self, w: &[LetterId]) -> Result<()> {
        match w.iter().find(|a| a.0 >= self.alphabet.len()) {
            Some(a) => Err(Error::LetterOutOfRange {
                index: a.0,
                count: self.alphabet.len(),
            }),
            None => Ok(()),
        }
    }

    /// The unique run from `q` on `w`, with counter values sampled from the
    /// all-zero valuation after each complete transition label.
    pub fn run_finite(&self, q: StateId, w: &[LetterId]) -> Result<RunTrace> {
        self.check_word(w)?;
        if q.0 >= self.states.len() {
            return Err(Error::UnknownState(q.to_string()));
        }
        let k = self.counters.len();
        let mut valuation = CounterValuation::zero(k);
        let mut states = Vec::with_capacity(w.len() + 1);
        let mut labels = Vec::with_capacity(w.len());
        let mut samples: Vec<Vec<BigUint>> = (0..k)
            .map(|_| {
                let mut v = Vec::with_capacity(w.len() + 1);
                v.push(BigUint::zero());
                v
            })
            .collect();
        let mut state = q;
        states.push(state);
        for &a in w {
            let label = self.label(state, a);
            valuation.apply_in_place(label);
            for (c, col) in samples.iter_mut().enumerate() {
                col.push(valuation.0[c].clone());
            }
            labels.push(label.clone());
            state = self.next(state, a);
            states.push(state);
        }
        Ok(RunTrace {
            states,
            labels,
            samples,
        })
    }
}

fn check_unique(names: &[String], what: &str) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(Error::Structure(format!("duplicate {what} `{n}`")));
        }
    }
    Ok(())
}

/// A finite run together with its counter samples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunTrace {
    pub states: Vec<StateId>,
    pub labels: Vec<OpSequence>,
    /// `samples[c][i]` is the value of counter `c` after `i` transitions.
    pub samples: Vec<Vec<BigUint>>,
}

impl RunTrace {
    pub fn last_state(&self) -> StateId {
        *self.states.last().expect("a run has at least one state")
    }

    pub fn samples_of(&self, c: CounterId) -> &[BigUint] {
        &self.samples[c.0]
    }

    /// Largest sampled value of `c` on the run.
    pub fn max_sample(&self, c: CounterId) -> BigUint {
        self.samples[c.0].iter().max().cloned().unwrap_or_default()
    }
}

/// Name-based construction of automata, mainly for hand-written fixtures.
pub struct MaxAutomatonBuilder {
    alphabet: Alphabet,
    counters: Vec<String>,
    states: Vec<String>,
    initial: Option<String>,
    accept: Option<String>,
    transitions: Vec<(String, String, String, String)>,
}

impl MaxAutomatonBuilder {
    pub fn new(alphabet: Alphabet) -> Self {
        MaxAutomatonBuilder {
            alphabet,
            counters: Vec::new(),
            states: Vec::new(),
            initial: None,
            accept: None,
            transitions: Vec::new(),
        }
    }

    pub fn counters<S: Into<String>>(mut self, names: impl IntoIterator<Item = S>) -> Self {
        self.counters = names.into_iter().map(Into::into).collect();
        self
    }

    pub fn states<S: Into<String>>(mut self, names: impl IntoIterator<Item = S>) -> Self {
        self.states = names.into_iter().map(Into::into).collect();
        self
    }

    pub fn initial(mut self, name: &str) -> Self {
        self.initial = Some(name.to_string());
        self
    }

    /// Acceptance formula in the text grammar, e.g. `!bounded c`.
    pub fn accept(mut self, formula: &str) -> Self {
        self.accept = Some(formula.to_string());
        self
    }

    /// Adds a transition; `ops` uses the text syntax `inc c ; reset d`.
    pub fn transition(mut self, from: &str, letter: &str, to: &str, ops: &str) -> Self {
        self.transitions
            .push((from.into(), letter.into(), to.into(), ops.into()));
        self
    }

    pub fn build(self) -> Result<MaxAutomaton> {
        let n = self.states.len();
        let sigma = self.alphabet.len();
        let state_of = |name: &str| {
            self.states
                .iter()
                .position(|s| s == name)
                .map(StateId)
                .ok_or_else(|| Error::UnknownState(name.to_string()))
        };
        let mut delta: Vec<Vec<Option<StateId>>> = vec![vec![None; sigma]; n];
        let mut labels = vec![vec![OpSequence::empty(); sigma]; n];
        for (from, letter, to, ops) in &self.transitions {
            let p = state_of(from)?;
            let a = self.alphabet.lookup(letter)?;
            let q = state_of(to)?;
            if delta[p.0][a.0].is_some() {
                return Err(Error::Structure(format!(
                    "duplicate transition for ({from}, {letter})"
                )));
            }
            delta[p.0][a.0] = Some(q);
            labels[p.0][a.0] = crate::format::parse_ops(ops, &self.counters)?;
        }
        let delta = delta
            .into_iter()
            .map(|row| row.into_iter().collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Structure("delta not total".into()))?;
        let initial = state_of(
            self.initial
                .as_deref()
                .ok_or_else(|| Error::Structure("missing initial state".into()))?,
        )?;
        let accept = Formula::parse(
            self.accept
                .as_deref()
                .ok_or_else(|| Error::Structure("missing acceptance formula".into()))?,
            &self.counters,
        )?;
        MaxAutomaton::new(
            self.states,
            self.counters,
            self.alphabet,
            initial,
            delta,
            labels,
            accept,
        )
    }
}
