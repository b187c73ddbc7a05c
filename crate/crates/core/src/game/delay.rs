//! Round-based delay games: in round `i` player I reveals `f(i)` input
//! letters, then player O answers with one output letter.
//!
//! Letters are indices into the input and output components of a product
//! alphabet. Plays are finite; the engine records transcripts and never
//! declares a winner of the infinite game.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::automaton::{Alphabet, LetterId, Word};
use crate::error::{Error, Result};

/// `f(0..prefix.len())` given explicitly, `f(i) = tail` afterwards.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DelayFunction {
    prefix: Vec<u64>,
    tail: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DelayClass {
    /// `f(i) = 1` for every `i > 0`.
    Constant,
    /// `f(i) = 1` for almost every `i`.
    Bounded,
    Unbounded,
}

impl DelayFunction {
    pub fn new(prefix: Vec<u64>, tail: u64) -> Result<Self> {
        if tail == 0 || prefix.contains(&0) {
            return Err(Error::DelayFunction("values must be at least 1".into()));
        }
        Ok(DelayFunction { prefix, tail })
    }

    pub fn constant(value: u64) -> Result<Self> {
        Self::new(Vec::new(), value)
    }

    pub fn value(&self, i: usize) -> u64 {
        self.prefix.get(i).copied().unwrap_or(self.tail)
    }

    pub fn prefix(&self) -> &[u64] {
        &self.prefix
    }

    pub fn tail(&self) -> u64 {
        self.tail
    }

    pub fn classify(&self) -> DelayClass {
        if self.tail != 1 {
            DelayClass::Unbounded
        } else if self.prefix.iter().skip(1).all(|&v| v == 1) {
            DelayClass::Constant
        } else {
            DelayClass::Bounded
        }
    }

    /// `Σ_{j≤i} f(j) − (i+1)`.
    pub fn lookahead_after(&self, i: usize) -> u64 {
        let revealed: u64 = (0..=i).map(|j| self.value(j)).sum();
        revealed - (i as u64 + 1)
    }

    /// The largest lookahead ever reached, `Σ (f(i) − 1)`, for bounded `f`.
    pub fn max_lookahead(&self) -> Option<u64> {
        match self.classify() {
            DelayClass::Unbounded => None,
            _ => Some(self.prefix.iter().map(|v| v - 1).sum()),
        }
    }
}

impl FromStr for DelayFunction {
    type Err = Error;

    /// `3,1*` is `f(0) = 3` then constantly 1; `2*` is constantly 2.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::DelayFunction(s.to_string());
        let parts: Vec<&str> = s.trim().split(',').map(str::trim).collect();
        let (last, init) = parts.split_last().ok_or_else(bad)?;
        let tail = last.strip_suffix('*').ok_or_else(bad)?;
        let number = |t: &str| t.parse::<u64>().map_err(|_| bad());
        let prefix = init.iter().map(|t| number(t)).collect::<Result<Vec<_>>>()?;
        Self::new(prefix, number(tail)?).map_err(|_| bad())
    }
}

impl fmt::Display for DelayFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.prefix {
            write!(f, "{v},")?;
        }
        write!(f, "{}*", self.tail)
    }
}

/// The letter names of both players.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arena {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
}

impl Arena {
    pub fn from_alphabet(a: &Alphabet) -> Result<Self> {
        let (inputs, outputs) = a.components().ok_or(Error::NotProduct)?;
        Ok(Arena {
            inputs: inputs.to_vec(),
            outputs: outputs.to_vec(),
        })
    }

    pub fn alphabet(&self) -> Result<Alphabet> {
        Alphabet::product(self.inputs.clone(), self.outputs.clone())
    }
}

pub trait InputStrategy {
    /// The word for round `round`, of length `len`, after seeing O's letters.
    fn word(&mut self, round: usize, len: u64, outputs: &[usize]) -> Vec<usize>;
}

pub trait OutputStrategy {
    /// O's letter for round `round`; `inputs` is every input letter revealed so far.
    fn letter(&mut self, round: usize, inputs: &[usize]) -> usize;
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub input: Vec<usize>,
    pub output: usize,
    pub lookahead: u64,
}

/// Transcript of a finite play.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlayRecord {
    pub delay: String,
    pub arena: Arena,
    pub rounds: Vec<RoundRecord>,
}

impl PlayRecord {
    /// Every input letter revealed.
    pub fn alpha(&self) -> Vec<usize> {
        self.rounds.iter().flat_map(|r| r.input.iter().copied()).collect()
    }

    pub fn beta(&self) -> Vec<usize> {
        self.rounds.iter().map(|r| r.output).collect()
    }

    pub fn lookahead_curve(&self) -> Vec<u64> {
        self.rounds.iter().map(|r| r.lookahead).collect()
    }

    /// The answered part of the outcome as (input, output) pairs.
    pub fn outcome_prefix(&self) -> Vec<(usize, usize)> {
        self.alpha().into_iter().zip(self.beta()).collect()
    }

    /// Revealed input letters that O has not answered yet.
    pub fn pending(&self) -> Vec<usize> {
        self.alpha().split_off(self.rounds.len())
    }

    /// The answered outcome as a word over the arena's product alphabet.
    pub fn outcome_word(&self) -> Result<Word> {
        let a = self.arena.alphabet()?;
        self.outcome_prefix()
            .into_iter()
            .map(|(i, o)| a.pair(i, o))
            .collect()
    }

    pub fn format_letters(names: &[String], word: &[usize]) -> String {
        let single = names.iter().all(|n| n.chars().count() == 1);
        let parts: Vec<&str> = word.iter().map(|&l| names[l].as_str()).collect();
        parts.join(if single { "" } else { " " })
    }
}

/// Plays `rounds` rounds.
pub fn play(
    f: &DelayFunction,
    arena: &Arena,
    input: &mut dyn InputStrategy,
    output: &mut dyn OutputStrategy,
    rounds: usize,
) -> Result<PlayRecord> {
    if rounds == 0 {
        return Err(Error::Protocol("a play needs at least one round".into()));
    }
    let mut alpha: Vec<usize> = Vec::new();
    let mut beta: Vec<usize> = Vec::new();
    let mut record = Vec::with_capacity(rounds);
    for round in 0..rounds {
        let len = f.value(round);
        let u = input.word(round, len, &beta);
        if u.len() as u64 != len {
            return Err(Error::LengthViolation {
                round,
                expected: len,
                got: u.len(),
            });
        }
        if let Some(&bad) = u.iter().find(|&&l| l >= arena.inputs.len()) {
            return Err(Error::Contract {
                round,
                message: format!("input letter index {bad} out of range"),
            });
        }
        alpha.extend_from_slice(&u);
        let v = output.letter(round, &alpha);
        if v >= arena.outputs.len() {
            return Err(Error::Contract {
                round,
                message: format!("output letter index {v} out of range"),
            });
        }
        beta.push(v);
        record.push(RoundRecord {
            input: u,
            output: v,
            lookahead: (alpha.len() - beta.len()) as u64,
        });
    }
    Ok(PlayRecord {
        delay: f.to_string(),
        arena: arena.clone(),
        rounds: record,
    })
}

/// Uniformly random input letters.
#[derive(Clone, Debug)]
pub struct RandomInput {
    letters: usize,
    rng: ChaCha8Rng,
}

impl RandomInput {
    pub fn new(letters: usize, seed: u64) -> Self {
        RandomInput {
            letters,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl InputStrategy for RandomInput {
    fn word(&mut self, _: usize, len: u64, _: &[usize]) -> Vec<usize> {
        (0..len).map(|_| self.rng.gen_range(0..self.letters)).collect()
    }
}

/// Uniformly random output letters.
#[derive(Clone, Debug)]
pub struct RandomOutput {
    letters: usize,
    rng: ChaCha8Rng,
}

impl RandomOutput {
    pub fn new(letters: usize, seed: u64) -> Self {
        RandomOutput {
            letters,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl OutputStrategy for RandomOutput {
    fn letter(&mut self, _: usize, _: &[usize]) -> usize {
        self.rng.gen_range(0..self.letters)
    }
}

/// Repeats the input letter of the current position, for arenas whose
/// output letters mirror the input letters.
#[derive(Clone, Copy, Debug, Default)]
pub struct Copycat;

impl OutputStrategy for Copycat {
    fn letter(&mut self, round: usize, inputs: &[usize]) -> usize {
        inputs[round]
    }
}

/// Replays a fixed input word, cycling if it runs out.
#[derive(Clone, Debug)]
pub struct FixedInput {
    word: Vec<usize>,
    next: usize,
}

impl FixedInput {
    pub fn new(word: Vec<usize>) -> Result<Self> {
        if word.is_empty() {
            return Err(Error::Protocol("fixed input word must be nonempty".into()));
        }
        Ok(FixedInput { word, next: 0 })
    }
}

impl InputStrategy for FixedInput {
    fn word(&mut self, _: usize, len: u64, _: &[usize]) -> Vec<usize> {
        (0..len)
            .map(|_| {
                let l = self.word[self.next % self.word.len()];
                self.next += 1;
                l
            })
            .collect()
    }
}

/// Joint letters of a word over a product alphabet, split into components.
pub fn split_word(a: &Alphabet, w: &[LetterId]) -> Result<Vec<(usize, usize)>> {
    w.iter().map(|&l| a.split(l)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arena() -> Arena {
        Arena {
            inputs: vec!["a".into(), "b".into()],
            outputs: vec!["a".into(), "b".into()],
        }
    }

    #[test]
    fn parse_and_display() {
        let f: DelayFunction = "3,1*".parse().unwrap();
        assert_eq!(f.prefix(), &[3]);
        assert_eq!(f.tail(), 1);
        assert_eq!(f.to_string(), "3,1*");
        let g: DelayFunction = "2*".parse().unwrap();
        assert_eq!(g.value(100), 2);
        for bad in ["", "3", "0*", "1,0,1*", "x*", "2*,1*"] {
            assert!(bad.parse::<DelayFunction>().is_err(), "{bad}");
        }
    }

    #[test]
    fn classification() {
        assert_eq!(DelayFunction::new(vec![1], 1).unwrap().classify(), DelayClass::Constant);
        assert_eq!(DelayFunction::new(vec![7, 3], 1).unwrap().classify(), DelayClass::Bounded);
        assert_eq!(DelayFunction::new(vec![], 2).unwrap().classify(), DelayClass::Unbounded);
        assert_eq!("5,1*".parse::<DelayFunction>().unwrap().classify(), DelayClass::Constant);
        assert_eq!("6,1*".parse::<DelayFunction>().unwrap().max_lookahead(), Some(5));
    }

    #[test]
    fn lookahead_laws() {
        let mut o = Copycat;
        let f: DelayFunction = "1*".parse().unwrap();
        let p = play(&f, &arena(), &mut RandomInput::new(2, 1), &mut o, 20).unwrap();
        assert!(p.lookahead_curve().iter().all(|&l| l == 0));

        let f: DelayFunction = "3,1*".parse().unwrap();
        let p = play(&f, &arena(), &mut RandomInput::new(2, 1), &mut o, 20).unwrap();
        assert!(p.lookahead_curve().iter().all(|&l| l == 2));

        let f: DelayFunction = "2*".parse().unwrap();
        let p = play(&f, &arena(), &mut RandomInput::new(2, 1), &mut o, 20).unwrap();
        for (i, &l) in p.lookahead_curve().iter().enumerate() {
            assert_eq!(l, i as u64 + 1);
            assert_eq!(l, f.lookahead_after(i));
        }
        assert_eq!(p.pending().len() as u64, *p.lookahead_curve().last().unwrap());
    }

    #[test]
    fn outcome_prefix_shapes() {
        let f: DelayFunction = "1*".parse().unwrap();
        let p = play(&f, &arena(), &mut RandomInput::new(2, 3), &mut Copycat, 1).unwrap();
        assert_eq!(p.outcome_prefix().len(), 1);
        let f: DelayFunction = "4,2*".parse().unwrap();
        let p = play(&f, &arena(), &mut RandomInput::new(2, 3), &mut Copycat, 9).unwrap();
        let out = p.outcome_prefix();
        assert_eq!(out.len(), 9);
        let alpha = p.alpha();
        assert!(out.iter().zip(&alpha).all(|((i, _), a)| i == a));
        assert_eq!(p.outcome_word().unwrap().len(), 9);
    }

    struct Short;

    impl InputStrategy for Short {
        fn word(&mut self, round: usize, len: u64, _: &[usize]) -> Vec<usize> {
            vec![0; if round == 2 { len as usize - 1 } else { len as usize }]
        }
    }

    #[test]
    fn length_violation_names_round() {
        let f: DelayFunction = "2*".parse().unwrap();
        let err = play(&f, &arena(), &mut Short, &mut Copycat, 5).unwrap_err();
        assert_eq!(
            err,
            Error::LengthViolation {
                round: 2,
                expected: 2,
                got: 1
            }
        );
    }

    #[test]
    fn replay_is_deterministic() {
        let f: DelayFunction = "2,1,3*".parse().unwrap();
        let run = || {
            play(
                &f,
                &arena(),
                &mut RandomInput::new(2, 11),
                &mut RandomOutput::new(2, 12),
                30,
            )
            .unwrap()
        };
        assert_eq!(run(), run());
    }
}
