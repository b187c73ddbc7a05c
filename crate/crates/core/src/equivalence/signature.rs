use crate::automaton::{LetterId, MaxAutomaton, StateId};
use crate::error::{Error, Result};
use crate::transfer::{compose, identity_signature, label_signature, TransferSignature};

/// A class of words at cap `m`: the transition profile plus, for every
/// state, the signature of the labels read from that state.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WordSignature {
    cap: u32,
    profile: Vec<StateId>,
    per_state: Vec<TransferSignature>,
}

impl WordSignature {
    pub fn cap(&self) -> u32 {
        self.cap
    }

    /// `q ↦ δ*(q, w)`.
    pub fn profile(&self) -> &[StateId] {
        &self.profile
    }

    pub fn target(&self, q: StateId) -> StateId {
        self.profile[q.0]
    }

    /// Signature of `ℓ(q, w)`.
    pub fn from_state(&self, q: StateId) -> &TransferSignature {
        &self.per_state[q.0]
    }

    pub fn per_state(&self) -> &[TransferSignature] {
        &self.per_state
    }
}

/// Signature of the empty word.
pub fn identity_word_signature(a: &MaxAutomaton, cap: u32) -> WordSignature {
    WordSignature {
        cap,
        profile: a.state_ids().collect(),
        per_state: vec![identity_signature(a.num_counters(), cap); a.num_states()],
    }
}

/// Signature of every one-letter word, indexed by letter.
pub fn letter_signatures(a: &MaxAutomaton, cap: u32) -> Vec<WordSignature> {
    let k = a.num_counters();
    a.alphabet()
        .ids()
        .map(|l| WordSignature {
            cap,
            profile: a.state_ids().map(|q| a.next(q, l)).collect(),
            per_state: a
                .state_ids()
                .map(|q| label_signature(a.label(q, l), k, cap))
                .collect(),
        })
        .collect()
}

/// Signature of `w1 · w2` from those of `w1` and `w2`.
pub fn word_compose(s1: &WordSignature, s2: &WordSignature) -> Result<WordSignature> {
    if s1.cap != s2.cap {
        return Err(Error::CapMismatch {
            left: s1.cap,
            right: s2.cap,
        });
    }
    if s1.profile.len() != s2.profile.len() {
        return Err(Error::Structure("signatures of different automata".into()));
    }
    let mut profile = Vec::with_capacity(s1.profile.len());
    let mut per_state = Vec::with_capacity(s1.profile.len());
    for (q, &mid) in s1.profile.iter().enumerate() {
        profile.push(s2.profile[mid.0]);
        per_state.push(compose(&s1.per_state[q], &s2.per_state[mid.0])?);
    }
    Ok(WordSignature {
        cap: s1.cap,
        profile,
        per_state,
    })
}

/// The cap-`m` class of `w`, folding letter signatures left to right.
pub fn word_signature(a: &MaxAutomaton, w: &[LetterId], cap: u32) -> Result<WordSignature> {
    a.check_word(w)?;
    let letters = letter_signatures(a, cap);
    let mut acc = identity_word_signature(a, cap);
    for &l in w {
        acc = word_compose(&acc, &letters[l.0])?;
    }
    Ok(acc)
}
