use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::automaton::{LetterId, MaxAutomaton};

use super::signature::{identity_word_signature, letter_signatures, word_compose, WordSignature};

/// Identifier of a class inside one tracker, assigned in discovery order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClassId(pub usize);

impl ClassId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A deterministic automaton whose states are classes, materialized lazily.
pub trait ClassAutomaton {
    fn num_letters(&self) -> usize;
    fn initial(&self) -> ClassId;
    /// Number of classes materialized so far.
    fn num_classes(&self) -> usize;
    fn step(&mut self, class: ClassId, letter: LetterId) -> ClassId;

    fn run(&mut self, word: &[LetterId]) -> ClassId {
        let mut c = self.initial();
        for &a in word {
            c = self.step(c, a);
        }
        c
    }
}

/// Tracks the cap-`m` class of the word read so far. Classes are hash-consed
/// word signatures; successors are memoized.
#[derive(Clone, Debug)]
pub struct Tracker {
    cap: u32,
    letters: Vec<WordSignature>,
    classes: Vec<WordSignature>,
    index: HashMap<WordSignature, ClassId>,
    steps: Vec<Vec<Option<ClassId>>>,
}

impl Tracker {
    pub fn new(a: &MaxAutomaton, cap: u32) -> Self {
        let mut t = Tracker {
            cap,
            letters: letter_signatures(a, cap),
            classes: Vec::new(),
            index: HashMap::new(),
            steps: Vec::new(),
        };
        t.intern(identity_word_signature(a, cap));
        t
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    fn intern(&mut self, sig: WordSignature) -> ClassId {
        if let Some(&id) = self.index.get(&sig) {
            return id;
        }
        let id = ClassId(self.classes.len());
        self.index.insert(sig.clone(), id);
        self.classes.push(sig);
        self.steps.push(vec![None; self.letters.len()]);
        id
    }

    pub fn signature(&self, class: ClassId) -> &WordSignature {
        &self.classes[class.0]
    }

    /// Class of a signature, if it has been materialized.
    pub fn lookup(&self, sig: &WordSignature) -> Option<ClassId> {
        self.index.get(sig).copied()
    }

    pub fn letter_signature(&self, letter: LetterId) -> &WordSignature {
        &self.letters[letter.0]
    }
}

impl ClassAutomaton for Tracker {
    fn num_letters(&self) -> usize {
        self.letters.len()
    }

    fn initial(&self) -> ClassId {
        ClassId(0)
    }

    fn num_classes(&self) -> usize {
        self.classes.len()
    }

    fn step(&mut self, class: ClassId, letter: LetterId) -> ClassId {
        if let Some(next) = self.steps[class.0][letter.0] {
            return next;
        }
        let sig = word_compose(&self.classes[class.0], &self.letters[letter.0])
            .expect("tracker signatures share cap and automaton");
        let next = self.intern(sig);
        self.steps[class.0][letter.0] = Some(next);
        next
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{Alphabet, MaxAutomatonBuilder};
    use crate::equivalence::signature::word_signature;

    fn r1() -> MaxAutomaton {
        MaxAutomatonBuilder::new(Alphabet::plain(["a", "b"]).unwrap())
            .counters(["c"])
            .states(["q"])
            .initial("q")
            .accept("!bounded c")
            .transition("q", "a", "q", "inc c")
            .transition("q", "b", "q", "reset c")
            .build()
            .unwrap()
    }

    #[test]
    fn empty_word_is_initial() {
        let a = r1();
        let mut t = Tracker::new(&a, 1);
        assert_eq!(t.run(&[]), t.initial());
    }

    #[test]
    fn run_matches_signature_and_memoizes() {
        let a = r1();
        let mut t = Tracker::new(&a, 2);
        let w = a.alphabet().parse_word("aabab").unwrap();
        let c = t.run(&w);
        assert_eq!(t.signature(c), &word_signature(&a, &w, 2).unwrap());
        let n = t.num_classes();
        assert_eq!(t.run(&w), c);
        assert_eq!(t.num_classes(), n);
    }
}
