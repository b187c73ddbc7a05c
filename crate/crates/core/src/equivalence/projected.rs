use std::collections::{BTreeSet, HashMap};

use crate::automaton::{Alphabet, LetterId, MaxAutomaton};
use crate::error::{Error, Result};

use super::signature::{identity_word_signature, letter_signatures, word_compose, WordSignature};
use super::graph::{enumerate_classes, ClassGraph};
use super::tracker::{ClassAutomaton, ClassId, Tracker};

/// The set of joint classes `{[x⊗y] : |y| = |x|}` of an input word `x`.
/// Two input words are projected-equivalent iff these sets coincide.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectedSignature {
    cap: u32,
    classes: BTreeSet<WordSignature>,
}

impl ProjectedSignature {
    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn classes(&self) -> &BTreeSet<WordSignature> {
        &self.classes
    }

    pub fn contains(&self, joint: &WordSignature) -> bool {
        self.classes.contains(joint)
    }
}

/// The input component of a product alphabet as a plain alphabet, with
/// letter ids equal to input component indices.
pub fn input_alphabet(a: &MaxAutomaton) -> Result<Alphabet> {
    let (inputs, _) = a.alphabet().components().ok_or(Error::NotProduct)?;
    Alphabet::plain(inputs.to_vec())
}

/// Input projection of a joint word.
pub fn project_input(a: &MaxAutomaton, joint: &[LetterId]) -> Result<Vec<LetterId>> {
    joint
        .iter()
        .map(|&l| a.alphabet().split(l).map(|(i, _)| LetterId(i)))
        .collect()
}

fn output_count(a: &MaxAutomaton) -> Result<usize> {
    a.alphabet()
        .components()
        .map(|(_, o)| o.len())
        .ok_or(Error::NotProduct)
}

/// Computes the projected class of `x` by the powerset recurrence over all
/// output letters.
pub fn projected_signature(a: &MaxAutomaton, x: &[LetterId], cap: u32) -> Result<ProjectedSignature> {
    let outputs = output_count(a)?;
    let inputs = a.alphabet().len() / outputs;
    let letters = letter_signatures(a, cap);
    let mut set: BTreeSet<WordSignature> = BTreeSet::from([identity_word_signature(a, cap)]);
    for &input in x {
        if input.0 >= inputs {
            return Err(Error::LetterOutOfRange {
                index: input.0,
                count: inputs,
            });
        }
        let mut next = BTreeSet::new();
        for s in &set {
            for b in 0..outputs {
                let joint = a.alphabet().pair(input.0, b)?;
                next.insert(word_compose(s, &letters[joint.0])?);
            }
        }
        set = next;
    }
    Ok(ProjectedSignature { cap, classes: set })
}

/// Deterministic power automaton over the joint tracker, reading input letters.
#[derive(Clone, Debug)]
pub struct ProjectedTracker {
    joint: Tracker,
    inputs: usize,
    outputs: usize,
    states: Vec<BTreeSet<ClassId>>,
    index: HashMap<BTreeSet<ClassId>, ClassId>,
    steps: Vec<Vec<Option<ClassId>>>,
}

impl ProjectedTracker {
    pub fn new(a: &MaxAutomaton, cap: u32) -> Result<Self> {
        let outputs = output_count(a)?;
        let joint = Tracker::new(a, cap);
        let mut t = ProjectedTracker {
            inputs: a.alphabet().len() / outputs,
            outputs,
            states: Vec::new(),
            index: HashMap::new(),
            steps: Vec::new(),
            joint,
        };
        let start = BTreeSet::from([t.joint.initial()]);
        t.intern(start);
        Ok(t)
    }

    fn intern(&mut self, set: BTreeSet<ClassId>) -> ClassId {
        if let Some(&id) = self.index.get(&set) {
            return id;
        }
        let id = ClassId(self.states.len());
        self.index.insert(set.clone(), id);
        self.states.push(set);
        self.steps.push(vec![None; self.inputs]);
        id
    }

    pub fn cap(&self) -> u32 {
        self.joint.cap()
    }

    pub fn joint(&self) -> &Tracker {
        &self.joint
    }

    pub fn joint_mut(&mut self) -> &mut Tracker {
        &mut self.joint
    }

    /// Joint-tracker classes making up a projected class.
    pub fn members(&self, class: ClassId) -> &BTreeSet<ClassId> {
        &self.states[class.0]
    }

    pub fn signature(&self, class: ClassId) -> ProjectedSignature {
        ProjectedSignature {
            cap: self.cap(),
            classes: self.states[class.0]
                .iter()
                .map(|&c| self.joint.signature(c).clone())
                .collect(),
        }
    }

    /// Projected class with the given signature, if materialized.
    pub fn lookup(&self, sig: &ProjectedSignature) -> Option<ClassId> {
        if sig.cap != self.cap() {
            return None;
        }
        let ids: Option<BTreeSet<ClassId>> =
            sig.classes.iter().map(|s| self.joint.lookup(s)).collect();
        self.index.get(&ids?).copied()
    }
}

impl ClassAutomaton for ProjectedTracker {
    fn num_letters(&self) -> usize {
        self.inputs
    }

    fn initial(&self) -> ClassId {
        ClassId(0)
    }

    fn num_classes(&self) -> usize {
        self.states.len()
    }

    fn step(&mut self, class: ClassId, letter: LetterId) -> ClassId {
        if let Some(next) = self.steps[class.0][letter.0] {
            return next;
        }
        let mut set = BTreeSet::new();
        let members: Vec<ClassId> = self.states[class.0].iter().copied().collect();
        for c in members {
            for b in 0..self.outputs {
                let joint = LetterId(letter.0 * self.outputs + b);
                set.insert(self.joint.step(c, joint));
            }
        }
        let next = self.intern(set);
        self.steps[class.0][letter.0] = Some(next);
        next
    }
}

/// Enumerates the projected classes at cap `m`, failing if the budget runs out.
pub fn enumerate_projected(a: &MaxAutomaton, m: u32, budget: usize) -> Result<(ProjectedTracker, ClassGraph)> {
    let mut t = ProjectedTracker::new(a, m)?;
    let g = enumerate_classes(&mut t, budget);
    if !g.is_complete() {
        return Err(Error::BudgetExhausted { budget });
    }
    Ok((t, g))
}

/// Least `d` such that every input word of length at least `d` lies in an
/// infinite projected class at cap `m`.
pub fn compute_threshold(a: &MaxAutomaton, m: u32, budget: usize) -> Result<u64> {
    let (_, g) = enumerate_projected(a, m, budget)?;
    g.threshold()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::MaxAutomatonBuilder;
    use crate::equivalence::signature::word_signature;

    fn copy_check() -> MaxAutomaton {
        // remembers whether the output ever differed from the input
        MaxAutomatonBuilder::new(Alphabet::product(["a", "b"], ["a", "b"]).unwrap())
            .counters(["c"])
            .states(["ok", "bad"])
            .initial("ok")
            .accept("!bounded c")
            .transition("ok", "a|a", "ok", "inc c")
            .transition("ok", "b|b", "ok", "inc c")
            .transition("ok", "a|b", "bad", "reset c")
            .transition("ok", "b|a", "bad", "reset c")
            .transition("bad", "a|a", "bad", "")
            .transition("bad", "a|b", "bad", "")
            .transition("bad", "b|a", "bad", "")
            .transition("bad", "b|b", "bad", "")
            .build()
            .unwrap()
    }

    #[test]
    fn empty_input_word() {
        let a = copy_check();
        let p = projected_signature(&a, &[], 1).unwrap();
        assert_eq!(p.classes().len(), 1);
        assert!(p.contains(&identity_word_signature(&a, 1)));
    }

    #[test]
    fn singleton_output_alphabet() {
        let a = MaxAutomatonBuilder::new(Alphabet::product(["a", "b"], ["x"]).unwrap())
            .counters(["c"])
            .states(["q"])
            .initial("q")
            .accept("bounded c")
            .transition("q", "a|x", "q", "inc c")
            .transition("q", "b|x", "q", "reset c")
            .build()
            .unwrap();
        let x = vec![LetterId(0), LetterId(1), LetterId(0)];
        let p = projected_signature(&a, &x, 2).unwrap();
        assert_eq!(p.classes().len(), 1);
        assert!(p.contains(&word_signature(&a, &x, 2).unwrap()));
    }

    #[test]
    fn tracker_agrees_with_recurrence() {
        let a = copy_check();
        let mut t = ProjectedTracker::new(&a, 1).unwrap();
        let x = vec![LetterId(0), LetterId(1), LetterId(1)];
        let id = t.run(&x);
        assert_eq!(t.signature(id), projected_signature(&a, &x, 1).unwrap());
        assert_eq!(t.lookup(&t.signature(id)), Some(id));
    }

    #[test]
    fn plain_alphabet_rejected() {
        let a = MaxAutomatonBuilder::new(Alphabet::plain(["a"]).unwrap())
            .counters(["c"])
            .states(["q"])
            .initial("q")
            .accept("bounded c")
            .transition("q", "a", "q", "")
            .build()
            .unwrap();
        assert_eq!(projected_signature(&a, &[], 0).unwrap_err(), Error::NotProduct);
        assert!(ProjectedTracker::new(&a, 0).is_err());
    }
}
