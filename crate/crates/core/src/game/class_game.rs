//! The class game: player I picks a precision `r_i` and an infinite
//! projected class of input words, staying one class ahead; player O answers
//! each input class with a joint class whose input projection contains it.
//!
//! The engine checks legality and keeps the transcript; it does not decide
//! who wins the infinite game.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::automaton::{LetterId, MaxAutomaton, Word};
use crate::equivalence::{
    enumerate_projected, input_alphabet, word_signature, ClassAutomaton, ClassGraph, ClassId,
    ProjectedSignature, ProjectedTracker, WordSignature,
};
use crate::error::{Error, Result};

/// A node of the joint-by-input product searched for representatives.
type Node = (ClassId, ClassId);

/// Projected classes at one cap, enumerated completely.
struct Level {
    tracker: ProjectedTracker,
    graph: ClassGraph,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IMove {
    pub r: u32,
    /// Projected class id at cap `r`, in discovery order.
    pub class: ClassId,
    pub signature: ProjectedSignature,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OMove {
    pub r: u32,
    pub signature: WordSignature,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Turn {
    I,
    O,
}

pub struct ClassGame<'a> {
    automaton: &'a MaxAutomaton,
    budget: usize,
    levels: BTreeMap<u32, Level>,
    i_moves: Vec<IMove>,
    o_moves: Vec<OMove>,
    weakly_increasing: bool,
}

impl<'a> ClassGame<'a> {
    pub fn new(automaton: &'a MaxAutomaton, budget: usize) -> Result<Self> {
        if !automaton.alphabet().is_product() {
            return Err(Error::NotProduct);
        }
        Ok(ClassGame {
            automaton,
            budget,
            levels: BTreeMap::new(),
            i_moves: Vec::new(),
            o_moves: Vec::new(),
            weakly_increasing: true,
        })
    }

    fn level(&mut self, r: u32) -> Result<&mut Level> {
        if !self.levels.contains_key(&r) {
            let (tracker, graph) = enumerate_projected(self.automaton, r, self.budget)?;
            self.levels.insert(r, Level { tracker, graph });
        }
        Ok(self.levels.get_mut(&r).expect("inserted"))
    }

    /// Player I moves while fewer than two of his classes are unanswered.
    pub fn turn(&self) -> Turn {
        if self.i_moves.len() < self.o_moves.len() + 2 {
            Turn::I
        } else {
            Turn::O
        }
    }

    pub fn i_moves(&self) -> &[IMove] {
        &self.i_moves
    }

    pub fn o_moves(&self) -> &[OMove] {
        &self.o_moves
    }

    pub fn rs(&self) -> Vec<u32> {
        self.i_moves.iter().map(|m| m.r).collect()
    }

    /// Whether `r_0, r_1, ...` has been weakly increasing so far. Whether it
    /// is unbounded cannot be told from a finite prefix.
    pub fn weakly_increasing(&self) -> bool {
        self.weakly_increasing
    }

    /// Projected class of an input word at cap `r`.
    pub fn input_class(&mut self, r: u32, x: &[LetterId]) -> Result<ClassId> {
        let level = self.level(r)?;
        let inputs = level.tracker.num_letters();
        if let Some(bad) = x.iter().find(|l| l.0 >= inputs) {
            return Err(Error::LetterOutOfRange {
                index: bad.0,
                count: inputs,
            });
        }
        Ok(level.tracker.run(x))
    }

    pub fn is_infinite(&mut self, r: u32, class: ClassId) -> Result<bool> {
        self.level(r)?.graph.is_infinite(class)
    }

    /// Threshold `d(r)` of the cap-`r` projected classes.
    pub fn threshold(&mut self, r: u32) -> Result<u64> {
        self.level(r)?.graph.threshold()
    }

    pub fn submit_i_class(&mut self, r: u32, class: ClassId) -> Result<()> {
        if self.turn() != Turn::I {
            return Err(Error::Protocol("player O must answer first".into()));
        }
        let level = self.level(r)?;
        if !level.graph.contains(class) {
            return Err(Error::IllegalMove(format!("no projected class {class} at cap {r}")));
        }
        if !level.graph.is_infinite(class)? {
            return Err(Error::IllegalMove(format!(
                "projected class {class} at cap {r} is finite"
            )));
        }
        let signature = level.tracker.signature(class);
        if self.i_moves.last().is_some_and(|m| m.r > r) {
            self.weakly_increasing = false;
        }
        self.i_moves.push(IMove { r, class, signature });
        Ok(())
    }

    /// I-move given by a representative input word.
    pub fn submit_i_word(&mut self, r: u32, x: &[LetterId]) -> Result<()> {
        let class = self.input_class(r, x)?;
        self.submit_i_class(r, class)
    }

    pub fn submit_i_signature(&mut self, sig: &ProjectedSignature) -> Result<()> {
        let r = sig.cap();
        let class = self
            .level(r)?
            .tracker
            .lookup(sig)
            .ok_or_else(|| Error::IllegalMove("projected class is not reachable".into()))?;
        self.submit_i_class(r, class)
    }

    /// The input class O has to answer next.
    pub fn pending(&self) -> Result<&IMove> {
        self.i_moves
            .get(self.o_moves.len())
            .ok_or_else(|| Error::Protocol("no pending move of player I".into()))
    }

    /// Joint classes O may answer the pending input class with, in canonical order.
    pub fn legal_o_moves(&self) -> Result<Vec<WordSignature>> {
        Ok(self.pending()?.signature.classes().iter().cloned().collect())
    }

    pub fn submit_o_move(&mut self, joint: &WordSignature) -> Result<()> {
        if self.turn() != Turn::O {
            return Err(Error::Protocol("player I is one class ahead and moves first".into()));
        }
        let pending = self.pending()?;
        if joint.cap() != pending.r {
            return Err(Error::IllegalMove(format!(
                "joint class has cap {}, expected {}",
                joint.cap(),
                pending.r
            )));
        }
        if !pending.signature.contains(joint) {
            return Err(Error::IllegalMove(
                "joint class contains no word over the pending input class".into(),
            ));
        }
        self.o_moves.push(OMove {
            r: pending.r,
            signature: joint.clone(),
        });
        Ok(())
    }

    /// O-move given by a representative joint word.
    pub fn submit_o_word(&mut self, w: &[LetterId]) -> Result<()> {
        let r = self.pending()?.r;
        let sig = word_signature(self.automaton, w, r)?;
        self.submit_o_move(&sig)
    }

    /// Shortlex-least joint word in the O-class of round `i` whose input
    /// projection lies in the I-class of that round.
    pub fn representative(&mut self, i: usize) -> Result<Word> {
        let o = self
            .o_moves
            .get(i)
            .cloned()
            .ok_or_else(|| Error::Protocol(format!("round {i} has not been answered")))?;
        let target_input = self.i_moves[i].class;
        let outputs = self
            .automaton
            .alphabet()
            .components()
            .map(|(_, out)| out.len())
            .ok_or(Error::NotProduct)?;
        let letters = self.automaton.alphabet().len();
        let level = self.level(o.r)?;
        let target_joint = level
            .tracker
            .joint()
            .lookup(&o.signature)
            .ok_or_else(|| Error::IllegalMove("joint class is not reachable".into()))?;
        let start = (level.tracker.joint().initial(), level.tracker.initial());
        let mut parent: HashMap<Node, Option<(Node, LetterId)>> =
            HashMap::from([(start, None)]);
        let mut queue = VecDeque::from([start]);
        while let Some(node) = queue.pop_front() {
            if node == (target_joint, target_input) {
                let mut word = Vec::new();
                let mut at = node;
                while let Some((p, a)) = parent[&at] {
                    word.push(a);
                    at = p;
                }
                word.reverse();
                return Ok(word);
            }
            for l in 0..letters {
                let joint = level.tracker.joint_mut().step(node.0, LetterId(l));
                let input = level.tracker.step(node.1, LetterId(l / outputs));
                let next = (joint, input);
                if let Entry::Vacant(e) = parent.entry(next) {
                    e.insert(Some((node, LetterId(l))));
                    queue.push_back(next);
                }
            }
        }
        Err(Error::IllegalMove(format!("round {i}: no joint word matches both classes")))
    }

    /// Concatenated representatives of the first `horizon` answered rounds.
    pub fn outcome_material(&mut self, horizon: usize) -> Result<Word> {
        if self.o_moves.len() < horizon {
            return Err(Error::Protocol(format!(
                "only {} rounds answered, {horizon} requested",
                self.o_moves.len()
            )));
        }
        let mut out = Vec::new();
        for i in 0..horizon {
            out.extend(self.representative(i)?);
        }
        Ok(out)
    }

    pub fn transcript(&mut self) -> Result<Transcript> {
        let a = self.automaton;
        let input_names = input_alphabet(a)?;
        let mut rounds = Vec::new();
        for i in 0..self.i_moves.len() {
            let m = self.i_moves[i].clone();
            let input_rep = self.level(m.r)?.graph.shortest_representative(m.class)?;
            let answer = match self.o_moves.get(i) {
                Some(_) => Some(a.alphabet().format_word(&self.representative(i)?)),
                None => None,
            };
            rounds.push(TranscriptRound {
                r: m.r,
                input_class: m.class.0,
                input_representative: input_names.format_word(&input_rep),
                output_representative: answer,
            });
        }
        Ok(Transcript {
            rounds,
            weakly_increasing: self.weakly_increasing,
            unbounded: "indeterminate".into(),
            next: self.turn(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptRound {
    pub r: u32,
    pub input_class: usize,
    pub input_representative: String,
    pub output_representative: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub rounds: Vec<TranscriptRound>,
    pub weakly_increasing: bool,
    pub unbounded: String,
    pub next: Turn,
}
