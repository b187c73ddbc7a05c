//! Max-automata, the cap-`m` class calculus for counter behavior, and a
//! simulator for delay games over max-automaton winning conditions.

pub mod automaton;
pub mod equivalence;
pub mod error;
pub mod format;
pub mod formula;
pub mod game;
pub mod periodic;
pub mod reduce;
pub mod transfer;

pub use automaton::{
    apply_ops, Alphabet, CounterId, CounterOp, CounterValuation, Letter, LetterId, MaxAutomaton,
    MaxAutomatonBuilder, OpSequence, RunTrace, StateId, Word,
};
pub use error::{Error, Result};
pub use format::{parse_automaton, serialize_automaton};
pub use formula::{eval_acceptance, Formula};
pub use transfer::{compose, identity_signature, label_signature, project_cap, Capped, TransferSignature};
