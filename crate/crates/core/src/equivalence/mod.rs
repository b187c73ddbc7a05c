//! Cap-`m` equivalence of words, its projection onto input words, and
//! analyses of the resulting finite class automata.

pub mod bounds;
pub mod graph;
pub mod projected;
pub mod signature;
pub mod tracker;

pub use bounds::{
    op_index_bound, projected_index_bound, theorem_initial_lookahead, word_index_bound,
    LookaheadBound,
};
pub use graph::{enumerate_classes, ClassGraph, DEFAULT_BUDGET};
pub use projected::{
    compute_threshold, enumerate_projected, input_alphabet, project_input, projected_signature,
    ProjectedSignature, ProjectedTracker,
};
pub use signature::{
    identity_word_signature, letter_signatures, word_compose, word_signature, WordSignature,
};
pub use tracker::{ClassAutomaton, ClassId, Tracker};
