//! Delay games, the block game and the class game.

pub mod block;
pub mod class_game;
pub mod delay;

pub use block::{
    block_statistics, build_block_automaton, simulate_block, BlockSimulation, BlockStats,
    LongestBlock, Spoiler,
};
pub use class_game::{ClassGame, Transcript, Turn};
pub use delay::{
    play, Arena, Copycat, DelayClass, DelayFunction, InputStrategy, OutputStrategy, PlayRecord,
    RandomInput, RandomOutput,
};
