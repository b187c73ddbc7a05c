//! The block game separating bounded from unbounded lookahead.
//!
//! Input letters are `0 1 #`, output letters `0 1 *`. An input block is
//! `#w` with `w ∈ {0,1}+`. An output block is
//! `(#,x)(a1,*)...(a(n-1),*)(an,an)` with `x = an`. Lengths count every
//! letter, including the `#`. The winning condition asks for arbitrarily long
//! output blocks whenever the input has infinitely many `#` and arbitrarily
//! long input blocks.

use serde::{Deserialize, Serialize};

use crate::automaton::{Alphabet, MaxAutomaton, MaxAutomatonBuilder};
use crate::error::{Error, Result};

use super::delay::{
    play, Arena, DelayFunction, InputStrategy, OutputStrategy, PlayRecord, RandomInput,
    RandomOutput,
};

pub const ZERO: usize = 0;
pub const ONE: usize = 1;
pub const HASH: usize = 2;
pub const STAR: usize = 2;

pub fn block_arena() -> Arena {
    Arena {
        inputs: vec!["0".into(), "1".into(), "#".into()],
        outputs: vec!["0".into(), "1".into(), "*".into()],
    }
}

/// Counters `c#` (number of `#`), `ci` (current input block), `co'`
/// (current candidate output block) and `co` (last completed output block).
/// States `N` (no candidate), `O0`, `O1` (candidate committed to 0 or 1).
pub fn build_block_automaton() -> MaxAutomaton {
    let alphabet = Alphabet::product(["0", "1", "#"], ["0", "1", "*"]).expect("distinct letters");
    let mut b = MaxAutomatonBuilder::new(alphabet)
        .counters(["c#", "ci", "co'", "co"])
        .states(["N", "O0", "O1"])
        .initial("N")
        .accept("bounded c# | bounded ci | !bounded co");
    for q in ["N", "O0", "O1"] {
        for x in ["0", "1"] {
            b = b.transition(
                q,
                &format!("#|{x}"),
                &format!("O{x}"),
                "inc c# ; reset ci ; reset co' ; inc co'",
            );
        }
        b = b.transition(q, "#|*", "N", "inc c# ; reset ci ; reset co'");
        for i in ["0", "1"] {
            for o in ["0", "1", "*"] {
                let letter = format!("{i}|{o}");
                let (to, ops) = match (q, o) {
                    ("N", _) => ("N".to_string(), "inc ci"),
                    (_, "*") => (q.to_string(), "inc ci ; inc co'"),
                    (_, o) if q[1..] == *o && i == o => {
                        ("N".to_string(), "inc ci ; inc co' ; max co co' co' ; reset co'")
                    }
                    _ => ("N".to_string(), "inc ci ; reset co'"),
                };
                b = b.transition(q, &letter, &to, ops);
            }
        }
    }
    b.build().expect("block automaton is well formed")
}

/// A decision taken by [`LongestBlock`] at a `#`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Commitment {
    /// Position of the `#`.
    pub start: usize,
    /// Position of the last letter of the longest visible block.
    pub end: usize,
    pub letter: usize,
}

impl Commitment {
    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// At a `#`, commits to the last letter of the longest input block starting
/// there that is visible, then plays `*` up to that letter and repeats it.
/// Plays `*` everywhere else.
#[derive(Clone, Debug, Default)]
pub struct LongestBlock {
    pending: Option<Commitment>,
    log: Vec<Commitment>,
}

impl LongestBlock {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn commitments(&self) -> &[Commitment] {
        &self.log
    }
}

impl OutputStrategy for LongestBlock {
    fn letter(&mut self, round: usize, inputs: &[usize]) -> usize {
        if inputs[round] == HASH {
            self.pending = None;
            let run = inputs[round + 1..]
                .iter()
                .take_while(|&&l| l != HASH)
                .count();
            if run == 0 {
                return STAR;
            }
            let c = Commitment {
                start: round,
                end: round + run,
                letter: inputs[round + run],
            };
            self.pending = Some(c);
            self.log.push(c);
            return c.letter;
        }
        match self.pending {
            Some(c) if c.end == round => {
                self.pending = None;
                c.letter
            }
            _ => STAR,
        }
    }
}

/// Opens a block with `#`, plays `0` until O's answer at that `#` is known,
/// then fills the block with the opposite letter until it reaches its target
/// length. Targets start at `ℓ + 2` and grow by one per block.
#[derive(Clone, Debug)]
pub struct Spoiler {
    target: usize,
    /// Position of the open block's `#` and its current length.
    open: Option<(usize, usize)>,
    filled: bool,
    emitted: usize,
    blocks: Vec<usize>,
}

impl Spoiler {
    pub fn new(lookahead: u64) -> Self {
        Spoiler {
            target: lookahead as usize + 2,
            open: None,
            filled: false,
            emitted: 0,
            blocks: Vec::new(),
        }
    }

    /// Lengths of the blocks finished so far.
    pub fn finished_blocks(&self) -> &[usize] {
        &self.blocks
    }

    fn next_letter(&mut self, outputs: &[usize]) -> usize {
        let pos = self.emitted;
        self.emitted += 1;
        let Some((start, len)) = self.open else {
            self.open = Some((pos, 1));
            self.filled = false;
            return HASH;
        };
        if self.filled && len >= self.target {
            self.blocks.push(len);
            self.target = self.target.max(len) + 1;
            self.open = Some((pos, 1));
            self.filled = false;
            return HASH;
        }
        self.open = Some((start, len + 1));
        match outputs.get(start) {
            None => ZERO,
            Some(&answer) => {
                self.filled = true;
                if answer == ZERO {
                    ONE
                } else {
                    ZERO
                }
            }
        }
    }
}

impl InputStrategy for Spoiler {
    fn word(&mut self, _: usize, len: u64, outputs: &[usize]) -> Vec<usize> {
        (0..len).map(|_| self.next_letter(outputs)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputBlock {
    pub start: usize,
    pub len: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockStats {
    /// Lengths of the maximal input blocks, the last one possibly open.
    pub input_blocks: Vec<usize>,
    /// Whether the last input block reaches the end of the prefix.
    pub input_open: bool,
    pub output_blocks: Vec<OutputBlock>,
    /// Whether a candidate output block reaches the end of the prefix.
    pub output_open: bool,
}

impl BlockStats {
    pub fn output_lengths(&self) -> Vec<usize> {
        self.output_blocks.iter().map(|b| b.len).collect()
    }

    pub fn max_output(&self) -> usize {
        self.output_blocks.iter().map(|b| b.len).max().unwrap_or(0)
    }

    pub fn max_input(&self) -> usize {
        self.input_blocks.iter().copied().max().unwrap_or(0)
    }
}

/// Scans input letters and, if given, the aligned output letters.
/// `outputs` may be shorter than `inputs`; output blocks are only looked
/// for in the answered part.
pub fn block_statistics(inputs: &[usize], outputs: Option<&[usize]>) -> BlockStats {
    let mut stats = BlockStats::default();
    let mut i = 0;
    while i < inputs.len() {
        if inputs[i] != HASH {
            i += 1;
            continue;
        }
        let run = inputs[i + 1..].iter().take_while(|&&l| l != HASH).count();
        if run > 0 {
            stats.input_blocks.push(run + 1);
            stats.input_open = i + run + 1 == inputs.len();
        }
        i += run + 1;
    }
    let Some(outputs) = outputs else {
        return stats;
    };
    let n = outputs.len().min(inputs.len());
    for start in 0..n {
        if inputs[start] != HASH || outputs[start] == STAR {
            continue;
        }
        let x = outputs[start];
        let mut j = start + 1;
        while j < n && inputs[j] != HASH && outputs[j] == STAR {
            j += 1;
        }
        if j == n {
            stats.output_open = true;
        } else if inputs[j] == x && outputs[j] == x {
            stats.output_blocks.push(OutputBlock {
                start,
                len: j - start + 1,
            });
        }
    }
    stats
}

pub const STRATEGY_NAMES: [&str; 4] = ["o-longest-block", "i-spoiler:<l>", "i-random", "o-random"];

/// Input strategy by registered name.
pub fn input_strategy(name: &str, seed: u64) -> Result<Box<dyn InputStrategy>> {
    if name == "i-random" {
        return Ok(Box::new(RandomInput::new(3, seed)));
    }
    if let Some(l) = name.strip_prefix("i-spoiler:") {
        let l = l
            .parse()
            .map_err(|_| Error::Protocol(format!("invalid lookahead in `{name}`")))?;
        return Ok(Box::new(Spoiler::new(l)));
    }
    Err(Error::Protocol(format!("unknown input strategy `{name}`")))
}

/// A registered output strategy, kept concrete so its log stays readable.
#[allow(clippy::large_enum_variant)]
pub enum Output {
    LongestBlock(LongestBlock),
    Random(RandomOutput),
}

impl Output {
    pub fn by_name(name: &str, seed: u64) -> Result<Self> {
        match name {
            "o-longest-block" => Ok(Output::LongestBlock(LongestBlock::new())),
            "o-random" => Ok(Output::Random(RandomOutput::new(3, seed))),
            _ => Err(Error::Protocol(format!("unknown output strategy `{name}`"))),
        }
    }

    pub fn as_strategy(&mut self) -> &mut dyn OutputStrategy {
        match self {
            Output::LongestBlock(s) => s,
            Output::Random(s) => s,
        }
    }

    pub fn commitments(&self) -> Option<&[Commitment]> {
        match self {
            Output::LongestBlock(s) => Some(s.commitments()),
            Output::Random(_) => None,
        }
    }
}

/// A finished block-game simulation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BlockSimulation {
    pub record: PlayRecord,
    pub stats: BlockStats,
    pub commitments: Option<Vec<Commitment>>,
}

/// Plays the block game between two registered strategies. Input and output
/// randomness are derived from `seed`.
pub fn simulate_block(
    f: &DelayFunction,
    input: &str,
    output: &str,
    rounds: usize,
    seed: u64,
) -> Result<BlockSimulation> {
    let mut i = input_strategy(input, seed)?;
    let mut o = Output::by_name(output, seed.wrapping_add(1))?;
    let record = play(f, &block_arena(), i.as_mut(), o.as_strategy(), rounds)?;
    let stats = block_statistics(&record.alpha(), Some(&record.beta()));
    Ok(BlockSimulation {
        stats,
        commitments: o.commitments().map(<[Commitment]>::to_vec),
        record,
    })
}

/// Checks that every completed output block is exactly a committed block and
/// that each commitment covers the longest input block visible at its `#`.
pub fn spans_longest_visible(sim: &BlockSimulation, f: &DelayFunction) -> std::result::Result<(), String> {
    let commitments = sim.commitments.as_deref().ok_or("no commitment log")?;
    let alpha = sim.record.alpha();
    for c in commitments {
        let visible = c.start + 1 + f.lookahead_after(c.start) as usize;
        let run = alpha[c.start + 1..visible.min(alpha.len())]
            .iter()
            .take_while(|&&l| l != HASH)
            .count();
        if c.end != c.start + run || run == 0 {
            return Err(format!("commitment at {} ends at {}, visible block ends at {}", c.start, c.end, c.start + run));
        }
    }
    for b in &sim.stats.output_blocks {
        if !commitments.iter().any(|c| c.start == b.start && c.len() == b.len) {
            return Err(format!("output block at {} of length {} was not committed", b.start, b.len));
        }
    }
    for c in commitments {
        if c.end < sim.record.rounds.len()
            && !sim.stats.output_blocks.iter().any(|b| b.start == c.start && b.len == c.len())
        {
            return Err(format!("commitment at {} was not completed", c.start));
        }
    }
    Ok(())
}
