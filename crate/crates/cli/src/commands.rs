use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use maxdelay::equivalence::{
    enumerate_classes, enumerate_projected, input_alphabet, projected_index_bound,
    theorem_initial_lookahead, word_index_bound, word_signature, ClassAutomaton, ClassGraph,
    ClassId, Tracker,
};
use maxdelay::game::block::{block_arena, spans_longest_visible};
use maxdelay::game::{simulate_block, ClassGame, DelayFunction, PlayRecord};
use maxdelay::periodic::{analyze, Lasso};
use maxdelay::reduce::{diagonal_lift, parity_to_max, safety_to_max, ParityAutomaton, SafetyAutomaton};
use maxdelay::{parse_automaton, serialize_automaton, Alphabet, Error, MaxAutomaton};
use serde_json::json;

use crate::report::{InputFile, Outcome};

/// Shared state of one invocation: files read so far and the budget.
pub struct Ctx {
    pub inputs: Vec<InputFile>,
    pub budget: usize,
}

impl Ctx {
    fn read(&mut self, path: &Path) -> Result<String> {
        let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
        self.inputs.push(InputFile::hash(path, &bytes));
        String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))
    }

    fn automaton(&mut self, path: &Path) -> Result<MaxAutomaton> {
        let text = self.read(path)?;
        parse_automaton(&text).with_context(|| format!("in {}", path.display()))
    }
}

fn outcome(text: String, results: serde_json::Value) -> Outcome {
    Outcome {
        text,
        results,
        seed: None,
    }
}

/// Pads every column of `rows` to its widest cell.
fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in rows {
        let cells: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(i, s)| format!("{s:<w$}", w = widths[i]))
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn show_word(a: &Alphabet, w: &[maxdelay::LetterId]) -> String {
    if w.is_empty() {
        "ε".into()
    } else {
        a.format_word(w)
    }
}

pub fn member(ctx: &mut Ctx, path: &Path, u: &str, v: &str) -> Result<Outcome> {
    let a = ctx.automaton(path)?;
    let lasso = Lasso::new(a.alphabet().parse_word(u)?, a.alphabet().parse_word(v)?)?;
    let analysis = analyze(&a, &lasso)?;
    let verdict = if analysis.accepted { "accepted" } else { "rejected" };
    let mut rows = vec![vec!["counter".to_string(), "boundedness".to_string()]];
    let mut counters = Vec::new();
    for (&c, &bounded) in &analysis.bounded {
        let kind = if bounded { "bounded" } else { "unbounded" };
        rows.push(vec![a.counter_name(c).to_string(), kind.to_string()]);
        counters.push(json!({"counter": a.counter_name(c), "bounded": bounded}));
    }
    let entry = a.state_name(analysis.entry);
    let text = format!(
        "{verdict}\naccept: {}\nloop entry {entry}, period {}\n{}",
        a.accept().display(a.counters()),
        analysis.period,
        table(&rows)
    );
    Ok(outcome(
        text,
        json!({
            "verdict": verdict,
            "accepted": analysis.accepted,
            "accept": a.accept().display(a.counters()).to_string(),
            "entry": entry,
            "period": analysis.period,
            "counters": counters,
        }),
    ))
}

fn class_rows(graph: &ClassGraph, names: &Alphabet) -> Result<(Vec<Vec<String>>, Vec<serde_json::Value>)> {
    let mut rows = vec![vec!["class".into(), "kind".into(), "representative".into()]];
    let mut list = Vec::new();
    for &c in graph.classes() {
        let infinite = graph.is_infinite(c)?;
        let rep = show_word(names, &graph.shortest_representative(c)?);
        let kind = if infinite { "infinite" } else { "finite" };
        rows.push(vec![c.to_string(), kind.into(), rep.clone()]);
        list.push(json!({"id": c.0, "infinite": infinite, "representative": rep}));
    }
    Ok((rows, list))
}

pub fn classes(ctx: &mut Ctx, path: &Path, m: u32, projected: bool) -> Result<Outcome> {
    let a = ctx.automaton(path)?;
    let (n, k) = (a.num_states(), a.num_counters());
    let (graph, names, bound, formula) = if projected {
        let (tracker, graph) = enumerate_projected(&a, m, ctx.budget)?;
        let joint = tracker.joint().num_classes();
        (graph, input_alphabet(&a)?, projected_index_bound(joint), format!("2^{joint}"))
    } else {
        let mut tracker = Tracker::new(&a, m);
        let graph = enumerate_classes(&mut tracker, ctx.budget);
        if !graph.is_complete() {
            return Err(Error::BudgetExhausted { budget: ctx.budget })
                .with_context(|| format!("{} classes found before the budget ran out", graph.len()));
        }
        let formula = format!("(n·(m+2)^(2(k²+k)))^n with n={n}, k={k}, m={m}");
        (graph, a.alphabet().clone(), word_index_bound(n, k, m), formula)
    };
    let threshold = graph.threshold()?;
    let (rows, list) = class_rows(&graph, &names)?;
    let kind = if projected { "projected input" } else { "word" };
    let text = format!(
        "{} {kind} classes at cap {m} (complete)\nbound: {formula} = {bound}\nthreshold: {threshold}\n{}",
        graph.len(),
        table(&rows)
    );
    Ok(outcome(
        text,
        json!({
            "cap": m,
            "projected": projected,
            "count": graph.len(),
            "complete": graph.is_complete(),
            "bound": bound.to_string(),
            "bound_formula": formula,
            "threshold": threshold,
            "classes": list,
        }),
    ))
}

/// Largest bound printed in decimal.
const DECIMAL_BITS: u64 = 4096;

pub fn threshold(ctx: &mut Ctx, path: &Path, m: u32, theorem: bool, bit_limit: u64) -> Result<Outcome> {
    let a = ctx.automaton(path)?;
    if theorem {
        let b = theorem_initial_lookahead(a.num_states(), a.num_counters(), bit_limit)?;
        let bits = b.value.bits();
        let decimal = (bits <= DECIMAL_BITS).then(|| b.value.to_string());
        let mut text = format!("initial lookahead 2d = {} (n={}, k={}, {bits} bits)\n", b.tower(), b.n, b.k);
        if let Some(d) = &decimal {
            writeln!(text, "= {d}")?;
        }
        return Ok(outcome(
            text,
            json!({"n": b.n, "k": b.k, "inner": b.inner, "tower": b.tower(), "bits": bits, "value": decimal}),
        ));
    }
    let (_, graph) = enumerate_projected(&a, m, ctx.budget)?;
    let d = graph.threshold()?;
    Ok(outcome(
        format!("d({m}) = {d}\n"),
        json!({"cap": m, "threshold": d, "projected_classes": graph.len()}),
    ))
}

pub struct SimulateArgs {
    pub f: String,
    pub rounds: usize,
    pub seed: u64,
    pub input: String,
    pub output: String,
    pub curve: Option<PathBuf>,
}

pub fn simulate(args: &SimulateArgs) -> Result<Outcome> {
    let f: DelayFunction = args.f.parse()?;
    let sim = simulate_block(&f, &args.input, &args.output, args.rounds, args.seed)?;
    let arena = block_arena();
    let alpha = PlayRecord::format_letters(&arena.inputs, &sim.record.alpha());
    let beta = PlayRecord::format_letters(&arena.outputs, &sim.record.beta());
    let spans = sim.commitments.as_ref().map(|_| spans_longest_visible(&sim, &f));
    let curve = sim.record.lookahead_curve();
    if let Some(path) = &args.curve {
        let mut csv = String::from("round,lookahead\n");
        for (i, l) in curve.iter().enumerate() {
            writeln!(csv, "{i},{l}")?;
        }
        fs::write(path, csv).with_context(|| format!("cannot write {}", path.display()))?;
    }
    let stats = &sim.stats;
    let mut text = format!(
        "block game, f = {f} ({:?}), {} rounds, I = {}, O = {}, seed {}\n",
        f.classify(),
        args.rounds,
        args.input,
        args.output,
        args.seed
    );
    writeln!(text, "input blocks:  {} (longest {})", stats.input_blocks.len(), stats.max_input())?;
    writeln!(text, "output blocks: {} completed (longest {})", stats.output_blocks.len(), stats.max_output())?;
    if let Some(check) = &spans {
        match check {
            Ok(()) => writeln!(text, "every completed output block spans the longest visible input block")?,
            Err(e) => writeln!(text, "span check failed: {e}")?,
        }
    }
    writeln!(text, "alpha: {alpha}")?;
    writeln!(text, "beta:  {beta}")?;
    let results = json!({
        "game": "block",
        "f": f.to_string(),
        "delay_class": format!("{:?}", f.classify()),
        "rounds": args.rounds,
        "input_strategy": args.input,
        "output_strategy": args.output,
        "lookahead_curve": curve,
        "block_statistics": {
            "input_blocks": stats.input_blocks,
            "input_open": stats.input_open,
            "output_blocks": stats.output_lengths(),
            "output_open": stats.output_open,
            "max_input": stats.max_input(),
            "max_output": stats.max_output(),
        },
        "spans_longest_visible": spans.map(|s| s.is_ok()),
        "alpha": alpha,
        "beta": beta,
    });
    Ok(Outcome {
        text,
        results,
        seed: Some(args.seed),
    })
}

fn parse_move_target(rest: &str) -> Option<usize> {
    let id = rest.trim().strip_prefix('#')?;
    id.parse().ok()
}

pub fn class_game(ctx: &mut Ctx, path: &Path, moves: &Path) -> Result<Outcome> {
    let a = ctx.automaton(path)?;
    let script = if moves == Path::new("-") {
        std::io::read_to_string(std::io::stdin()).context("cannot read moves from stdin")?
    } else {
        ctx.read(moves)?
    };
    let inputs = input_alphabet(&a)?;
    let mut game = ClassGame::new(&a, ctx.budget)?;
    for (n, line) in script.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with("//") {
            continue;
        }
        let at = || format!("move on line {}: `{line}`", n + 1);
        let (player, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        match player {
            "I" => {
                let (r, word) = rest.trim().split_once(char::is_whitespace).unwrap_or((rest.trim(), ""));
                let r: u32 = r.parse().with_context(|| format!("bad cap in {}", at()))?;
                let result = match parse_move_target(word) {
                    Some(id) => game.submit_i_class(r, ClassId(id)),
                    None => inputs
                        .parse_word(word.trim_matches('ε'))
                        .and_then(|x| game.submit_i_word(r, &x)),
                };
                result.with_context(at)?;
            }
            "O" => {
                let result = match parse_move_target(rest) {
                    Some(k) => {
                        let legal = game.legal_o_moves().with_context(at)?;
                        let Some(sig) = legal.get(k) else {
                            return Err(Error::IllegalMove(format!("only {} legal answers", legal.len())))
                                .with_context(at);
                        };
                        game.submit_o_move(sig)
                    }
                    None => a.alphabet().parse_word(rest).and_then(|w| game.submit_o_word(&w)),
                };
                result.with_context(at)?;
            }
            _ => bail!(Error::Protocol(format!("{}: expected `I` or `O`", at()))),
        }
    }
    let transcript = game.transcript()?;
    let mut rows = vec![vec!["round".into(), "r".into(), "I class".into(), "I word".into(), "O word".into()]];
    for (i, r) in transcript.rounds.iter().enumerate() {
        rows.push(vec![
            i.to_string(),
            r.r.to_string(),
            r.input_class.to_string(),
            if r.input_representative.is_empty() { "ε".into() } else { r.input_representative.clone() },
            match &r.output_representative {
                Some(w) if w.is_empty() => "ε".into(),
                Some(w) => w.clone(),
                None => "-".into(),
            },
        ]);
    }
    let text = format!(
        "{}rates weakly increasing: {}; unbounded: {}; next: {:?}\n",
        table(&rows),
        transcript.weakly_increasing,
        transcript.unbounded,
        transcript.next
    );
    Ok(outcome(text, serde_json::to_value(&transcript)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ReduceKind {
    Parity,
    Safety,
    Diagonal,
}

pub fn reduce(ctx: &mut Ctx, kind: ReduceKind, input: &Path, output: Option<&Path>) -> Result<Outcome> {
    let text = ctx.read(input)?;
    let where_ = || format!("in {}", input.display());
    let a = match kind {
        ReduceKind::Parity => parity_to_max(&ParityAutomaton::parse(&text).with_context(where_)?)?,
        ReduceKind::Safety => safety_to_max(&SafetyAutomaton::parse(&text).with_context(where_)?)?,
        ReduceKind::Diagonal => diagonal_lift(&parse_automaton(&text).with_context(where_)?)?,
    };
    let serialized = serialize_automaton(&a);
    if let Some(path) = output {
        fs::write(path, &serialized).with_context(|| format!("cannot write {}", path.display()))?;
    }
    let results = json!({
        "kind": format!("{kind:?}").to_lowercase(),
        "states": a.num_states(),
        "counters": a.counters(),
        "accept": a.accept().display(a.counters()).to_string(),
        "automaton": serialized,
    });
    let shown = match output {
        Some(path) => format!(
            "wrote {} ({} states, {} counters)\n",
            path.display(),
            a.num_states(),
            a.num_counters()
        ),
        None => serialized,
    };
    Ok(outcome(shown, results))
}

pub fn inspect(ctx: &mut Ctx, path: &Path, word: Option<&str>, m: u32) -> Result<Outcome> {
    let a = ctx.automaton(path)?;
    let letters: Vec<String> = a.alphabet().letters().iter().map(ToString::to_string).collect();
    let mut text = format!(
        "states: {}\ncounters: {}\nalphabet: {}\ninitial: {}\naccept: {}\n",
        a.states().join(" "),
        a.counters().join(" "),
        letters.join(" "),
        a.state_name(a.initial()),
        a.accept().display(a.counters())
    );
    let mut results = json!({
        "states": a.states(),
        "counters": a.counters(),
        "alphabet": letters,
        "initial": a.state_name(a.initial()),
        "accept": a.accept().display(a.counters()).to_string(),
    });
    if let Some(word) = word {
        let w = a.alphabet().parse_word(word)?;
        let sig = word_signature(&a, &w, m)?;
        let mut per_state = serde_json::Map::new();
        writeln!(text, "\nword {} at cap {m}", show_word(a.alphabet(), &w))?;
        for q in a.state_ids() {
            let tables = sig.from_state(q).tables(a.counters());
            writeln!(text, "\nfrom {} to {}:\n{tables}", a.state_name(q), a.state_name(sig.target(q)))?;
            per_state.insert(
                a.state_name(q).to_string(),
                json!({"target": a.state_name(sig.target(q)), "tables": tables}),
            );
        }
        results["word"] = json!(show_word(a.alphabet(), &w));
        results["cap"] = json!(m);
        results["signature"] = serde_json::Value::Object(per_state);
    }
    Ok(outcome(text, results))
}
