//! Line-oriented text format for automata.
//!
//! ```text
//! # comment lines start with '#'
//! alphabet: a b                      (or alphabet_input: ... / alphabet_output: ...)
//! counters: c
//! states: q
//! initial: q
//! accept: !bounded c
//! trans: q a q : inc c
//! trans: q b q : reset c
//! ```
//!
//! Product letters are written `a|x`. The same grammar describes the
//! deterministic source automata of the reductions: they omit `counters` and
//! `accept`, and add `safe: q0 q1` (safety) or `colors: q0=0 q1=1` (parity).
//! Only whole lines are comments, since `#` is a legal letter and counter name.

use std::fmt::Write as _;

use crate::automaton::{Alphabet, CounterId, CounterOp, LetterId, MaxAutomaton, OpSequence, StateId};
use crate::error::{Error, Result};
use crate::formula::Formula;

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parses an operation list such as `inc c ; max c d e ; reset d`.
pub fn parse_ops(text: &str, counters: &[String]) -> Result<OpSequence> {
    parse_ops_at(text, counters, 0)
}

fn parse_ops_at(text: &str, counters: &[String], line: usize) -> Result<OpSequence> {
    if text.trim().is_empty() {
        return Ok(OpSequence::empty());
    }
    let counter = |name: &str| -> Result<CounterId> {
        counters
            .iter()
            .position(|c| c == name)
            .map(CounterId)
            .ok_or_else(|| err(line, format!("unknown counter `{name}`")))
    };
    let mut ops = Vec::new();
    for part in text.split(';') {
        let words: Vec<&str> = part.split_whitespace().collect();
        let op = match words.as_slice() {
            ["inc", c] => CounterOp::Inc(counter(c)?),
            ["reset", c] => CounterOp::Reset(counter(c)?),
            ["max", c, c0, c1] => CounterOp::Max {
                target: counter(c)?,
                left: counter(c0)?,
                right: counter(c1)?,
            },
            _ => return Err(err(line, format!("malformed counter operation `{}`", part.trim()))),
        };
        ops.push(op);
    }
    Ok(OpSequence(ops))
}

/// Transition line before name resolution.
#[derive(Debug, Clone)]
struct RawTransition {
    line: usize,
    from: String,
    letter: String,
    to: String,
    ops: Option<String>,
}

#[derive(Debug, Default)]
struct RawFile {
    alphabet: Option<(usize, Vec<String>)>,
    input: Option<(usize, Vec<String>)>,
    output: Option<(usize, Vec<String>)>,
    counters: Option<(usize, Vec<String>)>,
    states: Option<(usize, Vec<String>)>,
    initial: Option<(usize, String)>,
    accept: Option<(usize, String)>,
    safe: Option<(usize, Vec<String>)>,
    colors: Option<(usize, Vec<String>)>,
    transitions: Vec<RawTransition>,
}

fn set_once<T>(slot: &mut Option<(usize, T)>, line: usize, key: &str, value: T) -> Result<()> {
    if slot.is_some() {
        return Err(err(line, format!("duplicate `{key}` line")));
    }
    *slot = Some((line, value));
    Ok(())
}

fn read_raw(text: &str) -> Result<RawFile> {
    let mut raw = RawFile::default();
    for (i, content) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = content.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (key, rest) = trimmed
            .split_once(':')
            .ok_or_else(|| err(line, "expected `key: value`"))?;
        let key = key.trim();
        let list = || rest.split_whitespace().map(str::to_string).collect::<Vec<_>>();
        match key {
            "alphabet" => set_once(&mut raw.alphabet, line, key, list())?,
            "alphabet_input" => set_once(&mut raw.input, line, key, list())?,
            "alphabet_output" => set_once(&mut raw.output, line, key, list())?,
            "counters" => set_once(&mut raw.counters, line, key, list())?,
            "states" => set_once(&mut raw.states, line, key, list())?,
            "safe" => set_once(&mut raw.safe, line, key, list())?,
            "colors" => set_once(&mut raw.colors, line, key, list())?,
            "initial" => {
                let v = list();
                if v.len() != 1 {
                    return Err(err(line, "`initial` takes exactly one state"));
                }
                set_once(&mut raw.initial, line, key, v[0].clone())?
            }
            "accept" => set_once(&mut raw.accept, line, key, rest.trim().to_string())?,
            "trans" => {
                let (head, ops) = match rest.split_once(':') {
                    Some((h, o)) => (h, Some(o.trim().to_string())),
                    None => (rest, None),
                };
                let parts: Vec<&str> = head.split_whitespace().collect();
                let [from, letter, to] = parts.as_slice() else {
                    return Err(err(line, "expected `trans: FROM LETTER TO : OPS`"));
                };
                raw.transitions.push(RawTransition {
                    line,
                    from: from.to_string(),
                    letter: letter.to_string(),
                    to: to.to_string(),
                    ops,
                });
            }
            other => return Err(err(line, format!("unknown key `{other}`"))),
        }
    }
    Ok(raw)
}

/// States, alphabet, initial state and transition table shared by every
/// automaton kind in the format.
pub(crate) struct Skeleton {
    pub states: Vec<String>,
    pub alphabet: Alphabet,
    pub initial: StateId,
    pub delta: Vec<Vec<StateId>>,
    /// Operation text of every transition with its line number.
    pub ops: Vec<Vec<(usize, Option<String>)>>,
}

fn skeleton(raw: &RawFile) -> Result<Skeleton> {
    let alphabet = match (&raw.alphabet, &raw.input, &raw.output) {
        (Some((line, names)), None, None) => {
            Alphabet::plain(names.clone()).map_err(|e| err(*line, e.to_string()))?
        }
        (None, Some((line, i)), Some((_, o))) => {
            Alphabet::product(i.clone(), o.clone()).map_err(|e| err(*line, e.to_string()))?
        }
        (None, Some((line, _)), None) | (None, None, Some((line, _))) => {
            return Err(err(*line, "product alphabets need both `alphabet_input` and `alphabet_output`"))
        }
        (Some((line, _)), _, _) => {
            return Err(err(*line, "`alphabet` cannot be combined with a product alphabet"))
        }
        (None, None, None) => return Err(err(0, "missing `alphabet` line")),
    };
    let (states_line, states) = raw.states.clone().ok_or_else(|| err(0, "missing `states` line"))?;
    if states.is_empty() {
        return Err(err(states_line, "at least one state is required"));
    }
    let state = |name: &str, line: usize| -> Result<StateId> {
        states
            .iter()
            .position(|s| s == name)
            .map(StateId)
            .ok_or_else(|| err(line, format!("unknown state `{name}`")))
    };
    let (init_line, init) = raw.initial.clone().ok_or_else(|| err(0, "missing `initial` line"))?;
    let initial = state(&init, init_line)?;
    let n = states.len();
    let mut delta: Vec<Vec<Option<StateId>>> = vec![vec![None; alphabet.len()]; n];
    let mut ops = vec![vec![(0, None); alphabet.len()]; n];
    for t in &raw.transitions {
        let p = state(&t.from, t.line)?;
        let q = state(&t.to, t.line)?;
        let a = alphabet
            .lookup(&t.letter)
            .map_err(|_| err(t.line, format!("unknown letter `{}`", t.letter)))?;
        if delta[p.0][a.0].is_some() {
            return Err(err(
                t.line,
                format!("duplicate transition for ({}, {})", t.from, t.letter),
            ));
        }
        delta[p.0][a.0] = Some(q);
        ops[p.0][a.0] = (t.line, t.ops.clone());
    }
    let mut total = Vec::with_capacity(n);
    for (p, row) in delta.into_iter().enumerate() {
        let mut out = Vec::with_capacity(row.len());
        for (a, q) in row.into_iter().enumerate() {
            match q {
                Some(q) => out.push(q),
                None => {
                    return Err(Error::Structure(format!(
                        "delta not total: no transition for ({}, {})",
                        states[p],
                        alphabet.letter(LetterId(a))
                    )))
                }
            }
        }
        total.push(out);
    }
    Ok(Skeleton {
        states,
        alphabet,
        initial,
        delta: total,
        ops,
    })
}

pub fn parse_automaton(text: &str) -> Result<MaxAutomaton> {
    let raw = read_raw(text)?;
    for (key, slot) in [("safe", &raw.safe), ("colors", &raw.colors)] {
        if let Some((line, _)) = slot {
            return Err(err(*line, format!("`{key}` is not allowed in a max-automaton")));
        }
    }
    let sk = skeleton(&raw)?;
    let counters = raw.counters.clone().map(|(_, c)| c).unwrap_or_default();
    let (accept_line, accept_text) =
        raw.accept.clone().ok_or_else(|| err(0, "missing `accept` line"))?;
    let accept = Formula::parse(&accept_text, &counters).map_err(|e| match e {
        Error::Parse { message, .. } => err(accept_line, message),
        other => err(accept_line, other.to_string()),
    })?;
    let mut labels = Vec::with_capacity(sk.states.len());
    for row in &sk.ops {
        let mut out = Vec::with_capacity(row.len());
        for (line, text) in row {
            let text = text
                .as_deref()
                .ok_or_else(|| err(*line, "max-automaton transitions need `: OPS` (possibly empty)"))?;
            out.push(parse_ops_at(text, &counters, *line)?);
        }
        labels.push(out);
    }
    MaxAutomaton::new(
        sk.states,
        counters,
        sk.alphabet,
        sk.initial,
        sk.delta,
        labels,
        accept,
    )
}

/// Parses a deterministic source automaton (no counters) together with its
/// `safe:` or `colors:` annotation, returned as raw strings.
pub(crate) fn parse_source(text: &str, annotation: &str) -> Result<(Skeleton, usize, Vec<String>)> {
    let raw = read_raw(text)?;
    for (key, slot) in [("counters", &raw.counters)] {
        if let Some((line, _)) = slot {
            return Err(err(*line, format!("`{key}` is not allowed in a {annotation} automaton")));
        }
    }
    if let Some((line, _)) = &raw.accept {
        return Err(err(*line, "`accept` is not allowed in a source automaton"));
    }
    for t in &raw.transitions {
        if t.ops.as_deref().is_some_and(|o| !o.is_empty()) {
            return Err(err(t.line, "source automata carry no counter operations"));
        }
    }
    let (line, values) = match annotation {
        "safe" => raw.safe.clone(),
        _ => raw.colors.clone(),
    }
    .ok_or_else(|| err(0, format!("missing `{annotation}` line")))?;
    let sk = skeleton(&raw)?;
    Ok((sk, line, values))
}

pub fn serialize_automaton(a: &MaxAutomaton) -> String {
    let mut out = String::new();
    write_alphabet(&mut out, a.alphabet());
    let _ = writeln!(out, "counters: {}", a.counters().join(" "));
    let _ = writeln!(out, "states: {}", a.states().join(" "));
    let _ = writeln!(out, "initial: {}", a.state_name(a.initial()));
    let _ = writeln!(out, "accept: {}", a.accept().display(a.counters()));
    for q in a.state_ids() {
        for l in a.alphabet().ids() {
            let ops = a.label(q, l).display(a.counters()).to_string();
            let _ = writeln!(
                out,
                "trans: {} {} {} :{}{}",
                a.state_name(q),
                a.alphabet().letter(l),
                a.state_name(a.next(q, l)),
                if ops.is_empty() { "" } else { " " },
                ops
            );
        }
    }
    out
}

pub(crate) fn write_alphabet(out: &mut String, alphabet: &Alphabet) {
    match alphabet.components() {
        Some((i, o)) => {
            let _ = writeln!(out, "alphabet_input: {}", i.join(" "));
            let _ = writeln!(out, "alphabet_output: {}", o.join(" "));
        }
        None => {
            let names: Vec<String> = alphabet.letters().iter().map(|l| l.to_string()).collect();
            let _ = writeln!(out, "alphabet: {}", names.join(" "));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const R1: &str = "\
# one state, one counter
alphabet: a b
counters: c
states: q
initial: q
accept: !bounded c
trans: q a q : inc c
trans: q b q : reset c
";

    #[test]
    fn parses_r1() {
        let a = parse_automaton(R1).unwrap();
        assert_eq!(a.num_states(), 1);
        assert_eq!(a.counters(), ["c".to_string()]);
        assert_eq!(a.label(StateId(0), LetterId(0)).ops(), &[CounterOp::Inc(CounterId(0))]);
    }

    #[test]
    fn round_trip() {
        let a = parse_automaton(R1).unwrap();
        let text = serialize_automaton(&a);
        assert_eq!(parse_automaton(&text).unwrap(), a);
    }

    #[test]
    fn missing_transition() {
        let text = R1.replace("trans: q b q : reset c\n", "");
        let e = parse_automaton(&text).unwrap_err();
        assert!(e.to_string().contains("delta not total"), "{e}");
    }

    #[test]
    fn diagnostics_carry_line_numbers() {
        let cases = [
            (R1.replace("trans: q a q : inc c", "trans: q a r : inc c"), 7, "unknown state"),
            (R1.replace("trans: q a q : inc c", "trans: q z q : inc c"), 7, "unknown letter"),
            (R1.replace("trans: q a q : inc c", "trans: q a q : inc d"), 7, "unknown counter"),
            (R1.replace("trans: q a q : inc c", "trans: q a q : bump c"), 7, "malformed"),
            (R1.replace("accept: !bounded c", "accept: !bounded"), 6, "malformed formula"),
            (R1.replace("accept: !bounded c", "accept: bounded x"), 6, "unknown counter"),
        ];
        for (text, line, fragment) in cases {
            match parse_automaton(&text) {
                Err(Error::Parse { line: l, message }) => {
                    assert_eq!(l, line, "{message}");
                    assert!(message.contains(fragment), "{message}");
                }
                other => panic!("expected parse error, got {other:?}"),
            }
        }
    }

    #[test]
    fn empty_op_list() {
        let text = R1.replace("trans: q b q : reset c", "trans: q b q :");
        let a = parse_automaton(&text).unwrap();
        assert!(a.label(StateId(0), LetterId(1)).is_empty());
    }

    #[test]
    fn product_letters() {
        let text = "\
alphabet_input: a b
alphabet_output: x
counters:
states: q
initial: q
accept: bounded c
trans: q a|x q :
trans: q b|x q :
";
        // the formula references an undeclared counter
        assert!(parse_automaton(text).is_err());
        let text = text.replace("counters:", "counters: c");
        let a = parse_automaton(&text).unwrap();
        assert!(a.alphabet().is_product());
        assert_eq!(parse_automaton(&serialize_automaton(&a)).unwrap(), a);
    }
}
