//! Boolean acceptance formulas over `bounded(c)` atoms.
//!
//! Text grammar (`&` binds tighter than `|`):
//!
//! ```text
//! or    := and ('|' and)*
//! and   := unary ('&' unary)*
//! unary := '!' unary | '(' or ')' | 'bounded' COUNTER
//! ```

use std::collections::BTreeMap;
use std::fmt;

use crate::automaton::CounterId;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Bounded(CounterId),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
}

impl Formula {
    pub fn bounded(c: CounterId) -> Self {
        Formula::Bounded(c)
    }

    pub fn unbounded(c: CounterId) -> Self {
        Formula::Not(Box::new(Formula::Bounded(c)))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    /// Conjunction; a single operand is returned unchanged.
    pub fn and(mut items: Vec<Formula>) -> Self {
        assert!(!items.is_empty(), "empty conjunction");
        if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Formula::And(items)
        }
    }

    /// Disjunction; a single operand is returned unchanged.
    pub fn or(mut items: Vec<Formula>) -> Self {
        assert!(!items.is_empty(), "empty disjunction");
        if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Formula::Or(items)
        }
    }

    /// Counters referenced by atoms, sorted and deduplicated.
    pub fn counters(&self) -> Vec<CounterId> {
        fn walk(f: &Formula, out: &mut Vec<CounterId>) {
            match f {
                Formula::Bounded(c) => out.push(*c),
                Formula::Not(g) => walk(g, out),
                Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| walk(g, out)),
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out.sort();
        out.dedup();
        out
    }

    /// Evaluates with `bounded(c)` looked up in `boundedness`.
    pub fn eval(&self, boundedness: &BTreeMap<CounterId, bool>) -> Result<bool> {
        self.eval_with(&|c| boundedness.get(&c).copied())
    }

    pub fn eval_with(&self, boundedness: &dyn Fn(CounterId) -> Option<bool>) -> Result<bool> {
        Ok(match self {
            Formula::Bounded(c) => boundedness(*c)
                .ok_or_else(|| Error::UnknownCounter(format!("#{}", c.0)))?,
            Formula::Not(g) => !g.eval_with(boundedness)?,
            Formula::And(gs) => {
                let mut all = true;
                for g in gs {
                    all &= g.eval_with(boundedness)?;
                }
                all
            }
            Formula::Or(gs) => {
                let mut any = false;
                for g in gs {
                    any |= g.eval_with(boundedness)?;
                }
                any
            }
        })
    }

    pub fn parse(text: &str, counters: &[String]) -> Result<Formula> {
        let tokens = tokenize(text);
        let mut parser = Parser {
            tokens,
            pos: 0,
            counters,
        };
        let f = parser.or()?;
        if parser.pos != parser.tokens.len() {
            return Err(formula_error(format!(
                "unexpected `{}`",
                parser.tokens[parser.pos]
            )));
        }
        Ok(f)
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        FormulaDisplay {
            formula: self,
            names,
        }
    }
}

/// Evaluates `phi` under the given boundedness assignment.
pub fn eval_acceptance(phi: &Formula, boundedness: &BTreeMap<CounterId, bool>) -> Result<bool> {
    phi.eval(boundedness)
}

fn formula_error(message: String) -> Error {
    Error::Parse {
        line: 0,
        message: format!("malformed formula: {message}"),
    }
}

fn tokenize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in text.chars() {
        if ch.is_whitespace() || "()!&|".contains(ch) {
            if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
            if !ch.is_whitespace() {
                out.push(ch.to_string());
            }
        } else {
            cur.push(ch);
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

struct Parser<'a> {
    tokens: Vec<String>,
    pos: usize,
    counters: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&str> {
        self.tokens.get(self.pos).map(String::as_str)
    }

    fn bump(&mut self) -> Option<String> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn or(&mut self) -> Result<Formula> {
        let mut items = vec![self.and()?];
        while self.peek() == Some("|") {
            self.pos += 1;
            items.push(self.and()?);
        }
        Ok(Formula::or(items))
    }

    fn and(&mut self) -> Result<Formula> {
        let mut items = vec![self.unary()?];
        while self.peek() == Some("&") {
            self.pos += 1;
            items.push(self.unary()?);
        }
        Ok(Formula::and(items))
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.bump().as_deref() {
            Some("!") => Ok(Formula::not(self.unary()?)),
            Some("(") => {
                let f = self.or()?;
                match self.bump().as_deref() {
                    Some(")") => Ok(f),
                    other => Err(formula_error(format!(
                        "expected `)`, found {}",
                        other.map_or("end of input".to_string(), |t| format!("`{t}`"))
                    ))),
                }
            }
            Some("bounded") => match self.bump() {
                Some(name) if !"()!&|".contains(name.as_str()) => self
                    .counters
                    .iter()
                    .position(|c| *c == name)
                    .map(|i| Formula::Bounded(CounterId(i)))
                    .ok_or(Error::UnknownCounter(name)),
                _ => Err(formula_error("expected counter after `bounded`".into())),
            },
            Some(t) => Err(formula_error(format!("unexpected `{t}`"))),
            None => Err(formula_error("unexpected end of input".into())),
        }
    }
}

struct FormulaDisplay<'a> {
    formula: &'a Formula,
    names: &'a [String],
}

impl FormulaDisplay<'_> {
    fn write(&self, f: &mut fmt::Formatter<'_>, g: &Formula) -> fmt::Result {
        match g {
            Formula::Bounded(c) => write!(f, "bounded {}", self.names[c.0]),
            Formula::Not(inner) => {
                f.write_str("!")?;
                match **inner {
                    Formula::Bounded(_) | Formula::Not(_) => self.write(f, inner),
                    _ => self.paren(f, inner),
                }
            }
            Formula::And(items) => self.join(f, items, " & ", |i| {
                matches!(i, Formula::And(_) | Formula::Or(_))
            }),
            Formula::Or(items) => self.join(f, items, " | ", |i| matches!(i, Formula::Or(_))),
        }
    }

    fn paren(&self, f: &mut fmt::Formatter<'_>, g: &Formula) -> fmt::Result {
        f.write_str("(")?;
        self.write(f, g)?;
        f.write_str(")")
    }

    fn join(
        &self,
        f: &mut fmt::Formatter<'_>,
        items: &[Formula],
        sep: &str,
        needs_paren: impl Fn(&Formula) -> bool,
    ) -> fmt::Result {
        for (i, item) in items.iter().enumerate() {
            if i > 0 {
                f.write_str(sep)?;
            }
            if needs_paren(item) {
                self.paren(f, item)?;
            } else {
                self.write(f, item)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, self.formula)
    }
}
