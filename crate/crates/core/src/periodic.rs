//! Membership of ultimately periodic words `u·v^ω`.
//!
//! A counter is unbounded on a run iff the run contains arbitrarily long
//! traces for it. On a lasso, the run eventually repeats a loop `λ` from a
//! fixed entry state, and long traces must cross many loop boundaries; some
//! counter `e` then transfers to itself across a power of the loop with at
//! least one increment. Cap 1 is enough to see that.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::automaton::{CounterId, LetterId, MaxAutomaton, OpSequence, StateId, Word};
use crate::error::{Error, Result};
use crate::transfer::{word_label_signature, Capped, TransferMatrix, TransferSignature};

/// The infinite word `u·v^ω`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Lasso {
    pub u: Word,
    pub v: Word,
}

impl Lasso {
    pub fn new(u: Word, v: Word) -> Result<Self> {
        if v.is_empty() {
            return Err(Error::Structure("lasso loop must be nonempty".into()));
        }
        Ok(Lasso { u, v })
    }

    /// Finite prefix `u·v^times`.
    pub fn unroll(&self, times: usize) -> Word {
        let mut w = self.u.clone();
        for _ in 0..times {
            w.extend_from_slice(&self.v);
        }
        w
    }

    pub fn letters(&self) -> impl Iterator<Item = LetterId> + '_ {
        self.u.iter().chain(&self.v).copied()
    }
}

/// The periodic part of a run on a lasso.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalLoop {
    /// State at the start of every repetition of `v^period`.
    pub entry: StateId,
    pub period: usize,
    /// Number of `v` repetitions read before the entry state is reached.
    pub offset: usize,
    /// Labels read along `v^period` from `entry`.
    pub labels: Vec<OpSequence>,
}

pub fn loop_normalize(a: &MaxAutomaton, lasso: &Lasso) -> Result<NormalLoop> {
    if lasso.v.is_empty() {
        return Err(Error::Structure("lasso loop must be nonempty".into()));
    }
    a.check_word(&lasso.u)?;
    a.check_word(&lasso.v)?;
    let mut seen = vec![a.run_state(a.initial(), &lasso.u)];
    loop {
        let next = a.run_state(*seen.last().expect("nonempty"), &lasso.v);
        if let Some(offset) = seen.iter().position(|&q| q == next) {
            let period = seen.len() - offset;
            let mut word = Vec::with_capacity(period * lasso.v.len());
            for _ in 0..period {
                word.extend_from_slice(&lasso.v);
            }
            return Ok(NormalLoop {
                entry: next,
                period,
                offset,
                labels: a.run_labels(next, &word),
            });
        }
        seen.push(next);
    }
}

/// Counters that grow without bound when the loop with signature `sig` is
/// repeated forever.
pub fn unbounded_counters(sig: &TransferSignature) -> BTreeSet<CounterId> {
    let k = sig.num_counters();
    let t = sig.transfer_matrix().clamp_to(1);
    let mut plus = t.clone();
    loop {
        let next = plus.join(&plus.product(&t, 1));
        if next == plus {
            break;
        }
        plus = next;
    }
    let star = TransferMatrix::identity(k).join(&plus);
    let reach = star.product(&sig.prefix_matrix().clamp_to(1), 1);
    let mut out = BTreeSet::new();
    for e in (0..k).map(CounterId) {
        if plus.get(e, e) < Capped::new(1) {
            continue;
        }
        for c in (0..k).map(CounterId) {
            if !reach.get(e, c).is_bottom() {
                out.insert(c);
            }
        }
    }
    out
}

/// Per-lasso membership report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LassoAnalysis {
    pub entry: StateId,
    pub period: usize,
    pub bounded: BTreeMap<CounterId, bool>,
    pub accepted: bool,
}

pub fn analyze(a: &MaxAutomaton, lasso: &Lasso) -> Result<LassoAnalysis> {
    let normal = loop_normalize(a, lasso)?;
    let sig = word_label_signature(&normal.labels, a.num_counters(), 1);
    let unbounded = unbounded_counters(&sig);
    let bounded: BTreeMap<CounterId, bool> = a
        .counter_ids()
        .map(|c| (c, !unbounded.contains(&c)))
        .collect();
    let accepted = a.accept().eval(&bounded)?;
    Ok(LassoAnalysis {
        entry: normal.entry,
        period: normal.period,
        bounded,
        accepted,
    })
}

pub fn member(a: &MaxAutomaton, lasso: &Lasso) -> Result<bool> {
    Ok(analyze(a, lasso)?.accepted)
}
