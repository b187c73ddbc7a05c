//! Reference implementation of transfers straight from their inductive
//! definition. Exponential in the number of increments; meant for
//! cross-checking [`label_signature`](super::label_signature) and
//! [`compose`](super::compose) on short sequences.

use crate::automaton::{CounterId, CounterOp};

use super::Capped;

/// Whether `ops` transfers `from` to `to` (no increments required).
///
/// Propagates the set of counters `from` has been transferred to, one
/// operation at a time.
pub fn transfers(ops: &[CounterOp], from: CounterId, to: CounterId) -> bool {
    let mut reached = vec![from];
    for op in ops {
        let mut next = Vec::new();
        for &x in &reached {
            match *op {
                CounterOp::Inc(_) => next.push(x),
                CounterOp::Reset(c) => {
                    if x != c {
                        next.push(x)
                    }
                }
                CounterOp::Max {
                    target,
                    left,
                    right,
                } => {
                    if x != target {
                        next.push(x);
                    }
                    if x == left || x == right {
                        next.push(target);
                    }
                }
            }
        }
        next.sort();
        next.dedup();
        reached = next;
        if reached.is_empty() {
            return false;
        }
    }
    reached.contains(&to)
}

/// Whether there is a decomposition `ops = π0 (inc e1) π1 ... (inc em) πm`
/// witnessing a transfer of `from` to `to` with exactly `increments` increments.
pub fn transfers_with(ops: &[CounterOp], from: CounterId, to: CounterId, increments: u32) -> bool {
    if increments == 0 {
        return transfers(ops, from, to);
    }
    ops.iter().enumerate().any(|(i, op)| match *op {
        CounterOp::Inc(e) => {
            transfers(&ops[..i], from, e) && transfers_with(&ops[i + 1..], e, to, increments - 1)
        }
        _ => false,
    })
}

/// Largest `m' <= cap` such that `ops` transfers `from` to `to` with `m'`
/// increments, or ⊥ when there is no transfer at all.
pub fn transfers_naive(ops: &[CounterOp], from: CounterId, to: CounterId, cap: u32) -> Capped {
    (0..=cap)
        .rev()
        .find(|&m| transfers_with(ops, from, to, m))
        .map_or(Capped::BOTTOM, Capped::new)
}
