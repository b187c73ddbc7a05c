//! Transfers with increments and the cap-`m` signature of a word of
//! transition labels.
//!
//! A [`TransferSignature`] records, for a word `λ` of labels and a cap `m`:
//!
//! * `infix(c)`: the longest `c`-trace (up to `m`) that is a suffix of the
//!   flattening of some infix of `λ`, i.e. a trace that ends on a label
//!   boundary and may start inside a label;
//! * `suffix(c)`: the longest `c`-trace that is a suffix of the flattening;
//! * `transfer(c, d)`: the most increments with which the flattening
//!   transfers `c` to `d`;
//! * `prefix(c, d)`: the same, maximized over all label-prefixes of `λ`.
//!
//! Every entry is ⊥ (no such trace or transfer) or a value in `0..=m`.
//! Signatures form a monoid under [`compose`] with unit [`identity_signature`],
//! and two label words have equal signatures exactly when they are
//! `m`-equivalent.

pub mod naive;

use std::fmt;

use crate::automaton::{CounterId, CounterOp, OpSequence};
use crate::error::{Error, Result};

/// ⊥ or a value in `0..=cap`. Ordered with ⊥ below every value.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Capped(Option<u32>);

impl Capped {
    pub const BOTTOM: Capped = Capped(None);
    pub const ZERO: Capped = Capped(Some(0));

    pub fn new(value: u32) -> Self {
        Capped(Some(value))
    }

    pub fn get(self) -> Option<u32> {
        self.0
    }

    pub fn is_bottom(self) -> bool {
        self.0.is_none()
    }

    /// Saturating addition; ⊥ absorbs.
    pub fn add(self, other: Capped, cap: u32) -> Capped {
        match (self.0, other.0) {
            (Some(a), Some(b)) => Capped(Some(a.saturating_add(b).min(cap))),
            _ => Capped::BOTTOM,
        }
    }

    pub fn clamp_to(self, cap: u32) -> Capped {
        Capped(self.0.map(|v| v.min(cap)))
    }
}

impl fmt::Display for Capped {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Some(v) => write!(f, "{v}"),
            None => f.write_str("⊥"),
        }
    }
}

/// Square `k × k` matrix over capped counts, row = source counter.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TransferMatrix {
    k: usize,
    cells: Vec<Capped>,
}

impl TransferMatrix {
    pub fn bottom(k: usize) -> Self {
        TransferMatrix {
            k,
            cells: vec![Capped::BOTTOM; k * k],
        }
    }

    pub fn identity(k: usize) -> Self {
        let mut m = Self::bottom(k);
        for c in 0..k {
            m.cells[c * k + c] = Capped::ZERO;
        }
        m
    }

    /// Transfer effect of a single operation.
    pub fn of_op(k: usize, op: &CounterOp) -> Self {
        let mut m = Self::identity(k);
        match *op {
            CounterOp::Inc(c) => m.set(c, c, Capped::new(1)),
            CounterOp::Reset(c) => m.set(c, c, Capped::BOTTOM),
            CounterOp::Max {
                target,
                left,
                right,
            } => {
                m.set(target, target, Capped::BOTTOM);
                m.set(left, target, Capped::ZERO);
                m.set(right, target, Capped::ZERO);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn get(&self, from: CounterId, to: CounterId) -> Capped {
        self.cells[from.0 * self.k + to.0]
    }

    pub fn set(&mut self, from: CounterId, to: CounterId, v: Capped) {
        self.cells[from.0 * self.k + to.0] = v;
    }

    /// Max-plus product with saturating addition at `cap`.
    pub fn product(&self, other: &TransferMatrix, cap: u32) -> TransferMatrix {
        let k = self.k;
        let mut out = Self::bottom(k);
        for c in 0..k {
            for e in 0..k {
                let left = self.cells[c * k + e];
                if left.is_bottom() {
                    continue;
                }
                for d in 0..k {
                    let v = left.add(other.cells[e * k + d], cap);
                    let cell = &mut out.cells[c * k + d];
                    if v > *cell {
                        *cell = v;
                    }
                }
            }
        }
        out
    }

    /// Pointwise maximum.
    pub fn join(&self, other: &TransferMatrix) -> TransferMatrix {
        TransferMatrix {
            k: self.k,
            cells: self
                .cells
                .iter()
                .zip(&other.cells)
                .map(|(a, b)| *a.max(b))
                .collect(),
        }
    }

    pub fn clamp_to(&self, cap: u32) -> TransferMatrix {
        TransferMatrix {
            k: self.k,
            cells: self.cells.iter().map(|v| v.clamp_to(cap)).collect(),
        }
    }

    /// Best value in column `to` over all sources.
    pub fn column_max(&self, to: CounterId) -> Capped {
        (0..self.k)
            .map(|c| self.cells[c * self.k + to.0])
            .max()
            .unwrap_or(Capped::BOTTOM)
    }
}

/// The cap-`m` characteristic quadruple of a word of transition labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TransferSignature {
    cap: u32,
    infix: Vec<Capped>,
    suffix: Vec<Capped>,
    transfer: TransferMatrix,
    prefix: TransferMatrix,
}

impl TransferSignature {
    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn num_counters(&self) -> usize {
        self.suffix.len()
    }

    /// Longest `c`-trace ending on a label boundary (the `A` component).
    pub fn infix(&self, c: CounterId) -> Capped {
        self.infix[c.0]
    }

    /// Longest `c`-trace that is a suffix of the flattening (the `B` component).
    pub fn suffix(&self, c: CounterId) -> Capped {
        self.suffix[c.0]
    }

    /// Increments with which the flattening transfers `c` to `d` (the `T` component).
    pub fn transfer(&self, c: CounterId, d: CounterId) -> Capped {
        self.transfer.get(c, d)
    }

    /// Best transfer over label-prefixes (the `P` component).
    pub fn prefix(&self, c: CounterId, d: CounterId) -> Capped {
        self.prefix.get(c, d)
    }

    pub fn transfer_matrix(&self) -> &TransferMatrix {
        &self.transfer
    }

    pub fn prefix_matrix(&self) -> &TransferMatrix {
        &self.prefix
    }

    /// Checks the structural invariants every reachable signature satisfies.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let k = self.num_counters();
        for c in (0..k).map(CounterId) {
            if self.infix(c) < self.suffix(c) {
                return Err(format!("A({c}) < B({c})"));
            }
            if self.suffix(c) < Capped::ZERO || self.infix(c) < Capped::ZERO {
                return Err(format!("trace entry of counter {c} is ⊥"));
            }
            if self.prefix(c, c) < Capped::ZERO {
                return Err(format!("P({c},{c}) is ⊥"));
            }
            if self.suffix(c) < self.transfer.column_max(c) {
                return Err(format!("B({c}) below a transfer into {c}"));
            }
            for d in (0..k).map(CounterId) {
                if self.prefix(c, d) < self.transfer(c, d) {
                    return Err(format!("P({c},{d}) < T({c},{d})"));
                }
            }
            let all = self
                .infix
                .iter()
                .chain(&self.suffix)
                .chain(&self.transfer.cells)
                .chain(&self.prefix.cells);
            if all.filter_map(|v| v.get()).any(|v| v > self.cap) {
                return Err("entry above cap".into());
            }
        }
        Ok(())
    }

    /// Renders the four components as labelled tables.
    ///
    /// ```text
    /// cap 2
    /// A (infix trace):   c=1 d=0
    /// B (suffix trace):  c=0 d=0
    /// T (transfer):
    ///         c  d
    ///    c    ⊥  ⊥
    ///    d    ⊥  0
    /// P (prefix transfer):
    ///    ...
    /// ```
    pub fn tables(&self, names: &[String]) -> String {
        let mut out = format!("cap {}\n", self.cap);
        let row = |v: &[Capped]| {
            names
                .iter()
                .zip(v)
                .map(|(n, x)| format!("{n}={x}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        out.push_str(&format!("A (infix trace):   {}\n", row(&self.infix)));
        out.push_str(&format!("B (suffix trace):  {}\n", row(&self.suffix)));
        let width = names.iter().map(|n| n.chars().count()).max().unwrap_or(1).max(1);
        for (title, m) in [("T (transfer):", &self.transfer), ("P (prefix transfer):", &self.prefix)] {
            out.push_str(title);
            out.push('\n');
            out.push_str(&format!("   {:width$}", ""));
            for n in names {
                out.push_str(&format!("  {n:>width$}"));
            }
            out.push('\n');
            for (i, n) in names.iter().enumerate() {
                out.push_str(&format!("   {n:width$}"));
                for j in 0..names.len() {
                    let v = m.get(CounterId(i), CounterId(j)).to_string();
                    out.push_str(&format!("  {v:>width$}"));
                }
                out.push('\n');
            }
        }
        out
    }
}

/// Signature of the empty label word.
pub fn identity_signature(k: usize, cap: u32) -> TransferSignature {
    TransferSignature {
        cap,
        infix: vec![Capped::ZERO; k],
        suffix: vec![Capped::ZERO; k],
        transfer: TransferMatrix::identity(k),
        prefix: TransferMatrix::identity(k),
    }
}

/// Signature of the one-letter label word `pi`.
///
/// Traces are evaluated at operation granularity inside the label, but the
/// only label-infixes and label-prefixes of a single letter are `ε` and the
/// letter itself.
pub fn label_signature(pi: &OpSequence, k: usize, cap: u32) -> TransferSignature {
    let mut suffix_matrix = TransferMatrix::identity(k);
    let mut suffix = vec![Capped::ZERO; k];
    for op in pi.ops().iter().rev() {
        suffix_matrix = TransferMatrix::of_op(k, op).product(&suffix_matrix, cap);
        for (c, best) in suffix.iter_mut().enumerate() {
            *best = (*best).max(suffix_matrix.column_max(CounterId(c)));
        }
    }
    let transfer = suffix_matrix;
    let prefix = TransferMatrix::identity(k).join(&transfer);
    TransferSignature {
        cap,
        infix: suffix.clone(),
        suffix,
        transfer,
        prefix,
    }
}

/// Signature of the concatenation of the underlying label words.
pub fn compose(s1: &TransferSignature, s2: &TransferSignature) -> Result<TransferSignature> {
    if s1.cap != s2.cap {
        return Err(Error::CapMismatch {
            left: s1.cap,
            right: s2.cap,
        });
    }
    let cap = s1.cap;
    let k = s1.num_counters();
    let transfer = s1.transfer.product(&s2.transfer, cap);
    let prefix = s1.prefix.join(&s1.transfer.product(&s2.prefix, cap));
    let mut suffix = s2.suffix.clone();
    let mut infix: Vec<Capped> = s1
        .infix
        .iter()
        .zip(&s2.infix)
        .map(|(a, b)| *a.max(b))
        .collect();
    for c in 0..k {
        for e in 0..k {
            let b1 = s1.suffix[e];
            let through_t = b1.add(s2.transfer.cells[e * k + c], cap);
            let through_p = b1.add(s2.prefix.cells[e * k + c], cap);
            suffix[c] = suffix[c].max(through_t);
            infix[c] = infix[c].max(through_p);
        }
    }
    Ok(TransferSignature {
        cap,
        infix,
        suffix,
        transfer,
        prefix,
    })
}

/// Clamps every entry to `cap`, giving the signature at a coarser precision.
pub fn project_cap(s: &TransferSignature, cap: u32) -> Result<TransferSignature> {
    if cap > s.cap {
        return Err(Error::CapTooLarge {
            cap: s.cap,
            requested: cap,
        });
    }
    Ok(TransferSignature {
        cap,
        infix: s.infix.iter().map(|v| v.clamp_to(cap)).collect(),
        suffix: s.suffix.iter().map(|v| v.clamp_to(cap)).collect(),
        transfer: s.transfer.clamp_to(cap),
        prefix: s.prefix.clamp_to(cap),
    })
}

/// Signature of a whole label word, folding [`label_signature`] with [`compose`].
pub fn word_label_signature<'a>(
    labels: impl IntoIterator<Item = &'a OpSequence>,
    k: usize,
    cap: u32,
) -> TransferSignature {
    labels.into_iter().fold(identity_signature(k, cap), |acc, l| {
        compose(&acc, &label_signature(l, k, cap)).expect("caps agree")
    })
}
