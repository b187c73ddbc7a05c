//! Upper bounds on the number of classes and the initial-lookahead bound.
//!
//! Logarithms are base 2, rounded up where an integer is required.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Pow};
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest exponent, in bits, that [`theorem_initial_lookahead`] will expand.
pub const DEFAULT_BIT_LIMIT: u64 = 1 << 20;

/// Bound on the number of cap-`m` classes of label words over `k` counters:
/// `(m+2)^(2(k²+k))`.
pub fn op_index_bound(k: usize, m: u32) -> BigUint {
    let k = k as u64;
    let base = BigUint::from(m as u64 + 2);
    Pow::pow(&base, 2 * (k * k + k))
}

/// Bound on the number of cap-`m` word classes of an automaton with `n`
/// states and `k` counters: `n^n · op_index_bound(k, m)^n`, i.e.
/// `2^(n(log n + 2(k²+k) log(m+2)))`.
pub fn word_index_bound(n: usize, k: usize, m: u32) -> BigUint {
    let per_state = BigUint::from(n as u64) * op_index_bound(k, m);
    Pow::pow(&per_state, n as u64)
}

/// Bound on projected classes given the number of joint classes.
pub fn projected_index_bound(joint_classes: usize) -> BigUint {
    BigUint::one() << joint_classes
}

pub fn ceil_log2(n: usize) -> u64 {
    match n {
        0 | 1 => 0,
        _ => (usize::BITS - (n - 1).leading_zeros()) as u64,
    }
}

/// `2n(⌈log2 n⌉ + 2(k²+k))`, the innermost exponent of the lookahead tower.
/// `None` on overflow.
pub fn tower_inner_exponent(n: usize, k: usize) -> Option<u64> {
    let n = n as u64;
    let k = k as u64;
    let kk = k.checked_mul(k)?.checked_add(k)?.checked_mul(2)?;
    ceil_log2(n as usize)
        .checked_add(kk)?
        .checked_mul(n)?
        .checked_mul(2)
}

/// The initial lookahead `2d` with `d = 2^(2^inner)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LookaheadBound {
    pub n: usize,
    pub k: usize,
    pub inner: u64,
    #[serde(serialize_with = "as_decimal")]
    pub value: BigUint,
}

fn as_decimal<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_str_radix(10))
}

impl LookaheadBound {
    /// `d`, half of the lookahead.
    pub fn d(&self) -> BigUint {
        &self.value >> 1u32
    }

    pub fn tower(&self) -> String {
        format!("2·2^(2^{})", self.inner)
    }
}

impl fmt::Display for LookaheadBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tower())
    }
}

/// `2·2^(2^(2n(⌈log2 n⌉ + 2(k²+k))))`, refused when `2^inner` exceeds
/// `bit_limit`.
pub fn theorem_initial_lookahead(n: usize, k: usize, bit_limit: u64) -> Result<LookaheadBound> {
    if n == 0 {
        return Err(Error::Structure("an automaton has at least one state".into()));
    }
    let too_large = |exponent: String| Error::BoundTooLarge {
        exponent,
        limit: bit_limit,
    };
    let inner = tower_inner_exponent(n, k).ok_or_else(|| too_large("overflow".into()))?;
    if inner >= 64 || (1u64 << inner) > bit_limit {
        return Err(too_large(format!("2^{inner}")));
    }
    let value = BigUint::one() << ((1u64 << inner) + 1);
    Ok(LookaheadBound { n, k, inner, value })
}
