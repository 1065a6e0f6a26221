//! Numeric codes: the Cantor pairing bijection, right-nested tuples and
//! length-prefixed finite sequences.
//!
//! Everything is arbitrary precision. Codes grow quadratically with their
//! components, so fixed-width integers are never used here.

use num_bigint::BigUint;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodingError {
    #[error("cannot form a tuple of zero components")]
    EmptyTuple,
}

/// `⟨m, n⟩ = (m + n)(m + n + 1)/2 + m`.
pub fn pair(m: &BigUint, n: &BigUint) -> BigUint {
    let s = m + n;
    let tri = (&s * (&s + 1u32)) >> 1;
    tri + m
}

/// Inverse of [`pair`]; total because the pairing is onto.
pub fn unpair(k: &BigUint) -> (BigUint, BigUint) {
    // s = floor((sqrt(8k + 1) - 1) / 2) is the diagonal holding k.
    let disc: BigUint = (k << 3u32) + 1u32;
    let mut s: BigUint = (disc.sqrt() - 1u32) >> 1;
    // integer sqrt is exact, but guard the boundary anyway
    while tri(&(&s + 1u32)) <= *k {
        s += 1u32;
    }
    while tri(&s) > *k {
        s -= 1u32;
    }
    let m = k - tri(&s);
    let n = &s - &m;
    (m, n)
}

fn tri(s: &BigUint) -> BigUint {
    (s * (s + 1u32)) >> 1
}

pub fn pair_u64(m: u64, n: u64) -> BigUint {
    pair(&BigUint::from(m), &BigUint::from(n))
}

/// Right-nested tuple code: `[a] ↦ a`, `[a, b, …] ↦ ⟨a, tuple([b, …])⟩`.
pub fn tuple(xs: &[BigUint]) -> Result<BigUint, CodingError> {
    let (last, init) = xs.split_last().ok_or(CodingError::EmptyTuple)?;
    Ok(init.iter().rev().fold(last.clone(), |acc, x| pair(x, &acc)))
}

/// Splits a code into `len` tuple components (inverse of [`tuple`] for a
/// known arity).
pub fn untuple(code: &BigUint, len: usize) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(len);
    if len == 0 {
        return out;
    }
    let mut rest = code.clone();
    for _ in 1..len {
        let (head, tail) = unpair(&rest);
        out.push(head);
        rest = tail;
    }
    out.push(rest);
    out
}

/// Sequence code `⟨len, tuple(xs)⟩`; the empty sequence is `⟨0, 0⟩ = 0`.
pub fn seq_encode(xs: &[BigUint]) -> BigUint {
    let body = if xs.is_empty() {
        BigUint::zero()
    } else {
        tuple(xs).expect("non-empty")
    };
    pair(&BigUint::from(xs.len()), &body)
}

/// Total decoder. Every code decodes to some sequence; codes that are not in
/// the image of [`seq_encode`] (a zero length with a non-zero body) decode to
/// their longest valid prefix, the empty sequence.
pub fn seq_decode(k: &BigUint) -> Vec<BigUint> {
    let (len, body) = unpair(k);
    if len.is_zero() {
        return Vec::new();
    }
    // A length beyond usize cannot be materialised; such codes only arise
    // from adversarial input and are truncated to what fits.
    let len = usize::try_from(&len).unwrap_or(usize::MAX).min(1 << 24);
    untuple(&body, len)
}

pub fn seq_encode_u64(xs: &[u64]) -> BigUint {
    let xs: Vec<BigUint> = xs.iter().map(|&x| BigUint::from(x)).collect();
    seq_encode(&xs)
}
