use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EncodeError {
    #[error("value {value} does not fit a {n}-vertex field (must be < {n})")]
    OutOfRange { value: usize, n: usize },
    #[error("expected a {expected}-bit message, got {got} bits")]
    WrongLength { expected: usize, got: usize },
    #[error("invalid bit character {0:?}")]
    BadBit(char),
}

/// A finite bit string broadcast to every underlying neighbor in one round.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BroadcastMessage {
    bits: Vec<bool>,
}

impl BroadcastMessage {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn concat(mut self, other: &BroadcastMessage) -> Self {
        self.bits.extend_from_slice(&other.bits);
        self
    }
}

impl fmt::Display for BroadcastMessage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BroadcastMessage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BroadcastMessage({self})")
    }
}

impl FromStr for BroadcastMessage {
    type Err = EncodeError;

    fn from_str(s: &str) -> Result<Self, EncodeError> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(EncodeError::BadBit(other)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Self::from_bits)
    }
}

impl Serialize for BroadcastMessage {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `⌈log₂ n⌉` for `n ≥ 1`.
pub fn ceil_log2(n: usize) -> usize {
    assert!(n >= 1, "ceil_log2 of zero");
    (usize::BITS - (n - 1).leading_zeros()) as usize
}

/// Bit width of one vertex-count field: `⌈log₂ n⌉`, but at least 1.
pub fn uint_width(n: usize) -> usize {
    ceil_log2(n).max(1)
}

/// Fixed-width big-endian encoding of `value ∈ [0, n)`.
pub fn encode_uint(value: usize, n: usize) -> Result<BroadcastMessage, EncodeError> {
    if value >= n {
        return Err(EncodeError::OutOfRange { value, n });
    }
    let width = uint_width(n);
    Ok(BroadcastMessage::from_bits((0..width).rev().map(|bit| (value >> bit) & 1 == 1).collect()))
}

fn decode_field(bits: &[bool]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
}

pub fn decode_uint(msg: &BroadcastMessage, n: usize) -> Result<usize, EncodeError> {
    let width = uint_width(n);
    if msg.len() != width {
        return Err(EncodeError::WrongLength { expected: width, got: msg.len() });
    }
    let value = decode_field(msg.bits());
    if value >= n {
        return Err(EncodeError::OutOfRange { value, n });
    }
    Ok(value)
}

/// `encode_uint(a, n) ‖ encode_uint(b, n)`.
pub fn pair_message(a: usize, b: usize, n: usize) -> Result<BroadcastMessage, EncodeError> {
    Ok(encode_uint(a, n)?.concat(&encode_uint(b, n)?))
}

pub fn decode_pair(msg: &BroadcastMessage, n: usize) -> Result<(usize, usize), EncodeError> {
    let width = uint_width(n);
    if msg.len() != 2 * width {
        return Err(EncodeError::WrongLength { expected: 2 * width, got: msg.len() });
    }
    let (hi, lo) = msg.bits().split_at(width);
    let (a, b) = (decode_field(hi), decode_field(lo));
    for value in [a, b] {
        if value >= n {
            return Err(EncodeError::OutOfRange { value, n });
        }
    }
    Ok((a, b))
}

/// Per-message size limit enforced by the engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BitBudget {
    pub limit: usize,
}

impl BitBudget {
    pub fn bits(limit: usize) -> Self {
        Self { limit }
    }

    /// Two vertex-count fields: `2·⌈log₂ n⌉` bits (2 bits when `n = 1`).
    pub fn for_n(n: usize) -> Self {
        Self { limit: 2 * uint_width(n) }
    }
}
