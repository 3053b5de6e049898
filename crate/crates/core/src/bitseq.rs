//! Binary input sequences.
//!
//! Two encodings are understood: packed bytes read most significant bit first,
//! and ASCII text made of `'0'` and `'1'` with ignorable whitespace.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// An ordered sequence of at least two bits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitSequence {
    bits: Vec<u8>,
}

impl BitSequence {
    pub const MIN_LEN: usize = 2;

    /// Builds a sequence from symbols that must each be `0` or `1`.
    pub fn from_bits(bits: Vec<u8>) -> Result<Self> {
        if let Some(index) = bits.iter().position(|&b| b > 1) {
            return Err(Error::Parse {
                index,
                symbol: char::from_digit(u32::from(bits[index]) % 10, 10).unwrap_or('?'),
            });
        }
        Self::checked(bits)
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Result<Self> {
        Self::checked(bits.into_iter().map(u8::from).collect())
    }

    /// Bit `k` is bit `7 - k % 8` of byte `k / 8`; bits past `n` are dropped.
    pub fn from_bytes_msb_first(raw: &[u8], n: usize) -> Result<Self> {
        Self::checked(unpack_msb_first(raw, n)?)
    }

    /// Parses `'0'`/`'1'` characters, skipping ASCII whitespace. The index in
    /// a parse error counts characters of `text`.
    pub fn from_ascii(text: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(text.len());
        for (index, symbol) in text.chars().enumerate() {
            match symbol {
                '0' => bits.push(0),
                '1' => bits.push(1),
                c if c.is_ascii_whitespace() => {}
                c => return Err(Error::Parse { index, symbol: c }),
            }
        }
        Self::checked(bits)
    }

    fn checked(bits: Vec<u8>) -> Result<Self> {
        if bits.len() < Self::MIN_LEN {
            return Err(Error::SequenceTooShort(bits.len()));
        }
        Ok(Self { bits })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    /// Always false; kept for API symmetry with slices.
    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn ones(&self) -> usize {
        self.bits.iter().map(|&b| usize::from(b)).sum()
    }

    /// The ±1 view: bit `x` becomes `2x - 1`.
    pub fn signed(&self) -> Vec<i8> {
        self.bits.iter().map(|&b| 2 * b as i8 - 1).collect()
    }

    /// ASCII rendering without separators; inverse of [`from_ascii`](Self::from_ascii).
    pub fn render(&self) -> String {
        self.bits
            .iter()
            .map(|&b| if b == 1 { '1' } else { '0' })
            .collect()
    }

    /// Packs MSB first; the final byte is zero padded.
    pub fn to_bytes_msb_first(&self) -> Vec<u8> {
        self.bits
            .chunks(8)
            .map(|chunk| {
                chunk
                    .iter()
                    .enumerate()
                    .fold(0u8, |acc, (k, &b)| acc | (b << (7 - k)))
            })
            .collect()
    }
}

/// Unpacks the first `n` bits of `raw`, most significant bit first.
pub fn unpack_msb_first(raw: &[u8], n: usize) -> Result<Vec<u8>> {
    let needed = n.div_ceil(8);
    if raw.len() < needed {
        return Err(Error::InputTooShort {
            bits: n,
            needed,
            got: raw.len(),
        });
    }
    Ok((0..n).map(|k| (raw[k / 8] >> (7 - k % 8)) & 1).collect())
}
