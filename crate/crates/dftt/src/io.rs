//! Sequence file formats.
//!
//! * `packed` (`.bits`): raw bytes, bit `k` is bit `7 - k % 8` of byte
//!   `k / 8`. The bit count is supplied separately; padding bits of the last
//!   byte are ignored.
//! * `ascii` (`.txt`): the characters `0` and `1`; ASCII whitespace is
//!   skipped, anything else is an error. The bit count is the number of
//!   digits.

use std::fs;
use std::path::Path;

use clap::ValueEnum;
use dftt_core::BitSequence;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    Ascii,
    Packed,
}

impl InputFormat {
    pub fn name(self) -> &'static str {
        match self {
            InputFormat::Ascii => "ascii",
            InputFormat::Packed => "packed",
        }
    }
}

#[derive(Debug, Error)]
pub enum ReadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path} is not valid UTF-8 text")]
    NotText { path: String },
    #[error("packed input needs an explicit bit count (--bits)")]
    MissingBitCount,
    #[error("{path}: {source}")]
    Sequence {
        path: String,
        source: dftt_core::Error,
    },
}

pub fn read_sequence(
    path: &Path,
    format: InputFormat,
    bits: Option<usize>,
) -> Result<BitSequence, ReadError> {
    let shown = path.display().to_string();
    let raw = fs::read(path).map_err(|source| ReadError::Io {
        path: shown.clone(),
        source,
    })?;
    let parsed = match format {
        InputFormat::Packed => {
            let n = bits.ok_or(ReadError::MissingBitCount)?;
            BitSequence::from_bytes_msb_first(&raw, n)
        }
        InputFormat::Ascii => {
            let text = String::from_utf8(raw).map_err(|_| ReadError::NotText {
                path: shown.clone(),
            })?;
            BitSequence::from_ascii(&text)
        }
    };
    parsed.map_err(|source| ReadError::Sequence {
        path: shown,
        source,
    })
}

pub fn write_sequence(path: &Path, seq: &BitSequence, format: InputFormat) -> std::io::Result<()> {
    match format {
        InputFormat::Packed => fs::write(path, seq.to_bytes_msb_first()),
        InputFormat::Ascii => fs::write(path, seq.render() + "\n"),
    }
}
