//! Elias-gamma naturals and self-delimiting concatenation.
//!
//! A natural `n` is written as the gamma code of `n + 1`, so `0` is `1`,
//! `1` is `010`, `2` is `011`. Programs are already self-delimiting, so any
//! sequence of programs and naturals can be concatenated and read back in
//! order as long as the reader knows which kind comes next.

use num_bigint::BigUint;
use num_traits::One;

use super::{decode, MachineError, Program};
use crate::Natural;

pub(crate) fn gamma_len_u64(x: u64) -> usize {
    debug_assert!(x >= 1);
    let width = 64 - x.leading_zeros() as usize;
    2 * width - 1
}

pub(crate) fn push_gamma_u64(x: u64, out: &mut Vec<bool>) {
    let width = 64 - x.leading_zeros() as usize;
    out.extend(std::iter::repeat_n(false, width - 1));
    for i in (0..width).rev() {
        out.push((x >> i) & 1 == 1);
    }
}

/// Gamma code of `n + 1`.
pub fn elias_gamma(n: &Natural) -> Vec<bool> {
    let x = n + BigUint::one();
    let width = x.bits() as usize;
    let mut out = Vec::with_capacity(2 * width - 1);
    out.extend(std::iter::repeat_n(false, width - 1));
    for i in (0..width).rev() {
        out.push(x.bit(i as u64));
    }
    out
}

/// Reads one gamma-coded natural, the inverse of [`elias_gamma`].
pub fn read_elias_gamma<I: Iterator<Item = bool>>(stream: &mut I) -> Result<Natural, MachineError> {
    let mut consumed = 0;
    let mut zeros = 0usize;
    loop {
        let b = stream.next().ok_or(MachineError::Incomplete { consumed })?;
        consumed += 1;
        if b {
            break;
        }
        zeros += 1;
    }
    let mut x = BigUint::one();
    for _ in 0..zeros {
        let b = stream.next().ok_or(MachineError::Incomplete { consumed })?;
        consumed += 1;
        x <<= 1u8;
        if b {
            x |= BigUint::one();
        }
    }
    Ok(x - BigUint::one())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SdWord {
    Program(Program),
    Natural(Natural),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdKind {
    Program,
    Natural,
}

impl SdWord {
    pub fn bits(&self) -> Vec<bool> {
        match self {
            SdWord::Program(p) => p.bits().to_vec(),
            SdWord::Natural(n) => elias_gamma(n),
        }
    }

    pub fn kind(&self) -> SdKind {
        match self {
            SdWord::Program(_) => SdKind::Program,
            SdWord::Natural(_) => SdKind::Natural,
        }
    }
}

/// Concatenates self-delimiting words; the length is the sum of the parts.
pub fn concat_sd(words: &[SdWord]) -> Vec<bool> {
    words.iter().flat_map(|w| w.bits()).collect()
}

/// Splits a concatenation back into words of the given kinds. Fails if the
/// bits run out or are left over.
pub fn split_sd(bits: &[bool], kinds: &[SdKind]) -> Result<Vec<SdWord>, MachineError> {
    let mut it = bits.iter().copied();
    let mut out = Vec::with_capacity(kinds.len());
    for kind in kinds {
        out.push(match kind {
            SdKind::Program => SdWord::Program(decode(&mut it)?),
            SdKind::Natural => SdWord::Natural(read_elias_gamma(&mut it)?),
        });
    }
    let rest = it.count();
    if rest != 0 {
        return Err(MachineError::InvalidArgument(format!("{rest} bits left after the last word")));
    }
    Ok(out)
}
