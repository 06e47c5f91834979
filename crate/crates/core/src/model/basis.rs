//! Basis-state labels for register and environment product states.

use crate::error::{Error, Result};

/// Label of a computational basis state of `width` spins.
///
/// Bit positions are 1-based and MSB-first: position 1 is the most
/// significant binary digit, so the label reads left to right like the
/// bitstring it denotes. Every module extracts bits through [`bit`] and
/// [`sign`]; nothing else re-derives the bit order.
///
/// [`bit`]: BasisIndex::bit
/// [`sign`]: BasisIndex::sign
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisIndex {
    value: u64,
    width: usize,
}

impl BasisIndex {
    pub const MAX_WIDTH: usize = 64;

    pub fn new(value: u64, width: usize) -> Result<Self> {
        if width == 0 || width > Self::MAX_WIDTH {
            return Err(Error::InvalidWidth(width));
        }
        if width < 64 && value >> width != 0 {
            return Err(Error::ValueOutOfRange { value, width });
        }
        Ok(BasisIndex { value, width })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Binary digit at 1-based position `i` under the MSB-first convention.
    pub fn bit(&self, i: usize) -> Result<u8> {
        if i == 0 || i > self.width {
            return Err(Error::PositionOutOfRange {
                position: i,
                limit: self.width,
            });
        }
        Ok(self.bit_at(i))
    }

    /// `(-1)` raised to the digit at position `i`: `+1` for 0, `-1` for 1.
    pub fn sign(&self, i: usize) -> Result<i8> {
        Ok(if self.bit(i)? == 0 { 1 } else { -1 })
    }

    /// Bitwise complement within the width: maps `k` to `2^width - k - 1`.
    pub fn complement(&self) -> Self {
        let mask = if self.width == 64 {
            u64::MAX
        } else {
            (1u64 << self.width) - 1
        };
        BasisIndex {
            value: self.value ^ mask,
            width: self.width,
        }
    }

    pub fn ones(&self) -> usize {
        self.value.count_ones() as usize
    }

    /// Number of 0 digits in the width-bit representation.
    pub fn zeros(&self) -> usize {
        self.width - self.ones()
    }

    // Unvalidated accessor for inner loops; callers check 1 <= i <= width.
    pub(crate) fn bit_at(&self, i: usize) -> u8 {
        debug_assert!(i >= 1 && i <= self.width);
        ((self.value >> (self.width - i)) & 1) as u8
    }
}
