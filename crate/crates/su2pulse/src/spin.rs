//! System dimension and its spin quantum number.

use crate::error::{Error, Result};

/// An N-level system viewed as a spin `j = (N−1)/2`.
///
/// `N = 2j + 1` holds exactly; `j` is an integer for odd N and a
/// half-integer for even N.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Spin {
    levels: usize,
}

impl Spin {
    /// Largest supported dimension (j = 25).
    pub const MAX_LEVELS: usize = 51;

    pub fn new(levels: usize) -> Result<Self> {
        if levels < 2 {
            return Err(Error::InvalidDimension { levels });
        }
        Ok(Spin { levels })
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    /// Twice the spin quantum number, `2j = N − 1`. Integer-exact.
    pub fn two_j(&self) -> usize {
        self.levels - 1
    }

    pub fn j(&self) -> f64 {
        self.two_j() as f64 / 2.0
    }
}
