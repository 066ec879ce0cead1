//! Explicit operation counting for complexity assertions.
//!
//! Multiplications and additions are tallied separately and reported as a
//! sum, so an inner product of two length-n vectors costs 2n operations.
//! Divisions count as multiplications; transcendental evaluations (sin, cos,
//! exp, ...) are not counted, matching the usual flop-count convention for
//! composition methods.

/// Tally of scalar multiply/add operations for one measured computation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FlopCounter {
    /// Number of scalar multiplications (and divisions).
    pub mults: u64,
    /// Number of scalar additions (and subtractions).
    pub adds: u64,
}

impl FlopCounter {
    /// A fresh counter with both tallies at zero.
    pub fn new() -> Self {
        Self::default()
    }

    /// Record `mults` multiplications and `adds` additions.
    #[inline]
    pub fn record(&mut self, mults: u64, adds: u64) {
        self.mults += mults;
        self.adds += adds;
    }

    /// Total operations: multiplications plus additions.
    pub fn total(&self) -> u64 {
        self.mults + self.adds
    }

    /// Reset both tallies to zero.
    pub fn reset(&mut self) {
        *self = Self::default();
    }
}
