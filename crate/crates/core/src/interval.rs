//! Subintervals of the fundamental domain `(−1/2, 1/2]`.

use std::fmt;

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntervalError {
    #[error("interval endpoints out of order: {lo} > {hi}")]
    Reversed { lo: String, hi: String },
    #[error("interval {0} is not contained in (-1/2, 1/2]")]
    OutsideDomain(String),
}

/// An interval with independently open or closed ends, always inside
/// `(−1/2, 1/2]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Interval<S> {
    lo: S,
    hi: S,
    lo_closed: bool,
    hi_closed: bool,
}

impl<S: Scalar> Interval<S> {
    pub fn new(lo: S, hi: S, lo_closed: bool, hi_closed: bool) -> Result<Self, IntervalError> {
        if lo > hi {
            return Err(IntervalError::Reversed { lo: lo.to_string(), hi: hi.to_string() });
        }
        let half = S::half();
        let iv = Self { lo, hi, lo_closed, hi_closed };
        let below = iv.lo < -half.clone() || (iv.lo == -half.clone() && iv.lo_closed);
        if below || iv.hi > half {
            return Err(IntervalError::OutsideDomain(iv.to_string()));
        }
        Ok(iv)
    }

    /// `I_ε = (−ε, ε)`.
    pub fn centered(eps: S) -> Result<Self, IntervalError> {
        Self::new(-eps.clone(), eps, false, false)
    }

    /// The whole domain `(−1/2, 1/2]`.
    pub fn full() -> Self {
        Self { lo: -S::half(), hi: S::half(), lo_closed: false, hi_closed: true }
    }

    pub fn open(lo: S, hi: S) -> Result<Self, IntervalError> {
        Self::new(lo, hi, false, false)
    }

    /// `(lo, hi]`.
    pub fn left_open(lo: S, hi: S) -> Result<Self, IntervalError> {
        Self::new(lo, hi, false, true)
    }

    pub fn closed(lo: S, hi: S) -> Result<Self, IntervalError> {
        Self::new(lo, hi, true, true)
    }

    pub fn lo(&self) -> &S {
        &self.lo
    }

    pub fn hi(&self) -> &S {
        &self.hi
    }

    pub fn lo_closed(&self) -> bool {
        self.lo_closed
    }

    pub fn hi_closed(&self) -> bool {
        self.hi_closed
    }

    pub fn width(&self) -> S {
        self.hi.clone() - self.lo.clone()
    }

    pub fn contains(&self, x: &S) -> bool {
        let above = if self.lo_closed { *x >= self.lo } else { *x > self.lo };
        let below = if self.hi_closed { *x <= self.hi } else { *x < self.hi };
        above && below
    }

    pub fn is_centered(&self) -> bool {
        self.lo.clone() + self.hi.clone() == S::zero()
    }

    /// True when `self ⊆ other`.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        let lo_ok = self.lo > other.lo
            || (self.lo == other.lo && (other.lo_closed || !self.lo_closed));
        let hi_ok = self.hi < other.hi
            || (self.hi == other.hi && (other.hi_closed || !self.hi_closed));
        lo_ok && hi_ok
    }
}

impl<S: Scalar> fmt::Display for Interval<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.lo_closed { '[' } else { '(' };
        let r = if self.hi_closed { ']' } else { ')' };
        write!(f, "{l}{}, {}{r}", self.lo, self.hi)
    }
}
