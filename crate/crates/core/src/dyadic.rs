//! Exact dyadic rationals `num / 2^shift` used as breakpoints.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{domain, Result};

/// Largest denominator exponent accepted for a breakpoint.
pub const MAX_SHIFT: u32 = 48;

/// A dyadic rational `num / 2^shift`, kept in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: i64,
    shift: u32,
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic { num: 0, shift: 0 };
    pub const ONE: Dyadic = Dyadic { num: 1, shift: 0 };

    pub fn new(num: i64, shift: u32) -> Result<Self> {
        if shift > MAX_SHIFT {
            return Err(domain(format!(
                "dyadic exponent {shift} exceeds {MAX_SHIFT}"
            )));
        }
        Ok(Self::normalized(num, shift))
    }

    fn normalized(mut num: i64, mut shift: u32) -> Self {
        if num == 0 {
            return Self::ZERO;
        }
        while shift > 0 && num % 2 == 0 {
            num /= 2;
            shift -= 1;
        }
        Dyadic { num, shift }
    }

    /// `q / 2^level` for grid node `q` of a uniform dyadic grid.
    pub fn grid(q: u64, level: u32) -> Self {
        assert!(level <= MAX_SHIFT, "grid level {level} too fine");
        Self::normalized(q as i64, level)
    }

    pub fn numerator(self) -> i64 {
        self.num
    }

    pub fn shift(self) -> u32 {
        self.shift
    }

    /// Exact conversion; every admissible dyadic is representable in `f64`.
    pub fn to_f64(self) -> f64 {
        self.num as f64 / (1u64 << self.shift) as f64
    }

    /// Exact midpoint of `self` and `other`.
    pub fn midpoint(self, other: Dyadic) -> Dyadic {
        let s = self.shift.max(other.shift);
        let a = (self.num as i128) << (s - self.shift);
        let b = (other.num as i128) << (s - other.shift);
        Self::normalized((a + b) as i64, s + 1)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let s = self.shift.max(other.shift);
        let a = (self.num as i128) << (s - self.shift);
        let b = (other.num as i128) << (s - other.shift);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Exact difference.
impl std::ops::Sub for Dyadic {
    type Output = Dyadic;

    fn sub(self, other: Dyadic) -> Dyadic {
        let s = self.shift.max(other.shift);
        let a = self.num << (s - self.shift);
        let b = other.num << (s - other.shift);
        Self::normalized(a - b, s)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.shift == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, 1u64 << self.shift)
        }
    }
}
