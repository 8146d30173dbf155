//! Integer-millisecond time values.
//!
//! All interval arithmetic in this crate runs on whole milliseconds so that
//! edge weights and error rates are exactly reproducible; floating-point
//! seconds only appear at the parsing/rendering boundary.

use core::fmt;
use core::iter::Sum;
use core::ops::{Add, AddAssign, Neg, Sub, SubAssign};

/// A duration or instant measured in whole milliseconds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Millis(i64);

impl Millis {
    pub const ZERO: Millis = Millis(0);

    pub const fn from_ms(ms: i64) -> Self {
        Millis(ms)
    }

    pub const fn as_ms(self) -> i64 {
        self.0
    }

    /// Quantizes non-negative seconds to the nearest millisecond, with halves
    /// rounding up. Returns `None` for negative or non-finite input.
    pub fn from_seconds(seconds: f64) -> Option<Self> {
        if !seconds.is_finite() || seconds < 0.0 {
            return None;
        }
        let ms = seconds * 1000.0 + 0.5;
        if ms >= i64::MAX as f64 {
            return None;
        }
        Some(Millis(ms as i64))
    }

    pub fn seconds_f64(self) -> f64 {
        self.0 as f64 / 1000.0
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }
}

impl Add for Millis {
    type Output = Millis;
    fn add(self, rhs: Millis) -> Millis {
        Millis(self.0 + rhs.0)
    }
}

impl Sub for Millis {
    type Output = Millis;
    fn sub(self, rhs: Millis) -> Millis {
        Millis(self.0 - rhs.0)
    }
}

impl AddAssign for Millis {
    fn add_assign(&mut self, rhs: Millis) {
        self.0 += rhs.0;
    }
}

impl SubAssign for Millis {
    fn sub_assign(&mut self, rhs: Millis) {
        self.0 -= rhs.0;
    }
}

impl Neg for Millis {
    type Output = Millis;
    fn neg(self) -> Millis {
        Millis(-self.0)
    }
}

impl Sum for Millis {
    fn sum<I: Iterator<Item = Millis>>(iter: I) -> Millis {
        iter.fold(Millis::ZERO, |acc, m| acc + m)
    }
}

/// Renders as seconds with exactly three decimals, e.g. `12.345`.
impl fmt::Display for Millis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ms = self.0;
        let (sign, abs) = if ms < 0 { ("-", -ms) } else { ("", ms) };
        write!(f, "{}{}.{:03}", sign, abs / 1000, abs % 1000)
    }
}
