//! Exact time values.
//!
//! Every timestamp, relative delay and output time is an exact rational.
//! Equality is structural because [`Ratio`] keeps values in lowest terms.

use std::fmt;
use std::ops::{Add, AddAssign};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::ParseTimeError;

/// Signed exact rational used for offsets and differences.
pub type Rational = Ratio<i64>;

/// A non-negative exact time value.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct TimeStamp(Rational);

impl TimeStamp {
    pub const ZERO: TimeStamp = TimeStamp(Ratio::new_raw(0, 1));

    /// Returns `None` if the value is negative.
    pub fn new(value: Rational) -> Option<Self> {
        if value.is_negative() {
            None
        } else {
            Some(TimeStamp(value))
        }
    }

    /// Builds `numer/denom`. Panics on a zero denominator or a negative value.
    pub fn from_ratio(numer: i64, denom: i64) -> Self {
        TimeStamp::new(Ratio::new(numer, denom)).expect("time values are non-negative")
    }

    pub fn from_int(value: u64) -> Self {
        TimeStamp(Ratio::from_integer(value as i64))
    }

    pub fn value(self) -> Rational {
        self.0
    }

    pub fn numer(self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(self) -> i64 {
        *self.0.denom()
    }

    pub fn is_integer(self) -> bool {
        self.0.is_integer()
    }

    /// Largest integer not above the value.
    pub fn floor(self) -> u64 {
        self.0.floor().to_integer() as u64
    }

    pub fn checked_sub(self, other: TimeStamp) -> Option<TimeStamp> {
        TimeStamp::new(self.0 - other.0)
    }

    pub fn to_f64(self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl Add for TimeStamp {
    type Output = TimeStamp;

    fn add(self, rhs: TimeStamp) -> TimeStamp {
        TimeStamp(self.0 + rhs.0)
    }
}

impl AddAssign for TimeStamp {
    fn add_assign(&mut self, rhs: TimeStamp) {
        self.0 += rhs.0;
    }
}

impl Add<u64> for TimeStamp {
    type Output = TimeStamp;

    fn add(self, rhs: u64) -> TimeStamp {
        TimeStamp(self.0 + Ratio::from_integer(rhs as i64))
    }
}

impl From<u64> for TimeStamp {
    fn from(value: u64) -> Self {
        TimeStamp::from_int(value)
    }
}

/// Always prints `p/q`, including integers (`6/1`).
impl fmt::Display for TimeStamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for TimeStamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

/// Accepts `7`, `21/10` and `2.1`; decimals convert exactly.
impl FromStr for TimeStamp {
    type Err = ParseTimeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || ParseTimeError(s.to_string());
        let value = if let Some((n, d)) = s.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ratio::new(n, d)
        } else if let Some((int, frac)) = s.split_once('.') {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 15 {
                return Err(bad());
            }
            let int: i64 = if int.is_empty() {
                0
            } else {
                int.parse().map_err(|_| bad())?
            };
            if int < 0 || int_has_sign(s) {
                return Err(bad());
            }
            let scale = 10i64.pow(frac.len() as u32);
            let frac: i64 = frac.parse().map_err(|_| bad())?;
            Ratio::new(int.checked_mul(scale).ok_or_else(bad)? + frac, scale)
        } else {
            Ratio::from_integer(s.parse::<i64>().map_err(|_| bad())?)
        };
        if value.is_negative() || (value.is_zero() && s.starts_with('-')) {
            return Err(bad());
        }
        Ok(TimeStamp(value))
    }
}

fn int_has_sign(s: &str) -> bool {
    s.starts_with('-') || s.starts_with('+')
}
