//! Timed guards and unions of guards.

use std::fmt;

use num_rational::Ratio;

use crate::error::ModelError;
use crate::time::TimeStamp;

/// Enabling interval for the relative arrival time of an input.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TimedGuard {
    /// `[lo, hi)` with `lo < hi`.
    HalfOpen { lo: u64, hi: u64 },
    /// `[at, at]` with `at >= 1`.
    Point { at: u64 },
}

impl TimedGuard {
    pub fn half_open(lo: u64, hi: u64) -> Result<Self, ModelError> {
        if lo < hi {
            Ok(TimedGuard::HalfOpen { lo, hi })
        } else {
            Err(ModelError::InvalidGuard(format!(
                "[{lo},{hi}) needs lo < hi"
            )))
        }
    }

    pub fn point(at: u64) -> Result<Self, ModelError> {
        if at >= 1 {
            Ok(TimedGuard::Point { at })
        } else {
            Err(ModelError::InvalidGuard("point guards start at 1".into()))
        }
    }

    pub fn lo(self) -> u64 {
        match self {
            TimedGuard::HalfOpen { lo, .. } => lo,
            TimedGuard::Point { at } => at,
        }
    }

    /// Right boundary; equals `lo` for a point guard.
    pub fn hi(self) -> u64 {
        match self {
            TimedGuard::HalfOpen { hi, .. } => hi,
            TimedGuard::Point { at } => at,
        }
    }

    pub fn is_point(self) -> bool {
        matches!(self, TimedGuard::Point { .. })
    }

    pub fn contains(self, t: TimeStamp) -> bool {
        let t = t.value();
        match self {
            TimedGuard::HalfOpen { lo, hi } => {
                Ratio::from_integer(lo as i64) <= t && t < Ratio::from_integer(hi as i64)
            }
            TimedGuard::Point { at } => t == Ratio::from_integer(at as i64),
        }
    }

    /// `self ⊆ other` as point sets.
    pub fn is_subset_of(self, other: TimedGuard) -> bool {
        match (self, other) {
            (TimedGuard::HalfOpen { lo, hi }, TimedGuard::HalfOpen { lo: l2, hi: h2 }) => {
                l2 <= lo && hi <= h2
            }
            (TimedGuard::Point { at }, g) => g.contains(TimeStamp::from_int(at)),
            (TimedGuard::HalfOpen { .. }, TimedGuard::Point { .. }) => false,
        }
    }

    pub fn intersects(self, other: TimedGuard) -> bool {
        match (self, other) {
            (TimedGuard::HalfOpen { lo, hi }, TimedGuard::HalfOpen { lo: l2, hi: h2 }) => {
                lo.max(l2) < hi.min(h2)
            }
            (TimedGuard::Point { at }, g) | (g, TimedGuard::Point { at }) => {
                g.contains(TimeStamp::from_int(at))
            }
        }
    }

    fn span(self) -> Span {
        match self {
            TimedGuard::HalfOpen { lo, hi } => Span {
                lo,
                hi,
                closed: false,
            },
            TimedGuard::Point { at } => Span {
                lo: at,
                hi: at,
                closed: true,
            },
        }
    }
}

/// Interval notation: `[1,3)` or `[1,1]`.
impl fmt::Display for TimedGuard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimedGuard::HalfOpen { lo, hi } => write!(f, "[{lo},{hi})"),
            TimedGuard::Point { at } => write!(f, "[{at},{at}]"),
        }
    }
}

impl fmt::Debug for TimedGuard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Left-closed interval whose right end is open or closed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub lo: u64,
    pub hi: u64,
    pub closed: bool,
}

/// Normalized union of guards: sorted, non-overlapping, with adjacent
/// pieces merged (`[1,3) ∪ [3,4) = [1,4)`).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GuardUnion {
    spans: Vec<Span>,
}

impl GuardUnion {
    pub fn of(guards: impl IntoIterator<Item = TimedGuard>) -> Self {
        let mut spans: Vec<Span> = guards.into_iter().map(TimedGuard::span).collect();
        spans.sort_by_key(|s| (s.lo, s.hi, s.closed));
        let mut merged: Vec<Span> = Vec::with_capacity(spans.len());
        for s in spans {
            match merged.last_mut() {
                // s is left-closed, so touching at cur.hi is contiguous
                Some(cur) if s.lo <= cur.hi => {
                    if (s.hi, s.closed) > (cur.hi, cur.closed) {
                        cur.hi = s.hi;
                        cur.closed = s.closed;
                    }
                }
                _ => merged.push(s),
            }
        }
        GuardUnion { spans: merged }
    }

    pub fn spans(&self) -> &[Span] {
        &self.spans
    }

    pub fn is_empty(&self) -> bool {
        self.spans.is_empty()
    }
}
