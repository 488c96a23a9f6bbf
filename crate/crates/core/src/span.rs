use std::fmt;

use serde::{Deserialize, Serialize};

/// Inclusive range of calendar years. `start > end` denotes the empty range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct YearSpan {
    pub start: i32,
    pub end: i32,
}

impl YearSpan {
    pub const fn new(start: i32, end: i32) -> Self {
        Self { start, end }
    }

    pub const fn empty() -> Self {
        Self { start: 1, end: 0 }
    }

    pub fn is_empty(&self) -> bool {
        self.start > self.end
    }

    pub fn len(&self) -> usize {
        if self.is_empty() {
            0
        } else {
            (self.end - self.start) as usize + 1
        }
    }

    pub fn contains(&self, year: i32) -> bool {
        year >= self.start && year <= self.end
    }

    /// Years in ascending order.
    pub fn years(&self) -> std::ops::RangeInclusive<i32> {
        self.start..=self.end
    }

    /// Zero-based offset of `year` from `start`, if inside.
    pub fn offset(&self, year: i32) -> Option<usize> {
        self.contains(year).then(|| (year - self.start) as usize)
    }

    /// Whether every year of `other` lies inside `self`.
    pub fn covers(&self, other: &YearSpan) -> bool {
        other.is_empty() || (self.contains(other.start) && self.contains(other.end))
    }
}

impl fmt::Display for YearSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "(empty)")
        } else {
            write!(f, "{}..{}", self.start, self.end)
        }
    }
}
