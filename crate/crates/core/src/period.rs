use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A half-open range of publication years `[start, end)`.
///
/// The text form `1985-1990` denotes `[1985, 1990)`. A two-digit end year
/// such as `1985-90` is read relative to the start year's century.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct YearRange {
    start: i32,
    end: i32,
}

impl YearRange {
    pub fn new(start: i32, end: i32) -> Result<Self> {
        if start < end {
            Ok(YearRange { start, end })
        } else {
            Err(Error::InvalidYearRange(format!("{start}-{end}")))
        }
    }

    pub fn start(&self) -> i32 {
        self.start
    }

    pub fn end(&self) -> i32 {
        self.end
    }

    pub fn contains(&self, year: i32) -> bool {
        self.start <= year && year < self.end
    }

    pub fn overlaps(&self, other: &YearRange) -> bool {
        self.start < other.end && other.start < self.end
    }

    /// Parses a comma-separated list of ranges.
    pub fn parse_list(s: &str) -> Result<Vec<YearRange>> {
        s.split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(str::parse)
            .collect()
    }
}

impl FromStr for YearRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidYearRange(s.to_string());
        let (a, b) = s.trim().split_once('-').ok_or_else(bad)?;
        let (a, b) = (a.trim(), b.trim());
        if a.is_empty() || b.is_empty() {
            return Err(bad());
        }
        let start: i32 = a.parse().map_err(|_| bad())?;
        let mut end: i32 = b.parse().map_err(|_| bad())?;
        if b.len() == 2 && a.len() == 4 {
            let century = start - start.rem_euclid(100);
            end += century;
            if end <= start {
                end += 100;
            }
        }
        YearRange::new(start, end).map_err(|_| bad())
    }
}

impl fmt::Display for YearRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.start, self.end)
    }
}

impl Serialize for YearRange {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for YearRange {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
