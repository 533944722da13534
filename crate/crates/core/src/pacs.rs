//! PACS subject codes truncated to the third hierarchy level, and the
//! tree distance between them.
//!
//! A code `AB.CD` sits at depth three of a positional hierarchy: the root,
//! the broad field `A`, the field `AB` and the subfield `AB.CD`. Because the
//! hierarchy is purely positional, the lowest common ancestor of two codes is
//! given by the length of their shared prefix and no taxonomy file is needed.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Depth of a truncated code below the root.
pub const DEPTH: u8 = 3;

/// Largest possible distance between two codes.
pub const MAX_DISTANCE: u32 = DEPTH as u32;

/// A PACS code truncated to level three, stored as its four digits.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PacsCode([u8; 4]);

impl PacsCode {
    /// Builds a code from its four digit values. Returns `None` if any value
    /// is above 9.
    pub fn from_digits(digits: [u8; 4]) -> Option<Self> {
        if digits.iter().all(|d| *d <= 9) {
            Some(PacsCode(digits.map(|d| b'0' + d)))
        } else {
            None
        }
    }

    /// Broad field digit.
    pub fn level1(&self) -> u8 {
        self.0[0] - b'0'
    }

    /// Field digit; together with [`level1`](Self::level1) it names the field.
    pub fn level2(&self) -> u8 {
        self.0[1] - b'0'
    }

    /// Two-digit subfield.
    pub fn level3(&self) -> &str {
        // always ASCII digits
        std::str::from_utf8(&self.0[2..]).unwrap()
    }

    /// Shared prefix depth of two codes: 3 when equal, 2 when they share the
    /// field, 1 when they share only the broad field, 0 otherwise.
    pub fn lca_level(&self, other: &PacsCode) -> u8 {
        if self.0[0] != other.0[0] {
            0
        } else if self.0[1] != other.0[1] {
            1
        } else if self.0[2..] != other.0[2..] {
            2
        } else {
            3
        }
    }

    /// Number of upward steps from either code to their lowest common ancestor.
    pub fn distance(&self, other: &PacsCode) -> u32 {
        u32::from(DEPTH - self.lca_level(other))
    }
}

/// Parses a PACS code, discarding anything past the third level.
///
/// The input must start (after trimming) with `AB.CD` where all four of
/// `A`, `B`, `C`, `D` are decimal digits. `"04.25.dg"` and `"04.25"` both
/// yield `04.25`.
pub fn parse_pacs(raw: &str) -> Result<PacsCode> {
    let malformed = |reason| Error::MalformedCode {
        raw: raw.to_string(),
        reason,
    };
    let s = raw.trim().as_bytes();
    if s.len() < 5 {
        return Err(malformed("shorter than AB.CD"));
    }
    if s[2] != b'.' {
        return Err(malformed("expected '.' after the first two digits"));
    }
    let digits = [s[0], s[1], s[3], s[4]];
    if !digits.iter().all(u8::is_ascii_digit) {
        return Err(malformed("non-digit in the first four positions"));
    }
    Ok(PacsCode(digits))
}

/// Returns the lowest common ancestor level of two codes.
pub fn lca_level(u: &PacsCode, v: &PacsCode) -> u8 {
    u.lca_level(v)
}

/// Returns the tree distance `3 - lca_level(u, v)`.
pub fn distance(u: &PacsCode, v: &PacsCode) -> u32 {
    u.distance(v)
}

/// Distance from `u` to its nearest member of `set`.
pub fn set_distance<'a, I>(u: &PacsCode, set: I) -> Result<u32>
where
    I: IntoIterator<Item = &'a PacsCode>,
{
    let mut best: Option<u32> = None;
    for v in set {
        let d = u.distance(v);
        if d == 0 {
            return Ok(0);
        }
        best = Some(best.map_or(d, |b| b.min(d)));
    }
    best.ok_or(Error::EmptySet)
}

impl fmt::Display for PacsCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = &self.0;
        write!(
            f,
            "{}{}.{}{}",
            d[0] as char, d[1] as char, d[2] as char, d[3] as char
        )
    }
}

impl fmt::Debug for PacsCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PacsCode({self})")
    }
}

impl FromStr for PacsCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_pacs(s)
    }
}

impl Serialize for PacsCode {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PacsCode {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_pacs(&s).map_err(serde::de::Error::custom)
    }
}

/// An optional list of codes known to a PACS revision. It is only used to
/// report unfamiliar codes and never influences distances.
#[derive(Debug, Clone, Default)]
pub struct KnownCodes(BTreeSet<PacsCode>);

impl KnownCodes {
    /// Reads one code per line. Blank lines and lines starting with `#` are
    /// skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut codes = BTreeSet::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let code = parse_pacs(line).map_err(|e| Error::Format {
                line: i + 1,
                message: e.to_string(),
            })?;
            codes.insert(code);
        }
        Ok(KnownCodes(codes))
    }

    pub fn contains(&self, code: &PacsCode) -> bool {
        self.0.contains(code)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<PacsCode> for KnownCodes {
    fn from_iter<T: IntoIterator<Item = PacsCode>>(iter: T) -> Self {
        KnownCodes(iter.into_iter().collect())
    }
}
