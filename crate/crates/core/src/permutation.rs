//! One-line permutations, strip decomposition and reversal counting.
//!
//! A *strip* is a maximal run of positions whose values increase by exactly
//! one, i.e. a maximal substring of the permutation that is also a substring
//! of the identity. A *reversal* (descent) is an adjacent pair `a_i > a_{i+1}`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised while building a [`Permutation`] from raw input.
///
/// Positions are 1-based, matching the interchange formats.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty permutation")]
    Empty,
    #[error("token {token:?} at position {position} is not a non-negative integer")]
    NotAnInteger { position: usize, token: String },
    #[error("value {value} at position {position} is outside 1..={n}")]
    OutOfRange { position: usize, value: u64, n: usize },
    #[error("duplicate value {value} at position {position} (first seen at position {first})")]
    Duplicate {
        position: usize,
        first: usize,
        value: u32,
    },
}

/// A permutation of `{1..n}` in one-line notation, `n >= 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u32>")]
pub struct Permutation {
    elements: Vec<u32>,
}

impl Permutation {
    /// Validates `elements` as a permutation of `1..=elements.len()`.
    pub fn new(elements: Vec<u32>) -> Result<Self, ParseError> {
        Self::validate(elements.iter().map(|&v| u64::from(v)))?;
        Ok(Self { elements })
    }

    fn validate(values: impl ExactSizeIterator<Item = u64>) -> Result<(), ParseError> {
        let n = values.len();
        if n == 0 {
            return Err(ParseError::Empty);
        }
        let mut seen = vec![0usize; n + 1];
        for (idx, value) in values.enumerate() {
            let position = idx + 1;
            if value == 0 || value > n as u64 {
                return Err(ParseError::OutOfRange { position, value, n });
            }
            let slot = &mut seen[value as usize];
            if *slot != 0 {
                return Err(ParseError::Duplicate {
                    position,
                    first: *slot,
                    value: value as u32,
                });
            }
            *slot = position;
        }
        Ok(())
    }

    /// Builds a permutation without validation. Callers guarantee bijectivity.
    pub(crate) fn from_vec_unchecked(elements: Vec<u32>) -> Self {
        debug_assert!(Self::validate(elements.iter().map(|&v| u64::from(v))).is_ok());
        Self { elements }
    }

    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "identity of size 0 is not a permutation");
        Self {
            elements: (1..=n as u32).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    /// Always false; kept for the `len`/`is_empty` pairing.
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.elements
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.elements
    }

    pub fn is_identity(&self) -> bool {
        is_sorted_identity(&self.elements)
    }

    pub fn strips(&self) -> StripDecomposition {
        StripDecomposition::of(&self.elements)
    }

    pub fn rev(&self) -> ReversalProfile {
        ReversalProfile::of(&self.elements)
    }

    /// Position (0-based) of every value: `positions()[v - 1]`.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.len()];
        for (i, &v) in self.elements.iter().enumerate() {
            pos[v as usize - 1] = i;
        }
        pos
    }
}

impl TryFrom<Vec<u64>> for Permutation {
    type Error = ParseError;

    fn try_from(values: Vec<u64>) -> Result<Self, Self::Error> {
        Self::validate(values.iter().copied())?;
        Ok(Self {
            elements: values.into_iter().map(|v| v as u32).collect(),
        })
    }
}

impl From<Permutation> for Vec<u32> {
    fn from(p: Permutation) -> Self {
        p.elements
    }
}

impl FromStr for Permutation {
    type Err = ParseError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        parse_permutation(text)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.elements {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{self}]")
    }
}

/// Parses whitespace-separated decimal integers into a validated permutation.
pub fn parse_permutation(text: &str) -> Result<Permutation, ParseError> {
    let mut values = Vec::new();
    for (idx, token) in text.split_whitespace().enumerate() {
        let value = token.parse::<u64>().map_err(|_| ParseError::NotAnInteger {
            position: idx + 1,
            token: token.to_string(),
        })?;
        values.push(value);
    }
    Permutation::try_from(values)
}

pub(crate) fn is_sorted_identity(elements: &[u32]) -> bool {
    elements.iter().enumerate().all(|(i, &v)| v as usize == i + 1)
}

/// One maximal strip: `len` positions starting at `start` (0-based) holding
/// `first, first + 1, ..., first + len - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Strip {
    pub start: usize,
    pub len: usize,
    pub first: u32,
}

impl Strip {
    pub fn end(&self) -> usize {
        self.start + self.len
    }

    pub fn last(&self) -> u32 {
        self.first + self.len as u32 - 1
    }

    pub fn range(&self) -> std::ops::Range<usize> {
        self.start..self.end()
    }
}

/// Ordered partition of the positions into maximal strips.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StripDecomposition {
    strips: Vec<Strip>,
}

impl StripDecomposition {
    pub fn of(elements: &[u32]) -> Self {
        let mut strips = Vec::new();
        strips_into(elements, &mut strips);
        Self { strips }
    }

    pub fn count(&self) -> usize {
        self.strips.len()
    }

    pub fn strips(&self) -> &[Strip] {
        &self.strips
    }

    pub fn get(&self, index: usize) -> Option<&Strip> {
        self.strips.get(index)
    }

    /// Index of the strip covering `position` (0-based).
    pub fn strip_at(&self, position: usize) -> Option<usize> {
        self.strips
            .binary_search_by(|s| {
                if s.end() <= position {
                    std::cmp::Ordering::Less
                } else if s.start > position {
                    std::cmp::Ordering::Greater
                } else {
                    std::cmp::Ordering::Equal
                }
            })
            .ok()
    }
}

/// Fills `out` with the strips of `elements`, reusing its allocation.
pub(crate) fn strips_into(elements: &[u32], out: &mut Vec<Strip>) {
    out.clear();
    let mut i = 0;
    while i < elements.len() {
        let start = i;
        while i + 1 < elements.len() && elements[i + 1] == elements[i] + 1 {
            i += 1;
        }
        out.push(Strip {
            start,
            len: i + 1 - start,
            first: elements[start],
        });
        i += 1;
    }
}

pub(crate) fn strip_count(elements: &[u32]) -> usize {
    if elements.is_empty() {
        return 0;
    }
    1 + elements.windows(2).filter(|w| w[1] != w[0] + 1).count()
}

pub(crate) fn rev_count(elements: &[u32]) -> usize {
    elements.windows(2).filter(|w| w[0] > w[1]).count()
}

/// Descent positions `i` (0-based, `a_i > a_{i+1}`) and their count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReversalProfile {
    pub descent_positions: Vec<usize>,
    pub rev: usize,
}

impl ReversalProfile {
    pub fn of(elements: &[u32]) -> Self {
        let descent_positions: Vec<usize> = elements
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[0] > w[1])
            .map(|(i, _)| i)
            .collect();
        let rev = descent_positions.len();
        Self {
            descent_positions,
            rev,
        }
    }
}

/// `ceil((#strips - 1) / 4)`: a swap merges at most four strip boundaries.
pub fn lower_bound_strips(p: &Permutation) -> usize {
    strip_bound(p.as_slice())
}

/// `ceil(rev / 2)`: a swap removes at most two descents.
pub fn lower_bound_rev(p: &Permutation) -> usize {
    rev_bound(p.as_slice())
}

pub(crate) fn strip_bound(elements: &[u32]) -> usize {
    (strip_count(elements) - 1).div_ceil(4)
}

pub(crate) fn rev_bound(elements: &[u32]) -> usize {
    rev_count(elements).div_ceil(2)
}
