//! d-dimensional cost vectors under the lexicographic total order.
//!
//! Every comparison made by the planner — open-list ordering at both search
//! levels, closed-map improvement checks, optimality assertions — goes through
//! [`CostVector::lex_cmp`]. Components are unsigned integers so comparisons
//! and hashing are exact and platform independent; overflow is a hard error,
//! never a silent wraparound.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

/// A non-negative cost with one component per objective, index 0 being the
/// highest-priority objective.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CostVector {
    components: Vec<u64>,
}

impl CostVector {
    pub fn new(components: Vec<u64>) -> Self {
        assert!(
            !components.is_empty(),
            "cost vector needs at least one objective"
        );
        Self { components }
    }

    /// The zero vector of dimension `dim` (additive identity).
    pub fn zeros(dim: usize) -> Self {
        Self::new(vec![0; dim])
    }

    /// All components set to `value`.
    pub fn splat(value: u64, dim: usize) -> Self {
        Self::new(vec![value; dim])
    }

    /// Number of objectives.
    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[u64] {
        &self.components
    }

    pub fn component(&self, k: usize) -> u64 {
        self.components[k]
    }

    /// Lexicographic comparison: the first differing component decides.
    ///
    /// Total order over vectors of equal dimension. Comparing vectors of
    /// different dimension is a caller bug and panics rather than coercing.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        assert_eq!(
            self.dim(),
            other.dim(),
            "lexicographic comparison requires equal dimensions"
        );
        for (a, b) in self.components.iter().zip(&other.components) {
            match a.cmp(b) {
                Ordering::Equal => continue,
                diff => return diff,
            }
        }
        Ordering::Equal
    }

    pub fn lex_lt(&self, other: &Self) -> bool {
        self.lex_cmp(other) == Ordering::Less
    }

    /// Component-wise sum. Panics on dimension mismatch or overflow; a
    /// wrapped component would silently corrupt the lex order.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(
            self.dim(),
            other.dim(),
            "vector addition requires equal dimensions"
        );
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.checked_add(*b).expect("cost component overflow"))
            .collect();
        Self { components }
    }

    /// In-place component-wise sum with the same contract as [`Self::add`].
    pub fn add_assign(&mut self, other: &Self) {
        assert_eq!(
            self.dim(),
            other.dim(),
            "vector addition requires equal dimensions"
        );
        for (a, b) in self.components.iter_mut().zip(&other.components) {
            *a = a.checked_add(*b).expect("cost component overflow");
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|&c| c == 0)
    }
}

/// Renders as `{c0, c1, ..., c(d-1)}`.
impl fmt::Display for CostVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

/// Error from parsing the `{c0, c1, ...}` rendering.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid cost vector literal: {0}")]
pub struct ParseCostVectorError(String);

impl FromStr for CostVector {
    type Err = ParseCostVectorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim();
        let inner = trimmed
            .strip_prefix('{')
            .and_then(|rest| rest.strip_suffix('}'))
            .ok_or_else(|| ParseCostVectorError(s.to_string()))?;
        let components = inner
            .split(',')
            .map(|part| part.trim().parse::<u64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| ParseCostVectorError(s.to_string()))?;
        if components.is_empty() {
            return Err(ParseCostVectorError(s.to_string()));
        }
        Ok(Self::new(components))
    }
}
