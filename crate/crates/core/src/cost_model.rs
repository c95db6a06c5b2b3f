//! Edge-cost assignment for the objectives.
//!
//! Benchmark grids only define passability, so the per-objective costs are
//! synthesized here: objective 0 is travel time (one unit per move or wait),
//! and the remaining objectives draw deterministic pseudo-random integers
//! keyed by the undirected edge, so both directions cost the same and
//! repeated queries always agree. Every experiment output records the
//! `(seed, mode, range)` triple, which fully determines the assignment.

use std::str::FromStr;

use crate::cost::CostVector;
use crate::graph::SearchGraph;
use crate::map::VertexId;

/// splitmix64; the stream only has to be deterministic within this
/// implementation, not bit-compatible with anything else.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }
}

fn mix(seed: u64, a: u64, b: u64, k: u64) -> u64 {
    let mut s = SplitMix64::new(seed ^ a.rotate_left(17) ^ b.rotate_left(41) ^ k.rotate_left(7));
    s.next_u64()
}

/// How the d components of an edge cost are derived.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostMode {
    /// Component 0 is 1 (travel time); components 1..d are seeded integers
    /// in the configured range, keyed per undirected edge.
    UnitFirst,
    /// Every component equals component 0, i.e. all ones. Used by the
    /// objective-count scaling experiment so the search tree is identical
    /// across d.
    Duplicated,
}

impl FromStr for CostMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "unit-first" => Ok(CostMode::UnitFirst),
            "duplicated" => Ok(CostMode::Duplicated),
            other => Err(format!(
                "unknown cost mode `{other}` (expected unit-first or duplicated)"
            )),
        }
    }
}

impl CostMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CostMode::UnitFirst => "unit-first",
            CostMode::Duplicated => "duplicated",
        }
    }
}

/// Deterministic cost assignment for a problem instance.
#[derive(Debug, Clone)]
pub struct CostModel {
    objectives: usize,
    seed: u64,
    mode: CostMode,
    cost_lo: u64,
    cost_hi: u64,
    unit_waits: bool,
}

impl CostModel {
    /// `cost_range` is the inclusive interval for randomized objectives; the
    /// lower bound must be at least 1 so the time-expanded search stays
    /// well-founded.
    pub fn new(objectives: usize, seed: u64, mode: CostMode, cost_range: (u64, u64)) -> Self {
        assert!(objectives >= 1, "need at least one objective");
        let (lo, hi) = cost_range;
        assert!(lo >= 1 && lo <= hi, "cost range must satisfy 1 <= lo <= hi");
        Self {
            objectives,
            seed,
            mode,
            cost_lo: lo,
            cost_hi: hi,
            unit_waits: false,
        }
    }

    pub fn unit_first(objectives: usize, seed: u64) -> Self {
        Self::new(objectives, seed, CostMode::UnitFirst, (1, 10))
    }

    pub fn duplicated(objectives: usize) -> Self {
        Self::new(objectives, 0, CostMode::Duplicated, (1, 10))
    }

    /// Force wait actions to cost one unit in every objective, instead of
    /// drawing the secondary components from the seeded stream.
    pub fn with_unit_waits(mut self, unit_waits: bool) -> Self {
        self.unit_waits = unit_waits;
        self
    }

    pub fn objectives(&self) -> usize {
        self.objectives
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn mode(&self) -> CostMode {
        self.mode
    }

    pub fn cost_range(&self) -> (u64, u64) {
        (self.cost_lo, self.cost_hi)
    }

    /// Cost of moving `from -> to`, or of waiting when `from == to`.
    /// Pure in its arguments; symmetric in the edge direction.
    pub fn edge_cost(&self, graph: &SearchGraph, from: VertexId, to: VertexId) -> CostVector {
        assert!(
            from == to || graph.are_adjacent(from, to),
            "edge cost requested for non-adjacent pair {from:?} -> {to:?}"
        );
        match self.mode {
            CostMode::Duplicated => CostVector::splat(1, self.objectives),
            CostMode::UnitFirst => {
                let mut components = Vec::with_capacity(self.objectives);
                components.push(1);
                if self.objectives > 1 && from == to && self.unit_waits {
                    components.resize(self.objectives, 1);
                } else {
                    let a = from.0.min(to.0) as u64;
                    let b = from.0.max(to.0) as u64;
                    let span = self.cost_hi - self.cost_lo + 1;
                    for k in 1..self.objectives {
                        components.push(self.cost_lo + mix(self.seed, a, b, k as u64) % span);
                    }
                }
                CostVector::new(components)
            }
        }
    }
}
