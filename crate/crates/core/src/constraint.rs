//! Time-indexed vertex and edge prohibitions accumulated along a branch of
//! the constraint tree.

use std::collections::HashSet;

use crate::map::VertexId;

/// What a single constraint forbids for one agent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstraintKind {
    /// Forbids occupying `v` at time `t`.
    Vertex { v: VertexId, t: u32 },
    /// Forbids the transition that is at `from` at time `t` and at `to` at
    /// time `t + 1`.
    Edge {
        from: VertexId,
        to: VertexId,
        t: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub agent: usize,
    pub kind: ConstraintKind,
}

/// One agent's share of a constraint set, in the lookup shape the low-level
/// search needs.
#[derive(Debug, Clone, Default)]
pub struct AgentConstraints {
    vertices: HashSet<(VertexId, u32)>,
    edges: HashSet<(VertexId, VertexId, u32)>,
    latest_time: u32,
}

impl AgentConstraints {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.edges.is_empty()
    }

    pub fn len(&self) -> usize {
        self.vertices.len() + self.edges.len()
    }

    pub fn forbids_vertex(&self, v: VertexId, t: u32) -> bool {
        self.vertices.contains(&(v, t))
    }

    /// Whether the move or wait `(from, t) -> (to, t + 1)` is forbidden.
    pub fn violates_transition(&self, from: VertexId, to: VertexId, t: u32) -> bool {
        self.vertices.contains(&(to, t + 1)) || self.edges.contains(&(from, to, t))
    }

    /// Latest time any constraint mentions; 0 when empty.
    pub fn latest_time(&self) -> u32 {
        self.latest_time
    }

    /// Latest time a vertex constraint mentions `v`, if any. An agent can
    /// park on `v` forever only strictly after this time.
    pub fn latest_vertex_time(&self, v: VertexId) -> Option<u32> {
        self.vertices
            .iter()
            .filter(|(cv, _)| *cv == v)
            .map(|&(_, t)| t)
            .max()
    }

    fn add(&mut self, kind: ConstraintKind) {
        match kind {
            ConstraintKind::Vertex { v, t } => {
                self.vertices.insert((v, t));
                self.latest_time = self.latest_time.max(t);
            }
            ConstraintKind::Edge { from, to, t } => {
                self.edges.insert((from, to, t));
                self.latest_time = self.latest_time.max(t + 1);
            }
        }
    }
}

/// Per-agent constraint sets for a whole instance.
#[derive(Debug, Clone)]
pub struct ConstraintSet {
    per_agent: Vec<AgentConstraints>,
}

impl ConstraintSet {
    pub fn empty(num_agents: usize) -> Self {
        Self {
            per_agent: vec![AgentConstraints::default(); num_agents],
        }
    }

    pub fn add(&mut self, constraint: Constraint) {
        self.per_agent[constraint.agent].add(constraint.kind);
    }

    pub fn agent(&self, agent: usize) -> &AgentConstraints {
        &self.per_agent[agent]
    }

    pub fn total_len(&self) -> usize {
        self.per_agent.iter().map(AgentConstraints::len).sum()
    }
}
