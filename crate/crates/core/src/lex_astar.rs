//! Low-level planner: A* over time-augmented states `(v, t)` with vector
//! costs compared lexicographically.
//!
//! The open list pops the lexicographically smallest `f = g + h`; the closed
//! map keeps exactly one best `g` per state, which is sound because lex order
//! is total — no Pareto frontier per state is needed. Successors are the
//! 4-neighbors plus a wait action, skipping transitions forbidden by the
//! agent's constraints. A goal pop only succeeds if the agent can sit on the
//! goal forever, i.e. no vertex constraint mentions the goal at or after the
//! arrival time.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::collections::HashMap;
use std::time::Instant;

use crate::constraint::AgentConstraints;
use crate::cost::CostVector;
use crate::cost_model::CostModel;
use crate::graph::SearchGraph;
use crate::heuristic::HeuristicTable;
use crate::map::VertexId;

/// A vertex occupied at a discrete timestep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TimedState {
    pub vertex: VertexId,
    pub time: u32,
}

/// A single agent's timed path. Starts at time 0, consecutive times increase
/// by one, ends at the first safe goal arrival, and `cost` is the sum of
/// edge costs over its transitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    pub states: Vec<TimedState>,
    pub cost: CostVector,
}

impl Path {
    pub fn start(&self) -> VertexId {
        self.states[0].vertex
    }

    pub fn end(&self) -> VertexId {
        self.states[self.states.len() - 1].vertex
    }

    /// Arrival time at the end of the path.
    pub fn final_time(&self) -> u32 {
        self.states[self.states.len() - 1].time
    }

    /// Occupied vertex at `t`, holding the final vertex forever afterwards.
    pub fn vertex_at(&self, t: u32) -> VertexId {
        let idx = (t as usize).min(self.states.len() - 1);
        self.states[idx].vertex
    }
}

/// Counters for one or more low-level searches.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LowLevelStats {
    pub expanded: u64,
    pub generated: u64,
    pub reopened: u64,
    pub heap_pushes: u64,
    pub heap_pops: u64,
}

impl LowLevelStats {
    pub fn heap_ops(&self) -> u64 {
        self.heap_pushes + self.heap_pops
    }

    pub fn absorb(&mut self, other: &LowLevelStats) {
        self.expanded += other.expanded;
        self.generated += other.generated;
        self.reopened += other.reopened;
        self.heap_pushes += other.heap_pushes;
        self.heap_pops += other.heap_pops;
    }
}

/// The wall-clock deadline passed down from the solver was exceeded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("search deadline exceeded")]
pub struct DeadlineExceeded;

struct OpenEntry {
    f: CostVector,
    g: CostVector,
    state: TimedState,
}

// Pop order: lex-min f, then lex-min g (more settled), then larger t, then
// smaller vertex id. Fixed tie-breaking keeps node counts reproducible.
fn min_order(a: &OpenEntry, b: &OpenEntry) -> Ordering {
    a.f.lex_cmp(&b.f)
        .then_with(|| a.g.lex_cmp(&b.g))
        .then_with(|| b.state.time.cmp(&a.state.time))
        .then_with(|| a.state.vertex.cmp(&b.state.vertex))
}

impl PartialEq for OpenEntry {
    fn eq(&self, other: &Self) -> bool {
        min_order(self, other) == Ordering::Equal
    }
}

impl Eq for OpenEntry {}

impl PartialOrd for OpenEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OpenEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // BinaryHeap pops the maximum; invert to get the lex minimum
        min_order(self, other).reverse()
    }
}

/// Searches for the lexicographically cheapest constraint-respecting path
/// from `(start, 0)` to `goal` within `horizon` timesteps.
///
/// Returns `Ok(None)` when no such path exists (including horizon
/// exhaustion) and `Err` only when `deadline` passes mid-search.
#[allow(clippy::too_many_arguments)]
pub fn lex_astar(
    graph: &SearchGraph,
    model: &CostModel,
    heuristic: &HeuristicTable,
    constraints: &AgentConstraints,
    start: VertexId,
    goal: VertexId,
    horizon: u32,
    deadline: Option<Instant>,
    stats: &mut LowLevelStats,
) -> Result<Option<Path>, DeadlineExceeded> {
    debug_assert_eq!(heuristic.goal(), goal);
    let Some(h_start) = heuristic.get(start) else {
        return Ok(None); // goal unreachable even without constraints
    };
    if constraints.forbids_vertex(start, 0) {
        return Ok(None);
    }

    let dim = model.objectives();
    let start_state = TimedState {
        vertex: start,
        time: 0,
    };
    let mut best_g: HashMap<TimedState, CostVector> = HashMap::new();
    let mut parent: HashMap<TimedState, TimedState> = HashMap::new();
    let mut open = BinaryHeap::new();

    best_g.insert(start_state, CostVector::zeros(dim));
    open.push(OpenEntry {
        f: h_start.clone(),
        g: CostVector::zeros(dim),
        state: start_state,
    });
    stats.heap_pushes += 1;

    // parking on the goal is safe only strictly after this time
    let goal_blocked_until = constraints.latest_vertex_time(goal);
    let goal_safe = |t: u32| goal_blocked_until.is_none_or(|latest| t > latest);

    #[cfg(debug_assertions)]
    let mut last_f: Option<CostVector> = None;

    while let Some(entry) = open.pop() {
        stats.heap_pops += 1;
        if let Some(deadline) = deadline {
            if Instant::now() >= deadline {
                return Err(DeadlineExceeded);
            }
        }
        // superseded by a lex-better g pushed later
        if best_g.get(&entry.state).is_some_and(|g| g.lex_lt(&entry.g)) {
            continue;
        }

        #[cfg(debug_assertions)]
        {
            // per-dimension consistency makes popped f lex-nondecreasing
            if let Some(prev) = &last_f {
                debug_assert!(
                    prev.lex_cmp(&entry.f) != Ordering::Greater,
                    "f regressed: {prev} -> {}",
                    entry.f
                );
            }
            last_f = Some(entry.f.clone());
        }

        let TimedState { vertex, time } = entry.state;
        if vertex == goal && goal_safe(time) {
            return Ok(Some(reconstruct(graph, model, &parent, entry.state)));
        }
        stats.expanded += 1;

        if time + 1 > horizon {
            continue;
        }
        let wait = [vertex];
        for &next in graph.neighbors(vertex).iter().chain(&wait) {
            if constraints.violates_transition(vertex, next, time) {
                continue;
            }
            let Some(h_next) = heuristic.get(next) else {
                continue; // dead end for this goal
            };
            stats.generated += 1;
            let successor = TimedState {
                vertex: next,
                time: time + 1,
            };
            let g_next = entry.g.add(&model.edge_cost(graph, vertex, next));
            match best_g.get(&successor) {
                Some(existing) if !g_next.lex_lt(existing) => continue,
                Some(_) => stats.reopened += 1,
                None => {}
            }
            let f_next = g_next.add(h_next);
            best_g.insert(successor, g_next.clone());
            parent.insert(successor, entry.state);
            open.push(OpenEntry {
                f: f_next,
                g: g_next,
                state: successor,
            });
            stats.heap_pushes += 1;
        }
    }
    Ok(None)
}

/// Walks parent links back to the start, then trims any trailing waits on
/// the goal so the path ends at its final goal arrival, recomputing the cost
/// over the remaining transitions.
fn reconstruct(
    graph: &SearchGraph,
    model: &CostModel,
    parent: &HashMap<TimedState, TimedState>,
    last: TimedState,
) -> Path {
    let mut states = vec![last];
    let mut cursor = last;
    while let Some(&prev) = parent.get(&cursor) {
        states.push(prev);
        cursor = prev;
    }
    states.reverse();

    let goal = last.vertex;
    let mut end = states.len() - 1;
    while end > 0 && states[end - 1].vertex == goal {
        end -= 1;
    }
    states.truncate(end + 1);

    let mut cost = CostVector::zeros(model.objectives());
    for pair in states.windows(2) {
        cost.add_assign(&model.edge_cost(graph, pair[0].vertex, pair[1].vertex));
    }
    Path { states, cost }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraint::{Constraint, ConstraintKind, ConstraintSet};
    use crate::graph::build_graph;
    use crate::heuristic::build_heuristic;
    use crate::map::parse_map;

    fn corridor3() -> (crate::map::GridMap, SearchGraph) {
        let map = parse_map("type octile\nheight 1\nwidth 3\nmap\n...\n").unwrap();
        let graph = build_graph(&map);
        (map, graph)
    }

    #[test]
    fn start_equals_goal_yields_empty_path() {
        let (map, graph) = corridor3();
        let model = CostModel::duplicated(2);
        let goal = map.vertex_at(1, 0).unwrap();
        let h = build_heuristic(&graph, &model, goal);
        let constraints = ConstraintSet::empty(1);
        let mut stats = LowLevelStats::default();
        let path = lex_astar(
            &graph,
            &model,
            &h,
            constraints.agent(0),
            goal,
            goal,
            8,
            None,
            &mut stats,
        )
        .unwrap()
        .unwrap();
        assert_eq!(
            path.states,
            vec![TimedState {
                vertex: goal,
                time: 0
            }]
        );
        assert!(path.cost.is_zero());
    }

    #[test]
    fn unconstrained_corridor_crossing() {
        let (map, graph) = corridor3();
        let model = CostModel::duplicated(2);
        let start = map.vertex_at(0, 0).unwrap();
        let goal = map.vertex_at(2, 0).unwrap();
        let h = build_heuristic(&graph, &model, goal);
        let constraints = ConstraintSet::empty(1);
        let mut stats = LowLevelStats::default();
        let path = lex_astar(
            &graph,
            &model,
            &h,
            constraints.agent(0),
            start,
            goal,
            8,
            None,
            &mut stats,
        )
        .unwrap()
        .unwrap();
        assert_eq!(path.cost, CostVector::new(vec![2, 2]));
        assert_eq!(path.states.len(), 3);
    }

    #[test]
    fn vertex_constraint_forces_a_wait() {
        let (map, graph) = corridor3();
        let model = CostModel::duplicated(2);
        let left = map.vertex_at(0, 0).unwrap();
        let middle = map.vertex_at(1, 0).unwrap();
        let right = map.vertex_at(2, 0).unwrap();
        let h = build_heuristic(&graph, &model, right);
        let mut constraints = ConstraintSet::empty(1);
        constraints.add(Constraint {
            agent: 0,
            kind: ConstraintKind::Vertex { v: middle, t: 1 },
        });
        let mut stats = LowLevelStats::default();
        let path = lex_astar(
            &graph,
            &model,
            &h,
            constraints.agent(0),
            left,
            right,
            8,
            None,
            &mut stats,
        )
        .unwrap()
        .unwrap();
        assert_eq!(path.cost, CostVector::new(vec![3, 3]));
        let expected: Vec<TimedState> = [(left, 0), (left, 1), (middle, 2), (right, 3)]
            .into_iter()
            .map(|(vertex, time)| TimedState { vertex, time })
            .collect();
        assert_eq!(path.states, expected);
    }

    #[test]
    fn goal_constraint_in_the_future_delays_arrival() {
        let (map, graph) = corridor3();
        let model = CostModel::duplicated(1);
        let left = map.vertex_at(0, 0).unwrap();
        let right = map.vertex_at(2, 0).unwrap();
        let h = build_heuristic(&graph, &model, right);
        let mut constraints = ConstraintSet::empty(1);
        // goal cell is forbidden at t=4: arriving at t=2 and parking would
        // collide, so the agent must be elsewhere at t=4
        constraints.add(Constraint {
            agent: 0,
            kind: ConstraintKind::Vertex { v: right, t: 4 },
        });
        let mut stats = LowLevelStats::default();
        let path = lex_astar(
            &graph,
            &model,
            &h,
            constraints.agent(0),
            left,
            right,
            16,
            None,
            &mut stats,
        )
        .unwrap()
        .unwrap();
        assert!(
            path.final_time() >= 5,
            "arrived at {} while goal blocked at t=4",
            path.final_time()
        );
        assert_eq!(path.end(), right);
        // no trailing waits on the goal
        assert_ne!(path.states[path.states.len() - 2].vertex, right);
    }

    #[test]
    fn infeasible_constraints_exhaust_the_horizon() {
        let (map, graph) = corridor3();
        let model = CostModel::duplicated(1);
        let left = map.vertex_at(0, 0).unwrap();
        let right = map.vertex_at(2, 0).unwrap();
        let h = build_heuristic(&graph, &model, right);
        let mut constraints = ConstraintSet::empty(1);
        for t in 0..32 {
            constraints.add(Constraint {
                agent: 0,
                kind: ConstraintKind::Vertex { v: right, t },
            });
        }
        let mut stats = LowLevelStats::default();
        // horizon below the last goal constraint: parking is never safe
        let result = lex_astar(
            &graph,
            &model,
            &h,
            constraints.agent(0),
            left,
            right,
            10,
            None,
            &mut stats,
        )
        .unwrap();
        assert!(result.is_none());
    }

    #[test]
    fn disconnected_goal_is_no_path() {
        let map = parse_map("type octile\nheight 1\nwidth 3\nmap\n.@.\n").unwrap();
        let graph = build_graph(&map);
        let model = CostModel::duplicated(1);
        let start = map.vertex_at(0, 0).unwrap();
        let goal = map.vertex_at(2, 0).unwrap();
        let h = build_heuristic(&graph, &model, goal);
        let constraints = ConstraintSet::empty(1);
        let mut stats = LowLevelStats::default();
        let result = lex_astar(
            &graph,
            &model,
            &h,
            constraints.agent(0),
            start,
            goal,
            64,
            None,
            &mut stats,
        )
        .unwrap();
        assert!(result.is_none());
    }
}
