//! High-level search: a constraint tree over joint plans, popped in
//! lexicographic order of joint cost.
//!
//! Each node stores a joint plan, its summed cost vector, and the constraint
//! set its paths respect. Popping the lex-minimum node, the earliest conflict
//! (if any) splits it into two children, one per conflicting agent, each
//! adding a single time-indexed constraint and replanning only that agent.
//! The first conflict-free node popped is returned immediately.
//!
//! The search runs over plans whose makespan fits a per-solve horizon
//! (default `2|V| + 1`), which keeps the constraint universe finite: an
//! instance with no conflict-free plan inside the horizon exhausts the open
//! list and reports infeasibility instead of deepening forever.

use std::borrow::Borrow;
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::constraint::{Constraint, ConstraintKind, ConstraintSet};
use crate::cost::CostVector;
use crate::cost_model::CostModel;
use crate::graph::SearchGraph;
use crate::heuristic::{build_heuristic, HeuristicTable};
use crate::lex_astar::{lex_astar, LowLevelStats, Path};
use crate::map::{AgentTask, VertexId};

/// A detected collision between two agents' paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Conflict {
    pub kind: ConflictLocation,
    pub time: u32,
    pub agent_i: usize,
    pub agent_j: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConflictLocation {
    /// Both agents occupy `v` at `time`.
    Vertex(VertexId),
    /// Agent `i` moves `from -> to` while agent `j` moves `to -> from`
    /// between `time` and `time + 1`.
    Edge(VertexId, VertexId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Solved,
    Timeout,
    Infeasible,
}

#[derive(Debug, Clone, Default)]
pub struct SolveStats {
    pub hl_expanded: u64,
    pub hl_pushes: u64,
    pub hl_pops: u64,
    pub low_level: LowLevelStats,
    pub wall: Duration,
}

impl SolveStats {
    /// Total open-list operations at both levels; the unit the scaling
    /// experiment holds fixed across objective counts.
    pub fn heap_ops(&self) -> u64 {
        self.hl_pushes + self.hl_pops + self.low_level.heap_ops()
    }
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub plan: Option<Vec<Path>>,
    pub cost: Option<CostVector>,
    pub stats: SolveStats,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("no agent tasks given")]
    NoTasks,
    #[error("agents {0} and {1} share a start vertex")]
    DuplicateStart(usize, usize),
    #[error("agents {0} and {1} share a goal vertex")]
    DuplicateGoal(usize, usize),
}

#[derive(Debug, Clone, Default)]
pub struct SolveOptions {
    /// Wall-clock budget; `None` disables the check entirely.
    pub time_limit: Option<Duration>,
    /// Maximum path makespan; defaults to `2|V| + 1`.
    pub horizon: Option<u32>,
}

/// Scans timesteps in increasing order and reports the earliest conflict.
/// Agents that have reached their goal occupy it at all later times. Ties at
/// one timestep go to the lowest agent pair, vertex conflicts before edge
/// conflicts.
pub fn detect_first_conflict<P: Borrow<Path>>(paths: &[P]) -> Option<Conflict> {
    let n = paths.len();
    let max_finish = paths.iter().map(|p| p.borrow().final_time()).max()?;
    let at = |agent: usize, t: u32| paths[agent].borrow().vertex_at(t);

    for t in 0..=max_finish {
        for i in 0..n {
            for j in (i + 1)..n {
                if at(i, t) == at(j, t) {
                    return Some(Conflict {
                        kind: ConflictLocation::Vertex(at(i, t)),
                        time: t,
                        agent_i: i,
                        agent_j: j,
                    });
                }
                if t < max_finish {
                    let (a0, a1) = (at(i, t), at(i, t + 1));
                    let (b0, b1) = (at(j, t), at(j, t + 1));
                    if a0 == b1 && a1 == b0 && a0 != a1 {
                        return Some(Conflict {
                            kind: ConflictLocation::Edge(a0, a1),
                            time: t,
                            agent_i: i,
                            agent_j: j,
                        });
                    }
                }
            }
        }
    }
    None
}

/// The binary branching rule: one constraint per conflicting agent.
pub fn generate_constraints(conflict: &Conflict) -> [Constraint; 2] {
    match conflict.kind {
        ConflictLocation::Vertex(v) => [
            Constraint {
                agent: conflict.agent_i,
                kind: ConstraintKind::Vertex {
                    v,
                    t: conflict.time,
                },
            },
            Constraint {
                agent: conflict.agent_j,
                kind: ConstraintKind::Vertex {
                    v,
                    t: conflict.time,
                },
            },
        ],
        ConflictLocation::Edge(from, to) => [
            Constraint {
                agent: conflict.agent_i,
                kind: ConstraintKind::Edge {
                    from,
                    to,
                    t: conflict.time,
                },
            },
            Constraint {
                agent: conflict.agent_j,
                kind: ConstraintKind::Edge {
                    from: to,
                    to: from,
                    t: conflict.time,
                },
            },
        ],
    }
}

struct CtNode {
    plan: Vec<Arc<Path>>,
    cost: CostVector,
    constraints: ConstraintSet,
    constraint_count: usize,
    seq: u64,
}

// Pop order: lex-min joint cost, then fewer constraints, then FIFO.
fn ct_min_order(a: &CtNode, b: &CtNode) -> Ordering {
    a.cost
        .lex_cmp(&b.cost)
        .then_with(|| a.constraint_count.cmp(&b.constraint_count))
        .then_with(|| a.seq.cmp(&b.seq))
}

impl PartialEq for CtNode {
    fn eq(&self, other: &Self) -> bool {
        self.seq == other.seq
    }
}

impl Eq for CtNode {}

impl PartialOrd for CtNode {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CtNode {
    fn cmp(&self, other: &Self) -> Ordering {
        ct_min_order(self, other).reverse()
    }
}

fn joint_cost(plan: &[Arc<Path>], dim: usize) -> CostVector {
    let mut total = CostVector::zeros(dim);
    for path in plan {
        total.add_assign(&path.cost);
    }
    total
}

fn check_tasks(tasks: &[AgentTask]) -> Result<(), SolveError> {
    if tasks.is_empty() {
        return Err(SolveError::NoTasks);
    }
    for i in 0..tasks.len() {
        for j in (i + 1)..tasks.len() {
            if tasks[i].start == tasks[j].start {
                return Err(SolveError::DuplicateStart(i, j));
            }
            if tasks[i].goal == tasks[j].goal {
                return Err(SolveError::DuplicateGoal(i, j));
            }
        }
    }
    Ok(())
}

/// Solves the instance: finds a conflict-free joint plan whose total cost
/// vector is lexicographically minimal over all plans within the horizon.
pub fn lcbs_solve(
    graph: &SearchGraph,
    model: &CostModel,
    tasks: &[AgentTask],
    options: &SolveOptions,
) -> Result<SolveResult, SolveError> {
    check_tasks(tasks)?;
    let started = Instant::now();
    let deadline = options.time_limit.map(|limit| started + limit);
    let horizon = options
        .horizon
        .unwrap_or(2 * graph.num_vertices() as u32 + 1);
    let dim = model.objectives();

    let mut stats = SolveStats::default();
    let finish = |status: SolveStatus, node: Option<CtNode>, mut stats: SolveStats| {
        stats.wall = started.elapsed();
        SolveResult {
            status,
            cost: node.as_ref().map(|n| n.cost.clone()),
            plan: node.map(|n| n.plan.iter().map(|p| (**p).clone()).collect()),
            stats,
        }
    };

    let heuristics: Vec<HeuristicTable> = tasks
        .iter()
        .map(|task| build_heuristic(graph, model, task.goal))
        .collect();

    let root_constraints = ConstraintSet::empty(tasks.len());
    let mut root_plan = Vec::with_capacity(tasks.len());
    for (agent, task) in tasks.iter().enumerate() {
        let outcome = lex_astar(
            graph,
            model,
            &heuristics[agent],
            root_constraints.agent(agent),
            task.start,
            task.goal,
            horizon,
            deadline,
            &mut stats.low_level,
        );
        match outcome {
            Err(_) => return Ok(finish(SolveStatus::Timeout, None, stats)),
            Ok(None) => return Ok(finish(SolveStatus::Infeasible, None, stats)),
            Ok(Some(path)) => root_plan.push(Arc::new(path)),
        }
    }

    let mut open = BinaryHeap::new();
    let mut next_seq = 0u64;
    let root_cost = joint_cost(&root_plan, dim);
    open.push(CtNode {
        plan: root_plan,
        cost: root_cost,
        constraints: root_constraints,
        constraint_count: 0,
        seq: next_seq,
    });
    next_seq += 1;
    stats.hl_pushes += 1;

    while let Some(node) = open.pop() {
        stats.hl_pops += 1;
        if deadline.is_some_and(|d| Instant::now() >= d) {
            return Ok(finish(SolveStatus::Timeout, None, stats));
        }

        let Some(conflict) = detect_first_conflict(&node.plan) else {
            return Ok(finish(SolveStatus::Solved, Some(node), stats));
        };
        stats.hl_expanded += 1;

        for constraint in generate_constraints(&conflict) {
            let agent = constraint.agent;
            let mut child_constraints = node.constraints.clone();
            child_constraints.add(constraint);
            let outcome = lex_astar(
                graph,
                model,
                &heuristics[agent],
                child_constraints.agent(agent),
                tasks[agent].start,
                tasks[agent].goal,
                horizon,
                deadline,
                &mut stats.low_level,
            );
            match outcome {
                Err(_) => return Ok(finish(SolveStatus::Timeout, None, stats)),
                Ok(None) => continue, // constraint admits no path; drop the child
                Ok(Some(path)) => {
                    let mut plan = node.plan.clone();
                    plan[agent] = Arc::new(path);
                    let cost = joint_cost(&plan, dim);
                    debug_assert!(
                        node.cost.lex_cmp(&cost) != Ordering::Greater,
                        "child cost {cost} regressed below parent {}",
                        node.cost
                    );
                    open.push(CtNode {
                        plan,
                        cost,
                        constraints: child_constraints,
                        constraint_count: node.constraint_count + 1,
                        seq: next_seq,
                    });
                    next_seq += 1;
                    stats.hl_pushes += 1;
                }
            }
        }
    }
    Ok(finish(SolveStatus::Infeasible, None, stats))
}
