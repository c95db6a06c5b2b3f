//! Independent joint-plan checker.
//!
//! Deliberately shares no logic with the solver's conflict detector beyond
//! the data types: collisions are found by simulating per-timestep occupancy
//! maps rather than pairwise path scans, and costs are recomputed from the
//! cost model. An empty violation list certifies the plan.

use std::borrow::Borrow;
use std::collections::HashMap;
use std::fmt;

use crate::cost_model::CostModel;
use crate::graph::SearchGraph;
use crate::lex_astar::Path;
use crate::map::{AgentTask, VertexId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    PlanSizeMismatch {
        expected: usize,
        found: usize,
    },
    WrongStart {
        agent: usize,
    },
    WrongGoal {
        agent: usize,
    },
    BadTimestamps {
        agent: usize,
    },
    IllegalMove {
        agent: usize,
        time: u32,
    },
    CostMismatch {
        agent: usize,
    },
    VertexCollision {
        agent_a: usize,
        agent_b: usize,
        vertex: VertexId,
        time: u32,
    },
    EdgeCollision {
        agent_a: usize,
        agent_b: usize,
        from: VertexId,
        to: VertexId,
        time: u32,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::PlanSizeMismatch { expected, found } => {
                write!(f, "plan has {found} paths for {expected} agents")
            }
            Violation::WrongStart { agent } => {
                write!(f, "agent {agent} does not start at its start")
            }
            Violation::WrongGoal { agent } => write!(f, "agent {agent} does not end at its goal"),
            Violation::BadTimestamps { agent } => {
                write!(f, "agent {agent} has non-consecutive timestamps")
            }
            Violation::IllegalMove { agent, time } => {
                write!(f, "agent {agent} makes an illegal move at t={time}")
            }
            Violation::CostMismatch { agent } => {
                write!(f, "agent {agent} path cost does not match its transitions")
            }
            Violation::VertexCollision {
                agent_a,
                agent_b,
                vertex,
                time,
            } => {
                write!(
                    f,
                    "agents {agent_a} and {agent_b} collide at {vertex:?} t={time}"
                )
            }
            Violation::EdgeCollision {
                agent_a,
                agent_b,
                from,
                to,
                time,
            } => {
                write!(
                    f,
                    "agents {agent_a} and {agent_b} swap {from:?}<->{to:?} at t={time}"
                )
            }
        }
    }
}

/// Checks endpoints, move legality, path costs, and runs a full collision
/// scan with finished agents holding their goals.
pub fn validate_plan<P: Borrow<Path>>(
    plan: &[P],
    graph: &SearchGraph,
    model: &CostModel,
    tasks: &[AgentTask],
) -> Vec<Violation> {
    let mut violations = Vec::new();
    if plan.len() != tasks.len() {
        violations.push(Violation::PlanSizeMismatch {
            expected: tasks.len(),
            found: plan.len(),
        });
        return violations;
    }

    for (agent, (entry, task)) in plan.iter().zip(tasks).enumerate() {
        let path = entry.borrow();
        if path.states.is_empty() || path.states[0].vertex != task.start || path.states[0].time != 0
        {
            violations.push(Violation::WrongStart { agent });
            continue;
        }
        if path.end() != task.goal {
            violations.push(Violation::WrongGoal { agent });
        }
        if path
            .states
            .iter()
            .enumerate()
            .any(|(i, s)| s.time != i as u32)
        {
            violations.push(Violation::BadTimestamps { agent });
            continue;
        }
        let mut recomputed = crate::cost::CostVector::zeros(model.objectives());
        let mut legal = true;
        for pair in path.states.windows(2) {
            let (from, to) = (pair[0].vertex, pair[1].vertex);
            if from != to && !graph.are_adjacent(from, to) {
                violations.push(Violation::IllegalMove {
                    agent,
                    time: pair[0].time,
                });
                legal = false;
                break;
            }
            recomputed.add_assign(&model.edge_cost(graph, from, to));
        }
        if legal && recomputed != path.cost {
            violations.push(Violation::CostMismatch { agent });
        }
    }

    // Collision scan via occupancy maps, goals held after arrival.
    let horizon = plan
        .iter()
        .map(|p| p.borrow().final_time())
        .max()
        .unwrap_or(0);
    for t in 0..=horizon {
        let mut occupied: HashMap<VertexId, usize> = HashMap::new();
        for (agent, entry) in plan.iter().enumerate() {
            let here = entry.borrow().vertex_at(t);
            if let Some(&other) = occupied.get(&here) {
                violations.push(Violation::VertexCollision {
                    agent_a: other,
                    agent_b: agent,
                    vertex: here,
                    time: t,
                });
            } else {
                occupied.insert(here, agent);
            }
        }
        if t < horizon {
            let mut traversed: HashMap<(VertexId, VertexId), usize> = HashMap::new();
            for (agent, entry) in plan.iter().enumerate() {
                let from = entry.borrow().vertex_at(t);
                let to = entry.borrow().vertex_at(t + 1);
                if from == to {
                    continue;
                }
                if let Some(&other) = traversed.get(&(to, from)) {
                    violations.push(Violation::EdgeCollision {
                        agent_a: other,
                        agent_b: agent,
                        from: to,
                        to: from,
                        time: t,
                    });
                }
                traversed.insert((from, to), agent);
            }
        }
    }
    violations
}
