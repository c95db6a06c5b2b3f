//! Multi-objective multi-agent path finding with a lexicographic preference
//! order over objectives.
//!
//! Given a grid map, agent start/goal pairs, and `d` prioritized cost
//! objectives, [`cbs::lcbs_solve`] computes a conflict-free joint plan whose
//! total cost vector is lexicographically minimal. Both search levels order
//! their open lists by lexicographic comparison of vector costs: the
//! low-level planner ([`lex_astar::lex_astar`]) runs over time-augmented
//! states under a constraint set, and the high level resolves collisions by
//! binary constraint branching.
//!
//! [`oracle`] provides brute-force ground truth for desk-scale instances and
//! [`bench`] reproduces the success-rate and objective-scaling experiment
//! protocols.

pub mod bench;
pub mod cbs;
pub mod constraint;
pub mod cost;
pub mod cost_model;
pub mod graph;
pub mod heuristic;
pub mod lex_astar;
pub mod map;
pub mod oracle;
pub mod validate;

pub use cbs::{lcbs_solve, SolveOptions, SolveResult, SolveStatus};
pub use cost::CostVector;
pub use cost_model::{CostMode, CostModel};
pub use graph::{build_graph, SearchGraph};
pub use lex_astar::Path;
pub use map::{parse_map, parse_scen, AgentTask, GridMap, Scenario, VertexId};
