//! Per-objective lower bounds on the remaining cost to a goal.
//!
//! Each component is the true single-objective shortest-path cost to the
//! goal, computed independently per dimension (the ideal point). That makes
//! the vector admissible and consistent per dimension even though no single
//! path may achieve all components at once. Constraints only remove options,
//! so one table per (agent goal, cost model) is valid for every node of the
//! constraint tree.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::cost::CostVector;
use crate::cost_model::CostModel;
use crate::graph::SearchGraph;
use crate::map::VertexId;

/// Per-vertex heuristic vectors toward one goal; `None` marks vertices from
/// which the goal is unreachable.
#[derive(Debug, Clone)]
pub struct HeuristicTable {
    goal: VertexId,
    costs: Vec<Option<CostVector>>,
}

impl HeuristicTable {
    pub fn goal(&self) -> VertexId {
        self.goal
    }

    pub fn get(&self, v: VertexId) -> Option<&CostVector> {
        self.costs[v.index()].as_ref()
    }

    pub fn is_reachable(&self, v: VertexId) -> bool {
        self.costs[v.index()].is_some()
    }
}

/// Runs one backward uniform-cost search per objective over move edges
/// (waiting never moves toward the goal) and assembles the results.
pub fn build_heuristic(graph: &SearchGraph, model: &CostModel, goal: VertexId) -> HeuristicTable {
    let n = graph.num_vertices();
    let d = model.objectives();
    let mut per_dim = vec![vec![u64::MAX; n]; d];

    for (k, dist) in per_dim.iter_mut().enumerate() {
        let mut heap: BinaryHeap<Reverse<(u64, u32)>> = BinaryHeap::new();
        dist[goal.index()] = 0;
        heap.push(Reverse((0, goal.0)));
        while let Some(Reverse((du, u))) = heap.pop() {
            let u = VertexId(u);
            if du > dist[u.index()] {
                continue;
            }
            for &v in graph.neighbors(u) {
                // edge costs are symmetric, so forward costs work backwards
                let step = model.edge_cost(graph, u, v).component(k);
                let dv = du + step;
                if dv < dist[v.index()] {
                    dist[v.index()] = dv;
                    heap.push(Reverse((dv, v.0)));
                }
            }
        }
    }

    let costs = (0..n)
        .map(|v| {
            if per_dim[0][v] == u64::MAX {
                None
            } else {
                Some(CostVector::new((0..d).map(|k| per_dim[k][v]).collect()))
            }
        })
        .collect();
    HeuristicTable { goal, costs }
}
