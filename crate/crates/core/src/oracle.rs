//! Brute-force ground truth for desk-scale instances.
//!
//! [`enumerate_joint_plans`] walks the joint time-expanded action space depth
//! first and returns the exact lexicographic minimum and the exact Pareto set
//! of valid joint-plan costs within a horizon. Three prunings keep it
//! tractable without losing exactness:
//!
//! * an agent that can no longer reach its goal in the remaining timesteps
//!   kills the branch (no valid plan survives it);
//! * a branch whose optimistic completion bound is dominated-or-equaled by an
//!   already recorded plan cost can only complete into dominated-or-duplicate
//!   cost vectors;
//! * revisiting a joint state with a component-wise worse-or-equal charged
//!   cost contributes nothing a previous visit did not.
//!
//! A hard budget on visited partial states aborts loudly instead of ever
//! returning a silently partial answer.
//!
//! Cost accounting matches the planner: an agent that reaches its goal and
//! never moves again accrues nothing from its arrival; waits at the goal are
//! charged retroactively if the agent later moves off to dodge. Everything
//! here is coded independently of the solver modules — including its own
//! distance tables — so agreement between the two routes is meaningful
//! evidence.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap, VecDeque};

use thiserror::Error;

use crate::cost::CostVector;
use crate::cost_model::CostModel;
use crate::graph::SearchGraph;
use crate::lex_astar::{Path, TimedState};
use crate::map::{AgentTask, VertexId};

/// Component-wise Pareto dominance: `a <= b` everywhere and `a != b`.
pub fn dominates(a: &CostVector, b: &CostVector) -> bool {
    assert_eq!(a.dim(), b.dim(), "dominance requires equal dimensions");
    let mut strictly_less = false;
    for (x, y) in a.components().iter().zip(b.components()) {
        if x > y {
            return false;
        }
        if x < y {
            strictly_less = true;
        }
    }
    strictly_less
}

fn dominates_or_equal(a: &CostVector, b: &CostVector) -> bool {
    a.components()
        .iter()
        .zip(b.components())
        .all(|(x, y)| x <= y)
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    /// Lexicographically minimal valid joint-plan cost, `None` if no valid
    /// plan exists within the horizon.
    pub lex_min_cost: Option<CostVector>,
    pub lex_min_plan: Option<Vec<Path>>,
    /// The exact set of non-dominated valid joint-plan costs, sorted
    /// lexicographically.
    pub pareto_costs: Vec<CostVector>,
    /// Complete valid plans recorded during the walk. Dominated branches are
    /// cut before completion, so this undercounts the raw plan space.
    pub plans_recorded: u64,
    pub states_visited: u64,
}

impl OracleResult {
    pub fn is_feasible(&self) -> bool {
        self.lex_min_cost.is_some()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle budget of {budget} partial states exceeded")]
    BudgetExceeded { budget: u64 },
}

pub const DEFAULT_BUDGET: u64 = 10_000_000;

fn scaled(v: &CostVector, k: u64) -> CostVector {
    CostVector::new(
        v.components()
            .iter()
            .map(|c| c.checked_mul(k).expect("cost component overflow"))
            .collect(),
    )
}

const UNREACHABLE: u32 = u32::MAX;

/// Minimum move counts to `goal` (waits excluded), by reverse BFS.
fn unit_distances(graph: &SearchGraph, goal: VertexId) -> Vec<u32> {
    let mut dist = vec![UNREACHABLE; graph.num_vertices()];
    let mut queue = VecDeque::new();
    dist[goal.index()] = 0;
    queue.push_back(goal);
    while let Some(v) = queue.pop_front() {
        for &u in graph.neighbors(v) {
            if dist[u.index()] == UNREACHABLE {
                dist[u.index()] = dist[v.index()] + 1;
                queue.push_back(u);
            }
        }
    }
    dist
}

/// Per-dimension cheapest move costs to `goal`, one Dijkstra per dimension.
fn dimension_distances(graph: &SearchGraph, model: &CostModel, goal: VertexId) -> Vec<Vec<u64>> {
    let n = graph.num_vertices();
    let mut out = vec![vec![u64::MAX; n]; model.objectives()];
    for (k, dist) in out.iter_mut().enumerate() {
        let mut heap: BinaryHeap<std::cmp::Reverse<(u64, u32)>> = BinaryHeap::new();
        dist[goal.index()] = 0;
        heap.push(std::cmp::Reverse((0, goal.0)));
        while let Some(std::cmp::Reverse((du, u))) = heap.pop() {
            let u = VertexId(u);
            if du > dist[u.index()] {
                continue;
            }
            for &v in graph.neighbors(u) {
                let dv = du + model.edge_cost(graph, u, v).component(k);
                if dv < dist[v.index()] {
                    dist[v.index()] = dv;
                    heap.push(std::cmp::Reverse((dv, v.0)));
                }
            }
        }
    }
    out
}

fn archive_insert(archive: &mut Vec<CostVector>, cost: &CostVector) {
    if archive.iter().any(|p| dominates_or_equal(p, cost)) {
        return;
    }
    archive.retain(|p| !dominates(cost, p));
    archive.push(cost.clone());
}

struct Enumerator<'a> {
    graph: &'a SearchGraph,
    model: &'a CostModel,
    tasks: &'a [AgentTask],
    horizon: u32,
    budget: u64,
    unit_dist: Vec<Vec<u32>>,
    dim_dist: Vec<Vec<Vec<u64>>>,
    goal_wait: Vec<CostVector>,
    // per-agent vertex occupied at each time 0..=t of the current branch
    histories: Vec<Vec<VertexId>>,
    archive: Vec<CostVector>,
    lex_min: Option<(CostVector, Vec<Path>)>,
    memo: HashMap<(Vec<VertexId>, Vec<u32>, u32), Vec<CostVector>>,
    states_visited: u64,
    plans_recorded: u64,
}

impl Enumerator<'_> {
    fn ideal_completion(&self, agent: usize, at: VertexId) -> Option<CostVector> {
        let per_dim = &self.dim_dist[agent];
        if per_dim[0][at.index()] == u64::MAX {
            return None;
        }
        Some(CostVector::new(
            (0..self.model.objectives())
                .map(|k| per_dim[k][at.index()])
                .collect(),
        ))
    }

    fn record(&mut self, t: u32, parked: &[u32], g: &CostVector) {
        let mut plan = Vec::with_capacity(self.tasks.len());
        for (agent, history) in self.histories.iter().enumerate() {
            let end = (t - parked[agent]) as usize;
            let states: Vec<TimedState> = history[..=end]
                .iter()
                .enumerate()
                .map(|(time, &vertex)| TimedState {
                    vertex,
                    time: time as u32,
                })
                .collect();
            let mut cost = CostVector::zeros(self.model.objectives());
            for pair in states.windows(2) {
                cost.add_assign(
                    &self
                        .model
                        .edge_cost(self.graph, pair[0].vertex, pair[1].vertex),
                );
            }
            plan.push(Path { states, cost });
        }
        debug_assert_eq!(
            plan.iter()
                .fold(CostVector::zeros(g.dim()), |acc, p| acc.add(&p.cost)),
            *g,
            "charged joint cost disagrees with trimmed path costs"
        );
        self.plans_recorded += 1;
        archive_insert(&mut self.archive, g);
        if self.lex_min.as_ref().is_none_or(|(best, _)| g.lex_lt(best)) {
            self.lex_min = Some((g.clone(), plan));
        }
    }

    fn dfs(&mut self, t: u32, parked: &[u32], g: &CostVector) -> Result<(), OracleError> {
        self.states_visited += 1;
        if self.states_visited > self.budget {
            return Err(OracleError::BudgetExceeded {
                budget: self.budget,
            });
        }

        let positions: Vec<VertexId> = self.histories.iter().map(|h| h[t as usize]).collect();
        let all_home = positions
            .iter()
            .zip(self.tasks)
            .all(|(&pos, task)| pos == task.goal);
        // a run of pure parked waits re-describes the plan recorded at the
        // run's first timestep
        if all_home && (t == 0 || parked.contains(&0)) {
            self.record(t, parked, g);
        }
        if t == self.horizon {
            return Ok(());
        }

        let remaining = self.horizon - t;
        let mut bound = g.clone();
        for (agent, &pos) in positions.iter().enumerate() {
            let d = self.unit_dist[agent][pos.index()];
            if d == UNREACHABLE || d > remaining {
                return Ok(()); // goal out of reach, no completion exists
            }
            match self.ideal_completion(agent, pos) {
                Some(h) => bound.add_assign(&h),
                None => return Ok(()),
            }
        }
        if self.archive.iter().any(|p| dominates_or_equal(p, &bound)) {
            return Ok(());
        }

        let memo_key = (positions.clone(), parked.to_vec(), t);
        match self.memo.get_mut(&memo_key) {
            Some(frontier) => {
                if frontier.iter().any(|prev| dominates_or_equal(prev, g)) {
                    return Ok(());
                }
                frontier.retain(|prev| !dominates_or_equal(g, prev));
                frontier.push(g.clone());
            }
            None => {
                self.memo.insert(memo_key, vec![g.clone()]);
            }
        }

        // per-agent candidate targets that can still make the horizon
        let mut candidates: Vec<Vec<VertexId>> = Vec::with_capacity(positions.len());
        for (agent, &pos) in positions.iter().enumerate() {
            let mut targets: Vec<VertexId> = Vec::new();
            for &next in self
                .graph
                .neighbors(pos)
                .iter()
                .chain(std::iter::once(&pos))
            {
                let d = self.unit_dist[agent][next.index()];
                if d != UNREACHABLE && d < remaining {
                    targets.push(next);
                }
            }
            if targets.is_empty() {
                return Ok(());
            }
            candidates.push(targets);
        }

        // cartesian product of per-agent moves, conflict-filtered; explore
        // cheap-looking joint moves first so the archive fills up early
        let mut ordered: Vec<(CostVector, Vec<VertexId>)> = Vec::new();
        let mut choice = vec![0usize; positions.len()];
        'joint: loop {
            let targets: Vec<VertexId> = choice
                .iter()
                .enumerate()
                .map(|(agent, &i)| candidates[agent][i])
                .collect();

            let mut valid = true;
            'pairs: for i in 0..targets.len() {
                for j in (i + 1)..targets.len() {
                    let vertex_hit = targets[i] == targets[j];
                    let swap = targets[i] == positions[j]
                        && targets[j] == positions[i]
                        && positions[i] != targets[i];
                    if vertex_hit || swap {
                        valid = false;
                        break 'pairs;
                    }
                }
            }
            if valid {
                let (g_next, _) = self.step_cost(&positions, parked, &targets, g);
                let mut key = g_next;
                for (agent, &next) in targets.iter().enumerate() {
                    key.add_assign(&self.ideal_completion(agent, next).expect("filtered above"));
                }
                ordered.push((key, targets));
            }

            for slot in (0..choice.len()).rev() {
                choice[slot] += 1;
                if choice[slot] < candidates[slot].len() {
                    continue 'joint;
                }
                choice[slot] = 0;
                if slot == 0 {
                    break 'joint;
                }
            }
        }
        ordered.sort_by(|a, b| a.0.lex_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));

        for (_, targets) in ordered {
            let (g_next, parked_next) = self.step_cost(&positions, parked, &targets, g);
            for (agent, &next) in targets.iter().enumerate() {
                self.histories[agent].push(next);
            }
            let result = self.dfs(t + 1, &parked_next, &g_next);
            for history in &mut self.histories {
                history.pop();
            }
            result?;
        }
        Ok(())
    }

    /// Charged cost and parked-run lengths after one joint step. A parked
    /// wait charges nothing yet; moving off the goal charges the deferred
    /// waits plus the move.
    fn step_cost(
        &self,
        positions: &[VertexId],
        parked: &[u32],
        targets: &[VertexId],
        g: &CostVector,
    ) -> (CostVector, Vec<u32>) {
        let mut g_next = g.clone();
        let mut parked_next = Vec::with_capacity(targets.len());
        for (agent, (&pos, &next)) in positions.iter().zip(targets).enumerate() {
            let goal = self.tasks[agent].goal;
            if pos == goal && next == goal {
                parked_next.push(parked[agent] + 1);
                continue;
            }
            if pos == goal && parked[agent] > 0 {
                g_next.add_assign(&scaled(&self.goal_wait[agent], parked[agent] as u64));
            }
            g_next.add_assign(&self.model.edge_cost(self.graph, pos, next));
            parked_next.push(0);
        }
        (g_next, parked_next)
    }
}

fn starts_collide(tasks: &[AgentTask]) -> bool {
    for i in 0..tasks.len() {
        for j in (i + 1)..tasks.len() {
            if tasks[i].start == tasks[j].start {
                return true;
            }
        }
    }
    false
}

/// Enumerates the joint plan space up to `horizon` and returns exact
/// lexicographic-minimum and Pareto-set ground truth.
pub fn enumerate_joint_plans(
    graph: &SearchGraph,
    model: &CostModel,
    tasks: &[AgentTask],
    horizon: u32,
    budget: u64,
) -> Result<OracleResult, OracleError> {
    assert!(!tasks.is_empty(), "oracle needs at least one task");
    if starts_collide(tasks) {
        return Ok(OracleResult {
            lex_min_cost: None,
            lex_min_plan: None,
            pareto_costs: Vec::new(),
            plans_recorded: 0,
            states_visited: 0,
        });
    }

    let mut enumerator = Enumerator {
        graph,
        model,
        tasks,
        horizon,
        budget,
        unit_dist: tasks
            .iter()
            .map(|task| unit_distances(graph, task.goal))
            .collect(),
        dim_dist: tasks
            .iter()
            .map(|task| dimension_distances(graph, model, task.goal))
            .collect(),
        goal_wait: tasks
            .iter()
            .map(|task| model.edge_cost(graph, task.goal, task.goal))
            .collect(),
        histories: tasks.iter().map(|task| vec![task.start]).collect(),
        archive: Vec::new(),
        lex_min: None,
        memo: HashMap::new(),
        states_visited: 0,
        plans_recorded: 0,
    };
    let parked = vec![0u32; tasks.len()];
    enumerator.dfs(0, &parked, &CostVector::zeros(model.objectives()))?;

    let mut pareto = enumerator.archive;
    pareto.sort_by(|a, b| a.lex_cmp(b));
    let (lex_min_cost, lex_min_plan) = match enumerator.lex_min {
        Some((cost, plan)) => (Some(cost), Some(plan)),
        None => (None, None),
    };
    Ok(OracleResult {
        lex_min_cost,
        lex_min_plan,
        pareto_costs: pareto,
        plans_recorded: enumerator.plans_recorded,
        states_visited: enumerator.states_visited,
    })
}

/// How a solver answer compares against oracle ground truth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Agreement {
    /// Solver cost lex-equals the oracle lex minimum (both absent counts:
    /// agreeing on infeasibility is agreement).
    pub lex_ok: bool,
    /// No enumerated valid plan component-wise dominates the solver cost.
    pub pareto_ok: bool,
}

impl Agreement {
    pub fn all_ok(&self) -> bool {
        self.lex_ok && self.pareto_ok
    }
}

/// Compares a solver's joint cost (`None` = solver found no plan) with the
/// enumerated ground truth.
pub fn check_agreement(solver_cost: Option<&CostVector>, oracle: &OracleResult) -> Agreement {
    let lex_ok = match (solver_cost, oracle.lex_min_cost.as_ref()) {
        (Some(solved), Some(lex_min)) => solved.lex_cmp(lex_min) == Ordering::Equal,
        (None, None) => true,
        _ => false,
    };
    let pareto_ok = match solver_cost {
        Some(solved) => !oracle.pareto_costs.iter().any(|p| dominates(p, solved)),
        None => oracle.lex_min_cost.is_none(),
    };
    Agreement { lex_ok, pareto_ok }
}

/// Second, independently coded route to the lexicographic minimum: A* over
/// joint states ordered by lex `f`, sharing no search code with the
/// enumerator or the solver.
pub fn joint_lex_astar(
    graph: &SearchGraph,
    model: &CostModel,
    tasks: &[AgentTask],
    horizon: u32,
) -> Option<CostVector> {
    #[derive(PartialEq, Eq, Hash, Clone)]
    struct JointState {
        positions: Vec<VertexId>,
        parked: Vec<u32>,
        t: u32,
    }

    struct Entry {
        f: CostVector,
        g: CostVector,
        state: JointState,
    }

    impl PartialEq for Entry {
        fn eq(&self, other: &Self) -> bool {
            self.f == other.f && self.g == other.g
        }
    }
    impl Eq for Entry {}
    impl PartialOrd for Entry {
        fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
            Some(self.cmp(other))
        }
    }
    impl Ord for Entry {
        fn cmp(&self, other: &Self) -> Ordering {
            // max-heap: invert for lex-min f, break ties on g
            self.f
                .lex_cmp(&other.f)
                .then_with(|| self.g.lex_cmp(&other.g))
                .reverse()
        }
    }

    assert!(!tasks.is_empty(), "oracle needs at least one task");
    if starts_collide(tasks) {
        return None;
    }
    let dim = model.objectives();
    let unit_dist: Vec<Vec<u32>> = tasks
        .iter()
        .map(|task| unit_distances(graph, task.goal))
        .collect();
    let dim_dist: Vec<Vec<Vec<u64>>> = tasks
        .iter()
        .map(|task| dimension_distances(graph, model, task.goal))
        .collect();
    let goal_wait: Vec<CostVector> = tasks
        .iter()
        .map(|task| model.edge_cost(graph, task.goal, task.goal))
        .collect();

    let heuristic = |positions: &[VertexId]| -> Option<CostVector> {
        let mut h = CostVector::zeros(dim);
        for (agent, &pos) in positions.iter().enumerate() {
            if dim_dist[agent][0][pos.index()] == u64::MAX {
                return None;
            }
            h.add_assign(&CostVector::new(
                (0..dim).map(|k| dim_dist[agent][k][pos.index()]).collect(),
            ));
        }
        Some(h)
    };

    let start = JointState {
        positions: tasks.iter().map(|t| t.start).collect(),
        parked: vec![0; tasks.len()],
        t: 0,
    };
    let h0 = heuristic(&start.positions)?;
    let mut best: HashMap<JointState, CostVector> = HashMap::new();
    let mut open = BinaryHeap::new();
    best.insert(start.clone(), CostVector::zeros(dim));
    open.push(Entry {
        f: h0,
        g: CostVector::zeros(dim),
        state: start,
    });

    while let Some(Entry { g, state, .. }) = open.pop() {
        if best.get(&state).is_some_and(|known| known.lex_lt(&g)) {
            continue;
        }
        if state
            .positions
            .iter()
            .zip(tasks)
            .all(|(&pos, task)| pos == task.goal)
        {
            return Some(g);
        }
        if state.t == horizon {
            continue;
        }
        let remaining = horizon - state.t;

        let mut candidates: Vec<Vec<VertexId>> = Vec::with_capacity(tasks.len());
        for (agent, &pos) in state.positions.iter().enumerate() {
            let mut targets = Vec::new();
            for &next in graph.neighbors(pos).iter().chain(std::iter::once(&pos)) {
                let d = unit_dist[agent][next.index()];
                if d != UNREACHABLE && d < remaining {
                    targets.push(next);
                }
            }
            candidates.push(targets);
        }
        if candidates.iter().any(|c| c.is_empty()) {
            continue;
        }

        let mut choice = vec![0usize; tasks.len()];
        'joint: loop {
            let targets: Vec<VertexId> = choice
                .iter()
                .enumerate()
                .map(|(agent, &i)| candidates[agent][i])
                .collect();
            let mut valid = true;
            'pairs: for i in 0..targets.len() {
                for j in (i + 1)..targets.len() {
                    if targets[i] == targets[j]
                        || (targets[i] == state.positions[j]
                            && targets[j] == state.positions[i]
                            && state.positions[i] != targets[i])
                    {
                        valid = false;
                        break 'pairs;
                    }
                }
            }
            if valid {
                let mut g_next = g.clone();
                let mut parked_next = Vec::with_capacity(tasks.len());
                for (agent, (&pos, &next)) in state.positions.iter().zip(&targets).enumerate() {
                    let goal = tasks[agent].goal;
                    if pos == goal && next == goal {
                        parked_next.push(state.parked[agent] + 1);
                        continue;
                    }
                    if pos == goal && state.parked[agent] > 0 {
                        g_next.add_assign(&scaled(&goal_wait[agent], state.parked[agent] as u64));
                    }
                    g_next.add_assign(&model.edge_cost(graph, pos, next));
                    parked_next.push(0);
                }
                let successor = JointState {
                    positions: targets,
                    parked: parked_next,
                    t: state.t + 1,
                };
                let improved = match best.get(&successor) {
                    Some(known) => g_next.lex_lt(known),
                    None => true,
                };
                if improved {
                    if let Some(h) = heuristic(&successor.positions) {
                        best.insert(successor.clone(), g_next.clone());
                        open.push(Entry {
                            f: g_next.add(&h),
                            g: g_next,
                            state: successor,
                        });
                    }
                }
            }

            for slot in (0..choice.len()).rev() {
                choice[slot] += 1;
                if choice[slot] < candidates[slot].len() {
                    continue 'joint;
                }
                choice[slot] = 0;
                if slot == 0 {
                    break 'joint;
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use crate::map::parse_map;

    fn cv(components: &[u64]) -> CostVector {
        CostVector::new(components.to_vec())
    }

    #[test]
    fn dominance_examples() {
        assert!(dominates(&cv(&[1, 2]), &cv(&[2, 2])));
        assert!(!dominates(&cv(&[1, 3]), &cv(&[2, 2])));
        assert!(!dominates(&cv(&[1, 2]), &cv(&[1, 2])));
    }

    #[test]
    fn single_agent_two_cell_corridor() {
        let map = parse_map("type octile\nheight 1\nwidth 2\nmap\n..\n").unwrap();
        let graph = build_graph(&map);
        let model = CostModel::duplicated(2);
        let tasks = [AgentTask {
            agent_id: 0,
            start: map.vertex_at(0, 0).unwrap(),
            goal: map.vertex_at(1, 0).unwrap(),
        }];
        let result = enumerate_joint_plans(&graph, &model, &tasks, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(result.lex_min_cost, Some(cv(&[1, 1])));
        assert_eq!(result.pareto_costs, vec![cv(&[1, 1])]);
        let plan = result.lex_min_plan.unwrap();
        assert_eq!(plan[0].states.len(), 2);
        assert_eq!(
            joint_lex_astar(&graph, &model, &tasks, 2),
            Some(cv(&[1, 1]))
        );
    }

    #[test]
    fn head_on_corridor_has_zero_plans() {
        let map = parse_map("type octile\nheight 1\nwidth 3\nmap\n...\n").unwrap();
        let graph = build_graph(&map);
        let model = CostModel::duplicated(1);
        let tasks = [
            AgentTask {
                agent_id: 0,
                start: map.vertex_at(0, 0).unwrap(),
                goal: map.vertex_at(2, 0).unwrap(),
            },
            AgentTask {
                agent_id: 1,
                start: map.vertex_at(2, 0).unwrap(),
                goal: map.vertex_at(0, 0).unwrap(),
            },
        ];
        for horizon in [4, 8, 12] {
            let result =
                enumerate_joint_plans(&graph, &model, &tasks, horizon, DEFAULT_BUDGET).unwrap();
            assert!(!result.is_feasible());
            assert_eq!(result.plans_recorded, 0);
            assert_eq!(joint_lex_astar(&graph, &model, &tasks, horizon), None);
        }
    }

    #[test]
    fn crossing_instance_agrees_with_solver() {
        let map = parse_map("type octile\nheight 2\nwidth 3\nmap\n...\n...\n").unwrap();
        let graph = build_graph(&map);
        let model = CostModel::duplicated(1);
        let tasks = [
            AgentTask {
                agent_id: 0,
                start: map.vertex_at(0, 1).unwrap(),
                goal: map.vertex_at(2, 1).unwrap(),
            },
            AgentTask {
                agent_id: 1,
                start: map.vertex_at(2, 1).unwrap(),
                goal: map.vertex_at(0, 1).unwrap(),
            },
        ];
        let oracle = enumerate_joint_plans(&graph, &model, &tasks, 8, DEFAULT_BUDGET).unwrap();
        assert_eq!(oracle.lex_min_cost, Some(cv(&[6])));
        assert_eq!(joint_lex_astar(&graph, &model, &tasks, 8), Some(cv(&[6])));

        let solved = crate::cbs::lcbs_solve(
            &graph,
            &model,
            &tasks,
            &crate::cbs::SolveOptions {
                time_limit: None,
                horizon: Some(8),
            },
        )
        .unwrap();
        assert_eq!(solved.cost, oracle.lex_min_cost);
    }

    #[test]
    fn pareto_set_is_internally_consistent() {
        let map = parse_map("type octile\nheight 2\nwidth 4\nmap\n....\n....\n").unwrap();
        let graph = build_graph(&map);
        let model = CostModel::unit_first(2, 1234);
        let tasks = [
            AgentTask {
                agent_id: 0,
                start: map.vertex_at(0, 0).unwrap(),
                goal: map.vertex_at(3, 0).unwrap(),
            },
            AgentTask {
                agent_id: 1,
                start: map.vertex_at(3, 1).unwrap(),
                goal: map.vertex_at(0, 1).unwrap(),
            },
        ];
        let result = enumerate_joint_plans(&graph, &model, &tasks, 10, DEFAULT_BUDGET).unwrap();
        let lex_min = result.lex_min_cost.clone().unwrap();
        assert!(result.pareto_costs.contains(&lex_min));
        for (i, a) in result.pareto_costs.iter().enumerate() {
            for (j, b) in result.pareto_costs.iter().enumerate() {
                if i != j {
                    assert!(!dominates(a, b), "{a} dominates {b} inside the Pareto set");
                }
            }
        }
        assert_eq!(joint_lex_astar(&graph, &model, &tasks, 10), Some(lex_min));
    }

    #[test]
    fn corrupted_solver_cost_is_caught() {
        // agreement checking must actually fire on wrong answers
        let map = parse_map("type octile\nheight 2\nwidth 3\nmap\n...\n...\n").unwrap();
        let graph = build_graph(&map);
        let model = CostModel::duplicated(1);
        let tasks = [
            AgentTask {
                agent_id: 0,
                start: map.vertex_at(0, 1).unwrap(),
                goal: map.vertex_at(2, 1).unwrap(),
            },
            AgentTask {
                agent_id: 1,
                start: map.vertex_at(2, 1).unwrap(),
                goal: map.vertex_at(0, 1).unwrap(),
            },
        ];
        let oracle = enumerate_joint_plans(&graph, &model, &tasks, 8, DEFAULT_BUDGET).unwrap();
        let honest = check_agreement(oracle.lex_min_cost.as_ref(), &oracle);
        assert!(honest.all_ok());

        let too_high = cv(&[7]);
        let tampered = check_agreement(Some(&too_high), &oracle);
        assert!(!tampered.lex_ok);
        assert!(
            !tampered.pareto_ok,
            "{too_high} should be dominated by the true optimum"
        );

        let claims_infeasible = check_agreement(None, &oracle);
        assert!(!claims_infeasible.lex_ok);
    }

    #[test]
    fn budget_overrun_is_an_explicit_abort() {
        let map = parse_map("type octile\nheight 3\nwidth 3\nmap\n...\n...\n...\n").unwrap();
        let graph = build_graph(&map);
        let model = CostModel::unit_first(2, 5);
        let tasks = [
            AgentTask {
                agent_id: 0,
                start: map.vertex_at(0, 0).unwrap(),
                goal: map.vertex_at(2, 2).unwrap(),
            },
            AgentTask {
                agent_id: 1,
                start: map.vertex_at(2, 0).unwrap(),
                goal: map.vertex_at(0, 2).unwrap(),
            },
        ];
        let result = enumerate_joint_plans(&graph, &model, &tasks, 12, 3);
        assert_eq!(
            result.unwrap_err(),
            OracleError::BudgetExceeded { budget: 3 }
        );
    }

    #[test]
    fn parked_agent_dodging_charges_intermediate_waits() {
        // pocket below the corridor: agent 0 parks mid-corridor, agent 1 must
        // pass through, so agent 0 dips into the pocket and returns
        let map = parse_map("type octile\nheight 2\nwidth 3\nmap\n...\n@.@\n").unwrap();
        let graph = build_graph(&map);
        let model = CostModel::duplicated(1);
        let tasks = [
            AgentTask {
                agent_id: 0,
                start: map.vertex_at(0, 0).unwrap(),
                goal: map.vertex_at(1, 0).unwrap(),
            },
            AgentTask {
                agent_id: 1,
                start: map.vertex_at(2, 0).unwrap(),
                goal: map.vertex_at(0, 0).unwrap(),
            },
        ];
        let result = enumerate_joint_plans(&graph, &model, &tasks, 8, DEFAULT_BUDGET).unwrap();
        assert!(result.is_feasible());
        let solved = crate::cbs::lcbs_solve(
            &graph,
            &model,
            &tasks,
            &crate::cbs::SolveOptions {
                time_limit: None,
                horizon: Some(8),
            },
        )
        .unwrap();
        assert_eq!(solved.cost, result.lex_min_cost);
        assert_eq!(
            joint_lex_astar(&graph, &model, &tasks, 8),
            result.lex_min_cost
        );
        let violations =
            crate::validate::validate_plan(&result.lex_min_plan.unwrap(), &graph, &model, &tasks);
        assert!(
            violations.is_empty(),
            "oracle plan violates validity: {}",
            violations[0]
        );
    }
}
