//! Experiment harness: success rates under a wall-clock limit, and solver
//! runtime as a function of the objective count.
//!
//! Records stream out in a fixed (map, scenario, agents, objectives) order
//! regardless of the `jobs` setting, and with the time limit disabled the
//! emitted CSV is byte-identical across runs: wall times are then reported
//! as 0 because they are the one nondeterministic field.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path as FsPath, PathBuf};
use std::time::Duration;

use rayon::prelude::*;
use thiserror::Error;

use crate::cbs::{lcbs_solve, SolveOptions, SolveStatus};
use crate::cost::CostVector;
use crate::cost_model::{CostMode, CostModel};
use crate::graph::build_graph;
use crate::map::{parse_map, parse_scen, random_scenario, AgentTask, GridMap};
use crate::validate::validate_plan;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("cannot read {path}: {reason}")]
    Unreadable { path: PathBuf, reason: String },
    #[error("solved plan failed validation on {map} {scen} (agents={agents}, objectives={objectives}): {first}")]
    ValidationFailed {
        map: String,
        scen: String,
        agents: usize,
        objectives: usize,
        first: String,
    },
    #[error("scaling instance did not solve: {0:?}")]
    ScalingUnsolved(SolveStatus),
    #[error("output error: {0}")]
    Io(#[from] std::io::Error),
}

/// Where the per-map scenarios come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScenarioSource {
    /// MovingAI files named `<map-stem>-random-<k>.scen` in this directory.
    Files(PathBuf),
    /// Seeded sampling of distinct start/goal pairs; scenario `k` on every
    /// map uses `base_seed + k`.
    Generated { base_seed: u64 },
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub maps: Vec<PathBuf>,
    pub scenario_source: ScenarioSource,
    pub scenarios_per_map: usize,
    pub agent_counts: Vec<usize>,
    pub objective_counts: Vec<usize>,
    /// `None` disables the limit (and zeroes reported wall times).
    pub time_limit: Option<Duration>,
    pub cost_seed: u64,
    pub cost_mode: CostMode,
    pub cost_range: (u64, u64),
    pub jobs: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            maps: Vec::new(),
            scenario_source: ScenarioSource::Generated { base_seed: 1 },
            scenarios_per_map: 25,
            agent_counts: vec![2, 4, 6, 8],
            objective_counts: vec![3],
            time_limit: Some(Duration::from_secs(120)),
            cost_seed: 42,
            cost_mode: CostMode::UnitFirst,
            cost_range: (1, 10),
            jobs: 1,
        }
    }
}

impl ExperimentConfig {
    /// Applies one `key = value` setting (the config-file grammar; the CLI
    /// reuses it for flag overrides).
    pub fn apply(&mut self, key: &str, value: &str) -> Result<(), BenchError> {
        let bad = |what: &str| BenchError::InvalidConfig(format!("bad {what}: `{value}`"));
        match key {
            "maps" => {
                self.maps = value.split(',').map(|s| PathBuf::from(s.trim())).collect();
            }
            "scen_dir" => self.scenario_source = ScenarioSource::Files(PathBuf::from(value.trim())),
            "scenario_seed" => {
                self.scenario_source = ScenarioSource::Generated {
                    base_seed: value.trim().parse().map_err(|_| bad("scenario_seed"))?,
                }
            }
            "scenarios_per_map" => {
                self.scenarios_per_map =
                    value.trim().parse().map_err(|_| bad("scenarios_per_map"))?
            }
            "agents" => {
                self.agent_counts = value
                    .split(',')
                    .map(|s| s.trim().parse())
                    .collect::<Result<_, _>>()
                    .map_err(|_| bad("agents"))?
            }
            "objectives" => {
                self.objective_counts = value
                    .split(',')
                    .map(|s| s.trim().parse())
                    .collect::<Result<_, _>>()
                    .map_err(|_| bad("objectives"))?
            }
            "time_limit_s" => {
                let seconds: u64 = value.trim().parse().map_err(|_| bad("time_limit_s"))?;
                self.time_limit = (seconds > 0).then(|| Duration::from_secs(seconds));
            }
            "cost_seed" => self.cost_seed = value.trim().parse().map_err(|_| bad("cost_seed"))?,
            "cost_mode" => {
                self.cost_mode = value.trim().parse().map_err(BenchError::InvalidConfig)?
            }
            "cost_range" => self.cost_range = parse_cost_range(value)?,
            "jobs" => self.jobs = value.trim().parse().map_err(|_| bad("jobs"))?,
            other => {
                return Err(BenchError::InvalidConfig(format!("unknown key `{other}`")));
            }
        }
        Ok(())
    }

    /// Parses a flat `key = value` config file ('#' starts a comment).
    pub fn from_text(text: &str) -> Result<Self, BenchError> {
        let mut config = Self::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                BenchError::InvalidConfig(format!("line {}: expected key = value", idx + 1))
            })?;
            config.apply(key.trim(), value.trim())?;
        }
        Ok(config)
    }
}

pub fn parse_cost_range(value: &str) -> Result<(u64, u64), BenchError> {
    let err = || BenchError::InvalidConfig(format!("bad cost_range `{value}` (expected LO..HI)"));
    let (lo, hi) = value.trim().split_once("..").ok_or_else(err)?;
    let lo: u64 = lo.trim().parse().map_err(|_| err())?;
    let hi: u64 = hi.trim().parse().map_err(|_| err())?;
    if lo < 1 || lo > hi {
        return Err(err());
    }
    Ok((lo, hi))
}

pub const CSV_HEADER: &str = "map,scen,agents,objectives,seed,status,wall_ms,cost,hl_exp,ll_exp";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRecord {
    pub map: String,
    pub scen: String,
    pub agents: usize,
    pub objectives: usize,
    pub seed: u64,
    pub status: SolveStatus,
    pub wall_ms: u128,
    pub cost: Option<CostVector>,
    pub hl_exp: u64,
    pub ll_exp: u64,
}

pub fn status_name(status: SolveStatus) -> &'static str {
    match status {
        SolveStatus::Solved => "solved",
        SolveStatus::Timeout => "timeout",
        SolveStatus::Infeasible => "infeasible",
    }
}

impl BenchRecord {
    pub fn csv_row(&self) -> String {
        let cost = self
            .cost
            .as_ref()
            .map(|c| c.to_string())
            .unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},\"{}\",{},{}",
            self.map,
            self.scen,
            self.agents,
            self.objectives,
            self.seed,
            status_name(self.status),
            self.wall_ms,
            cost,
            self.hl_exp,
            self.ll_exp
        )
    }
}

pub fn records_to_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for record in records {
        out.push_str(&record.csv_row());
        out.push('\n');
    }
    out
}

#[derive(Debug)]
pub struct SuccessRateOutcome {
    pub records: Vec<BenchRecord>,
    /// Per-map problems (missing files etc.); the run continues past them.
    pub warnings: Vec<String>,
}

struct Job {
    map_name: String,
    scen_name: String,
    tasks: Vec<AgentTask>,
    agents: usize,
    objectives: usize,
}

fn map_stem(path: &FsPath) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "?".into())
}

fn load_scenarios(
    config: &ExperimentConfig,
    map_path: &FsPath,
    map: &GridMap,
    warnings: &mut Vec<String>,
) -> Vec<(String, crate::map::Scenario)> {
    let stem = map_stem(map_path);
    let mut out = Vec::new();
    for k in 1..=config.scenarios_per_map {
        match &config.scenario_source {
            ScenarioSource::Files(dir) => {
                let scen_path = dir.join(format!("{stem}-random-{k}.scen"));
                let text = match fs::read_to_string(&scen_path) {
                    Ok(text) => text,
                    Err(e) => {
                        warnings.push(format!("{}: {e}", scen_path.display()));
                        continue;
                    }
                };
                match parse_scen(&text, map) {
                    Ok(scen) => out.push((format!("{stem}-random-{k}"), scen)),
                    Err(e) => warnings.push(format!("{}: {e}", scen_path.display())),
                }
            }
            ScenarioSource::Generated { base_seed } => {
                let seed = base_seed + k as u64;
                let wanted = config.agent_counts.iter().copied().max().unwrap_or(1);
                match random_scenario(map, wanted, seed) {
                    Some(scen) => out.push((format!("gen-{seed}"), scen)),
                    None => warnings.push(format!(
                        "{stem}: cannot sample {wanted} tasks (map too small)"
                    )),
                }
            }
        }
    }
    out
}

/// Runs the success-rate protocol: for every (map, scenario, agent count,
/// objective count) cell, solve the first-n-tasks instance under the time
/// limit, validate any solution, and record the outcome.
pub fn run_success_rate(config: &ExperimentConfig) -> Result<SuccessRateOutcome, BenchError> {
    if config.maps.is_empty() {
        return Err(BenchError::InvalidConfig("no maps given".into()));
    }
    if config.agent_counts.is_empty() || config.objective_counts.is_empty() {
        return Err(BenchError::InvalidConfig(
            "agents and objectives must be non-empty".into(),
        ));
    }

    let mut warnings = Vec::new();
    let mut jobs = Vec::new();
    for map_path in &config.maps {
        let stem = map_stem(map_path);
        let text = match fs::read_to_string(map_path) {
            Ok(text) => text,
            Err(e) => {
                warnings.push(format!("{}: {e}", map_path.display()));
                continue;
            }
        };
        let map = match parse_map(&text) {
            Ok(map) => map,
            Err(e) => {
                warnings.push(format!("{}: {e}", map_path.display()));
                continue;
            }
        };
        let graph = build_graph(&map);
        for (scen_name, scenario) in load_scenarios(config, map_path, &map, &mut warnings) {
            for &agents in &config.agent_counts {
                let Some(tasks) = scenario.first_tasks(agents) else {
                    warnings.push(format!(
                        "{stem}/{scen_name}: only {} tasks, need {agents}",
                        scenario.tasks.len()
                    ));
                    continue;
                };
                for &objectives in &config.objective_counts {
                    jobs.push((
                        Job {
                            map_name: stem.clone(),
                            scen_name: scen_name.clone(),
                            tasks: tasks.to_vec(),
                            agents,
                            objectives,
                        },
                        graph.clone(),
                    ));
                }
            }
        }
    }

    let solve_job =
        |(job, graph): &(Job, crate::graph::SearchGraph)| -> Result<BenchRecord, BenchError> {
            let model = CostModel::new(
                job.objectives,
                config.cost_seed,
                config.cost_mode,
                config.cost_range,
            );
            let options = SolveOptions {
                time_limit: config.time_limit,
                horizon: None,
            };
            let result = lcbs_solve(graph, &model, &job.tasks, &options)
                .map_err(|e| BenchError::InvalidConfig(e.to_string()))?;
            if result.status == SolveStatus::Solved {
                let plan = result.plan.as_ref().expect("solved result carries a plan");
                let violations = validate_plan(plan, graph, &model, &job.tasks);
                if let Some(first) = violations.first() {
                    return Err(BenchError::ValidationFailed {
                        map: job.map_name.clone(),
                        scen: job.scen_name.clone(),
                        agents: job.agents,
                        objectives: job.objectives,
                        first: first.to_string(),
                    });
                }
            }
            Ok(BenchRecord {
                map: job.map_name.clone(),
                scen: job.scen_name.clone(),
                agents: job.agents,
                objectives: job.objectives,
                seed: config.cost_seed,
                status: result.status,
                wall_ms: if config.time_limit.is_some() {
                    result.stats.wall.as_millis()
                } else {
                    0
                },
                cost: result.cost,
                hl_exp: result.stats.hl_expanded,
                ll_exp: result.stats.low_level.expanded,
            })
        };

    let records: Result<Vec<BenchRecord>, BenchError> = if config.jobs <= 1 {
        jobs.iter().map(solve_job).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .map_err(|e| BenchError::InvalidConfig(e.to_string()))?;
        pool.install(|| jobs.par_iter().map(solve_job).collect())
    };
    Ok(SuccessRateOutcome {
        records: records?,
        warnings,
    })
}

/// Fraction solved per `(map, agents, objectives)` cell, as (solved, total).
pub fn success_rate_summary(
    records: &[BenchRecord],
) -> BTreeMap<(String, usize, usize), (usize, usize)> {
    let mut cells: BTreeMap<(String, usize, usize), (usize, usize)> = BTreeMap::new();
    for record in records {
        let cell = cells
            .entry((record.map.clone(), record.agents, record.objectives))
            .or_insert((0, 0));
        cell.1 += 1;
        if record.status == SolveStatus::Solved {
            cell.0 += 1;
        }
    }
    cells
}

#[derive(Debug, Clone)]
pub struct ScalingConfig {
    pub map: PathBuf,
    pub agents: usize,
    pub scenario_seed: u64,
    pub objective_counts: Vec<usize>,
    pub repetitions: usize,
    pub time_limit: Option<Duration>,
}

impl Default for ScalingConfig {
    fn default() -> Self {
        Self {
            map: PathBuf::new(),
            agents: 5,
            scenario_seed: 7,
            objective_counts: (2..=10).collect(),
            repetitions: 20,
            time_limit: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingRow {
    pub objectives: usize,
    pub mean_wall_ms: f64,
    /// Open-list pushes plus pops across both search levels; identical for
    /// every row when the measurement is sound.
    pub heap_ops: u64,
}

pub const SCALING_CSV_HEADER: &str = "objectives,mean_wall_ms,heap_ops";

pub fn scaling_to_csv(rows: &[ScalingRow]) -> String {
    let mut out = String::from(SCALING_CSV_HEADER);
    out.push('\n');
    for row in rows {
        let _ = writeln!(
            out,
            "{},{:.3},{}",
            row.objectives, row.mean_wall_ms, row.heap_ops
        );
    }
    out
}

/// Sweeps the objective count on one fixed instance. Duplicated costs are
/// forced (there is no mode knob here): randomized secondary objectives
/// would change the expansion order across d and confound the measurement,
/// while identical components keep the search tree fixed so only the
/// per-operation vector overhead varies.
pub fn run_scaling(config: &ScalingConfig) -> Result<Vec<ScalingRow>, BenchError> {
    if config.objective_counts.is_empty() || config.repetitions == 0 {
        return Err(BenchError::InvalidConfig(
            "empty objective sweep or zero repetitions".into(),
        ));
    }
    let text = fs::read_to_string(&config.map).map_err(|e| BenchError::Unreadable {
        path: config.map.clone(),
        reason: e.to_string(),
    })?;
    let map = parse_map(&text).map_err(|e| BenchError::Unreadable {
        path: config.map.clone(),
        reason: e.to_string(),
    })?;
    let graph = build_graph(&map);
    let scenario = random_scenario(&map, config.agents, config.scenario_seed)
        .ok_or_else(|| BenchError::InvalidConfig("map too small for requested agents".into()))?;

    let mut rows = Vec::with_capacity(config.objective_counts.len());
    for &objectives in &config.objective_counts {
        let model = CostModel::duplicated(objectives);
        let options = SolveOptions {
            time_limit: config.time_limit,
            horizon: None,
        };
        let mut total_wall = Duration::ZERO;
        let mut heap_ops = None;
        for _ in 0..config.repetitions {
            let result = lcbs_solve(&graph, &model, &scenario.tasks, &options)
                .map_err(|e| BenchError::InvalidConfig(e.to_string()))?;
            if result.status != SolveStatus::Solved {
                return Err(BenchError::ScalingUnsolved(result.status));
            }
            total_wall += result.stats.wall;
            let ops = result.stats.heap_ops();
            if *heap_ops.get_or_insert(ops) != ops {
                return Err(BenchError::InvalidConfig(
                    "nondeterministic heap-operation count within one objective count".into(),
                ));
            }
        }
        rows.push(ScalingRow {
            objectives,
            mean_wall_ms: total_wall.as_secs_f64() * 1000.0 / config.repetitions as f64,
            heap_ops: heap_ops.unwrap_or(0),
        });
    }
    Ok(rows)
}

/// Least-squares affine fit `y = slope * x + intercept`; returns
/// `(slope, intercept, r_squared)`.
pub fn affine_fit(points: &[(f64, f64)]) -> (f64, f64, f64) {
    assert!(points.len() >= 2, "fit needs at least two points");
    let n = points.len() as f64;
    let mean_x = points.iter().map(|(x, _)| x).sum::<f64>() / n;
    let mean_y = points.iter().map(|(_, y)| y).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in points {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    let slope = if sxx == 0.0 { 0.0 } else { sxy / sxx };
    let intercept = mean_y - slope * mean_x;
    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for (x, y) in points {
        let predicted = slope * x + intercept;
        ss_res += (y - predicted) * (y - predicted);
        ss_tot += (y - mean_y) * (y - mean_y);
    }
    let r2 = if ss_tot == 0.0 {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    };
    (slope, intercept, r2)
}
