//! Command-line front end: solve one instance, verify the solver against the
//! brute-force oracle, or run the benchmark harnesses.
//!
//! Exit codes: 0 success (solved / both checks OK / harness completed),
//! 1 usage or I/O error, 2 solver timeout, 3 infeasible instance,
//! 4 oracle budget exceeded.

use std::fs;
use std::path::PathBuf;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use lexcbs::bench::{
    self, affine_fit, records_to_csv, run_scaling, run_success_rate, scaling_to_csv,
    success_rate_summary, ExperimentConfig, ScalingConfig, ScenarioSource,
};
use lexcbs::cost_model::{CostMode, CostModel};
use lexcbs::map::random_scenario;
use lexcbs::oracle::{check_agreement, enumerate_joint_plans, OracleError};
use lexcbs::validate::validate_plan;
use lexcbs::{
    build_graph, lcbs_solve, parse_map, parse_scen, AgentTask, GridMap, SearchGraph, SolveOptions,
    SolveStatus,
};

#[derive(Parser)]
#[command(
    name = "lexcbs",
    version,
    about = "Multi-agent path finding with prioritized objectives"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance and print the joint plan
    Solve(SolveArgs),
    /// Check the solver against brute-force enumeration on a small instance
    Verify(VerifyArgs),
    /// Run the success-rate experiment and emit CSV records
    Bench(BenchArgs),
    /// Sweep the objective count on one fixed instance and emit timings
    Scale(ScaleArgs),
}

#[derive(Args)]
struct InstanceArgs {
    /// MovingAI .map file
    #[arg(long)]
    map: PathBuf,
    /// MovingAI .scen file; omit to sample tasks with --scenario-seed
    #[arg(long)]
    scen: Option<PathBuf>,
    /// Number of agents (the first n scenario tasks)
    #[arg(long)]
    agents: usize,
    /// Seed for sampled tasks when no .scen file is given
    #[arg(long, default_value_t = 1)]
    scenario_seed: u64,
    /// Number of cost objectives d
    #[arg(long, default_value_t = 2)]
    objectives: usize,
    /// Seed for the randomized cost components
    #[arg(long, default_value_t = 42)]
    cost_seed: u64,
    /// unit-first or duplicated
    #[arg(long, default_value = "unit-first")]
    cost_mode: String,
    /// Inclusive range LO..HI for randomized cost components
    #[arg(long, default_value = "1..10")]
    cost_range: String,
}

impl InstanceArgs {
    fn load(&self) -> Result<(GridMap, SearchGraph, Vec<AgentTask>, CostModel)> {
        let map_text = fs::read_to_string(&self.map)
            .with_context(|| format!("cannot read map {}", self.map.display()))?;
        let map = parse_map(&map_text)
            .with_context(|| format!("cannot parse map {}", self.map.display()))?;
        let graph = build_graph(&map);
        let scenario = match &self.scen {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("cannot read scenario {}", path.display()))?;
                parse_scen(&text, &map)
                    .with_context(|| format!("cannot parse scenario {}", path.display()))?
            }
            None => random_scenario(&map, self.agents, self.scenario_seed)
                .context("map too small to sample the requested tasks")?,
        };
        let tasks = scenario
            .first_tasks(self.agents)
            .with_context(|| {
                format!(
                    "scenario has {} tasks, need {}",
                    scenario.tasks.len(),
                    self.agents
                )
            })?
            .to_vec();
        let mode: CostMode = self
            .cost_mode
            .parse()
            .map_err(|e: String| anyhow::anyhow!(e))?;
        let range = bench::parse_cost_range(&self.cost_range)?;
        let model = CostModel::new(self.objectives, self.cost_seed, mode, range);
        Ok((map, graph, tasks, model))
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Wall-clock limit in seconds; 0 disables the limit
    #[arg(long, default_value_t = 0)]
    time_limit: u64,
    /// Maximum path makespan (defaults to 2|V| + 1)
    #[arg(long)]
    horizon: Option<u32>,
    /// Emit the plan as JSON instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Joint-plan makespan bound shared by solver and oracle
    #[arg(long, default_value_t = 16)]
    horizon: u32,
    /// Abort enumeration beyond this many partial states
    #[arg(long, default_value_t = lexcbs::oracle::DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Args)]
struct BenchArgs {
    /// Flat key=value config file; flags below override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated .map files
    #[arg(long)]
    maps: Option<String>,
    /// Directory holding <map>-random-<k>.scen files
    #[arg(long)]
    scen_dir: Option<PathBuf>,
    /// Generate scenarios from this seed instead of reading files
    #[arg(long)]
    scenario_seed: Option<u64>,
    #[arg(long)]
    scenarios_per_map: Option<usize>,
    /// Comma-separated agent counts
    #[arg(long)]
    agents: Option<String>,
    /// Comma-separated objective counts
    #[arg(long)]
    objectives: Option<String>,
    /// Seconds per solve; 0 disables the limit (and zeroes wall_ms)
    #[arg(long)]
    time_limit: Option<u64>,
    #[arg(long)]
    cost_seed: Option<u64>,
    #[arg(long)]
    cost_mode: Option<String>,
    #[arg(long)]
    cost_range: Option<String>,
    /// Parallel solver instances
    #[arg(long)]
    jobs: Option<usize>,
    /// CSV destination; stdout when omitted
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ScaleArgs {
    #[arg(long)]
    map: PathBuf,
    #[arg(long, default_value_t = 5)]
    agents: usize,
    #[arg(long, default_value_t = 7)]
    scenario_seed: u64,
    #[arg(long, default_value_t = 2)]
    d_min: usize,
    #[arg(long, default_value_t = 10)]
    d_max: usize,
    #[arg(long, default_value_t = 20)]
    reps: usize,
    /// Seconds per solve; 0 disables the limit
    #[arg(long, default_value_t = 0)]
    time_limit: u64,
    /// CSV destination; stdout when omitted
    #[arg(long)]
    output: Option<PathBuf>,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    let code = match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            1
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Scale(args) => cmd_scale(args),
    }
}

fn time_limit(seconds: u64) -> Option<Duration> {
    (seconds > 0).then(|| Duration::from_secs(seconds))
}

#[derive(Serialize)]
struct JsonPlan {
    status: &'static str,
    cost: Option<Vec<u64>>,
    agents: Vec<JsonAgent>,
    stats: JsonStats,
}

#[derive(Serialize)]
struct JsonAgent {
    id: usize,
    path: Vec<[u32; 3]>,
}

#[derive(Serialize)]
struct JsonStats {
    hl_expanded: u64,
    ll_expanded: u64,
    heap_ops: u64,
    wall_ms: u128,
}

fn cmd_solve(args: SolveArgs) -> Result<i32> {
    let (map, graph, tasks, model) = args.instance.load()?;
    let options = SolveOptions {
        time_limit: time_limit(args.time_limit),
        horizon: args.horizon,
    };
    let result = lcbs_solve(&graph, &model, &tasks, &options)?;

    if let Some(plan) = &result.plan {
        let violations = validate_plan(plan, &graph, &model, &tasks);
        if !violations.is_empty() {
            bail!(
                "internal error: solved plan failed validation: {}",
                violations[0]
            );
        }
    }

    // untimed runs report 0 so repeated runs are byte-identical
    let wall_ms = if options.time_limit.is_some() {
        result.stats.wall.as_millis()
    } else {
        0
    };
    let status = bench::status_name(result.status);
    if args.json {
        let agents = result
            .plan
            .as_ref()
            .map(|plan| {
                plan.iter()
                    .enumerate()
                    .map(|(id, path)| JsonAgent {
                        id,
                        path: path
                            .states
                            .iter()
                            .map(|s| {
                                let (x, y) = map.coords_of(s.vertex);
                                [x, y, s.time]
                            })
                            .collect(),
                    })
                    .collect()
            })
            .unwrap_or_default();
        let doc = JsonPlan {
            status,
            cost: result.cost.as_ref().map(|c| c.components().to_vec()),
            agents,
            stats: JsonStats {
                hl_expanded: result.stats.hl_expanded,
                ll_expanded: result.stats.low_level.expanded,
                heap_ops: result.stats.heap_ops(),
                wall_ms,
            },
        };
        println!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        println!("status: {status}");
        if let Some(cost) = &result.cost {
            println!("cost: {cost}");
        }
        if let Some(plan) = &result.plan {
            for (id, path) in plan.iter().enumerate() {
                let rendered: Vec<String> = path
                    .states
                    .iter()
                    .map(|s| {
                        let (x, y) = map.coords_of(s.vertex);
                        format!("({x},{y},{})", s.time)
                    })
                    .collect();
                println!("agent {id}: {}", rendered.join(" "));
            }
        }
        println!(
            "stats: hl_expanded={} ll_expanded={} heap_ops={} wall_ms={wall_ms}",
            result.stats.hl_expanded,
            result.stats.low_level.expanded,
            result.stats.heap_ops(),
        );
    }

    Ok(match result.status {
        SolveStatus::Solved => 0,
        SolveStatus::Timeout => 2,
        SolveStatus::Infeasible => 3,
    })
}

fn cmd_verify(args: VerifyArgs) -> Result<i32> {
    let (_, graph, tasks, model) = args.instance.load()?;
    let options = SolveOptions {
        time_limit: None,
        horizon: Some(args.horizon),
    };
    let solved = lcbs_solve(&graph, &model, &tasks, &options)?;

    let oracle = match enumerate_joint_plans(&graph, &model, &tasks, args.horizon, args.budget) {
        Ok(oracle) => oracle,
        Err(err @ OracleError::BudgetExceeded { .. }) => {
            eprintln!("{err}");
            return Ok(4);
        }
    };
    let agreement = check_agreement(solved.cost.as_ref(), &oracle);
    println!(
        "{} {}",
        if agreement.lex_ok {
            "LEX-OK"
        } else {
            "LEX-MISMATCH"
        },
        if agreement.pareto_ok {
            "PARETO-OK"
        } else {
            "PARETO-VIOLATION"
        }
    );
    println!(
        "solver: {} oracle: {} (pareto set size {}, {} plans recorded, {} states)",
        solved
            .cost
            .as_ref()
            .map(|c| c.to_string())
            .unwrap_or_else(|| "none".into()),
        oracle
            .lex_min_cost
            .as_ref()
            .map(|c| c.to_string())
            .unwrap_or_else(|| "none".into()),
        oracle.pareto_costs.len(),
        oracle.plans_recorded,
        oracle.states_visited,
    );
    Ok(if agreement.all_ok() { 0 } else { 1 })
}

fn cmd_bench(args: BenchArgs) -> Result<i32> {
    let mut config = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("cannot read config {}", path.display()))?;
            ExperimentConfig::from_text(&text)?
        }
        None => ExperimentConfig::default(),
    };
    let overrides: [(&str, Option<String>); 10] = [
        ("maps", args.maps),
        (
            "scenarios_per_map",
            args.scenarios_per_map.map(|v| v.to_string()),
        ),
        ("agents", args.agents),
        ("objectives", args.objectives),
        ("time_limit_s", args.time_limit.map(|v| v.to_string())),
        ("cost_seed", args.cost_seed.map(|v| v.to_string())),
        ("cost_mode", args.cost_mode),
        ("cost_range", args.cost_range),
        ("jobs", args.jobs.map(|v| v.to_string())),
        ("scenario_seed", args.scenario_seed.map(|v| v.to_string())),
    ];
    for (key, value) in overrides {
        if let Some(value) = value {
            config.apply(key, &value)?;
        }
    }
    if let Some(dir) = args.scen_dir {
        config.scenario_source = ScenarioSource::Files(dir);
    }

    let outcome = run_success_rate(&config)?;
    for warning in &outcome.warnings {
        eprintln!("warning: {warning}");
    }
    let csv = records_to_csv(&outcome.records);
    match &args.output {
        Some(path) => {
            fs::write(path, csv).with_context(|| format!("cannot write {}", path.display()))?
        }
        None => print!("{csv}"),
    }
    for ((map, agents, objectives), (solved, total)) in success_rate_summary(&outcome.records) {
        eprintln!(
            "{map} agents={agents} d={objectives}: {solved}/{total} solved ({:.0}%)",
            100.0 * solved as f64 / total as f64
        );
    }
    Ok(0)
}

fn cmd_scale(args: ScaleArgs) -> Result<i32> {
    if args.d_min < 1 || args.d_min > args.d_max {
        bail!("objective sweep needs 1 <= d-min <= d-max");
    }
    let config = ScalingConfig {
        map: args.map,
        agents: args.agents,
        scenario_seed: args.scenario_seed,
        objective_counts: (args.d_min..=args.d_max).collect(),
        repetitions: args.reps,
        time_limit: time_limit(args.time_limit),
    };
    let rows = run_scaling(&config)?;
    let csv = scaling_to_csv(&rows);
    match &args.output {
        Some(path) => {
            fs::write(path, &csv).with_context(|| format!("cannot write {}", path.display()))?
        }
        None => print!("{csv}"),
    }

    let points: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (r.objectives as f64, r.mean_wall_ms))
        .collect();
    if points.len() >= 2 {
        let (slope, intercept, r2) = affine_fit(&points);
        let equal_ops = rows.iter().all(|r| r.heap_ops == rows[0].heap_ops);
        eprintln!(
            "fit: wall_ms = {slope:.4} * d + {intercept:.4} (R^2 = {r2:.4}); heap ops {} across d",
            if equal_ops { "identical" } else { "DIVERGED" }
        );
    }
    Ok(0)
}
