//! The benchmark files shipped in data/ parse and drive the harness.

use std::path::PathBuf;

use lexcbs::bench::{run_success_rate, ExperimentConfig, ScenarioSource};
use lexcbs::cbs::SolveStatus;
use lexcbs::graph::build_graph;
use lexcbs::map::{parse_map, parse_scen};

fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

#[test]
fn shipped_map_and_scenario_parse() {
    let map_text = std::fs::read_to_string(data_path("maps/empty-32-32.map")).unwrap();
    let map = parse_map(&map_text).unwrap();
    assert_eq!(map.num_vertices(), 1024);

    let scen_text = std::fs::read_to_string(data_path("scen/empty-32-32-random-1.scen")).unwrap();
    let scen = parse_scen(&scen_text, &map).unwrap();
    assert_eq!(scen.tasks.len(), 10);
    let first = scen.tasks[0];
    let (sx, sy) = map.coords_of(first.start);
    let (gx, gy) = map.coords_of(first.goal);
    assert!(sx < 32 && sy < 32 && gx < 32 && gy < 32);
}

#[test]
fn every_interior_vertex_of_the_open_map_has_four_neighbors() {
    let map_text = std::fs::read_to_string(data_path("maps/empty-32-32.map")).unwrap();
    let map = parse_map(&map_text).unwrap();
    let graph = build_graph(&map);
    for y in 1..31 {
        for x in 1..31 {
            let v = map.vertex_at(x, y).unwrap();
            assert_eq!(graph.neighbors(v).len(), 4, "({x},{y})");
        }
    }
    assert_eq!(graph.neighbors(map.vertex_at(0, 0).unwrap()).len(), 2);
}

#[test]
fn bench_file_mode_finds_the_shipped_scenario() {
    let config = ExperimentConfig {
        maps: vec![data_path("maps/empty-32-32.map")],
        scenario_source: ScenarioSource::Files(data_path("scen")),
        scenarios_per_map: 1,
        agent_counts: vec![2, 5],
        objective_counts: vec![2],
        time_limit: None,
        jobs: 1,
        ..Default::default()
    };
    let outcome = run_success_rate(&config).unwrap();
    assert!(outcome.warnings.is_empty(), "{:?}", outcome.warnings);
    assert_eq!(outcome.records.len(), 2);
    assert!(outcome
        .records
        .iter()
        .all(|r| r.status == SolveStatus::Solved));
    assert!(outcome
        .records
        .iter()
        .all(|r| r.scen == "empty-32-32-random-1"));
}
