//! Batch outputs checked against independent re-derivations.

use std::fs;
use std::path::PathBuf;

use proptest::prelude::*;
use swarm_landing::cli::{load_scenario, parse_scenario, run_batch_records, write_batch, write_scenario, RunSummary};
use swarm_landing::sim::{FaultEvent, FaultKind, RunRecord, ScenarioConfig, TrajectoryKind};

fn scenario(name: &str) -> ScenarioConfig {
    load_scenario(&PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(format!("{name}.json"))).unwrap()
}

struct CsvRow {
    t: f64,
    entity: String,
    x: f64,
    y: f64,
}

fn parse_csv(text: &str) -> Vec<CsvRow> {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,entity,x,y,z,vx,vy,vz,role,phase"));
    lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            assert_eq!(f.len(), 10, "{l}");
            CsvRow { t: f[0].parse().unwrap(), entity: f[1].to_string(), x: f[2].parse().unwrap(), y: f[3].parse().unwrap() }
        })
        .collect()
}

#[test]
fn line_platform_trace_is_collinear() {
    let runs = run_batch_records("line", &scenario("line_homogeneous"), 2, 1).unwrap();
    for r in &runs {
        let ps: Vec<_> = r.record.rows.iter().map(|row| row.platform.position).collect();
        let (a, b) = (ps[0], *ps.last().unwrap());
        let dir = b - a;
        assert!(dir.norm() > 0.5);
        for p in &ps {
            let q = *p - a;
            let cross = (q.x * dir.y - q.y * dir.x) / dir.norm();
            assert!(cross.abs() < 1e-9, "seed {}: off-line by {cross:e}", r.summary.seed);
        }
    }
}

/// Slot error of every drone from its final position relative to the
/// platform; heading comes from the last platform displacement.
fn errors_from_csv(csv: &str, formation: &[[f64; 2]]) -> Vec<f64> {
    let rows = parse_csv(csv);
    let platform: Vec<&CsvRow> = rows.iter().filter(|r| r.entity == "platform").collect();
    let last = platform[platform.len() - 1];
    let prev = platform[platform.len() - 2];
    let (dx, dy) = (last.x - prev.x, last.y - prev.y);
    let heading = if dx.hypot(dy) > 1e-9 { dy.atan2(dx) } else { 0.0 };
    let (s, c) = heading.sin_cos();
    formation
        .iter()
        .enumerate()
        .map(|(i, [ox, oy])| {
            let name = format!("drone{i}");
            let d = rows.iter().rev().find(|r| r.entity == name && r.t == last.t).unwrap();
            let (wx, wy) = (d.x - last.x, d.y - last.y);
            let (lx, ly) = (c * wx + s * wy, -s * wx + c * wy);
            (lx - ox).hypot(ly - oy)
        })
        .collect()
}

#[test]
fn summaries_match_rederived_errors() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["stationary_homogeneous", "line_leader_follower"] {
        let config = scenario(name);
        let runs = run_batch_records(name, &config, 3, config.seed).unwrap();
        write_batch(&runs, dir.path()).unwrap();
    }
    let summaries: Vec<RunSummary> =
        serde_json::from_str(&fs::read_to_string(dir.path().join("summaries.json")).unwrap()).unwrap();
    assert_eq!(summaries.len(), 3);
    for s in &summaries {
        let run_dir = dir.path().join(format!("{}-seed{}", s.scenario, s.seed));
        let record: RunRecord = serde_json::from_str(&fs::read_to_string(run_dir.join("record.json")).unwrap()).unwrap();
        let formation = &record.config.formation;
        assert_eq!(s.errors.len(), formation.len());
        let mut sq = 0.0;
        for e in &s.errors {
            let td = record.touchdowns.iter().find(|t| t.drone == e.drone).unwrap();
            let [ox, oy] = formation[e.drone];
            let err = (td.platform_frame.x - ox).hypot(td.platform_frame.y - oy);
            assert!((err - e.error).abs() < 1e-9, "{} seed {} drone {}", s.scenario, s.seed, e.drone);
            sq += err * err;
        }
        let rmse = (sq / s.errors.len() as f64).sqrt();
        assert!((rmse - s.rmse.unwrap()).abs() < 1e-9);
        let max = s.errors.iter().map(|e| e.error).fold(0.0, f64::max);
        assert_eq!(s.boundary_radius, Some(max));

        let from_csv = errors_from_csv(&fs::read_to_string(run_dir.join("trajectories.csv")).unwrap(), formation);
        for e in &s.errors {
            assert!((from_csv[e.drone] - e.error).abs() < 1e-5, "{} seed {} drone {}: csv {} vs {}", s.scenario, s.seed, e.drone, from_csv[e.drone], e.error);
        }
    }
}

#[test]
fn summaries_cover_only_the_last_written_batch() {
    // write_batch rewrites summaries.json, so two batches into one dir keep the second
    let dir = tempfile::tempdir().unwrap();
    let config = ScenarioConfig { duration_max: 0.2, ..ScenarioConfig::default() };
    write_batch(&run_batch_records("a", &config, 2, 0).unwrap(), dir.path()).unwrap();
    write_batch(&run_batch_records("b", &config, 1, 0).unwrap(), dir.path()).unwrap();
    let summaries: Vec<RunSummary> =
        serde_json::from_str(&fs::read_to_string(dir.path().join("summaries.json")).unwrap()).unwrap();
    assert_eq!(summaries.iter().map(|s| s.scenario.as_str()).collect::<Vec<_>>(), ["b"]);
}

fn arb_config() -> impl Strategy<Value = ScenarioConfig> {
    (
        prop_oneof![Just(TrajectoryKind::Stationary), Just(TrajectoryKind::Line), Just(TrajectoryKind::Rectangle)],
        0.0f64..2.0,
        (0.5f64..10.0, 0.5f64..10.0),
        0.001f64..0.1,
        1.0f64..120.0,
        any::<u64>(),
        0.0f64..3.0,
        prop::collection::vec((0.0f64..=1.0, 0usize..3, any::<bool>()), 0..4),
    )
        .prop_map(|(trajectory, speed, (w, h), dt, duration, seed, sigma, faults)| ScenarioConfig {
            trajectory,
            platform_speed: speed,
            rectangle_extents: [w, h],
            dt,
            duration_max: duration,
            seed,
            pixel_noise_sigma: sigma,
            faults: faults
                .into_iter()
                .map(|(frac, drone, lost)| FaultEvent {
                    t: frac * duration,
                    drone,
                    kind: if lost { FaultKind::CameraLoss } else { FaultKind::CameraRecover },
                })
                .collect(),
            ..ScenarioConfig::default()
        })
}

proptest! {
    #[test]
    fn scenario_files_round_trip(config in arb_config()) {
        prop_assume!(config.validate().is_ok());
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.json");
        write_scenario(&config, &path).unwrap();
        prop_assert_eq!(load_scenario(&path).unwrap(), config.clone());
        let text = fs::read_to_string(&path).unwrap();
        prop_assert_eq!(parse_scenario(&text, "s.json").unwrap(), config);
    }
}
