//! Acceptance criteria 1-9: one PASS/FAIL line per criterion.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use swarm_landing::cli::{load_scenario, run_batch_records, trajectories_csv, BatchRun};
use swarm_landing::geometry::{Pose, Vec3};
use swarm_landing::perception::synthetic::{alternating_jitter, shifted_sequence, Texture};
use swarm_landing::perception::{
    camera_pose, detect_tags, estimate_tag_pose, good_features, lk_flow, project_tag, stabilize, CameraModel,
    Point2, TagObservation, TagSpec,
};
use swarm_landing::planning::{potential_gradient, repulsion_potential, total_potential, ApfParams, Obstacle};
use swarm_landing::sim::{compute_metrics, EventKind, Termination};
use swarm_landing::state::{CameraMount, DroneState, Role};
use swarm_landing::swarm::{select_leader, ModeManager, SwarmMode};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: f64) -> Result<f64, String> {
    let s = start.elapsed().as_secs_f64();
    ensure(s < limit, || format!("took {s:.2} s, limit {limit} s"))?;
    Ok(s)
}

fn rand_vec(rng: &mut ChaCha8Rng, r: f64) -> Vec3 {
    Vec3::new(rng.random_range(-r..r), rng.random_range(-r..r), rng.random_range(-r..r))
}

fn apf_correctness() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    while checked < 1000 {
        let params = ApfParams {
            xi: rng.random_range(0.1..2.0),
            eta: rng.random_range(0.01..1.0),
            d0: rng.random_range(0.2..1.0),
            ..ApfParams::default()
        };
        let p = rand_vec(&mut rng, 2.0);
        let goal = rand_vec(&mut rng, 2.0);
        let obstacles: Vec<Obstacle> = (0..rng.random_range(0..4))
            .map(|_| Obstacle::new(p + rand_vec(&mut rng, 1.0)))
            .collect();
        let near_kink = obstacles.iter().any(|o| {
            let rho = (p - o.position).norm();
            (rho - params.d0).abs() < 1e-3 || rho < 0.05
        });
        if near_kink {
            continue;
        }
        let g = potential_gradient(p, goal, &obstacles, &params).map_err(|e| e.to_string())?;
        let h = 1e-6;
        let u = |q: Vec3| total_potential(q, goal, &obstacles, &params).unwrap();
        let axes = [Vec3::X, Vec3::Y, Vec3::Z];
        let fd = axes.map(|a| (u(p + a * h) - u(p - a * h)) / (2.0 * h));
        let fd = Vec3::new(fd[0], fd[1], fd[2]);
        let rel = (g - fd).norm() / fd.norm().max(1e-3);
        worst = worst.max(rel);
        ensure(rel < 1e-6, || format!("configuration {checked}: relative error {rel:e}"))?;
        checked += 1;
    }
    let params = ApfParams::default();
    let obs = Obstacle::new(Vec3::ZERO);
    for rho in [params.d0, params.d0 * (1.0 + 1e-12), params.d0 * 1.5, 10.0] {
        let v = repulsion_potential(Vec3::new(rho, 0.0, 0.0), &obs, params.eta, params.d0).map_err(|e| e.to_string())?;
        ensure(v == 0.0, || format!("repulsion {v} at rho = {rho}"))?;
        let p = Vec3::new(0.0, rho, 0.0);
        let goal = Vec3::new(1.0, 2.0, 3.0);
        let with = potential_gradient(p, goal, &[obs], &params).map_err(|e| e.to_string())?;
        let without = potential_gradient(p, goal, &[], &params).map_err(|e| e.to_string())?;
        ensure(with == without, || format!("gradient changed by an obstacle at rho = {rho}"))?;
    }
    let s = within(start, 1.0)?;
    Ok(format!("1000 configs, worst relative error {worst:.1e}, cutoff exact, {s:.2} s"))
}

fn leader_election() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut ties = 0;
    for trial in 0..1000 {
        let n = rng.random_range(3..=6);
        let constructed_tie = trial % 10 == 0;
        let mut drones: Vec<DroneState> = (0..n)
            .map(|id| DroneState::new(id, Pose::translation(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0), rng.random_range(0.2..2.0))))
            .collect();
        let blind = rng.random_range(1..n);
        let mut ids: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            ids.swap(i, rng.random_range(0..=i));
        }
        for (k, &id) in ids.iter().enumerate() {
            drones[id].camera_ok = k >= blind;
        }
        if constructed_tie {
            // one blind drone, two healthy drones mirrored around it, the rest far away
            let c = drones[ids[0]].position();
            for (k, &id) in ids.iter().enumerate() {
                drones[id].camera_ok = k > 0;
                drones[id].pose = match k {
                    0 => drones[id].pose,
                    1 => Pose::translation(c.x + 0.7, c.y - 0.2, c.z),
                    2 => Pose::translation(c.x - 0.7, c.y + 0.2, c.z),
                    _ => Pose::translation(50.0 + k as f64, 0.0, 1.0),
                };
            }
            ties += 1;
        }
        let blind_pos: Vec<Vec3> = drones.iter().filter(|d| !d.camera_ok).map(|d| d.position()).collect();
        let cost = |d: &DroneState| blind_pos.iter().map(|b| (d.position() - *b).norm()).sum::<f64>();
        let best = drones.iter().filter(|d| d.camera_ok).map(cost).fold(f64::INFINITY, f64::min);
        let expected = drones
            .iter()
            .filter(|d| d.camera_ok && (cost(d) - best).abs() <= 1e-9 * best.max(1.0))
            .map(|d| d.id)
            .min()
            .unwrap();
        let got = select_leader(&drones).map_err(|e| e.to_string())?;
        ensure(got == expected, || format!("swarm {trial}: selected {got}, exhaustive argmin {expected}"))?;
    }
    let s = within(start, 1.0)?;
    Ok(format!("1000 swarms match exhaustive argmin ({ties} constructed ties), {s:.2} s"))
}

fn algorithm_conformance() -> Check {
    let mut drones: Vec<DroneState> = (0..3).map(|id| DroneState::new(id, Pose::translation(id as f64, 0.0, 1.0))).collect();
    let mut manager = ModeManager::new();
    let mut step = |health: [bool; 3], drones: &mut Vec<DroneState>| {
        for (d, ok) in drones.iter_mut().zip(health) {
            d.camera_ok = ok;
        }
        let decision = manager.update(drones, &health);
        for (d, (_, role)) in drones.iter_mut().zip(&decision.roles) {
            d.role = *role;
        }
        decision
    };
    let homogeneous = vec![(0, Role::Homogeneous), (1, Role::Homogeneous), (2, Role::Homogeneous)];

    let d = step([true; 3], &mut drones);
    ensure(d.mode == SwarmMode::Homogeneous && d.roles == homogeneous && d.elected.is_none(), || format!("all healthy: {d:?}"))?;
    let d = step([true, false, false], &mut drones);
    ensure(d.mode == SwarmMode::Homogeneous && d.elected == Some(0) && d.roles == homogeneous, || format!("election tick: {d:?}"))?;
    let d = step([true, false, false], &mut drones);
    let mode2 = vec![(0, Role::Leader), (1, Role::Follower(0)), (2, Role::Follower(0))];
    ensure(d.mode == SwarmMode::LeaderFollower && d.roles == mode2 && d.elected.is_none(), || format!("mode 2: {d:?}"))?;
    let again = step([true, false, false], &mut drones);
    ensure(again == d, || format!("mode 2 not steady: {again:?}"))?;
    let d = step([true; 3], &mut drones);
    ensure(d.mode == SwarmMode::Homogeneous && d.roles == homogeneous && manager.leader().is_none(), || format!("recovery: {d:?}"))?;
    Ok("mode 1 -> election (leader 0) -> mode 2 {L, F(0), F(0)} -> mode 1".into())
}

fn perception_round_trip() -> Check {
    let start = Instant::now();
    let cam = CameraModel::default().with_noise(0.0);
    let tag = TagSpec::with_id(0);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut checked, mut worst) = (0, 0.0f64);
    while checked < 1000 {
        let range = rng.random_range(0.3..4.0);
        let dir = Vec3::new(rng.random_range(-0.3..0.3), rng.random_range(-0.25..0.25), 1.0);
        let pos = dir * (range / dir.norm());
        // facing the camera, then tilted and spun
        let truth = Pose::from_axis_angle(pos, Vec3::X, std::f64::consts::PI).compose(&Pose::from_ypr(
            Vec3::ZERO,
            rng.random_range(-3.1..3.1),
            rng.random_range(-0.5..0.5),
            rng.random_range(-0.5..0.5),
        ));
        let Some(corners) = project_tag(&Pose::identity(), &cam, &truth, &tag) else { continue };
        if !corners.iter().all(|c| cam.in_image(*c)) {
            continue;
        }
        let obs = TagObservation { tag_id: 0, corners, relative_pose: Pose::identity(), range, timestamp: 0.0 };
        let est = estimate_tag_pose(&obs, &cam, &tag).map_err(|e| e.to_string())?;
        let (dp, dr) = est.difference(&truth);
        worst = worst.max(dp).max(dr);
        ensure(dp < 1e-6 && dr < 1e-6, || format!("config {checked} at {range:.3} m: position {dp:e}, rotation {dr:e}"))?;
        checked += 1;
    }
    let detect = |z: f64| {
        let mut observer = DroneState::new(0, Pose::translation(0.0, 0.0, z));
        observer.camera_mount = CameraMount::DownwardFacing;
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        detect_tags(0.0, &observer, &cam, &[(tag, Pose::identity())], &mut rng).map(|o| o.len())
    };
    for (z, n) in [(0.30, 1), (4.00, 1), (0.30 - 1e-9, 0), (4.00 + 1e-9, 0), (0.2999, 0), (4.0001, 0)] {
        let got = detect(z).map_err(|e| e.to_string())?;
        ensure(got == n, || format!("{got} detections at {z} m, expected {n}"))?;
    }
    let straight_down = camera_pose(&Pose::translation(0.0, 0.0, 2.0), CameraMount::DownwardFacing);
    ensure(straight_down.rotate(Vec3::Z).distance(-Vec3::Z) < 1e-12, || "downward mount".into())?;
    let s = start.elapsed().as_secs_f64();
    Ok(format!("1000 noiseless configs, worst error {worst:.1e}; gates inclusive at 0.30/4.00 m, {s:.2} s"))
}

fn stabilization() -> Check {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for seed in 0..3 {
        let tex = Texture::random(100 + seed, 64, 64);
        let frames = shifted_sequence(&tex, 64, 64, &alternating_jitter(10, 2.0));
        let out = stabilize(&frames).map_err(|e| e.to_string())?;
        worst = worst.max(out.residual_jitter);
        ensure(out.residual_jitter < 0.5, || format!("texture {seed}: residual jitter {:.3} px", out.residual_jitter))?;
    }
    let tex = Texture::random(7, 80, 80);
    let a = tex.render(80, 80, (0.0, 0.0));
    let feats: Vec<Point2> = good_features(&a, 40, 0.05)
        .into_iter()
        .filter(|p| p.x >= 16.0 && p.y >= 16.0 && p.x < 64.0 && p.y < 64.0)
        .collect();
    ensure(feats.len() >= 5, || format!("only {} interior features", feats.len()))?;
    let mut max_dev: f64 = 0.0;
    for sx in -3i32..=3 {
        for sy in -3i32..=3 {
            let b = tex.render(80, 80, (sx as f64, sy as f64));
            for f in lk_flow(&a, &b, &feats, 7) {
                let (u, v) = f.displacement().ok_or_else(|| format!("untracked feature at shift ({sx},{sy})"))?;
                max_dev = max_dev.max((u - sx as f64).abs()).max((v - sy as f64).abs());
            }
        }
    }
    ensure(max_dev < 0.25, || format!("flow deviation {max_dev:.3} px"))?;
    let s = within(start, 5.0)?;
    Ok(format!("residual jitter {worst:.3} px, integer shifts within {max_dev:.3} px, {s:.2} s"))
}

fn scenario(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(format!("{name}.json"))
}

fn batch(name: &str) -> Result<(Vec<BatchRun>, f64), String> {
    let config = load_scenario(&scenario(name)).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let runs = run_batch_records(name, &config, 5, config.seed).map_err(|e| e.to_string())?;
    Ok((runs, start.elapsed().as_secs_f64()))
}

/// Mean per-run error; fails unless every run landed everything inside the footprint.
fn landing_batch(name: &str, limit: f64) -> Result<(Vec<BatchRun>, String), String> {
    let (runs, secs) = batch(name)?;
    ensure(secs < 30.0, || format!("{name}: batch took {secs:.1} s"))?;
    let mut means = Vec::new();
    for r in &runs {
        let s = &r.summary;
        ensure(s.termination == Termination::AllLanded, || format!("{name} seed {}: {:?}", s.seed, s.termination))?;
        ensure(s.errors.len() == r.record.config.formation.len(), || format!("{name} seed {}: missing touchdowns", s.seed))?;
        ensure(s.all_inside_footprint == Some(true), || format!("{name} seed {}: touchdown off the platform", s.seed))?;
        means.push(s.mean_error.unwrap());
    }
    let mean = means.iter().sum::<f64>() / means.len() as f64;
    ensure(mean < limit, || format!("{name}: mean error {:.1} cm", mean * 100.0))?;
    Ok((runs, format!("{name} {:.1} cm ({secs:.1} s)", mean * 100.0)))
}

fn stationary() -> Check {
    let (_, a) = landing_batch("stationary_homogeneous", 0.10)?;
    let (_, b) = landing_batch("stationary_leader_follower", 0.10)?;
    Ok(format!("{a}; {b}"))
}

fn moving_platform() -> Check {
    let (_, a) = landing_batch("line_homogeneous", 0.15)?;
    let (runs, b) = landing_batch("line_leader_follower", 0.15)?;
    for r in &runs {
        let fault_t = r.record.config.faults.iter().map(|f| f.t).fold(f64::INFINITY, f64::min);
        let elections: Vec<f64> =
            r.record.events.iter().filter(|e| matches!(e.kind, EventKind::Election { .. })).map(|e| e.t).collect();
        ensure(elections.len() == 1 && elections[0] >= fault_t, || {
            format!("seed {}: elections at {elections:?}, fault at {fault_t}", r.summary.seed)
        })?;
    }
    Ok(format!("{a}; {b}; one election per leader-follower run"))
}

fn rectangle() -> Check {
    let (runs, secs) = batch("rectangle_leader_follower")?;
    let mut total = 0.0;
    for r in &runs {
        ensure(r.summary.termination == Termination::AllLanded, || format!("seed {}: {:?}", r.summary.seed, r.summary.termination))?;
        total += r.summary.mean_error.unwrap();
    }
    let mean = total / runs.len() as f64;
    ensure(mean < 0.36, || format!("average error {:.1} cm", mean * 100.0))?;
    let max = runs.iter().filter_map(|r| r.summary.boundary_radius).fold(0.0, f64::max);
    Ok(format!("average {:.1} cm, largest {:.1} cm, all landed ({secs:.1} s)", mean * 100.0, max * 100.0))
}

fn safety_and_determinism() -> Check {
    let names = [
        "stationary_homogeneous",
        "stationary_leader_follower",
        "line_homogeneous",
        "line_leader_follower",
        "rectangle_leader_follower",
    ];
    let mut min_sep = f64::INFINITY;
    for name in names {
        let (runs, _) = batch(name)?;
        for r in &runs {
            let m = compute_metrics(&r.record).map_err(|e| e.to_string())?;
            min_sep = min_sep.min(m.min_separation_pre_landing);
            ensure(m.min_separation_pre_landing >= 0.15, || {
                format!("{name} seed {}: separation {:.3} m", r.summary.seed, m.min_separation_pre_landing)
            })?;
        }
        let (again, _) = batch(name)?;
        for (a, b) in runs.iter().zip(&again) {
            ensure(trajectories_csv(&a.record) == trajectories_csv(&b.record), || {
                format!("{name} seed {}: trajectory CSVs differ", a.summary.seed)
            })?;
        }
    }
    Ok(format!("pre-landing separation >= {min_sep:.3} m in 25 runs; repeated runs byte-identical"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("APF gradient and cutoff", apf_correctness),
        ("leader election", leader_election),
        ("mode switching", algorithm_conformance),
        ("tag pose round trip and gating", perception_round_trip),
        ("video stabilization", stabilization),
        ("stationary landing", stationary),
        ("moving platform landing", moving_platform),
        ("rectangle landing", rectangle),
        ("safety and determinism", safety_and_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
