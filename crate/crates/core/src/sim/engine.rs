use super::config::ScenarioConfig;
use super::dynamics::{step_drone, step_yaw};
use super::faults::FaultSchedule;
use super::record::{DroneRow, Event, EventKind, PlatformRow, RunRecord, Termination, TickRow, Touchdown};
use super::trajectory::platform_pose;
use crate::error::Result;
use crate::geometry::{wrap_angle, Pose, Vec3};
use crate::perception::{detect_tags, CameraModel, TagSpec};
use crate::state::{drone_tag_id, DroneState, Phase, Role, WorldState, PLATFORM_TAG_IDS};
use crate::swarm::{
    control_tick, fuse_platform_estimate, leader_guidance, ControlParams, EstimateSource, FormationSpec, Guidance,
    LocalizationEstimate, ModeManager, PlatformTracker, SwarmEstimates, SwarmMode, TrackerGains,
};

/// Time the camera mount needs to rotate, seconds.
pub const CAMERA_SWITCH_DELAY: f64 = 0.5;
/// Descents wait this long after a rectangle circuit ends, seconds.
pub const CIRCUIT_SETTLE: f64 = 2.0;
/// Drones start this far behind the platform, meters.
pub const START_DISTANCE: f64 = 2.5;
/// Formation offsets are spread by this factor at the start.
pub const START_SPREAD: f64 = 2.0;

/// Runs one scenario to completion.
pub fn run_scenario(config: &ScenarioConfig) -> Result<RunRecord> {
    config.validate()?;
    Engine::new(config.clone()).run()
}

/// Initial drone poses: the formation, spread out, behind the platform at
/// cruise altitude and facing along its heading.
pub fn initial_drones(config: &ScenarioConfig, platform: &Pose, altitude: f64) -> Vec<DroneState> {
    config
        .formation
        .iter()
        .enumerate()
        .map(|(id, o)| {
            let local = Vec3::new(-START_DISTANCE + START_SPREAD * o[0], START_SPREAD * o[1], altitude);
            let p = platform.transform_point(local);
            DroneState::new(id, Pose::from_yaw(p, platform.heading()))
        })
        .collect()
}

struct Engine {
    config: ScenarioConfig,
    formation: FormationSpec,
    control: ControlParams,
    camera: CameraModel,
    world: WorldState,
    health: Vec<bool>,
    faults: FaultSchedule,
    modes: ModeManager,
    mode: SwarmMode,
    trackers: Vec<PlatformTracker>,
    fixes: Vec<Option<LocalizationEstimate>>,
    /// Platform-frame deck point and relative yaw of each landed drone.
    parked: Vec<Option<(Vec3, f64)>>,
    record: RunRecord,
}

impl Engine {
    fn new(config: ScenarioConfig) -> Self {
        let control = ControlParams {
            apf: config.apf,
            landing_threshold: config.landing_threshold,
            ..ControlParams::default()
        };
        let platform = platform_pose(config.trajectory, 0.0, &config);
        let drones = initial_drones(&config, &platform.pose(), control.cruise_altitude);
        let n = drones.len();
        Engine {
            formation: config.formation_spec(),
            camera: CameraModel::default().with_noise(config.pixel_noise_sigma),
            world: WorldState::new(drones, platform, config.seed),
            health: vec![true; n],
            faults: FaultSchedule::new(&config.faults),
            modes: ModeManager::new(),
            mode: SwarmMode::Homogeneous,
            trackers: vec![PlatformTracker::new(TrackerGains::default()); n],
            fixes: vec![None; n],
            parked: vec![None; n],
            record: RunRecord::new(config.clone()),
            control,
            config,
        }
    }

    fn run(mut self) -> Result<RunRecord> {
        self.log_row();
        let mut k: u64 = 0;
        loop {
            let t = k as f64 * self.config.dt;
            if let Some(end) = self.tick(t)? {
                self.record.termination = end;
                return Ok(self.record);
            }
            k += 1;
            let t_next = k as f64 * self.config.dt;
            self.log_row();
            if self.world.drones.iter().all(|d| d.phase == Phase::Landed) {
                self.record.termination = Termination::AllLanded;
                return Ok(self.record);
            }
            if t_next >= self.config.duration_max - 1e-9 {
                self.record.termination = Termination::Timeout;
                return Ok(self.record);
            }
        }
    }

    fn event(&mut self, t: f64, kind: EventKind) {
        self.record.events.push(Event { t, kind });
    }

    /// One control period starting at `t`; `Some` ends the run.
    fn tick(&mut self, t: f64) -> Result<Option<Termination>> {
        self.world.t = t;

        for ev in self.faults.apply(t, &mut self.health) {
            self.world.drones[ev.drone].camera_ok = self.health[ev.drone];
            self.event(t, EventKind::Fault { drone: ev.drone, kind: ev.kind });
        }

        self.perceive(t)?;

        let decision = self.modes.update(&self.world.drones, &self.health);
        if let Some(leader) = decision.elected {
            self.event(t, EventKind::Election { leader });
        }
        for (i, &(id, role)) in decision.roles.iter().enumerate() {
            let from = self.world.drones[i].role;
            if from != role {
                self.world.drones[i].role = role;
                self.event(t, EventKind::RoleChange { drone: id, from, to: role });
            }
        }
        self.mode = decision.mode;
        if self.mode == SwarmMode::Abort {
            self.event(t, EventKind::Abort);
            return Ok(Some(Termination::Abort));
        }

        let estimates = self.estimates(t);
        let mut params = self.control;
        params.landing_enabled = self.config.circuit_duration().is_none_or(|end| t >= end + CIRCUIT_SETTLE);
        let command = control_tick(&self.world, &estimates, &self.formation, &params)?;

        let dt = self.config.dt;
        let next_platform = platform_pose(self.config.trajectory, t + dt, &self.config);
        for (i, cmd) in command.commands.iter().enumerate() {
            let drone = &mut self.world.drones[i];
            if cmd.camera_mount_setpoint != drone.camera_mount {
                drone.camera_mount = cmd.camera_mount_setpoint;
                drone.camera_ready_at = t + CAMERA_SWITCH_DELAY;
            }
            let from = drone.phase;
            if drone.advance_phase(cmd.phase_setpoint) {
                let to = drone.phase;
                let id = drone.id;
                if to == Phase::Landed {
                    let world = drone.position();
                    let local = self.world.platform.to_platform_frame(world);
                    let rel_yaw = wrap_angle(drone.pose.heading() - self.world.platform.heading);
                    self.parked[i] = Some((Vec3::new(local.x, local.y, 0.0), rel_yaw));
                    self.record.touchdowns.push(Touchdown { drone: id, t, world, platform_frame: local });
                }
                self.event(t, EventKind::PhaseChange { drone: id, from, to });
            }
            let drone = &self.world.drones[i];
            let next = match self.parked[i] {
                Some((local, rel_yaw)) => {
                    let pose = next_platform.pose();
                    DroneState {
                        pose: Pose::from_yaw(pose.transform_point(local), next_platform.heading + rel_yaw),
                        velocity: next_platform.velocity(),
                        ..drone.clone()
                    }
                }
                None => {
                    let moved = step_drone(
                        drone,
                        cmd.velocity_setpoint,
                        dt,
                        self.config.drone_time_constant,
                        self.config.apf.vmax,
                    );
                    step_yaw(&moved, cmd.yaw_setpoint, dt)
                }
            };
            self.world.drones[i] = next;
        }
        self.world.platform = next_platform;
        self.world.t = t + dt;
        Ok(None)
    }

    /// Tag detection for every working camera, platform tracking and
    /// relayed follower fixes.
    fn perceive(&mut self, t: f64) -> Result<()> {
        let WorldState { drones, platform, rng, .. } = &mut self.world;
        let platform_tags: Vec<(TagSpec, Pose)> = PLATFORM_TAG_IDS
            .iter()
            .zip(&platform.tag_poses)
            .map(|(&id, pose)| (TagSpec::with_id(id), *pose))
            .collect();
        for i in 0..drones.len() {
            let d = &drones[i];
            let mut fix = None;
            if d.camera_available(t) && d.phase != Phase::Landed {
                let mut tags = platform_tags.clone();
                if d.role == Role::Leader {
                    tags.extend(
                        drones
                            .iter()
                            .filter(|o| o.id != d.id)
                            .map(|o| (TagSpec::with_id(drone_tag_id(o.id)), o.tag_pose())),
                    );
                }
                let obs = detect_tags(t, d, &self.camera, &tags, rng)?;
                fix = fuse_platform_estimate(&obs, &d.pose, d.camera_mount).ok();
                if d.role == Role::Leader {
                    let blind: Vec<usize> = drones.iter().filter(|o| !o.camera_ok).map(|o| o.id).collect();
                    if let Ok(guidance) = leader_guidance(d, &obs, &blind) {
                        for g in guidance {
                            if let Guidance::Fix(est) = g {
                                self.fixes[est.drone_id] = Some(est);
                            }
                        }
                    }
                }
            }
            self.trackers[i].update(t, fix.as_ref());
            if d.camera_ok {
                self.fixes[i] = Some(LocalizationEstimate {
                    drone_id: d.id,
                    position: d.position(),
                    source: EstimateSource::OwnCamera,
                    timestamp: t,
                });
            } else if self.fixes[i].is_some_and(|f| f.source == EstimateSource::OwnCamera && f.timestamp >= t) {
                self.fixes[i] = None;
            }
        }
        Ok(())
    }

    fn estimates(&self, t: f64) -> SwarmEstimates {
        let n = self.world.drones.len();
        let platform = match (self.mode, self.modes.leader()) {
            (SwarmMode::LeaderFollower, Some(leader)) => vec![self.trackers[leader].predict(t); n],
            _ => self.trackers.iter().map(|tr| tr.predict(t)).collect(),
        };
        SwarmEstimates { drones: self.fixes.clone(), platform }
    }

    fn log_row(&mut self) {
        let w = &self.world;
        let row = TickRow {
            t: w.t,
            drones: w
                .drones
                .iter()
                .map(|d| DroneRow {
                    id: d.id,
                    position: d.position(),
                    velocity: d.velocity,
                    yaw: d.pose.heading(),
                    role: d.role,
                    phase: d.phase,
                })
                .collect(),
            platform: PlatformRow {
                position: w.platform.pose().position,
                velocity: w.platform.velocity(),
                heading: w.platform.heading,
            },
        };
        self.record.rows.push(row);
    }
}
