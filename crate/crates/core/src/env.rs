//! Discrete-time world model: a fixed robot at the origin and one object
//! performing a random walk in an annulus around it.
//!
//! The object never collides with the robot (inner radius) and never leaves
//! detection range (outer radius); each sample period it takes an isotropic
//! Gaussian step and is radially projected back into the annulus when the
//! step would violate either bound. Two presence sensors split the plane:
//! the front sensor covers bearings in (-pi/2, pi/2), everything else is
//! the back sensor, so every sample yields exactly one event. Wall-clock
//! time is simulated; the sample period only scales trace timestamps.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use std::f64::consts::FRAC_PI_2;

use crate::encoder::{Event, EventSequence};
use crate::error::{Error, Result};
use crate::seed::rng_from_seed;

/// World geometry, walk scale and timing.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WorldConfig {
    /// Collision-exclusion radius in meters; the object stays outside.
    pub r_min: f64,
    /// Detectability radius in meters; the object stays inside.
    pub r_max: f64,
    /// Standard deviation of the per-coordinate Gaussian step, meters.
    pub step_sigma: f64,
    /// Sample period in seconds (timestamps only; time is simulated).
    pub sample_period_s: f64,
    /// Seed of the world's walk.
    pub seed: u64,
}

impl WorldConfig {
    pub fn new(
        r_min: f64,
        r_max: f64,
        step_sigma: f64,
        sample_period_s: f64,
        seed: u64,
    ) -> Result<Self> {
        if !(r_min.is_finite() && r_max.is_finite() && 0.0 < r_min && r_min < r_max) {
            return Err(Error::InvalidConfig(format!(
                "annulus radii must satisfy 0 < r_min < r_max, got [{r_min}, {r_max}]"
            )));
        }
        if !step_sigma.is_finite() || step_sigma < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "step_sigma must be non-negative, got {step_sigma}"
            )));
        }
        if !sample_period_s.is_finite() || sample_period_s <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "sample_period_s must be positive, got {sample_period_s}"
            )));
        }
        Ok(Self {
            r_min,
            r_max,
            step_sigma,
            sample_period_s,
            seed,
        })
    }
}

impl Default for WorldConfig {
    fn default() -> Self {
        Self {
            r_min: 0.5,
            r_max: 5.0,
            step_sigma: 0.25,
            sample_period_s: 0.1,
            seed: 0,
        }
    }
}

/// Object position; the robot sits at the origin with fixed orientation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ObjectPose {
    pub x: f64,
    pub y: f64,
}

impl ObjectPose {
    /// Distance from the robot.
    pub fn radius(&self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Bearing from the robot's forward axis, in (-pi, pi].
    pub fn bearing(&self) -> f64 {
        self.y.atan2(self.x)
    }
}

/// Advances the pose by a Gaussian step on each coordinate, radially
/// projecting back into the annulus if a bound is violated. The output
/// always satisfies `r_min <= radius <= r_max`.
pub fn step(pose: ObjectPose, cfg: &WorldConfig, rng: &mut impl Rng) -> ObjectPose {
    let normal = Normal::new(0.0, cfg.step_sigma).expect("sigma validated at construction");
    let x = pose.x + normal.sample(rng);
    let y = pose.y + normal.sample(rng);
    clamp_to_annulus(x, y, cfg)
}

fn clamp_to_annulus(x: f64, y: f64, cfg: &WorldConfig) -> ObjectPose {
    let r = x.hypot(y);
    if r == 0.0 {
        return ObjectPose {
            x: cfg.r_min,
            y: 0.0,
        };
    }
    let mut pose = if r < cfg.r_min {
        let scale = cfg.r_min / r;
        ObjectPose {
            x: x * scale,
            y: y * scale,
        }
    } else if r > cfg.r_max {
        let scale = cfg.r_max / r;
        ObjectPose {
            x: x * scale,
            y: y * scale,
        }
    } else {
        return ObjectPose { x, y };
    };
    // Rescaling can land one ulp outside the bound; nudge until contained.
    while pose.radius() < cfg.r_min {
        pose.x *= 1.0 + f64::EPSILON;
        pose.y *= 1.0 + f64::EPSILON;
    }
    while pose.radius() > cfg.r_max {
        pose.x *= 1.0 - f64::EPSILON;
        pose.y *= 1.0 - f64::EPSILON;
    }
    pose
}

/// Reads the sensors: front if the bearing lies strictly inside
/// (-pi/2, pi/2), otherwise back. Exactly one event per call; the
/// measure-zero boundary bearings belong to the back sensor.
pub fn sense(pose: &ObjectPose) -> Event {
    if pose.bearing().abs() < FRAC_PI_2 {
        Event::Front
    } else {
        Event::Back
    }
}

/// One timestamped sample of the pose trace.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceSample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    /// Sensed event angle: 0 or pi.
    pub alpha: f64,
}

/// A running world: configuration, current pose and the walk's generator.
///
/// Stepping is stateful and single-threaded; run independent worlds in
/// parallel instead of sharing one.
#[derive(Clone, Debug)]
pub struct World {
    cfg: WorldConfig,
    pose: ObjectPose,
    rng: ChaCha8Rng,
    samples_taken: u64,
}

impl World {
    /// Places the object mid-annulus on the positive x axis (front sector)
    /// and seeds the walk from the configuration.
    pub fn new(cfg: WorldConfig) -> Self {
        let pose = ObjectPose {
            x: (cfg.r_min + cfg.r_max) / 2.0,
            y: 0.0,
        };
        Self {
            rng: rng_from_seed(cfg.seed),
            cfg,
            pose,
            samples_taken: 0,
        }
    }

    pub fn config(&self) -> &WorldConfig {
        &self.cfg
    }

    pub fn pose(&self) -> ObjectPose {
        self.pose
    }

    /// Advances one sample period and returns the new pose.
    pub fn step(&mut self) -> ObjectPose {
        self.pose = step(self.pose, &self.cfg, &mut self.rng);
        self.samples_taken += 1;
        self.pose
    }

    /// Collects `tau` consecutive step-and-sense samples as one window.
    pub fn generate_window(&mut self, tau: usize) -> Result<EventSequence> {
        Ok(self.generate_window_traced(tau)?.0)
    }

    /// Same as [`World::generate_window`], also returning the pose trace.
    pub fn generate_window_traced(
        &mut self,
        tau: usize,
    ) -> Result<(EventSequence, Vec<TraceSample>)> {
        if tau == 0 {
            return Err(Error::InvalidArgument(
                "window length must be at least 1".into(),
            ));
        }
        let mut events = Vec::with_capacity(tau);
        let mut trace = Vec::with_capacity(tau);
        for _ in 0..tau {
            let pose = self.step();
            let event = sense(&pose);
            events.push(event);
            trace.push(TraceSample {
                t: self.samples_taken as f64 * self.cfg.sample_period_s,
                x: pose.x,
                y: pose.y,
                alpha: event.angle(),
            });
        }
        Ok((EventSequence::new(events)?, trace))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoder::{encode_batch, online_update, EncoderConfig, InitState};
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn zero_sigma_leaves_the_pose_unchanged() {
        let cfg = WorldConfig::new(1.0, 3.0, 0.0, 0.1, 5).unwrap();
        let mut world = World::new(cfg);
        let before = world.pose();
        let after = world.step();
        assert_eq!(before, after);
    }

    #[test]
    fn inward_violations_project_onto_the_inner_boundary() {
        let cfg = WorldConfig::new(1.0, 3.0, 0.1, 0.1, 0).unwrap();
        let projected = clamp_to_annulus(0.3, 0.1, &cfg);
        assert!((projected.radius() - cfg.r_min).abs() < 1e-12);
        assert!(projected.radius() >= cfg.r_min);
        // Direction is preserved.
        assert!((projected.bearing() - 0.1f64.atan2(0.3)).abs() < 1e-12);
    }

    #[test]
    fn outward_violations_project_onto_the_outer_boundary() {
        let cfg = WorldConfig::new(1.0, 3.0, 0.1, 0.1, 0).unwrap();
        let projected = clamp_to_annulus(-10.0, 4.0, &cfg);
        assert!((projected.radius() - cfg.r_max).abs() < 1e-12);
        assert!(projected.radius() <= cfg.r_max);
    }

    #[test]
    fn degenerate_origin_lands_on_the_inner_boundary() {
        let cfg = WorldConfig::new(1.0, 3.0, 0.1, 0.1, 0).unwrap();
        let projected = clamp_to_annulus(0.0, 0.0, &cfg);
        assert_eq!(projected, ObjectPose { x: 1.0, y: 0.0 });
    }

    #[test]
    fn long_walk_never_leaves_the_annulus() {
        let cfg = WorldConfig::new(0.5, 2.0, 0.8, 0.1, 99).unwrap();
        let mut world = World::new(cfg);
        for _ in 0..100_000 {
            let pose = world.step();
            let r = pose.radius();
            assert!(r >= cfg.r_min && r <= cfg.r_max, "radius {r} escaped");
        }
    }

    #[test]
    fn sensing_splits_the_plane_at_half_pi() {
        assert_eq!(sense(&ObjectPose { x: 1.0, y: 0.3 }), Event::Front);
        assert_eq!(sense(&ObjectPose { x: -1.0, y: 0.1 }), Event::Back);
        // Boundary bearing belongs to the back sensor.
        assert_eq!(sense(&ObjectPose { x: 0.0, y: 1.0 }), Event::Back);
        assert_eq!(sense(&ObjectPose { x: 0.0, y: -1.0 }), Event::Back);
    }

    #[test]
    fn window_back_count_matches_a_recount_over_the_trace() {
        let mut world = World::new(WorldConfig::default());
        let (seq, trace) = world.generate_window_traced(500).unwrap();
        let recounted = trace
            .iter()
            .filter(|s| s.y.atan2(s.x).abs() >= FRAC_PI_2)
            .count();
        assert_eq!(seq.count_back(), recounted);
        assert_eq!(seq.tau(), 500);
        assert_eq!(seq.count_front() + seq.count_back(), 500);
    }

    #[test]
    fn single_sample_windows_are_valid() {
        let mut world = World::new(WorldConfig::default());
        let seq = world.generate_window(1).unwrap();
        assert_eq!(seq.tau(), 1);
    }

    #[test]
    fn zero_length_windows_are_rejected() {
        let mut world = World::new(WorldConfig::default());
        assert!(world.generate_window(0).is_err());
    }

    #[test]
    fn identical_seeds_reproduce_the_same_window_text() {
        let cfg = WorldConfig {
            seed: 1234,
            ..WorldConfig::default()
        };
        let a = World::new(cfg).generate_window(200).unwrap();
        let b = World::new(cfg).generate_window(200).unwrap();
        assert_eq!(a.to_line(), b.to_line());
    }

    #[test]
    fn trace_timestamps_advance_by_the_sample_period() {
        let cfg = WorldConfig {
            sample_period_s: 0.25,
            ..WorldConfig::default()
        };
        let mut world = World::new(cfg);
        let (_, trace) = world.generate_window_traced(4).unwrap();
        let times: Vec<f64> = trace.iter().map(|s| s.t).collect();
        assert_eq!(times, vec![0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn generated_windows_encode_identically_batch_and_online() {
        let mut world = World::new(WorldConfig::default());
        let tau = 64;
        let cfg = EncoderConfig::new(InitState::Zero, tau).unwrap();
        for _ in 0..10 {
            let seq = world.generate_window(tau).unwrap();
            let folded = seq
                .events()
                .iter()
                .fold(cfg.initial_state(), |s, e| online_update(s, *e, &cfg));
            let batch = encode_batch(&seq, &cfg).unwrap();
            assert!(folded.distance(&batch) < 1e-12);
        }
    }

    #[test]
    fn config_validation_rejects_bad_geometry() {
        assert!(WorldConfig::new(0.0, 3.0, 0.1, 0.1, 0).is_err());
        assert!(WorldConfig::new(2.0, 1.0, 0.1, 0.1, 0).is_err());
        assert!(WorldConfig::new(1.0, 3.0, -0.1, 0.1, 0).is_err());
        assert!(WorldConfig::new(1.0, 3.0, 0.1, 0.0, 0).is_err());
        assert!(WorldConfig::new(1.0, f64::INFINITY, 0.1, 0.1, 0).is_err());
    }
}
