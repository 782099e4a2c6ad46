//! Online workflow: per-event state updates driven by the world simulation,
//! with sampling and reset at each window boundary.

use qlpsim_core::{
    decode, derive_seed, measure_shots, sense, DecodedFrequency, EncoderConfig, Event,
    EventSequence, InitState, OnlineEncoder, QubitState, TraceSample, World, WorldConfig,
    RNG_ALGORITHM,
};

use crate::HarnessError;

/// Parameters of an online run. `seed` drives the window measurements; the
/// world walk is seeded separately through [`WorldConfig`].
#[derive(Clone, Copy, Debug)]
pub struct OnlineRunParams {
    pub tau: usize,
    pub windows: usize,
    pub n_shots: u64,
    pub init: InitState,
    pub seed: u64,
}

/// Outcome of one completed window.
#[derive(Clone, Debug)]
pub struct WindowResult {
    pub index: usize,
    pub sequence: EventSequence,
    /// Pre-measurement state at the window boundary.
    pub state: QubitState,
    pub decoded: DecodedFrequency,
    /// Child seed used to sample this window.
    pub seed: u64,
}

/// All windows of an online run plus the full pose trace.
#[derive(Clone, Debug)]
pub struct OnlineRun {
    pub windows: Vec<WindowResult>,
    pub trace: Vec<TraceSample>,
}

/// Streams `windows` windows out of the world: every sample period the
/// object steps, the sensors fire, and the event is applied to the state
/// synchronously. At each window boundary the state is sampled with
/// `n_shots` noiseless shots, decoded, and reset to the initial state.
pub fn run_online(
    world_cfg: &WorldConfig,
    params: &OnlineRunParams,
) -> Result<OnlineRun, HarnessError> {
    if params.windows == 0 {
        return Err(HarnessError::Usage("windows must be at least 1".into()));
    }
    if params.n_shots == 0 {
        return Err(HarnessError::Usage("shots must be at least 1".into()));
    }
    let cfg = EncoderConfig::new(params.init, params.tau)?;
    let mut world = World::new(*world_cfg);
    let mut encoder = OnlineEncoder::new(cfg);
    let mut windows = Vec::with_capacity(params.windows);
    let mut trace = Vec::with_capacity(params.windows * params.tau);

    for index in 0..params.windows {
        let mut events = Vec::with_capacity(params.tau);
        for step_in_window in 0..params.tau {
            let pose = world.step();
            let event = sense(&pose);
            encoder.push(event);
            events.push(event);
            trace.push(TraceSample {
                t: (index * params.tau + step_in_window + 1) as f64 * world_cfg.sample_period_s,
                x: pose.x,
                y: pose.y,
                alpha: event.angle(),
            });
        }
        debug_assert!(encoder.window_complete());
        let state = encoder.state();
        let seed = derive_seed(params.seed, &[index as u64]);
        let shots = measure_shots(&state, params.n_shots, None, seed)?;
        windows.push(WindowResult {
            index,
            sequence: EventSequence::new(events)?,
            state,
            decoded: decode(&shots),
            seed,
        });
        encoder.reset();
    }
    Ok(OnlineRun { windows, trace })
}

/// Header of the online results CSV.
pub const ONLINE_CSV_HEADER: &str = "window,tau,tau1,true_f1,theta,raw,corrected,eps,n_shots,seed";

/// Renders the per-window results as CSV (byte-deterministic).
pub fn write_online_csv(run: &OnlineRun, n_shots: u64) -> String {
    let mut out = format!("# rng={RNG_ALGORITHM}\n{ONLINE_CSV_HEADER}\n");
    for w in &run.windows {
        let true_f1 = w.sequence.relative_frequency(Event::Back);
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            w.index,
            w.sequence.tau(),
            w.sequence.count_back(),
            true_f1,
            w.state.bloch().theta(),
            w.decoded.raw(),
            w.decoded.corrected(),
            (true_f1 - w.decoded.corrected()).abs(),
            n_shots,
            w.seed
        ));
    }
    out
}

/// Renders the pose trace as CSV with columns `t,x,y,alpha`.
pub fn write_trace_csv(run: &OnlineRun) -> String {
    let mut out = String::from("t,x,y,alpha\n");
    for s in &run.trace {
        out.push_str(&format!("{},{},{},{}\n", s.t, s.x, s.y, s.alpha));
    }
    out
}
