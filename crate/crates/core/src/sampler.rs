//! Shot-based measurement with seedable randomness and calibration-derived
//! noise.
//!
//! The noiseless path samples the total count `N1` directly from
//! `Binomial(N, |c1|^2)`, which keeps large studies cheap. Noisy runs walk a
//! per-shot trajectory instead: re-prepare, apply each gate with optional
//! depolarizing and amplitude-damping disturbances, sample the Born outcome,
//! and flip the recorded bit with the readout-error probability.
//!
//! All sampling uses the ChaCha8 generator from [`crate::seed`], so a result
//! is fully determined by its inputs and 64-bit seed.

use rand::Rng;
use rand_distr::{Binomial, Distribution};

use crate::circuit;
use crate::encoder::{encode_batch, EncoderConfig, EventSequence};
use crate::error::{Error, Result};
use crate::qubit::{PauliAxis, QubitState, Unitary2};
use crate::seed::rng_from_seed;

/// Counts from `n_shots` prepare-and-measure experiments.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShotResult {
    n_shots: u64,
    n0: u64,
    n1: u64,
    seed: u64,
}

impl ShotResult {
    /// Counts must conserve shots: `n0 + n1 = n_shots`, with `n_shots >= 1`.
    pub fn new(n_shots: u64, n0: u64, n1: u64, seed: u64) -> Result<Self> {
        if n_shots == 0 {
            return Err(Error::InvalidArgument("shot count must be positive".into()));
        }
        if n0 + n1 != n_shots {
            return Err(Error::InvalidArgument(format!(
                "counts do not conserve shots: {n0} + {n1} != {n_shots}"
            )));
        }
        Ok(Self {
            n_shots,
            n0,
            n1,
            seed,
        })
    }

    pub fn n_shots(&self) -> u64 {
        self.n_shots
    }

    pub fn n0(&self) -> u64 {
        self.n0
    }

    pub fn n1(&self) -> u64 {
        self.n1
    }

    /// The seed the counts were drawn with.
    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Per-qubit hardware calibration record.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitCalibration {
    pub t1_us: f64,
    pub t2_us: f64,
    pub frequency_ghz: f64,
    pub readout_error: f64,
    pub u2_error_rate: f64,
}

/// A backend's calibration datasheet: one record per qubit.
#[derive(Clone, Debug, PartialEq)]
pub struct BackendCalibration {
    name: String,
    qubits: Vec<QubitCalibration>,
}

impl BackendCalibration {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits.len()
    }

    pub fn qubit(&self, index: usize) -> Result<&QubitCalibration> {
        self.qubits.get(index).ok_or(Error::QubitIndexOutOfRange {
            backend: self.name.clone(),
            index,
            available: self.qubits.len(),
        })
    }

    /// Parses the flat calibration format: one comma-separated record per
    /// qubit, `backend,qubit,t1_us,t2_us,freq_ghz,readout_error,u2_error`.
    /// Blank lines and `#` comments are skipped. All records must belong to
    /// the same backend and be ordered by qubit index.
    pub fn parse(text: &str) -> Result<Self> {
        let mut name: Option<String> = None;
        let mut qubits = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 7 {
                return Err(Error::InvalidCalibration {
                    line: line_no,
                    message: format!("expected 7 comma-separated fields, found {}", fields.len()),
                });
            }
            let backend = fields[0].trim();
            match &name {
                None => name = Some(backend.to_string()),
                Some(existing) if existing != backend => {
                    return Err(Error::InvalidCalibration {
                        line: line_no,
                        message: format!(
                            "mixed backends in one file: {existing:?} and {backend:?}"
                        ),
                    });
                }
                Some(_) => {}
            }
            let qubit_index: usize =
                fields[1]
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidCalibration {
                        line: line_no,
                        message: format!("invalid qubit index {:?}", fields[1]),
                    })?;
            if qubit_index != qubits.len() {
                return Err(Error::InvalidCalibration {
                    line: line_no,
                    message: format!(
                        "qubit records must be ordered: expected index {}, found {qubit_index}",
                        qubits.len()
                    ),
                });
            }
            let mut numbers = [0.0f64; 5];
            for (slot, field) in numbers.iter_mut().zip(&fields[2..]) {
                *slot = field
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidCalibration {
                        line: line_no,
                        message: format!("invalid numeric field {field:?}"),
                    })?;
                if !slot.is_finite() {
                    return Err(Error::InvalidCalibration {
                        line: line_no,
                        message: format!("non-finite numeric field {field:?}"),
                    });
                }
            }
            let record = QubitCalibration {
                t1_us: numbers[0],
                t2_us: numbers[1],
                frequency_ghz: numbers[2],
                readout_error: numbers[3],
                u2_error_rate: numbers[4],
            };
            if record.t1_us <= 0.0 || record.t2_us <= 0.0 {
                return Err(Error::InvalidCalibration {
                    line: line_no,
                    message: "relaxation times must be positive".into(),
                });
            }
            if record.t2_us > 2.0 * record.t1_us {
                return Err(Error::InvalidCalibration {
                    line: line_no,
                    message: format!(
                        "T2 = {} exceeds the physical bound 2*T1 = {}",
                        record.t2_us,
                        2.0 * record.t1_us
                    ),
                });
            }
            if !(0.0..=1.0).contains(&record.readout_error)
                || !(0.0..=1.0).contains(&record.u2_error_rate)
            {
                return Err(Error::InvalidCalibration {
                    line: line_no,
                    message: "error rates must lie in [0, 1]".into(),
                });
            }
            qubits.push(record);
        }
        let name = name.ok_or(Error::InvalidCalibration {
            line: 0,
            message: "calibration file contains no records".into(),
        })?;
        Ok(Self { name, qubits })
    }
}

/// Stochastic error channel applied while sampling.
///
/// `readout_flip` flips the recorded classical bit symmetrically;
/// `gate_depolarizing` applies a uniformly random Pauli disturbance after
/// each gate; amplitude damping (when enabled) relaxes toward `|0>` with
/// per-gate strength `gamma = 1 - exp(-gate_time/T1)` via jump/no-jump
/// trajectory branching.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseModel {
    readout_flip: f64,
    gate_depolarizing: f64,
    gate_time_us: f64,
    t1_us: f64,
    damping_enabled: bool,
}

impl NoiseModel {
    pub fn new(
        readout_flip: f64,
        gate_depolarizing: f64,
        gate_time_us: f64,
        t1_us: f64,
        damping_enabled: bool,
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&readout_flip) || !(0.0..=1.0).contains(&gate_depolarizing) {
            return Err(Error::InvalidConfig(
                "noise probabilities must lie in [0, 1]".into(),
            ));
        }
        if gate_time_us.is_nan() || gate_time_us < 0.0 {
            return Err(Error::InvalidConfig(
                "gate time must be non-negative".into(),
            ));
        }
        if t1_us.is_nan() || t1_us < 0.0 {
            return Err(Error::InvalidConfig("T1 must be non-negative".into()));
        }
        Ok(Self {
            readout_flip,
            gate_depolarizing,
            gate_time_us,
            t1_us,
            damping_enabled,
        })
    }

    /// A model in which every channel is switched off.
    pub fn noiseless() -> Self {
        Self {
            readout_flip: 0.0,
            gate_depolarizing: 0.0,
            gate_time_us: 0.0,
            t1_us: f64::INFINITY,
            damping_enabled: false,
        }
    }

    /// Readout channel only; gate errors and damping off.
    pub fn readout_only(readout_flip: f64) -> Result<Self> {
        Self::new(readout_flip, 0.0, 0.0, f64::INFINITY, false)
    }

    pub fn readout_flip(&self) -> f64 {
        self.readout_flip
    }

    pub fn gate_depolarizing(&self) -> f64 {
        self.gate_depolarizing
    }

    pub fn gate_time_us(&self) -> f64 {
        self.gate_time_us
    }

    pub fn t1_us(&self) -> f64 {
        self.t1_us
    }

    pub fn damping_enabled(&self) -> bool {
        self.damping_enabled
    }

    /// Per-gate relaxation strength; zero when the gate time is zero.
    pub fn damping_gamma(&self) -> f64 {
        if !self.damping_enabled || self.gate_time_us == 0.0 {
            return 0.0;
        }
        1.0 - (-self.gate_time_us / self.t1_us).exp()
    }

    /// True when sampling through this model is indistinguishable from the
    /// noiseless path.
    pub fn is_noiseless(&self) -> bool {
        self.readout_flip == 0.0 && self.gate_depolarizing == 0.0 && self.damping_gamma() == 0.0
    }

    /// Compact `key=value` description recorded in results files. Contains
    /// no commas, so it embeds directly in a CSV field.
    pub fn profile_string(&self) -> String {
        format!(
            "ro={};dep={};gt_us={};t1_us={};damp={}",
            self.readout_flip,
            self.gate_depolarizing,
            self.gate_time_us,
            self.t1_us,
            if self.damping_enabled { "on" } else { "off" }
        )
    }
}

/// Builds a noise model from one qubit of a calibration datasheet.
///
/// The readout error becomes the symmetric readout flip, the single-qubit
/// U2 error rate becomes the per-gate depolarizing probability, and the
/// qubit's T1 drives amplitude damping over the supplied gate duration
/// (calibration sheets carry no gate times).
pub fn noise_from_calibration(
    cal: &BackendCalibration,
    qubit_index: usize,
    gate_time_us: f64,
) -> Result<NoiseModel> {
    let qubit = cal.qubit(qubit_index)?;
    NoiseModel::new(
        qubit.readout_error,
        qubit.u2_error_rate,
        gate_time_us,
        qubit.t1_us,
        true,
    )
}

/// Measures `n` identically prepared copies of `state`.
///
/// Without noise the count `n1` is drawn from `Binomial(n, |c1|^2)` in one
/// step; the result is fully determined by `(state, n, seed)`. With a noise
/// model, each shot samples the Born outcome and then flips it with the
/// readout probability. Gate-level noise needs the gate list and is handled
/// by [`noisy_encode_shots`].
pub fn measure_shots(
    state: &QubitState,
    n: u64,
    noise: Option<&NoiseModel>,
    seed: u64,
) -> Result<ShotResult> {
    if n == 0 {
        return Err(Error::InvalidArgument("shot count must be positive".into()));
    }
    let p_one = state.prob_one();
    let mut rng = rng_from_seed(seed);
    let n1 = match noise {
        None => Binomial::new(n, p_one)
            .expect("probability is clamped to [0, 1]")
            .sample(&mut rng),
        Some(model) => {
            let mut ones = 0;
            for _ in 0..n {
                let mut outcome = rng.random::<f64>() < p_one;
                if rng.random::<f64>() < model.readout_flip() {
                    outcome = !outcome;
                }
                if outcome {
                    ones += 1;
                }
            }
            ones
        }
    };
    ShotResult::new(n, n - n1, n1, seed)
}

/// Runs the compiled circuit of a window through a noisy per-shot
/// trajectory and counts the outcomes.
///
/// Each shot re-prepares the configured initial state and applies the
/// window's gates; after every gate a uniformly random Pauli disturbance
/// fires with probability `gate_depolarizing`, then amplitude damping (when
/// enabled) branches between relaxing to `|0>` and renormalized no-jump
/// evolution. The Born outcome is finally flipped with the readout
/// probability. An all-zero model short-circuits to the binomial fast path,
/// so the counts coincide with [`measure_shots`] on the batch-encoded state
/// for the same seed.
pub fn noisy_encode_shots(
    seq: &EventSequence,
    cfg: &EncoderConfig,
    n: u64,
    noise: &NoiseModel,
    seed: u64,
) -> Result<ShotResult> {
    let compiled = circuit::compile(seq, cfg)?;
    if noise.is_noiseless() {
        return measure_shots(&encode_batch(seq, cfg)?, n, None, seed);
    }
    if n == 0 {
        return Err(Error::InvalidArgument("shot count must be positive".into()));
    }
    let gates: Vec<Unitary2> = compiled.gates().iter().map(|g| g.unitary()).collect();
    let gamma = noise.damping_gamma();
    let mut rng = rng_from_seed(seed);
    let mut n1 = 0u64;
    for _ in 0..n {
        let mut state = cfg.initial_state();
        for gate in &gates {
            state = gate.apply_unchecked(state);
            state = apply_gate_noise(state, noise, gamma, &mut rng);
        }
        let mut outcome = rng.random::<f64>() < state.prob_one();
        if rng.random::<f64>() < noise.readout_flip() {
            outcome = !outcome;
        }
        if outcome {
            n1 += 1;
        }
    }
    ShotResult::new(n, n - n1, n1, seed)
}

fn apply_gate_noise(
    state: QubitState,
    noise: &NoiseModel,
    gamma: f64,
    rng: &mut impl Rng,
) -> QubitState {
    let mut state = state;
    let p = noise.gate_depolarizing();
    if p > 0.0 {
        let draw = rng.random::<f64>();
        // Single draw selects among X, Y, Z or no disturbance.
        let pauli = if draw < p / 3.0 {
            Some(PauliAxis::X)
        } else if draw < 2.0 * p / 3.0 {
            Some(PauliAxis::Y)
        } else if draw < p {
            Some(PauliAxis::Z)
        } else {
            None
        };
        if let Some(axis) = pauli {
            state = Unitary2::pauli(axis).apply_unchecked(state);
        }
    }
    if gamma > 0.0 {
        let p_jump = gamma * state.prob_one();
        if rng.random::<f64>() < p_jump {
            state = QubitState::zero();
        } else {
            let c0 = state.c0();
            let c1 = state.c1() * (1.0 - gamma).sqrt();
            let norm = (c0.norm_sqr() + c1.norm_sqr()).sqrt();
            state = QubitState::new_unchecked(c0 / norm, c1 / norm);
        }
    }
    state
}
