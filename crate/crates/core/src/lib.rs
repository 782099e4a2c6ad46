//! Core library of the quantum-like perception simulator.
//!
//! A robot with two presence sensors watches an object move around it and
//! stores the window-level event statistics in a single qubit: each "back"
//! event rotates the state about the y axis by the fraction `pi/tau`, so a
//! completed window of `tau` events carries its back-event frequency in the
//! Bloch polar angle. The crate provides
//!
//! - exact single-qubit linear algebra ([`qubit`]),
//! - event sequences and batch/online frequency encoders ([`encoder`]),
//! - seedable shot sampling with calibration-derived noise ([`sampler`]),
//! - arcsine-corrected decoding and run statistics ([`decoder`]),
//! - circuit compilation with text emission and parsing ([`circuit`]),
//! - the annulus world that produces the event streams ([`env`]),
//! - deterministic seed derivation for parallel studies ([`seed`]).

pub mod circuit;
pub mod decoder;
pub mod encoder;
pub mod env;
pub mod error;
pub mod qubit;
pub mod sampler;
pub mod seed;

pub use circuit::{compile, emit, parse, Circuit, Gate, ParseError};
pub use decoder::{
    aggregate, arcsin_correction, decode, decoding_error, DecodedFrequency, RunStatistics,
};
pub use encoder::{
    encode_batch, event_operator, format_sequences, online_update, parse_sequences, EncoderConfig,
    Event, EventSequence, InitState, OnlineEncoder,
};
pub use env::{sense, step, ObjectPose, TraceSample, World, WorldConfig};
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use qubit::{BlochAngles, PauliAxis, QubitState, Unitary2};
pub use sampler::{
    measure_shots, noise_from_calibration, noisy_encode_shots, BackendCalibration, NoiseModel,
    QubitCalibration, ShotResult,
};
pub use seed::{derive_seed, rng_from_seed, RNG_ALGORITHM};
