//! Batch experiment orchestration: encode, sample, decode and aggregate
//! over a dataset, with deterministic parallel fan-out.

use qlpsim_core::{
    aggregate, decode, derive_seed, encode_batch, measure_shots, noisy_encode_shots,
    DecodedFrequency, EncoderConfig, Event, EventSequence, InitState, NoiseModel, RunStatistics,
    RNG_ALGORITHM,
};
use rayon::prelude::*;

use crate::dataset::{build_dataset, DatasetSpec};
use crate::HarnessError;

/// Sampling parameters shared by every entry of a run.
#[derive(Clone, Copy, Debug)]
pub struct RunParams {
    /// Shots per repetition (N).
    pub n_shots: u64,
    /// Repetitions per entry (n).
    pub n_reps: u32,
    pub init: InitState,
    pub noise: Option<NoiseModel>,
    pub master_seed: u64,
}

impl RunParams {
    fn validate(&self) -> Result<(), HarnessError> {
        if self.n_shots == 0 {
            return Err(HarnessError::Usage("shots must be at least 1".into()));
        }
        if self.n_reps == 0 {
            return Err(HarnessError::Usage("reps must be at least 1".into()));
        }
        Ok(())
    }

    fn noise_profile(&self) -> String {
        match &self.noise {
            Some(model) => model.profile_string(),
            None => "none".into(),
        }
    }
}

/// A full experiment: the dataset to generate plus the sampling parameters.
#[derive(Clone, Copy, Debug)]
pub struct ExperimentPlan {
    pub dataset: DatasetSpec,
    pub params: RunParams,
}

/// Aggregated result of one dataset entry.
#[derive(Clone, Debug, PartialEq)]
pub struct EntryResult {
    pub tau: usize,
    pub tau1: usize,
    pub true_f1: f64,
    pub stats: RunStatistics,
    /// Per-repetition decodings, kept for distribution-level analysis.
    /// The CSV row carries only the aggregate.
    pub reps: Vec<DecodedFrequency>,
    pub n_shots: u64,
    pub master_seed: u64,
    pub noise_profile: String,
}

/// Total number of prepare-and-measure experiments a run performs:
/// `entries * reps * shots`.
pub fn total_experiments(entries: usize, params: &RunParams) -> u64 {
    entries as u64 * params.n_reps as u64 * params.n_shots
}

/// Runs every (entry, repetition) pair of the given windows.
///
/// Work fans out over a thread pool; each pair owns a child seed derived
/// from `(master_seed, entry_index, repetition_index)` and results are
/// reduced in `(entry, repetition)` order, so the output is identical
/// regardless of scheduling. Without noise each repetition samples the
/// batch-encoded state through the binomial fast path; with noise it walks
/// the per-shot trajectory of the compiled window.
pub fn run_entries(
    sequences: &[EventSequence],
    params: &RunParams,
) -> Result<Vec<EntryResult>, HarnessError> {
    params.validate()?;
    if sequences.is_empty() {
        return Err(HarnessError::Data("no input windows to run".into()));
    }

    let reps = params.n_reps as usize;
    let jobs: Vec<(usize, usize)> = (0..sequences.len())
        .flat_map(|entry| (0..reps).map(move |rep| (entry, rep)))
        .collect();

    let decoded: Vec<DecodedFrequency> = jobs
        .par_iter()
        .map(|&(entry, rep)| -> Result<DecodedFrequency, HarnessError> {
            let run = || -> Result<DecodedFrequency, qlpsim_core::Error> {
                let seq = &sequences[entry];
                let cfg = EncoderConfig::new(params.init, seq.tau())?;
                let seed = derive_seed(params.master_seed, &[entry as u64, rep as u64]);
                let shots = match &params.noise {
                    Some(model) => noisy_encode_shots(seq, &cfg, params.n_shots, model, seed)?,
                    None => {
                        let state = encode_batch(seq, &cfg)?;
                        measure_shots(&state, params.n_shots, None, seed)?
                    }
                };
                Ok(decode(&shots))
            };
            run().map_err(|err| {
                HarnessError::Data(format!("window {entry}, repetition {rep}: {err}"))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let profile = params.noise_profile();
    sequences
        .iter()
        .enumerate()
        .map(|(entry, seq)| {
            let runs = &decoded[entry * reps..(entry + 1) * reps];
            let true_f1 = seq.relative_frequency(Event::Back);
            let stats = aggregate(runs, true_f1)?;
            Ok(EntryResult {
                tau: seq.tau(),
                tau1: seq.count_back(),
                true_f1,
                stats,
                reps: runs.to_vec(),
                n_shots: params.n_shots,
                master_seed: params.master_seed,
                noise_profile: profile.clone(),
            })
        })
        .collect()
}

/// Generates the plan's dataset and runs it.
pub fn run_plan(plan: &ExperimentPlan) -> Result<Vec<EntryResult>, HarnessError> {
    let sequences = build_dataset(&plan.dataset);
    run_entries(&sequences, &plan.params)
}

/// Header of the results CSV.
pub const RESULTS_CSV_HEADER: &str =
    "tau,tau1,true_f1,mean_raw,std_raw,mean_corrected,std_corrected,eps,eps_raw,n_reps,n_shots,seed,noise_profile";

/// Renders results as CSV. The first line records the PRNG algorithm;
/// floats are printed as shortest round-trippable decimals, so the output
/// is byte-deterministic for a given run.
pub fn write_results_csv(entries: &[EntryResult]) -> String {
    let mut out = format!("# rng={RNG_ALGORITHM}\n{RESULTS_CSV_HEADER}\n");
    for e in entries {
        let s = &e.stats;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            e.tau,
            e.tau1,
            e.true_f1,
            s.mean_raw,
            s.std_raw,
            s.mean_corrected,
            s.std_corrected,
            s.eps,
            s.eps_raw,
            s.n_reps,
            e.n_shots,
            e.master_seed,
            e.noise_profile
        ));
    }
    out
}

/// Parses a results CSV written by [`write_results_csv`]. Comment lines are
/// skipped; the header must match exactly.
pub fn parse_results_csv(text: &str) -> Result<Vec<EntryResult>, HarnessError> {
    let mut rows = Vec::new();
    let mut header_seen = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !header_seen {
            if line != RESULTS_CSV_HEADER {
                return Err(HarnessError::Data(format!(
                    "results line {line_no}: unexpected header {line:?}"
                )));
            }
            header_seen = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 13 {
            return Err(HarnessError::Data(format!(
                "results line {line_no}: expected 13 fields, found {}",
                fields.len()
            )));
        }
        let parse_int = |s: &str| -> Result<u64, HarnessError> {
            s.parse().map_err(|_| {
                HarnessError::Data(format!("results line {line_no}: bad integer {s:?}"))
            })
        };
        let parse_float = |s: &str| -> Result<f64, HarnessError> {
            s.parse().map_err(|_| {
                HarnessError::Data(format!("results line {line_no}: bad number {s:?}"))
            })
        };
        rows.push(EntryResult {
            tau: parse_int(fields[0])? as usize,
            tau1: parse_int(fields[1])? as usize,
            true_f1: parse_float(fields[2])?,
            stats: RunStatistics {
                mean_raw: parse_float(fields[3])?,
                std_raw: parse_float(fields[4])?,
                mean_corrected: parse_float(fields[5])?,
                std_corrected: parse_float(fields[6])?,
                eps: parse_float(fields[7])?,
                eps_raw: parse_float(fields[8])?,
                n_reps: parse_int(fields[9])? as usize,
            },
            reps: Vec::new(), // per-repetition values are not serialized
            n_shots: parse_int(fields[10])?,
            master_seed: parse_int(fields[11])?,
            noise_profile: fields[12].to_string(),
        });
    }
    if !header_seen {
        return Err(HarnessError::Data("results file has no header".into()));
    }
    Ok(rows)
}

/// Renders results as a gnuplot-compatible data file: `#`-commented header,
/// whitespace-separated columns `true_f1 mean_raw std_raw mean_corrected
/// std_corrected eps eps_raw`, one block per noise profile separated by a
/// blank line.
pub fn write_plot_data(entries: &[EntryResult]) -> String {
    let mut out = format!(
        "# rng={RNG_ALGORITHM}\n# true_f1 mean_raw std_raw mean_corrected std_corrected eps eps_raw\n"
    );
    let mut previous_profile: Option<&str> = None;
    for e in entries {
        match previous_profile {
            Some(profile) if profile == e.noise_profile => {}
            Some(_) => {
                out.push('\n');
                out.push_str(&format!("# profile: {}\n", e.noise_profile));
            }
            None => out.push_str(&format!("# profile: {}\n", e.noise_profile)),
        }
        previous_profile = Some(&e.noise_profile);
        let s = &e.stats;
        out.push_str(&format!(
            "{} {} {} {} {} {} {}\n",
            e.true_f1, s.mean_raw, s.std_raw, s.mean_corrected, s.std_corrected, s.eps, s.eps_raw
        ));
    }
    out
}
