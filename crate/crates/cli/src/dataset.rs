//! Sequence dataset generation over an evenly spaced frequency grid.

use qlpsim_core::{derive_seed, rng_from_seed, Event, EventSequence};
use rand::seq::SliceRandom;

use crate::HarnessError;

/// Specification of a dataset: `points` target back-event counts evenly
/// spaced over `[0, tau]`, endpoints included.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DatasetSpec {
    tau: usize,
    points: usize,
    seed: u64,
}

impl DatasetSpec {
    pub fn new(tau: usize, points: usize, seed: u64) -> Result<Self, HarnessError> {
        if tau == 0 {
            return Err(HarnessError::Usage("tau must be at least 1".into()));
        }
        if points < 2 {
            return Err(HarnessError::Usage(
                "a dataset needs at least 2 grid points".into(),
            ));
        }
        Ok(Self { tau, points, seed })
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The grid of target back-event counts: `round(tau * i / (points - 1))`
    /// for `i = 0..points`. Non-decreasing, with both endpoints included.
    pub fn grid(&self) -> Vec<usize> {
        (0..self.points)
            .map(|i| {
                let exact = self.tau as f64 * i as f64 / (self.points - 1) as f64;
                (exact.round() as usize).min(self.tau)
            })
            .collect()
    }
}

/// Generates one uniformly random window per grid point: a shuffled
/// arrangement of the target number of back events among front events.
/// Entry `i` is shuffled with the child seed derived from `(seed, i)`, so
/// the dataset is reproducible and each entry is independent.
pub fn build_dataset(spec: &DatasetSpec) -> Vec<EventSequence> {
    spec.grid()
        .iter()
        .enumerate()
        .map(|(index, &back)| {
            let mut events = vec![Event::Back; back];
            events.extend(std::iter::repeat_n(Event::Front, spec.tau() - back));
            let mut rng = rng_from_seed(derive_seed(spec.seed(), &[index as u64]));
            events.shuffle(&mut rng);
            EventSequence::new(events).expect("tau >= 1")
        })
        .collect()
}
