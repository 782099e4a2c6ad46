//! Event sequences and their encoding into qubit states.
//!
//! A window of `tau` binary sensor events is stored in the polar angle of a
//! single qubit: each "back" event advances theta by the fraction `pi/tau`,
//! so a completed window satisfies `theta = pi * f_back` with `f_back` the
//! relative frequency of back events. Batch encoding fuses the commuting
//! per-event rotations into one; online encoding applies them as events
//! arrive and reaches the same state at the window boundary.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::qubit::{QubitState, Unitary2};

/// A single sensor event: the object was seen in front of or behind the
/// robot. Front maps to angle 0 and the basis state `|0>`, back to angle
/// `pi` and `|1>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Event {
    Front,
    Back,
}

impl Event {
    /// The event angle: 0 for front, `pi` for back.
    pub fn angle(self) -> f64 {
        match self {
            Event::Front => 0.0,
            Event::Back => PI,
        }
    }

    /// Accepts exactly 0 or `pi`; anything else is rejected.
    pub fn from_angle(angle: f64) -> Result<Self> {
        if angle == 0.0 {
            Ok(Event::Front)
        } else if angle == PI {
            Ok(Event::Back)
        } else {
            Err(Error::InvalidEventAngle { angle })
        }
    }

    /// Text-format character: `F` for front, `B` for back.
    pub fn to_char(self) -> char {
        match self {
            Event::Front => 'F',
            Event::Back => 'B',
        }
    }
}

/// An ordered, non-empty window of events.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventSequence {
    events: Vec<Event>,
}

impl EventSequence {
    /// Wraps an event list; the list must be non-empty.
    pub fn new(events: Vec<Event>) -> Result<Self> {
        if events.is_empty() {
            return Err(Error::EmptySequence);
        }
        Ok(Self { events })
    }

    /// Window length `tau`.
    pub fn tau(&self) -> usize {
        self.events.len()
    }

    /// Number of front events.
    pub fn count_front(&self) -> usize {
        self.events.iter().filter(|e| **e == Event::Front).count()
    }

    /// Number of back events.
    pub fn count_back(&self) -> usize {
        self.events.iter().filter(|e| **e == Event::Back).count()
    }

    /// The events in acquisition order.
    pub fn events(&self) -> &[Event] {
        &self.events
    }

    /// Relative frequency of `event` in the window; the front and back
    /// frequencies sum to 1.
    pub fn relative_frequency(&self, event: Event) -> f64 {
        let count = self.events.iter().filter(|e| **e == event).count();
        count as f64 / self.tau() as f64
    }

    /// Parses one `F`/`B` line (no whitespace, no newline).
    pub fn from_line(line: &str) -> Result<Self> {
        parse_line(1, line)
    }

    /// Renders the window as one `F`/`B` line without a terminator.
    pub fn to_line(&self) -> String {
        self.events.iter().map(|e| e.to_char()).collect()
    }
}

fn parse_line(line_no: usize, line: &str) -> Result<EventSequence> {
    let mut events = Vec::with_capacity(line.len());
    for (idx, ch) in line.chars().enumerate() {
        match ch {
            'F' => events.push(Event::Front),
            'B' => events.push(Event::Back),
            found => {
                return Err(Error::InvalidSequenceChar {
                    line: line_no,
                    column: idx + 1,
                    found,
                })
            }
        }
    }
    EventSequence::new(events)
}

/// Parses the window text format: one `F`/`B` line per window, newline
/// terminated. An empty line is rejected.
pub fn parse_sequences(text: &str) -> Result<Vec<EventSequence>> {
    text.lines()
        .enumerate()
        .map(|(idx, line)| parse_line(idx + 1, line))
        .collect()
}

/// Renders windows in the text format, one line per window, each line
/// `\n`-terminated.
pub fn format_sequences(sequences: &[EventSequence]) -> String {
    let mut out = String::new();
    for seq in sequences {
        out.push_str(&seq.to_line());
        out.push('\n');
    }
    out
}

/// Initial state of the encoding qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitState {
    /// Start from `|0>`; only back events rotate, by `pi/tau` each.
    Zero,
    /// Start from `|+>`; front and back events rotate by `-pi/(2 tau)` and
    /// `+pi/(2 tau)` respectively.
    Plus,
}

/// Window length and initial-state choice for the encoder.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EncoderConfig {
    init: InitState,
    tau: usize,
}

impl EncoderConfig {
    /// `tau` is the fixed window length and must be at least 1.
    pub fn new(init: InitState, tau: usize) -> Result<Self> {
        if tau == 0 {
            return Err(Error::InvalidConfig(
                "window length tau must be at least 1".into(),
            ));
        }
        Ok(Self { init, tau })
    }

    pub fn init(&self) -> InitState {
        self.init
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    /// The state the qubit is (re)prepared in at each window start.
    pub fn initial_state(&self) -> QubitState {
        match self.init {
            InitState::Zero => QubitState::zero(),
            InitState::Plus => QubitState::plus(),
        }
    }
}

/// The unitary applied for one event under the given configuration.
pub fn event_operator(event: Event, cfg: &EncoderConfig) -> Unitary2 {
    let tau = cfg.tau() as f64;
    match (cfg.init(), event) {
        (InitState::Zero, Event::Front) => Unitary2::identity(),
        (InitState::Zero, Event::Back) => Unitary2::rotation_y(PI / tau),
        (InitState::Plus, Event::Front) => Unitary2::rotation_y(-PI / (2.0 * tau)),
        (InitState::Plus, Event::Back) => Unitary2::rotation_y(PI / (2.0 * tau)),
    }
}

/// Encodes a complete window into a qubit state.
///
/// All per-event operators are rotations about the same axis, so they are
/// fused into a single net rotation here; the result carries
/// `theta = pi * count_back / tau` for either initial state. Fails if the
/// window length differs from the configured `tau`.
pub fn encode_batch(seq: &EventSequence, cfg: &EncoderConfig) -> Result<QubitState> {
    if seq.tau() != cfg.tau() {
        return Err(Error::WindowLengthMismatch {
            expected: cfg.tau(),
            actual: seq.tau(),
        });
    }
    let tau = cfg.tau() as f64;
    let net = match cfg.init() {
        InitState::Zero => PI * seq.count_back() as f64 / tau,
        InitState::Plus => {
            let signed = seq.count_back() as f64 - seq.count_front() as f64;
            signed * PI / (2.0 * tau)
        }
    };
    Unitary2::rotation_y(net).apply(cfg.initial_state())
}

/// Applies one event's operator to the running state (online mode).
pub fn online_update(state: QubitState, event: Event, cfg: &EncoderConfig) -> QubitState {
    event_operator(event, cfg).apply_unchecked(state)
}

/// Stateful per-event encoder for the online workflow.
///
/// Holds the running qubit state within the current window. Decoding
/// guarantees only hold at window boundaries; between them the state is
/// exposed but flagged incomplete. A session is a single-writer object:
/// callers must serialize access externally.
#[derive(Clone, Debug)]
pub struct OnlineEncoder {
    cfg: EncoderConfig,
    state: QubitState,
    events_in_window: usize,
}

impl OnlineEncoder {
    pub fn new(cfg: EncoderConfig) -> Self {
        Self {
            cfg,
            state: cfg.initial_state(),
            events_in_window: 0,
        }
    }

    /// Absorbs one event and returns the updated state.
    pub fn push(&mut self, event: Event) -> QubitState {
        self.state = online_update(self.state, event, &self.cfg);
        self.events_in_window += 1;
        self.state
    }

    /// Current state, possibly mid-window.
    pub fn state(&self) -> QubitState {
        self.state
    }

    /// Number of events absorbed in the current window.
    pub fn events_in_window(&self) -> usize {
        self.events_in_window
    }

    /// True once exactly `tau` events have been absorbed.
    pub fn window_complete(&self) -> bool {
        self.events_in_window == self.cfg.tau()
    }

    /// Re-prepares the initial state for the next window.
    pub fn reset(&mut self) {
        self.state = self.cfg.initial_state();
        self.events_in_window = 0;
    }
}
