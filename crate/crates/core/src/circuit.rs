//! Explicit circuit descriptions for encoded windows, their text emission
//! and parsing.
//!
//! The text format is a strict single-qubit subset of OPENQASM 2.0: the
//! fixed header, `ry(<angle>)` and `h` gates on `q[0]`, and an optional
//! final `measure q[0] -> c[0];`. Angles are printed as the shortest
//! decimal that round-trips a 64-bit float, so emission is byte-stable and
//! `parse(emit(c))` reproduces `c` exactly. Anything outside the subset is
//! a parse error, not a warning.

use std::f64::consts::PI;
use std::fmt;

use crate::encoder::{EncoderConfig, Event, EventSequence, InitState};
use crate::error::{Error, Result};
use crate::qubit::{QubitState, Unitary2};

/// A single-qubit gate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    /// Rotation about the y axis by the given angle (radians).
    Ry(f64),
    /// Hadamard.
    H,
}

impl Gate {
    /// The unitary matrix of this gate.
    pub fn unitary(&self) -> Unitary2 {
        match self {
            Gate::Ry(angle) => Unitary2::rotation_y(*angle),
            Gate::H => Unitary2::hadamard(),
        }
    }
}

/// An ordered gate list with an optional terminal measurement.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Circuit {
    gates: Vec<Gate>,
    measured: bool,
}

impl Circuit {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a gate; nothing may follow the measurement.
    pub fn push(&mut self, gate: Gate) -> Result<()> {
        if self.measured {
            return Err(Error::GateAfterMeasure);
        }
        if let Gate::Ry(angle) = gate {
            if !angle.is_finite() {
                return Err(Error::NonFinite {
                    context: "rotation gate angle",
                });
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Marks the terminal measurement; at most one is allowed.
    pub fn measure(&mut self) -> Result<()> {
        if self.measured {
            return Err(Error::GateAfterMeasure);
        }
        self.measured = true;
        Ok(())
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn is_measured(&self) -> bool {
        self.measured
    }

    /// Statevector simulation from `|0>`, ignoring the measurement marker.
    pub fn simulate(&self) -> QubitState {
        self.gates.iter().fold(QubitState::zero(), |state, gate| {
            gate.unitary().apply_unchecked(state)
        })
    }
}

/// Compiles a window into its circuit.
///
/// With the `|0>` initial state the circuit is exactly `count_back`
/// rotations `ry(pi/tau)`; with the `|+>` initial state it is an `h`
/// followed by one signed `ry(pi/(2 tau))` per event. Equal-angle gates are
/// deliberately not fused so the per-event structure stays inspectable; the
/// terminal measurement is always present.
pub fn compile(seq: &EventSequence, cfg: &EncoderConfig) -> Result<Circuit> {
    if seq.tau() != cfg.tau() {
        return Err(Error::WindowLengthMismatch {
            expected: cfg.tau(),
            actual: seq.tau(),
        });
    }
    let tau = cfg.tau() as f64;
    let mut circuit = Circuit::new();
    match cfg.init() {
        InitState::Zero => {
            let fraction = PI / tau;
            for _ in 0..seq.count_back() {
                circuit.push(Gate::Ry(fraction))?;
            }
        }
        InitState::Plus => {
            circuit.push(Gate::H)?;
            let half_fraction = PI / (2.0 * tau);
            for event in seq.events() {
                let angle = match event {
                    Event::Front => -half_fraction,
                    Event::Back => half_fraction,
                };
                circuit.push(Gate::Ry(angle))?;
            }
        }
    }
    circuit.measure()?;
    Ok(circuit)
}

const HEADER: &str = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[1];\ncreg c[1];\n";

/// Serializes a circuit to the text format. Byte-deterministic; every line
/// is `\n`-terminated with no trailing whitespace.
pub fn emit(circuit: &Circuit) -> String {
    use fmt::Write;
    let mut out = String::from(HEADER);
    for gate in circuit.gates() {
        match gate {
            Gate::Ry(angle) => writeln!(out, "ry({angle}) q[0];").expect("string write"),
            Gate::H => out.push_str("h q[0];\n"),
        }
    }
    if circuit.is_measured() {
        out.push_str("measure q[0] -> c[0];\n");
    }
    out
}

/// A parse diagnostic with its position (1-based line and column).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            column,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at line {}, column {}: {}",
            self.line, self.column, self.message
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Expect {
    Version,
    Include,
    QReg,
    CReg,
    Body,
}

/// Parses the text format back into a [`Circuit`].
///
/// Accepts exactly the emitted grammar plus `//` comments (full-line or
/// trailing) and blank lines. Unknown gates, multi-qubit registers,
/// non-finite angles and statements after the measurement are rejected
/// with a positioned diagnostic.
pub fn parse(text: &str) -> std::result::Result<Circuit, ParseError> {
    let mut expect = Expect::Version;
    let mut circuit = Circuit::new();
    let mut line_count = 0;

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        line_count = line_no;
        let without_comment = match raw_line.find("//") {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        };
        let statement = without_comment.trim();
        if statement.is_empty() {
            continue;
        }
        // Columns refer to the original line.
        let offset = without_comment.len() - without_comment.trim_start().len();
        let col = |inner: usize| offset + inner;

        match expect {
            Expect::Version => {
                if statement != "OPENQASM 2.0;" {
                    return Err(ParseError::new(
                        line_no,
                        col(1),
                        "expected `OPENQASM 2.0;` header",
                    ));
                }
                expect = Expect::Include;
            }
            Expect::Include => {
                if statement != "include \"qelib1.inc\";" {
                    return Err(ParseError::new(
                        line_no,
                        col(1),
                        "expected `include \"qelib1.inc\";`",
                    ));
                }
                expect = Expect::QReg;
            }
            Expect::QReg => {
                parse_register(statement, "qreg", "q", line_no, col(1))?;
                expect = Expect::CReg;
            }
            Expect::CReg => {
                parse_register(statement, "creg", "c", line_no, col(1))?;
                expect = Expect::Body;
            }
            Expect::Body => {
                if circuit.is_measured() {
                    return Err(ParseError::new(
                        line_no,
                        col(1),
                        "statement after measurement (the measurement must be last)",
                    ));
                }
                if statement == "measure q[0] -> c[0];" {
                    circuit.measure().expect("single measurement");
                } else if let Some(rest) = statement.strip_prefix("ry(") {
                    let close = rest.find(')').ok_or_else(|| {
                        ParseError::new(line_no, col(1), "missing `)` after rotation angle")
                    })?;
                    let angle_text = &rest[..close];
                    let angle_col = col(4);
                    let angle: f64 = angle_text.parse().map_err(|_| {
                        ParseError::new(
                            line_no,
                            angle_col,
                            format!("invalid rotation angle `{angle_text}`"),
                        )
                    })?;
                    if !angle.is_finite() {
                        return Err(ParseError::new(
                            line_no,
                            angle_col,
                            format!("rotation angle `{angle_text}` is not finite"),
                        ));
                    }
                    let target = &rest[close + 1..];
                    if target != " q[0];" {
                        return Err(ParseError::new(
                            line_no,
                            col(4 + close + 1),
                            "expected ` q[0];` after the rotation angle",
                        ));
                    }
                    circuit.push(Gate::Ry(angle)).expect("not yet measured");
                } else if let Some(target) = statement.strip_prefix("h ") {
                    if target != "q[0];" {
                        return Err(ParseError::new(
                            line_no,
                            col(3),
                            "expected `q[0];` after `h`",
                        ));
                    }
                    circuit.push(Gate::H).expect("not yet measured");
                } else {
                    let ident: String = statement
                        .chars()
                        .take_while(|c| c.is_ascii_alphanumeric() || *c == '_')
                        .collect();
                    let message = if ident.is_empty() {
                        "unrecognized statement".to_string()
                    } else if matches!(ident.as_str(), "qreg" | "creg" | "include" | "OPENQASM") {
                        format!("duplicate `{ident}` declaration")
                    } else {
                        format!("unsupported gate `{ident}`")
                    };
                    return Err(ParseError::new(line_no, col(1), message));
                }
            }
        }
    }

    if expect != Expect::Body {
        return Err(ParseError::new(
            line_count + 1,
            1,
            "unexpected end of input: incomplete header",
        ));
    }
    Ok(circuit)
}

fn parse_register(
    statement: &str,
    keyword: &str,
    register: &str,
    line_no: usize,
    column: usize,
) -> std::result::Result<(), ParseError> {
    let expected = format!("{keyword} {register}[1];");
    if statement == expected {
        return Ok(());
    }
    // Distinguish a size problem from a malformed declaration.
    let prefix = format!("{keyword} {register}[");
    if let Some(rest) = statement.strip_prefix(prefix.as_str()) {
        if let Some(size_text) = rest.strip_suffix("];") {
            if size_text.chars().all(|c| c.is_ascii_digit()) && size_text != "1" {
                return Err(ParseError::new(
                    line_no,
                    column + prefix.len(),
                    format!("multi-{} register `{register}[{size_text}]` is not supported (only size 1)",
                        if keyword == "qreg" { "qubit" } else { "bit" }),
                ));
            }
        }
    }
    Err(ParseError::new(
        line_no,
        column,
        format!("expected `{expected}`"),
    ))
}
