use std::collections::BTreeMap;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qlpsim_cli::config::{lookup, parse_config, world_from_config};
use qlpsim_cli::online::{run_online, write_online_csv, write_trace_csv, OnlineRunParams};
use qlpsim_cli::report::error_table;
use qlpsim_cli::{
    build_dataset, parse_results_csv, run_entries, total_experiments, write_plot_data,
    write_results_csv, DatasetSpec, HarnessError, RunParams,
};
use qlpsim_core::{
    circuit, encode_batch, format_sequences, noise_from_calibration, parse_sequences,
    BackendCalibration, EncoderConfig, Event, EventSequence, InitState, WorldConfig,
};

#[derive(Parser)]
#[command(
    name = "qlpsim",
    version,
    about = "Encode sensor-event frequencies into a simulated qubit, sample it, and study the decoding error"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum InitArg {
    /// Start each window from |0>
    Zero,
    /// Start each window from the balanced superposition |+>
    Plus,
}

impl From<InitArg> for InitState {
    fn from(arg: InitArg) -> Self {
        match arg {
            InitArg::Zero => InitState::Zero,
            InitArg::Plus => InitState::Plus,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a window file over an evenly spaced back-count grid
    Dataset {
        /// Window length (events per window)
        #[arg(long)]
        tau: Option<usize>,
        /// Number of grid points over [0, tau], endpoints included
        #[arg(long)]
        points: Option<usize>,
        /// Master seed of the dataset shuffles
        #[arg(long)]
        seed: Option<u64>,
        /// Output window file (F/B lines)
        #[arg(long)]
        out: Option<PathBuf>,
        /// key=value defaults for the flags above
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Encode a window file and print its Bloch-angle report
    Encode {
        /// Input window file (F/B lines)
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long, value_enum)]
        init: Option<InitArg>,
        /// Directory for per-window circuit files
        #[arg(long = "emit-qasm")]
        emit_qasm: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Encode, sample and decode every window; write aggregated CSV
    Run {
        /// Input window file (F/B lines)
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// Shots per repetition (N)
        #[arg(long)]
        shots: Option<u64>,
        /// Repetitions per window (n)
        #[arg(long)]
        reps: Option<u32>,
        #[arg(long, value_enum)]
        init: Option<InitArg>,
        /// Calibration file enabling the noisy sampling path
        #[arg(long)]
        noise: Option<PathBuf>,
        /// Qubit index within the calibration file
        #[arg(long)]
        qubit: Option<usize>,
        /// Gate duration driving amplitude damping, microseconds
        #[arg(long = "gate-time-us")]
        gate_time_us: Option<f64>,
        /// Master seed; child seeds derive per (window, repetition)
        #[arg(long)]
        seed: Option<u64>,
        /// Output results CSV
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write a gnuplot-compatible data file
        #[arg(long)]
        plot: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Drive the world simulation through per-event online updates
    Online {
        /// Window length (events per window)
        #[arg(long)]
        tau: Option<usize>,
        /// Number of windows to stream
        #[arg(long)]
        windows: Option<usize>,
        /// key=value world parameters (r_min, r_max, step_sigma, sample_period_s, seed)
        #[arg(long = "world-config")]
        world_config: Option<PathBuf>,
        /// Shots per window-boundary measurement
        #[arg(long)]
        shots: Option<u64>,
        #[arg(long, value_enum)]
        init: Option<InitArg>,
        /// Master seed of the boundary measurements
        #[arg(long)]
        seed: Option<u64>,
        /// Output per-window CSV
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the windows as an F/B event log
        #[arg(long)]
        log: Option<PathBuf>,
        /// Also write the pose trace CSV (t,x,y,alpha)
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Format a results CSV as an error table
    Report {
        /// Input results CSV
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// Print the error table (eps and eps_raw per back count)
        #[arg(long)]
        table2: bool,
    },
    /// Validate a circuit file against the text grammar (`-` for stdin)
    CheckQasm { file: Option<PathBuf> },
}

fn main() -> ExitCode {
    // Die quietly when a downstream pipe closes instead of panicking.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) {
                print!("{err}");
                return ExitCode::SUCCESS;
            }
            eprint!("{err}");
            return ExitCode::from(1);
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn dispatch(command: Command) -> Result<(), HarnessError> {
    match command {
        Command::Dataset {
            tau,
            points,
            seed,
            out,
            config,
        } => {
            let map = load_config(config.as_deref())?;
            let tau = required("--tau", resolve(tau, &map, "tau")?)?;
            let points = required("--points", resolve(points, &map, "points")?)?;
            let seed = resolve(seed, &map, "seed")?.unwrap_or(0);
            let out = required("--out", resolve(out, &map, "out")?)?;
            let spec = DatasetSpec::new(tau, points, seed)?;
            let sequences = build_dataset(&spec);
            write_file(&out, &format_sequences(&sequences))?;
            println!(
                "wrote {} windows of length {} to {}",
                sequences.len(),
                tau,
                out.display()
            );
            Ok(())
        }
        Command::Encode {
            input,
            init,
            emit_qasm,
            config,
        } => {
            let map = load_config(config.as_deref())?;
            let input = required("--in", resolve(input, &map, "in")?)?;
            let init = resolve_init(init, &map)?;
            let sequences = read_sequences(&input)?;
            if let Some(dir) = &emit_qasm {
                std::fs::create_dir_all(dir)?;
            }
            println!("window,tau,tau1,true_f1,theta");
            for (index, seq) in sequences.iter().enumerate() {
                let cfg = EncoderConfig::new(init, seq.tau())?;
                let state = encode_batch(seq, &cfg)?;
                println!(
                    "{},{},{},{},{}",
                    index,
                    seq.tau(),
                    seq.count_back(),
                    seq.relative_frequency(Event::Back),
                    state.bloch().theta()
                );
                if let Some(dir) = &emit_qasm {
                    let compiled = circuit::compile(seq, &cfg)?;
                    let path = dir.join(format!("window_{index:04}.qasm"));
                    write_file(&path, &circuit::emit(&compiled))?;
                }
            }
            Ok(())
        }
        Command::Run {
            input,
            shots,
            reps,
            init,
            noise,
            qubit,
            gate_time_us,
            seed,
            out,
            plot,
            config,
        } => {
            let map = load_config(config.as_deref())?;
            let input = required("--in", resolve(input, &map, "in")?)?;
            let out = required("--out", resolve(out, &map, "out")?)?;
            let plot = resolve(plot, &map, "plot")?;
            let n_shots = resolve(shots, &map, "shots")?.unwrap_or(8192);
            let n_reps = resolve(reps, &map, "reps")?.unwrap_or(30);
            let init = resolve_init(init, &map)?;
            let master_seed = resolve(seed, &map, "seed")?.unwrap_or(0);
            let noise = resolve(noise, &map, "noise")?;
            let qubit = resolve(qubit, &map, "qubit")?.unwrap_or(0);
            let gate_time_us = resolve(gate_time_us, &map, "gate_time_us")?.unwrap_or(0.0);

            let noise = match noise {
                Some(path) => {
                    let cal = BackendCalibration::parse(&read_file(&path)?)?;
                    Some(noise_from_calibration(&cal, qubit, gate_time_us)?)
                }
                None => None,
            };
            let sequences = read_sequences(&input)?;
            let params = RunParams {
                n_shots,
                n_reps,
                init,
                noise,
                master_seed,
            };
            let results = run_entries(&sequences, &params)?;
            write_file(&out, &write_results_csv(&results))?;
            if let Some(path) = plot {
                write_file(&path, &write_plot_data(&results))?;
            }
            println!(
                "ran {} experiments over {} windows; results in {}",
                total_experiments(sequences.len(), &params),
                sequences.len(),
                out.display()
            );
            Ok(())
        }
        Command::Online {
            tau,
            windows,
            world_config,
            shots,
            init,
            seed,
            out,
            log,
            trace,
            config,
        } => {
            let map = load_config(config.as_deref())?;
            let tau = required("--tau", resolve(tau, &map, "tau")?)?;
            let windows = required("--windows", resolve(windows, &map, "windows")?)?;
            let out = required("--out", resolve(out, &map, "out")?)?;
            let n_shots = resolve(shots, &map, "shots")?.unwrap_or(8192);
            let init = resolve_init(init, &map)?;
            let seed = resolve(seed, &map, "seed")?.unwrap_or(0);
            let world_config = resolve(world_config, &map, "world_config")?;

            let world = match world_config {
                Some(path) => world_from_config(&read_file(&path)?)?,
                None => WorldConfig::default(),
            };
            let params = OnlineRunParams {
                tau,
                windows,
                n_shots,
                init,
                seed,
            };
            let run = run_online(&world, &params)?;
            write_file(&out, &write_online_csv(&run, n_shots))?;
            if let Some(path) = log {
                let sequences: Vec<EventSequence> =
                    run.windows.iter().map(|w| w.sequence.clone()).collect();
                write_file(&path, &format_sequences(&sequences))?;
            }
            if let Some(path) = trace {
                write_file(&path, &write_trace_csv(&run))?;
            }
            println!("streamed {windows} windows; results in {}", out.display());
            Ok(())
        }
        Command::Report { input, table2 } => {
            let input = required("--in", input)?;
            let entries = parse_results_csv(&read_file(&input)?)?;
            if table2 {
                print!("{}", error_table(&entries));
            } else {
                let profiles: Vec<&str> = {
                    let mut seen = Vec::new();
                    for e in &entries {
                        if !seen.contains(&e.noise_profile.as_str()) {
                            seen.push(e.noise_profile.as_str());
                        }
                    }
                    seen
                };
                println!(
                    "{} entries, profiles: {}",
                    entries.len(),
                    profiles.join(", ")
                );
            }
            Ok(())
        }
        Command::CheckQasm { file } => {
            let text = match file.as_deref() {
                None => read_stdin()?,
                Some(path) if path == Path::new("-") => read_stdin()?,
                Some(path) => read_file(path)?,
            };
            let parsed = circuit::parse(&text).map_err(|e| HarnessError::Data(e.to_string()))?;
            println!(
                "ok: gates={} measured={} theta={}",
                parsed.gates().len(),
                parsed.is_measured(),
                parsed.simulate().bloch().theta()
            );
            Ok(())
        }
    }
}

fn load_config(path: Option<&Path>) -> Result<BTreeMap<String, String>, HarnessError> {
    match path {
        Some(path) => parse_config(&read_file(path)?),
        None => Ok(BTreeMap::new()),
    }
}

/// Command-line value if present, otherwise the config-file value.
fn resolve<T: std::str::FromStr>(
    flag: Option<T>,
    map: &BTreeMap<String, String>,
    key: &str,
) -> Result<Option<T>, HarnessError> {
    match flag {
        Some(value) => Ok(Some(value)),
        None => lookup(map, key),
    }
}

fn resolve_init(
    flag: Option<InitArg>,
    map: &BTreeMap<String, String>,
) -> Result<InitState, HarnessError> {
    if let Some(arg) = flag {
        return Ok(arg.into());
    }
    match lookup::<String>(map, "init")?.as_deref() {
        None => Ok(InitState::Zero),
        Some("zero") => Ok(InitState::Zero),
        Some("plus") => Ok(InitState::Plus),
        Some(other) => Err(HarnessError::Data(format!(
            "config key init: expected zero or plus, found {other:?}"
        ))),
    }
}

fn required<T>(name: &str, value: Option<T>) -> Result<T, HarnessError> {
    value.ok_or_else(|| HarnessError::Usage(format!("missing required argument {name}")))
}

fn read_stdin() -> Result<String, HarnessError> {
    let mut buffer = String::new();
    std::io::stdin()
        .read_to_string(&mut buffer)
        .map_err(|err| HarnessError::Data(err.to_string()))?;
    Ok(buffer)
}

fn read_file(path: &Path) -> Result<String, HarnessError> {
    std::fs::read_to_string(path)
        .map_err(|err| HarnessError::Data(format!("{}: {err}", path.display())))
}

fn read_sequences(path: &Path) -> Result<Vec<EventSequence>, HarnessError> {
    Ok(parse_sequences(&read_file(path)?)?)
}

fn write_file(path: &Path, contents: &str) -> Result<(), HarnessError> {
    std::fs::write(path, contents)
        .map_err(|err| HarnessError::Data(format!("{}: {err}", path.display())))
}
