//! Command-line interface.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::harness::report::{log2_box_bound, size_exponent};
use crate::harness::{
    check_instance, generate_instance, load_instance, ComplexityReport, GenParams, Instance,
};
use crate::synthesis::synthesize;
use crate::unfold::Unfolder;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_CAP: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "trace-unfold",
    version,
    about = "Unfold asynchronous systems into asynchronous automata"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and validate an instance file.
    Validate { file: PathBuf },
    /// Build the unfolding and write it with its morphism and size report.
    Unfold {
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Build the asynchronous automaton from the unfolding.
    Synthesize {
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Compare bounded languages of the input and the synthesized automaton.
    Check {
        file: PathBuf,
        #[arg(long, default_value_t = 6)]
        maxlen: usize,
        /// Bound on explored global states.
        #[arg(long, default_value_t = 100_000)]
        cap: usize,
        /// Print the verdict as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Report piece sizes against their bounds.
    Stats {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Generate a random instance satisfying property ID.
    Generate {
        #[arg(long)]
        seed: u64,
        /// Upper bound on local states per process.
        #[arg(long, default_value_t = 2)]
        states: usize,
        /// Number of actions.
        #[arg(long, default_value_t = 2)]
        alphabet: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Write a Graphviz rendering.
    ExportDot {
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, value_enum, default_value_t = DotTarget::Unfolding)]
        what: DotTarget,
        /// Bound on explored global states for `--what global`.
        #[arg(long, default_value_t = 100_000)]
        cap: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum DotTarget {
    Source,
    Unfolding,
    Global,
}

fn exit_code(e: &Error) -> u8 {
    match e.root() {
        Error::CapExceeded(_) => EXIT_CAP,
        _ => EXIT_INPUT,
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn load(path: &Path, err: &mut dyn Write) -> Result<Instance> {
    let inst = load_instance(path).map_err(|e| match e {
        Error::Io(io) => Error::Io(std::io::Error::new(
            io.kind(),
            format!("{}: {io}", path.display()),
        )),
        e => e,
    })?;
    for w in &inst.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    Ok(inst)
}

/// Runs the CLI on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8> {
    match command {
        Command::Validate { file } => {
            let inst = load(&file, err)?;
            writeln!(
                out,
                "ok: {} actions, {} states, {} transitions, {} processes{}",
                inst.alphabet.len(),
                inst.automaton.len(),
                inst.automaton.transitions().len(),
                inst.distribution.len(),
                if inst.satisfies_id() {
                    ""
                } else {
                    " (property ID violated)"
                }
            )?;
            Ok(EXIT_OK)
        }
        Command::Unfold { file, output } => {
            let inst = load(&file, err)?;
            let mut u = Unfolder::new(&inst.alphabet, &inst.automaton)?;
            let unf = u.unfolding()?;
            let report = ComplexityReport::from_unfolder(&mut u, inst.distribution.len())?;
            let doc = json!({
                "unfolding": unf.to_json(&inst.alphabet, &inst.automaton),
                "report": report.to_json(),
            });
            write_file(&output, &json_text(&doc))?;
            writeln!(
                out,
                "unfolding: {} states, {} transitions",
                unf.len(),
                unf.transition_count()
            )?;
            Ok(EXIT_OK)
        }
        Command::Synthesize { file, output } => {
            let inst = load(&file, err)?;
            let unf = Unfolder::new(&inst.alphabet, &inst.automaton)?.unfolding()?;
            let bundle = synthesize(unf, &inst.distribution)?;
            write_file(
                &output,
                &json_text(&bundle.to_json(&inst.alphabet, &inst.automaton)),
            )?;
            let bound = log2_box_bound(inst.automaton.len(), inst.alphabet.len());
            writeln!(out, "process  actions  local states  log2 bound")?;
            for (k, n) in bundle.local_state_counts().into_iter().enumerate() {
                let p = inst.alphabet.format_set(inst.distribution.process(k));
                writeln!(out, "{:>7}  {:>7}  {:>12}  {:>10.3}", k + 1, p, n, bound)?;
            }
            writeln!(
                out,
                "polynomial exponent d = {}",
                size_exponent(inst.alphabet.len())
            )?;
            Ok(EXIT_OK)
        }
        Command::Check {
            file,
            maxlen,
            cap,
            json,
        } => {
            let inst = load(&file, err)?;
            let report = check_instance(&inst, maxlen, cap)?;
            if json {
                write!(out, "{}", json_text(&report.to_json()))?;
            } else {
                write!(out, "{}", report.to_text())?;
            }
            Ok(if report.skipped.is_some() {
                EXIT_INPUT
            } else if report.passed() {
                EXIT_OK
            } else {
                EXIT_VERIFY
            })
        }
        Command::Stats { file, json } => {
            let inst = load(&file, err)?;
            let report = ComplexityReport::build(&inst)?;
            if json {
                write!(out, "{}", json_text(&report.to_json()))?;
            } else {
                write!(out, "{}", report.to_text())?;
            }
            Ok(if report.all_hold() {
                EXIT_OK
            } else {
                EXIT_VERIFY
            })
        }
        Command::Generate {
            seed,
            states,
            alphabet,
            output,
        } => {
            let file = generate_instance(&GenParams::new(seed, states, alphabet))?;
            write_file(&output, &file.to_json_string())?;
            writeln!(out, "{} global states", file.automaton.states.len())?;
            Ok(EXIT_OK)
        }
        Command::ExportDot {
            file,
            output,
            what,
            cap,
        } => {
            let inst = load(&file, err)?;
            let text = match what {
                DotTarget::Source => inst.automaton.to_dot(&inst.alphabet, "source"),
                DotTarget::Unfolding => {
                    let unf = Unfolder::new(&inst.alphabet, &inst.automaton)?.unfolding()?;
                    unf.to_dot(&inst.alphabet, &inst.automaton)
                }
                DotTarget::Global => {
                    let unf = Unfolder::new(&inst.alphabet, &inst.automaton)?.unfolding()?;
                    let bundle = synthesize(unf, &inst.distribution)?;
                    let global = bundle.automaton().global_automaton_bounded(cap)?;
                    global.to_dot(&inst.alphabet, "global")
                }
            };
            write_file(&output, &text)?;
            Ok(EXIT_OK)
        }
    }
}
