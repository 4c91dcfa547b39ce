//! Command-line front end: compile circuit files, report channel structure
//! as JSON on stdout.
//!
//! Exit codes: 0 success, 1 parse/validation error (with line info on
//! stderr), 2 oracle size guard exceeded.

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};
use stabchan::channel::{capacities, normal_form};
use stabchan::circuit::CompiledCircuit;
use stabchan::oracle::{
    check_stabilizer_preserving_dense, dense_of_state, is_mixed_stabilizer_dense,
    simulate_density, DenseChannel, StabilizerVerdict, OracleError, TOL,
};
use stabchan::report::ChannelReport;
use stabchan::{Circuit, StabilizerGroupState};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "stabchan",
    about = "Analyze stabilizer circuits as Clifford channels",
    version
)]
struct Cli {
    /// Pretty-print the JSON report.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Choi tableau of the compiled circuit.
    Choi { circuit: PathBuf },
    /// Normal-form counts with synthesized encoder/decoder gates.
    NormalForm { circuit: PathBuf },
    /// Channel capacities (classical, entanglement-assisted, quantum).
    Capacities { circuit: PathBuf },
    /// Channel class.
    Classify { circuit: PathBuf },
    /// Are two circuits the same channel?
    Equiv { left: PathBuf, right: PathBuf },
    /// Apply the channel to an input state tableau.
    Simulate { circuit: PathBuf, state: PathBuf },
    /// Rewrite a restricted-adaptive circuit to a non-adaptive one.
    Rewrite { circuit: PathBuf },
    /// Cross-check the compiled channel against the dense oracle.
    VerifyDense { circuit: PathBuf },
}

enum CliError {
    /// Parse or validation problems: exit 1.
    Input(String),
    /// Oracle size guards: exit 2.
    Guard(String),
}

impl From<stabchan::circuit::CircuitError> for CliError {
    fn from(e: stabchan::circuit::CircuitError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<stabchan::stabstate::StateError> for CliError {
    fn from(e: stabchan::stabstate::StateError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<stabchan::channel::ChannelError> for CliError {
    fn from(e: stabchan::channel::ChannelError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::SizeGuard { .. } => CliError::Guard(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

struct Input {
    path: String,
    digest: String,
    text: String,
}

fn read_input(path: &Path) -> Result<Input, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let digest = hex::encode(Sha256::digest(text.as_bytes()));
    Ok(Input {
        path: path.display().to_string(),
        digest,
        text,
    })
}

fn compile_input(input: &Input) -> Result<CompiledCircuit, CliError> {
    let circuit = Circuit::parse_text(&input.text)
        .map_err(|e| CliError::Input(format!("{}: {e}", input.path)))?;
    circuit
        .compile()
        .map_err(|e| CliError::Input(format!("{}: {e}", input.path)))
}

#[derive(Serialize)]
struct Envelope<T: Serialize> {
    schema_version: u32,
    command: &'static str,
    inputs: Vec<InputEcho>,
    #[serde(flatten)]
    payload: T,
}

#[derive(Serialize)]
struct InputEcho {
    path: String,
    sha256: String,
}

fn echo(inputs: &[&Input]) -> Vec<InputEcho> {
    inputs
        .iter()
        .map(|i| InputEcho {
            path: i.path.clone(),
            sha256: i.digest.clone(),
        })
        .collect()
}

fn emit<T: Serialize>(pretty: bool, envelope: &Envelope<T>) {
    let out = if pretty {
        serde_json::to_string_pretty(envelope)
    } else {
        serde_json::to_string(envelope)
    }
    .expect("reports serialize");
    println!("{out}");
}

fn tableau_strings(s: &StabilizerGroupState) -> Vec<String> {
    s.generators().iter().map(|g| g.to_string()).collect()
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Choi { circuit } => {
            let input = read_input(circuit)?;
            let compiled = compile_input(&input)?;
            let choi = compiled.channel.choi();
            emit(
                cli.pretty,
                &Envelope {
                    schema_version: 1,
                    command: "choi",
                    inputs: echo(&[&input]),
                    payload: json!({
                        "n_in": compiled.channel.n_in(),
                        "n_out": compiled.channel.n_out(),
                        "choi_tableau": tableau_strings(choi.state()),
                        "classical_outputs": compiled.classical_outputs,
                    }),
                },
            );
        }
        Command::NormalForm { circuit } => {
            let input = read_input(circuit)?;
            let compiled = compile_input(&input)?;
            let report = ChannelReport::from_compiled(&compiled);
            emit(
                cli.pretty,
                &Envelope {
                    schema_version: 1,
                    command: "normal-form",
                    inputs: echo(&[&input]),
                    payload: report,
                },
            );
        }
        Command::Capacities { circuit } => {
            let input = read_input(circuit)?;
            let compiled = compile_input(&input)?;
            let nf = normal_form(&compiled.channel);
            let (a, b, c, d, e) = nf.counts();
            emit(
                cli.pretty,
                &Envelope {
                    schema_version: 1,
                    command: "capacities",
                    inputs: echo(&[&input]),
                    payload: json!({
                        "counts": {"a": a, "b": b, "c": c, "d": d, "e": e},
                        "capacities": capacities(&nf),
                    }),
                },
            );
        }
        Command::Classify { circuit } => {
            let input = read_input(circuit)?;
            let compiled = compile_input(&input)?;
            emit(
                cli.pretty,
                &Envelope {
                    schema_version: 1,
                    command: "classify",
                    inputs: echo(&[&input]),
                    payload: json!({"class": compiled.channel.classify().name()}),
                },
            );
        }
        Command::Equiv { left, right } => {
            let li = read_input(left)?;
            let ri = read_input(right)?;
            let lc = compile_input(&li)?;
            let rc = compile_input(&ri)?;
            let equivalent = lc.channel.equivalent(&rc.channel)?;
            emit(
                cli.pretty,
                &Envelope {
                    schema_version: 1,
                    command: "equiv",
                    inputs: echo(&[&li, &ri]),
                    payload: json!({"equivalent": equivalent}),
                },
            );
        }
        Command::Simulate { circuit, state } => {
            let ci = read_input(circuit)?;
            let si = read_input(state)?;
            let compiled = compile_input(&ci)?;
            let input_state = StabilizerGroupState::parse_text(&si.text)
                .map_err(|e| CliError::Input(format!("{}: {e}", si.path)))?;
            let out = compiled.channel.apply(&input_state)?;
            let out = out.canonicalize();
            emit(
                cli.pretty,
                &Envelope {
                    schema_version: 1,
                    command: "simulate",
                    inputs: echo(&[&ci, &si]),
                    payload: json!({
                        "n_out": out.num_qubits(),
                        "rank": out.rank(),
                        "tableau": tableau_strings(&out),
                    }),
                },
            );
        }
        Command::Rewrite { circuit } => {
            let input = read_input(circuit)?;
            let parsed = Circuit::parse_text(&input.text)
                .map_err(|e| CliError::Input(format!("{}: {e}", input.path)))?;
            let rewritten = parsed
                .rewrite_adaptive()
                .map_err(|e| CliError::Input(format!("{}: {e}", input.path)))?;
            emit(
                cli.pretty,
                &Envelope {
                    schema_version: 1,
                    command: "rewrite",
                    inputs: echo(&[&input]),
                    payload: json!({
                        "non_adaptive": rewritten.is_non_adaptive(),
                        "circuit": rewritten.to_text(),
                    }),
                },
            );
        }
        Command::VerifyDense { circuit } => {
            let input = read_input(circuit)?;
            let parsed = Circuit::parse_text(&input.text)
                .map_err(|e| CliError::Input(format!("{}: {e}", input.path)))?;
            let compiled = parsed
                .compile()
                .map_err(|e| CliError::Input(format!("{}: {e}", input.path)))?;
            let ch = &compiled.channel;
            let dense = DenseChannel::from_stinespring(ch)?;

            // symbolic Choi versus dense Choi
            let sym_choi = ch.choi();
            let sym_choi_dense = dense_of_state(sym_choi.state())?;
            let choi_distance = sym_choi_dense.frobenius_distance(&dense.choi());

            // dense simulation of the raw circuit versus the compiled channel
            let sim_choi = simulate_density(
                &parsed,
                &stabchan::oracle::dense_max_entangled(ch.n_in()),
                ch.n_in(),
            )?;
            let sim_distance = sim_choi.frobenius_distance(&dense.choi());

            // stabilizer preservation and Choi stabilizerness must both hold
            let report = check_stabilizer_preserving_dense(&dense)?;
            let choi_lattice = matches!(
                is_mixed_stabilizer_dense(&dense.choi())?,
                StabilizerVerdict::Stabilizer(_)
            );
            let ok = choi_distance <= TOL
                && sim_distance <= TOL
                && report.stabilizer_preserving
                && report.choi_stabilizer
                && choi_lattice;
            emit(
                cli.pretty,
                &Envelope {
                    schema_version: 1,
                    command: "verify-dense",
                    inputs: echo(&[&input]),
                    payload: json!({
                        "ok": ok,
                        "choi_frobenius_distance": format!("{choi_distance:.2e}"),
                        "simulation_frobenius_distance": format!("{sim_distance:.2e}"),
                        "stabilizer_preserving": report.stabilizer_preserving,
                        "choi_is_stabilizer": report.choi_stabilizer,
                        "checks_agree": report.agree(),
                    }),
                },
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Guard(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
