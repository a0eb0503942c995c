//! Command-line surface for generation, verification, pattern
//! simulation, estimation, comparison, and layout rendering.
//!
//! Exit codes: 0 success, 1 verification/fidelity/write failure,
//! 2 usage or domain error. All randomness flows from `--seed` through
//! ChaCha8.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mbqc_adders::adders::{qcla_out_of_place, round_structure, vbe_ripple, LabeledCircuit};
use mbqc_adders::cluster::{pattern_for_gate, run_pattern, OutcomeSource, PatternGate};
use mbqc_adders::compile::{place, reconciliation_report, render_layout, RenderFormat};
use mbqc_adders::resources::{
    compare_table, depth_crossover, model_point, write_csv, CompareRow,
};
use mbqc_adders::sim::StateVector;

#[derive(Parser)]
#[command(name = "mbqc-adders", version, about = "Quantum adders on cluster-state MBQC")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AdderKind {
    Qcla,
    Vbe,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VerifyTarget {
    Qcla,
    Vbe,
    Cross,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GateKind {
    Wire,
    H,
    Cnot,
    ToffoliPhase,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LayoutFormat {
    Ascii,
    Svg,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an adder circuit and write it as JSON.
    Generate {
        #[arg(long, value_enum)]
        adder: AdderKind,
        #[arg(long)]
        bits: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that an adder maps |a,b,0⟩ to |a,b,a+b⟩ with clean ancillas.
    Verify {
        #[arg(long, value_enum, default_value = "qcla")]
        adder: VerifyTarget,
        #[arg(long, required_unless_present = "circuit")]
        bits: Option<usize>,
        /// Verify a previously generated circuit file instead.
        #[arg(long, conflicts_with = "adder")]
        circuit: Option<PathBuf>,
        #[arg(long, conflicts_with_all = ["samples"])]
        exhaustive: bool,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a measurement pattern and report corrected fidelities.
    SimulatePattern {
        #[arg(long, value_enum)]
        gate: GateKind,
        #[arg(long, default_value_t = 5)]
        wire_length: usize,
        #[arg(long, default_value_t = 1)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Force the measurement outcomes (one bit per measured site,
        /// round-then-site order).
        #[arg(long)]
        force_outcomes: Option<String>,
    },
    /// Evaluate the closed-form depth/size models for one bit width.
    Estimate {
        #[arg(long)]
        bits: u64,
    },
    /// Emit the model comparison table as CSV.
    Compare {
        #[arg(long)]
        bits_from: u64,
        #[arg(long)]
        bits_to: u64,
        #[arg(long, default_value_t = 1.0)]
        vbe_depth_c: f64,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Also compile both adders per n and fill the measured columns.
        #[arg(long)]
        measure: bool,
    },
    /// Render the lattice layout of an adder circuit.
    Layout {
        #[arg(long, value_enum, default_value = "qcla")]
        adder: AdderKind,
        #[arg(long)]
        bits: usize,
        #[arg(long, value_enum, default_value = "ascii")]
        format: LayoutFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(match err {
                mbqc_adders::Error::Io(_) | mbqc_adders::Error::Json(_) => EXIT_FAIL,
                _ => EXIT_USAGE,
            })
        }
    }
}

fn generate_adder(adder: AdderKind, bits: usize) -> mbqc_adders::Result<LabeledCircuit> {
    match adder {
        AdderKind::Qcla => qcla_out_of_place(bits),
        AdderKind::Vbe => vbe_ripple(bits),
    }
}

fn run(cli: Cli) -> mbqc_adders::Result<ExitCode> {
    match cli.command {
        Command::Generate { adder, bits, out } => {
            let lc = generate_adder(adder, bits)?;
            let toffolis = lc.circuit.gates.iter().filter(|g| g.is_toffoli()).count();
            let cnots = lc.circuit.gates.len() - toffolis;
            let rounds = round_structure(&lc)?;
            println!("width: {}", lc.circuit.width);
            println!("gates: {} CNOT, {} Toffoli", cnots, toffolis);
            println!("rounds: {}", rounds.len());
            for (label, count) in &rounds {
                println!("  {label}: {count} gates");
            }
            if let Some(path) = out {
                fs::write(&path, lc.to_json())?;
                println!("wrote {}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            adder,
            bits,
            circuit,
            exhaustive,
            samples,
            seed,
        } => {
            let circuits: Vec<LabeledCircuit> = match &circuit {
                Some(path) => vec![LabeledCircuit::from_json(&fs::read_to_string(path)?)?],
                None => {
                    let bits = bits.expect("clap enforces bits without --circuit");
                    match adder {
                        VerifyTarget::Qcla => vec![qcla_out_of_place(bits)?],
                        VerifyTarget::Vbe => vec![vbe_ripple(bits)?],
                        VerifyTarget::Cross => vec![qcla_out_of_place(bits)?, vbe_ripple(bits)?],
                    }
                }
            };
            let n = circuits[0].bits();
            if exhaustive && n > 8 {
                return Err(mbqc_adders::Error::Usage(format!(
                    "exhaustive verification is limited to 8 bits, got {n}"
                )));
            }
            let pairs: Vec<(u64, u64)> = if exhaustive {
                (0..1u64 << n)
                    .flat_map(|a| (0..1u64 << n).map(move |b| (a, b)))
                    .collect()
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..samples)
                    .map(|_| (rng.gen_range(0..1u64 << n), rng.gen_range(0..1u64 << n)))
                    .collect()
            };
            let mut failures = 0u64;
            for &(a, b) in &pairs {
                for lc in &circuits {
                    let vals = lc.add(a, b)?;
                    let ok =
                        vals.a == a && vals.b == b && vals.z == a + b && vals.ancilla_clean;
                    if !ok {
                        failures += 1;
                        println!(
                            "FAIL a={a} b={b}: got a={} b={} z={} ancilla_clean={}",
                            vals.a, vals.b, vals.z, vals.ancilla_clean
                        );
                    }
                }
            }
            println!(
                "{} cases checked over {} circuit(s), {failures} failures",
                pairs.len(),
                circuits.len()
            );
            Ok(if failures == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAIL)
            })
        }
        Command::SimulatePattern {
            gate,
            wire_length,
            trials,
            seed,
            force_outcomes,
        } => {
            if trials == 0 {
                return Err(mbqc_adders::Error::Usage("--trials must be ≥ 1".into()));
            }
            let gate = match gate {
                GateKind::Wire => PatternGate::Wire(wire_length),
                GateKind::H => PatternGate::Hadamard,
                GateKind::Cnot => PatternGate::Cnot,
                GateKind::ToffoliPhase => PatternGate::ToffoliPhase,
            };
            let gp = pattern_for_gate(gate)?;
            let measured = gp.pattern.measured_sites().len();
            let forced = match &force_outcomes {
                Some(s) => {
                    let bits: Vec<u8> = s
                        .chars()
                        .map(|c| match c {
                            '0' => Ok(0u8),
                            '1' => Ok(1u8),
                            other => Err(mbqc_adders::Error::Usage(format!(
                                "--force-outcomes has non-binary character {other:?}"
                            ))),
                        })
                        .collect::<mbqc_adders::Result<_>>()?;
                    if bits.len() != measured {
                        return Err(mbqc_adders::Error::Usage(format!(
                            "--force-outcomes has {} bits, pattern measures {measured} sites",
                            bits.len()
                        )));
                    }
                    Some(bits)
                }
                None => None,
            };
            println!("rounds: {}", gp.pattern.rounds());
            println!("measured sites: {measured}");
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut min_fidelity = f64::INFINITY;
            for trial in 0..trials {
                let input = random_state(gp.pattern.inputs.len(), &mut rng);
                let source = match &forced {
                    Some(bits) => OutcomeSource::Forced(bits.clone()),
                    None => OutcomeSource::Seeded(rng.gen()),
                };
                let (mut output, frame) = run_pattern(&gp.graph, &gp.pattern, &input, &source)?;
                frame.apply_correction(&mut output);
                let fidelity = output.fidelity(&gate.apply_target(&input));
                min_fidelity = min_fidelity.min(fidelity);
                println!("trial {trial}: fidelity {fidelity:.12}");
            }
            println!("min fidelity: {min_fidelity:.12}");
            Ok(if min_fidelity >= 1.0 - 1e-9 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAIL)
            })
        }
        Command::Estimate { bits } => {
            let point = model_point(bits, 1.0)?;
            println!("n: {}", point.n);
            println!("qcla depth: {}", point.qcla_depth);
            println!("qcla size: {}", point.qcla_size);
            println!("vbe size: {}", point.vbe_size);
            Ok(ExitCode::SUCCESS)
        }
        Command::Compare {
            bits_from,
            bits_to,
            vbe_depth_c,
            csv,
            measure,
        } => {
            let rows = compare_table(bits_from, bits_to, vbe_depth_c, measure)?;
            let table = write_csv(&rows);
            match &csv {
                Some(path) => {
                    fs::write(path, &table)?;
                    println!("wrote {} rows to {}", rows.len(), path.display());
                }
                None => print!("{table}"),
            }
            if let Some(n) = depth_crossover(vbe_depth_c)? {
                println!("depth crossover (c={vbe_depth_c}): n={n}");
            }
            if measure {
                print_reconciliation(rows.last().expect("range is non-empty"));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Layout {
            adder,
            bits,
            format,
            out,
        } => {
            let lc = generate_adder(adder, bits)?;
            let layout = place(&lc)?;
            let rendered = render_layout(
                &layout,
                match format {
                    LayoutFormat::Ascii => RenderFormat::Ascii,
                    LayoutFormat::Svg => RenderFormat::Svg,
                },
            );
            match out {
                Some(path) => fs::write(&path, rendered)?,
                None => print!("{rendered}"),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn print_reconciliation(row: &CompareRow) {
    let meas = row.measured.expect("--measure fills measured columns");
    let n = row.model.n;
    let rows = vec![
        (
            format!("qcla depth (n={n})"),
            meas.qcla_depth as i64,
            row.model.qcla_depth as i64,
        ),
        (
            format!("qcla sites (n={n})"),
            meas.qcla_sites as i64,
            row.model.qcla_size as i64,
        ),
        (
            format!("vbe depth (n={n})"),
            meas.vbe_depth as i64,
            row.model.vbe_depth as i64,
        ),
        (
            format!("vbe sites (n={n})"),
            meas.vbe_sites as i64,
            row.model.vbe_size as i64,
        ),
    ];
    println!("reconciliation (measured vs closed-form):");
    print!("{}", reconciliation_report(&rows));
}

/// Normalized random state with Gaussian amplitudes.
fn random_state(qubits: usize, rng: &mut ChaCha8Rng) -> StateVector {
    use rand_distr::StandardNormal;
    let amps: Vec<Complex64> = (0..1usize << qubits)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let mut state = StateVector::from_amplitudes(amps).expect("power-of-two length");
    state.normalize();
    state
}
