//! Command-line surface: state and witness construction, validation,
//! offset optimization, common-witness searches, lambda scans, scripted
//! reproductions, and matrix-file round trips.
//!
//! Exit codes: 0 on success, 1 on domain errors (bad parameters, PPT input
//! where an NPT state is required), 2 when a reproduction check fails
//! unexpectedly, 3 on I/O or parse errors.

mod report;
mod reproduce;

use clap::{Args, Parser, Subcommand};
use reproduce::RunConfig;
use std::path::{Path, PathBuf};
use witnesskit::operator::ZERO_EIG_RTOL;
use witnesskit::productopt::{OptConfig, DEFAULT_DEN_FLOOR};
use witnesskit::*;

const EXIT_DOMAIN: i32 = 1;
const EXIT_CHECK_FAILED: i32 = 2;
const EXIT_IO: i32 = 3;

/// Internal plumbing result: the error side is the process exit code.
type CliResult<T> = std::result::Result<T, i32>;

#[derive(Parser)]
#[command(name = "witnesskit", version, about = "Entanglement witness construction and numerical audits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a reference state as a matrix file
    State {
        #[command(subcommand)]
        family: StateCmd,
    },
    /// Construct a witness operator
    Witness {
        #[command(subcommand)]
        kind: WitnessCmd,
    },
    /// Audit an operator against the witness condition on product states
    Validate {
        /// Operator in matrix text format
        #[arg(long)]
        op: PathBuf,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Minimum product-state expectation of an operator (the offset bound
    /// of the edge form)
    Eps0 {
        #[arg(long)]
        op: PathBuf,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Minimum expectation ratio over product states (the offset bound of
    /// the penalized form)
    K0 {
        #[arg(long)]
        num: PathBuf,
        #[arg(long)]
        den: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DEN_FLOOR)]
        den_floor: f64,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Search for a witness common to two states
    Common {
        #[command(subcommand)]
        method: CommonCmd,
    },
    /// Classify the segment between two family members on a lambda grid
    Scan {
        #[command(subcommand)]
        case: ScanCmd,
    },
    /// Run a scripted end-to-end reproduction target
    Reproduce {
        /// One of: example1, example2, example3, sn1, sn2, sn3, case1, case2
        target: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
        #[arg(long, default_value_t = 101)]
        grid: usize,
        /// Assemble projectors from the literal unnormalized vectors
        #[arg(long)]
        paper_mode: bool,
        /// Write the JSON report here
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Parse a matrix file and re-emit it (validating shape and Hermiticity)
    Io {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum StateCmd {
    /// Maximally entangled state on a d x d space
    MaxEntangled {
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Pure state with the given Schmidt coefficients on a d x d space
    Pure {
        #[arg(long, value_delimiter = ',', required = true)]
        coeffs: Vec<f64>,
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Edge-state family on 2 x 4
    Tau {
        #[arg(long)]
        b: f64,
        #[arg(long, default_value_t = 0.0)]
        s: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Tripartite edge-state family on 2 x 2 x 2
    DeltaTri {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[arg(long)]
        c: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Two-qutrit bound-entangled family
    Horodecki {
        #[arg(long)]
        alpha: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Two-qutrit isotropic state
    Isotropic {
        #[arg(long)]
        alpha: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Subcommand)]
enum WitnessCmd {
    /// Partial transpose of the projector onto the most negative
    /// PT eigenvector of a state
    NptEigvec {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, default_value_t = 0)]
        subsystem: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// P + Q^T - eps*I from PSD operator files (omit --q for the bare
    /// projector form)
    Edge {
        #[arg(long)]
        p: PathBuf,
        #[arg(long)]
        q: Option<PathBuf>,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 0)]
        subsystem: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Q^T - k(I - P) from PSD operator files
    W1 {
        #[arg(long)]
        q: PathBuf,
        #[arg(long)]
        p: PathBuf,
        #[arg(long)]
        k: f64,
        #[arg(long, default_value_t = 0)]
        subsystem: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Schmidt-class witness I - (m/(class-1))P on an m x m space
    Schmidt {
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long)]
        class: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Subcommand)]
enum CommonCmd {
    /// Shared negative PT eigenvector (works when both states are NPT)
    Npt {
        #[arg(long)]
        state1: PathBuf,
        #[arg(long)]
        state2: PathBuf,
        #[arg(long, default_value_t = 0)]
        subsystem: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Kernel-intersection witness for a pair of edge states
    Edge {
        #[arg(long)]
        state1: PathBuf,
        #[arg(long)]
        state2: PathBuf,
        #[arg(long, default_value_t = 0)]
        subsystem: usize,
        /// Fixed offset; when omitted the offset is computed
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        paper_mode: bool,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Common Schmidt-class witness over any number of states
    Schmidt {
        /// State files; repeat the flag per state
        #[arg(long = "state", required = true)]
        states: Vec<PathBuf>,
        /// Schmidt class per state: an integer, or `auto` for pure states;
        /// repeat per state (defaults to auto)
        #[arg(long = "class")]
        classes: Vec<String>,
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ScanCmd {
    /// Segment between the bound-entangled family member and a pure state
    /// with amplitude beta
    Case1 {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 101)]
        grid: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Segment between two members of the bound-entangled family
    Case2 {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value_t = 101)]
        grid: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, default_value = "matrix-text")]
    format: Format,
    /// Write here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Format {
    MatrixText,
    Json,
    Csv,
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(run(cli));
}

fn emit(out: &Option<PathBuf>, content: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, content),
        None => {
            print!("{content}");
            if !content.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

fn exit_for(err: &Error) -> i32 {
    match err {
        Error::Parse { .. } => EXIT_IO,
        _ => EXIT_DOMAIN,
    }
}

fn load_operator(path: &Path) -> CliResult<TensorOperator> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        EXIT_IO
    })?;
    textmat::parse(&text).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        EXIT_IO
    })
}

fn load_state(path: &Path) -> CliResult<DensityState> {
    let op = load_operator(path)?;
    DensityState::new(op, format!("file:{}", path.display())).map_err(|e| {
        eprintln!("error: {} is not a density state: {e}", path.display());
        EXIT_DOMAIN
    })
}

fn domain<T>(result: Result<T>) -> CliResult<T> {
    result.map_err(|e| {
        eprintln!("error: {e}");
        exit_for(&e)
    })
}

fn finish(out: &Option<PathBuf>, content: String) -> i32 {
    match emit(out, &content) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: cannot write output: {e}");
            EXIT_IO
        }
    }
}

fn operator_output(op: &TensorOperator, out: &OutputArgs) -> i32 {
    let content = match out.format {
        Format::Json => {
            let entries: Vec<Vec<[f64; 2]>> = (0..op.space().total())
                .map(|i| {
                    (0..op.space().total())
                        .map(|j| {
                            let z = op.entries()[(i, j)];
                            [z.re, z.im]
                        })
                        .collect()
                })
                .collect();
            let value = serde_json::json!({
                "dims": op.space().dims(),
                "entries": entries,
            });
            format!("{}\n", serde_json::to_string_pretty(&value).expect("serializable"))
        }
        _ => textmat::serialize(op),
    };
    finish(&out.output, content)
}

fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::State { family } => {
            let (result, out) = match family {
                StateCmd::MaxEntangled { d, out } => (StateFamily::MaxEntangled { d }.build(), out),
                StateCmd::Pure { coeffs, d, out } => {
                    (StateFamily::PureBipartite { coeffs, d }.build(), out)
                }
                StateCmd::Tau { b, s, out } => (StateFamily::Tau { b, s }.build(), out),
                StateCmd::DeltaTri { a, b, c, out } => {
                    (StateFamily::DeltaTri { a, b, c }.build(), out)
                }
                StateCmd::Horodecki { alpha, out } => {
                    (StateFamily::Horodecki { alpha }.build(), out)
                }
                StateCmd::Isotropic { alpha, out } => {
                    (StateFamily::Isotropic { alpha }.build(), out)
                }
            };
            match result {
                Ok(state) => operator_output(state.op(), &out),
                Err(e) => {
                    eprintln!("error: {e}");
                    exit_for(&e)
                }
            }
        }

        Command::Witness { kind } => {
            let (result, out): (CliResult<Witness>, OutputArgs) = match kind {
                WitnessCmd::NptEigvec {
                    state,
                    subsystem,
                    out,
                } => (
                    load_state(&state)
                        .and_then(|rho| domain(witness_from_npt_eigvec(&rho, subsystem))),
                    out,
                ),
                WitnessCmd::Edge {
                    p,
                    q,
                    eps,
                    subsystem,
                    out,
                } => {
                    let result = load_operator(&p).and_then(|pop| {
                        let qop = match q {
                            Some(qpath) => load_operator(&qpath)?,
                            None => TensorOperator::zero(pop.space().clone()),
                        };
                        domain(edge_witness(&pop, &qop, eps, subsystem))
                    });
                    (result, out)
                }
                WitnessCmd::W1 {
                    q,
                    p,
                    k,
                    subsystem,
                    out,
                } => {
                    let result = load_operator(&q).and_then(|qop| {
                        let pop = load_operator(&p)?;
                        domain(w1_witness(&qop, &pop, k, subsystem))
                    });
                    (result, out)
                }
                WitnessCmd::Schmidt { m, class, out } => {
                    (domain(schmidt_witness(m, class)), out)
                }
            };
            match result {
                Ok(w) => operator_output(w.operator(), &out),
                Err(code) => code,
            }
        }

        Command::Validate {
            op,
            restarts,
            seed,
            output,
        } => match load_operator(&op) {
            Ok(operator) => {
                let report = validate_operator(&operator, &OptConfig::new(restarts, seed));
                let json = serde_json::to_string_pretty(&report.to_json_value())
                    .expect("serializable");
                finish(&output, format!("{json}\n"))
            }
            Err(code) => code,
        },

        Command::Eps0 {
            op,
            restarts,
            seed,
            output,
        } => match load_operator(&op) {
            Ok(operator) => {
                let r = min_product_expectation(&operator, &OptConfig::new(restarts, seed));
                let json =
                    serde_json::to_string_pretty(&r.to_json_value()).expect("serializable");
                finish(&output, format!("{json}\n"))
            }
            Err(code) => code,
        },

        Command::K0 {
            num,
            den,
            den_floor,
            restarts,
            seed,
            output,
        } => {
            let numerator = match load_operator(&num) {
                Ok(op) => op,
                Err(code) => return code,
            };
            let denominator = match load_operator(&den) {
                Ok(op) => op,
                Err(code) => return code,
            };
            match min_ratio_product(
                &numerator,
                &denominator,
                den_floor,
                &OptConfig::new(restarts, seed),
            ) {
                Ok(r) => {
                    let json =
                        serde_json::to_string_pretty(&r.to_json_value()).expect("serializable");
                    finish(&output, format!("{json}\n"))
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    exit_for(&e)
                }
            }
        }

        Command::Common { method } => match method {
            CommonCmd::Npt {
                state1,
                state2,
                subsystem,
                output,
            } => {
                let (r1, r2) = match (load_state(&state1), load_state(&state2)) {
                    (Ok(a), Ok(b)) => (a, b),
                    (Err(code), _) | (_, Err(code)) => return code,
                };
                match common_npt_witness(&r1, &r2, subsystem, ZERO_EIG_RTOL) {
                    Ok(result) => finish(&output, common_result_json(&result)),
                    Err(e) => {
                        eprintln!("error: {e}");
                        exit_for(&e)
                    }
                }
            }
            CommonCmd::Edge {
                state1,
                state2,
                subsystem,
                eps,
                paper_mode,
                restarts,
                seed,
                output,
            } => {
                let (d1, d2) = match (load_state(&state1), load_state(&state2)) {
                    (Ok(a), Ok(b)) => (a, b),
                    (Err(code), _) | (_, Err(code)) => return code,
                };
                let mode = match eps {
                    Some(v) => OffsetMode::Fixed(v),
                    None => OffsetMode::Computed,
                };
                match common_edge_witness(
                    &d1,
                    &d2,
                    subsystem,
                    mode,
                    paper_mode,
                    &OptConfig::new(restarts, seed),
                ) {
                    Ok(result) => finish(&output, common_result_json(&result)),
                    Err(e) => {
                        eprintln!("error: {e}");
                        exit_for(&e)
                    }
                }
            }
            CommonCmd::Schmidt {
                states,
                classes,
                m,
                output,
            } => {
                let mut inputs = Vec::new();
                for (i, path) in states.iter().enumerate() {
                    let state = match load_state(path) {
                        Ok(s) => s,
                        Err(code) => return code,
                    };
                    let class = match classes.get(i).map(|s| s.as_str()) {
                        None | Some("auto") => None,
                        Some(text) => match text.parse::<usize>() {
                            Ok(k) => Some(k),
                            Err(_) => {
                                eprintln!("error: bad class '{text}' (integer or 'auto')");
                                return EXIT_DOMAIN;
                            }
                        },
                    };
                    inputs.push((state, class));
                }
                match common_schmidt_witness(&inputs, m) {
                    Ok(result) => finish(&output, common_result_json(&result)),
                    Err(e) => {
                        eprintln!("error: {e}");
                        exit_for(&e)
                    }
                }
            }
        },

        Command::Scan { case } => match case {
            ScanCmd::Case1 {
                alpha,
                beta,
                grid,
                out,
            } => {
                let pair = domain(TensorSpace::bipartite(3, 3)).and_then(|space| {
                    let rho1 = domain(horodecki_alpha(alpha))?;
                    let rho2 =
                        domain(pure_bipartite(&[beta, (1.0 - beta * beta).sqrt()], &space))?;
                    Ok((rho1, rho2))
                });
                match pair {
                    Ok((rho1, rho2)) => run_scan(
                        &rho1,
                        &rho2,
                        grid,
                        vec![("alpha".to_string(), alpha), ("beta".to_string(), beta)],
                        &out,
                    ),
                    Err(code) => code,
                }
            }
            ScanCmd::Case2 {
                alpha,
                gamma,
                grid,
                out,
            } => {
                let pair = domain(horodecki_alpha(alpha))
                    .and_then(|a| Ok((a, domain(horodecki_alpha(gamma))?)));
                match pair {
                    Ok((u1, u2)) => run_scan(
                        &u1,
                        &u2,
                        grid,
                        vec![("alpha".to_string(), alpha), ("gamma".to_string(), gamma)],
                        &out,
                    ),
                    Err(code) => code,
                }
            }
        },

        Command::Reproduce {
            target,
            seed,
            restarts,
            grid,
            paper_mode,
            output,
        } => {
            let cfg = RunConfig {
                seed,
                restarts,
                grid,
                paper_mode,
            };
            match reproduce::run(&target, &cfg) {
                Ok(report) => {
                    if let Some(path) = output {
                        let json =
                            serde_json::to_string_pretty(&report).expect("serializable");
                        if let Err(e) = std::fs::write(&path, format!("{json}\n")) {
                            eprintln!("error: cannot write {}: {e}", path.display());
                            return EXIT_IO;
                        }
                    }
                    if report.all_ok() {
                        0
                    } else {
                        EXIT_CHECK_FAILED
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    exit_for(&e)
                }
            }
        }

        Command::Io { input, output } => match load_operator(&input) {
            Ok(op) => finish(&output, textmat::serialize(&op)),
            Err(code) => code,
        },
    }
}

fn run_scan(
    rho1: &DensityState,
    rho2: &DensityState,
    grid: usize,
    params: Vec<(String, f64)>,
    out: &OutputArgs,
) -> i32 {
    match lambda_scan(rho1, rho2, grid, 1, None) {
        Ok(mut scan) => {
            scan.params = params;
            let content = match out.format {
                Format::Json => format!(
                    "{}\n",
                    serde_json::to_string_pretty(&scan).expect("serializable")
                ),
                _ => scan.to_csv(),
            };
            finish(&out.output, content)
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_for(&e)
        }
    }
}

fn common_result_json(result: &CommonWitnessResult) -> String {
    let witness_text = result
        .witness
        .as_ref()
        .map(|w| textmat::serialize(w.operator()));
    let validation = result
        .validation
        .as_ref()
        .map(|v| serde_json::to_value(v.to_json_value()).expect("serializable"));
    let value = serde_json::json!({
        "method": result.method,
        "found": result.witness.is_some(),
        "evidence": result.evidence,
        "intersection_dim": result.intersection_dim,
        "pt_intersection_dim": result.pt_intersection_dim,
        "offset": result.offset,
        "offset_degenerate": result.offset_degenerate,
        "witness": witness_text,
        "validation": validation,
    });
    format!(
        "{}\n",
        serde_json::to_string_pretty(&value).expect("serializable")
    )
}
