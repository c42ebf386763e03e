//! Command-line front end for the machine-nearring library.
//!
//! Every subcommand is a thin wrapper over a library call. Exit codes:
//! 0 for success / affirmative verdicts, 1 for negative verdicts (e.g.
//! machines not equivalent, no witness), 2 for usage, parse and guard
//! errors.

use std::fmt;
use std::fs;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use ppnr::embedding::{
    build_embedding_automaton, embedded_apply, verify_embedding, EncodingScheme,
};
use ppnr::files::{format_sequence, parse_machine, parse_scheme, parse_sequence, MachineFile};
use ppnr::group::{property_x_solve, FiniteGroup, FunctionTable, GroupSpec};
use ppnr::mealy::{add, compose, equivalence_counterexample, negate, MealyMachine};
use ppnr::oracle::{
    delaying_subset, enumerate_pp_n, j2_bruteforce, ker_alpha_subset, sandwich_report,
};
use ppnr::radical::{
    alpha, decompose_amnesiac, f_ij_machine, in_ker_alpha, invert_one_minus, kernel_generator_c,
};

#[derive(Parser)]
#[command(
    name = "ppnr",
    version,
    about = "Prefix-preserving maps over group alphabets as Mealy machines"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Finite group construction and the translation-equation solver
    #[command(subcommand)]
    Group(GroupCmd),
    /// Machine arithmetic, predicates and transforms
    #[command(subcommand)]
    Machine(MachineCmd),
    /// Encoding schemes: validation, building automata, applying them
    #[command(subcommand)]
    Embed(EmbedCmd),
    /// Exhaustive nearring oracle at desk scale
    #[command(subcommand)]
    Oracle(OracleCmd),
}

#[derive(Args)]
struct GroupArg {
    /// Group spec: `cyclic:N`, `product:cyclic:N+cyclic:M`, or `@file.json`
    #[arg(long)]
    group: String,
}

impl GroupArg {
    fn spec(&self) -> Result<GroupSpec, Failure> {
        if let Some(path) = self.group.strip_prefix('@') {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::usage(format!("cannot read {path}: {e}")))?;
            serde_json::from_str::<GroupSpec>(&text)
                .map_err(|e| Failure::usage(format!("{path}: {e}")))
        } else {
            GroupSpec::parse_shorthand(&self.group).map_err(Failure::usage)
        }
    }

    fn build(&self) -> Result<Arc<FiniteGroup>, Failure> {
        self.spec()?.build().map_err(Failure::usage)
    }
}

#[derive(Args)]
struct JsonFlag {
    /// Emit a machine-readable JSON verdict
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct OutFlag {
    /// Write the resulting machine to this file instead of stdout
    #[arg(long)]
    out: Option<String>,
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Validate a group and print its basic facts
    Check {
        #[command(flatten)]
        group: GroupArg,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// Solve f(x+k) - f(x) = x; exit 1 when no witness exists
    PropertyX {
        #[command(flatten)]
        group: GroupArg,
        #[command(flatten)]
        json: JsonFlag,
    },
}

#[derive(Subcommand)]
enum MachineCmd {
    /// Run a machine on a comma-separated input sequence
    Eval {
        file: String,
        /// Input sequence, e.g. 1,2,0
        #[arg(long)]
        input: String,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// Pointwise sum of two machines
    Add {
        a: String,
        b: String,
        #[command(flatten)]
        out: OutFlag,
    },
    /// Composition a ∘ b (apply b first)
    Compose {
        a: String,
        b: String,
        #[command(flatten)]
        out: OutFlag,
    },
    /// Pointwise negation
    Negate {
        file: String,
        #[command(flatten)]
        out: OutFlag,
    },
    /// Amnesiac image: transitions replaced by their zero-input column
    Alpha {
        file: String,
        #[command(flatten)]
        out: OutFlag,
    },
    /// Exact equivalence; exit 1 with a witness input when they differ
    Equal {
        a: String,
        b: String,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// Drop unreachable states
    Trim {
        file: String,
        #[command(flatten)]
        out: OutFlag,
    },
    /// Is every reachable output map constant? Exit 0 yes, 1 no
    IsDelaying {
        file: String,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// Does the machine fix the all-zero sequence? Exit 0 yes, 1 no
    IsZeroSymmetric {
        file: String,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// Is the machine in the kernel of the amnesiac map? Exit 0 yes, 1 no
    InKerAlpha {
        file: String,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// For delaying zero-symmetric n, the machine m with m(1-n) = 1
    Invert {
        file: String,
        #[command(flatten)]
        out: OutFlag,
    },
    /// Split an alpha-fixed machine into transient and cycle output maps
    Decompose {
        file: String,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// Machine applying a function table at positions i, i+j, i+2j, ...
    Fij {
        #[command(flatten)]
        group: GroupArg,
        /// Function table as comma-separated values, e.g. 0,0,1
        #[arg(long)]
        f: String,
        #[arg(long)]
        i: usize,
        #[arg(long, default_value_t = 0)]
        j: usize,
        #[command(flatten)]
        out: OutFlag,
    },
    /// Two-state delaying machine outputting k after the first nonzero input
    KernelC {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        out: OutFlag,
    },
}

#[derive(Subcommand)]
enum EmbedCmd {
    /// Check every scheme invariant; exit 1 with the violation if invalid
    Validate {
        scheme: String,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// Build the machine over K realizing a zero-preserving map of G
    Build {
        scheme: String,
        /// Function table over G as comma-separated values
        #[arg(long)]
        f: String,
        #[command(flatten)]
        out: OutFlag,
    },
    /// Apply a machine over K to an element of G through the encoding
    Apply {
        scheme: String,
        machine: String,
        #[arg(long)]
        element: usize,
        /// Number of chained built automata inside the machine
        #[arg(long, default_value_t = 1)]
        depth: usize,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// Exhaustively verify the embedding; exit 1 on any failed identity
    Verify {
        scheme: String,
        #[command(flatten)]
        json: JsonFlag,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Enumerate the restricted nearring PP_n(G)
    Enumerate {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// Brute-force Jacobson 2-radical of PP_n(G)
    J2 {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// Sizes, containments and identity checks for D, J2 and ker alpha
    Sandwich {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        json: JsonFlag,
    },
}

/// A failed command: either a usage/validation error (exit 2) or a
/// negative verdict (exit 1).
enum Failure {
    Usage(String),
    Verdict,
}

impl Failure {
    fn usage(err: impl fmt::Display) -> Failure {
        Failure::Usage(err.to_string())
    }
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(err: E) -> Failure {
        Failure::Usage(err.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Verdict) => ExitCode::from(1),
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn read_machine(path: &str) -> Result<MealyMachine, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {path}: {e}")))?;
    parse_machine(&text).map_err(|e| Failure::usage(format!("{path}: {e}")))
}

fn read_scheme(path: &str) -> Result<EncodingScheme, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {path}: {e}")))?;
    parse_scheme(&text).map_err(|e| Failure::usage(format!("{path}: {e}")))
}

fn emit_machine(m: &MealyMachine, out: &OutFlag) -> Result<ExitCode, Failure> {
    let text = MachineFile::from_machine(m).to_json();
    match &out.out {
        Some(path) => fs::write(path, text + "\n")
            .map_err(|e| Failure::usage(format!("cannot write {path}: {e}")))?,
        None => println!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_table(text: &str, g: &Arc<FiniteGroup>) -> Result<FunctionTable, Failure> {
    let values = parse_sequence(text, g)?;
    FunctionTable::new(Arc::clone(g), values).map_err(Failure::usage)
}

fn bool_verdict(name: &str, value: bool, json: &JsonFlag) -> ExitCode {
    if json.json {
        println!("{}", json!({ name: value }));
    } else {
        println!("{name}: {value}");
    }
    if value {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Group(cmd) => run_group(cmd),
        Command::Machine(cmd) => run_machine(cmd),
        Command::Embed(cmd) => run_embed(cmd),
        Command::Oracle(cmd) => run_oracle(cmd),
    }
}

fn run_group(cmd: GroupCmd) -> Result<ExitCode, Failure> {
    match cmd {
        GroupCmd::Check { group, json } => {
            // A spec that parses but fails the group axioms is a negative
            // verdict; unreadable input stays a usage error.
            let built = match group.spec()?.build() {
                Ok(g) => g,
                Err(e) => {
                    if json.json {
                        println!("{}", json!({ "valid": false, "reason": e.to_string() }));
                    } else {
                        println!("invalid: {e}");
                    }
                    return Err(Failure::Verdict);
                }
            };
            if json.json {
                println!(
                    "{}",
                    json!({
                        "valid": true,
                        "label": built.label(),
                        "order": built.order(),
                        "abelian": built.is_abelian(),
                    })
                );
            } else {
                println!(
                    "{} : order {}, {}",
                    built.label(),
                    built.order(),
                    if built.is_abelian() {
                        "abelian"
                    } else {
                        "nonabelian"
                    }
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        GroupCmd::PropertyX { group, json } => {
            let g = group.build()?;
            match property_x_solve(&g) {
                Some(w) => {
                    if json.json {
                        println!(
                            "{}",
                            json!({ "witness": true, "k": w.k, "f": w.f.values() })
                        );
                    } else {
                        println!("k = {}", w.k);
                        println!("f = {}", format_sequence(w.f.values()));
                    }
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    if json.json {
                        println!("{}", json!({ "witness": false }));
                    } else {
                        println!("none");
                    }
                    Err(Failure::Verdict)
                }
            }
        }
    }
}

fn run_machine(cmd: MachineCmd) -> Result<ExitCode, Failure> {
    match cmd {
        MachineCmd::Eval { file, input, json } => {
            let m = read_machine(&file)?;
            let seq = parse_sequence(&input, m.group())?;
            let out = m.evaluate(&seq).map_err(Failure::usage)?;
            if json.json {
                println!("{}", json!({ "output": out }));
            } else {
                println!("{}", format_sequence(&out));
            }
            Ok(ExitCode::SUCCESS)
        }
        MachineCmd::Add { a, b, out } => {
            let sum = add(&read_machine(&a)?, &read_machine(&b)?).map_err(Failure::usage)?;
            emit_machine(&sum, &out)
        }
        MachineCmd::Compose { a, b, out } => {
            let prod = compose(&read_machine(&a)?, &read_machine(&b)?).map_err(Failure::usage)?;
            emit_machine(&prod, &out)
        }
        MachineCmd::Negate { file, out } => emit_machine(&negate(&read_machine(&file)?), &out),
        MachineCmd::Alpha { file, out } => emit_machine(&alpha(&read_machine(&file)?), &out),
        MachineCmd::Trim { file, out } => emit_machine(&read_machine(&file)?.trim(), &out),
        MachineCmd::Equal { a, b, json } => {
            let witness = equivalence_counterexample(&read_machine(&a)?, &read_machine(&b)?)
                .map_err(Failure::usage)?;
            match witness {
                None => {
                    if json.json {
                        println!("{}", json!({ "equivalent": true }));
                    } else {
                        println!("equivalent");
                    }
                    Ok(ExitCode::SUCCESS)
                }
                Some(input) => {
                    if json.json {
                        println!("{}", json!({ "equivalent": false, "witness": input }));
                    } else {
                        println!("not equivalent; witness input: {}", format_sequence(&input));
                    }
                    Err(Failure::Verdict)
                }
            }
        }
        MachineCmd::IsDelaying { file, json } => Ok(bool_verdict(
            "delaying",
            read_machine(&file)?.is_delaying(),
            &json,
        )),
        MachineCmd::IsZeroSymmetric { file, json } => Ok(bool_verdict(
            "zero_symmetric",
            read_machine(&file)?.is_zero_symmetric(),
            &json,
        )),
        MachineCmd::InKerAlpha { file, json } => Ok(bool_verdict(
            "in_ker_alpha",
            in_ker_alpha(&read_machine(&file)?),
            &json,
        )),
        MachineCmd::Invert { file, out } => {
            let inv = invert_one_minus(&read_machine(&file)?).map_err(Failure::usage)?;
            emit_machine(&inv, &out)
        }
        MachineCmd::Decompose { file, json } => {
            let d = decompose_amnesiac(&read_machine(&file)?).map_err(Failure::usage)?;
            let transient: Vec<&[usize]> = d.transient.iter().map(|f| f.values()).collect();
            let cycle: Vec<&[usize]> = d.cycle.iter().map(|f| f.values()).collect();
            if json.json {
                println!("{}", json!({ "transient": transient, "cycle": cycle }));
            } else {
                println!(
                    "transient: [{}]",
                    transient
                        .iter()
                        .map(|v| format_sequence(v))
                        .collect::<Vec<_>>()
                        .join("; ")
                );
                println!(
                    "cycle:     [{}]",
                    cycle
                        .iter()
                        .map(|v| format_sequence(v))
                        .collect::<Vec<_>>()
                        .join("; ")
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        MachineCmd::Fij {
            group,
            f,
            i,
            j,
            out,
        } => {
            let g = group.build()?;
            let table = parse_table(&f, &g)?;
            let m = f_ij_machine(&table, i, j).map_err(Failure::usage)?;
            emit_machine(&m, &out)
        }
        MachineCmd::KernelC { group, k, out } => {
            let g = group.build()?;
            let m = kernel_generator_c(&g, k).map_err(Failure::usage)?;
            emit_machine(&m, &out)
        }
    }
}

fn run_embed(cmd: EmbedCmd) -> Result<ExitCode, Failure> {
    match cmd {
        EmbedCmd::Validate { scheme, json } => {
            let text = fs::read_to_string(&scheme)
                .map_err(|e| Failure::usage(format!("cannot read {scheme}: {e}")))?;
            let file = ppnr::files::SchemeFile::from_json(&text)
                .map_err(|e| Failure::usage(format!("{scheme}: {e}")))?;
            match file.to_scheme() {
                Ok(s) => {
                    if json.json {
                        println!(
                            "{}",
                            json!({
                                "valid": true,
                                "k": s.k().label(),
                                "g": s.g().label(),
                                "n": s.n(),
                                "s_size": s.tuples().len(),
                            })
                        );
                    } else {
                        println!(
                            "valid: S of size {} in {}^{} onto {}",
                            s.tuples().len(),
                            s.k().label(),
                            s.n(),
                            s.g().label()
                        );
                    }
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    if json.json {
                        println!("{}", json!({ "valid": false, "reason": e.to_string() }));
                    } else {
                        println!("invalid: {e}");
                    }
                    Err(Failure::Verdict)
                }
            }
        }
        EmbedCmd::Build { scheme, f, out } => {
            let s = read_scheme(&scheme)?;
            let table = parse_table(&f, s.g())?;
            let m = build_embedding_automaton(&s, &table).map_err(Failure::usage)?;
            emit_machine(&m, &out)
        }
        EmbedCmd::Apply {
            scheme,
            machine,
            element,
            depth,
            json,
        } => {
            let s = read_scheme(&scheme)?;
            let m = read_machine(&machine)?;
            let result = embedded_apply(&s, &m, element, depth).map_err(Failure::usage)?;
            if json.json {
                println!("{}", json!({ "element": result }));
            } else {
                println!("{result}");
            }
            Ok(ExitCode::SUCCESS)
        }
        EmbedCmd::Verify { scheme, json } => {
            let s = read_scheme(&scheme)?;
            let report = verify_embedding(&s).map_err(Failure::usage)?;
            if json.json {
                println!(
                    "{}",
                    serde_json::to_string(&report).map_err(Failure::usage)?
                );
            } else {
                println!("{report}");
            }
            if report.all_verified() {
                Ok(ExitCode::SUCCESS)
            } else {
                Err(Failure::Verdict)
            }
        }
    }
}

fn run_oracle(cmd: OracleCmd) -> Result<ExitCode, Failure> {
    match cmd {
        OracleCmd::Enumerate { group, n, json } => {
            let g = group.build()?;
            let nr = enumerate_pp_n(&g, n).map_err(Failure::usage)?;
            if json.json {
                let elements: Vec<_> = nr
                    .elements()
                    .iter()
                    .map(|e| e.components().to_vec())
                    .collect();
                println!(
                    "{}",
                    json!({
                        "group": g.label(),
                        "n": n,
                        "size": nr.len(),
                        "zero": nr.zero_index(),
                        "one": nr.identity_index(),
                        "elements": elements,
                    })
                );
            } else {
                println!(
                    "PP_{}({}) has {} elements (zero at index {}, identity at {})",
                    n,
                    g.label(),
                    nr.len(),
                    nr.zero_index(),
                    nr.identity_index()
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        OracleCmd::J2 { group, n, json } => {
            let g = group.build()?;
            let nr = enumerate_pp_n(&g, n).map_err(Failure::usage)?;
            let j2 = j2_bruteforce(&nr).map_err(Failure::usage)?;
            let ker = ker_alpha_subset(&nr);
            let del = delaying_subset(&nr);
            if json.json {
                println!(
                    "{}",
                    json!({
                        "group": g.label(),
                        "n": n,
                        "nearring_size": nr.len(),
                        "j2": j2.members,
                        "delaying": del,
                        "ker_alpha": ker.members,
                    })
                );
            } else {
                println!("|N| = {}", nr.len());
                println!("J2 = {:?} ({} elements)", j2.members, j2.len());
                println!("D  = {del:?}");
                println!("ker alpha = {:?}", ker.members);
            }
            Ok(ExitCode::SUCCESS)
        }
        OracleCmd::Sandwich { group, n, json } => {
            let g = group.build()?;
            let report = sandwich_report(&g, n).map_err(Failure::usage)?;
            if json.json {
                println!(
                    "{}",
                    serde_json::to_string(&report).map_err(Failure::usage)?
                );
            } else {
                print!("{report}");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
