//! Command-line surface. [`run`] does all the work and returns the exit
//! code and captured output, so the binary is a thin wrapper.
//!
//! Exit codes: 0 definite verdict, 1 failed precondition, 2 parse or usage
//! error, 3 completed without a definite verdict.

use std::ffi::OsString;
use std::fmt::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::catalog::catalog;
use crate::certify::{
    finiteness_probe, order_probe, torsion_free_certificate, transitivity_probe, FinitenessOutcome,
    InfiniteReason, OrderOutcome, Precondition, TorsionOutcome,
};
use crate::dot::emit_dot_orbit_tree;
use crate::error::Error;
use crate::format::{parse_machine_file, serialize_machine, MachineFile};
use crate::orbit::orbit_tree;
use crate::random::{random_machine, MachineClass};
use crate::structure::{classify, components};

pub const DEFAULT_BUDGET: usize = 1_000_000;
pub const DEFAULT_DEPTH: usize = 6;
pub const DEFAULT_MAX_POWER: usize = 64;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PRECONDITION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "mealy",
    version,
    about = "Mealy automata: orbit trees and torsion certificates"
)]
pub struct Cli {
    /// Print verdicts as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print structural flags and connected components.
    Check { file: PathBuf },
    /// Torsion-freeness certificate for the generated semigroup.
    Certify { file: PathBuf },
    /// Labeled orbit tree of a reversible machine.
    OrbitTree {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        /// Also write the tree as Graphviz DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Order of the element induced by a state word.
    Order {
        file: PathBuf,
        /// Whitespace-separated state identifiers; `x^-1` names an inverse state.
        #[arg(long)]
        word: String,
        /// Adjoin the inverse machine before reading the word.
        #[arg(long)]
        with_inverse: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_POWER)]
        max_power: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Finiteness of the generated semigroup.
    Finite {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        max_level: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Whether every power up to the given depth is connected.
    Transitive {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Print the dual machine.
    Dual { file: PathBuf },
    /// Print the product of two machines.
    Product { first: PathBuf, second: PathBuf },
    /// Print a catalog machine (lamplighter, lamplighter-inverse, J).
    Catalog { key: String },
    /// Print a seeded random machine.
    Random {
        #[arg(long)]
        states: usize,
        #[arg(long)]
        letters: usize,
        #[arg(long, default_value = "any")]
        class: MachineClass,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Exit code and captured output of one invocation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn with_code(code: i32, stdout: String) -> Self {
        Outcome {
            code,
            stdout,
            stderr: String::new(),
        }
    }
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Io(PathBuf, std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotInvertible
        | Error::NotReversible
        | Error::AlphabetMismatch
        | Error::NotClosed { .. }
        | Error::LevelMismatch
        | Error::DepthExceeded { .. }
        | Error::NonIntegerLabel { .. }
        | Error::MalformedTree(_) => EXIT_PRECONDITION,
        Error::BudgetExceeded(_) => EXIT_UNKNOWN,
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return if e.use_stderr() {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: rendered,
                }
            } else {
                Outcome::ok(rendered)
            };
        }
    };
    match execute(&cli) {
        Ok(outcome) => outcome,
        Err(Failure::Lib(e)) => Outcome {
            code: exit_code(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
        Err(Failure::Io(path, e)) => Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {}: {e}\n", path.display()),
        },
    }
}

fn load(path: &Path) -> Result<MachineFile, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(path.to_owned(), e))?;
    Ok(parse_machine_file(&text)?)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("verdicts serialize");
    s.push('\n');
    s
}

fn precondition_text(p: &Precondition) -> String {
    match p {
        Precondition::NotInvertible => "not invertible".to_owned(),
        Precondition::NotReversible => "not reversible".to_owned(),
        Precondition::BireversibleComponent { states } => {
            format!("bireversible component {{{}}}", states.join(", "))
        }
    }
}

fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    let json = cli.json;
    match &cli.command {
        Command::Check { file } => {
            let f = load(file)?;
            let m = &f.machine;
            let flags = classify(m);
            let parts = components(m);
            let strong = parts.strongly_connected.clone().unwrap_or_default();
            if json {
                let comps: Vec<_> = parts
                    .blocks
                    .iter()
                    .zip(&strong)
                    .map(|(b, s)| {
                        json!({
                            "states": b.iter().map(|&x| m.state_name(x)).collect::<Vec<_>>(),
                            "strongly_connected": s,
                        })
                    })
                    .collect();
                return Ok(Outcome::ok(to_json(&json!({
                    "name": f.name,
                    "states": m.num_states(),
                    "letters": m.num_letters(),
                    "flags": flags,
                    "components": comps,
                }))));
            }
            let mut s = String::new();
            let _ = writeln!(
                s,
                "machine {}: {} states, {} letters",
                f.name,
                m.num_states(),
                m.num_letters()
            );
            let _ = writeln!(s, "invertible: {}", flags.invertible);
            let _ = writeln!(s, "reversible: {}", flags.reversible);
            let _ = writeln!(s, "coreversible: {}", flags.coreversible);
            let _ = writeln!(s, "bireversible: {}", flags.bireversible);
            let _ = writeln!(s, "components: {}", parts.len());
            for (b, strong) in parts.blocks.iter().zip(&strong) {
                let names: Vec<&str> = b.iter().map(|&x| m.state_name(x)).collect();
                let kind = if *strong {
                    "strongly connected"
                } else {
                    "weakly connected"
                };
                let _ = writeln!(s, "  {{{}}} {kind}", names.join(", "));
            }
            Ok(Outcome::ok(s))
        }
        Command::Certify { file } => {
            let f = load(file)?;
            let verdict = torsion_free_certificate(&f.machine);
            let code = if verdict.is_certified() {
                EXIT_OK
            } else {
                EXIT_PRECONDITION
            };
            if json {
                return Ok(Outcome::with_code(code, to_json(&verdict)));
            }
            let line = match &verdict.outcome {
                TorsionOutcome::Certified => {
                    "Certified: torsion-free (invertible, reversible, no bireversible component)"
                        .to_owned()
                }
                TorsionOutcome::NotApplicable { failed } => {
                    format!("NotApplicable: {}", precondition_text(failed))
                }
            };
            Ok(Outcome::with_code(code, line + "\n"))
        }
        Command::OrbitTree {
            file,
            depth,
            budget,
            dot,
        } => {
            let f = load(file)?;
            let tree = orbit_tree(&f.machine, *depth, *budget)?;
            if let Some(path) = dot {
                std::fs::write(path, emit_dot_orbit_tree(&tree))
                    .map_err(|e| Failure::Io(path.clone(), e))?;
            }
            let code = if tree.is_truncated() {
                EXIT_UNKNOWN
            } else {
                EXIT_OK
            };
            let (_, paths) = tree.self_liftable_paths();
            if json {
                let levels: Vec<_> = (0..=tree.depth())
                    .map(|k| {
                        json!({
                            "level": k,
                            "sizes": tree.level(k).iter().map(|&n| tree.node(n).component.size).collect::<Vec<_>>(),
                        })
                    })
                    .collect();
                let edges: Vec<_> = tree
                    .edges()
                    .iter()
                    .enumerate()
                    .map(|(id, e)| {
                        json!({
                            "parent": e.parent,
                            "child": e.child,
                            "label": e.label,
                            "liftable": tree.is_marked(id),
                        })
                    })
                    .collect();
                let value = json!({
                    "depth": tree.depth(),
                    "truncated": tree.is_truncated(),
                    "levels": levels,
                    "edges": edges,
                    "self_liftable_paths": paths.iter().map(|p| p.labels(&tree)).collect::<Vec<_>>(),
                });
                return Ok(Outcome::with_code(code, to_json(&value)));
            }
            let mut s = String::new();
            for k in 0..=tree.depth() {
                let sizes: Vec<String> = tree
                    .level(k)
                    .iter()
                    .map(|&n| tree.node(n).component.size.to_string())
                    .collect();
                let _ = writeln!(
                    s,
                    "level {k}: {} component(s), sizes [{}]",
                    sizes.len(),
                    sizes.join(", ")
                );
            }
            let _ = writeln!(s, "1-self-liftable maximal paths: {}", paths.len());
            for p in &paths {
                let labels: Vec<String> = p.labels(&tree).iter().map(|l| l.to_string()).collect();
                let _ = writeln!(s, "  labels [{}]", labels.join(", "));
            }
            if tree.is_truncated() {
                let _ = writeln!(
                    s,
                    "truncated: budget {} reached after level {}",
                    budget,
                    tree.depth()
                );
            }
            Ok(Outcome::with_code(code, s))
        }
        Command::Order {
            file,
            word,
            with_inverse,
            max_power,
            budget,
        } => {
            let f = load(file)?;
            let m = if *with_inverse {
                f.machine.disjoint_union(&f.machine.inverse()?)?
            } else {
                f.machine
            };
            let u = m.parse_state_word(word)?;
            let result = order_probe(&m, &u, *max_power, *budget)?;
            let code = match result.outcome {
                OrderOutcome::Unknown { .. } => EXIT_UNKNOWN,
                _ => EXIT_OK,
            };
            if json {
                return Ok(Outcome::with_code(code, to_json(&result)));
            }
            let line = match &result.outcome {
                OrderOutcome::Finite {
                    index,
                    period,
                    is_identity_power,
                } => format!(
                    "Finite: index {index} period {period}{}",
                    if *is_identity_power {
                        " (some power is the identity)"
                    } else {
                        ""
                    }
                ),
                OrderOutcome::InfiniteCertified { reason } => format!(
                    "InfiniteCertified: {}",
                    match reason {
                        InfiniteReason::StateOfNonBireversibleMachine =>
                            "state of a connected invertible reversible non-bireversible machine",
                        InfiniteReason::WordInNonBireversibleComponent =>
                            "its component is a connected invertible reversible non-bireversible machine",
                    }
                ),
                OrderOutcome::Unknown {
                    component_size_trace,
                } => format!("Unknown: component sizes {component_size_trace:?}"),
            };
            Ok(Outcome::with_code(code, line + "\n"))
        }
        Command::Finite {
            file,
            max_level,
            budget,
        } => {
            let f = load(file)?;
            let verdict = finiteness_probe(&f.machine, *max_level, *budget);
            let code = match verdict.outcome {
                FinitenessOutcome::Unknown { .. } => EXIT_UNKNOWN,
                _ => EXIT_OK,
            };
            if json {
                return Ok(Outcome::with_code(code, to_json(&verdict)));
            }
            let line = match &verdict.outcome {
                FinitenessOutcome::Finite { cardinality } => {
                    format!("Finite: {cardinality} element(s)")
                }
                FinitenessOutcome::InfiniteCertified { .. } => {
                    "InfiniteCertified: invertible reversible non-bireversible".to_owned()
                }
                FinitenessOutcome::Unknown { level_size_trace } => {
                    format!("Unknown: largest component sizes {level_size_trace:?}")
                }
            };
            Ok(Outcome::with_code(code, line + "\n"))
        }
        Command::Transitive {
            file,
            depth,
            budget,
        } => {
            let f = load(file)?;
            let report = transitivity_probe(&f.machine, *depth, *budget)?;
            if json {
                return Ok(Outcome::ok(to_json(&report)));
            }
            Ok(Outcome::ok(format!(
                "connected at every level up to {}: {}\n",
                report.checked_depth, report.connected_at_every_level
            )))
        }
        Command::Dual { file } => {
            let f = load(file)?;
            Ok(Outcome::ok(serialize_machine(
                &format!("{}-dual", f.name),
                &f.machine.dual(),
            )))
        }
        Command::Product { first, second } => {
            let a = load(first)?;
            let b = load(second)?;
            let p = a.machine.product(&b.machine)?;
            Ok(Outcome::ok(serialize_machine(
                &format!("{}-x-{}", a.name, b.name),
                &p,
            )))
        }
        Command::Catalog { key } => {
            let entry = catalog(key)?;
            Ok(Outcome::ok(serialize_machine(entry.key, &entry.machine)))
        }
        Command::Random {
            states,
            letters,
            class,
            seed,
        } => {
            if *states == 0 || *letters == 0 {
                return Ok(Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: "error: --states and --letters must be positive\n".to_owned(),
                });
            }
            let m = random_machine(*states, *letters, *class, *seed);
            Ok(Outcome::ok(serialize_machine(
                &format!("random-{seed}"),
                &m,
            )))
        }
    }
}
