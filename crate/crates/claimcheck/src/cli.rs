//! Command-line interface. The binary is a thin wrapper around [`run`].
//!
//! Exit codes: 0 when everything holds or passes, 1 when a specification
//! fails (or the suite misses its expectation, or the oracle disagrees),
//! 2 on usage or parse errors, 3 when the state cap is exceeded.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::automata::{degeneralize, translate_gba};
use crate::checker::{check_capped, CheckError, CheckMode, CheckReport, Outcome};
use crate::claimchain::{self, SuiteReport};
use crate::kripke::{parse_model, Model, DEFAULT_STATE_CAP};
use crate::ltl::{Lasso, SpecEntry};
use crate::oracle;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "claimcheck",
    version,
    about = "Explicit-state LTL model checking for finite-state workflow models"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum ModeArg {
    #[default]
    AsWritten,
    GloballyWrapped,
}

impl From<ModeArg> for CheckMode {
    fn from(m: ModeArg) -> CheckMode {
        match m {
            ModeArg::AsWritten => CheckMode::AsWritten,
            ModeArg::GloballyWrapped => CheckMode::GloballyWrapped,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum OutputArg {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every formula in a spec file against a model.
    Check {
        /// Model file in the model description language.
        model: PathBuf,
        /// Spec file, one formula per line.
        specs: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t)]
        output: OutputArg,
        /// Bound on explored states before giving up.
        #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
        state_cap: usize,
    },
    /// Translate formulas to Büchi automata and print or dump them.
    Translate {
        /// Spec file, one formula per line.
        specs: PathBuf,
        /// Write the automata to this file instead of standard output.
        #[arg(long)]
        automaton_dump: Option<PathBuf>,
        /// Emit Graphviz instead of the plain-text format.
        #[arg(long)]
        dot: bool,
    },
    /// Check the built-in workflow model against its five specifications.
    Suite {
        #[arg(long, value_enum, default_value_t)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t)]
        output: OutputArg,
    },
    /// Write the built-in model and spec files into a directory.
    EmitBuiltin {
        /// Target directory, created if missing.
        dir: PathBuf,
    },
    /// Cross-check the automata pipeline against the semantics oracle on
    /// randomized cases.
    Oracle {
        /// Number of randomized cases to run.
        #[arg(long, default_value_t = 1000)]
        cases: u64,
        /// Seed for the case generator; identical seeds give identical runs.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Parses `std::env::args` and runs; returns the process exit code.
pub fn main() -> i32 {
    run(Cli::parse())
}

pub fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Check {
            model,
            specs,
            mode,
            output,
            state_cap,
        } => cmd_check(&model, &specs, mode.into(), output, state_cap),
        Command::Translate {
            specs,
            automaton_dump,
            dot,
        } => cmd_translate(&specs, automaton_dump.as_deref(), dot),
        Command::Suite { mode, output } => cmd_suite(mode.into(), output),
        Command::EmitBuiltin { dir } => cmd_emit_builtin(&dir),
        Command::Oracle { cases, seed } => cmd_oracle(cases, seed),
    }
}

fn read_file(path: &Path) -> Result<String, i32> {
    std::fs::read_to_string(path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            eprintln!("error: no such file: {}", path.display());
        } else {
            eprintln!("error: cannot read {}: {e}", path.display());
        }
        EXIT_USAGE
    })
}

fn load_model(path: &Path, cap: usize) -> Result<Model, i32> {
    let text = read_file(path)?;
    let model = parse_model(&text).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        EXIT_USAGE
    })?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "model".to_string());
    let (total, _stuttered) = model.with_name(name).totalize(cap).map_err(|e| {
        eprintln!("error: {e}");
        EXIT_LIMIT
    })?;
    Ok(total)
}

fn load_specs(path: &Path) -> Result<Vec<SpecEntry>, i32> {
    let text = read_file(path)?;
    crate::ltl::parse_spec_file(&text).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        EXIT_USAGE
    })
}

fn spec_name(entry: &SpecEntry, index: usize) -> String {
    entry
        .name
        .clone()
        .unwrap_or_else(|| format!("phi{}", index + 1))
}

fn render_lasso_text(out: &mut String, w: &Lasso, indent: &str) {
    let _ = writeln!(out, "{indent}counterexample:");
    for (i, s) in w.prefix.iter().enumerate() {
        let _ = writeln!(out, "{indent}  prefix[{i}]: {s}");
    }
    for (i, s) in w.cycle.iter().enumerate() {
        let _ = writeln!(out, "{indent}  cycle[{i}]:  {s}");
    }
}

fn cmd_check(
    model_path: &Path,
    spec_path: &Path,
    mode: CheckMode,
    output: OutputArg,
    cap: usize,
) -> i32 {
    let model = match load_model(model_path, cap) {
        Ok(m) => m,
        Err(code) => return code,
    };
    let entries = match load_specs(spec_path) {
        Ok(e) => e,
        Err(code) => return code,
    };
    let mut reports = Vec::new();
    let mut any_fails = false;
    for (i, entry) in entries.iter().enumerate() {
        let name = spec_name(entry, i);
        let verdict = match check_capped(&model, &entry.formula, mode, cap) {
            Ok(v) => v,
            Err(CheckError::StateSpaceLimit(e)) => {
                eprintln!("error: {name}: {e}");
                return EXIT_LIMIT;
            }
            Err(e) => {
                eprintln!("error: {name}: {e}");
                return EXIT_USAGE;
            }
        };
        any_fails |= !verdict.holds();
        reports.push((name, entry, verdict));
    }
    match output {
        OutputArg::Json => {
            let json: Vec<CheckReport> = reports
                .iter()
                .map(|(name, entry, v)| {
                    CheckReport::new(name.clone(), &model, &entry.formula, mode, v)
                })
                .collect();
            println!(
                "{}",
                serde_json::to_string_pretty(&json).expect("reports serialize")
            );
        }
        OutputArg::Text => {
            let mut out = String::new();
            for (name, _, v) in &reports {
                let label = if v.holds() { "HOLDS" } else { "FAILS" };
                let _ = writeln!(out, "{name}: {label} (t={:.3}s)", v.stats.elapsed_seconds);
                if v.vacuous {
                    let _ = writeln!(
                        out,
                        "    warning: vacuously satisfied (antecedent never holds at the evaluated states)"
                    );
                }
                if let Outcome::Fails(w) = &v.outcome {
                    render_lasso_text(&mut out, w, "    ");
                }
            }
            print!("{out}");
        }
    }
    if any_fails {
        EXIT_FAILED
    } else {
        EXIT_OK
    }
}

fn cmd_translate(spec_path: &Path, dump: Option<&Path>, dot: bool) -> i32 {
    let entries = match load_specs(spec_path) {
        Ok(e) => e,
        Err(code) => return code,
    };
    let mut out = String::new();
    for (i, entry) in entries.iter().enumerate() {
        let name = spec_name(entry, i);
        let nnf = entry.formula.to_nnf();
        let automaton = degeneralize(&translate_gba(&nnf).expect("normal form"));
        if dot {
            out.push_str(&automaton.export_dot(&name));
        } else {
            let _ = writeln!(out, "# {name}: {}", entry.formula.pretty());
            out.push_str(&automaton.export_text());
        }
        if i + 1 < entries.len() {
            out.push('\n');
        }
    }
    match dump {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &out) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_USAGE;
            }
            println!("wrote {}", path.display());
        }
        None => print!("{out}"),
    }
    EXIT_OK
}

fn render_suite_text(report: &SuiteReport) -> String {
    let mut out = String::new();
    let mode = match report.mode {
        CheckMode::AsWritten => "as-written",
        CheckMode::GloballyWrapped => "globally-wrapped",
    };
    let _ = writeln!(out, "model: {}  mode: {}", report.model, mode);
    for entry in &report.specs {
        let _ = writeln!(
            out,
            "  {}  {}  {:.3}s{}",
            entry.id,
            entry.verdict.symbol(),
            entry.stats.elapsed_seconds,
            if entry.vacuous { "  (vacuous)" } else { "" }
        );
    }
    let row = |labels: &[crate::checker::VerdictLabel]| {
        labels
            .iter()
            .map(|l| l.symbol())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let _ = writeln!(out, "expected: {}", row(&report.expected));
    let _ = writeln!(out, "observed: {}", row(&report.observed()));
    let _ = writeln!(out, "result: {}", if report.pass { "PASS" } else { "FAIL" });
    out
}

fn cmd_suite(mode: CheckMode, output: OutputArg) -> i32 {
    let report = claimchain::run_suite(mode);
    match output {
        OutputArg::Json => {
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("report serializes")
            );
        }
        OutputArg::Text => print!("{}", render_suite_text(&report)),
    }
    if report.pass {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

fn cmd_emit_builtin(dir: &Path) -> i32 {
    if let Err(e) = std::fs::create_dir_all(dir) {
        eprintln!("error: cannot create {}: {e}", dir.display());
        return EXIT_USAGE;
    }
    let model_path = dir.join("builtin.model");
    let spec_path = dir.join("builtin.spec");
    for (path, text) in [
        (&model_path, claimchain::BUILTIN_MODEL_TEXT),
        (&spec_path, claimchain::BUILTIN_SPEC_TEXT),
    ] {
        if let Err(e) = std::fs::write(path, text) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return EXIT_USAGE;
        }
        println!("wrote {}", path.display());
    }
    EXIT_OK
}

fn cmd_oracle(cases: u64, seed: u64) -> i32 {
    match oracle::run_cases(cases, seed) {
        Ok(0) => {
            println!("oracle: 0 cases, seed {seed}: nothing to check");
            EXIT_OK
        }
        Ok(n) => {
            println!("oracle: {n} cases, seed {seed}: all agree");
            EXIT_OK
        }
        Err(d) => {
            println!("{d}");
            println!(
                "replay with: claimcheck oracle --cases {} --seed {seed}",
                d.index + 1
            );
            EXIT_FAILED
        }
    }
}
