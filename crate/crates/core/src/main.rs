use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use s4fs::nonmono::{self, QueryMode};
use s4fs::oracle;
use s4fs::syntax::{self, Mode, Theory};
use s4fs::{aspgen, monosat, structures};

/// Reasoner for multi-standpoint S4F logic.
///
/// Exit codes: 0 = yes/sat/entailed, 1 = no/unsat/not entailed,
/// 2 = usage or input error.
#[derive(Parser)]
#[command(name = "s4fs", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FromLang {
    Dl,
    Lp,
    Af,
}

#[derive(Clone, Copy, ValueEnum)]
enum CliMode {
    Credulous,
    Sceptical,
}

#[derive(Args)]
struct DumpCnf {
    /// Export every solved propositional problem as DIMACS into this directory
    #[arg(long, value_name = "DIR")]
    dump_cnf: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide satisfiability of a theory; prints a witness structure
    Sat {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        dump: DumpCnf,
    },
    /// Model-check an expression against a structure (globally, or at a point)
    Check {
        /// JSON file holding the structure
        #[arg(long, value_name = "JSON")]
        structure: PathBuf,
        /// Precisification id for pointed satisfaction
        #[arg(long, value_name = "ID")]
        at: Option<String>,
        expr: String,
        #[arg(long)]
        json: bool,
    },
    /// Enumerate the minimal models of a theory as partition certificates
    Minmodels {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        /// Materialise and include each certified structure
        #[arg(long)]
        with_structures: bool,
        #[command(flatten)]
        dump: DumpCnf,
    },
    /// Decide credulous or sceptical entailment of a formula
    Query {
        #[arg(long, value_enum)]
        mode: CliMode,
        file: PathBuf,
        expr: String,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        dump: DumpCnf,
    },
    /// Translate a default theory, logic program, or argumentation framework
    Translate {
        #[arg(long, value_enum)]
        from: FromLang,
        file: PathBuf,
    },
    /// Emit the disjunctive ASP encoding of a theory
    EmitAsp {
        file: PathBuf,
        /// File listing atom/standpoint names in priority order
        #[arg(long, value_name = "FILE")]
        order: Option<PathBuf>,
        /// Write to a file instead of standard output
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Brute-force reference computations (fixture derivation)
    Oracle {
        #[command(subcommand)]
        what: OracleCmd,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Minimal-model profiles by exhaustive search
    Brute { file: PathBuf },
    /// Stable extensions of an argumentation framework
    Stable { file: PathBuf },
}

enum Verdict {
    Yes,
    No,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Verdict::Yes) => ExitCode::from(0),
        Ok(Verdict::No) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load_theory(path: &PathBuf, mode: Option<Mode>) -> Result<Theory, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mode = mode
        .or_else(|| Mode::from_extension(&path.to_string_lossy()))
        .unwrap_or(Mode::Spt);
    syntax::parse_theory(&text, mode).map_err(|e| format!("{}: {e}", path.display()))
}

fn setup_dump(dump: &DumpCnf) -> Result<(), String> {
    if let Some(dir) = &dump.dump_cnf {
        std::fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
        s4fs::propsat::set_dimacs_dump_dir(Some(dir.clone()));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<Verdict, String> {
    match cli.command {
        Command::Sat { file, json, dump } => {
            setup_dump(&dump)?;
            let t = load_theory(&file, None)?;
            match monosat::sat_mono(&t) {
                Some(witness) => {
                    if json {
                        println!(
                            "{}",
                            serde_json::json!({"verdict": "sat", "witness": serde_json::from_str::<serde_json::Value>(&witness.to_json()).unwrap()})
                        );
                    } else {
                        println!("SAT ({} precisifications)", witness.precisifications.len());
                        println!("{}", witness.to_json());
                    }
                    Ok(Verdict::Yes)
                }
                None => {
                    if json {
                        println!("{}", serde_json::json!({"verdict": "unsat"}));
                    } else {
                        println!("UNSAT");
                    }
                    Ok(Verdict::No)
                }
            }
        }
        Command::Check { structure, at, expr, json } => {
            let text = std::fs::read_to_string(&structure)
                .map_err(|e| format!("{}: {e}", structure.display()))?;
            let st = structures::SPStructure::from_json(&text).map_err(|e| e.to_string())?;
            let e = syntax::parse_expression(&expr).map_err(|e| e.to_string())?;
            let holds = match &at {
                Some(id) => st.satisfies_at(id, &e).map_err(|e| e.to_string())?,
                None => st.models_expression(&e).map_err(|e| e.to_string())?,
            };
            if json {
                println!("{}", serde_json::json!({"verdict": holds, "at": at}));
            } else {
                println!("{}", if holds { "satisfied" } else { "not satisfied" });
            }
            Ok(if holds { Verdict::Yes } else { Verdict::No })
        }
        Command::Minmodels { file, json, with_structures, dump } => {
            setup_dump(&dump)?;
            let t = load_theory(&file, None)?;
            let certs = nonmono::enumerate_minimal(&t);
            if json {
                let arr: Vec<serde_json::Value> =
                    certs.iter().map(|c| c.to_json(with_structures)).collect();
                println!("{}", serde_json::json!({"count": certs.len(), "certificates": arr}));
            } else {
                println!("{} minimal model(s)", certs.len());
                for (i, c) in certs.iter().enumerate() {
                    println!("--- certificate {i}");
                    for f in c.signature() {
                        println!("  psi: {f}");
                    }
                    for f in &c.partition.phi {
                        println!("  phi: {f}");
                    }
                    if with_structures {
                        println!("{}", c.structure().to_json());
                    }
                }
            }
            Ok(if certs.is_empty() { Verdict::No } else { Verdict::Yes })
        }
        Command::Query { mode, file, expr, json, dump } => {
            setup_dump(&dump)?;
            let t = load_theory(&file, None)?;
            let xi = syntax::parse_formula(&expr).map_err(|e| e.to_string())?;
            let mode = match mode {
                CliMode::Credulous => QueryMode::Credulous,
                CliMode::Sceptical => QueryMode::Sceptical,
            };
            let holds = nonmono::entails_nonmono(&t, &xi, mode).map_err(|e| e.to_string())?;
            if json {
                println!("{}", serde_json::json!({"verdict": holds}));
            } else {
                println!("{}", if holds { "entailed" } else { "not entailed" });
            }
            Ok(if holds { Verdict::Yes } else { Verdict::No })
        }
        Command::Translate { from, file } => {
            let mode = match from {
                FromLang::Dl => Mode::Dl,
                FromLang::Lp => Mode::Lp,
                FromLang::Af => Mode::Af,
            };
            let t = load_theory(&file, Some(mode))?;
            print!("{}", syntax::print_theory(&t));
            Ok(Verdict::Yes)
        }
        Command::EmitAsp { file, order, output } => {
            let t = load_theory(&file, None)?;
            let order = match order {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| format!("{}: {e}", path.display()))?;
                    let names: Vec<String> =
                        text.split_whitespace().map(str::to_owned).collect();
                    aspgen::SubformulaOrder::with_priorities(&t, &names)
                }
                None => aspgen::SubformulaOrder::lexicographic(&t),
            };
            let program = aspgen::emit_asp(&t, &order);
            match output {
                Some(path) => std::fs::write(&path, program)
                    .map_err(|e| format!("{}: {e}", path.display()))?,
                None => print!("{program}"),
            }
            Ok(Verdict::Yes)
        }
        Command::Oracle { what } => match what {
            OracleCmd::Brute { file } => {
                let t = load_theory(&file, None)?;
                let profiles = oracle::brute_minimal_models(&t).map_err(|e| e.to_string())?;
                println!("{} minimal profile(s)", profiles.len());
                for p in &profiles {
                    for (s, vals) in &p.inner_vals {
                        let rendered: Vec<String> = vals
                            .iter()
                            .map(|v| {
                                let names: Vec<&str> =
                                    v.iter().map(s4fs::syntax::Atom::name).collect();
                                format!("{{{}}}", names.join(","))
                            })
                            .collect();
                        println!("  {s}: {}", rendered.join(" "));
                    }
                    println!("  ---");
                }
                Ok(if profiles.is_empty() { Verdict::No } else { Verdict::Yes })
            }
            OracleCmd::Stable { file } => {
                let text = std::fs::read_to_string(&file)
                    .map_err(|e| format!("{}: {e}", file.display()))?;
                let af = syntax::parse_af(&text).map_err(|e| e.to_string())?;
                let exts = oracle::af_stable(af.args(), af.attacks());
                println!("{} stable extension(s)", exts.len());
                for ext in &exts {
                    let names: Vec<&str> = ext.iter().map(s4fs::syntax::Atom::name).collect();
                    println!("  {{{}}}", names.join(","));
                }
                Ok(Verdict::Yes)
            }
        },
    }
}
