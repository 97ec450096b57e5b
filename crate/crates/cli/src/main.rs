use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use msic::bound::{lower_bound, lower_bound_prune_all, run_algorithm1_with, BoundOptions};
use msic::code::{assign_senders, find_connecting_trees, plan_code, CodeDoc, LinearIndexCode, TreeOptions, TreeSearch};
use msic::dot::to_dot;
use msic::graphs::classify;
use msic::model::SCHEMA_VERSION;
use msic::report::{build_report, ReportOptions};
use msic::verify::{oracle_min_linear, rank_decodable, verify_exhaustive, OracleConfig, OracleOutcome};
use msic::{parse_instance, Error, ProblemInstance};

const EXIT_USAGE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_GUARD: u8 = 3;
const EXIT_UNDECODABLE: u8 = 4;

#[derive(Parser)]
#[command(name = "msic", version, about = "Bounds and codes for multi-sender index coding")]
struct Cli {
    /// Worker threads for parallel searches (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate an instance.
    Validate { instance: PathBuf },
    /// Drop messages nobody wants from the senders' sets.
    Simplify { instance: PathBuf },
    /// SCC decomposition and leaf SCC classes.
    Classify { instance: PathBuf },
    /// Lower bound from the leaf-SCC breaking algorithm.
    Bound {
        instance: PathBuf,
        /// Search every choice sequence for the largest bound.
        #[arg(long)]
        exhaustive: bool,
        /// Include the step log.
        #[arg(long)]
        trace: bool,
        /// State budget for the exhaustive search.
        #[arg(long, default_value_t = 200_000)]
        budget: usize,
    },
    /// Connecting-tree XOR code (upper bound).
    Code {
        instance: PathBuf,
        /// Greedy rather than exact connecting-tree search.
        #[arg(long)]
        greedy: bool,
    },
    /// Check that a code lets every receiver decode.
    Verify {
        instance: PathBuf,
        code: PathBuf,
        /// Also simulate every message assignment.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Shortest linear code by brute force.
    Oracle {
        instance: PathBuf,
        #[arg(long)]
        max_len: Option<usize>,
        #[arg(long, default_value_t = 8)]
        max_messages: usize,
    },
    /// Full pipeline summary.
    Report {
        instance: PathBuf,
        /// Run the linear oracle.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        exhaustive: bool,
        #[arg(long)]
        greedy: bool,
        #[arg(long)]
        trace: bool,
        /// Plain-text table instead of JSON.
        #[arg(long)]
        text: bool,
    },
    /// Graphviz rendering of the graph pair.
    Dot {
        instance: PathBuf,
        /// Render the graphs left by the lower-bound algorithm.
        #[arg(long = "final")]
        final_state: bool,
        #[arg(long)]
        exhaustive: bool,
    },
}

enum Failure {
    Io(PathBuf, std::io::Error),
    Lib(Error),
    Undecodable(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Lib(e.into())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn load(path: &Path) -> Result<ProblemInstance, Failure> {
    Ok(parse_instance(&read(path)?)?)
}

fn emit(value: &impl Serialize) -> Result<(), Failure> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn mode(exhaustive: bool) -> BoundOptions {
    if exhaustive {
        BoundOptions::exhaustive()
    } else {
        BoundOptions::default()
    }
}

fn tree_options(greedy: bool) -> TreeOptions {
    TreeOptions {
        mode: if greedy { TreeSearch::Greedy } else { TreeSearch::Exact },
        ..Default::default()
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Validate { instance } => {
            let inst = load(&instance)?;
            emit(&json!({
                "schema": SCHEMA_VERSION,
                "valid": true,
                "num_messages": inst.num_messages(),
                "num_senders": inst.num_senders(),
            }))
        }
        Command::Simplify { instance } => {
            let (simple, removed) = load(&instance)?.simplify();
            let mut doc = simple.to_doc();
            doc.removed = removed.into_iter().map(|i| i + 1).collect();
            emit(&doc)
        }
        Command::Classify { instance } => {
            let g = load(&instance)?.simplify().0.build_graphs()?;
            let report = classify(&g);
            let mut value = serde_json::to_value(&report)?;
            value["schema"] = json!(SCHEMA_VERSION);
            value["v_out"] = json!(g.v_out());
            emit(&value)
        }
        Command::Bound {
            instance,
            exhaustive,
            trace,
            budget,
        } => {
            let g = load(&instance)?.simplify().0.build_graphs()?;
            let opts = BoundOptions {
                state_budget: budget,
                ..mode(exhaustive)
            };
            let run = run_algorithm1_with(&g, &opts);
            let mut value = json!({
                "schema": SCHEMA_VERSION,
                "mode": run.mode,
                "fell_back": run.fell_back,
                "states_explored": run.states_explored,
                "v_out": run.initial_v_out,
                "n_connected": run.n_connected,
                "n_remaining": run.n_remaining,
                "n_iv": run.n_iv,
                "dummy_count": run.dummy_count,
                "lower_bound": lower_bound(&run)?,
                "lower_bound_prune_all": lower_bound_prune_all(&g),
            });
            if trace {
                value["trace"] = serde_json::to_value(&run.log)?;
            }
            emit(&value)
        }
        Command::Code { instance, greedy } => {
            let inst = load(&instance)?;
            let simple = inst.simplify().0;
            let g = simple.build_graphs()?;
            let family = find_connecting_trees(&g, &tree_options(greedy));
            let code = assign_senders(&simple, &plan_code(&g, &family.trees)?)?;
            emit(&code.to_doc())
        }
        Command::Verify {
            instance,
            code,
            exhaustive,
        } => {
            let inst = load(&instance)?;
            let doc: CodeDoc = serde_json::from_str(&read(&code)?)?;
            let code = LinearIndexCode::from_doc(&doc)?;
            code.check_supports(&inst)?;
            let simulated = if exhaustive {
                Some(verify_exhaustive(&code, &inst)?)
            } else {
                None
            };
            match rank_decodable(&code, &inst) {
                Ok(cert) => {
                    let mut value = serde_json::to_value(&cert)?;
                    value["decodable"] = json!(true);
                    if let Some(s) = simulated {
                        value["simulated"] = json!(s);
                    }
                    emit(&value)
                }
                Err(failure) => {
                    let mut value = json!({
                        "schema": SCHEMA_VERSION,
                        "decodable": false,
                        "failure": failure,
                    });
                    if let Some(s) = simulated {
                        value["simulated"] = json!(s);
                    }
                    Err(Failure::Undecodable(value))
                }
            }
        }
        Command::Oracle {
            instance,
            max_len,
            max_messages,
        } => {
            let simple = load(&instance)?.simplify().0;
            let cfg = OracleConfig { max_len, max_messages };
            let value = match oracle_min_linear(&simple, &cfg)? {
                OracleOutcome::Found { length, code } => json!({
                    "schema": SCHEMA_VERSION,
                    "linear_optimal": true,
                    "length": length,
                    "code": code.to_doc(),
                }),
                OracleOutcome::Exhausted { max_len } => json!({
                    "schema": SCHEMA_VERSION,
                    "linear_optimal": false,
                    "exhausted_at": max_len,
                }),
            };
            emit(&value)
        }
        Command::Report {
            instance,
            oracle,
            exhaustive,
            greedy,
            trace,
            text,
        } => {
            let inst = load(&instance)?;
            let opts = ReportOptions {
                bound: mode(exhaustive),
                trees: tree_options(greedy),
                oracle: oracle.then(OracleConfig::default),
                include_trace: trace,
            };
            let report = build_report(&inst, &opts)?;
            if text {
                print!("{}", report.to_text());
                Ok(())
            } else {
                emit(&report)
            }
        }
        Command::Dot {
            instance,
            final_state,
            exhaustive,
        } => {
            let g = load(&instance)?.simplify().0.build_graphs()?;
            if final_state {
                let run = run_algorithm1_with(&g, &mode(exhaustive));
                print!("{}", to_dot(&run.state));
            } else {
                print!("{}", to_dot(&g));
            }
            Ok(())
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::TooLarge { .. } => EXIT_GUARD,
        Error::Json(_)
        | Error::Schema { .. }
        | Error::SelfWant { .. }
        | Error::OutOfRange { .. }
        | Error::EmptySender { .. }
        | Error::Unowned(_)
        | Error::LengthMismatch { .. }
        | Error::SupportViolation { .. } => EXIT_PARSE,
        _ => EXIT_GUARD,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Io(path, e)) => {
            eprintln!("error: {}: {e}", path.display());
            ExitCode::from(EXIT_PARSE)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Undecodable(value)) => {
            println!("{}", serde_json::to_string_pretty(&value).unwrap_or_default());
            ExitCode::from(EXIT_UNDECODABLE)
        }
    }
}
