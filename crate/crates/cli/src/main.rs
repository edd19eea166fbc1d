use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use homchar_cli::{analyze, oracle_bruteforce, oracle_polarization, verify, Mode, Options, Report, EXIT_INVALID};

#[derive(Parser)]
#[command(name = "homchar", version, about = "Analyze additive functional equations sum f_i^q_i(x^p_i) = 0")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Emit the report as JSON
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every random sample
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Number of oracle samples
    #[arg(long, global = true, default_value_t = 32)]
    samples: usize,
    /// Number of homomorphisms in the ansatz (default: rows - 1)
    #[arg(long, global = true)]
    k: Option<u32>,
    /// Numeric tolerance for root solving and family checks
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,
    /// Add the notes for real-valued solutions
    #[arg(long, global = true)]
    real: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Condition check, identities, constraint system and solution families
    Analyze { equation: String },
    /// Check candidate solutions symbolically and in exact fields
    Verify {
        equation: String,
        /// File with one `name = expression` per line
        candidates: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Both)]
        mode: Mode,
        /// JSON object such as {"phi1": "conj(2)"}, or a path to one
        #[arg(long)]
        bindings: Option<String>,
    },
    /// Independent oracles
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Expand difference operators of a symmetric n-additive map
    Polarization { n: u32 },
    /// Average over all permutations and compare with the combinatorial weights
    Bruteforce { profile: String, pattern: String },
}

fn load_bindings(arg: &str) -> Result<BTreeMap<String, String>, String> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| format!("cannot read bindings file {arg}: {e}"))?
    };
    serde_json::from_str(&text).map_err(|e| format!("bindings must be a JSON object of strings: {e}"))
}

fn run(cli: &Cli) -> (&'static str, Result<Report, homchar::Error>) {
    let g = &cli.global;
    let mut opts = Options {
        seed: g.seed,
        samples: g.samples,
        k: g.k,
        tolerance: g.tolerance,
        real: g.real,
        ..Options::default()
    };
    match &cli.command {
        Command::Analyze { equation } => ("analyze", analyze(equation, &opts)),
        Command::Verify {
            equation,
            candidates,
            mode,
            bindings,
        } => {
            opts.mode = *mode;
            if let Some(b) = bindings {
                match load_bindings(b) {
                    Ok(map) => opts.bindings = map,
                    Err(e) => return ("verify", Err(homchar::Error::Binding(e))),
                }
            }
            let text = match std::fs::read_to_string(candidates) {
                Ok(t) => t,
                Err(e) => {
                    return (
                        "verify",
                        Err(homchar::Error::Binding(format!(
                            "cannot read candidate file {}: {e}",
                            candidates.display()
                        ))),
                    )
                }
            };
            ("verify", verify(equation, &text, &opts))
        }
        Command::Oracle(OracleCommand::Polarization { n }) => ("oracle", oracle_polarization(*n)),
        Command::Oracle(OracleCommand::Bruteforce { profile, pattern }) => ("oracle", oracle_bruteforce(profile, pattern)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, result) = run(&cli);
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            let r = Report::from_error(command, &e);
            if !cli.global.json {
                eprint!("{}", r.text);
                return ExitCode::from(r.exit as u8);
            }
            r
        }
    };
    if cli.global.json {
        print!("{}", report.json_string());
    } else {
        print!("{}", report.text);
    }
    ExitCode::from(u8::try_from(report.exit).unwrap_or(EXIT_INVALID as u8))
}
