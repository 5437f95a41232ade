use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{debug, info};
use serde::Serialize;
use serde_json::json;

use psystem::analysis::{default_scan_range, scan_regions};
use psystem::entropy::check_condition;
use psystem::shock::solve_rankine_hugoniot;
use psystem::simulator::{extract_shock, simulate};
use psystem::tables::{build_tables, render_csv, Table, TableSpec};
use psystem::{Error, ModelSpec64, SimConfig64};

const LOG_ENV: &str = "PSYSTEM_LOG";

/// Stress laws, compression shocks and entropy checks for the 1-D elasticity
/// p-system.
#[derive(Debug, Parser)]
#[command(name = "psystem", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct Output {
    /// Write the result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Args)]
struct ModelArg {
    /// Model as a JSON file path or inline JSON, e.g.
    /// '{"kind":"ogden","rho0":1,"mu":1,"lambda":1}'.
    #[arg(long)]
    model: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Left strain of the impact shock over (β, Ṽ₀) grids, one table per β.
    Tables {
        #[arg(long, value_delimiter = ',', default_values_t = psystem::tables::DEFAULT_BETAS)]
        betas: Vec<f64>,
        #[arg(long = "v0-tildes", value_delimiter = ',', default_values_t = psystem::tables::DEFAULT_V0_TILDES)]
        v0_tildes: Vec<f64>,
        /// Blatz-Ko mixing fractions, one column each.
        #[arg(long, value_delimiter = ',', default_values_t = psystem::tables::DEFAULT_FS)]
        fs: Vec<f64>,
        /// Decimals for every column (default: 4 for Ogden, 6 otherwise).
        #[arg(long)]
        digits: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Hyperbolic and genuinely nonlinear strain intervals plus thresholds.
    Analyze {
        #[command(flatten)]
        model: ModelArg,
        /// Scan range `lo,hi` in Γ.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        range: Option<Vec<f64>>,
        #[command(flatten)]
        output: Output,
    },
    /// Rankine-Hugoniot shock of the impact problem.
    Shock {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        v0: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Entropy verdict for a left strain.
    Entropy {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long = "gamma-l", allow_negative_numbers = true)]
        gamma_l: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Finite-volume run of the impact problem: field CSV plus the shock
    /// measured from it.
    Simulate {
        /// Run configuration as a JSON file path or inline JSON.
        #[arg(long)]
        config: String,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Numerical(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_usage() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Numerical(e.to_string())
        }
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure::Usage(format!("{}: {e}", path.display()))
}

/// Inline JSON when the argument starts with `{`, a file path otherwise.
fn load_json<T: serde::de::DeserializeOwned>(arg: &str, what: &str) -> Result<T, Failure> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_owned()
    } else {
        let path = Path::new(arg);
        fs::read_to_string(path).map_err(|e| io_failure(path, e))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("invalid {what}: {e}")))
}

fn emit(output: &Output, text: &str) -> Result<(), Failure> {
    match &output.out {
        Some(path) => fs::write(path, text).map_err(|e| io_failure(path, e)),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Usage(format!("stdout: {e}"))),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

/// Only JSON is available for the single-object commands.
fn require_json(output: &Output, command: &str) -> Result<(), Failure> {
    match output.format {
        Some(Format::Csv) => Err(Failure::Usage(format!("{command} supports --format json only"))),
        _ => Ok(()),
    }
}

fn tables_json(tables: &[Table<f64>]) -> serde_json::Value {
    let tables: Vec<_> = tables
        .iter()
        .map(|t| {
            let columns: Vec<String> = t.columns.iter().map(|c| c.name()).collect();
            let rows: Vec<_> = t
                .rows
                .iter()
                .map(|r| json!({ "v0_tilde": r.v0_tilde, "gamma_l": r.cells }))
                .collect();
            json!({ "beta": t.beta, "columns": columns, "rows": rows, "notes": t.notes })
        })
        .collect();
    json!(tables)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Tables { betas, v0_tildes, fs, digits, output } => {
            let spec = TableSpec { betas, v0_tildes, fs };
            let tables = build_tables(&spec);
            for note in tables.iter().flat_map(|t| &t.notes) {
                eprintln!("note: {note}");
            }
            info!("built {} tables", tables.len());
            let text = match output.format.unwrap_or(Format::Csv) {
                Format::Csv => render_csv(&tables, digits),
                Format::Json => to_json(&tables_json(&tables)),
            };
            emit(&output, &text)
        }
        Command::Analyze { model, range, output } => {
            require_json(&output, "analyze")?;
            let model: ModelSpec64 = load_json(&model.model, "model")?;
            let (lo, hi) = match range.as_deref() {
                Some([lo, hi]) => (*lo, *hi),
                Some(_) => return Err(Failure::Usage("--range takes two values lo,hi".into())),
                None => default_scan_range(),
            };
            let report = scan_regions(&model, lo, hi)?;
            emit(&output, &to_json(&report))
        }
        Command::Shock { model, v0, output } => {
            let model: ModelSpec64 = load_json(&model.model, "model")?;
            let sol = solve_rankine_hugoniot(&model, v0)?;
            for w in &sol.warnings {
                eprintln!("warning: {w}");
            }
            let text = match output.format.unwrap_or(Format::Json) {
                Format::Json => to_json(&sol),
                Format::Csv => {
                    let sigma = sol.sigma.map(|s| s.to_string()).unwrap_or_default();
                    format!(
                        "v0,gamma_l,sigma,residual\n{},{},{},{}\n",
                        sol.v0, sol.gamma_l, sigma, sol.rh_residual
                    )
                }
            };
            emit(&output, &text)
        }
        Command::Entropy { model, gamma_l, output } => {
            require_json(&output, "entropy")?;
            let model: ModelSpec64 = load_json(&model.model, "model")?;
            let verdict = check_condition(&model, gamma_l)?;
            emit(&output, &to_json(&verdict))
        }
        Command::Simulate { config, output } => {
            let cfg: SimConfig64 = load_json(&config, "config")?;
            let field = simulate(&cfg)?;
            debug!("simulation reached t = {}", field.t);
            let text = match output.format.unwrap_or(Format::Csv) {
                Format::Csv => field.to_csv(),
                Format::Json => to_json(&field),
            };
            emit(&output, &text)?;

            let hint = solve_rankine_hugoniot(&cfg.model, cfg.v0)?;
            let summary = if hint.is_trivial() {
                json!({ "sigma_est": null, "gamma_left_est": 0.0, "sigma_rh": null, "gamma_l_rh": 0.0 })
            } else {
                let (sigma_est, gamma_est) = extract_shock(&field, &hint)?;
                json!({
                    "sigma_est": sigma_est,
                    "gamma_left_est": gamma_est,
                    "sigma_rh": hint.sigma,
                    "gamma_l_rh": hint.gamma_l,
                })
            };
            let summary = to_json(&summary);
            // the field owns stdout unless it went to a file
            if output.out.is_some() {
                print!("{summary}");
            } else {
                eprint!("{summary}");
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or(LOG_ENV, "warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(m) => eprintln!("error: {m}"),
                Failure::Numerical(m) => eprintln!("numerical error: {m}"),
            }
            ExitCode::from(f.exit_code())
        }
    }
}
