//! Argument parsing and command dispatch for the `ionfield` binary.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use super::format::{rows_to_csv, CsvRow};
use super::golden::{golden_check, GoldenReport, GoldenSource, TableId, FIDELITY_ABS_TOL};
use super::manifest::RunManifest;
use super::sweeps::{chain_report, fidelity_sweep, fock_rows, negativity_sweep, System, Treatment};
use super::tolerance::TolPolicy;
use crate::gaussian::SEPARABILITY_TOL;
use crate::ion_chain::IonChainModel;
use crate::numerics::QUAD_TOLERANCE;
use crate::scalar_field::DEFAULT_MASS;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "ionfield",
    version,
    about = "Entanglement and fidelity of trapped-ion local modes and the lattice scalar vacuum"
)]
pub struct Cli {
    /// Write output here (manifest goes to `<PATH>.manifest.json`);
    /// default is stdout with the manifest on stderr.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true, value_name = "K")]
    pub threads: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = TolPolicy::Default)]
    pub tol_policy: TolPolicy,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Equilibrium positions, mode frequencies and (N ≤ 6) the local-mode covariance.
    Chain {
        #[arg(value_name = "N")]
        n: usize,
    },
    /// Logarithmic negativity between two regions versus their separation.
    Negativity {
        #[arg(long, value_enum, default_value_t = System::Ion)]
        system: System,
        #[arg(long, default_value_t = 150)]
        chain_size: usize,
        #[arg(long, short = 'd', default_value_t = 1)]
        region_size: usize,
        /// Separations as `A..=B[:STEP]`, `A..B[:STEP]` or a comma list.
        #[arg(long, default_value = "0..=10")]
        separations: String,
        #[arg(
            long,
            value_enum,
            value_delimiter = ',',
            default_value = "trace,phi,pi"
        )]
        treatments: Vec<Treatment>,
        #[arg(long, default_value_t = DEFAULT_MASS)]
        mass: f64,
    },
    /// Fidelity of central chain windows with the scalar vacuum, raw and after
    /// the optimal global squeeze.
    Fidelity {
        #[arg(long, default_value_t = 30)]
        chain_size: usize,
        /// Window sizes, same syntax as separations.
        #[arg(long, default_value = "2..=30:2")]
        windows: String,
        #[arg(long, default_value_t = DEFAULT_MASS)]
        mass: f64,
    },
    /// Probability outside the lowest D Fock levels of the two-ion local modes.
    Fock {
        #[arg(long, default_value = "2..=8")]
        dims: String,
    },
    /// Recompute golden tables and compare.
    GoldenCheck {
        /// `1`..`7`, `appendix-b` or `all`.
        #[arg(long, default_value = "all")]
        table: String,
        /// Read golden CSVs from this directory instead of the built-in copies.
        #[arg(long, value_name = "DIR")]
        golden_dir: Option<PathBuf>,
    },
}

/// Parses `A..=B[:S]`, `A..B[:S]` or `a,b,c`.
pub fn parse_index_list(spec: &str) -> Result<Vec<usize>> {
    let bad = || Error::InvalidArgument(format!("cannot parse index list '{spec}'"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((lo, rest)) = part.split_once("..") {
            let (hi, step) = match rest.split_once(':') {
                Some((h, s)) => (h, num(s)?),
                None => (rest, 1),
            };
            if step == 0 {
                return Err(bad());
            }
            let (hi, inclusive) = match hi.strip_prefix('=') {
                Some(h) => (num(h)?, true),
                None => (num(hi)?, false),
            };
            let lo = num(lo)?;
            let end = if inclusive { hi + 1 } else { hi };
            out.extend((lo..end).step_by(step));
        } else {
            out.push(num(part)?);
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

/// What the process should report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    GoldenFailure,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_GOLDEN: i32 = 3;

pub fn exit_code(result: &Result<Outcome>) -> i32 {
    match result {
        Ok(Outcome::Success) => EXIT_OK,
        Ok(Outcome::GoldenFailure) => EXIT_GOLDEN,
        Err(e) if e.is_usage() => EXIT_USAGE,
        Err(_) => EXIT_NUMERICAL,
    }
}

fn tolerances(policy: TolPolicy) -> Value {
    json!({
        "policy": policy,
        "last_digit_fraction": policy.digit_fraction(),
        "fidelity_absolute": policy.scale_absolute(FIDELITY_ABS_TOL),
        "separability": SEPARABILITY_TOL,
        "quadrature": QUAD_TOLERANCE,
        "equilibrium_gradient": 1e-12,
    })
}

struct Output {
    body: String,
    params: Value,
    metadata: Value,
    outcome: Outcome,
}

fn table_body<R: CsvRow + Serialize>(rows: &[R], format: Format) -> String {
    match format {
        Format::Csv => rows_to_csv(rows),
        Format::Json => serde_json::to_string_pretty(rows).expect("rows serialize") + "\n",
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match cli.threads {
        Some(0) => Err(Error::InvalidArgument(
            "--threads must be at least 1".into(),
        )),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
            pool.install(|| run_inner(cli))
        }
        None => run_inner(cli),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Chain { .. } => "chain",
        Command::Negativity { .. } => "negativity",
        Command::Fidelity { .. } => "fidelity",
        Command::Fock { .. } => "fock",
        Command::GoldenCheck { .. } => "golden-check",
    }
}

fn run_inner(cli: &Cli) -> Result<Outcome> {
    let start = Instant::now();
    let out = match &cli.command {
        Command::Chain { n } => {
            let report = chain_report(*n)?;
            let body = match cli.format {
                Format::Csv => report.to_text(),
                Format::Json => {
                    serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
                }
            };
            Output {
                body,
                params: json!({ "n": n }),
                metadata: json!({}),
                outcome: Outcome::Success,
            }
        }
        Command::Negativity {
            system,
            chain_size,
            region_size,
            separations,
            treatments,
            mass,
        } => {
            let seps = parse_index_list(separations)?;
            if *system == System::Ion && !(1..=crate::ion_chain::MAX_IONS).contains(chain_size) {
                return Err(Error::InvalidArgument(format!(
                    "chain size {chain_size} out of range"
                )));
            }
            let rows =
                negativity_sweep(*system, *chain_size, *region_size, &seps, treatments, *mass)?;
            for r in rows.iter().filter(|r| r.log_negativity.is_none()) {
                eprintln!(
                    "warning: regions of {} at separation {} do not fit in {} ions; row left empty",
                    r.region_size, r.separation, chain_size
                );
            }
            let metadata = match system {
                System::Scalar => {
                    json!({ "scalar_conditioning": "infinite_complement", "mass": mass })
                }
                System::Ion => json!({}),
            };
            Output {
                body: table_body(&rows, cli.format),
                params: json!({
                    "system": system,
                    "chain_size": chain_size,
                    "region_size": region_size,
                    "separations": seps,
                    "treatments": treatments,
                    "mass": mass,
                }),
                metadata,
                outcome: Outcome::Success,
            }
        }
        Command::Fidelity {
            chain_size,
            windows,
            mass,
        } => {
            let ws = parse_index_list(windows)?;
            if let Some(w) = ws.iter().find(|&&w| w == 0 || w > *chain_size) {
                return Err(Error::InvalidArgument(format!(
                    "window {w} does not fit {chain_size} ions"
                )));
            }
            let rows = fidelity_sweep(*chain_size, &ws, *mass)?;
            Output {
                body: table_body(&rows, cli.format),
                params: json!({ "chain_size": chain_size, "windows": ws, "mass": mass }),
                metadata: json!({ "squeeze_bracket": crate::gaussian::SQUEEZE_BRACKET }),
                outcome: Outcome::Success,
            }
        }
        Command::Fock { dims } => {
            let ds = parse_index_list(dims)?;
            let cm = IonChainModel::build(2)?.local_mode_cm();
            let rows = fock_rows(&cm, &ds)?;
            Output {
                body: table_body(&rows, cli.format),
                params: json!({ "dims": ds }),
                metadata: json!({ "squeeze": crate::fock::normal_form_squeeze(&cm), "phi": 0.0 }),
                outcome: Outcome::Success,
            }
        }
        Command::GoldenCheck { table, golden_dir } => {
            let ids: Vec<TableId> = if table.trim().eq_ignore_ascii_case("all") {
                TableId::ALL.to_vec()
            } else {
                vec![table.parse()?]
            };
            let source = golden_dir
                .clone()
                .map_or(GoldenSource::Embedded, GoldenSource::Dir);
            let reports: Vec<GoldenReport> = ids
                .iter()
                .map(|&id| golden_check(id, cli.tol_policy, &source))
                .collect::<Result<_>>()?;
            let passed = reports.iter().all(GoldenReport::passed);
            let body = match cli.format {
                Format::Csv => reports
                    .iter()
                    .map(GoldenReport::summary)
                    .collect::<String>(),
                Format::Json => {
                    serde_json::to_string_pretty(&reports).expect("reports serialize") + "\n"
                }
            };
            Output {
                body,
                params: json!({
                    "tables": ids.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "golden_dir": golden_dir,
                }),
                metadata: json!({ "passed": passed }),
                outcome: if passed {
                    Outcome::Success
                } else {
                    Outcome::GoldenFailure
                },
            }
        }
    };

    let manifest = RunManifest::new(
        command_name(&cli.command),
        out.params,
        tolerances(cli.tol_policy),
        out.metadata,
        start.elapsed().as_millis(),
    );
    match &cli.out {
        Some(path) => {
            std::fs::write(path, &out.body)?;
            std::fs::write(RunManifest::path_for(path), manifest.to_json() + "\n")?;
        }
        None => {
            std::io::stdout().write_all(out.body.as_bytes())?;
            eprintln!("{}", manifest.to_json());
        }
    }
    Ok(out.outcome)
}
