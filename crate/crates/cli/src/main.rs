//! Command-line front end: build witnesses, evaluate them against states,
//! sweep parameter grids to CSV, and run canned verification recipes.
//!
//! Exit codes: 0 on success, 1 on domain/contract errors (including failed
//! verification recipes), 2 on I/O errors.

mod recipes;
mod render;
mod spec;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use mubwit_core::analysis::{evaluate, scan, scan_csv, WitnessMeta};
use mubwit_core::linalg::{eig_hermitian, partial_transpose, CMatrix};
use mubwit_core::mubs::MubSetJson;
use mubwit_core::states::DensityState;
use mubwit_core::witness::{build_w, WitnessSpec};

#[derive(Debug)]
pub enum CliError {
    Core(mubwit_core::Error),
    Io(String),
}

impl From<mubwit_core::Error> for CliError {
    fn from(e: mubwit_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

#[derive(Parser)]
#[command(
    name = "mubwit",
    version,
    about = "Entanglement witnesses from mutually unbiased bases",
    after_help = "Environment: MUBWIT_SEED overrides the default see-saw seed 0."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a witness matrix and print its summary
    Build {
        /// Local dimension
        #[arg(long)]
        d: usize,
        /// Basis selector: hw:all | hw:0,1,2 | pauli:all | d3:0,1,2 | fourier | fixture:ext | fixture:unext
        #[arg(long)]
        bases: String,
        /// Shift s carried by the canonical basis
        #[arg(long, default_value_t = 0)]
        shift: usize,
        /// Apply the partial transpose
        #[arg(long)]
        gamma: bool,
        /// Write the matrix JSON here
        #[arg(long)]
        out: Option<PathBuf>,
        /// Skip the matrix grid on stdout
        #[arg(long)]
        no_matrix: bool,
    },
    /// Evaluate a witness file against a state
    Eval {
        /// Witness matrix JSON
        #[arg(long)]
        witness: PathBuf,
        /// State family (rho_x, rho_a, rho_b, isotropic) or a state JSON file
        #[arg(long)]
        state: String,
        /// Family parameters, e.g. d=3,s=1,x=0.5
        #[arg(long, default_value = "")]
        params: String,
        /// Detection tolerance on tr[W rho]
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Sweep a state-family grid against one witness, emitting CSV
    Scan {
        /// Local dimension
        #[arg(long)]
        d: usize,
        /// Witness selector, e.g. hw:0,1,2:s=1 (the partial transpose is applied
        /// unless :nogamma is appended)
        #[arg(long)]
        witness: String,
        /// State family name
        #[arg(long)]
        state: String,
        /// Grid, e.g. x=0.1:2.0:0.1
        #[arg(long)]
        grid: String,
        /// Write CSV here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        /// Detection tolerance on tr[W rho]
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Run a canned verification recipe
    Verify {
        /// Recipe name; an unknown name lists the available recipes
        #[arg(long)]
        recipe: String,
    },
    /// Dump or check a MUB set
    Mub {
        /// Local dimension (required with --set)
        #[arg(long)]
        d: Option<usize>,
        /// Set selector, e.g. hw:all or fixture:unext
        #[arg(long)]
        set: Option<String>,
        /// Write the set JSON here
        #[arg(long)]
        out: Option<PathBuf>,
        /// Load a set JSON and verify unbiasedness
        #[arg(long)]
        check: Option<PathBuf>,
    },
}

fn seed_from_env() -> u64 {
    std::env::var("MUBWIT_SEED")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(0)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&text).map_err(|e| io_err(path, e))
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string(value).map_err(|e| io_err(path, e))?;
    fs::write(path, text).map_err(|e| io_err(path, e))
}

fn cmd_build(
    d: usize,
    bases: &str,
    shift: usize,
    gamma: bool,
    out: Option<&Path>,
    no_matrix: bool,
) -> Result<(), CliError> {
    let (set, labels) = spec::resolve_bases(d, bases)?;
    let wspec = WitnessSpec::new(d, labels, shift, gamma);
    let w = build_w(&wspec, &set)?;
    let eig = eig_hermitian(&w)?;
    println!("witness {} on {} (dim {})", wspec.label(), bases, w.dim());
    println!("trace                = {}", render::fmt_value(w.trace().re));
    println!(
        "min eigenvalue       = {}",
        render::fmt_value(eig.min_eigenvalue())
    );
    println!(
        "max eigenvalue       = {}",
        render::fmt_value(eig.max_eigenvalue())
    );
    println!("hermiticity residual = {:.2e}", w.hermiticity_residual());
    let pt = partial_transpose(&w, d)?;
    if pt.max_abs_diff(&w) == 0.0 {
        println!("note: the witness equals its own partial transpose");
    }
    if !no_matrix {
        print!("{}", render::matrix_grid(&w));
    }
    if let Some(path) = out {
        write_json(path, &w)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_eval(witness: &Path, state: &str, params: &str, tol: f64) -> Result<(), CliError> {
    let w: CMatrix = read_json(witness)?;
    let state_value: DensityState = if state.ends_with(".json") {
        let loaded: DensityState = read_json(Path::new(state))?;
        loaded.validate()?;
        loaded
    } else {
        let params = spec::parse_params(params)?;
        spec::build_state(state, &params)?
    };
    let meta = WitnessMeta::unlabeled_file(witness.display().to_string());
    let report = evaluate(&w, &meta, &state_value, tol)?;
    println!("state   = {}", state_value.label());
    println!("value   = {}", render::fmt_value_full(report.value));
    println!(
        "ppt     = {} (min eigenvalue of the transpose = {})",
        report.ppt,
        render::fmt_value(report.min_eig_transpose)
    );
    println!("verdict = {}", report.verdict);
    Ok(())
}

fn cmd_scan(
    d: usize,
    witness: &str,
    state: &str,
    grid: &str,
    out: Option<&Path>,
    tol: f64,
) -> Result<(), CliError> {
    let selector = spec::resolve_witness(d, witness)?;
    let wspec = WitnessSpec::new(d, selector.labels.clone(), selector.s, selector.gamma);
    let w = build_w(&wspec, &selector.set)?;
    let family = spec::resolve_family(state, d, selector.s)?;
    let (param_name, values) = spec::parse_grid(grid)?;
    if param_name != family.param_name() {
        return Err(CliError::Core(mubwit_core::Error::Domain(format!(
            "grid parameter `{param_name}` does not match the family parameter `{}`",
            family.param_name()
        ))));
    }
    let meta = WitnessMeta::new(selector.display.clone(), selector.s, selector.labels.len());
    let rows = scan(&w, &meta, &family, &values, tol)?;
    let csv = scan_csv(&param_name, &rows);
    match out {
        Some(path) => {
            fs::write(path, &csv).map_err(|e| io_err(path, e))?;
            println!("wrote {} ({} rows)", path.display(), rows.len());
        }
        None => print!("{csv}"),
    }
    Ok(())
}

fn cmd_mub(
    d: Option<usize>,
    set: Option<&str>,
    out: Option<&Path>,
    checked: Option<&Path>,
) -> Result<(), CliError> {
    if let Some(path) = checked {
        let json: MubSetJson = read_json(path)?;
        let set = json.into_mub_set()?;
        let report = set.verify(1e-10);
        println!(
            "{} bases in dimension {}: worst pairwise deviation {:.2e} ({})",
            set.m(),
            set.d(),
            report.max_deviation,
            if report.pass { "PASS" } else { "FAIL" }
        );
        if !report.pass {
            return Err(CliError::Core(mubwit_core::Error::Domain(
                "set failed the unbiasedness check".into(),
            )));
        }
        return Ok(());
    }
    let (Some(d), Some(spec_str)) = (d, set) else {
        return Err(CliError::Core(mubwit_core::Error::Domain(
            "mub needs either --check <file> or both --d and --set".into(),
        )));
    };
    let (set, labels) = spec::resolve_bases(d, spec_str)?;
    println!(
        "constructed {} of {} bases (selected: {})",
        set.m(),
        spec_str,
        labels.join(",")
    );
    if let Some(path) = out {
        write_json(path, &MubSetJson::from(&set))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.cmd {
        Cmd::Build {
            d,
            bases,
            shift,
            gamma,
            out,
            no_matrix,
        } => {
            cmd_build(d, &bases, shift, gamma, out.as_deref(), no_matrix)?;
            Ok(true)
        }
        Cmd::Eval {
            witness,
            state,
            params,
            tol,
        } => {
            cmd_eval(&witness, &state, &params, tol)?;
            Ok(true)
        }
        Cmd::Scan {
            d,
            witness,
            state,
            grid,
            out,
            tol,
        } => {
            cmd_scan(d, &witness, &state, &grid, out.as_deref(), tol)?;
            Ok(true)
        }
        Cmd::Verify { recipe } => Ok(recipes::run(&recipe, seed_from_env())?),
        Cmd::Mub { d, set, out, check } => {
            cmd_mub(d, set.as_deref(), out.as_deref(), check.as_deref())?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(CliError::Io(e)) => {
            eprintln!("I/O error: {e}");
            ExitCode::from(2)
        }
    }
}
