use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use vandervolt::basis::BasisSequence;
use vandervolt::experiments::{
    run_incomplete_grid, run_random_nodes, write_curve_csv, write_histograms_csv, write_records_csv, ExperimentConfig,
    DEFAULT_TRIALS, FULL_TRIALS,
};
use vandervolt::interpolant::{cardinal_functions, fit};
use vandervolt::io::{
    format_float, json_float, parse_basis_table, parse_nodes, parse_values, write_basis_table, BasisSpec,
};
use vandervolt::lebesgue::{convex_hull_mesh, lebesgue_report, DEFAULT_MESH_MEASURE};
use vandervolt::selection::{select_rows, SelectedBasis, SelectionMethod, DEFAULT_TOL};
use vandervolt::sparse_grid::{smolyak_basis, smolyak_grid};
use vandervolt::vandermonde::{build_generalized, NodeSet};

const EXIT_DISMISSED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "vandervolt",
    version,
    about = "Maximum-volume basis selection and Lebesgue constants"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Select n trial-basis functions for the nodes in a CSV file.
    SelectBasis(SelectArgs),
    /// Discrete Lebesgue constant and bounds over the hull of the nodes.
    Lebesgue(LebesgueArgs),
    /// Dump a complete Smolyak grid with its Chebyshev basis.
    SparseGrid(SparseGridArgs),
    /// Batch experiments that write CSV tables.
    #[command(subcommand)]
    Experiment(Experiment),
}

#[derive(Subcommand)]
enum Experiment {
    /// Random nodes: best vs MaxVol vs MaxMinSv Lebesgue constants.
    RandomNodes(RandomNodesArgs),
    /// Lebesgue constants between two consecutive Smolyak grids.
    IncompleteGrid(IncompleteGridArgs),
}

#[derive(Args)]
struct BasisArgs {
    /// Trial basis, e.g. monomial:degree=2, chebyshev:degree=3, smolyak:k=2.
    #[arg(long, conflicts_with = "basis_file")]
    basis: Option<BasisSpec>,
    /// Trial basis table (index,family,e1,..,ed).
    #[arg(long)]
    basis_file: Option<PathBuf>,
}

impl BasisArgs {
    fn load(&self, dim: usize) -> Result<BasisSequence> {
        match (&self.basis, &self.basis_file) {
            (Some(spec), _) => Ok(spec.build(dim)?),
            (None, Some(path)) => {
                let basis = parse_basis_table(&read(path)?).with_context(|| format!("in {}", path.display()))?;
                if basis.dim() != dim {
                    bail!("basis table has dimension {}, nodes have {dim}", basis.dim());
                }
                Ok(basis)
            }
            (None, None) => bail!("one of --basis or --basis-file is required"),
        }
    }
}

#[derive(Args)]
struct SelectArgs {
    /// Node file: one node per row, d columns.
    nodes: PathBuf,
    #[command(flatten)]
    basis: BasisArgs,
    #[arg(long, default_value = "maxvol")]
    method: SelectionMethod,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Function values at the nodes; the interpolant's coefficients are printed.
    #[arg(long)]
    values: Option<PathBuf>,
    /// Write the selected basis as a table.
    #[arg(long)]
    basis_out: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LebesgueArgs {
    nodes: PathBuf,
    #[command(flatten)]
    basis: BasisArgs,
    /// Selection used when the trial basis is larger than the node set.
    #[arg(long, default_value = "maxvol")]
    method: SelectionMethod,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_MESH_MEASURE)]
    mesh_measure: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SparseGridArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    k: u32,
    /// Write the nodes as a node file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the basis as a table.
    #[arg(long)]
    basis_out: Option<PathBuf>,
}

#[derive(Args)]
struct RandomNodesArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    n: usize,
    /// Total degree of the monomial trial basis.
    #[arg(long)]
    degree: u32,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    /// Run 10 000 trials.
    #[arg(long, conflicts_with = "trials")]
    full: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_MESH_MEASURE)]
    mesh_measure: f64,
    /// Selection compared against the best basis.
    #[arg(long, default_value = "maxvol-exhaustive")]
    method: SelectionMethod,
    /// Trial records CSV (stdout if absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Histogram CSV of the three differences.
    #[arg(long)]
    hist_out: Option<PathBuf>,
}

#[derive(Args)]
struct IncompleteGridArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    k: u32,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_MESH_MEASURE)]
    mesh_measure: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_nodes(path: &Path) -> Result<NodeSet> {
    parse_nodes(&read(path)?, None).with_context(|| format!("in {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn create(path: &Path) -> Result<fs::File> {
    fs::File::create(path).with_context(|| format!("creating {}", path.display()))
}

fn selection_json(sel: &SelectedBasis, trial: &BasisSequence) -> Map<String, Value> {
    let mut obj = Map::new();
    obj.insert("method".into(), json!(sel.method.name()));
    obj.insert(
        "rows".into(),
        json!(sel.row_indices.iter().map(|r| r + 1).collect::<Vec<_>>()),
    );
    obj.insert(
        "functions".into(),
        json!(sel
            .row_indices
            .iter()
            .map(|&r| trial.functions()[r].to_string())
            .collect::<Vec<_>>()),
    );
    obj.insert("volume".into(), json_float(sel.volume));
    obj.insert("sigma_min".into(), json_float(sel.sigma_min));
    obj.insert("sigma_max".into(), json_float(sel.sigma_max));
    obj.insert("swaps".into(), json!(sel.swaps));
    obj.insert("dismissed".into(), json!(sel.dismissed));
    obj
}

fn select(trial: &BasisSequence, nodes: &NodeSet, method: SelectionMethod, tol: f64) -> Result<SelectedBasis> {
    let v = build_generalized(trial, nodes)?;
    Ok(select_rows(&v, method, tol)?)
}

fn select_basis(args: SelectArgs) -> Result<ExitCode> {
    let nodes = load_nodes(&args.nodes)?;
    let trial = args.basis.load(nodes.dim())?;
    let sel = select(&trial, &nodes, args.method, args.tol)?;
    let mut obj = selection_json(&sel, &trial);
    if sel.dismissed {
        emit(args.out.as_deref(), &format!("{}\n", Value::Object(obj)))?;
        eprintln!("selected submatrix is numerically singular");
        return Ok(ExitCode::from(EXIT_DISMISSED));
    }
    let basis = trial.select(&sel.row_indices)?;
    if let Some(path) = &args.values {
        let values = parse_values(&read(path)?).with_context(|| format!("in {}", path.display()))?;
        let p = fit(&basis, &nodes, &values)?;
        obj.insert(
            "coefficients".into(),
            Value::Array(p.coefficients.iter().map(|&c| json_float(c)).collect()),
        );
    }
    if let Some(path) = &args.basis_out {
        fs::write(path, write_basis_table(&basis)).with_context(|| format!("writing {}", path.display()))?;
    }
    emit(args.out.as_deref(), &format!("{}\n", Value::Object(obj)))?;
    Ok(ExitCode::SUCCESS)
}

fn lebesgue(args: LebesgueArgs) -> Result<ExitCode> {
    let nodes = load_nodes(&args.nodes)?;
    let trial = args.basis.load(nodes.dim())?;
    let mut obj = Map::new();
    let basis = if trial.len() == nodes.len() {
        trial
    } else {
        let sel = select(&trial, &nodes, args.method, args.tol)?;
        if sel.dismissed {
            obj.insert("selection".into(), Value::Object(selection_json(&sel, &trial)));
            emit(args.out.as_deref(), &format!("{}\n", Value::Object(obj)))?;
            eprintln!("selected submatrix is numerically singular");
            return Ok(ExitCode::from(EXIT_DISMISSED));
        }
        let basis = trial.select(&sel.row_indices)?;
        obj.insert("selection".into(), Value::Object(selection_json(&sel, &trial)));
        basis
    };
    let card = cardinal_functions(&basis, &nodes)?;
    let mesh = convex_hull_mesh(&nodes, args.mesh_measure)?;
    let report = lebesgue_report(&card, &mesh)?;
    obj.insert("lambda_discrete".into(), json_float(report.lambda_discrete));
    obj.insert(
        "argmax_vertex".into(),
        Value::Array(report.argmax_vertex.iter().map(|&x| json_float(x)).collect()),
    );
    obj.insert("bound_sv".into(), json_float(report.bound_sv));
    obj.insert("bound_det".into(), json_float(report.bound_det));
    let c = &report.constants;
    obj.insert(
        "constants".into(),
        json!({
            "C": json_float(c.c),
            "D": json_float(c.d),
            "n": c.n,
            "sigma_min": json_float(c.sigma_min),
            "abs_det": json_float(c.abs_det),
        }),
    );
    obj.insert("mesh_vertices".into(), json!(mesh.vertices().len()));
    obj.insert("mesh_cells".into(), json!(mesh.cells().len()));
    emit(args.out.as_deref(), &format!("{}\n", Value::Object(obj)))?;
    Ok(ExitCode::SUCCESS)
}

fn sparse_grid(args: SparseGridArgs) -> Result<ExitCode> {
    let nodes = smolyak_grid(args.d, args.k)?;
    let basis = smolyak_basis(args.d, args.k)?;
    let mut table = String::from("index");
    for i in 1..=args.d {
        table.push_str(&format!(",x{i}"));
    }
    table.push_str(",function\n");
    for (i, (x, phi)) in nodes.points().iter().zip(basis.functions()).enumerate() {
        table.push_str(&(i + 1).to_string());
        for &v in x {
            table.push(',');
            table.push_str(&format_float(v));
        }
        table.push_str(&format!(",\"{phi}\"\n"));
    }
    match &args.out {
        Some(path) => fs::write(path, vandervolt::io::write_nodes(&nodes))
            .with_context(|| format!("writing {}", path.display()))?,
        None => emit(None, &table)?,
    }
    if let Some(path) = &args.basis_out {
        fs::write(path, write_basis_table(&basis)).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn random_nodes(args: RandomNodesArgs) -> Result<ExitCode> {
    let config = ExperimentConfig {
        dim: args.d,
        n: args.n,
        degree: args.degree,
        trials: if args.full { FULL_TRIALS } else { args.trials },
        seed: args.seed,
        tol: args.tol,
        mesh_measure: args.mesh_measure,
        method: args.method,
    };
    let result = run_random_nodes(&config)?;
    match &args.out {
        Some(path) => write_records_csv(&result.records, create(path)?)?,
        None => write_records_csv(&result.records, io::stdout().lock())?,
    }
    if let Some(path) = &args.hist_out {
        write_histograms_csv(&result, create(path)?)?;
    }
    eprintln!(
        "d={} n={} degree={}: {} trials, {} dismissed",
        config.dim, config.n, config.degree, config.trials, result.dismissed
    );
    Ok(ExitCode::SUCCESS)
}

fn incomplete_grid(args: IncompleteGridArgs) -> Result<ExitCode> {
    let curve = run_incomplete_grid(args.d, args.k, args.tol, args.mesh_measure)?;
    match &args.out {
        Some(path) => write_curve_csv(&curve, create(path)?)?,
        None => write_curve_csv(&curve, io::stdout().lock())?,
    }
    let flagged = curve.iter().filter(|p| !p.converged).count();
    if flagged > 0 {
        eprintln!("{flagged} selections stopped at the swap cap");
    }
    Ok(ExitCode::SUCCESS)
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var("VANDERVOLT_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .with_context(|| format!("VANDERVOLT_THREADS must be a non-negative integer, got {value:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    configure_threads()?;
    match cli.command {
        Command::SelectBasis(args) => select_basis(args),
        Command::Lebesgue(args) => lebesgue(args),
        Command::SparseGrid(args) => sparse_grid(args),
        Command::Experiment(Experiment::RandomNodes(args)) => random_nodes(args),
        Command::Experiment(Experiment::IncompleteGrid(args)) => incomplete_grid(args),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
