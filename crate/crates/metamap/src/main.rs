//! Command-line interface: generate benchmark graphs, lay them out as
//! area-proportional maps, measure and render maps, and run batch
//! experiments.
//!
//! Exit codes: 0 on success, 1 for usage, validation or parse problems,
//! 2 for runtime failures (degenerate geometry, non-convergence, IO).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use metamap::experiment::{run_experiment, variants_by_label, ExperimentConfig};
use metamap::gen::{generate_benchmark_graph, GenParams};
use metamap::init::{init_with_holes, init_with_point_contacts};
use metamap::io::{load_graph, load_map, save_graph, save_map, svg::render_svg, write_map_string};
use metamap::metrics::evaluate;
use metamap::sim::{run, SimParams};

#[derive(Parser)]
#[command(
    name = "metamap",
    version,
    about = "Area-proportional metaphorical maps of vertex-weighted plane graphs"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a random vertex-weighted plane graph.
    Generate(GenerateArgs),
    /// Compute a map for a graph: initialize and run the simulation.
    Layout(LayoutArgs),
    /// Report quality metrics of a map.
    Metrics(MetricsArgs),
    /// Render a map as SVG.
    Render(RenderArgs),
    /// Run the full pipeline over a grid of sizes and variants.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Number of vertices.
    #[arg(long)]
    n: usize,
    /// Fraction of vertices nested inside the base triangulation.
    #[arg(long, default_value_t = 0.0)]
    nest: f64,
    /// Fraction of internal edges to remove.
    #[arg(long, default_value_t = 0.0)]
    rem: f64,
    /// Weights are drawn uniformly from [1, this value].
    #[arg(long, default_value_t = 4.0)]
    weight_ratio: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum InitMode {
    /// Big faces become hole regions.
    Holes,
    /// Big faces collapse to point contacts.
    Contacts,
}

#[derive(Args)]
struct LayoutArgs {
    /// Input graph file.
    #[arg(long)]
    graph: PathBuf,
    /// Output map file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = InitMode::Holes)]
    init: InitMode,
    /// Iteration count (default: 800 + 10 per region).
    #[arg(long)]
    iterations: Option<usize>,
    /// Stiffness ceiling (the floor is its reciprocal).
    #[arg(long, default_value_t = 8.0)]
    s_high: f64,
    /// Additive stiffness step per iteration.
    #[arg(long, default_value_t = 0.02)]
    step: f64,
    /// Baseline mode: uniform pressure, stiffness pinned to 1.
    #[arg(long)]
    ms_mode: bool,
    /// Re-verify planarity exhaustively after every iteration.
    #[arg(long)]
    paranoid: bool,
    /// Write a per-iteration quality trace CSV to this file.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Skip the initialization and simulation summary on stderr.
    #[arg(long)]
    quiet: bool,
}

#[derive(Args)]
struct MetricsArgs {
    /// Input map file.
    #[arg(long)]
    map: PathBuf,
    /// Emit the report as JSON instead of a table.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct RenderArgs {
    /// Input map file.
    #[arg(long)]
    map: PathBuf,
    /// Output SVG file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Instance sizes, e.g. --sizes 10,20,30.
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    graphs_per_size: usize,
    #[arg(long, default_value_t = 0.0)]
    nest: f64,
    #[arg(long, default_value_t = 0.0)]
    rem: f64,
    #[arg(long, default_value_t = 4.0)]
    weight_ratio: f64,
    #[arg(long, default_value_t = 0)]
    base_seed: u64,
    /// Iteration override applied to every variant.
    #[arg(long)]
    iterations: Option<usize>,
    /// Variants to run (s1, s2, s4, s8, ms).
    #[arg(long, value_delimiter = ',', default_values_t = [
        "s1".to_string(), "s2".to_string(), "s4".to_string(), "s8".to_string(), "ms".to_string(),
    ])]
    variants: Vec<String>,
    /// Output CSV file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn emit(out: Option<&PathBuf>, text: &str) -> metamap::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_generate(args: &GenerateArgs) -> metamap::Result<()> {
    let g = generate_benchmark_graph(&GenParams {
        n: args.n,
        nest: args.nest,
        rem: args.rem,
        weight_ratio: args.weight_ratio,
        seed: args.seed,
    })?;
    match &args.out {
        Some(path) => save_graph(path, &g)?,
        None => print!("{}", metamap::io::write_graph_string(&g)),
    }
    Ok(())
}

fn cmd_layout(args: &LayoutArgs) -> metamap::Result<()> {
    let g = load_graph(&args.graph)?;
    let initial = match args.init {
        InitMode::Holes => init_with_holes(&g)?,
        InitMode::Contacts => init_with_point_contacts(&g)?,
    };
    let params = SimParams {
        iterations: args.iterations,
        s_high: args.s_high,
        step: args.step,
        ms_mode: args.ms_mode,
        trace: args.trace.is_some(),
        exhaustive_planarity_check: args.paranoid,
        ..SimParams::default()
    };
    let regions = initial.non_hole_regions().count();
    if !args.quiet {
        eprintln!(
            "layout: {} vertices, {} regions, {} holes; {} iterations, \
             stiffness in [{:.4}, {}]{}{}",
            g.n(),
            regions,
            initial.holes().count(),
            params.iterations_for(regions),
            params.s_low(),
            params.effective_s_high(),
            if params.ms_mode { ", baseline mode" } else { "" },
            if args.paranoid { ", paranoid checks" } else { "" },
        );
    }
    let outcome = run(&initial, &params)?;
    if let Some(path) = &args.trace {
        let mut csv =
            String::from("iteration,avg_error,max_error,avg_complexity,max_complexity\n");
        for row in &outcome.trace {
            csv.push_str(&format!(
                "{},{:.6},{:.6},{:.6},{:.6}\n",
                row.iteration,
                row.avg_error,
                row.max_error,
                row.avg_complexity,
                row.max_complexity
            ));
        }
        std::fs::write(path, csv)?;
    }
    if !args.quiet {
        eprintln!(
            "done: avg error {:.4}, max error {:.4}, avg complexity {:.4}",
            outcome.report.avg_error, outcome.report.max_error, outcome.report.avg_complexity
        );
    }
    match &args.out {
        Some(path) => save_map(path, &outcome.map)?,
        None => print!("{}", write_map_string(&outcome.map)),
    }
    Ok(())
}

fn cmd_metrics(args: &MetricsArgs) -> metamap::Result<()> {
    let map = load_map(&args.map)?;
    let report = evaluate(&map)?;
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("report serialization cannot fail")
        );
    } else {
        println!("{:<10} {:>12} {:>12}", "region", "error", "complexity");
        for r in &report.per_region {
            println!("{:<10} {:>12.6} {:>12.6}", r.region.0, r.cart_error, r.complexity);
        }
        println!(
            "\navg error {:.6}   max error {:.6}\navg complexity {:.6}   max complexity {:.6}",
            report.avg_error, report.max_error, report.avg_complexity, report.max_complexity
        );
    }
    Ok(())
}

fn cmd_render(args: &RenderArgs) -> metamap::Result<()> {
    let map = load_map(&args.map)?;
    let svg = render_svg(&map)?;
    emit(args.out.as_ref(), &svg)
}

fn cmd_experiment(args: &ExperimentArgs) -> metamap::Result<()> {
    let config = ExperimentConfig {
        sizes: args.sizes.clone(),
        graphs_per_size: args.graphs_per_size,
        nest: args.nest,
        rem: args.rem,
        weight_ratio: args.weight_ratio,
        base_seed: args.base_seed,
        iterations: args.iterations,
        variants: variants_by_label(&args.variants)?,
    };
    let csv = run_experiment(&config)?;
    emit(args.out.as_ref(), &csv)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.cmd {
        Cmd::Generate(args) => cmd_generate(args),
        Cmd::Layout(args) => cmd_layout(args),
        Cmd::Metrics(args) => cmd_metrics(args),
        Cmd::Render(args) => cmd_render(args),
        Cmd::Experiment(args) => cmd_experiment(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
