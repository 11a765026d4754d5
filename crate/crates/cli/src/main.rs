mod error;
mod layout;
mod svg;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use edgeflow::experiments::{
    self, ComparisonGrids, ExperimentReport, GridSpec, SCHEMATIC_MU, SCHEMATIC_STEPS,
};
use edgeflow::filters::{self, Basis, FilterKind, FilterSpec};
use edgeflow::flowgen::FlowGenerator;
use edgeflow::hodge::{cycle_space_dimension, HodgeProjector};
use edgeflow::io::{self, SignalDomain};
use edgeflow::spectral::{eig_sym, DEFAULT_RANK_TOL};
use edgeflow::{standins, EdgeSignal, FlowRecipe, Graph, NodeSignal};

use crate::error::{CliError, Result};

#[derive(Parser)]
#[command(
    name = "edgeflow",
    version,
    about = "Filtering and decomposition of flows on graph edges"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Split a flow into cyclic and gradient parts.
    Decompose {
        #[command(flatten)]
        common: Common,
        /// Edge signal file.
        #[arg(long)]
        flow: PathBuf,
    },
    /// Apply a node, flow, or line-graph filter.
    Filter {
        #[command(flatten)]
        common: Common,
        /// Input signal file (node signal for node filters, flow otherwise).
        #[arg(long)]
        flow: PathBuf,
        /// Ground-truth signal; enables error reporting.
        #[arg(long)]
        truth: Option<PathBuf>,
        #[command(flatten)]
        filter: FilterArgs,
    },
    /// Eigenvalues of L, L1 or LLG and, optionally, a filter's response.
    Spectrum {
        #[command(flatten)]
        common: Common,
        /// Operator: L, L1 or LLG.
        #[arg(long, default_value = "L1")]
        operator: String,
        #[command(flatten)]
        filter: FilterArgs,
    },
    /// Line-graph smoothing vs flow smoothing on a noisy harmonic flow.
    Schematic {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = SCHEMATIC_MU)]
        mu: f64,
        #[arg(long, default_value_t = SCHEMATIC_STEPS)]
        k: u32,
        #[command(flatten)]
        recipe: RecipeArgs,
        /// Also write report.json.
        #[arg(long)]
        json: bool,
    },
    /// Grid-searched comparison of line-graph, flow, and mixed denoising.
    Compare {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        recipe: RecipeArgs,
        /// Comma-separated seeds averaged by the grid objective.
        #[arg(long, value_delimiter = ',')]
        seeds: Vec<u64>,
        /// Comma-separated alpha values (default: logspace(1e-2, 1e2, 25)).
        #[arg(long, value_delimiter = ',')]
        alpha_values: Vec<f64>,
        /// Comma-separated beta values (default: logspace(1e-3, 1e1, 25)).
        #[arg(long, value_delimiter = ',')]
        beta_values: Vec<f64>,
        /// Also write report.json.
        #[arg(long)]
        json: bool,
    },
    /// Generate a clean flow f0 and its noisy version f.
    Gen {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        recipe: RecipeArgs,
    },
}

#[derive(Args)]
struct Common {
    /// Edge-list file, or a built-in graph name (fig1-like, london-like).
    #[arg(long)]
    graph: Option<String>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Write SVG flow maps next to the signal files.
    #[arg(long)]
    svg: bool,
}

#[derive(Args, Default)]
struct FilterArgs {
    /// Filter kind, e.g. flow_denoise, flow_smooth, mixed, node_denoise.
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    k: Option<u32>,
    /// Node signal file with the divergence for flow_denoise_sources.
    #[arg(long)]
    phi: Option<PathBuf>,
    /// Filter record file (`key = value` lines); flags override its values.
    #[arg(long = "filter")]
    filter_file: Option<PathBuf>,
}

#[derive(Args, Default)]
struct RecipeArgs {
    /// Recipe record file (`key = value` lines); flags override its values.
    #[arg(long)]
    recipe: Option<PathBuf>,
    #[arg(long)]
    harmonic_weight: Option<f64>,
    #[arg(long)]
    gradient_weight: Option<f64>,
    #[arg(long)]
    linegraph_weight: Option<f64>,
    /// Noise standard deviation per edge.
    #[arg(long)]
    sigma: Option<f64>,
    /// Norm of the clean flow.
    #[arg(long)]
    amplitude: Option<f64>,
    #[arg(long)]
    cutoff: Option<usize>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_error(path: &Path) -> impl FnOnce(io::ParseError) -> CliError + '_ {
    move |source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    }
}

/// A loaded graph plus the name recorded in signal file headers.
struct LoadedGraph {
    graph: Graph,
    name: String,
}

fn load_graph(arg: Option<&str>, default: Option<&str>) -> Result<LoadedGraph> {
    let name = arg
        .or(default)
        .ok_or_else(|| CliError::Usage("--graph is required".into()))?;
    let path = Path::new(name);
    let graph = if path.exists() {
        io::parse_edge_list(&read(path)?).map_err(parse_error(path))?
    } else if let Some(g) = standins::by_name(name) {
        g
    } else {
        return Err(CliError::Io {
            path: path.to_path_buf(),
            source: std::io::Error::new(
                std::io::ErrorKind::NotFound,
                "no such file or built-in graph",
            ),
        });
    };
    Ok(LoadedGraph {
        graph,
        name: name.to_string(),
    })
}

fn load_signal(path: &Path, g: &Graph, domain: SignalDomain) -> Result<Vec<f64>> {
    let file = io::parse_signal(&read(path)?).map_err(parse_error(path))?;
    file.check_against(g, domain).map_err(parse_error(path))?;
    Ok(file.values)
}

fn out_dir(common: &Common) -> Result<&Path> {
    fs::create_dir_all(&common.out).map_err(|source| CliError::Io {
        path: common.out.clone(),
        source,
    })?;
    Ok(&common.out)
}

fn extension(domain: SignalDomain) -> &'static str {
    match domain {
        SignalDomain::Node => "nodes",
        SignalDomain::Edge => "flow",
    }
}

fn write_signal(
    dir: &Path,
    stem: &str,
    values: &[f64],
    domain: SignalDomain,
    g: &LoadedGraph,
) -> Result<PathBuf> {
    let path = dir.join(format!("{stem}.{}", extension(domain)));
    write(&path, &io::format_signal(values, domain, &g.graph, &g.name))?;
    Ok(path)
}

fn write_svg(
    dir: &Path,
    stem: &str,
    g: &Graph,
    pos: &[[f64; 2]],
    flow: &[f64],
    title: &str,
) -> Result<()> {
    write(
        &dir.join(format!("{stem}.svg")),
        &svg::flow_map(g, pos, flow, title),
    )
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    edgeflow::linalg::distance(a, b)
}

fn build_filter(args: &FilterArgs, g: &Graph) -> Result<Option<FilterSpec>> {
    let (mut spec, mut phi_path) = match &args.filter_file {
        Some(path) => {
            let record = io::parse_record(&read(path)?).map_err(parse_error(path))?;
            let (spec, phi) = FilterSpec::from_record(&record)?;
            (Some(spec), phi.map(PathBuf::from))
        }
        None => (None, None),
    };
    if let Some(kind) = &args.kind {
        let kind: FilterKind = kind.parse()?;
        spec = Some(match spec {
            Some(s) => FilterSpec { kind, ..s },
            None => FilterSpec::new(kind),
        });
    }
    let Some(mut spec) = spec else {
        if args.alpha.is_some() || args.beta.is_some() || args.mu.is_some() || args.k.is_some() {
            return Err(CliError::Usage(
                "filter parameters given without --kind".into(),
            ));
        }
        return Ok(None);
    };
    spec.alpha = args.alpha.or(spec.alpha);
    spec.beta = args.beta.or(spec.beta);
    spec.mu = args.mu.or(spec.mu);
    spec.k = args.k.or(spec.k);
    if args.phi.is_some() {
        phi_path = args.phi.clone();
    }
    if let Some(path) = phi_path {
        spec.potential = Some(NodeSignal::new(load_signal(&path, g, SignalDomain::Node)?));
    }
    Ok(Some(spec))
}

fn build_recipe(args: &RecipeArgs, base: FlowRecipe, seed: Option<u64>) -> Result<FlowRecipe> {
    let mut r = match &args.recipe {
        Some(path) => {
            let record = io::parse_record(&read(path)?).map_err(parse_error(path))?;
            FlowRecipe::from_record(&record)?
        }
        None => base,
    };
    r.harmonic_weight = args.harmonic_weight.unwrap_or(r.harmonic_weight);
    r.gradient_weight = args.gradient_weight.unwrap_or(r.gradient_weight);
    r.linegraph_weight = args.linegraph_weight.unwrap_or(r.linegraph_weight);
    r.noise_sigma = args.sigma.unwrap_or(r.noise_sigma);
    r.amplitude = args.amplitude.unwrap_or(r.amplitude);
    r.cutoff = args.cutoff.or(r.cutoff);
    r.seed = seed.unwrap_or(r.seed);
    r.validate()?;
    Ok(r)
}

fn cmd_decompose(common: &Common, flow: &Path) -> Result<()> {
    let g = load_graph(common.graph.as_deref(), None)?;
    let f = load_signal(flow, &g.graph, SignalDomain::Edge)?;
    let d = HodgeProjector::new(&g.graph)?.decompose(&f)?;
    let dir = out_dir(common)?;
    write_signal(dir, "cyclic", &d.cyclic, SignalDomain::Edge, &g)?;
    write_signal(dir, "gradient", &d.gradient, SignalDomain::Edge, &g)?;
    write_signal(dir, "potential", &d.potential, SignalDomain::Node, &g)?;
    let total = edgeflow::linalg::dot(&f, &f);
    let summary = format!(
        "total_energy = {total}\ncyclic_energy = {}\ngradient_energy = {}\ncycle_dimension = {}\n",
        d.cyclic_energy(),
        d.gradient_energy(),
        cycle_space_dimension(&g.graph)
    );
    write(&dir.join("energy.txt"), &summary)?;
    println!(
        "energy total={total} cyclic={} gradient={}",
        d.cyclic_energy(),
        d.gradient_energy()
    );
    if common.svg {
        let pos = layout::positions(&g.graph);
        write_svg(dir, "flow", &g.graph, &pos, &f, "flow")?;
        write_svg(dir, "cyclic", &g.graph, &pos, &d.cyclic, "cyclic component")?;
        write_svg(
            dir,
            "gradient",
            &g.graph,
            &pos,
            &d.gradient,
            "gradient component",
        )?;
    }
    Ok(())
}

fn cmd_filter(common: &Common, flow: &Path, truth: Option<&Path>, args: &FilterArgs) -> Result<()> {
    let g = load_graph(common.graph.as_deref(), None)?;
    let spec = build_filter(args, &g.graph)?
        .ok_or_else(|| CliError::Usage("--kind or --filter is required".into()))?;
    let domain = if spec.kind.is_node_filter() {
        SignalDomain::Node
    } else {
        SignalDomain::Edge
    };
    let input = load_signal(flow, &g.graph, domain)?;
    let out = filters::apply_filter(&g.graph, &spec, &input)?;
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    let dir = out_dir(common)?;
    let path = write_signal(dir, "filtered", &out.values, domain, &g)?;
    write(&dir.join("filter.txt"), &spec.to_record())?;
    println!("filter = {spec}");
    println!("output = {}", path.display());
    println!("input_change = {}", distance(&input, &out.values));
    if let Some(t) = truth {
        let t = load_signal(t, &g.graph, domain)?;
        println!("baseline_error = {}", distance(&t, &input));
        println!("error = {}", distance(&t, &out.values));
    }
    if common.svg && domain == SignalDomain::Edge {
        let pos = layout::positions(&g.graph);
        write_svg(dir, "input", &g.graph, &pos, &input, "input")?;
        write_svg(
            dir,
            "filtered",
            &g.graph,
            &pos,
            &out.values,
            &spec.to_string(),
        )?;
    }
    Ok(())
}

fn cmd_spectrum(common: &Common, operator: &str, args: &FilterArgs) -> Result<()> {
    let g = load_graph(common.graph.as_deref(), None)?;
    let basis: Basis = operator.parse()?;
    let eig = eig_sym(&basis.operator(&g.graph)).map_err(edgeflow::Error::from)?;
    let spec = build_filter(args, &g.graph)?;
    let response = match &spec {
        Some(s) => Some(filters::frequency_response(&g.graph, s, basis)?),
        None => None,
    };
    let mut text = format!(
        "operator = {basis}\nsize = {}\nzero_eigenvalues = {}\ncycle_dimension = {}\n",
        eig.len(),
        eig.kernel_dimension(DEFAULT_RANK_TOL),
        cycle_space_dimension(&g.graph)
    );
    if let (Some(s), Some(r)) = (&spec, &response) {
        text.push_str(&format!(
            "filter = {s}\nlowpass = {}\n",
            filters::is_lowpass(r)
        ));
    }
    text.push_str("\n[spectrum]\n");
    text.push_str(if response.is_some() {
        "index\teigenvalue\tresponse\n"
    } else {
        "index\teigenvalue\n"
    });
    for (i, l) in eig.eigenvalues.iter().enumerate() {
        // exact zeros print as 0 rather than ±1e-16
        let zero = eig.is_zero_eigenvalue(i, DEFAULT_RANK_TOL);
        let l = if zero { 0.0 } else { *l };
        match (&response, &spec) {
            (Some(r), Some(s)) => {
                let h = if zero {
                    filters::response_function(s)?(0.0)
                } else {
                    r.values[i]
                };
                text.push_str(&format!("{i}\t{l}\t{h}\n"))
            }
            _ => text.push_str(&format!("{i}\t{l}\n")),
        }
    }
    let dir = out_dir(common)?;
    write(&dir.join("spectrum.txt"), &text)?;
    print!("{text}");
    Ok(())
}

fn write_report(
    dir: &Path,
    report: &ExperimentReport,
    json: bool,
    g: &LoadedGraph,
    svg: bool,
) -> Result<()> {
    write(&dir.join("report.txt"), &report.to_text())?;
    if json {
        write(&dir.join("report.json"), &report.to_json())?;
    }
    let pos = svg.then(|| layout::positions(&g.graph));
    for (name, signal) in &report.signals {
        write_signal(dir, name, signal, SignalDomain::Edge, g)?;
        if let Some(pos) = &pos {
            let title = match report.filter(name) {
                Some(r) => format!("{name}: error {:.3}", r.error),
                None => name.clone(),
            };
            write_svg(dir, name, &g.graph, pos, signal, &title)?;
        }
    }
    Ok(())
}

fn print_summary(report: &ExperimentReport) {
    println!("baseline_error = {}", report.baseline_error);
    for r in &report.filters {
        println!("{} = {} ({})", r.label, r.error, r.spec);
    }
    if let Some(o) = &report.ordering {
        println!("ordering.full = {}", o.full);
    }
}

fn cmd_schematic(common: &Common, mu: f64, k: u32, recipe: &RecipeArgs, json: bool) -> Result<()> {
    let g = load_graph(common.graph.as_deref(), Some("fig1-like"))?;
    let base = experiments::schematic_recipe(&g.graph, 0);
    let recipe = build_recipe(recipe, base, common.seed)?;
    let report = experiments::run_schematic(&g.graph, &recipe, mu, k)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    write_report(out_dir(common)?, &report, json, &g, common.svg)?;
    print_summary(&report);
    Ok(())
}

fn cmd_compare(
    common: &Common,
    recipe: &RecipeArgs,
    seeds: &[u64],
    alpha_values: &[f64],
    beta_values: &[f64],
    json: bool,
) -> Result<()> {
    let g = load_graph(common.graph.as_deref(), Some("london-like"))?;
    let base = experiments::london_recipe(&g.graph, 0);
    let recipe = build_recipe(recipe, base, common.seed)?;
    let alpha = if alpha_values.is_empty() {
        GridSpec::default_alpha()
    } else {
        alpha_values.to_vec()
    };
    let beta = if beta_values.is_empty() {
        GridSpec::default_beta()
    } else {
        beta_values.to_vec()
    };
    let grids = ComparisonGrids {
        linegraph: GridSpec::alpha(alpha.clone()),
        flow: GridSpec::alpha(alpha.clone()),
        mixed: GridSpec::alpha_beta(alpha, beta),
        seeds: seeds.to_vec(),
    };
    let report = experiments::run_denoising_comparison(&g.graph, &recipe, &grids)?;
    write_report(out_dir(common)?, &report, json, &g, common.svg)?;
    print_summary(&report);
    Ok(())
}

fn cmd_gen(common: &Common, recipe: &RecipeArgs) -> Result<()> {
    let g = load_graph(common.graph.as_deref(), None)?;
    let recipe = build_recipe(recipe, FlowRecipe::default(), common.seed)?;
    let (f0, f) = FlowGenerator::new(&g.graph).synthesize(&recipe)?;
    let dir = out_dir(common)?;
    write_signal(dir, "f0", &f0, SignalDomain::Edge, &g)?;
    write_signal(dir, "f", &f, SignalDomain::Edge, &g)?;
    write(&dir.join("recipe.txt"), &recipe.to_record())?;
    println!("truth_norm = {}", f0.norm());
    println!("noise_norm = {}", distance(&f0, &f));
    if common.svg {
        let pos = layout::positions(&g.graph);
        write_svg(dir, "f0", &g.graph, &pos, &f0, "clean flow")?;
        write_svg(
            dir,
            "f",
            &g.graph,
            &pos,
            &EdgeSignal::clone(&f),
            "noisy flow",
        )?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Decompose { common, flow } => cmd_decompose(common, flow),
        Command::Filter {
            common,
            flow,
            truth,
            filter,
        } => cmd_filter(common, flow, truth.as_deref(), filter),
        Command::Spectrum {
            common,
            operator,
            filter,
        } => cmd_spectrum(common, operator, filter),
        Command::Schematic {
            common,
            mu,
            k,
            recipe,
            json,
        } => cmd_schematic(common, *mu, *k, recipe, *json),
        Command::Compare {
            common,
            recipe,
            seeds,
            alpha_values,
            beta_values,
            json,
        } => cmd_compare(common, recipe, seeds, alpha_values, beta_values, *json),
        Command::Gen { common, recipe } => cmd_gen(common, recipe),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::FAILURE
        }
    }
}
