use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use entropy_flow::flow::{DEFAULT_ENTROPY_TOLERANCE, DEFAULT_GROWTH_FLOOR, DEFAULT_WINDOW};
use entropy_flow::io::{
    align_label_files, histogram_export, parse_label_pairs, read_labels, write_report, write_trace,
};
use entropy_flow::oracle::{closed_form_suite, OracleGrid};
use entropy_flow::{
    ari, classify_trajectory, edge_entropies, load_dataset, modularity, nmi, run_flow, sweep,
    Dataset, FlowConfig, FlowTrace, MetricsReport, Variant,
};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "entflow",
    version,
    about = "Entropy flow community detection on weighted graphs"
)]
struct Cli {
    /// Cap on worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the flow and write the weight/entropy trace.
    Flow(FlowArgs),
    /// Run the flow, then sweep surgery cutoffs and score every partition.
    Detect {
        #[command(flatten)]
        flow: FlowArgs,
        /// Also sweep after every step and write iterations.csv.
        #[arg(long)]
        each_step: bool,
    },
    /// Edge entropies of the initial weights, with histograms.
    Entropy {
        #[command(flatten)]
        flow: FlowArgs,
        /// Also write every walk distribution to walks.json.
        #[arg(long)]
        dump_walks: bool,
    },
    /// Compare Euler runs on the segment and triangle with their closed forms.
    Oracle {
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// ARI/NMI between two label files, and/or modularity on a graph.
    Metrics {
        /// Label file to score.
        #[arg(long)]
        labels: PathBuf,
        /// Reference label file.
        #[arg(long)]
        truth: Option<PathBuf>,
        /// Edge list for modularity.
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

#[derive(Args)]
struct FlowArgs {
    #[arg(long)]
    input: PathBuf,
    /// Ground-truth labels, one `vertex label` pair per line.
    #[arg(long)]
    labels: Option<PathBuf>,
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    #[arg(long, default_value_t = 20)]
    steps: usize,
    #[arg(long, default_value_t = 0.01)]
    step_size: f64,
    #[arg(long, default_value_t = Variant::Symmetric)]
    variant: Variant,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Histogram bins for hist_entropy.csv and hist_weight.csv.
    #[arg(long, default_value_t = 20)]
    bins: usize,
}

impl FlowArgs {
    fn config(&self) -> Result<FlowConfig> {
        let config =
            FlowConfig::new(self.alpha, self.step_size, self.steps).with_variant(self.variant);
        config.validate()?;
        Ok(config)
    }

    fn load(&self) -> Result<Dataset> {
        Ok(load_dataset(&self.input, self.labels.as_deref())?)
    }

    fn out(&self, name: &str) -> Result<PathBuf> {
        fs::create_dir_all(&self.out_dir)
            .with_context(|| format!("cannot create {}", self.out_dir.display()))?;
        Ok(self.out_dir.join(name))
    }
}

/// Writes to stdout; a closed pipe (`| head`) is not an error.
fn emit(text: &str) -> Result<()> {
    let mut out = io::stdout().lock();
    match writeln!(out, "{text}") {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn print_json(value: &impl Serialize) -> Result<()> {
    emit(&serde_json::to_string_pretty(value)?)
}

/// Runs the flow, timing only the update loop.
fn timed_flow(data: &Dataset, config: &FlowConfig) -> Result<(FlowTrace, f64)> {
    let start = Instant::now();
    let trace = run_flow(&data.graph, &data.initial_weights, config)?;
    Ok((trace, start.elapsed().as_secs_f64()))
}

fn write_histograms(args: &FlowArgs, entropies: &[f64], weights: &[f64]) -> Result<()> {
    histogram_export(entropies, args.bins, &args.out("hist_entropy.csv")?)?;
    histogram_export(weights, args.bins, &args.out("hist_weight.csv")?)?;
    Ok(())
}

/// Histograms of the last entropies the flow used and its final weights.
fn write_final_histograms(args: &FlowArgs, data: &Dataset, trace: &FlowTrace) -> Result<()> {
    let entropies = match trace.entropies.last() {
        Some(d) => d.clone(),
        None => edge_entropies(
            &data.graph,
            trace.last(),
            trace.config.alpha,
            trace.config.variant,
        )?,
    };
    write_histograms(args, &entropies, trace.last().as_slice())
}

fn cmd_flow(args: &FlowArgs) -> Result<u8> {
    let config = args.config()?;
    let data = args.load()?;
    let (trace, seconds) = timed_flow(&data, &config)?;
    write_trace(&data.graph, &trace, &args.out("trace.csv")?)?;
    write_final_histograms(args, &data, &trace)?;
    let last = trace.last().as_slice();

    let window = DEFAULT_WINDOW.min(trace.steps());
    let verdict = if window == 0 {
        None
    } else {
        Some(classify_trajectory(
            &trace,
            DEFAULT_ENTROPY_TOLERANCE,
            DEFAULT_GROWTH_FLOOR,
            window,
        )?)
    };
    print_json(&json!({
        "dataset": data.name,
        "vertices": data.graph.vertex_count(),
        "edges": data.graph.edge_count(),
        "config": config,
        "flow_seconds": seconds,
        "final_max_weight": last.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        "final_min_weight": last.iter().copied().fold(f64::INFINITY, f64::min),
        "verdict": verdict,
    }))?;
    Ok(0)
}

fn row(label: &str, m: Option<&MetricsReport>) -> String {
    let Some(m) = m else { return String::new() };
    let fmt = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.4}"));
    format!(
        "\nbest {label:<11} cutoff {:<12.6} communities {:<4} ari {:<7} nmi {:<7} q {:.4}",
        m.cutoff,
        m.num_communities,
        fmt(m.ari),
        fmt(m.nmi),
        m.modularity
    )
}

fn cmd_detect(args: &FlowArgs, each_step: bool) -> Result<u8> {
    let config = args.config()?;
    let data = args.load()?;
    let (trace, seconds) = timed_flow(&data, &config)?;
    let truth = data.ground_truth.as_ref();
    let report = sweep(&data.graph, trace.last(), truth)?;

    write_trace(&data.graph, &trace, &args.out("trace.csv")?)?;
    write_final_histograms(args, &data, &trace)?;
    write_report(
        &json!({ "dataset": data.name, "config": config, "sweep": report }),
        &args.out("report.json")?,
    )?;
    if each_step {
        let mut csv =
            String::from("step,best_ari,best_nmi,best_modularity,communities_at_best_modularity\n");
        for (j, w) in trace.weights.iter().enumerate() {
            let r = sweep(&data.graph, w, truth)?;
            let cell = |m: Option<&MetricsReport>, f: fn(&MetricsReport) -> Option<f64>| {
                m.and_then(f).map_or(String::new(), |v| v.to_string())
            };
            let q = r.best_modularity();
            csv.push_str(&format!(
                "{j},{},{},{},{}\n",
                cell(r.best_ari(), |m| m.ari),
                cell(r.best_nmi(), |m| m.nmi),
                cell(q, |m| Some(m.modularity)),
                q.map_or(String::new(), |m| m.num_communities.to_string())
            ));
        }
        let path = args.out("iterations.csv")?;
        fs::write(&path, csv).with_context(|| format!("cannot write {}", path.display()))?;
    }

    let mut text = format!(
        "{}: {} vertices, {} edges, flow {seconds:.3} s",
        data.name,
        data.graph.vertex_count(),
        data.graph.edge_count()
    );
    text.push_str(&row("ari", report.best_ari()));
    text.push_str(&row("nmi", report.best_nmi()));
    text.push_str(&row("modularity", report.best_modularity()));
    emit(&text)?;
    Ok(0)
}

fn cmd_entropy(args: &FlowArgs, dump_walks: bool) -> Result<u8> {
    let config = args.config()?;
    let data = args.load()?;
    let (g, w) = (&data.graph, &data.initial_weights);
    let d = edge_entropies(g, w, config.alpha, config.variant)?;
    write_histograms(args, &d, w.as_slice())?;
    if dump_walks {
        let walks: Vec<_> = entropy_flow::walk::all_distributions(g, w, config.alpha)?
            .iter()
            .map(|r| {
                let mass: serde_json::Map<_, _> = r
                    .mass()
                    .iter()
                    .enumerate()
                    .filter(|(_, &m)| m > 0.0)
                    .map(|(v, &m)| (g.name(v).to_string(), json!(m)))
                    .collect();
                json!({ "source": g.name(r.source()), "mass": mass })
            })
            .collect();
        write_report(&walks, &args.out("walks.json")?)?;
    }
    let edges: Vec<_> = g
        .edges()
        .iter()
        .zip(&d)
        .map(|(&(u, v), e)| json!({ "u": g.name(u), "v": g.name(v), "entropy": e }))
        .collect();
    print_json(&json!({
        "dataset": data.name,
        "alpha": config.alpha,
        "variant": config.variant,
        "max": d.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        "min": d.iter().copied().fold(f64::INFINITY, f64::min),
        "edges": edges,
    }))?;
    Ok(0)
}

fn cmd_oracle(steps: usize, inject_fault: bool) -> Result<u8> {
    let grid = OracleGrid {
        steps,
        ..OracleGrid::default()
    };
    let rows = closed_form_suite(&grid, inject_fault)?;
    let worst = rows.iter().map(|r| r.max_deviation).fold(0.0, f64::max);
    let ok = worst < 1e-9;
    print_json(&json!({ "runs": rows.len(), "max_deviation": worst, "pass": ok, "rows": rows }))?;
    Ok(if ok { 0 } else { EXIT_FAILURE })
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| {
        entropy_flow::Error::Io {
            path: path.to_path_buf(),
            source: e,
        }
        .into()
    })
}

fn cmd_metrics(labels: &Path, truth: Option<&Path>, input: Option<&Path>) -> Result<u8> {
    if truth.is_none() && input.is_none() {
        return Err(entropy_flow::Error::Parameter(
            "metrics needs --truth, --input, or both".into(),
        )
        .into());
    }
    let mut out = serde_json::Map::new();
    match input {
        Some(edges) => {
            let data = load_dataset(edges, Some(labels))?;
            let found = data.ground_truth.expect("labels were given");
            if let Some(t) = truth {
                let reference = read_labels(&data.graph, t)?;
                out.insert("ari".into(), json!(ari(&found, &reference)?));
                out.insert("nmi".into(), json!(nmi(&found, &reference)?));
            }
            out.insert("modularity".into(), json!(modularity(&data.graph, &found)?));
        }
        None => {
            let t = truth.expect("checked above");
            let a = parse_label_pairs(&read(labels)?)?;
            let b = parse_label_pairs(&read(t)?)?;
            let (found, reference) = align_label_files(&a, &b)?;
            out.insert("ari".into(), json!(ari(&found, &reference)?));
            out.insert("nmi".into(), json!(nmi(&found, &reference)?));
        }
    }
    print_json(&out)?;
    Ok(0)
}

fn run(cli: Cli) -> Result<u8> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(
                entropy_flow::Error::Parameter("--threads must be at least 1".into()).into(),
            );
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    match &cli.command {
        Command::Flow(args) => cmd_flow(args),
        Command::Detect { flow, each_step } => cmd_detect(flow, *each_step),
        Command::Entropy { flow, dump_walks } => cmd_entropy(flow, *dump_walks),
        Command::Oracle {
            steps,
            inject_fault,
        } => cmd_oracle(*steps, *inject_fault),
        Command::Metrics {
            labels,
            truth,
            input,
        } => cmd_metrics(labels, truth.as_deref(), input.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = match e.downcast_ref::<entropy_flow::Error>() {
                Some(entropy_flow::Error::NumericalAbort { .. }) => EXIT_NUMERICAL,
                _ => EXIT_USAGE,
            };
            ExitCode::from(code)
        }
    }
}
