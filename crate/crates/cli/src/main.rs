//! `s6v`: verifiers, samplers and convergence experiments from the command
//! line. Every run is described by a JSON [`RunConfig`]; flags are shorthand
//! for it.

mod config;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use config::{CommandKind, ConfigError, RunConfig};
use s6v_core::lattice::{FieldSpec, Model};

const WORKERS_ENV: &str = "S6V_WORKERS";

#[derive(Parser)]
#[command(name = "s6v", version, about = "Stochastic six vertex model experiments")]
struct Cli {
    /// Worker threads; overrides the S6V_WORKERS environment variable.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Print the resolved config as JSON and exit without running.
    #[arg(long, global = true)]
    print_config: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the exhaustive matrix and degeneration verifiers.
    Verify {
        /// Largest number of colors.
        #[arg(long = "n")]
        colors: Option<usize>,
        /// `default`, or points `b1:b2,b1:b2,...`.
        #[arg(long)]
        grid: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample one path ensemble.
    Sample {
        /// s6v, cs6v or colored-cs6v.
        #[arg(long)]
        model: Option<String>,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long = "w")]
        width: Option<usize>,
        #[arg(long = "h")]
        height: Option<usize>,
        /// Direction of the colored blocks.
        #[arg(long = "dir")]
        direction: Option<String>,
        #[arg(long)]
        blocks: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Binary ensemble.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Law of large numbers experiment for the upright model.
    Converge {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        plan: PlanArgs,
    },
    /// Exact Hammersley checks and the Hammersley limit experiment.
    Hammersley {
        #[arg(long)]
        p: Option<f64>,
        /// Largest side of the exactly enumerated rectangles.
        #[arg(long)]
        exact_max: Option<usize>,
        #[command(flatten)]
        plan: PlanArgs,
    },
    /// Write the table of nonzero two-color vertex weights.
    ExportGolden {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Args)]
struct FieldArgs {
    /// Homogeneous b1.
    #[arg(long)]
    b1: Option<f64>,
    /// Homogeneous b2.
    #[arg(long)]
    b2: Option<f64>,
    /// JSON file `{"b1": [[...]], "b2": [[...]]}` for a periodic field.
    #[arg(long, conflicts_with_all = ["b1", "b2"])]
    field: Option<PathBuf>,
}

#[derive(Args)]
struct PlanArgs {
    /// `x,y`, or `a/b` for the direction `(a, b)`.
    #[arg(long = "dir")]
    direction: Option<String>,
    /// Comma separated scale factors.
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<u64>,
    #[arg(long)]
    replicas: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Fail unless the largest-size error is within this bound.
    #[arg(long)]
    tolerance: Option<f64>,
    /// JSON report.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| ConfigError(format!("{}: {e}", path.display())))
}

fn field_spec(args: FieldArgs) -> Result<Option<FieldSpec>, ConfigError> {
    match (args.field, args.b1, args.b2) {
        (Some(path), _, _) => read_json(&path).map(Some),
        (None, Some(b1), Some(b2)) => Ok(Some(FieldSpec { b1: vec![vec![b1]], b2: vec![vec![b2]] })),
        (None, None, None) => Ok(None),
        _ => Err(ConfigError("--b1 and --b2 must be given together".into())),
    }
}

/// Normalizes `a/b` (no comma) to `a,b`.
fn direction(text: Option<String>) -> Option<String> {
    text.map(|t| if t.contains(',') { t } else { t.replacen('/', ",", 1) })
}

fn grid(text: &str) -> Result<Vec<(f64, f64)>, ConfigError> {
    if text == "default" {
        return Ok(s6v_core::lmatrix::default_grid());
    }
    text.split(',')
        .map(|point| {
            let parsed = point.split_once(':').and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)));
            parsed.ok_or_else(|| ConfigError(format!("grid point {point:?} must be b1:b2")))
        })
        .collect()
}

fn apply_plan(config: &mut RunConfig, plan: PlanArgs) {
    config.direction = direction(plan.direction);
    config.sizes = plan.sizes;
    config.replicas = plan.replicas;
    config.seed = plan.seed;
    config.tolerance = plan.tolerance;
    config.output.out = plan.out;
    config.output.csv = plan.csv;
}

fn compile(command: Command) -> Result<RunConfig, ConfigError> {
    let config = match command {
        Command::Verify { colors, grid: g, out } => {
            let mut c = RunConfig::new(CommandKind::Verify);
            c.colors = colors;
            c.grid = g.as_deref().map(grid).transpose()?;
            c.output.out = out;
            c
        }
        Command::Sample { model, field, width, height, direction: dir, blocks, seed, out, svg, json } => {
            let mut c = RunConfig::new(CommandKind::Sample);
            c.model = model
                .map(|m| serde_json::from_value::<Model>(json!(m)).map_err(|_| ConfigError(format!("unknown model {m:?}"))))
                .transpose()?;
            c.field = field_spec(field)?;
            c.width = width;
            c.height = height;
            c.direction = direction(dir);
            c.blocks = blocks;
            c.seed = seed;
            c.output.out = out;
            c.output.svg = svg;
            c.output.json = json;
            c
        }
        Command::Converge { field, plan } => {
            let mut c = RunConfig::new(CommandKind::Converge);
            c.field = field_spec(field)?;
            apply_plan(&mut c, plan);
            c
        }
        Command::Hammersley { p, exact_max, plan } => {
            let mut c = RunConfig::new(CommandKind::Hammersley);
            c.p = p;
            c.exact_max = exact_max;
            apply_plan(&mut c, plan);
            c
        }
        Command::ExportGolden { out } => {
            let mut c = RunConfig::new(CommandKind::ExportGolden);
            c.output.out = out;
            c
        }
        Command::Run { config } => read_json(&config)?,
    };
    Ok(config)
}

fn workers(flag: Option<usize>) -> Result<Option<usize>, ConfigError> {
    let n = match flag {
        Some(n) => Some(n),
        None => match std::env::var(WORKERS_ENV) {
            Ok(v) => Some(v.trim().parse().map_err(|_| ConfigError(format!("{WORKERS_ENV}={v:?} is not a worker count")))?),
            Err(_) => None,
        },
    };
    if n == Some(0) {
        return Err(ConfigError("worker count must be positive".into()));
    }
    Ok(n)
}

fn fail(kind: &str, message: impl std::fmt::Display) -> ExitCode {
    eprintln!("{}", json!({ "kind": kind, "message": message.to_string() }));
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => return fail("usage", e.render().to_string().trim_end()),
    };
    let outcome = (|| {
        let threads = workers(cli.workers)?;
        let config = compile(cli.command)?;
        let plan = config.plan()?;
        Ok::<_, ConfigError>((threads, config, plan))
    })();
    let (threads, config, plan) = match outcome {
        Ok(v) => v,
        Err(ConfigError(msg)) => return fail("config", msg),
    };
    if cli.print_config {
        println!("{}", serde_json::to_string_pretty(&config).expect("serializable config"));
        return ExitCode::SUCCESS;
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = match builder.build() {
        Ok(pool) => pool,
        Err(e) => return fail("resource", e),
    };
    match pool.install(|| run::run(&config, plan)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => fail(e.kind(), e),
    }
}
