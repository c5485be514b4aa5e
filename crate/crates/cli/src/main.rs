use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use panelfuse_core::eval::{
    assignment_cost, fusion_report, inject_duplicates, self_fusion_quality, synth_panels, trace_csv, trace_table,
    EvalError, FusionReport, SynthSpec,
};
use panelfuse_core::fusion::{mass_balance, FusionError};
use panelfuse_core::graph::{estimate_arc_count, CostMode};
use panelfuse_core::panel::{load_panel, read_assignments, write_assignments, write_panel, FusionConfig, PanelError};
use panelfuse_core::pipeline::{prepare, run, FusionMode, PipelineError};

const EXIT_VALIDATION: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "panelfuse", version, about = "Fuse two weighted panels by min-cost flow")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fuse two panels and write the assignment file.
    Fuse(FuseArgs),
    /// Check two panels and a config without fusing.
    Validate(PanelPair),
    /// Summarize an existing assignment file against its panels.
    Report(ReportArgs),
    /// Fuse a panel with itself and report how much flow stays on the diagonal.
    Selftest(SelftestArgs),
    /// Write a pair of seeded synthetic panels.
    Synth(SynthArgs),
}

#[derive(Args)]
struct PanelPair {
    #[arg(long)]
    left: PathBuf,
    #[arg(long)]
    right: PathBuf,
    /// JSON config; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Single,
    Iterative,
}

#[derive(Args)]
struct FuseArgs {
    #[command(flatten)]
    panels: PanelPair,
    #[arg(long, value_enum, default_value = "iterative")]
    mode: Mode,
    #[arg(long)]
    out: PathBuf,
    /// Also write the run report as JSON.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Also write the per-stage trace as CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    #[command(flatten)]
    panels: PanelPair,
    #[arg(long)]
    assignments: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long)]
    panel: PathBuf,
    #[arg(long)]
    config: Option<PathBuf>,
    /// Share of panelists whose features get copied onto another panelist.
    #[arg(long, default_value_t = 0.0)]
    duplicates: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long)]
    n_left: usize,
    #[arg(long)]
    n_right: usize,
    /// Universe total each panel's weights sum to.
    #[arg(long, default_value_t = 1_000_000.0)]
    universe: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// JSON feature spec; the built-in demographic spec when omitted.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long)]
    out_left: PathBuf,
    #[arg(long)]
    out_right: PathBuf,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn validation(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_VALIDATION,
            message: message.into(),
        }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        Failure {
            code: EXIT_IO,
            message: format!("{}: {e}", path.display()),
        }
    }
}

fn panel_code(e: &PanelError) -> u8 {
    match e {
        PanelError::Io { .. } => EXIT_IO,
        _ => EXIT_VALIDATION,
    }
}

impl From<PanelError> for Failure {
    fn from(e: PanelError) -> Self {
        Failure {
            code: panel_code(&e),
            message: e.to_string(),
        }
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        let code = match &e {
            _ if e.is_infeasible() => EXIT_INFEASIBLE,
            PipelineError::Panel(p) => panel_code(p),
            _ => EXIT_VALIDATION,
        };
        let mut message = e.to_string();
        if let PipelineError::Fusion(FusionError::Infeasible { blocks, .. }) = &e {
            for b in blocks {
                message.push_str(&format!(
                    "\n  block [{}]: left {} units, right {} units",
                    b.key.join(", "),
                    b.left_units,
                    b.right_units
                ));
            }
        }
        Failure { code, message }
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Panel(p) => p.into(),
            EvalError::Pipeline(p) => p.into(),
            other => Failure::validation(other.to_string()),
        }
    }
}

fn load_config(path: Option<&Path>) -> Result<FusionConfig, Failure> {
    let config = match path {
        Some(p) => FusionConfig::load(p)?,
        None => FusionConfig::default(),
    };
    config.validate()?;
    Ok(config)
}

fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::io(path, e))
}

fn fuse(args: FuseArgs) -> Result<(), Failure> {
    let config = load_config(args.panels.config.as_deref())?;
    let left = load_panel(&args.panels.left)?;
    let right = load_panel(&args.panels.right)?;
    info!("loaded {} left and {} right panelists", left.len(), right.len());
    let mode = match args.mode {
        Mode::Single => FusionMode::Single,
        Mode::Iterative => FusionMode::Iterative,
    };
    let (prepared, outcome) = run(&left, &right, &config, mode)?;
    eprint!("{}", trace_table(&outcome.trace));
    write_assignments(&outcome.assignments, &args.out)?;
    if let Some(path) = &args.report {
        let report = FusionReport::from_outcome(&outcome, &prepared.left, &prepared.right)?;
        write_text(path, &report.to_json())?;
    }
    if let Some(path) = &args.trace {
        write_text(path, &trace_csv(&outcome.trace))?;
    }
    info!(
        "wrote {} pairs to {} (total cost {})",
        outcome.assignments.len(),
        args.out.display(),
        outcome.total_cost
    );
    Ok(())
}

fn validate(args: PanelPair) -> Result<(), Failure> {
    let config = load_config(args.config.as_deref())?;
    let left = load_panel(&args.left)?;
    let right = load_panel(&args.right)?;
    let prepared = prepare(&left, &right, &config)?;
    let (l, r) = (&prepared.left, &prepared.right);
    println!("left:  {} panelists, total weight {:.3}", l.len(), l.total_weight());
    println!("right: {} panelists, total weight {:.3}", r.len(), r.total_weight());
    println!("units per side: {} (unit scale {})", l.total_units(), config.unit_scale);
    println!("categoricals: {}", l.schema.categorical.join(", "));
    println!("reals: {}", l.schema.real.join(", "));
    println!(
        "single-graph arcs: {} soft, {} hard (cap {})",
        estimate_arc_count(l, r, CostMode::Soft),
        estimate_arc_count(l, r, CostMode::Hard),
        config.single_arc_cap
    );
    Ok(())
}

fn report(args: ReportArgs) -> Result<(), Failure> {
    let config = load_config(args.panels.config.as_deref())?;
    let left = load_panel(&args.panels.left)?;
    let right = load_panel(&args.panels.right)?;
    let assignments = read_assignments(&args.assignments)?;
    let prepared = prepare(&left, &right, &config)?;
    let (l, r) = (&prepared.left, &prepared.right);
    let balance = mass_balance(&assignments, l, r);
    if !balance.is_exact() {
        let mut message = String::from("assignments do not match panel weights");
        for (side, id) in balance.unknown_ids.iter().take(10) {
            message.push_str(&format!("\n  unknown {side:?} id {id}"));
        }
        for d in balance.discrepancies.iter().take(10) {
            message.push_str(&format!(
                "\n  {:?} {}: expected {} units, assigned {}",
                d.side, d.id, d.expected, d.assigned
            ));
        }
        return Err(Failure::validation(message));
    }
    let mut rep = fusion_report(&assignments, l, r)?;
    rep.total_cost = Some(assignment_cost(&assignments, l, r, &config.cost_model(CostMode::Soft))?);
    if args.json {
        println!("{}", rep.to_json());
    } else {
        print!("{}", rep.to_text());
    }
    Ok(())
}

fn selftest(args: SelftestArgs) -> Result<(), Failure> {
    let config = load_config(args.config.as_deref())?;
    let mut panel = load_panel(&args.panel)?;
    if !(0.0..=0.5).contains(&args.duplicates) {
        return Err(Failure::validation("--duplicates must be in [0, 0.5]"));
    }
    if args.duplicates > 0.0 {
        panel = inject_duplicates(&panel, args.duplicates, args.seed);
    }
    let rep = self_fusion_quality(&panel, &config)?;
    if args.json {
        println!("{}", rep.to_json());
    } else {
        print!("{}", rep.to_text());
    }
    Ok(())
}

fn synth(args: SynthArgs) -> Result<(), Failure> {
    let spec = match &args.spec {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
            serde_json::from_str(&text).map_err(|e| Failure::validation(format!("{}: {e}", path.display())))?
        }
        None => SynthSpec::demo(),
    };
    let (left, right) = synth_panels(args.n_left, args.n_right, &spec, args.universe, args.seed)?;
    write_panel(&left, &args.out_left)?;
    write_panel(&right, &args.out_right)?;
    info!("wrote {} and {} panelists", left.len(), right.len());
    Ok(())
}

fn main() -> ExitCode {
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
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    let result = match cli.command {
        Command::Fuse(a) => fuse(a),
        Command::Validate(a) => validate(a),
        Command::Report(a) => report(a),
        Command::Selftest(a) => selftest(a),
        Command::Synth(a) => synth(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
