use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use phaselock::experiments::simulate;

use phaselock_cli::analyze::{analyze_trajectory, read_trajectory, AnalyzeOptions, InputFormat, InputKind};
use phaselock_cli::config::{parse_analysis, ExperimentConfig, Scale};
use phaselock_cli::error::{CliError, EXIT_NUMERICAL, EXIT_OK};
use phaselock_cli::presets::{self, PRESETS};
use phaselock_cli::sweep::{self, analysis_config, Job};

#[derive(Parser)]
#[command(name = "phaselock", version, about = "Transition-rate analysis of intermittent phase locking")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a parameter sweep and write one result row per point.
    Sweep {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Analyze a two-channel trajectory file.
    Analyze(AnalyzeArgs),
    /// List the built-in presets, or print one as a config file.
    Presets {
        name: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Dump the trajectory of one sweep point.
    Simulate {
        #[command(flatten)]
        source: Source,
        /// Sweep point index.
        #[arg(long, default_value_t = 0)]
        point: usize,
        /// `.bin` writes the binary layout, anything else CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Source {
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    config: Option<PathBuf>,
    #[arg(long)]
    preset: Option<String>,
    /// Master seed, overriding the config.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_parser = parse_scale)]
    scale: Option<Scale>,
}

#[derive(Args)]
struct AnalyzeArgs {
    input: PathBuf,
    #[arg(long, default_value = "auto")]
    format: InputFormat,
    #[arg(long, default_value = "signal")]
    kind: InputKind,
    /// Two column names separated by a comma.
    #[arg(long)]
    channels: Option<String>,
    /// Band-pass edges in Hz, `lo,hi`.
    #[arg(long)]
    band: Option<String>,
    /// Unit of the file's time column: `s` or `ms`.
    #[arg(long, default_value = "s")]
    time_unit: String,
    /// Config file with an `[analysis]` section.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Surrogate seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Labeled return map; defaults to `<out>.map.csv` when `--out` is set.
    #[arg(long)]
    map_out: Option<PathBuf>,
}

fn parse_scale(s: &str) -> Result<Scale, String> {
    s.parse()
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn load(source: &Source) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match (&source.config, &source.preset) {
        (Some(path), _) => read_text(path)?.parse()?,
        (None, Some(name)) => presets::find(name)?.config(),
        (None, None) => return Err(CliError::Invalid("one of --config or --preset is required".into())),
    };
    if let Some(s) = source.seed {
        cfg.seed = s;
    }
    if let Some(s) = source.scale {
        cfg.scale = s;
    }
    Ok(cfg)
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(|e| CliError::io(path, e))
}

fn emit(path: Option<&Path>, write: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let mut w = create(p)?;
            write(&mut w).and_then(|_| w.flush()).map_err(|e| CliError::io(p, e))
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock).map_err(|e| CliError::io("<stdout>", e))
        }
    }
}

fn run_sweep_cmd(source: &Source, out: Option<PathBuf>, workers: Option<usize>) -> Result<i32, CliError> {
    let cfg = load(source)?;
    let plan = sweep::plan(&cfg)?;
    let out = out.or_else(|| cfg.output.clone());
    // fail on an unwritable path before computing anything
    let mut file = out.as_deref().map(create).transpose()?;
    let result = sweep::execute(&plan, workers)?;
    match (&mut file, &out) {
        (Some(w), Some(p)) => result.write(w).map_err(|e| CliError::io(p, e))?,
        _ => emit(None, |w| result.write(w))?,
    }
    eprintln!(
        "{} rows, {} failed (master seed {}, {} scale){}",
        result.rows.len(),
        result.failures.len(),
        cfg.seed,
        cfg.scale,
        out.map(|p| format!(", written to {}", p.display())).unwrap_or_default()
    );
    Ok(if result.numerical_failures() > 0 { EXIT_NUMERICAL } else { EXIT_OK })
}

fn pair(s: &str, what: &str) -> Result<(String, String), CliError> {
    match s.split_once(',') {
        Some((a, b)) if !a.trim().is_empty() && !b.trim().is_empty() => Ok((a.trim().into(), b.trim().into())),
        _ => Err(CliError::Invalid(format!("{what} must be two comma-separated values, got `{s}`"))),
    }
}

fn run_analyze(args: AnalyzeArgs) -> Result<i32, CliError> {
    let (settings, cfg_seed) = match &args.config {
        Some(p) => parse_analysis(&read_text(p)?)?,
        None => Default::default(),
    };
    let band = match &args.band {
        Some(b) => {
            let (lo, hi) = pair(b, "--band")?;
            let num = |v: &str| v.parse::<f64>().map_err(|_| CliError::Invalid(format!("bad band edge `{v}`")));
            Some((num(&lo)?, num(&hi)?))
        }
        None => None,
    };
    let seconds_per_unit = match args.time_unit.as_str() {
        "s" => 1.0,
        "ms" => 1e-3,
        other => return Err(CliError::Invalid(format!("unknown time unit `{other}`, expected s or ms"))),
    };
    let opts = AnalyzeOptions {
        format: args.format,
        kind: args.kind,
        channels: args.channels.as_deref().map(|c| pair(c, "--channels")).transpose()?,
        band,
        seconds_per_unit,
        settings,
        seed: args.seed.or(cfg_seed).unwrap_or(0),
    };
    let traj = read_trajectory(&args.input, opts.format)?;
    let result = analyze_trajectory(&traj, &opts)?;
    emit(args.out.as_deref(), |w| writeln!(w, "{}\n{}", result.header, result.row))?;
    let map_path = args.map_out.or_else(|| args.out.as_ref().map(|o| o.with_extension("map.csv")));
    if let (Some(report), Some(path)) = (&result.report, map_path) {
        let mut w = create(&path)?;
        report.map.write_csv(&mut w).and_then(|_| w.flush()).map_err(|e| CliError::io(&path, e))?;
    }
    Ok(EXIT_OK)
}

fn run_presets(name: Option<String>, json: bool) -> Result<i32, CliError> {
    match name {
        Some(n) => {
            let p = presets::find(&n)?;
            if json {
                emit(None, |w| writeln!(w, "{}", serde_json::to_string_pretty(p).expect("preset serializes")))?;
            } else {
                emit(None, |w| write!(w, "# {}\n{}", p.description, p.config()))?;
            }
        }
        None if json => {
            emit(None, |w| writeln!(w, "{}", serde_json::to_string_pretty(&PRESETS).expect("presets serialize")))?
        }
        None => emit(None, |w| {
            for p in &PRESETS {
                let crit: Vec<String> = p.critical.iter().map(|(k, v)| format!("{k}={v}")).collect();
                writeln!(w, "{:<28} fig {:<2} {:<12} {}", p.name, p.figure, p.system, p.description)?;
                if !crit.is_empty() {
                    writeln!(w, "{:<28} critical: {}", "", crit.join(" "))?;
                }
            }
            Ok(())
        })?,
    }
    Ok(EXIT_OK)
}

fn run_simulate(source: &Source, point: usize, out: Option<PathBuf>) -> Result<i32, CliError> {
    let cfg = load(source)?;
    let plan = sweep::plan(&cfg)?;
    let p = plan
        .points
        .get(point)
        .ok_or_else(|| CliError::Invalid(format!("point {point} out of range (sweep has {})", plan.points.len())))?;
    let spec = match &p.job {
        Job::Analysis(spec) => spec.clone(),
        Job::Lyapunov { a, k, n_iter, discard, .. } => phaselock::experiments::SystemSpec::Tent {
            a: *a,
            eps: phaselock::lyapunov::epsilon_for_log_k(*a, *k)?,
            n_iter: *n_iter,
            discard: *discard,
            center: 0.0,
        },
    };
    let checkpoint = analysis_config(&plan.analysis, p.seed).checkpoint.value();
    let traj = simulate(&spec, p.seed, checkpoint)?;
    let binary = out.as_ref().is_some_and(|o| o.extension().is_some_and(|e| e == "bin"));
    emit(out.as_deref(), |w| if binary { traj.write_binary(w) } else { traj.write_csv(w) })?;
    eprintln!("point {point}: seed {}, {} samples", p.seed, traj.len());
    Ok(EXIT_OK)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sweep { source, out, workers } => run_sweep_cmd(&source, out, workers),
        Command::Analyze(args) => run_analyze(args),
        Command::Presets { name, json } => run_presets(name, json),
        Command::Simulate { source, point, out } => run_simulate(&source, point, out),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
