use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use selfsim_core::format::load_family;
use selfsim_core::measure::{
    dimension_profile_partial, entropy_dimension, monte_carlo_binned, DimensionEstimate,
};
use selfsim_core::presets::PRESET_HELP;
use selfsim_core::report::{render, ReportFormat};
use selfsim_core::sweep::{analyze, parse_metrics, PlanFile};
use selfsim_core::{
    overlap_search, run_sweep, similarity_dimension_f64, validate_rational_class, Error,
    FamilySpec, OverlapKind, Param, RationalScalar, SweepPlan,
};

/// Exact and numerical analysis of one-parameter self-similar families.
///
/// Exit codes: 0 success, 1 validation failure, 2 budget exceeded on a
/// single-parameter command.
#[derive(Parser, Debug)]
#[command(name = "selfsim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// All metrics at one parameter.
    Analyze(AnalyzeArgs),
    /// Metrics over Farey slopes and a float grid.
    Sweep(SweepArgs),
    /// Exact overlap witnesses up to a word length.
    OverlapSearch(OverlapArgs),
    /// Entropy dimension estimates d_1..d_n at one parameter.
    Entropy(EntropyArgs),
    /// Rational-class report for a family.
    Validate(FamilyArg),
    /// Named families.
    Preset {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Subcommand, Debug)]
enum PresetAction {
    List,
}

#[derive(Args, Debug)]
struct FamilyArg {
    /// Preset name (see `preset list`) or path to a family file.
    #[arg(long, default_value = "carpet")]
    family: String,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct ParamArg {
    /// Exact rational parameter, e.g. 1/3.
    #[arg(long)]
    param: Option<RationalScalar>,
    /// Floating-point parameter.
    #[arg(long = "param-float")]
    param_float: Option<f64>,
}

impl ParamArg {
    fn get(&self) -> Param {
        match (&self.param, self.param_float) {
            (Some(p), _) => Param::Exact(p.clone()),
            (None, Some(x)) => Param::Float(x),
            (None, None) => unreachable!("clap requires one of the two"),
        }
    }
}

#[derive(Args, Debug)]
struct Output {
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv, json or svg.
    #[arg(long)]
    format: Option<ReportFormat>,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    #[command(flatten)]
    family: FamilyArg,
    #[command(flatten)]
    param: ParamArg,
    /// Deepest level; entropy is reported at 1, 2, 4, ... and this depth.
    #[arg(long, default_value_t = 8)]
    depth: usize,
    /// Comma-separated subset of similarity_dim,separation,overlaps,entropy,phi_probe.
    #[arg(long)]
    metrics: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Monte-Carlo sample count for float parameters.
    #[arg(long)]
    samples: Option<u64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Plan file; flags given on the command line override its fields.
    plan: Option<PathBuf>,
    /// Preset name or family file (overrides the plan's family).
    #[arg(long)]
    family: Option<String>,
    /// Largest denominator of the Farey slopes.
    #[arg(long)]
    qmax: Option<u64>,
    /// Number of float parameters at uniform cell midpoints.
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long)]
    metrics: Option<String>,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<u64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct OverlapArgs {
    #[command(flatten)]
    family: FamilyArg,
    /// Exact rational parameter.
    #[arg(long)]
    param: RationalScalar,
    /// Longest word length searched.
    #[arg(long, default_value_t = 3)]
    depth: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct EntropyArgs {
    #[command(flatten)]
    family: FamilyArg,
    #[command(flatten)]
    param: ParamArg,
    #[arg(long, default_value_t = 8)]
    depth: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<u64>,
    #[command(flatten)]
    output: Output,
}

/// `1, 2, 4, ...` below `n`, then `n`.
fn doubling_depths(n: usize) -> Vec<usize> {
    let mut d: Vec<usize> = std::iter::successors(Some(1usize), |&k| Some(k * 2))
        .take_while(|&k| k < n)
        .collect();
    d.push(n);
    d
}

fn write_output(text: &str, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn family(arg: &str) -> anyhow::Result<FamilySpec> {
    Ok(load_family(arg)?)
}

fn cmd_analyze(a: AnalyzeArgs) -> anyhow::Result<ExitCode> {
    if a.depth == 0 {
        bail!(Error::Invalid("--depth must be at least 1".into()));
    }
    let f = family(&a.family.family)?;
    let param = a.param.get();
    match &param {
        Param::Exact(u) => f.check_param(u)?,
        Param::Float(x) => f.check_param_f64(*x)?,
    }
    let mut plan = SweepPlan::new(f);
    plan.depths = doubling_depths(a.depth);
    if let Some(m) = &a.metrics {
        plan.metrics = parse_metrics(m)?;
    }
    if let Some(s) = a.seed {
        plan.seed = s;
    }
    if let Some(s) = a.samples {
        plan.samples = s;
    }
    let rec = analyze(&plan, param);
    let format = a.output.format.unwrap_or(ReportFormat::Json);
    write_output(
        &render(std::slice::from_ref(&rec), format),
        a.output.out.as_deref(),
    )?;
    for e in &rec.errors {
        eprintln!("warning: {e}");
    }
    Ok(if rec.budget {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_sweep(a: SweepArgs) -> anyhow::Result<ExitCode> {
    let mut plan = match &a.plan {
        Some(path) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let mut file = PlanFile::parse(&text)?;
            if let Some(f) = &a.family {
                file.family = f.clone();
            }
            // flags may supply the parameter source the file lacks
            file.qmax = a.qmax.or(file.qmax);
            file.grid = a.grid.unwrap_or(file.grid);
            file.into_plan()?
        }
        None => {
            let mut plan = SweepPlan::new(family(a.family.as_deref().unwrap_or("carpet"))?);
            plan.rational_slopes = a.qmax;
            plan.float_grid = a.grid.unwrap_or(0);
            plan
        }
    };
    if let Some(n) = a.depth {
        if n == 0 {
            bail!(Error::Invalid("--depth must be at least 1".into()));
        }
        plan.depths = doubling_depths(n);
    }
    if let Some(m) = &a.metrics {
        plan.metrics = parse_metrics(m)?;
    }
    if let Some(j) = a.jobs {
        plan.parallelism = j;
    }
    if let Some(s) = a.seed {
        plan.seed = s;
    }
    if let Some(s) = a.samples {
        plan.samples = s;
    }
    let records = run_sweep(&plan)?;
    let format = a.output.format.unwrap_or(ReportFormat::Csv);
    write_output(&render(&records, format), a.output.out.as_deref())?;
    let partial = records.iter().filter(|r| r.budget).count();
    if partial > 0 {
        eprintln!("{partial} of {} records hit a budget", records.len());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_overlap(a: OverlapArgs) -> anyhow::Result<ExitCode> {
    let f = family(&a.family.family)?;
    let witnesses = overlap_search(&f, &a.param, a.depth)?;
    let text = match a.output.format.unwrap_or(ReportFormat::Csv) {
        ReportFormat::Csv => {
            let mut s = String::from("word_i,word_j,kind\n");
            for w in &witnesses {
                let kind = match &w.kind {
                    OverlapKind::Identical => "identical".to_string(),
                    OverlapKind::AtParameter(u) => format!("at {u}"),
                };
                s.push_str(&format!("{},{},{kind}\n", w.word_i, w.word_j));
            }
            s
        }
        ReportFormat::Json => serde_json::to_string_pretty(&witnesses)? + "\n",
        ReportFormat::Svg => bail!(Error::Invalid("overlap-search writes csv or json".into())),
    };
    write_output(&text, a.output.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_entropy(a: EntropyArgs) -> anyhow::Result<ExitCode> {
    if a.depth == 0 {
        bail!(Error::Invalid("--depth must be at least 1".into()));
    }
    let f = family(&a.family.family)?;
    let depths: Vec<usize> = (1..=a.depth).collect();
    let (est, err) = match a.param.get() {
        Param::Exact(u) => {
            f.check_param(&u)?;
            dimension_profile_partial(&f, &u, &depths)
        }
        Param::Float(x) => {
            f.check_param_f64(x)?;
            let base = f.require_base()?;
            let samples = a
                .samples
                .unwrap_or(selfsim_core::measure::monte_carlo::DEFAULT_SAMPLES);
            let seed = a
                .seed
                .unwrap_or(selfsim_core::measure::monte_carlo::DEFAULT_SEED);
            let mut est = DimensionEstimate {
                similarity_dim: similarity_dimension_f64(&f, x).ok(),
                ..Default::default()
            };
            let mut err = None;
            for &n in &depths {
                match monte_carlo_binned(&f, x, n, samples, seed)
                    .and_then(|b| entropy_dimension(&b, base, n))
                {
                    Ok(e) => est.push(e),
                    Err(e) => {
                        err = Some(e);
                        break;
                    }
                }
            }
            (est, err)
        }
    };
    let text = match a.output.format.unwrap_or(ReportFormat::Csv) {
        ReportFormat::Csv => {
            let mut s = String::from("depth,entropy_nats,d_n\n");
            for k in 0..est.depths.len() {
                s.push_str(&format!(
                    "{},{},{}\n",
                    est.depths[k], est.entropy_nats[k], est.ratio[k]
                ));
            }
            s
        }
        ReportFormat::Json => serde_json::to_string_pretty(&est)? + "\n",
        ReportFormat::Svg => bail!(Error::Invalid("entropy writes csv or json".into())),
    };
    write_output(&text, a.output.out.as_deref())?;
    match err {
        None => Ok(ExitCode::SUCCESS),
        Some(e) => Err(e.into()),
    }
}

fn cmd_validate(a: FamilyArg) -> anyhow::Result<ExitCode> {
    let f = family(&a.family)?;
    let rep = validate_rational_class(&f);
    for c in &rep.checks {
        println!(
            "{:<26} {}  {}",
            c.name,
            if c.passed { "pass" } else { "FAIL" },
            c.witness
        );
    }
    Ok(if rep.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Analyze(a) => cmd_analyze(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::OverlapSearch(a) => cmd_overlap(a),
        Command::Entropy(a) => cmd_entropy(a),
        Command::Validate(a) => cmd_validate(a),
        Command::Preset {
            action: PresetAction::List,
        } => {
            for (name, help) in PRESET_HELP {
                println!("{name:<16} {help}");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<Error>() {
                Some(Error::BudgetExceeded { .. }) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
