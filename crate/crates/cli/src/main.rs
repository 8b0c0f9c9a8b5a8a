// Negated float comparisons also reject NaN arguments.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use tsplab_core::bench::{
    build_report, format_gap_table, gap_table, read_records_csv, run_experiment, summarize, time_limit_for,
    write_records_csv, ExperimentPlan,
};
use tsplab_core::instance::{generate_random_instance, parse_instance, render_instance, CoordRange};
use tsplab_core::refine::{render_prompt, PromptTemplate, RefinementRequest};
use tsplab_core::tuner::{preset, race, ParamConfig, ParamSpace, RaceSettings};
use tsplab_core::{build_distance_matrix, run_algorithm, Algorithm, ParamValues, Rounding, SolveBudget, Variant};

#[derive(Parser, Debug)]
#[command(name = "tsplab", version, about = "TSP solvers, benchmarks, and tuning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a seeded random EUC_2D instance in TSPLIB format.
    Gen(GenArgs),
    /// Run one solver on one instance and print the result as JSON.
    Solve(SolveArgs),
    /// Run a benchmark plan and write CSV records and a JSON report.
    Bench(BenchArgs),
    /// Race sampled parameter configurations and print the winner as JSON.
    Tune(TuneArgs),
    /// Print a gap table from benchmark CSV records.
    Gap(GapArgs),
    /// Render the refinement prompt for a piece of code.
    RenderPrompt(RenderPromptArgs),
}

#[derive(Args, Debug)]
struct GenArgs {
    /// Number of cities.
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Lower coordinate bound.
    #[arg(long, default_value_t = 0.0)]
    lo: f64,
    /// Upper coordinate bound.
    #[arg(long, default_value_t = 100.0)]
    hi: f64,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SolveArgs {
    /// TSPLIB instance file.
    #[arg(long)]
    instance: PathBuf,
    /// aco, ga, alns, tabu, sa, q_learning, sarsa, christofides,
    /// convex_hull or branch_and_bound.
    #[arg(long)]
    algorithm: Algorithm,
    #[arg(long, default_value = "baseline")]
    variant: Variant,
    /// Preset column: original, claude, gemini, llama, o1, r1.
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,
    /// Parameter config file (TOML).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Time limit is ceil(time_scale * n) seconds.
    #[arg(long, default_value_t = 1.0)]
    time_scale: f64,
    /// Stop after this many tour evaluations.
    #[arg(long)]
    max_evaluations: Option<u64>,
    /// EUC_2D rounding: none or tsplib_nint.
    #[arg(long, default_value = "none")]
    rounding: Rounding,
    /// Include the improvement trajectory in the output.
    #[arg(long)]
    trajectory: bool,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Experiment plan (TOML).
    #[arg(long)]
    plan: PathBuf,
    #[arg(long)]
    out_csv: Option<PathBuf>,
    #[arg(long)]
    out_json: Option<PathBuf>,
    /// Concurrent runs; defaults to the plan's value or the CPU count.
    #[arg(long)]
    workers: Option<usize>,
    /// Variant the gap table compares against.
    #[arg(long, default_value = "baseline")]
    baseline_variant: Variant,
}

#[derive(Args, Debug)]
struct TuneArgs {
    /// Stochastic algorithm to tune.
    #[arg(long)]
    algorithm: Algorithm,
    #[arg(long, default_value = "baseline")]
    variant: Variant,
    /// Training instance files.
    #[arg(long, num_args = 1.., value_delimiter = ',', required = true)]
    instances: Vec<PathBuf>,
    /// Total solver runs.
    #[arg(long, default_value_t = 500)]
    budget: usize,
    /// Number of sampled configurations.
    #[arg(long, default_value_t = 16)]
    candidates: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1.0)]
    time_scale: f64,
    /// Per-run evaluation cap.
    #[arg(long)]
    max_evaluations: Option<u64>,
    #[arg(long, default_value = "none")]
    rounding: Rounding,
    /// Also write the winning config as TOML.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GapArgs {
    /// Benchmark records.
    #[arg(long)]
    csv: PathBuf,
    #[arg(long, default_value = "baseline")]
    baseline_variant: Variant,
    /// Print JSON rows instead of a text table.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct RenderPromptArgs {
    /// Template file; the built-in template when omitted.
    #[arg(long)]
    template: Option<PathBuf>,
    /// Algorithm name.
    #[arg(long)]
    name: String,
    /// Main function signature.
    #[arg(long)]
    signature: String,
    /// File holding the code to improve.
    #[arg(long)]
    code_file: PathBuf,
}

/// Failures after argument parsing: bad flag combinations map to exit 1,
/// unreadable or invalid data to exit 2.
enum Failure {
    Usage(anyhow::Error),
    Data(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Data(e)
    }
}

fn data<E: std::error::Error + Send + Sync + 'static>(e: E) -> Failure {
    Failure::Data(e.into())
}

fn read(path: &PathBuf) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn emit_json<T: serde::Serialize>(value: &T) -> anyhow::Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn gen(a: GenArgs) -> Result<(), Failure> {
    if a.n < 2 {
        return Err(Failure::Usage(anyhow!("--n must be at least 2")));
    }
    if !(a.lo <= a.hi) {
        return Err(Failure::Usage(anyhow!("--lo must not exceed --hi")));
    }
    eprintln!("resolved: n={} seed={} range=[{}, {}]", a.n, a.seed, a.lo, a.hi);
    let text = render_instance(&generate_random_instance(a.n, a.seed, CoordRange { lo: a.lo, hi: a.hi }));
    match a.out {
        Some(path) => fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn solve(a: SolveArgs) -> Result<(), Failure> {
    if !(a.time_scale > 0.0) {
        return Err(Failure::Usage(anyhow!("--time-scale must be positive")));
    }
    if !a.algorithm.variants().contains(&a.variant) {
        return Err(Failure::Usage(anyhow!("--variant {} is not available for {}", a.variant, a.algorithm)));
    }
    let inst = parse_instance(&read(&a.instance)?).context("cannot parse instance")?;
    let d = build_distance_matrix(&inst, a.rounding).context("cannot build distance matrix")?;
    let (config_id, params) = if !a.algorithm.is_stochastic() {
        ("none".to_string(), ParamValues::new())
    } else if let Some(path) = &a.config {
        let cfg = ParamConfig::from_toml(&read(path)?).map_err(data)?;
        if cfg.algorithm != a.algorithm {
            return Err(Failure::Usage(anyhow!("--config is for {}, not {}", cfg.algorithm, a.algorithm)));
        }
        (cfg.id(), cfg.values)
    } else {
        let column = a
            .preset
            .clone()
            .unwrap_or_else(|| a.algorithm.default_column(a.variant).to_string());
        let cfg = preset(a.algorithm, &column).map_err(|e| Failure::Usage(e.into()))?;
        (cfg.id(), cfg.values)
    };
    let limit = time_limit_for(d.n(), a.time_scale);
    eprintln!(
        "resolved: instance={} n={} algorithm={} variant={} config={} params={:?} seed={} time_scale={} time_limit_s={} max_evaluations={} rounding={}",
        inst.name,
        d.n(),
        a.algorithm,
        a.variant,
        config_id,
        params,
        a.seed,
        a.time_scale,
        limit,
        a.max_evaluations.map_or("none".to_string(), |m| m.to_string()),
        a.rounding
    );
    let budget = SolveBudget {
        time_limit_s: limit as f64,
        max_evaluations: a.max_evaluations,
    };
    let mut outcome = run_algorithm(&inst, &d, a.algorithm, a.variant, &params, &budget, a.seed).map_err(data)?;
    if !a.trajectory {
        outcome.trajectory.clear();
    }
    emit_json(&outcome)?;
    Ok(())
}

fn bench(a: BenchArgs) -> Result<(), Failure> {
    let mut plan = ExperimentPlan::from_file(&a.plan).map_err(data)?;
    if a.workers.is_some() {
        plan.workers = a.workers;
    }
    eprintln!(
        "resolved: plan={} instances={} runs={} repetitions={} base_seed={} time_scale={} max_evaluations={} rounding={} workers={}",
        a.plan.display(),
        plan.instances.len(),
        plan.runs.len(),
        plan.repetitions,
        plan.base_seed,
        plan.time_scale,
        plan.max_evaluations.map_or("none".to_string(), |m| m.to_string()),
        plan.rounding,
        plan.workers.map_or("auto".to_string(), |w| w.to_string())
    );
    let records = run_experiment(&plan).map_err(data)?;
    eprintln!("completed {} runs", records.len());
    let report = build_report(&plan, &records, a.baseline_variant);
    match &a.out_csv {
        Some(path) => {
            let file = fs::File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
            write_records_csv(file, &records).context("cannot write CSV")?;
        }
        None => write_records_csv(std::io::stdout().lock(), &records).context("cannot write CSV")?,
    }
    if let Some(path) = &a.out_json {
        let text = serde_json::to_string_pretty(&report).context("cannot encode report")?;
        fs::write(path, text + "\n").with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(())
}

fn tune(a: TuneArgs) -> Result<(), Failure> {
    let space = ParamSpace::for_algorithm(a.algorithm).map_err(|e| Failure::Usage(e.into()))?;
    if !a.algorithm.variants().contains(&a.variant) {
        return Err(Failure::Usage(anyhow!("--variant {} is not available for {}", a.variant, a.algorithm)));
    }
    if !(a.time_scale > 0.0) {
        return Err(Failure::Usage(anyhow!("--time-scale must be positive")));
    }
    let instances = a
        .instances
        .iter()
        .map(|p| parse_instance(&read(p)?).with_context(|| format!("cannot parse {}", p.display())))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let settings = RaceSettings {
        variant: a.variant,
        candidates: a.candidates,
        budget: a.budget,
        seed: a.seed,
        time_scale: a.time_scale,
        max_evaluations: a.max_evaluations,
        rounding: a.rounding,
    };
    eprintln!(
        "resolved: algorithm={} variant={} instances={} budget={} candidates={} seed={} time_scale={} max_evaluations={} rounding={}",
        a.algorithm,
        a.variant,
        instances.len(),
        a.budget,
        a.candidates,
        a.seed,
        a.time_scale,
        a.max_evaluations.map_or("none".to_string(), |m| m.to_string()),
        a.rounding
    );
    let outcome = race(&space, &instances, &settings).map_err(|e| match e {
        tsplab_core::tuner::TunerError::BudgetTooSmall { .. } | tsplab_core::tuner::TunerError::TooFewCandidates(_) => {
            Failure::Usage(e.into())
        }
        other => Failure::Data(other.into()),
    })?;
    eprintln!(
        "race: {} rounds, {} runs, {} survivors",
        outcome.rounds,
        outcome.state.runs_used,
        outcome.state.survivors.len()
    );
    if let Some(path) = &a.out {
        fs::write(path, outcome.best.to_toml()).with_context(|| format!("cannot write {}", path.display()))?;
    }
    emit_json(&outcome.best)?;
    Ok(())
}

fn gap(a: GapArgs) -> Result<(), Failure> {
    eprintln!("resolved: csv={} baseline_variant={}", a.csv.display(), a.baseline_variant);
    let records = read_records_csv(read(&a.csv)?.as_bytes()).context("cannot parse CSV records")?;
    let rows = gap_table(&summarize(&records, None), a.baseline_variant);
    if a.json {
        emit_json(&rows)?;
    } else {
        print!("{}", format_gap_table(&rows));
    }
    Ok(())
}

fn render(a: RenderPromptArgs) -> Result<(), Failure> {
    let template = match &a.template {
        Some(path) => PromptTemplate::new(read(path)?),
        None => PromptTemplate::default(),
    };
    eprintln!(
        "resolved: template={} name={:?}",
        a.template.as_ref().map_or("builtin".to_string(), |p| p.display().to_string()),
        a.name
    );
    let request = RefinementRequest {
        algorithm_name: a.name,
        main_signature: a.signature,
        code: read(&a.code_file)?,
    };
    print!("{}", render_prompt(&template, &request).map_err(|e| Failure::Data(e.into()))?);
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Solve(a) => solve(a),
        Command::Bench(a) => bench(a),
        Command::Tune(a) => tune(a),
        Command::Gap(a) => gap(a),
        Command::RenderPrompt(a) => render(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
