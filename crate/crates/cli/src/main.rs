//! `eqnn`: derive and check equivariant channels, count parameters, generate
//! Heisenberg datasets, train classifiers and emit phase diagrams.

mod presets;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use eqnn::channel::json::ChannelJson;
use eqnn::channel::{is_cp, is_tp};
use eqnn::equiv::{
    count_parameters_channel, count_parameters_unitary, solve_choi_method, solve_nullspace,
    solve_twirl, tp_pauli_seeds, twirled_span, verify_basis, verify_equivariance, EquivariantBasis, ProblemSpec, SeedSet,
    TwirlConfig,
};
use eqnn::spin::{make_dataset, Dataset, DegeneratePolicy};
use eqnn::su2::{feasible_boundary_distance, feasible_contains, project_to_feasible, PoolParams};
use eqnn::train::{evaluate, train, ModelSpec, PoolingKind, TrainConfig, TrainedModel};
use eqnn::{EqnnError, Exec};

#[derive(Parser, Debug)]
#[command(name = "eqnn", version, about = "Group-equivariant quantum channels and classifiers")]
struct Cli {
    /// Worker threads for data-parallel loops (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Run every loop sequentially.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute a basis of equivariant maps.
    Derive(DeriveArgs),
    /// Check a channel for CPTP, equivariance or pooling feasibility.
    Check(CheckArgs),
    /// Count equivariant unitary and channel parameters.
    Count(CountArgs),
    /// Generate Heisenberg ground-state datasets.
    Dataset(DatasetArgs),
    /// Train a classifier on a generated dataset.
    Train(TrainArgs),
    /// Sweep a trained model over the coupling ratio.
    PhaseDiagram(PhaseArgs),
    /// List the shipped presets, or print one.
    Presets { name: Option<String> },
}

#[derive(Args, Debug, Clone)]
struct ProblemArgs {
    /// Shipped problem preset.
    #[arg(long, conflicts_with = "problem")]
    preset: Option<String>,
    /// Problem spec JSON file.
    #[arg(long)]
    problem: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CountArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Compute channel counts even for large Choi spaces.
    #[arg(long)]
    full: bool,
}

/// Largest `(d_in d_out)²` for which channel counts run by default.
const CHANNEL_COUNT_LIMIT: usize = 1024;

#[derive(ValueEnum, Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "lowercase")]
enum Method {
    Nullspace,
    Twirl,
    Choi,
}

#[derive(Args, Debug)]
struct DeriveArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long, value_enum, default_value = "nullspace")]
    method: Method,
    /// Random group samples used by the residual report.
    #[arg(long, default_value_t = 16)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "lowercase")]
enum CheckKind {
    Cptp,
    Equivariance,
    Feasible,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(value_enum)]
    kind: CheckKind,
    /// Channel JSON file (cptp, equivariance).
    #[arg(long)]
    channel: Option<PathBuf>,
    #[command(flatten)]
    problem: ProblemArgs,
    /// Pooling parameters `x,y,z` (feasible).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with_all = ["x", "y", "z"])]
    pool: Option<Vec<f64>>,
    /// Pooling parameters given one at a time (feasible).
    #[arg(long, allow_hyphen_values = true, requires_all = ["y", "z"])]
    x: Option<f64>,
    #[arg(long, allow_hyphen_values = true, requires_all = ["x", "z"])]
    y: Option<f64>,
    #[arg(long, allow_hyphen_values = true, requires_all = ["x", "y"])]
    z: Option<f64>,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 16)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Policy {
    First,
    Random,
}

impl From<Policy> for DegeneratePolicy {
    fn from(p: Policy) -> Self {
        match p {
            Policy::First => DegeneratePolicy::First,
            Policy::Random => DegeneratePolicy::RandomInSpace,
        }
    }
}

#[derive(Args, Debug)]
struct DatasetArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    count: usize,
    #[arg(long, value_delimiter = ',', num_args = 2, default_values_t = [0.0, 2.0])]
    range: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "random")]
    policy: Policy,
    #[arg(long)]
    out: PathBuf,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum ModelKind {
    Eqcnn,
    Hea,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Pooling {
    Trace,
    Parametric,
}

#[derive(Args, Debug)]
struct TrainArgs {
    /// Experiment preset or file; explicit flags override its fields.
    #[arg(long)]
    config: Option<String>,
    #[arg(long, value_enum)]
    model: Option<ModelKind>,
    #[arg(long)]
    n: Option<usize>,
    /// Convolution repetitions per EQCNN stage.
    #[arg(long)]
    reps: Option<usize>,
    /// HEA blocks per stage (default: matched to the EQCNN parameter count).
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long, value_enum)]
    pooling: Option<Pooling>,
    #[arg(long)]
    train_size: Option<usize>,
    #[arg(long)]
    test_points: Option<usize>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    lr: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Training dataset file instead of generating one.
    #[arg(long)]
    data: Option<PathBuf>,
    /// Metrics JSON output.
    #[arg(long)]
    out: PathBuf,
    /// Trained model JSON output.
    #[arg(long)]
    model_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PhaseArgs {
    #[arg(long)]
    model_file: PathBuf,
    #[arg(long, default_value_t = 500)]
    points: usize,
    #[arg(long, value_delimiter = ',', num_args = 2, default_values_t = [0.0, 2.0])]
    range: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

/// A training experiment: model, data sizes and optimizer settings.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct Experiment {
    #[serde(default)]
    name: String,
    model: ModelSpec,
    train_size: usize,
    #[serde(default = "default_test_points")]
    test_points: usize,
    #[serde(default = "default_range")]
    range: (f64, f64),
    #[serde(default)]
    train: TrainConfig,
}

fn default_test_points() -> usize {
    100
}

fn default_range() -> (f64, f64) {
    (0.0, 2.0)
}

/// Failure of a command, mapped to an exit code.
#[derive(Debug)]
enum Failure {
    Lib(EqnnError),
    Io(String),
}

impl From<EqnnError> for Failure {
    fn from(e: EqnnError) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Lib(e) if e.is_numerical() => 3,
            _ => 2,
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Failure::Lib(e) => json!({"error": e.kind(), "message": e.to_string()}),
            Failure::Io(m) => json!({"error": "io", "message": m}),
        }
    }
}

type CmdResult<T> = std::result::Result<T, Failure>;

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Lib(EqnnError::Invalid(msg.into()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        eqnn::exec::set_threads(t.max(1));
    }
    let exec = if cli.sequential { Exec::Sequential } else { Exec::default() };
    let argv: Vec<String> = std::env::args().collect();
    match run(&cli, exec, &argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.to_json());
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: &Cli, exec: Exec, argv: &[String]) -> CmdResult<()> {
    let start = Instant::now();
    let (name, config, seed, outputs) = match &cli.command {
        Command::Derive(a) => cmd_derive(a, exec)?,
        Command::Check(a) => cmd_check(a)?,
        Command::Count(a) => cmd_count(a)?,
        Command::Dataset(a) => cmd_dataset(a, exec)?,
        Command::Train(a) => cmd_train(a, exec)?,
        Command::PhaseDiagram(a) => cmd_phase(a, exec)?,
        Command::Presets { name } => return cmd_presets(name.as_deref()),
    };
    if let Some(first) = outputs.first() {
        write_manifest(first, name, argv, config, seed, start.elapsed().as_secs_f64(), &outputs)?;
    }
    Ok(())
}

fn load_problem(a: &ProblemArgs) -> CmdResult<ProblemSpec> {
    let text = match (&a.preset, &a.problem) {
        (Some(p), _) => presets::get(p).ok_or_else(|| invalid(format!("unknown preset {p:?}")))?.to_string(),
        (None, Some(path)) => fs::read_to_string(path)?,
        (None, None) => return Err(invalid("pass --preset or --problem")),
    };
    Ok(ProblemSpec::from_json(&text)?)
}

/// Writes `value` to `out` (pretty JSON) or prints it; returns the written path.
fn emit(value: &Value, out: Option<&Path>) -> CmdResult<Vec<PathBuf>> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match out {
        Some(p) => {
            fs::write(p, text)?;
            Ok(vec![p.to_path_buf()])
        }
        None => {
            print!("{text}");
            Ok(vec![])
        }
    }
}

type Outcome = (&'static str, Value, Option<u64>, Vec<PathBuf>);

fn basis_json(b: &EquivariantBasis) -> CmdResult<Vec<Value>> {
    b.elements
        .iter()
        .map(|t| Ok(serde_json::to_value(ChannelJson::from_transfer(t)?)?))
        .collect()
}

fn cmd_derive(a: &DeriveArgs, exec: Exec) -> CmdResult<Outcome> {
    let spec = load_problem(&a.problem)?;
    let problem = spec.build()?;
    let basis = match a.method {
        Method::Nullspace => solve_nullspace(&problem)?,
        Method::Choi => solve_choi_method(&problem, a.seed)?,
        Method::Twirl => match spec.seeds.unwrap_or(SeedSet::Units) {
            SeedSet::Units => solve_twirl(&problem, exec)?,
            SeedSet::TpPauli => {
                let seeds = tp_pauli_seeds(problem.in_dim(), problem.out_dim());
                let config = if problem.r_in.is_finite() { TwirlConfig::exact() } else { TwirlConfig::weingarten() };
                twirled_span(&problem, &seeds, &config.with_exec(exec))?
            }
        },
    };
    let sampled = verify_basis(&basis.elements, &problem, a.samples, a.seed, exec)?;
    let worst = sampled.iter().copied().fold(0.0, f64::max);
    let value = json!({
        "problem": spec.name,
        "method": a.method,
        "dimension": basis.len(),
        "trace_tags": basis.trace_tags,
        "residuals": basis.residuals,
        "sampled_residuals": sampled,
        "max_residual": worst,
        "elements": basis_json(&basis)?,
    });
    let outputs = emit(&value, a.out.as_deref())?;
    let config = json!({"problem": spec, "method": a.method, "samples": a.samples});
    Ok(("derive", config, Some(a.seed), outputs))
}

fn load_channel(path: Option<&PathBuf>) -> CmdResult<ChannelJson> {
    let path = path.ok_or_else(|| invalid("pass --channel"))?;
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| invalid(format!("channel JSON: {e}")))
}

fn cmd_check(a: &CheckArgs) -> CmdResult<Outcome> {
    let value = match a.kind {
        CheckKind::Cptp => {
            let j = load_channel(a.channel.as_ref())?.to_choi()?;
            let (cp, min_eig) = is_cp(&j, a.tol);
            let (tp, tp_dev) = is_tp(&j, a.tol);
            json!({"cp": cp, "tp": tp, "cptp": cp && tp, "min_eigenvalue": min_eig, "tp_deviation": tp_dev})
        }
        CheckKind::Equivariance => {
            let t = load_channel(a.channel.as_ref())?.to_transfer()?;
            let problem = load_problem(&a.problem)?.build()?;
            let residual = verify_equivariance(&t, &problem, a.samples, a.seed)?;
            json!({"equivariant": residual <= a.tol.max(1e-8), "residual": residual})
        }
        CheckKind::Feasible => {
            let p = match (a.pool.as_deref(), a.x, a.y, a.z) {
                (Some(&[x, y, z]), ..) | (None, Some(x), Some(y), Some(z)) => PoolParams::new(x, y, z),
                _ => return Err(invalid("pass --pool x,y,z or --x, --y and --z")),
            };
            let proj = project_to_feasible(p)?;
            json!({
                "feasible": feasible_contains(p),
                "boundary_distance": feasible_boundary_distance(p)?,
                "projection": proj,
                "projection_distance": p.distance(proj),
            })
        }
    };
    let outputs = emit(&value, a.out.as_deref())?;
    Ok(("check", json!({"kind": a.kind, "tol": a.tol}), Some(a.seed), outputs))
}

fn cmd_count(a: &CountArgs) -> CmdResult<Outcome> {
    let spec = load_problem(&a.problem)?;
    let problem = spec.build()?;
    let unitary = count_parameters_unitary(&problem.r_in)?;
    let (din, dout) = (problem.in_dim(), problem.out_dim());
    let mut value = json!({"problem": spec.name, "unitary_commutant": unitary});
    if a.full || (din * dout).pow(2) <= CHANNEL_COUNT_LIMIT {
        let channel = count_parameters_channel(&problem.r_in, &problem.r_out)?;
        let unconstrained = din * din * dout * dout - din * din;
        value["sum_m2"] = json!(channel.sum_m2);
        value["tp_rank"] = json!(channel.tp_rank);
        value["net"] = json!(channel.net);
        value["unconstrained"] = json!(unconstrained);
        value["utilization"] = json!(unconstrained as f64 / channel.net as f64);
    }
    emit(&value, None)?;
    Ok(("count", json!({"problem": spec}), None, vec![]))
}

fn range_of(v: &[f64]) -> CmdResult<(f64, f64)> {
    match v {
        [lo, hi] if lo < hi => Ok((*lo, *hi)),
        _ => Err(invalid("range needs lo,hi with lo < hi")),
    }
}

fn write_dataset(d: &Dataset, path: &Path) -> CmdResult<()> {
    fs::write(path, serde_json::to_string(&d.to_json())? + "\n")?;
    Ok(())
}

fn cmd_dataset(a: &DatasetArgs, exec: Exec) -> CmdResult<Outcome> {
    let range = range_of(&a.range)?;
    let d = make_dataset(a.n, a.count, range, a.seed, a.policy.into(), exec)?;
    write_dataset(&d, &a.out)?;
    let config = json!({"n": a.n, "count": a.count, "range": range, "policy": DegeneratePolicy::from(a.policy)});
    Ok(("dataset", config, Some(a.seed), vec![a.out.clone()]))
}

fn experiment(a: &TrainArgs) -> CmdResult<Experiment> {
    let mut exp: Experiment = match &a.config {
        Some(c) => {
            let text = match presets::get(c) {
                Some(t) => t.to_string(),
                None => fs::read_to_string(c)?,
            };
            serde_json::from_str(&text).map_err(|e| invalid(format!("experiment config: {e}")))?
        }
        None => Experiment {
            name: String::new(),
            model: ModelSpec::Eqcnn { n: 7, reps: 8, pooling: PoolingKind::PartialTrace },
            train_size: 4,
            test_points: default_test_points(),
            range: default_range(),
            train: TrainConfig::default(),
        },
    };
    let n = a.n.unwrap_or(exp.model.n());
    let (mut reps, mut pooling) = match exp.model {
        ModelSpec::Eqcnn { reps, pooling, .. } => (reps, pooling),
        ModelSpec::Hea { .. } => (8, PoolingKind::PartialTrace),
    };
    reps = a.reps.unwrap_or(reps);
    if let Some(p) = a.pooling {
        pooling = match p {
            Pooling::Trace => PoolingKind::PartialTrace,
            Pooling::Parametric => PoolingKind::Parametric,
        };
    }
    let kind = a.model.unwrap_or(match exp.model {
        ModelSpec::Eqcnn { .. } => ModelKind::Eqcnn,
        ModelSpec::Hea { .. } => ModelKind::Hea,
    });
    exp.model = match kind {
        ModelKind::Eqcnn => ModelSpec::Eqcnn { n, reps, pooling },
        ModelKind::Hea => match (a.depth, exp.model) {
            (Some(depth), _) => ModelSpec::Hea { n, depth },
            (None, ModelSpec::Hea { depth, .. }) if a.n.is_none() && a.reps.is_none() => ModelSpec::Hea { n, depth },
            _ => {
                let target = ModelSpec::Eqcnn { n, reps, pooling: PoolingKind::PartialTrace }.build()?.n_params;
                ModelSpec::matched_hea(n, target)?
            }
        },
    };
    if let Some(v) = a.train_size {
        exp.train_size = v;
    }
    if let Some(v) = a.test_points {
        exp.test_points = v;
    }
    if let Some(v) = a.epochs {
        exp.train.epochs = v;
    }
    if let Some(v) = a.lr {
        exp.train.adam.lr = v;
    }
    if let Some(v) = a.seed {
        exp.train.seed = v;
    }
    exp.train.validate()?;
    Ok(exp)
}

/// Seed of the test sweep, kept apart from the training seed.
const TEST_SEED: u64 = 0x7e57;

fn cmd_train(a: &TrainArgs, exec: Exec) -> CmdResult<Outcome> {
    let exp = experiment(a)?;
    let model = exp.model.build()?;
    let n = exp.model.n();
    let seed = exp.train.seed;
    let data = match &a.data {
        Some(p) => Dataset::from_json(&serde_json::from_str(&fs::read_to_string(p)?)?)?,
        None => make_dataset(n, exp.train_size, exp.range, seed, DegeneratePolicy::RandomInSpace, exec)?,
    };
    if data.n != n {
        return Err(invalid(format!("dataset has {} qubits, model has {n}", data.n)));
    }
    let (trained, metrics) = train(&model, &data, &exp.train, exec)?;
    let test = if exp.test_points > 0 {
        let d = make_dataset(n, exp.test_points, exp.range, TEST_SEED, DegeneratePolicy::RandomInSpace, exec)?;
        Some(evaluate(&trained, &d, exec)?)
    } else {
        None
    };
    let value = json!({
        "experiment": exp,
        "n_params": model.n_params,
        "initial_loss": metrics.initial_loss,
        "loss": metrics.loss,
        "train_accuracy": metrics.train_accuracy,
        "tau": metrics.tau,
        "final_loss": metrics.loss.last(),
        "final_train_accuracy": metrics.train_accuracy.last(),
        "threshold": trained.tau,
        "test_accuracy": test.as_ref().map(|t| t.accuracy),
    });
    let mut outputs = emit(&value, Some(&a.out))?;
    if let Some(p) = &a.model_out {
        fs::write(p, serde_json::to_string_pretty(&trained)? + "\n")?;
        outputs.push(p.clone());
    }
    Ok(("train", serde_json::to_value(&exp)?, Some(seed), outputs))
}

fn cmd_phase(a: &PhaseArgs, exec: Exec) -> CmdResult<Outcome> {
    let trained: TrainedModel = serde_json::from_str(&fs::read_to_string(&a.model_file)?)
        .map_err(|e| invalid(format!("model file: {e}")))?;
    let range = range_of(&a.range)?;
    let data = make_dataset(trained.spec.n(), a.points, range, a.seed, DegeneratePolicy::RandomInSpace, exec)?;
    let ev = evaluate(&trained, &data, exec)?;
    let mut csv = String::from("alpha,f,predicted,threshold\n");
    for p in &ev.points {
        csv.push_str(&format!("{},{},{},{}\n", p.alpha, p.f, p.predicted, ev.threshold));
    }
    fs::write(&a.out, csv)?;
    let config = json!({"model": trained.spec, "points": a.points, "range": range});
    Ok(("phase-diagram", config, Some(a.seed), vec![a.out.clone()]))
}

fn cmd_presets(name: Option<&str>) -> CmdResult<()> {
    match name {
        None => {
            for n in presets::NAMES {
                println!("{n}");
            }
        }
        Some(n) => print!("{}", presets::get(n).ok_or_else(|| invalid(format!("unknown preset {n:?}")))?),
    }
    Ok(())
}

fn sha256_file(p: &Path) -> CmdResult<String> {
    Ok(hex::encode(Sha256::digest(fs::read(p)?)))
}

fn write_manifest(
    first: &Path,
    command: &str,
    argv: &[String],
    config: Value,
    seed: Option<u64>,
    wall: f64,
    outputs: &[PathBuf],
) -> CmdResult<()> {
    let digests = outputs
        .iter()
        .map(|p| Ok(json!({"path": p.display().to_string(), "sha256": sha256_file(p)?})))
        .collect::<CmdResult<Vec<_>>>()?;
    let manifest = json!({
        "command": command,
        "argv": argv,
        "config": config,
        "seed": seed,
        "version": env!("CARGO_PKG_VERSION"),
        "wall_time_s": wall,
        "outputs": digests,
    });
    let mut path = first.as_os_str().to_owned();
    path.push(".manifest.json");
    fs::write(PathBuf::from(path), serde_json::to_string_pretty(&manifest)? + "\n")?;
    Ok(())
}
