use std::fs;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use blocksketch::experiment::{run_design, run_recovery_study, Design, ExperimentSpec, RecoveryStudySpec};
use blocksketch::recovery::{
    mre_curve, mre_to_csv, parse_grid, random_block_sparse_signal, recover_with_truth,
    MeasurementMatrix, MreSettings, RecoveryConfig,
};
use blocksketch::{
    estimate_block_sparsity, sketch_pair, to_real_block, ComplexBlockSignal, EstimateRecord, Error,
    IsotropicStable, NoiseFamily, NoiseModel, Result, RngStream, StableLawParams,
};

#[derive(Parser)]
#[command(name = "blocksketch", version, about = "Block-sparsity estimation and block CoSaMP experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the block sparsity of a signal CSV (file or stdin).
    Estimate(EstimateArgs),
    /// Run a named simulation design.
    Simulate(SimulateArgs),
    /// One CoSaMP recovery of a random block-sparse signal.
    Recover(RecoverArgs),
    /// MRE sensitivity curve over a grid of block-sparsity inputs.
    Mre(MreArgs),
    /// Dump isotropic stable draws, one vector per row.
    SampleDebug(SampleArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct EstimateArgs {
    /// Signal CSV; reads stdin when omitted.
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 2.0)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    #[arg(long, default_value_t = 0.0)]
    sigma: f64,
    #[arg(long, default_value = "gaussian")]
    family: NoiseFamily,
    #[arg(long, default_value_t = 1000)]
    m1: usize,
    #[arg(long, default_value_t = 1000)]
    malpha: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 0.05)]
    beta: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    design: Design,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    /// Comma-separated noise levels.
    #[arg(long, value_delimiter = ',')]
    sigma: Option<Vec<f64>>,
    #[arg(long)]
    m1: Option<usize>,
    #[arg(long)]
    malpha: Option<usize>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Signal length N.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    /// Comma-separated block sparsities.
    #[arg(long, value_delimiter = ',')]
    k: Option<Vec<usize>>,
    /// Measurement rows (recovery designs).
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    /// Grid `lo:hi:step` or `a,b,c` (recovery designs).
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct RecoverArgs {
    #[arg(long, default_value_t = 300)]
    n: usize,
    #[arg(long, default_value_t = 4)]
    d: usize,
    /// True block sparsity.
    #[arg(long, default_value_t = 12)]
    k: usize,
    /// Block sparsity handed to CoSaMP (defaults to the true one).
    #[arg(long)]
    k_in: Option<usize>,
    #[arg(long, default_value_t = 120)]
    m: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct MreArgs {
    #[arg(long, default_value_t = 300)]
    n: usize,
    #[arg(long, default_value_t = 4)]
    d: usize,
    #[arg(long, default_value_t = 12)]
    k: usize,
    #[arg(long, default_value_t = 120)]
    m: usize,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value = "1:75:1")]
    grid: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Curve CSV; a `<out>.seeds.json` sidecar is written next to it.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    #[arg(long, default_value_t = 1)]
    dim: usize,
    #[arg(long, default_value_t = 1000)]
    count: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    let written = match out {
        Some(path) => fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    };
    written.map_err(|e| Error::InvalidInput(format!("cannot write output: {e}")))
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| Error::Format(e.to_string()))
}

fn estimate(args: EstimateArgs) -> Result<()> {
    let signal = match &args.input {
        Some(path) => {
            let file = fs::File::open(path)
                .map_err(|e| Error::InvalidInput(format!("cannot open {}: {e}", path.display())))?;
            ComplexBlockSignal::from_csv(BufReader::new(file))?
        }
        None => ComplexBlockSignal::from_csv(io::stdin().lock())?,
    };
    let noise = NoiseModel::new(args.sigma, args.family)?;
    let rng = RngStream::new(args.seed, 0);
    let meas = sketch_pair(&to_real_block(&signal), args.alpha, args.gamma, args.m1, args.malpha, noise, &rng)?;
    let est = estimate_block_sparsity(&meas, args.beta)?;
    emit(args.out.as_deref(), &to_json(&EstimateRecord::new(&est, &meas))?)
}

fn simulate(args: SimulateArgs) -> Result<()> {
    if args.design.is_estimation() {
        let mut spec = ExperimentSpec::for_design(args.design);
        spec.alpha = args.alpha.unwrap_or(spec.alpha);
        spec.gamma = args.gamma.unwrap_or(spec.gamma);
        spec.sigma = args.sigma.unwrap_or(spec.sigma);
        spec.m1 = args.m1.unwrap_or(spec.m1);
        spec.m_alpha = args.malpha.unwrap_or(spec.m_alpha);
        spec.replications = args.reps.unwrap_or(spec.replications);
        spec.seed = args.seed.unwrap_or(spec.seed);
        spec.beta = args.beta.unwrap_or(spec.beta);
        spec.len = args.n.unwrap_or(spec.len);
        spec.block_size = args.d.unwrap_or(spec.block_size);
        spec.block_sparsity = args.k.unwrap_or(spec.block_sparsity);
        let report = run_design(&spec)?;
        for cell in &report.cells {
            let s = &cell.summary;
            eprintln!(
                "k={} sigma={} truth={:.4} mean={:.4} coverage={:.3} ks_p={} rel_err={:.4}",
                s.block_sparsity,
                s.sigma,
                s.truth,
                s.mean_k_hat,
                s.coverage,
                s.ks.map(|k| format!("{:.4}", k.p_value)).unwrap_or_else(|| "-".into()),
                s.relative_error
            );
        }
        let text = match args.format {
            Format::Csv => report.records_csv(),
            Format::Json => report.summary_json()? + "\n",
        };
        return emit(args.out.as_deref(), &text);
    }

    let mut spec = RecoveryStudySpec::default();
    spec.len = args.n.unwrap_or(spec.len);
    spec.block_size = args.d.unwrap_or(spec.block_size);
    if let Some(k) = args.k {
        spec.block_sparsity = *k.first().ok_or_else(|| Error::InvalidInput("empty --k".into()))?;
    }
    spec.rows = args.m.unwrap_or(spec.rows);
    spec.trials = args.trials.unwrap_or(spec.trials);
    if let Some(grid) = &args.grid {
        spec.k_grid = parse_grid(grid)?;
    }
    spec.seed = args.seed.unwrap_or(spec.seed);
    spec.handoff_alpha = args.alpha.unwrap_or(spec.handoff_alpha);
    spec.handoff_gamma = args.gamma.unwrap_or(spec.handoff_gamma);
    spec.handoff_m1 = args.m1.unwrap_or(spec.handoff_m1);
    spec.handoff_m_alpha = args.malpha.unwrap_or(spec.handoff_m_alpha);
    spec.handoff_replications = args.reps.unwrap_or(spec.handoff_replications);
    let study = run_recovery_study(&spec)?;
    if let Some(h) = &study.handoff {
        eprintln!("handoff: alpha={} truth={:.4} mean estimate={:.4}", h.alpha, h.truth, h.mean_k_hat);
    }
    match args.format {
        Format::Csv => {
            emit(args.out.as_deref(), &mre_to_csv(&study.curve))?;
            if let Some(out) = &args.out {
                write_sibling(out, "reconstructions.csv", &study.reconstructions_csv())?;
                write_sibling(out, "seeds.json", &study.sidecar_json()?)?;
            }
            Ok(())
        }
        Format::Json => emit(args.out.as_deref(), &(study.sidecar_json()? + "\n")),
    }
}

fn write_sibling(out: &Path, suffix: &str, text: &str) -> Result<()> {
    let mut name = out.as_os_str().to_owned();
    name.push(format!(".{suffix}"));
    emit(Some(Path::new(&name)), text)
}

fn recover(args: RecoverArgs) -> Result<()> {
    let base = RngStream::new(args.seed, 0);
    let truth = random_block_sparse_signal(args.n, args.d, args.k, &mut base.fork(1))?;
    let a = MeasurementMatrix::gaussian(args.m, args.n, &mut base.fork(2))?;
    let k_in = args.k_in.unwrap_or(args.k);
    let result = recover_with_truth(&truth, &a, &RecoveryConfig::new(args.d, k_in))?;
    let text = match args.format {
        Format::Json => to_json(&serde_json::json!({
            "spec_version": blocksketch::estimate::SCHEMA_VERSION,
            "k_in": k_in,
            "relative_error": result.relative_error,
            "relative_residual": result.relative_residual,
            "iterations": result.iterations,
            "stop": result.stop,
        }))?,
        Format::Csv => {
            let mut s = String::from("index,truth_re,truth_im,x_hat_re,x_hat_im\n");
            for (i, (t, x)) in truth.entries().iter().zip(result.x_hat.entries()).enumerate() {
                s.push_str(&format!("{i},{},{},{},{}\n", t.re, t.im, x.re, x.im));
            }
            s
        }
    };
    emit(args.out.as_deref(), &text)
}

fn mre(args: MreArgs) -> Result<()> {
    let spec = RecoveryStudySpec {
        len: args.n,
        block_size: args.d,
        block_sparsity: args.k,
        rows: args.m,
        trials: args.trials,
        k_grid: parse_grid(&args.grid)?,
        seed: args.seed,
        ..RecoveryStudySpec::default()
    };
    let truth = spec.truth()?;
    let pool = blocksketch::experiment::worker_pool()?;
    let curve = pool.install(|| {
        mre_curve(&truth, MreSettings::new(spec.rows, spec.trials), &spec.k_grid, &spec.matrix_stream())
    })?;
    emit(args.out.as_deref(), &mre_to_csv(&curve))?;
    if let Some(out) = &args.out {
        let signal = spec.signal_stream();
        let matrices = spec.matrix_stream();
        let sidecar = serde_json::json!({
            "spec_version": blocksketch::estimate::SCHEMA_VERSION,
            "study": spec,
            "signal_stream": { "seed": signal.seed(), "stream_id": signal.stream_id() },
            "matrix_stream": { "seed": matrices.seed(), "stream_id": matrices.stream_id(),
                               "trial_fork": "trial index" },
        });
        write_sibling(out, "seeds.json", &to_json(&sidecar)?)?;
    }
    Ok(())
}

fn sample_debug(args: SampleArgs) -> Result<()> {
    let law = IsotropicStable::new(StableLawParams::new(args.dim, args.alpha, args.gamma)?);
    let mut rng = RngStream::new(args.seed, 0);
    let header: Vec<String> = (0..args.dim).map(|i| format!("v{i}")).collect();
    let mut text = format!("# alpha={} gamma={} seed={}\n{}\n", args.alpha, args.gamma, args.seed, header.join(","));
    for _ in 0..args.count {
        let row: Vec<String> = law.sample(&mut rng).iter().map(f64::to_string).collect();
        text.push_str(&row.join(","));
        text.push('\n');
    }
    emit(args.out.as_deref(), &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Estimate(a) => estimate(a),
        Command::Simulate(a) => simulate(a),
        Command::Recover(a) => recover(a),
        Command::Mre(a) => mre(a),
        Command::SampleDebug(a) => sample_debug(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Numerical(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
