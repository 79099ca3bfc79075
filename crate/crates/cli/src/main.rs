//! `lapconc`: command-line driver for the Laplacian concentration experiments.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lapconc::error::{Error, Result};
use lapconc::graphs::{sample_uniforms, threshold};
use lapconc::harness::{
    histogram_csv, run, spectrum_histogram, write_outputs, ExperimentConfig, ExperimentKind,
};
use lapconc::par;
use lapconc::spectra::{eigvals_sym, regularized_laplacian, spectrum_csv};

#[derive(Parser)]
#[command(
    name = "lapconc",
    version,
    about = "Concentration experiments for regularized graph Laplacians"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample one graph and emit its edge list.
    Gen(Common),
    /// Eigenvalues (and optionally a histogram) of L(A_tau) for one sampled graph.
    Spectrum(Common),
    /// Per-trial deviation metrics over a tau grid.
    Deviation(Common),
    /// Deviation metrics over a p grid sharing one uniform matrix per trial.
    Sweep(Common),
    /// Two-community spectral recovery.
    Sbm(Common),
    /// Tabulate the deterministic concentration bounds.
    Bounds(Common),
    /// Median norm gap of the unregularized Laplacian over an n grid.
    Normgap(Common),
    /// Spectrum histograms of L(A_tau) for the inhomogeneous profile.
    #[command(name = "repro-fig1")]
    ReproFig1(Common),
}

/// Flags shared by every subcommand. Values override the `--config` file.
#[derive(Args, Clone, Default)]
struct Common {
    /// Flat `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    b: Option<String>,
    #[arg(long)]
    tau: Option<String>,
    /// Comma-separated tau values.
    #[arg(long)]
    tau_grid: Option<String>,
    /// Comma-separated p values.
    #[arg(long)]
    p_grid: Option<String>,
    /// Comma-separated vertex counts (normgap).
    #[arg(long)]
    n_grid: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    r: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    beta: Option<String>,
    /// Absolute constant of the bounds.
    #[arg(long)]
    c: Option<String>,
    /// Recovery threshold constant to compare (a-b)^2/(a+b) against.
    #[arg(long)]
    c_eps: Option<String>,
    /// homogeneous, sbm or profile.
    #[arg(long)]
    model: Option<String>,
    /// Comma-separated metric names, `all` or `laplacian`.
    #[arg(long)]
    metrics: Option<String>,
    #[arg(long)]
    quantile: Option<String>,
    #[arg(long)]
    bins: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    out: Option<String>,
    /// Worker threads (0 = all cores).
    #[arg(long)]
    threads: Option<String>,
}

impl Common {
    fn overrides(&self) -> Vec<(&'static str, &String)> {
        let pairs = [
            ("n", &self.n),
            ("p", &self.p),
            ("a", &self.a),
            ("b", &self.b),
            ("tau", &self.tau),
            ("tau_grid", &self.tau_grid),
            ("p_grid", &self.p_grid),
            ("n_grid", &self.n_grid),
            ("trials", &self.trials),
            ("r", &self.r),
            ("alpha", &self.alpha),
            ("beta", &self.beta),
            ("c", &self.c),
            ("c_eps", &self.c_eps),
            ("model", &self.model),
            ("metrics", &self.metrics),
            ("quantile", &self.quantile),
            ("bins", &self.bins),
            ("seed", &self.seed),
            ("out", &self.out),
            ("threads", &self.threads),
        ];
        pairs
            .into_iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k, v)))
            .collect()
    }

    /// Defaults for `kind`, then the config file, then the flags.
    fn resolve(&self, kind: ExperimentKind) -> Result<ExperimentConfig> {
        let mut config = ExperimentConfig::new(kind);
        if let Some(path) = &self.config {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            config.apply_text(&text)?;
            if config.kind != kind {
                return Err(Error::Config(format!(
                    "{} describes a {} experiment, not {kind}",
                    path.display(),
                    config.kind
                )));
            }
        }
        for (key, value) in self.overrides() {
            config.set(key, value)?;
        }
        Ok(config)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// 3 for numeric failures, 2 for everything a user can fix in the input.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Numeric(_) | Error::ZeroDegree { .. } | Error::DegenerateGap { .. } => 3,
        _ => 2,
    }
}

fn dispatch(command: Command) -> Result<()> {
    let (kind, flags) = match command {
        Command::Gen(f) => return gen(&f),
        Command::Spectrum(f) => return spectrum(&f),
        Command::Deviation(f) => (ExperimentKind::Deviation, f),
        Command::Sweep(f) => (ExperimentKind::Sweep, f),
        Command::Sbm(f) => (ExperimentKind::Sbm, f),
        Command::Bounds(f) => (ExperimentKind::Bounds, f),
        Command::Normgap(f) => (ExperimentKind::NormGap, f),
        Command::ReproFig1(f) => (ExperimentKind::Fig1, f),
    };
    let config = flags.resolve(kind)?;
    let output = run(&config)?;
    for note in &output.notes {
        eprintln!("{note}");
    }
    match &config.out {
        Some(path) => {
            for written in write_outputs(&output, path)? {
                eprintln!("wrote {}", written.display());
            }
        }
        None => print!("{}", output.raw_csv),
    }
    Ok(())
}

/// Config for the single-graph subcommands: a seed and a model are required.
fn single_graph(flags: &Common) -> Result<ExperimentConfig> {
    let config = flags.resolve(ExperimentKind::Deviation)?;
    if config.seed.is_none() {
        return Err(Error::Config(
            "a seed is required (use --seed or seed = ...)".into(),
        ));
    }
    Ok(config)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => Ok(fs::write(path, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn gen(flags: &Common) -> Result<()> {
    let config = single_graph(flags)?;
    let model = config.model()?;
    let n = model.n();
    let a = threshold(
        &sample_uniforms(n, config.seed.unwrap_or_default())?,
        &model,
    )?;
    emit(config.out.as_deref(), &a.to_edge_list())
}

fn spectrum(flags: &Common) -> Result<()> {
    let config = single_graph(flags)?;
    if config.tau_grid.len() > 1 {
        return Err(Error::Config("spectrum takes a single tau".into()));
    }
    let tau = config.tau_grid.first().copied().unwrap_or(0.0);
    let model = config.model()?;
    let seed = config.seed.unwrap_or_default();
    let values = par::with_threads(config.threads, || -> Result<Vec<f64>> {
        let a = threshold(&sample_uniforms(model.n(), seed)?, &model)?.to_matrix();
        eigvals_sym(&regularized_laplacian(&a, tau)?.laplacian)
    })??;
    emit(config.out.as_deref(), &spectrum_csv(&values))?;
    if flags.bins.is_some() {
        let bins = spectrum_histogram(&values, config.bins, config.hist_lo, config.hist_hi)?;
        let hist = histogram_csv(&bins);
        match &config.out {
            Some(path) => fs::write(path.with_extension("hist.csv"), hist)?,
            None => print!("{hist}"),
        }
    }
    Ok(())
}
