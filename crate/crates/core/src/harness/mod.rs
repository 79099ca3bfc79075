//! Seeded Monte Carlo experiments and their CSV outputs.
//!
//! Trial `t` of an experiment with master seed `s` draws its graph from
//! [`trial_seed`]`(s, t)`. Trials are mapped through [`crate::par`], and rows
//! are assembled in trial order, so the raw CSV is byte-identical for any
//! worker count.

mod config;
mod stats;

use std::fs;
use std::path::{Path, PathBuf};

pub use config::{ExperimentConfig, ExperimentKind, ModelChoice};
pub use stats::{histogram_csv, loglog_slope, spectrum_histogram, HistogramBin, SummaryStats};

use crate::clustering::recover;
use crate::concentration::{
    bound_new, bound_old, bound_tau_independent, deviation_laplacian, sweep, BoundParams,
    DeviationRecord, SweepFamily,
};
use crate::csv::{fmt_f64, parse_f64};
use crate::error::{Error, Result};
use crate::graphs::{sample_uniforms, threshold, ModelKind, ProbMatrix};
use crate::par;
use crate::rng::{mix64, trial_seed};
use crate::spectra::{eigvals_sym, regularized_laplacian};

/// Column order of every per-graph metrics table.
pub const DEVIATION_HEADER: &str =
    "seed,n,tau,p,dev_L,dev_B1,dev_B2,dev_A,deg_sq,deg_max,deg_l2,sum_reg_sq,norm_gap,v0_align,top_overlap";
pub const SBM_HEADER: &str =
    "seed,n,a,b,tau,misclassification,alignment,delta,dk_bound,threshold_ratio,dev_L";
pub const FIG1_HEADER: &str = "seed,n,tau,mean,std,min,max";
pub const BOUNDS_HEADER: &str = "tau,p,d,bound_new,bound_old,ratio,bound_tau_independent";

/// Everything an experiment produces.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub raw_csv: String,
    /// Empty for experiments without trials.
    pub summary_csv: String,
    /// Additional named files (histograms, JSON reports).
    pub files: Vec<(String, String)>,
    /// Derived one-line results worth printing.
    pub notes: Vec<String>,
}

/// Runs an experiment in memory.
pub fn run(config: &ExperimentConfig) -> Result<RunOutput> {
    config.validate()?;
    par::with_threads(config.threads, || match config.kind {
        ExperimentKind::Deviation => run_deviation(config),
        ExperimentKind::Sweep => run_sweep(config),
        ExperimentKind::NormGap => run_normgap(config),
        ExperimentKind::Sbm => run_sbm(config),
        ExperimentKind::Fig1 => run_fig1(config),
        ExperimentKind::Bounds => run_bounds(config),
    })?
}

/// Writes the raw table to `path`, the summary next to it as
/// `<stem>.summary.csv` and each extra file as `<stem>.<name>`.
pub fn write_outputs(output: &RunOutput, path: &Path) -> Result<Vec<PathBuf>> {
    let mut written = vec![path.to_path_buf()];
    fs::write(path, &output.raw_csv)?;
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("out")
        .to_string();
    let sibling = |name: &str| path.with_file_name(format!("{stem}.{name}"));
    if !output.summary_csv.is_empty() {
        let p = sibling("summary.csv");
        fs::write(&p, &output.summary_csv)?;
        written.push(p);
    }
    for (name, content) in &output.files {
        let p = sibling(name);
        fs::write(&p, content)?;
        written.push(p);
    }
    Ok(written)
}

fn master_seed(config: &ExperimentConfig) -> Result<u64> {
    config
        .seed
        .ok_or_else(|| Error::Config("a seed is required".into()))
}

fn n_of(config: &ExperimentConfig) -> Result<usize> {
    config.n.ok_or_else(|| Error::Config("n is not set".into()))
}

/// The `p` column for a model: `p` itself when homogeneous, else `max p_ij`.
fn p_column(model: &ProbMatrix) -> f64 {
    match model.kind() {
        ModelKind::Homogeneous { p } => *p,
        _ => model.max_p(),
    }
}

fn deviation_row(seed: &str, n: usize, tau: f64, p: f64, rec: &DeviationRecord) -> String {
    let mut row = format!("{seed},{n},{},{}", fmt_f64(tau), fmt_f64(p));
    for v in rec.values() {
        row.push(',');
        row.push_str(&fmt_f64(v));
    }
    row.push('\n');
    row
}

fn assemble(header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for r in rows {
        out.push_str(&r);
    }
    out
}

fn run_deviation(config: &ExperimentConfig) -> Result<RunOutput> {
    let master = master_seed(config)?;
    let n = n_of(config)?;
    let model = config.model()?;
    let p = p_column(&model);
    let per_trial = par::try_map_indexed(config.trials, |t| {
        let seed = trial_seed(master, t as u64);
        let a = threshold(&sample_uniforms(n, seed)?, &model)?;
        let mut rows = String::new();
        for &tau in &config.tau_grid {
            let rec = deviation_laplacian(&a, &model, tau, config.metrics)?;
            rows.push_str(&deviation_row(&seed.to_string(), n, tau, p, &rec));
        }
        Ok(rows)
    })?;
    let raw = assemble(DEVIATION_HEADER, per_trial);
    Ok(RunOutput {
        summary_csv: summarize_csv(&raw, &["n", "tau", "p"], &["seed"], config.quantile)?,
        raw_csv: raw,
        files: Vec::new(),
        notes: Vec::new(),
    })
}

fn run_sweep(config: &ExperimentConfig) -> Result<RunOutput> {
    let master = master_seed(config)?;
    let n = n_of(config)?;
    let grid = config.sweep_grid()?;
    let tau = config.sweep_tau();
    // The grid supplies p, so a homogeneous sweep needs no model parameters.
    let family = match config.model {
        ModelChoice::Homogeneous => SweepFamily::Homogeneous,
        ModelChoice::Sbm => match config.model()?.kind() {
            ModelKind::Sbm { a, b } if *a > 0.0 => SweepFamily::Sbm { ratio: b / a },
            _ => return Err(Error::Config("an SBM sweep needs a > 0".into())),
        },
        ModelChoice::Profile => {
            return Err(Error::Config(
                "sweeps need a homogeneous or two-block model".into(),
            ))
        }
    };
    let per_trial = par::try_map_indexed(config.trials, |t| {
        let seed = trial_seed(master, t as u64);
        let res = sweep(
            &sample_uniforms(n, seed)?,
            family,
            &grid,
            tau,
            config.metrics,
        )?;
        let mut rows = String::new();
        for (p, rec) in res.grid.iter().zip(&res.records) {
            rows.push_str(&deviation_row(&seed.to_string(), n, tau, *p, rec));
        }
        rows.push_str(&deviation_row(
            &format!("sup_{seed}"),
            n,
            tau,
            -1.0,
            &res.sup,
        ));
        Ok(rows)
    })?;
    let raw = assemble(DEVIATION_HEADER, per_trial);
    Ok(RunOutput {
        summary_csv: summarize_csv(&raw, &["n", "tau", "p"], &["seed"], config.quantile)?,
        raw_csv: raw,
        files: Vec::new(),
        notes: Vec::new(),
    })
}

fn run_normgap(config: &ExperimentConfig) -> Result<RunOutput> {
    let master = master_seed(config)?;
    let p = config
        .p
        .ok_or_else(|| Error::Config("normgap needs p".into()))?;
    let ns: Vec<usize> = if config.n_grid.is_empty() {
        vec![n_of(config)?]
    } else {
        config.n_grid.clone()
    };
    let trials = config.trials;
    let per_task = par::try_map_indexed(ns.len() * trials, |task| {
        let (n, t) = (ns[task / trials], task % trials);
        let seed = trial_seed(master.wrapping_add(mix64(n as u64)), t as u64);
        let model = ProbMatrix::homogeneous(n, p)?;
        let a = threshold(&sample_uniforms(n, seed)?, &model)?;
        let mut rows = String::new();
        for &tau in &config.tau_grid {
            let rec = deviation_laplacian(&a, &model, tau, config.metrics)?;
            rows.push_str(&deviation_row(&seed.to_string(), n, tau, p, &rec));
        }
        Ok(rows)
    })?;
    let raw = assemble(DEVIATION_HEADER, per_task);
    let summary = summarize_csv(&raw, &["n", "tau", "p"], &["seed"], config.quantile)?;

    let mut notes = Vec::new();
    if ns.len() >= 2 && config.metrics.norm_gap {
        let cells = summary_cells(&summary, "norm_gap")?;
        let tau0: Vec<&(Vec<String>, SummaryStats)> = cells
            .iter()
            .filter(|(k, _)| k[1] == cells[0].0[1])
            .collect();
        let xs: Vec<f64> = tau0
            .iter()
            .map(|(k, _)| k[0].parse::<f64>().unwrap_or(f64::NAN) * p)
            .collect();
        let ys: Vec<f64> = tau0.iter().map(|(_, s)| s.median).collect();
        if let Ok(slope) = loglog_slope(&xs, &ys) {
            notes.push(format!(
                "loglog slope of median norm_gap against np: {slope:.6}"
            ));
        }
    }
    Ok(RunOutput {
        raw_csv: raw,
        summary_csv: summary,
        files: Vec::new(),
        notes,
    })
}

fn run_sbm(config: &ExperimentConfig) -> Result<RunOutput> {
    let master = master_seed(config)?;
    let n = n_of(config)?;
    let model = config.model()?;
    let tau = config.tau_grid.first().copied();
    let per_trial = par::try_map_indexed(config.trials, |t| {
        let seed = trial_seed(master, t as u64);
        let a = threshold(&sample_uniforms(n, seed)?, &model)?;
        let report = recover(&a, &model, tau, config.c_eps)?;
        if !report.davis_kahan_holds() {
            return Err(Error::Numeric(format!(
                "Davis-Kahan violated in trial {t}: alignment {} > 2||dL||/delta = {}",
                report.alignment, report.dk_bound
            )));
        }
        let row = format!(
            "{seed},{},{},{},{},{},{},{},{},{},{}\n",
            report.n,
            fmt_f64(report.a),
            fmt_f64(report.b),
            fmt_f64(report.tau),
            fmt_f64(report.misclassification),
            fmt_f64(report.alignment),
            fmt_f64(report.delta),
            fmt_f64(report.dk_bound),
            fmt_f64(report.threshold_ratio),
            fmt_f64(report.dev_l),
        );
        Ok((row, report.to_json()?))
    })?;
    let (rows, reports): (Vec<String>, Vec<String>) = per_trial.into_iter().unzip();
    let raw = assemble(SBM_HEADER, rows);
    let mut jsonl = reports.join("\n");
    jsonl.push('\n');
    let mut notes = Vec::new();
    if let (Some(c), ModelKind::Sbm { a, b }) = (config.c_eps, model.kind()) {
        let ratio = if a + b > 0.0 {
            (a - b) * (a - b) / (a + b)
        } else {
            0.0
        };
        let verdict = if ratio > c { "met" } else { "not met" };
        notes.push(format!(
            "(a-b)^2/(a+b) = {ratio:.6} vs C_eps = {c}: threshold {verdict}"
        ));
    }
    Ok(RunOutput {
        summary_csv: summarize_csv(&raw, &["n", "a", "b"], &["seed"], config.quantile)?,
        raw_csv: raw,
        files: vec![("reports.jsonl".into(), jsonl)],
        notes,
    })
}

/// Population mean and standard deviation.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let m = values.len() as f64;
    let mean = values.iter().sum::<f64>() / m;
    let var = values.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / m;
    (mean, var.sqrt())
}

fn run_fig1(config: &ExperimentConfig) -> Result<RunOutput> {
    let master = master_seed(config)?;
    let n = n_of(config)?;
    let model = config.model()?;
    let taus = &config.tau_grid;
    let per_trial = par::try_map_indexed(config.trials, |t| {
        let seed = trial_seed(master, t as u64);
        let a = threshold(&sample_uniforms(n, seed)?, &model)?.to_matrix();
        taus.iter()
            .map(|&tau| {
                let vals = eigvals_sym(&regularized_laplacian(&a, tau)?.laplacian)?;
                Ok((seed, tau, vals))
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let mut rows = Vec::new();
    let mut pooled: Vec<Vec<f64>> = vec![Vec::new(); taus.len()];
    for trial in &per_trial {
        for (k, (seed, tau, vals)) in trial.iter().enumerate() {
            let (mean, std) = mean_std(vals);
            rows.push(format!(
                "{seed},{n},{},{},{},{},{}\n",
                fmt_f64(*tau),
                fmt_f64(mean),
                fmt_f64(std),
                fmt_f64(vals[0]),
                fmt_f64(vals[vals.len() - 1])
            ));
            pooled[k].extend_from_slice(vals);
        }
    }
    let mut files = Vec::new();
    let mut notes = Vec::new();
    for (tau, vals) in taus.iter().zip(&pooled) {
        let bins = spectrum_histogram(vals, config.bins, config.hist_lo, config.hist_hi)?;
        files.push((format!("hist_tau_{tau}.csv"), histogram_csv(&bins)));
        let (_, std) = mean_std(vals);
        notes.push(format!(
            "tau = {tau}: eigenvalue standard deviation {std:.6}"
        ));
    }
    let raw = assemble(FIG1_HEADER, rows);
    Ok(RunOutput {
        summary_csv: summarize_csv(&raw, &["n", "tau"], &["seed"], config.quantile)?,
        raw_csv: raw,
        files,
        notes,
    })
}

fn run_bounds(config: &ExperimentConfig) -> Result<RunOutput> {
    let n = n_of(config)?;
    let base = BoundParams {
        c: config.c,
        r: config.r,
        tau: 0.0,
        d: 0.0,
        n,
        alpha: config.alpha,
        beta: config.beta,
    };
    // (p, d) pairs: homogeneous models sweep p, other models have a fixed d.
    let pd: Vec<(f64, f64)> = match config.model {
        ModelChoice::Homogeneous => {
            let ps = if config.p_grid.is_empty() {
                vec![config
                    .p
                    .ok_or_else(|| Error::Config("bounds needs p or p_grid".into()))?]
            } else {
                config.p_grid.clone()
            };
            ps.into_iter().map(|p| (p, n as f64 * p)).collect()
        }
        _ => {
            let model = config.model()?;
            vec![(model.max_p(), model.max_expected_degree_scale())]
        }
    };
    let mut rows = Vec::new();
    for &tau in &config.tau_grid {
        for &(p, d) in &pd {
            let bp = BoundParams { tau, d, ..base };
            let new = bound_new(&bp)?;
            let old = bound_old(&bp)?;
            let indep = bound_tau_independent(&bp, p)?;
            rows.push(format!(
                "{},{},{},{},{},{},{}\n",
                fmt_f64(tau),
                fmt_f64(p),
                fmt_f64(d),
                fmt_f64(new),
                fmt_f64(old),
                fmt_f64(old / new),
                fmt_f64(indep)
            ));
        }
    }
    Ok(RunOutput {
        raw_csv: assemble(BOUNDS_HEADER, rows),
        summary_csv: String::new(),
        files: Vec::new(),
        notes: Vec::new(),
    })
}

/// Per-cell summaries recomputed from a raw CSV table.
///
/// Rows are grouped by the `keys` columns (cells in order of first
/// appearance); every other column not listed in `skip` is a metric. `NaN`
/// entries are left out, and metrics with no finite value are omitted.
pub fn summarize_csv(raw: &str, keys: &[&str], skip: &[&str], q: f64) -> Result<String> {
    let mut lines = raw.lines();
    let header: Vec<&str> = lines
        .next()
        .ok_or_else(|| Error::InvalidParameter("empty table".into()))?
        .split(',')
        .collect();
    let col = |name: &str| {
        header
            .iter()
            .position(|h| *h == name)
            .ok_or_else(|| Error::InvalidParameter(format!("missing column {name}")))
    };
    let key_idx: Vec<usize> = keys.iter().map(|k| col(k)).collect::<Result<_>>()?;
    let skip_idx: Vec<usize> = skip.iter().map(|k| col(k)).collect::<Result<_>>()?;
    let metric_idx: Vec<usize> = (0..header.len())
        .filter(|i| !key_idx.contains(i) && !skip_idx.contains(i))
        .collect();

    let mut cells: Vec<(Vec<String>, Vec<Vec<f64>>)> = Vec::new();
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != header.len() {
            return Err(Error::InvalidParameter(format!("ragged row {line:?}")));
        }
        let key: Vec<String> = key_idx.iter().map(|&i| fields[i].to_string()).collect();
        let pos = match cells.iter().position(|(k, _)| *k == key) {
            Some(p) => p,
            None => {
                cells.push((key, vec![Vec::new(); metric_idx.len()]));
                cells.len() - 1
            }
        };
        for (slot, &i) in metric_idx.iter().enumerate() {
            let v = parse_f64(fields[i])
                .ok_or_else(|| Error::InvalidParameter(format!("bad number {:?}", fields[i])))?;
            if v.is_finite() {
                cells[pos].1[slot].push(v);
            }
        }
    }

    let mut out = format!("{},metric,{}\n", keys.join(","), SummaryStats::HEADER);
    for (key, metrics) in &cells {
        for (slot, samples) in metrics.iter().enumerate() {
            if samples.is_empty() {
                continue;
            }
            let stats = SummaryStats::from_samples(samples, q)?;
            out.push_str(&format!(
                "{},{},{}\n",
                key.join(","),
                header[metric_idx[slot]],
                stats.csv_fields()
            ));
        }
    }
    Ok(out)
}

/// Reads back the rows of a summary table for one metric:
/// `(key fields, stats)` in table order.
pub fn summary_cells(summary: &str, metric: &str) -> Result<Vec<(Vec<String>, SummaryStats)>> {
    let mut lines = summary.lines();
    let header: Vec<&str> = lines
        .next()
        .ok_or_else(|| Error::InvalidParameter("empty summary".into()))?
        .split(',')
        .collect();
    let metric_col = header
        .iter()
        .position(|h| *h == "metric")
        .ok_or_else(|| Error::InvalidParameter("summary has no metric column".into()))?;
    let num =
        |s: &str| parse_f64(s).ok_or_else(|| Error::InvalidParameter(format!("bad number {s:?}")));
    let mut out = Vec::new();
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != metric_col + 8 || f[metric_col] != metric {
            continue;
        }
        let s = &f[metric_col + 1..];
        let stats = SummaryStats {
            count: s[0]
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad count {:?}", s[0])))?,
            mean: num(s[1])?,
            median: num(s[2])?,
            quantile: num(s[3])?,
            stderr: num(s[4])?,
            min: num(s[5])?,
            max: num(s[6])?,
        };
        out.push((
            f[..metric_col].iter().map(|x| x.to_string()).collect(),
            stats,
        ));
    }
    Ok(out)
}
