//! Experiment configuration: a flat `key = value` file plus overrides.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::concentration::{log_grid, Metrics};
use crate::error::{Error, Result};
use crate::graphs::{figure1_profile, ProbMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Deviation,
    Sweep,
    Sbm,
    Bounds,
    Fig1,
    NormGap,
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "deviation" => Self::Deviation,
            "sweep" => Self::Sweep,
            "sbm" => Self::Sbm,
            "bounds" => Self::Bounds,
            "fig1" | "repro-fig1" => Self::Fig1,
            "normgap" | "norm-gap" => Self::NormGap,
            other => return Err(Error::Config(format!("unknown experiment kind {other:?}"))),
        })
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Deviation => "deviation",
            Self::Sweep => "sweep",
            Self::Sbm => "sbm",
            Self::Bounds => "bounds",
            Self::Fig1 => "fig1",
            Self::NormGap => "normgap",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelChoice {
    Homogeneous,
    Sbm,
    /// Two-level rank-one profile (`low_deg`, `high_deg`, `high_frac`).
    Profile,
}

impl FromStr for ModelChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "homogeneous" | "er" => Self::Homogeneous,
            "sbm" => Self::Sbm,
            "profile" | "fig1" | "weighted" => Self::Profile,
            other => return Err(Error::Config(format!("unknown model {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub n: Option<usize>,
    pub model: ModelChoice,
    pub p: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub low_deg: f64,
    pub high_deg: f64,
    pub high_frac: f64,
    pub tau_grid: Vec<f64>,
    pub p_grid: Vec<f64>,
    pub n_grid: Vec<usize>,
    pub trials: usize,
    pub r: f64,
    pub alpha: f64,
    pub beta: f64,
    /// Constant used by the `bounds` table.
    pub c: f64,
    pub c_eps: Option<f64>,
    pub quantile: f64,
    pub metrics: Metrics,
    pub bins: usize,
    pub hist_lo: f64,
    pub hist_hi: f64,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    /// Worker threads; `0` lets the pool decide.
    pub threads: usize,
}

impl ExperimentConfig {
    /// Defaults for an experiment kind, before any file or flag is applied.
    pub fn new(kind: ExperimentKind) -> Self {
        let mut c = Self {
            kind,
            n: None,
            model: ModelChoice::Homogeneous,
            p: None,
            a: None,
            b: None,
            low_deg: 7.0,
            high_deg: 35.0,
            high_frac: 0.1,
            tau_grid: Vec::new(),
            p_grid: Vec::new(),
            n_grid: Vec::new(),
            trials: 1,
            r: 1.0,
            alpha: 0.25,
            beta: 0.125,
            c: 1.0,
            c_eps: None,
            quantile: 0.99,
            metrics: Metrics {
                laplacian: true,
                split: true,
                adjacency: true,
                norm_gap: true,
                top_overlap: false,
            },
            bins: 60,
            hist_lo: 0.0,
            hist_hi: 2.0,
            seed: None,
            out: None,
            threads: 0,
        };
        match kind {
            ExperimentKind::Sweep => c.metrics = Metrics::LAPLACIAN,
            ExperimentKind::Sbm => c.model = ModelChoice::Sbm,
            ExperimentKind::Fig1 => {
                c.model = ModelChoice::Profile;
                c.n = Some(1000);
                c.tau_grid = vec![0.1, 7.0, 35.0, 245.0];
            }
            ExperimentKind::NormGap => {
                c.metrics = Metrics {
                    norm_gap: true,
                    ..Metrics::NONE
                };
                c.tau_grid = vec![0.0];
            }
            ExperimentKind::Deviation | ExperimentKind::Bounds => {}
        }
        c
    }

    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        match key.as_str() {
            "kind" | "experiment" => {
                let kind: ExperimentKind = value.parse()?;
                if kind != self.kind {
                    return Err(Error::Config(format!(
                        "config is for {kind}, but the {} experiment was requested",
                        self.kind
                    )));
                }
            }
            "n" => self.n = Some(parse(&key, value)?),
            "model" => self.model = value.parse()?,
            "p" => self.p = Some(parse(&key, value)?),
            "a" => self.a = Some(parse(&key, value)?),
            "b" => self.b = Some(parse(&key, value)?),
            "low_deg" => self.low_deg = parse(&key, value)?,
            "high_deg" => self.high_deg = parse(&key, value)?,
            "high_frac" => self.high_frac = parse(&key, value)?,
            "tau" => self.tau_grid = vec![parse(&key, value)?],
            "tau_grid" => self.tau_grid = parse_list(&key, value)?,
            "p_grid" => self.p_grid = parse_list(&key, value)?,
            "n_grid" => self.n_grid = parse_list(&key, value)?,
            "trials" => self.trials = parse(&key, value)?,
            "r" => self.r = parse(&key, value)?,
            "alpha" => self.alpha = parse(&key, value)?,
            "beta" => self.beta = parse(&key, value)?,
            "c" => self.c = parse(&key, value)?,
            "c_eps" => self.c_eps = Some(parse(&key, value)?),
            "quantile" => self.quantile = parse(&key, value)?,
            "metrics" => {
                self.metrics = Metrics::parse(value).map_err(|e| Error::Config(e.to_string()))?
            }
            "bins" => self.bins = parse(&key, value)?,
            "hist_lo" => self.hist_lo = parse(&key, value)?,
            "hist_hi" => self.hist_hi = parse(&key, value)?,
            "seed" => self.seed = Some(parse(&key, value)?),
            "out" => self.out = Some(PathBuf::from(value)),
            "threads" => self.threads = parse(&key, value)?,
            other => {
                return Err(Error::Config(format!(
                    "unknown configuration key {other:?}"
                )))
            }
        }
        Ok(())
    }

    /// Applies a `key = value` file; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key = value", lineno + 1))
            })?;
            self.set(k, v)
                .map_err(|e| Error::Config(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(())
    }

    pub fn from_text(kind: ExperimentKind, text: &str) -> Result<Self> {
        let mut c = Self::new(kind);
        c.apply_text(text)?;
        Ok(c)
    }

    /// Canonical `key = value` rendering of the settings that affect output.
    pub fn to_text(&self) -> String {
        let list = |v: &[f64]| {
            v.iter()
                .map(|x| format!("{x:?}"))
                .collect::<Vec<_>>()
                .join(",")
        };
        let mut out = format!("kind = {}\n", self.kind);
        let mut push = |k: &str, v: String| out.push_str(&format!("{k} = {v}\n"));
        if let Some(n) = self.n {
            push("n", n.to_string());
        }
        push(
            "model",
            match self.model {
                ModelChoice::Homogeneous => "homogeneous",
                ModelChoice::Sbm => "sbm",
                ModelChoice::Profile => "profile",
            }
            .into(),
        );
        for (k, v) in [
            ("p", self.p),
            ("a", self.a),
            ("b", self.b),
            ("c_eps", self.c_eps),
        ] {
            if let Some(v) = v {
                push(k, format!("{v:?}"));
            }
        }
        if self.model == ModelChoice::Profile {
            push("low_deg", format!("{:?}", self.low_deg));
            push("high_deg", format!("{:?}", self.high_deg));
            push("high_frac", format!("{:?}", self.high_frac));
        }
        if !self.tau_grid.is_empty() {
            push("tau_grid", list(&self.tau_grid));
        }
        if !self.p_grid.is_empty() {
            push("p_grid", list(&self.p_grid));
        }
        if !self.n_grid.is_empty() {
            let ns: Vec<String> = self.n_grid.iter().map(usize::to_string).collect();
            push("n_grid", ns.join(","));
        }
        push("trials", self.trials.to_string());
        if let Some(seed) = self.seed {
            push("seed", seed.to_string());
        }
        out
    }

    /// Checks the invariants every experiment relies on.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.seed.is_none() && self.kind != ExperimentKind::Bounds {
            return bad("a seed is required (use --seed or seed = ...)".into());
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&self.quantile) {
            return bad(format!("quantile {} is not in [0, 1]", self.quantile));
        }
        if self.tau_grid.iter().any(|t| !(*t >= 0.0 && t.is_finite())) {
            return bad("tau values must be finite and nonnegative".into());
        }
        match self.kind {
            ExperimentKind::NormGap => {
                if self.n_grid.is_empty() && self.n.is_none() {
                    return bad("normgap needs n or n_grid".into());
                }
                if self.n_grid.iter().any(|&n| n < 2) {
                    return bad("every n in n_grid must be at least 2".into());
                }
                if self.p.is_none() {
                    return bad("normgap needs p".into());
                }
            }
            ExperimentKind::Bounds => {
                if self.tau_grid.is_empty() {
                    return bad("bounds needs tau or tau_grid".into());
                }
                if self.n.is_none() {
                    return bad("bounds needs n".into());
                }
            }
            _ => {
                if self.n.is_none() {
                    return bad(format!("{} needs n", self.kind));
                }
            }
        }
        match self.kind {
            ExperimentKind::Deviation | ExperimentKind::Fig1 if self.tau_grid.is_empty() => {
                bad(format!("{} needs tau or tau_grid", self.kind))
            }
            ExperimentKind::Sweep if self.tau_grid.len() > 1 => {
                bad("sweep takes a single tau".into())
            }
            _ => Ok(()),
        }
    }

    /// The edge-probability model for vertex count `n`.
    pub fn model_for(&self, n: usize) -> Result<ProbMatrix> {
        let need = |name: &str, v: Option<f64>| {
            v.ok_or_else(|| Error::Config(format!("model {:?} needs {name}", self.model)))
        };
        match self.model {
            ModelChoice::Homogeneous => ProbMatrix::homogeneous(n, need("p", self.p)?),
            ModelChoice::Sbm => ProbMatrix::sbm(n, need("a", self.a)?, need("b", self.b)?),
            ModelChoice::Profile => figure1_profile(n, self.low_deg, self.high_deg, self.high_frac),
        }
    }

    pub fn model(&self) -> Result<ProbMatrix> {
        self.model_for(self.n.ok_or_else(|| Error::Config("n is not set".into()))?)
    }

    /// The sweep grid, defaulting to 32 log-spaced points on `[2 ln n / n, 1]`.
    pub fn sweep_grid(&self) -> Result<Vec<f64>> {
        if !self.p_grid.is_empty() {
            return Ok(self.p_grid.clone());
        }
        let n = self.n.ok_or_else(|| Error::Config("n is not set".into()))? as f64;
        log_grid((2.0 * n.ln() / n).min(1.0), 1.0, 32)
    }

    pub fn sweep_tau(&self) -> f64 {
        self.tau_grid.first().copied().unwrap_or(0.0)
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("cannot parse {key} = {value:?}")))
}

fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse(key, s))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_file_with_comments() {
        let text = "# demo\nn = 50\np=0.1\ntau_grid = 1, 2.5\ntrials = 3 # three\nseed = 9\n";
        let c = ExperimentConfig::from_text(ExperimentKind::Deviation, text).unwrap();
        assert_eq!(c.n, Some(50));
        assert_eq!(c.tau_grid, vec![1.0, 2.5]);
        assert_eq!(c.trials, 3);
        c.validate().unwrap();
        let again = ExperimentConfig::from_text(ExperimentKind::Deviation, &c.to_text()).unwrap();
        assert_eq!(again.to_text(), c.to_text());
    }

    #[test]
    fn missing_seed_is_rejected() {
        let c =
            ExperimentConfig::from_text(ExperimentKind::Deviation, "n=10\np=0.5\ntau=1").unwrap();
        assert!(matches!(c.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn bad_lines_are_config_errors() {
        let mut c = ExperimentConfig::new(ExperimentKind::Sweep);
        assert!(c.apply_text("n 10").is_err());
        assert!(c.apply_text("colour = blue").is_err());
        assert!(c.apply_text("trials = many").is_err());
        assert!(c.apply_text("kind = sbm").is_err());
        c.apply_text("kind = sweep\ntrials = 0\nn=5\nseed=1")
            .unwrap();
        assert!(c.validate().is_err());
    }

    #[test]
    fn default_sweep_grid() {
        let mut c = ExperimentConfig::new(ExperimentKind::Sweep);
        c.n = Some(500);
        let g = c.sweep_grid().unwrap();
        assert_eq!(g.len(), 32);
        assert!((g[0] - 2.0 * 500f64.ln() / 500.0).abs() < 1e-15);
        assert_eq!(g[31], 1.0);
    }
}
