//! Deviation metrics for regularized Laplacians, the closed-form tail
//! bounds they are compared against, and sweeps over a coupled family of
//! graphs.

use crate::error::{Error, Result};
use crate::graphs::{expected_adjacency, threshold, Adjacency, CoupledSample, ProbMatrix};
use crate::matrix::SymMatrix;
use crate::par;
use crate::spectra::{
    degrees, eig_sym, laplacian, regularize, regularized_laplacian, spectral_norm, v0, DegreeVector,
};

/// Parameters of the concentration bounds. `c` is a fitted constant, not a
/// known universal value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundParams {
    pub c: f64,
    pub r: f64,
    pub tau: f64,
    /// `max_ij n p_ij`.
    pub d: f64,
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
}

impl Default for BoundParams {
    fn default() -> Self {
        Self {
            c: 1.0,
            r: 1.0,
            tau: 1.0,
            d: 0.0,
            n: 2,
            alpha: 0.25,
            beta: 0.125,
        }
    }
}

impl BoundParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !(self.r >= 1.0) {
            return bad(format!("r = {} must be at least 1", self.r));
        }
        if !(self.alpha > 0.0 && self.alpha < 0.5) {
            return bad(format!("alpha = {} must lie in (0, 1/2)", self.alpha));
        }
        if !(self.beta > 0.0 && self.beta < 0.25) {
            return bad(format!("beta = {} must lie in (0, 1/4)", self.beta));
        }
        if !(self.d >= 0.0) {
            return bad(format!("d = {} must be nonnegative", self.d));
        }
        if !(self.tau >= 0.0) {
            return bad(format!("tau = {} must be nonnegative", self.tau));
        }
        Ok(())
    }

    fn positive_tau(&self) -> Result<()> {
        self.validate()?;
        if self.tau > 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidParameter("the bound needs tau > 0".into()))
        }
    }
}

/// `C r^2 tau^{-1/2} (1 + d/tau)^{1/2}`.
pub fn bound_new(bp: &BoundParams) -> Result<f64> {
    bp.positive_tau()?;
    Ok(bp.c * bp.r * bp.r / bp.tau.sqrt() * (1.0 + bp.d / bp.tau).sqrt())
}

/// `C r^2 tau^{-1/2} (1 + d/tau)^{5/2}`, the earlier bound.
pub fn bound_old(bp: &BoundParams) -> Result<f64> {
    bp.positive_tau()?;
    Ok(bp.c * bp.r * bp.r / bp.tau.sqrt() * (1.0 + bp.d / bp.tau).powf(2.5))
}

/// `C r^2 / sqrt((np)^{1 - 4 beta} + tau/(np))`, uniform over `p >= p0`.
pub fn bound_tau_independent(bp: &BoundParams, p: f64) -> Result<f64> {
    bp.validate()?;
    let np = bp.n as f64 * p;
    if !(np > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "np = {np} must be positive"
        )));
    }
    Ok(bp.c * bp.r * bp.r / (np.powf(1.0 - 4.0 * bp.beta) + bp.tau / np).sqrt())
}

/// Which of the eigenvalue-backed metrics to compute. Degree statistics and
/// the kernel-vector alignment are cheap and always filled in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Metrics {
    /// `||L(A_tau) - L(E A_tau)||`.
    pub laplacian: bool,
    /// `||B1||` and `||B2||`.
    pub split: bool,
    /// `||A - E A||`.
    pub adjacency: bool,
    /// `| ||L(A)|| - 1 |` on the unregularized graph.
    pub norm_gap: bool,
    /// Overlap of the top eigenvector of `L(A_tau)` with the flat vector.
    pub top_overlap: bool,
}

impl Metrics {
    pub const ALL: Metrics = Metrics {
        laplacian: true,
        split: true,
        adjacency: true,
        norm_gap: true,
        top_overlap: true,
    };
    pub const NONE: Metrics = Metrics {
        laplacian: false,
        split: false,
        adjacency: false,
        norm_gap: false,
        top_overlap: false,
    };
    pub const LAPLACIAN: Metrics = Metrics {
        laplacian: true,
        ..Metrics::NONE
    };

    /// Parses a comma-separated list such as `laplacian,split` (or `all`).
    pub fn parse(list: &str) -> Result<Self> {
        let mut m = Metrics::NONE;
        for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match name {
                "all" => m = Metrics::ALL,
                "laplacian" | "dev_L" => m.laplacian = true,
                "split" | "b1b2" => m.split = true,
                "adjacency" | "dev_A" => m.adjacency = true,
                "norm_gap" => m.norm_gap = true,
                "top_overlap" => m.top_overlap = true,
                other => return Err(Error::InvalidParameter(format!("unknown metric {other:?}"))),
            }
        }
        Ok(m)
    }
}

/// Per-graph concentration metrics. Metrics that were not requested (or are
/// undefined, such as the unregularized norm gap of a graph with isolated
/// vertices) are `NaN`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviationRecord {
    pub dev_l: f64,
    pub dev_b1: f64,
    pub dev_b2: f64,
    pub dev_a: f64,
    /// `sum_i (d_i - dbar_i)^2`.
    pub deg_sq: f64,
    /// `max_i |d_i - dbar_i|`, the spectral norm of `D - E D`.
    pub deg_max: f64,
    /// `||d - dbar||_2`.
    pub deg_l2: f64,
    /// `sum_i (d_i + tau)^2`.
    pub sum_reg_sq: f64,
    pub norm_gap: f64,
    pub v0_align: f64,
    pub top_overlap: f64,
}

impl DeviationRecord {
    pub const FIELDS: [&'static str; 11] = [
        "dev_L",
        "dev_B1",
        "dev_B2",
        "dev_A",
        "deg_sq",
        "deg_max",
        "deg_l2",
        "sum_reg_sq",
        "norm_gap",
        "v0_align",
        "top_overlap",
    ];

    pub fn values(&self) -> [f64; 11] {
        [
            self.dev_l,
            self.dev_b1,
            self.dev_b2,
            self.dev_a,
            self.deg_sq,
            self.deg_max,
            self.deg_l2,
            self.sum_reg_sq,
            self.norm_gap,
            self.v0_align,
            self.top_overlap,
        ]
    }

    pub fn from_values(v: [f64; 11]) -> Self {
        Self {
            dev_l: v[0],
            dev_b1: v[1],
            dev_b2: v[2],
            dev_a: v[3],
            deg_sq: v[4],
            deg_max: v[5],
            deg_l2: v[6],
            sum_reg_sq: v[7],
            norm_gap: v[8],
            v0_align: v[9],
            top_overlap: v[10],
        }
    }

    /// Field-wise maximum, ignoring `NaN` unless every entry is `NaN`.
    pub fn sup<'a>(records: impl IntoIterator<Item = &'a DeviationRecord>) -> DeviationRecord {
        let mut acc = [f64::NAN; 11];
        for r in records {
            for (a, v) in acc.iter_mut().zip(r.values()) {
                *a = a.max(v);
            }
        }
        Self::from_values(acc)
    }
}

/// `L(A_tau) - L(E A_tau)` split through `N = I - D_tau^{-1/2} E A_tau D_tau^{-1/2}`
/// into `B1 = L(A_tau) - N` and `B2 = N - L(E A_tau)`.
#[derive(Debug, Clone)]
pub struct LaplacianSplit {
    pub delta: SymMatrix,
    pub b1: SymMatrix,
    pub b2: SymMatrix,
}

/// Everything needed to compare a realization against its expectation.
struct Comparison {
    a: SymMatrix,
    ebar: SymMatrix,
    degrees: DegreeVector,
    expected_degrees: DegreeVector,
    l: SymMatrix,
    lbar: SymMatrix,
    reg_degrees: DegreeVector,
}

fn compare(a: &Adjacency, model: &ProbMatrix, tau: f64) -> Result<Comparison> {
    if a.n() != model.n() {
        return Err(Error::InvalidDimension(format!(
            "graph has n = {}, model has n = {}",
            a.n(),
            model.n()
        )));
    }
    let am = a.to_matrix();
    let ebar = expected_adjacency(model);
    let reg = regularized_laplacian(&am, tau)?;
    let reg_bar = regularized_laplacian(&ebar, tau)?;
    Ok(Comparison {
        degrees: degrees(a),
        expected_degrees: DegreeVector::new(model.expected_degrees()),
        a: am,
        ebar,
        l: reg.laplacian,
        lbar: reg_bar.laplacian,
        reg_degrees: reg.degrees,
    })
}

impl Comparison {
    fn n_matrix(&self, tau: f64) -> Result<SymMatrix> {
        laplacian(&regularize(&self.ebar, tau)?, &self.reg_degrees)
    }
}

pub fn laplacian_split(a: &Adjacency, model: &ProbMatrix, tau: f64) -> Result<LaplacianSplit> {
    let c = compare(a, model, tau)?;
    let nm = c.n_matrix(tau)?;
    Ok(LaplacianSplit {
        delta: &c.l - &c.lbar,
        b1: &c.l - &nm,
        b2: &nm - &c.lbar,
    })
}

/// Concentration metrics of one realization `a` of `model` at level `tau`.
pub fn deviation_laplacian(
    a: &Adjacency,
    model: &ProbMatrix,
    tau: f64,
    metrics: Metrics,
) -> Result<DeviationRecord> {
    let c = compare(a, model, tau)?;
    let diffs: Vec<f64> = c
        .degrees
        .values()
        .iter()
        .zip(c.expected_degrees.values())
        .map(|(d, e)| d - e)
        .collect();
    let deg_sq: f64 = diffs.iter().map(|x| x * x).sum();
    let nan = f64::NAN;

    let dev_l = if metrics.laplacian {
        spectral_norm(&(&c.l - &c.lbar))?
    } else {
        nan
    };
    let (dev_b1, dev_b2) = if metrics.split {
        let nm = c.n_matrix(tau)?;
        (
            spectral_norm(&(&c.l - &nm))?,
            spectral_norm(&(&nm - &c.lbar))?,
        )
    } else {
        (nan, nan)
    };
    let dev_a = if metrics.adjacency {
        spectral_norm(&(&c.a - &c.ebar))?
    } else {
        nan
    };
    let norm_gap_value = if metrics.norm_gap && !a.has_isolated_vertex() {
        norm_gap(a)?
    } else {
        nan
    };
    let top = if metrics.top_overlap {
        top_overlap(&c.l)?
    } else {
        nan
    };
    Ok(DeviationRecord {
        dev_l,
        dev_b1,
        dev_b2,
        dev_a,
        deg_sq,
        deg_max: diffs.iter().fold(0.0_f64, |m, x| m.max(x.abs())),
        deg_l2: deg_sq.sqrt(),
        sum_reg_sq: sum_reg_sq_degrees(&c.degrees, tau),
        norm_gap: norm_gap_value,
        v0_align: v0_alignment(&c.reg_degrees)?,
        top_overlap: top,
    })
}

/// `sum_i (d_i - dbar_i)^2` with `dbar_i = sum_{j != i} p_ij`.
pub fn degree_sq_deviation(a: &Adjacency, model: &ProbMatrix) -> Result<f64> {
    if a.n() != model.n() {
        return Err(Error::InvalidDimension(format!(
            "graph has n = {}, model has n = {}",
            a.n(),
            model.n()
        )));
    }
    Ok(a.degrees()
        .iter()
        .zip(model.expected_degrees())
        .map(|(d, e)| (d - e) * (d - e))
        .sum())
}

/// `sum_i (d_i + tau)^2`.
pub fn sum_reg_sq_degrees(d: &DegreeVector, tau: f64) -> f64 {
    d.values().iter().map(|x| (x + tau) * (x + tau)).sum()
}

/// `| ||L(A)|| - 1 |` for a graph without isolated vertices.
pub fn norm_gap(a: &Adjacency) -> Result<f64> {
    let l = laplacian(&a.to_matrix(), &degrees(a))?;
    Ok((spectral_norm(&l)? - 1.0).abs())
}

/// `|| v0 - 1/sqrt(n) ||_2`.
pub fn v0_alignment(d: &DegreeVector) -> Result<f64> {
    let v = v0(d)?;
    let flat = 1.0 / (d.len() as f64).sqrt();
    Ok(v.iter()
        .map(|x| (x - flat) * (x - flat))
        .sum::<f64>()
        .sqrt())
}

/// `|<v_top, 1/sqrt(n)>|` for the eigenvector of the largest eigenvalue.
pub fn top_overlap(l: &SymMatrix) -> Result<f64> {
    let s = eig_sym(l)?;
    let n = l.n();
    let v = s.vector(n - 1);
    Ok((v.iter().sum::<f64>() / (n as f64).sqrt()).abs())
}

/// Exact order statistic `x_(ceil(q m))` (1-based, clamped to `[1, m]`).
pub fn quantile(samples: &[f64], q: f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::InvalidParameter("no samples".into()));
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::InvalidParameter(format!(
            "quantile {q} is not in [0, 1]"
        )));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let m = sorted.len();
    let rank = ((q * m as f64).ceil() as usize).clamp(1, m);
    Ok(sorted[rank - 1])
}

/// Smallest constant `C` with `quantile(samples, q) <= C * shape`.
pub fn fit_constant(samples: &[f64], shape: f64, q: f64) -> Result<f64> {
    if !(shape > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "shape {shape} must be positive"
        )));
    }
    Ok(quantile(samples, q)? / shape)
}

/// How the sweep parameter `p` is turned into an edge-probability matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepFamily {
    /// `p_ij = p`.
    Homogeneous,
    /// Two-block model with within probability `p` and across `ratio * p`.
    Sbm { ratio: f64 },
}

impl SweepFamily {
    pub fn model(&self, n: usize, p: f64) -> Result<ProbMatrix> {
        match *self {
            SweepFamily::Homogeneous => ProbMatrix::homogeneous(n, p),
            SweepFamily::Sbm { ratio } => {
                let a = p * n as f64;
                ProbMatrix::sbm(n, a, ratio * a)
            }
        }
    }
}

/// Per-grid-point metrics of one coupled family.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub grid: Vec<f64>,
    pub records: Vec<DeviationRecord>,
    pub edge_counts: Vec<usize>,
    pub sup: DeviationRecord,
}

/// Thresholds the *same* uniforms at every grid point, so the graphs are
/// nested along the grid, and records their metrics.
pub fn sweep(
    sample: &CoupledSample,
    family: SweepFamily,
    grid: &[f64],
    tau: f64,
    metrics: Metrics,
) -> Result<SweepResult> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("empty probability grid".into()));
    }
    if grid.iter().any(|p| !(0.0..=1.0).contains(p)) || grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidParameter(
            "probability grid must be strictly increasing inside [0, 1]".into(),
        ));
    }
    let n = sample.n();
    let rows = par::try_map_indexed(grid.len(), |k| {
        let model = family.model(n, grid[k])?;
        let a = threshold(sample, &model)?;
        Ok((
            a.edge_count(),
            deviation_laplacian(&a, &model, tau, metrics)?,
        ))
    })?;
    let (edge_counts, records): (Vec<usize>, Vec<DeviationRecord>) = rows.into_iter().unzip();
    Ok(SweepResult {
        grid: grid.to_vec(),
        sup: DeviationRecord::sup(&records),
        records,
        edge_counts,
    })
}

/// `count` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi >= lo) || count == 0 {
        return Err(Error::InvalidParameter(format!(
            "cannot build {count} log-spaced points on [{lo}, {hi}]"
        )));
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    let (a, b) = (lo.ln(), hi.ln());
    let mut g: Vec<f64> = (0..count)
        .map(|k| (a + (b - a) * k as f64 / (count - 1) as f64).exp())
        .collect();
    g[0] = lo;
    g[count - 1] = hi;
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::sample_uniforms;

    fn bp(c: f64, r: f64, tau: f64, d: f64) -> BoundParams {
        BoundParams {
            c,
            r,
            tau,
            d,
            ..BoundParams::default()
        }
    }

    #[test]
    fn bound_new_examples() {
        assert!((bound_new(&bp(1.0, 2.0, 4.0, 12.0)).unwrap() - 4.0).abs() < 1e-15);
        assert!((bound_new(&bp(3.0, 2.0, 9.0, 0.0)).unwrap() - 4.0).abs() < 1e-15);
        let d = 50.0;
        let v = bound_new(&bp(1.0, 1.0, d, d)).unwrap();
        assert!((v - 2.0_f64.sqrt() / d.sqrt()).abs() < 1e-15);
        assert!(bound_new(&bp(1.0, 1.0, 0.0, 1.0)).is_err());
        assert!(bound_new(&bp(1.0, 0.5, 1.0, 1.0)).is_err());
    }

    #[test]
    fn bound_old_examples() {
        assert!((bound_old(&bp(1.0, 2.0, 4.0, 12.0)).unwrap() - 64.0).abs() < 1e-12);
        let big = bp(1.0, 1.0, 1e12, 1.0);
        let ratio = bound_old(&big).unwrap() / bound_new(&big).unwrap();
        assert!((ratio - 1.0).abs() < 1e-10);
        assert!(bound_old(&bp(1.0, 1.0, -1.0, 1.0)).is_err());
    }

    #[test]
    fn bound_tau_independent_examples() {
        let mut p = bp(1.0, 1.0, 0.0, 0.0);
        p.n = 16;
        p.beta = 0.125;
        assert!((bound_tau_independent(&p, 1.0).unwrap() - 0.5).abs() < 1e-15);
        p.tau = 16.0;
        let v = bound_tau_independent(&p, 1.0).unwrap();
        assert!((v - 1.0 / 5.0_f64.sqrt()).abs() < 1e-15);
        // Small beta approaches 1/sqrt(np).
        p.tau = 0.0;
        p.beta = 1e-12;
        assert!((bound_tau_independent(&p, 1.0).unwrap() - 0.25).abs() < 1e-10);
        p.beta = 0.3;
        assert!(bound_tau_independent(&p, 1.0).is_err());
        p.beta = 0.1;
        p.alpha = 0.5;
        assert!(bound_tau_independent(&p, 1.0).is_err());
    }

    #[test]
    fn sum_reg_sq_examples() {
        assert_eq!(
            sum_reg_sq_degrees(&DegreeVector::new(vec![0.0; 3]), 2.0),
            12.0
        );
        assert_eq!(
            sum_reg_sq_degrees(&DegreeVector::new(vec![1.0, 2.0, 1.0]), 0.0),
            6.0
        );
        assert_eq!(
            sum_reg_sq_degrees(&degrees(&Adjacency::complete(4)), 1.0),
            64.0
        );
    }

    #[test]
    fn norm_gap_examples() {
        let p3 = Adjacency::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert!((norm_gap(&p3).unwrap() - 1.0).abs() < 1e-12);
        for n in [3, 6, 11] {
            let g = norm_gap(&Adjacency::complete(n)).unwrap();
            assert!((g - 1.0 / (n as f64 - 1.0)).abs() < 1e-12);
        }
        assert!(norm_gap(&Adjacency::empty(3)).is_err());
    }

    #[test]
    fn alignment_examples() {
        assert!(v0_alignment(&degrees(&Adjacency::complete(7))).unwrap() < 1e-15);
        let p3 = v0_alignment(&DegreeVector::new(vec![1.0, 2.0, 1.0])).unwrap();
        let s3 = 1.0 / 3.0_f64.sqrt();
        let exact = (2.0 * (0.5 - s3).powi(2) + (1.0 / 2.0_f64.sqrt() - s3).powi(2)).sqrt();
        assert!((p3 - exact).abs() < 1e-15);
        assert!((p3 - 0.169_72).abs() < 1e-5);
    }

    #[test]
    fn deterministic_extremes_have_no_deviation() {
        let n = 40;
        let full = ProbMatrix::homogeneous(n, 1.0).unwrap();
        let r = deviation_laplacian(&Adjacency::complete(n), &full, 0.0, Metrics::ALL).unwrap();
        for v in [r.dev_l, r.dev_b1, r.dev_b2, r.dev_a, r.deg_sq] {
            assert!(v.abs() < 1e-13, "{r:?}");
        }
        let empty = ProbMatrix::homogeneous(n, 0.0).unwrap();
        let r = deviation_laplacian(&Adjacency::empty(n), &empty, 5.0, Metrics::ALL).unwrap();
        for v in [r.dev_l, r.dev_b1, r.dev_b2, r.dev_a, r.deg_sq, r.v0_align] {
            assert!(v.abs() < 1e-13, "{r:?}");
        }
        assert!(r.top_overlap < 1e-8);
        assert!(r.norm_gap.is_nan());
    }

    #[test]
    fn split_adds_up() {
        let model = ProbMatrix::homogeneous(60, 0.08).unwrap();
        let a = threshold(&sample_uniforms(60, 4).unwrap(), &model).unwrap();
        let s = laplacian_split(&a, &model, 3.0).unwrap();
        assert!((&s.b1 + &s.b2).max_abs_diff(&s.delta) <= 1e-12);
        let r = deviation_laplacian(&a, &model, 3.0, Metrics::ALL).unwrap();
        assert!(r.dev_l <= r.dev_b1 + r.dev_b2 + 1e-12);
        assert!((r.deg_l2 * r.deg_l2 - r.deg_sq).abs() < 1e-9);
        assert_eq!(r.deg_sq, degree_sq_deviation(&a, &model).unwrap());
    }

    #[test]
    fn isolated_vertices_need_regularization() {
        let model = ProbMatrix::homogeneous(5, 0.5).unwrap();
        let a = Adjacency::from_edges(5, &[(0, 1)]).unwrap();
        assert!(matches!(
            deviation_laplacian(&a, &model, 0.0, Metrics::LAPLACIAN),
            Err(Error::ZeroDegree { .. })
        ));
        assert!(deviation_laplacian(&a, &model, 0.5, Metrics::LAPLACIAN).is_ok());
    }

    #[test]
    fn quantile_and_fit() {
        assert_eq!(fit_constant(&[2.0, 2.0, 2.0], 1.0, 0.99).unwrap(), 2.0);
        assert_eq!(fit_constant(&[0.0; 5], 3.0, 0.5).unwrap(), 0.0);
        let xs: Vec<f64> = (1..=200).map(f64::from).collect();
        assert_eq!(quantile(&xs, 0.99).unwrap(), 198.0);
        assert_eq!(quantile(&xs, 0.5).unwrap(), 100.0);
        assert_eq!(quantile(&xs, 0.0).unwrap(), 1.0);
        assert!(fit_constant(&[], 1.0, 0.5).is_err());
        assert!(fit_constant(&[1.0], 0.0, 0.5).is_err());
    }

    #[test]
    fn sweep_edge_cases() {
        let s = sample_uniforms(30, 2).unwrap();
        let r = sweep(&s, SweepFamily::Homogeneous, &[0.0], 2.0, Metrics::ALL).unwrap();
        let rec = r.records[0];
        for v in [
            rec.dev_l,
            rec.dev_b1,
            rec.dev_b2,
            rec.dev_a,
            rec.deg_sq,
            rec.deg_max,
            rec.v0_align,
        ] {
            assert!(v.abs() < 1e-13);
        }
        assert!(rec.norm_gap.is_nan());
        let r = sweep(&s, SweepFamily::Homogeneous, &[1.0], 0.0, Metrics::ALL).unwrap();
        assert!(r.records[0].dev_a < 1e-12 && r.records[0].dev_l < 1e-12);
        assert!(sweep(&s, SweepFamily::Homogeneous, &[], 1.0, Metrics::ALL).is_err());
        assert!(sweep(&s, SweepFamily::Homogeneous, &[0.2, 0.1], 1.0, Metrics::ALL).is_err());
    }

    #[test]
    fn sweep_is_nested_and_sup_is_max() {
        let s = sample_uniforms(80, 9).unwrap();
        let grid = log_grid(0.05, 0.9, 6).unwrap();
        let r = sweep(&s, SweepFamily::Homogeneous, &grid, 1.0, Metrics::LAPLACIAN).unwrap();
        assert!(r.edge_counts.windows(2).all(|w| w[0] <= w[1]));
        let max = r.records.iter().map(|x| x.dev_l).fold(f64::MIN, f64::max);
        assert_eq!(r.sup.dev_l, max);
        assert!(r.sup.dev_b1.is_nan());
    }

    #[test]
    fn metrics_parse() {
        assert_eq!(Metrics::parse("all").unwrap(), Metrics::ALL);
        let m = Metrics::parse("laplacian, split").unwrap();
        assert!(m.laplacian && m.split && !m.adjacency);
        assert!(Metrics::parse("bogus").is_err());
    }

    #[test]
    fn log_grid_endpoints() {
        let g = log_grid(0.01, 1.0, 3).unwrap();
        assert_eq!(g[0], 0.01);
        assert!((g[1] - 0.1).abs() < 1e-15);
        assert_eq!(g[2], 1.0);
    }
}
