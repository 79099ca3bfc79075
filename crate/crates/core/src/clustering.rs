//! Regularized spectral clustering for the two-block model.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::{expected_adjacency, Adjacency, ModelKind, ProbMatrix};
use crate::matrix::SymMatrix;
use crate::spectra::{eig_sym, eigvals_sym, regularized_laplacian, spectral_norm, DegreeVector};

/// Slack allowed when checking the Davis-Kahan inequality numerically.
pub const DAVIS_KAHAN_SLACK: f64 = 1e-8;

/// Eigenvalues closer than this are treated as one repeated eigenvalue.
pub const DEGENERATE_GAP: f64 = 1e-10;

/// A `+1` / `-1` label per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommunityLabels(Vec<i8>);

impl CommunityLabels {
    pub fn new(labels: Vec<i8>) -> Result<Self> {
        if labels.iter().any(|&l| l != 1 && l != -1) {
            return Err(Error::InvalidParameter("labels must be +1 or -1".into()));
        }
        Ok(Self(labels))
    }

    /// First half `+1`, second half `-1`.
    pub fn planted(n: usize) -> Self {
        Self((0..n).map(|i| if i < n / 2 { 1 } else { -1 }).collect())
    }

    /// Sign pattern of `v`; zero entries get `+1`.
    pub fn from_signs(v: &[f64]) -> Self {
        Self(v.iter().map(|&x| if x >= 0.0 { 1 } else { -1 }).collect())
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn flipped(&self) -> Self {
        Self(self.0.iter().map(|l| -l).collect())
    }
}

/// Twice the average degree.
pub fn tau_default(d: &DegreeVector) -> f64 {
    if d.is_empty() {
        return 0.0;
    }
    2.0 * d.sum() / d.len() as f64
}

/// Labels from the signs of the eigenvector of the second smallest
/// eigenvalue of `L(A_tau)`.
pub fn spectral_partition(a: &Adjacency, tau: f64) -> Result<CommunityLabels> {
    spectral_partition_weighted(&a.to_matrix(), tau)
}

/// [`spectral_partition`] for a weighted adjacency matrix.
pub fn spectral_partition_weighted(m: &SymMatrix, tau: f64) -> Result<CommunityLabels> {
    Ok(CommunityLabels::from_signs(&second_eigenvector(m, tau)?))
}

fn second_eigenvector(m: &SymMatrix, tau: f64) -> Result<Vec<f64>> {
    if m.n() < 2 {
        return Err(Error::InvalidDimension("need at least two vertices".into()));
    }
    let reg = regularized_laplacian(m, tau)?;
    Ok(eig_sym(&reg.laplacian)?.vector(1).to_vec())
}

/// Fraction of disagreeing labels, minimized over a global flip.
pub fn misclassification(labels: &CommunityLabels, truth: &CommunityLabels) -> Result<f64> {
    if labels.len() != truth.len() {
        return Err(Error::InvalidDimension(format!(
            "{} labels against {} true labels",
            labels.len(),
            truth.len()
        )));
    }
    if labels.is_empty() {
        return Ok(0.0);
    }
    let wrong = labels
        .0
        .iter()
        .zip(&truth.0)
        .filter(|(a, b)| a != b)
        .count();
    // Minimum taken on counts so that a global flip gives the identical value.
    let n = labels.len();
    Ok(wrong.min(n - wrong) as f64 / n as f64)
}

/// `min_{s = +-1} || vhat + s vbar ||_2` for unit vectors.
pub fn alignment(vhat: &[f64], vbar: &[f64]) -> Result<f64> {
    if vhat.len() != vbar.len() {
        return Err(Error::InvalidDimension("vectors differ in length".into()));
    }
    for v in [vhat, vbar] {
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidParameter(format!(
                "vector norm {norm} is not 1"
            )));
        }
    }
    let dist = |s: f64| {
        vhat.iter()
            .zip(vbar)
            .map(|(a, b)| (a + s * b) * (a + s * b))
            .sum::<f64>()
            .sqrt()
    };
    Ok(dist(1.0).min(dist(-1.0)))
}

/// Distance from the second smallest eigenvalue to the rest of the
/// spectrum.
pub fn spectral_gap(m: &SymMatrix) -> Result<f64> {
    gap_of_second(&eigvals_sym(m)?)
}

fn gap_of_second(values: &[f64]) -> Result<f64> {
    if values.len() < 2 {
        return Err(Error::InvalidDimension(
            "need at least two eigenvalues".into(),
        ));
    }
    let below = values[1] - values[0];
    let gap = match values.get(2) {
        Some(next) => below.min(next - values[1]),
        None => below,
    };
    if gap <= DEGENERATE_GAP {
        return Err(Error::DegenerateGap { gap });
    }
    Ok(gap)
}

/// Outcome of one spectral clustering run against the planted partition.
#[derive(Debug, Clone, Serialize)]
pub struct RecoveryReport {
    pub n: usize,
    pub a: f64,
    pub b: f64,
    pub tau: f64,
    pub misclassification: f64,
    pub alignment: f64,
    pub delta: f64,
    pub dk_bound: f64,
    /// `(a - b)^2 / (a + b)`.
    pub threshold_ratio: f64,
    #[serde(skip)]
    pub labels: CommunityLabels,
    /// `||L(A_tau) - L(E A_tau)||`.
    #[serde(skip)]
    pub dev_l: f64,
    /// Whether `threshold_ratio` exceeds the supplied `C_eps`.
    #[serde(skip)]
    pub threshold_met: Option<bool>,
}

impl RecoveryReport {
    pub fn davis_kahan_holds(&self) -> bool {
        self.alignment <= self.dk_bound + DAVIS_KAHAN_SLACK
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

/// Clusters a realization of a two-block model and certifies the result
/// against the expected Laplacian. `tau` defaults to [`tau_default`] of the
/// observed degrees; `c_eps`, when given, is compared with
/// `(a - b)^2 / (a + b)`.
pub fn recover(
    adjacency: &Adjacency,
    model: &ProbMatrix,
    tau: Option<f64>,
    c_eps: Option<f64>,
) -> Result<RecoveryReport> {
    let ModelKind::Sbm { a, b } = *model.kind() else {
        return Err(Error::InvalidParameter(
            "recovery needs a two-block model".into(),
        ));
    };
    if adjacency.n() != model.n() {
        return Err(Error::InvalidDimension(format!(
            "graph has n = {}, model has n = {}",
            adjacency.n(),
            model.n()
        )));
    }
    let n = model.n();
    let tau = tau.unwrap_or_else(|| tau_default(&DegreeVector::new(adjacency.degrees())));

    let observed = regularized_laplacian(&adjacency.to_matrix(), tau)?;
    let expected = regularized_laplacian(&expected_adjacency(model), tau)?;
    let obs_spec = eig_sym(&observed.laplacian)?;
    let exp_spec = eig_sym(&expected.laplacian)?;
    let delta = gap_of_second(exp_spec.values())?;
    let dev_l = spectral_norm(&(&observed.laplacian - &expected.laplacian))?;

    let labels = CommunityLabels::from_signs(obs_spec.vector(1));
    let threshold_ratio = if a + b > 0.0 {
        (a - b) * (a - b) / (a + b)
    } else {
        0.0
    };
    Ok(RecoveryReport {
        n,
        a,
        b,
        tau,
        misclassification: misclassification(&labels, &CommunityLabels::planted(n))?,
        alignment: alignment(obs_spec.vector(1), exp_spec.vector(1))?,
        delta,
        dk_bound: 2.0 * dev_l / delta,
        threshold_ratio,
        labels,
        dev_l,
        threshold_met: c_eps.map(|c| threshold_ratio > c),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::degrees;

    #[test]
    fn tau_default_examples() {
        assert_eq!(tau_default(&degrees(&Adjacency::complete(4))), 6.0);
        assert_eq!(tau_default(&degrees(&Adjacency::empty(3))), 0.0);
        let p3 = Adjacency::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert!((tau_default(&degrees(&p3)) - 8.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn misclassification_examples() {
        let t = CommunityLabels::planted(6);
        assert_eq!(misclassification(&t, &t).unwrap(), 0.0);
        assert_eq!(misclassification(&t.flipped(), &t).unwrap(), 0.0);
        let half = CommunityLabels::new(vec![1, -1, 1, -1]).unwrap();
        assert_eq!(
            misclassification(&half, &CommunityLabels::planted(4)).unwrap(),
            0.5
        );
        assert!(misclassification(&half, &t).is_err());
        assert!(CommunityLabels::new(vec![0]).is_err());
    }

    #[test]
    fn alignment_examples() {
        let s = 1.0 / 2.0_f64.sqrt();
        let v = [s, s];
        assert!(alignment(&v, &v).unwrap() < 1e-15);
        assert!(alignment(&v, &[-s, -s]).unwrap() < 1e-15);
        assert!((alignment(&v, &[s, -s]).unwrap() - 2.0_f64.sqrt()).abs() < 1e-15);
        assert!(alignment(&v, &[1.0, 1.0]).is_err());
    }

    #[test]
    fn spectral_gap_examples() {
        let g = spectral_gap(&SymMatrix::from_diagonal(&[0.0, 0.3, 1.0, 1.0])).unwrap();
        assert!((g - 0.3).abs() < 1e-15);
        assert!(matches!(
            spectral_gap(&SymMatrix::identity(4)),
            Err(Error::DegenerateGap { .. })
        ));
    }

    #[test]
    fn expected_matrix_is_recovered_exactly() {
        // a/n = 2.5 is not a probability, so build the weighted block matrix.
        let (n, a, b) = (8, 20.0, 5.0);
        let ebar = SymMatrix::from_upper_fn(n, |i, j| match (i == j, (i < 4) == (j < 4)) {
            (true, _) => 0.0,
            (false, true) => a / n as f64,
            (false, false) => b / n as f64,
        });
        let labels = spectral_partition_weighted(&ebar, 0.0).unwrap();
        assert_eq!(
            misclassification(&labels, &CommunityLabels::planted(n)).unwrap(),
            0.0
        );
        let v = second_eigenvector(&ebar, 1.0).unwrap();
        let flat = 1.0 / (n as f64).sqrt();
        for (i, x) in v.iter().enumerate() {
            let same_block = if i < 4 { 1.0 } else { -1.0 };
            assert!((x.abs() - flat).abs() < 1e-10);
            assert_eq!(x.signum() * v[0].signum(), same_block);
        }
    }

    #[test]
    fn two_cliques_are_separated() {
        let mut edges = Vec::new();
        for block in [0..5, 5..10] {
            for i in block.clone() {
                for j in (i + 1)..block.end {
                    edges.push((i, j));
                }
            }
        }
        let a = Adjacency::from_edges(10, &edges).unwrap();
        let labels = spectral_partition(&a, 0.01).unwrap();
        assert_eq!(
            misclassification(&labels, &CommunityLabels::planted(10)).unwrap(),
            0.0
        );
    }

    #[test]
    fn recover_rejects_other_models() {
        let model = ProbMatrix::homogeneous(10, 0.5).unwrap();
        assert!(recover(&Adjacency::complete(10), &model, Some(1.0), None).is_err());
    }

    #[test]
    fn report_json_fields() {
        let model = ProbMatrix::sbm(40, 20.0, 2.0).unwrap();
        let a = crate::graphs::threshold(&crate::graphs::sample_uniforms(40, 3).unwrap(), &model)
            .unwrap();
        let r = recover(&a, &model, None, Some(1.0)).unwrap();
        let text = r.to_json().unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        keys.sort_unstable();
        assert_eq!(
            keys,
            [
                "a",
                "alignment",
                "b",
                "delta",
                "dk_bound",
                "misclassification",
                "n",
                "tau",
                "threshold_ratio"
            ]
        );
        assert!(text.starts_with(r#"{"n":40,"a":20.0,"b":2.0,"tau":"#));
        assert_eq!(r.threshold_met, Some(true));
        assert!(r.davis_kahan_holds());
        assert!(r.alignment <= 2.0_f64.sqrt() + 1e-12);
    }
}
