//! Edge-probability models and the uniform-seed coupling.
//!
//! A single array of uniforms `U_ij` (one per unordered pair) drives a whole
//! family of graphs: `A_ij = 1` iff `U_ij < p_ij`. Raising any `p_ij` can only
//! add edges, so graphs thresholded from the same sample are nested.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::SymMatrix;
use crate::rng::UniformStream;

/// Shape of the edge-probability matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "parameters", rename_all = "snake_case")]
pub enum ModelKind {
    /// `p_ij = p` for every pair.
    Homogeneous { p: f64 },
    /// Two equal communities (first and second half of the vertices) with
    /// `p_ij = a/n` inside and `b/n` across.
    Sbm { a: f64, b: f64 },
    /// Rank-one profile `p_ij = w_i w_j / sum_k w_k`.
    Weighted { weights: Vec<f64> },
}

/// Symmetric edge-probability matrix `P = (p_ij)` with zero diagonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbMatrix {
    n: usize,
    #[serde(flatten)]
    kind: ModelKind,
    #[serde(skip)]
    weight_sum: f64,
}

impl ProbMatrix {
    pub fn homogeneous(n: usize, p: f64) -> Result<Self> {
        check_n(n)?;
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("p = {p} is not in [0, 1]")));
        }
        Ok(Self {
            n,
            kind: ModelKind::Homogeneous { p },
            weight_sum: 0.0,
        })
    }

    pub fn sbm(n: usize, a: f64, b: f64) -> Result<Self> {
        check_n(n)?;
        if !n.is_multiple_of(2) {
            return Err(Error::InvalidDimension(format!(
                "the two-block model needs an even vertex count, got {n}"
            )));
        }
        let nf = n as f64;
        for (name, x) in [("a", a), ("b", b)] {
            if !(x >= 0.0 && x <= nf) {
                return Err(Error::InvalidParameter(format!(
                    "{name} = {x} must lie in [0, n] so that {name}/n is a probability"
                )));
            }
        }
        Ok(Self {
            n,
            kind: ModelKind::Sbm { a, b },
            weight_sum: 0.0,
        })
    }

    pub fn weighted(weights: Vec<f64>) -> Result<Self> {
        let n = weights.len();
        check_n(n)?;
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::InvalidProfile(format!(
                "weight {w} is not a finite nonnegative number"
            )));
        }
        let sum: f64 = weights.iter().sum();
        if sum <= 0.0 {
            return Err(Error::InvalidProfile("weights sum to zero".into()));
        }
        let max = weights.iter().fold(0.0_f64, |m, w| m.max(*w));
        if max * max > sum {
            return Err(Error::InvalidProfile(format!(
                "max weight squared {} exceeds the weight sum {sum}",
                max * max
            )));
        }
        Ok(Self {
            n,
            kind: ModelKind::Weighted { weights },
            weight_sum: sum,
        })
    }

    /// Rebuilds a validated matrix from its parts, e.g. after deserializing.
    pub fn from_kind(n: usize, kind: ModelKind) -> Result<Self> {
        match kind {
            ModelKind::Homogeneous { p } => Self::homogeneous(n, p),
            ModelKind::Sbm { a, b } => Self::sbm(n, a, b),
            ModelKind::Weighted { weights } => {
                if weights.len() != n {
                    return Err(Error::InvalidDimension(format!(
                        "{} weights for n = {n}",
                        weights.len()
                    )));
                }
                Self::weighted(weights)
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    /// Community of vertex `i` in the two-block convention: `+1` for the
    /// first half, `-1` for the second.
    pub fn community(&self, i: usize) -> i8 {
        if i < self.n / 2 {
            1
        } else {
            -1
        }
    }

    #[inline]
    pub fn p(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 0.0;
        }
        match &self.kind {
            ModelKind::Homogeneous { p } => *p,
            ModelKind::Sbm { a, b } => {
                let same = (i < self.n / 2) == (j < self.n / 2);
                (if same { a } else { b }) / self.n as f64
            }
            ModelKind::Weighted { weights } => weights[i] * weights[j] / self.weight_sum,
        }
    }

    /// `max_ij p_ij` over off-diagonal pairs.
    pub fn max_p(&self) -> f64 {
        match &self.kind {
            ModelKind::Homogeneous { p } => *p,
            ModelKind::Sbm { a, b } => a.max(*b) / self.n as f64,
            ModelKind::Weighted { weights } => {
                let mut sorted = weights.clone();
                sorted.sort_by(|x, y| y.total_cmp(x));
                sorted[0] * sorted[1] / self.weight_sum
            }
        }
    }

    /// `d = max_ij n p_ij`.
    pub fn max_expected_degree_scale(&self) -> f64 {
        self.n as f64 * self.max_p()
    }

    /// `dbar_i = sum_{j != i} p_ij`.
    pub fn expected_degrees(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| (0..self.n).filter(|&j| j != i).map(|j| self.p(i, j)).sum())
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: ProbMatrix = serde_json::from_str(text)?;
        Self::from_kind(raw.n, raw.kind)
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::InvalidDimension(format!(
            "need at least 2 vertices, got {n}"
        )))
    } else {
        Ok(())
    }
}

/// Uniforms `U_ij`, `i < j`, packed row by row.
#[derive(Debug, Clone, PartialEq)]
pub struct CoupledSample {
    n: usize,
    seed: u64,
    u: Vec<f64>,
}

impl CoupledSample {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn values(&self) -> &[f64] {
        &self.u
    }

    #[inline]
    fn index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.n);
        i * (2 * self.n - i - 1) / 2 + (j - i - 1)
    }

    /// `U_ij` for `i != j`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        self.u[self.index(i, j)]
    }
}

/// Draws `n(n-1)/2` uniforms for the pairs `i < j` in row-major order.
pub fn sample_uniforms(n: usize, seed: u64) -> Result<CoupledSample> {
    check_n(n)?;
    let mut stream = UniformStream::new(seed);
    let u = (0..n * (n - 1) / 2)
        .map(|_| stream.next_uniform())
        .collect();
    Ok(CoupledSample { n, seed, u })
}

/// A simple undirected graph as a dense symmetric 0/1 matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Adjacency {
    n: usize,
    bits: Vec<u8>,
}

impl std::fmt::Debug for Adjacency {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Adjacency(n={}, edges={})", self.n, self.edge_count())
    }
}

impl Adjacency {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            bits: vec![0; n * n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut a = Self {
            n,
            bits: vec![1; n * n],
        };
        for i in 0..n {
            a.bits[i * n + i] = 0;
        }
        a
    }

    /// Builds a graph from 0-based edges; loops and out-of-range endpoints
    /// are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut a = Self::empty(n);
        for &(i, j) in edges {
            if i == j || i >= n || j >= n {
                return Err(Error::InvalidParameter(format!(
                    "bad edge ({i}, {j}) for n = {n}"
                )));
            }
            a.insert(i, j);
        }
        Ok(a)
    }

    fn insert(&mut self, i: usize, j: usize) {
        self.bits[i * self.n + j] = 1;
        self.bits[j * self.n + i] = 1;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.n + j] != 0
    }

    pub fn edge_count(&self) -> usize {
        self.bits.iter().map(|&b| b as usize).sum::<usize>() / 2
    }

    /// Row sums.
    pub fn degrees(&self) -> Vec<f64> {
        self.bits
            .chunks_exact(self.n.max(1))
            .take(self.n)
            .map(|row| row.iter().map(|&b| b as u32).sum::<u32>() as f64)
            .collect()
    }

    pub fn has_isolated_vertex(&self) -> bool {
        self.degrees().contains(&0.0)
    }

    /// Every edge of `self` is also an edge of `other`.
    pub fn is_subgraph_of(&self, other: &Adjacency) -> bool {
        self.n == other.n && self.bits.iter().zip(&other.bits).all(|(a, b)| a <= b)
    }

    /// Edges `(i, j)` with `i < j` in lexicographic order, 0-based.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| {
            ((i + 1)..self.n)
                .filter(move |&j| self.has_edge(i, j))
                .map(move |j| (i, j))
        })
    }

    pub fn to_matrix(&self) -> SymMatrix {
        SymMatrix::from_upper_fn(self.n, |i, j| if self.has_edge(i, j) { 1.0 } else { 0.0 })
    }

    /// Edge-list text: one `i j` pair per line, 1-based, `i < j`, sorted.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (i, j) in self.edges() {
            writeln!(out, "{} {}", i + 1, j + 1).expect("write to String");
        }
        out
    }

    pub fn from_edge_list(n: usize, text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let parse = |s: Option<&str>| -> Result<usize> {
                s.and_then(|t| t.parse::<usize>().ok())
                    .filter(|&v| v >= 1)
                    .ok_or_else(|| {
                        Error::InvalidParameter(format!(
                            "line {}: malformed edge {line:?}",
                            lineno + 1
                        ))
                    })
            };
            let mut it = line.split_whitespace();
            let i = parse(it.next())?;
            let j = parse(it.next())?;
            edges.push((i - 1, j - 1));
        }
        Self::from_edges(n, &edges)
    }
}

/// `A_ij = 1` iff `U_ij < p_ij`.
pub fn threshold(sample: &CoupledSample, model: &ProbMatrix) -> Result<Adjacency> {
    if sample.n != model.n {
        return Err(Error::InvalidDimension(format!(
            "sample has n = {}, model has n = {}",
            sample.n, model.n
        )));
    }
    let n = sample.n;
    let mut a = Adjacency::empty(n);
    let mut idx = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            if sample.u[idx] < model.p(i, j) {
                a.insert(i, j);
            }
            idx += 1;
        }
    }
    Ok(a)
}

/// Two-level rank-one profile: the first `floor((1 - high_frac) n)` vertices
/// get weight `low_deg`, the rest `high_deg`.
pub fn figure1_profile(
    n: usize,
    low_deg: f64,
    high_deg: f64,
    high_frac: f64,
) -> Result<ProbMatrix> {
    if !(0.0..=1.0).contains(&high_frac) {
        return Err(Error::InvalidProfile(format!(
            "high fraction {high_frac} is not in [0, 1]"
        )));
    }
    let n_low = ((1.0 - high_frac) * n as f64).floor() as usize;
    let weights = (0..n)
        .map(|i| if i < n_low { low_deg } else { high_deg })
        .collect();
    ProbMatrix::weighted(weights)
}

/// `E A`: `p_ij` off the diagonal, zero on it.
pub fn expected_adjacency(model: &ProbMatrix) -> SymMatrix {
    SymMatrix::from_upper_fn(model.n, |i, j| model.p(i, j))
}
