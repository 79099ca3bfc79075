//! Dense symmetric eigensolver.
//!
//! Householder reduction to tridiagonal form followed by the implicit QL
//! iteration with Wilkinson-style shifts (the `tred2`/`tql2` pair of the
//! EISPACK lineage). Reflectors are stored in place and the orthogonal
//! factor is only formed when eigenvectors are requested, so the
//! eigenvalue-only path costs roughly `4n^3/3` flops.
//!
//! Eigenvectors are kept as the *rows* of a row-major array so that the
//! Givens rotations of the QL sweep touch two contiguous rows.

use crate::error::{Error, Result};
use crate::matrix::SymMatrix;

const MAX_QL_ITERATIONS: usize = 60;

/// Eigenvalues in ascending order with an orthonormal set of eigenvectors.
///
/// Each eigenvector is normalized so that its entry of largest magnitude is
/// positive (the lowest index wins ties), which makes the decomposition
/// deterministic.
#[derive(Debug, Clone)]
pub struct Spectrum {
    n: usize,
    values: Vec<f64>,
    vectors: Vec<f64>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, k: usize) -> f64 {
        self.values[k]
    }

    /// Unit eigenvector belonging to `values()[k]`.
    pub fn vector(&self, k: usize) -> &[f64] {
        &self.vectors[k * self.n..(k + 1) * self.n]
    }

    /// `V diag(values) V^T`.
    pub fn reconstruct(&self) -> SymMatrix {
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for k in 0..n {
            let v = self.vector(k);
            let lambda = self.values[k];
            for i in 0..n {
                let s = lambda * v[i];
                let row = &mut out[i * n..(i + 1) * n];
                for (o, &vj) in row.iter_mut().zip(v) {
                    *o += s * vj;
                }
            }
        }
        // Accumulated round-off leaves the product only nearly symmetric.
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = 0.5 * (out[i * n + j] + out[j * n + i]);
                out[i * n + j] = avg;
                out[j * n + i] = avg;
            }
        }
        SymMatrix::from_row_major(n, out).expect("symmetrized")
    }
}

/// Full eigendecomposition of a symmetric matrix.
pub fn eig_sym(m: &SymMatrix) -> Result<Spectrum> {
    check_finite(m)?;
    let n = m.n();
    if n == 0 {
        return Ok(Spectrum {
            n,
            values: Vec::new(),
            vectors: Vec::new(),
        });
    }
    let mut a = m.as_slice().to_vec();
    let (mut d, mut e, betas) = tridiagonalize(&mut a, n);
    let mut z = accumulate_reflectors(&a, &betas, n);
    tql(&mut d, &mut e, Some(&mut z), n)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]).then(i.cmp(&j)));
    let values = order.iter().map(|&k| d[k]).collect();
    let mut vectors = Vec::with_capacity(n * n);
    for &k in &order {
        let row = &z[k * n..(k + 1) * n];
        let mut pivot = 0;
        for (i, x) in row.iter().enumerate() {
            if x.abs() > row[pivot].abs() {
                pivot = i;
            }
        }
        let sign = if row[pivot] < 0.0 { -1.0 } else { 1.0 };
        vectors.extend(row.iter().map(|x| sign * x));
    }
    Ok(Spectrum { n, values, vectors })
}

/// Eigenvalues only, ascending.
pub fn eigvals_sym(m: &SymMatrix) -> Result<Vec<f64>> {
    check_finite(m)?;
    let n = m.n();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut a = m.as_slice().to_vec();
    let (mut d, mut e, _) = tridiagonalize(&mut a, n);
    tql(&mut d, &mut e, None, n)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Spectral norm `max_k |lambda_k|`.
pub fn spectral_norm(m: &SymMatrix) -> Result<f64> {
    let values = eigvals_sym(m)?;
    Ok(match (values.first(), values.last()) {
        (Some(lo), Some(hi)) => lo.abs().max(hi.abs()),
        _ => 0.0,
    })
}

fn check_finite(m: &SymMatrix) -> Result<()> {
    if m.is_finite() {
        Ok(())
    } else {
        Err(Error::Numeric("matrix has non-finite entries".into()))
    }
}

/// Reduces `a` (row-major, full storage) to tridiagonal form `Q^T A Q`.
///
/// Returns `(diag, offdiag, betas)` where `offdiag[k] = T[k][k+1]` and
/// `offdiag[n-1] = 0`. On return row `k` of `a` holds the Householder vector
/// of step `k` in columns `k+1..n`, with `H_k = I - betas[k] v v^T`.
///
/// The rank-two update of step `k` and the matrix-vector product of step
/// `k+1` share a single pass over the trailing block: the first updated row
/// yields the next reflector, and each later row feeds the next product as
/// soon as it has been updated.
fn tridiagonalize(a: &mut [f64], n: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut betas = vec![0.0; n];
    if n == 1 {
        d[0] = a[0];
        return (d, e, betas);
    }
    let mut v = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut v_next = vec![0.0; n];
    let mut w_next = vec![0.0; n];

    d[0] = a[0];
    let (alpha, beta) = householder(&mut a[1..n]);
    e[0] = alpha;
    betas[0] = beta;
    v[..n - 1].copy_from_slice(&a[1..n]);
    if beta != 0.0 {
        for i in 1..n {
            w[i - 1] = beta * dot(&a[i * n + 1..(i + 1) * n], &v[..n - 1]);
        }
        finish_w(&mut w[..n - 1], &v[..n - 1], beta);
    }

    for k in 0..n - 1 {
        let lo = k + 1;
        let m = n - lo;
        let beta = betas[k];
        let (vk, wk) = (&v[..m], &w[..m]);

        let row = &mut a[lo * n + lo..(lo + 1) * n];
        if beta != 0.0 {
            rank2_update(row, vk[0], wk[0], vk, wk);
        }
        d[lo] = row[0];
        if lo == n - 1 {
            break;
        }

        let (alpha, beta_next) = householder(&mut row[1..]);
        e[lo] = alpha;
        betas[lo] = beta_next;
        v_next[..m - 1].copy_from_slice(&row[1..]);
        let vn = &v_next[..m - 1];

        for i in (lo + 1)..n {
            let r = i - lo;
            let row = &mut a[i * n + lo..(i + 1) * n];
            if beta != 0.0 {
                rank2_update(row, vk[r], wk[r], vk, wk);
            }
            if beta_next != 0.0 {
                w_next[r - 1] = beta_next * dot(&row[1..], vn);
            }
        }
        if beta_next != 0.0 {
            finish_w(&mut w_next[..m - 1], vn, beta_next);
        }
        std::mem::swap(&mut v, &mut v_next);
        std::mem::swap(&mut w, &mut w_next);
    }
    e[n - 1] = 0.0;
    (d, e, betas)
}

/// Overwrites `x` with the Householder vector `v` such that
/// `(I - beta v v^T) x = alpha e_1`; returns `(alpha, beta)`. A column that
/// needs no reflection gives `beta = 0` and a zeroed `x`.
fn householder(x: &mut [f64]) -> (f64, f64) {
    let sigma: f64 = x[1..].iter().map(|t| t * t).sum();
    let x0 = x[0];
    if sigma == 0.0 {
        x.iter_mut().for_each(|t| *t = 0.0);
        return (x0, 0.0);
    }
    let norm = (x0 * x0 + sigma).sqrt();
    let alpha = if x0 >= 0.0 { -norm } else { norm };
    let beta = 1.0 / (norm * norm - alpha * x0);
    x[0] = x0 - alpha;
    (alpha, beta)
}

/// Turns `p = beta S v` into `w = p - (beta p.v / 2) v`, so that
/// `H S H = S - v w^T - w v^T`.
fn finish_w(p: &mut [f64], v: &[f64], beta: f64) {
    let kappa = 0.5 * beta * dot(p, v);
    for (pi, &vi) in p.iter_mut().zip(v) {
        *pi -= kappa * vi;
    }
}

#[inline]
fn rank2_update(row: &mut [f64], vi: f64, wi: f64, v: &[f64], w: &[f64]) {
    for ((s, &vj), &wj) in row.iter_mut().zip(v).zip(w) {
        *s -= vi * wj + wi * vj;
    }
}

/// Forms `Q^T` (row-major) from the stored reflectors, i.e. the rows of the
/// result are the columns of `Q = H_0 H_1 ... H_{n-2}`.
fn accumulate_reflectors(a: &[f64], betas: &[f64], n: usize) -> Vec<f64> {
    let mut q = vec![0.0; n * n];
    for i in 0..n {
        q[i * n + i] = 1.0;
    }
    let mut w = vec![0.0; n];
    // Backward accumulation: Q <- H_k Q only touches the trailing block.
    for k in (0..n.saturating_sub(1)).rev() {
        let beta = betas[k];
        if beta == 0.0 {
            continue;
        }
        let lo = k + 1;
        let v = &a[k * n + lo..k * n + n];
        let w = &mut w[lo..n];
        w.iter_mut().for_each(|t| *t = 0.0);
        for (r, &vr) in v.iter().enumerate() {
            if vr == 0.0 {
                continue;
            }
            let row = &q[(lo + r) * n + lo..(lo + r) * n + n];
            for (wt, &qt) in w.iter_mut().zip(row) {
                *wt += vr * qt;
            }
        }
        for (r, &vr) in v.iter().enumerate() {
            let s = beta * vr;
            if s == 0.0 {
                continue;
            }
            let row = &mut q[(lo + r) * n + lo..(lo + r) * n + n];
            for (qt, &wt) in row.iter_mut().zip(w.iter()) {
                *qt -= s * wt;
            }
        }
    }
    transpose_in_place(&mut q, n);
    q
}

fn transpose_in_place(q: &mut [f64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            q.swap(i * n + j, j * n + i);
        }
    }
}

/// Implicit QL on the tridiagonal `(d, e)`; when `z` is given its rows are
/// rotated alongside so that row `k` ends up as the eigenvector of `d[k]`.
fn tql(d: &mut [f64], e: &mut [f64], mut z: Option<&mut Vec<f64>>, n: usize) -> Result<()> {
    let eps = f64::EPSILON;
    let mut shift_total = 0.0;
    let mut tst1 = 0.0_f64;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_QL_ITERATIONS {
                    return Err(Error::Numeric(format!(
                        "QL iteration did not converge for eigenvalue {l}"
                    )));
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                shift_total += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    let h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(z) = z.as_deref_mut() {
                        let (lower, upper) = z.split_at_mut((i + 1) * n);
                        let zi = &mut lower[i * n..];
                        let zi1 = &mut upper[..n];
                        for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                            let t = *b;
                            *b = s * *a + c * t;
                            *a = c * *a - s * t;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += shift_total;
        e[l] = 0.0;
    }
    Ok(())
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    // Four independent accumulators let the compiler vectorize the loop.
    let mut acc = [0.0; 4];
    let chunks_a = a.chunks_exact(4);
    let chunks_b = b.chunks_exact(4);
    let rem = chunks_a
        .remainder()
        .iter()
        .zip(chunks_b.remainder())
        .map(|(x, y)| x * y)
        .sum::<f64>();
    for (ca, cb) in chunks_a.zip(chunks_b) {
        for t in 0..4 {
            acc[t] += ca[t] * cb[t];
        }
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + rem
}
