//! Degrees, regularization and normalized Laplacians.

use crate::csv::fmt_f64;
use crate::eigen::Spectrum;
use crate::error::{Error, Result};
use crate::graphs::Adjacency;
use crate::matrix::SymMatrix;

pub use crate::eigen::{eig_sym, eigvals_sym, spectral_norm};

/// Vertex degrees (possibly shifted by a regularization constant).
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeVector(Vec<f64>);

impl DegreeVector {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    /// Row sums of a weighted adjacency matrix.
    pub fn of_matrix(m: &SymMatrix) -> Self {
        Self(m.row_sums())
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    /// `d_i + tau` for every vertex.
    pub fn shifted(&self, tau: f64) -> Self {
        Self(self.0.iter().map(|d| d + tau).collect())
    }

    fn check_positive(&self) -> Result<()> {
        match self.0.iter().position(|&d| !(d > 0.0)) {
            Some(vertex) => Err(Error::ZeroDegree {
                vertex,
                degree: self.0[vertex],
            }),
            None => Ok(()),
        }
    }
}

pub fn degrees(a: &Adjacency) -> DegreeVector {
    DegreeVector(a.degrees())
}

fn check_tau(tau: f64) -> Result<()> {
    if tau >= 0.0 && tau.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "tau = {tau} must be finite and nonnegative"
        )))
    }
}

/// `M + (tau/n) 1 1^T`; the diagonal receives `tau/n` as well.
pub fn regularize(m: &SymMatrix, tau: f64) -> Result<SymMatrix> {
    check_tau(tau)?;
    if tau == 0.0 {
        return Ok(m.clone());
    }
    Ok(m.add_constant(tau / m.n() as f64))
}

/// `I - D^{-1/2} M D^{-1/2}` with `D = diag(d)`.
pub fn laplacian(m: &SymMatrix, d: &DegreeVector) -> Result<SymMatrix> {
    if d.len() != m.n() {
        return Err(Error::InvalidDimension(format!(
            "{} degrees for a {}x{} matrix",
            d.len(),
            m.n(),
            m.n()
        )));
    }
    d.check_positive()?;
    let inv_sqrt: Vec<f64> = d.values().iter().map(|x| 1.0 / x.sqrt()).collect();
    Ok(m.scale_sym(&inv_sqrt).identity_minus())
}

/// A regularized weighted graph together with its Laplacian.
#[derive(Debug, Clone)]
pub struct RegularizedLaplacian {
    /// `M_tau = M + (tau/n) J`.
    pub regularized: SymMatrix,
    /// `deg(M) + tau`.
    pub degrees: DegreeVector,
    pub laplacian: SymMatrix,
}

/// Builds `L(M_tau)` using degrees `deg(M) + tau`.
pub fn regularized_laplacian(m: &SymMatrix, tau: f64) -> Result<RegularizedLaplacian> {
    let regularized = regularize(m, tau)?;
    let degrees = DegreeVector::of_matrix(m).shifted(tau);
    let laplacian = laplacian(&regularized, &degrees)?;
    Ok(RegularizedLaplacian {
        regularized,
        degrees,
        laplacian,
    })
}

/// Frobenius norm `sqrt(sum_ij m_ij^2)`.
pub fn hs_norm(m: &SymMatrix) -> f64 {
    m.as_slice().iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Kernel vector of the Laplacian: `v0(i) = sqrt(d_i) / sqrt(sum_j d_j)`.
pub fn v0(d: &DegreeVector) -> Result<Vec<f64>> {
    d.check_positive()?;
    let total = d.sum().sqrt();
    Ok(d.values().iter().map(|x| x.sqrt() / total).collect())
}

/// `L(E A_tau)` for the homogeneous model, together with its closed-form
/// spectral norm `1 + p / ((n-1)p + tau)`.
pub fn expected_reg_laplacian_homog(n: usize, p: f64, tau: f64) -> Result<(SymMatrix, f64)> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p = {p} is not in [0, 1]")));
    }
    check_tau(tau)?;
    let degree = (n as f64 - 1.0) * p + tau;
    if !(degree > 0.0) {
        return Err(Error::ZeroDegree { vertex: 0, degree });
    }
    let ebar = SymMatrix::from_upper_fn(n, |i, j| if i == j { 0.0 } else { p });
    let reg = regularized_laplacian(&ebar, tau)?;
    Ok((reg.laplacian, 1.0 + p / degree))
}

/// `index,eigenvalue` rows (1-based index, ascending eigenvalues).
pub fn spectrum_csv(values: &[f64]) -> String {
    let mut out = String::from("index,eigenvalue\n");
    for (k, v) in values.iter().enumerate() {
        out.push_str(&format!("{},{}\n", k + 1, fmt_f64(*v)));
    }
    out
}

/// Dense rows, comma separated.
pub fn matrix_csv(m: &SymMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.n() {
        let row: Vec<String> = m.row(i).iter().map(|x| fmt_f64(*x)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Eigenvector of the `k`-th smallest eigenvalue.
pub fn eigenvector(s: &Spectrum, k: usize) -> &[f64] {
    s.vector(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Adjacency {
        Adjacency::from_edges(3, &[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn degree_examples() {
        assert_eq!(degrees(&Adjacency::empty(3)).values(), &[0.0, 0.0, 0.0]);
        assert_eq!(degrees(&path3()).values(), &[1.0, 2.0, 1.0]);
        assert_eq!(degrees(&Adjacency::complete(4)).values(), &[3.0; 4]);
    }

    #[test]
    fn regularize_examples() {
        let ones = regularize(&SymMatrix::zeros(3), 3.0).unwrap();
        assert!(ones.as_slice().iter().all(|&x| x == 1.0));
        let a = path3().to_matrix();
        assert_eq!(regularize(&a, 0.0).unwrap(), a);
        let k2 = regularize(&Adjacency::complete(2).to_matrix(), 1.0).unwrap();
        assert_eq!(k2.as_slice(), &[0.5, 1.5, 1.5, 0.5]);
        assert!(matches!(
            regularize(&a, -1.0),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn laplacian_of_empty_regularized_graph() {
        let n = 6;
        let reg = regularized_laplacian(&SymMatrix::zeros(n), 2.0).unwrap();
        let vals = eigvals_sym(&reg.laplacian).unwrap();
        assert!(vals[0].abs() < 1e-14);
        assert!(vals[1..].iter().all(|v| (v - 1.0).abs() < 1e-14));
    }

    #[test]
    fn laplacian_path3() {
        let a = path3();
        let l = laplacian(&a.to_matrix(), &degrees(&a)).unwrap();
        let s = eig_sym(&l).unwrap();
        for (v, e) in s.values().iter().zip([0.0, 1.0, 2.0]) {
            assert!((v - e).abs() < 1e-12);
        }
        assert!((spectral_norm(&l).unwrap() - 2.0).abs() < 1e-12);
        // Kernel vector proportional to (1, sqrt 2, 1).
        let k = s.vector(0);
        let r = 2.0_f64.sqrt();
        assert!(
            (k[0] - 0.5).abs() < 1e-12
                && (k[1] - r / 2.0).abs() < 1e-12
                && (k[2] - 0.5).abs() < 1e-12
        );
    }

    #[test]
    fn laplacian_complete_graph() {
        for n in 3..=10 {
            let a = Adjacency::complete(n);
            let l = laplacian(&a.to_matrix(), &degrees(&a)).unwrap();
            let vals = eigvals_sym(&l).unwrap();
            let top = n as f64 / (n as f64 - 1.0);
            assert!(vals[0].abs() < 1e-12);
            assert!(vals[1..].iter().all(|v| (v - top).abs() < 1e-12));
        }
    }

    #[test]
    fn laplacian_rejects_zero_degree() {
        let a = Adjacency::from_edges(3, &[(0, 1)]).unwrap();
        let err = laplacian(&a.to_matrix(), &degrees(&a)).unwrap_err();
        assert!(matches!(err, Error::ZeroDegree { vertex: 2, .. }));
    }

    #[test]
    fn hs_norm_examples() {
        assert_eq!(hs_norm(&SymMatrix::identity(4)), 2.0);
        assert_eq!(hs_norm(&SymMatrix::zeros(3)), 0.0);
        let swap = SymMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!((hs_norm(&swap) - 2.0_f64.sqrt()).abs() < 1e-15);
        assert!((spectral_norm(&swap).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn v0_examples() {
        let k = v0(&degrees(&Adjacency::complete(5))).unwrap();
        assert!(k.iter().all(|x| (x - 1.0 / 5.0_f64.sqrt()).abs() < 1e-15));
        let p = v0(&degrees(&path3())).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-15);
        assert!((p[1] - 1.0 / 2.0_f64.sqrt()).abs() < 1e-15);
        assert!(v0(&degrees(&Adjacency::empty(2))).is_err());
    }

    #[test]
    fn expected_laplacian_closed_form() {
        let (_, norm) = expected_reg_laplacian_homog(8, 0.0, 2.0).unwrap();
        assert_eq!(norm, 1.0);
        let (l, norm) = expected_reg_laplacian_homog(11, 0.1, 0.0).unwrap();
        assert!((norm - 1.1).abs() < 1e-15);
        assert!((spectral_norm(&l).unwrap() - 1.1).abs() < 1e-12);
        let (_, norm) = expected_reg_laplacian_homog(1000, 0.007, 7.0).unwrap();
        assert!((norm - (1.0 + 0.007 / (999.0 * 0.007 + 7.0))).abs() < 1e-15);
        assert!(expected_reg_laplacian_homog(5, 0.0, 0.0).is_err());
    }

    #[test]
    fn csv_exports() {
        assert_eq!(
            spectrum_csv(&[0.0, 1.5]),
            "index,eigenvalue\n1,0.0000000000000000e0\n2,1.5000000000000000e0\n"
        );
        let m = SymMatrix::identity(2);
        assert_eq!(
            matrix_csv(&m),
            "1.0000000000000000e0,0.0000000000000000e0\n0.0000000000000000e0,1.0000000000000000e0\n"
        );
    }
}
