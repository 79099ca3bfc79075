use lapconc::clustering::{misclassification, CommunityLabels};
use lapconc::concentration::{bound_new, bound_old, laplacian_split, BoundParams};
use lapconc::eigen::{eig_sym, eigvals_sym, spectral_norm};
use lapconc::graphs::{sample_uniforms, threshold, ProbMatrix};
use lapconc::harness::SummaryStats;
use lapconc::matrix::SymMatrix;
use lapconc::rng::trial_seed;
use lapconc::spectra::{hs_norm, regularized_laplacian, v0};
use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;
use std::collections::HashSet;

fn graph(n: usize, p: f64, seed: u64) -> SymMatrix {
    let model = ProbMatrix::homogeneous(n, p).unwrap();
    threshold(&sample_uniforms(n, seed).unwrap(), &model)
        .unwrap()
        .to_matrix()
}

fn random_symmetric(n: usize, seed: u64) -> SymMatrix {
    let u = sample_uniforms(n + 1, seed).unwrap();
    SymMatrix::from_upper_fn(n, |i, j| 2.0 * u.get(i, j + 1) - 1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn coupled_graphs_are_nested(n in 2usize..40, seed in any::<u64>(), p in 0.0f64..=1.0, q in 0.0f64..=1.0) {
        let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
        let u = sample_uniforms(n, seed).unwrap();
        let a = threshold(&u, &ProbMatrix::homogeneous(n, lo).unwrap()).unwrap();
        let b = threshold(&u, &ProbMatrix::homogeneous(n, hi).unwrap()).unwrap();
        prop_assert!(a.is_subgraph_of(&b));
        prop_assert!(a.edge_count() <= b.edge_count());
    }

    #[test]
    fn laplacian_spectrum_in_unit_range(n in 2usize..30, seed in any::<u64>(), p in 0.0f64..=1.0, tau in 0.01f64..50.0) {
        let reg = regularized_laplacian(&graph(n, p, seed), tau).unwrap();
        let vals = eigvals_sym(&reg.laplacian).unwrap();
        prop_assert!(vals[0] >= -1e-12 && vals[n - 1] <= 2.0 + 1e-12);
        prop_assert!(vals[0].abs() < 1e-10);
        // The square-root degree vector spans the kernel.
        let k = reg.laplacian.matvec(&v0(&reg.degrees).unwrap());
        prop_assert!(k.iter().all(|x| x.abs() < 1e-10));
    }

    #[test]
    fn spectral_norm_below_hs_norm(n in 1usize..25, seed in any::<u64>()) {
        let m = random_symmetric(n, seed);
        prop_assert!(spectral_norm(&m).unwrap() <= hs_norm(&m) * (1.0 + 1e-12));
    }

    #[test]
    fn split_adds_up(n in 4usize..30, seed in any::<u64>(), p in 0.05f64..=1.0, tau in 0.1f64..20.0) {
        let model = ProbMatrix::homogeneous(n, p).unwrap();
        let a = threshold(&sample_uniforms(n, seed).unwrap(), &model).unwrap();
        let s = laplacian_split(&a, &model, tau).unwrap();
        prop_assert!(s.delta.max_abs_diff(&(&s.b1 + &s.b2)) <= 1e-12);
        let (d, b1, b2) = (spectral_norm(&s.delta).unwrap(), spectral_norm(&s.b1).unwrap(), spectral_norm(&s.b2).unwrap());
        prop_assert!(d <= b1 + b2 + 1e-12);
    }

    #[test]
    fn bound_ratio_identity(tau in 1e-3f64..1e4, d in 1e-3f64..1e4, r in 1.0f64..10.0) {
        let bp = BoundParams { tau, d, r, ..BoundParams::default() };
        let ratio = bound_old(&bp).unwrap() / bound_new(&bp).unwrap();
        let want = (1.0 + d / tau).powi(2);
        prop_assert!((ratio - want).abs() <= 1e-12 * want);
    }

    #[test]
    fn misclassification_is_flip_invariant(bits in proptest::collection::vec(any::<bool>(), 2..60)) {
        let n = bits.len() & !1;
        let labels = CommunityLabels::new(bits[..n].iter().map(|&b| if b { 1 } else { -1 }).collect()).unwrap();
        let truth = CommunityLabels::planted(n);
        let e = misclassification(&labels, &truth).unwrap();
        prop_assert_eq!(e, misclassification(&labels.flipped(), &truth).unwrap());
        prop_assert!((0.0..=0.5).contains(&e));
    }

    #[test]
    fn summary_is_ordered(xs in proptest::collection::vec(-1e6f64..1e6, 1..50), q in 0.0f64..=1.0) {
        let s = SummaryStats::from_samples(&xs, q).unwrap();
        prop_assert!(s.min <= s.median && s.median <= s.max);
        prop_assert!(s.min <= s.quantile && s.quantile <= s.max);
        prop_assert_eq!(s.count, xs.len());
    }

    #[test]
    fn eigensolver_matches_nalgebra(n in 1usize..40, seed in any::<u64>()) {
        let m = random_symmetric(n, seed);
        let ours = eig_sym(&m).unwrap();
        let reference = SymmetricEigen::new(DMatrix::from_row_slice(n, n, m.as_slice()));
        let mut theirs: Vec<f64> = reference.eigenvalues.iter().copied().collect();
        theirs.sort_by(f64::total_cmp);
        let scale = m.max_abs().max(1.0);
        for (a, b) in ours.values().iter().zip(&theirs) {
            prop_assert!((a - b).abs() <= 1e-12 * scale * n as f64, "{} vs {}", a, b);
        }
        // Residuals and orthonormality of our eigenvectors.
        for k in 0..n {
            let v = ours.vector(k);
            let mv = m.matvec(v);
            let res = mv.iter().zip(v).map(|(x, y)| (x - ours.value(k) * y).abs()).fold(0.0, f64::max);
            prop_assert!(res <= 1e-11 * scale * n as f64);
            let norm: f64 = v.iter().map(|x| x * x).sum();
            prop_assert!((norm - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn trial_seeds_are_distinct() {
    for master in [0u64, 1, 42, u64::MAX] {
        let seeds: HashSet<u64> = (0..200_000).map(|t| trial_seed(master, t)).collect();
        assert_eq!(seeds.len(), 200_000);
    }
}

#[test]
fn eigensolver_matches_nalgebra_on_a_laplacian() {
    let reg = regularized_laplacian(&graph(300, 0.05, 17), 3.0).unwrap();
    let ours = eigvals_sym(&reg.laplacian).unwrap();
    let reference =
        SymmetricEigen::new(DMatrix::from_row_slice(300, 300, reg.laplacian.as_slice()));
    let mut theirs: Vec<f64> = reference.eigenvalues.iter().copied().collect();
    theirs.sort_by(f64::total_cmp);
    let worst = ours
        .iter()
        .zip(&theirs)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    assert!(worst < 1e-12, "max eigenvalue difference {worst}");
}
