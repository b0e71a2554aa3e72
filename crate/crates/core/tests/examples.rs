mod common;

use common::{dense_cholesky, random_spd};
use rlchol_core::matrix::permute_symmetric;
use rlchol_core::*;

fn two_by_two() -> (SymmetricSparseMatrix, FactorPanels) {
    // A = L Lᵀ with L = [[2, 0], [1, 2]]
    let a = SymmetricSparseMatrix::from_triplets(2, [(0, 0, 4.0), (1, 0, 2.0), (1, 1, 5.0)]).unwrap();
    let l = FactorStructure::of_matrix(&a);
    let p = detect_supernodes(&l, &build_etree(&l));
    let f = factor_rl(&a, &p, &mut HostBackend::new()).unwrap();
    (a, f)
}

fn factor_of(a: &SymmetricSparseMatrix) -> FactorPanels {
    let l = symbolic_factor(a, &build_etree(a));
    let p = detect_supernodes(&l, &build_etree(&l));
    factor_rl(a, &p, &mut HostBackend::new()).unwrap()
}

#[test]
fn two_by_two_factor_and_solves() {
    let (_, f) = two_by_two();
    assert_eq!((f.entry(0, 0), f.entry(1, 0), f.entry(1, 1)), (2.0, 1.0, 2.0));
    assert_eq!(forward_solve(&f, &[2.0, 5.0]).unwrap(), vec![1.0, 2.0]);
    assert_eq!(backward_solve(&f, &[1.0, 2.0]).unwrap(), vec![0.0, 1.0]);
}

#[test]
fn identity_factor_solves_are_identity() {
    let f = factor_of(&SymmetricSparseMatrix::identity(4));
    let b = [3.0, -1.0, 0.5, 7.0];
    assert_eq!(forward_solve(&f, &b).unwrap(), b);
    assert_eq!(backward_solve(&f, &b).unwrap(), b);
}

#[test]
fn solve_rejects_wrong_length() {
    let (_, f) = two_by_two();
    assert_eq!(
        forward_solve(&f, &[1.0]),
        Err(Error::Dimension { expected: 2, found: 1 })
    );
}

#[test]
fn zero_diagonal_is_singular_factor() {
    let a = SymmetricSparseMatrix::identity(2);
    let l = FactorStructure::of_matrix(&a);
    let p = detect_supernodes(&l, &build_etree(&l));
    let f = FactorPanels::zeros(&p);
    assert_eq!(forward_solve(&f, &[1.0, 1.0]), Err(Error::SingularFactor { column: 0 }));
    assert_eq!(backward_solve(&f, &[1.0, 1.0]), Err(Error::SingularFactor { column: 1 }));
}

#[test]
fn forward_solve_matches_dense_oracle() {
    let a = random_spd(30, 4, 7);
    let f = factor_of(&a);
    let b: Vec<f64> = (0..30).map(|i| (i as f64 * 0.37).sin()).collect();
    let y = forward_solve(&f, &b).unwrap();
    let l = dense_cholesky(30, &a.to_dense()).unwrap();
    let mut err = 0.0f64;
    for i in 0..30 {
        let mut s = 0.0;
        for k in 0..=i {
            s += l[i + k * 30] * y[k];
        }
        err = err.max((s - b[i]).abs());
    }
    assert!(err <= 1e-12 * common::max_abs(&b));
}

#[test]
fn residual_examples() {
    let a = SymmetricSparseMatrix::identity(3);
    let b = [1.0, 2.0, 3.0];
    assert_eq!(residual(&a, &b, &b).unwrap(), 0.0);
    assert_eq!(residual(&a, &[0.0; 3], &[0.0; 3]).unwrap(), 0.0);

    let a = random_spd(40, 5, 3);
    let f = factor_of(&a);
    let b: Vec<f64> = (0..40).map(|i| i as f64).collect();
    let x = solve(&f, &b).unwrap();
    let base = residual(&a, &x, &b).unwrap();
    let mut last = base;
    for eps in [1e-8, 1e-6, 1e-4] {
        let xp: Vec<f64> = x.iter().map(|v| v + eps).collect();
        let r = residual(&a, &xp, &b).unwrap();
        assert!(r > last);
        last = r;
    }
    assert!(base <= 1e-14);
}

#[test]
fn not_positive_definite_reports_columns() {
    // [[1, 2], [2, 1]]: second pivot is 1 - 4 < 0
    let a = SymmetricSparseMatrix::from_triplets(2, [(0, 0, 1.0), (1, 0, 2.0), (1, 1, 1.0)]).unwrap();
    let l = FactorStructure::of_matrix(&a);
    let p = detect_supernodes(&l, &build_etree(&l));
    let err = factor_rl(&a, &p, &mut HostBackend::new()).unwrap_err();
    assert_eq!(err, Error::NotPositiveDefinite { column: 1, original: None });
    assert!(err.to_string().contains("column 2"));

    // through the pipeline with a swap the original index is reported as well
    let options = AnalysisOptions {
        ordering: Some(Permutation::from_old_to_new(vec![1, 0]).unwrap()),
        ..AnalysisOptions::default()
    };
    let analysis = Analysis::new(&a, &options).unwrap();
    let err = analysis.factor_rlb(&mut HostBackend::new()).unwrap_err();
    assert_eq!(err, Error::NotPositiveDefinite { column: 1, original: Some(0) });
    assert!(err.to_string().contains("original column 1"));
}

#[test]
fn permute_matches_dense_oracle() {
    let a = random_spd(8, 3, 11);
    let perm = Permutation::from_old_to_new(vec![3, 7, 0, 5, 1, 6, 2, 4]).unwrap();
    let pa = permute_symmetric(&a, &perm).unwrap();
    let (d, pd) = (a.to_dense(), pa.to_dense());
    for j in 0..8 {
        for i in 0..8 {
            assert_eq!(pd[perm.apply(i) + 8 * perm.apply(j)], d[i + 8 * j]);
        }
    }
}

#[test]
fn analysis_report_on_grid() {
    let a = common::laplacian_2d(12);
    let analysis = Analysis::new(&a, &AnalysisOptions::default()).unwrap();
    let s = analysis.stats;
    assert_eq!(s.n, 144);
    assert!(s.supernodes <= s.fundamental_supernodes);
    assert!(s.storage_growth <= 0.25 + 1e-12);
    assert!(s.blocks <= s.blocks_before_refine);
    let f = analysis.factor_rl(&mut HostBackend::new()).unwrap();
    let b: Vec<f64> = (0..144).map(|i| 1.0 + i as f64).collect();
    let x = analysis.solve(&f, &b).unwrap();
    assert!(residual(&a, &x, &b).unwrap() <= 1e-14);
}
