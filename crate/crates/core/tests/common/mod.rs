#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rlchol_core::symbolic::FactorStructure;
use rlchol_core::SymmetricSparseMatrix;

/// Lower-triangular pattern of the 15-column worked example (1-based rows
/// per column, diagonal first).
pub const EXAMPLE_COLUMNS: [&[usize]; 15] = [
    &[1, 2, 6, 7, 14],
    &[2, 6, 7, 14],
    &[3, 4, 8, 9, 13],
    &[4, 8, 9, 13],
    &[5, 6, 7, 13, 14, 15],
    &[6, 7, 13, 14, 15],
    &[7, 13, 14, 15],
    &[8, 9, 12, 13],
    &[9, 12, 13],
    &[10, 11, 14, 15],
    &[11, 14, 15],
    &[12, 13, 14, 15],
    &[13, 14, 15],
    &[14, 15],
    &[15],
];

/// The worked example as a matrix: 16 on the diagonal, 1 elsewhere.
pub fn example_matrix() -> SymmetricSparseMatrix {
    let mut t = Vec::new();
    for (j, rows) in EXAMPLE_COLUMNS.iter().enumerate() {
        for &r in rows.iter() {
            let v = if r - 1 == j { 16.0 } else { 1.0 };
            t.push((r - 1, j, v));
        }
    }
    SymmetricSparseMatrix::from_triplets(15, t).unwrap()
}

pub fn example_structure() -> FactorStructure {
    FactorStructure::from_columns(
        EXAMPLE_COLUMNS
            .iter()
            .map(|rows| rows.iter().map(|r| r - 1).collect())
            .collect(),
    )
    .unwrap()
}

/// 5-point Laplacian on a `k x k` grid.
pub fn laplacian_2d(k: usize) -> SymmetricSparseMatrix {
    let idx = |x: usize, y: usize| x + k * y;
    let mut t = Vec::new();
    for y in 0..k {
        for x in 0..k {
            t.push((idx(x, y), idx(x, y), 4.0));
            if x + 1 < k {
                t.push((idx(x + 1, y), idx(x, y), -1.0));
            }
            if y + 1 < k {
                t.push((idx(x, y + 1), idx(x, y), -1.0));
            }
        }
    }
    SymmetricSparseMatrix::from_triplets(k * k, t).unwrap()
}

/// 7-point Laplacian on a `k x k x k` grid.
pub fn laplacian_3d(k: usize) -> SymmetricSparseMatrix {
    let idx = |x: usize, y: usize, z: usize| x + k * (y + k * z);
    let mut t = Vec::new();
    for z in 0..k {
        for y in 0..k {
            for x in 0..k {
                let i = idx(x, y, z);
                t.push((i, i, 6.0));
                if x + 1 < k {
                    t.push((idx(x + 1, y, z), i, -1.0));
                }
                if y + 1 < k {
                    t.push((idx(x, y + 1, z), i, -1.0));
                }
                if z + 1 < k {
                    t.push((idx(x, y, z + 1), i, -1.0));
                }
            }
        }
    }
    SymmetricSparseMatrix::from_triplets(k * k * k, t).unwrap()
}

/// Random symmetric pattern with roughly `degree` off-diagonals per column,
/// values in [-1, 1], made SPD by strict diagonal dominance.
pub fn random_spd(n: usize, degree: usize, seed: u64) -> SymmetricSparseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Vec::new();
    let mut rowsum = vec![0.0f64; n];
    for j in 0..n {
        for _ in 0..degree {
            let i = rng.gen_range(0..n);
            if i == j {
                continue;
            }
            let v: f64 = rng.gen_range(-1.0..1.0);
            t.push((i.max(j), i.min(j), v));
            rowsum[i] += v.abs();
            rowsum[j] += v.abs();
        }
    }
    for (j, s) in rowsum.iter().enumerate() {
        t.push((j, j, s + 1.0 + rng.gen_range(0.0..1.0)));
    }
    SymmetricSparseMatrix::from_triplets(n, t).unwrap()
}

/// Dense column-major Cholesky factor (lower), by the textbook
/// column-by-column recurrence.
pub fn dense_cholesky(n: usize, a: &[f64]) -> Option<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut d = a[j + j * n];
        for k in 0..j {
            d -= l[j + k * n] * l[j + k * n];
        }
        if d <= 0.0 {
            return None;
        }
        let d = d.sqrt();
        l[j + j * n] = d;
        for i in j + 1..n {
            let mut s = a[i + j * n];
            for k in 0..j {
                s -= l[i + k * n] * l[j + k * n];
            }
            l[i + j * n] = s / d;
        }
    }
    Some(l)
}

/// Dense lower-triangular pattern of the Cholesky factor by symbolic
/// elimination on a boolean matrix.
pub fn dense_symbolic(a: &SymmetricSparseMatrix) -> Vec<Vec<usize>> {
    let n = a.n();
    let mut m = vec![vec![false; n]; n];
    for (i, j, _) in a.iter() {
        m[i][j] = true;
        m[j][i] = true;
    }
    for k in 0..n {
        let below: Vec<usize> = (k + 1..n).filter(|&i| m[i][k]).collect();
        for &i in &below {
            for &j in &below {
                m[i][j] = true;
            }
        }
    }
    (0..n)
        .map(|j| (j..n).filter(|&i| i == j || m[i][j]).collect())
        .collect()
}

pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}
