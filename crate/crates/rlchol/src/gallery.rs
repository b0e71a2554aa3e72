//! Synthetic SPD test matrices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rlchol_core::SymmetricSparseMatrix;

/// Five-point Laplacian on a `k x k` grid (`n = k^2`).
pub fn laplacian_2d(k: usize) -> SymmetricSparseMatrix {
    let id = |x: usize, y: usize| x + k * y;
    let mut t = Vec::with_capacity(3 * k * k);
    for y in 0..k {
        for x in 0..k {
            t.push((id(x, y), id(x, y), 4.0));
            if x + 1 < k {
                t.push((id(x + 1, y), id(x, y), -1.0));
            }
            if y + 1 < k {
                t.push((id(x, y + 1), id(x, y), -1.0));
            }
        }
    }
    SymmetricSparseMatrix::from_triplets(k * k, t).expect("indices in range")
}

/// Seven-point Laplacian on a `k x k x k` grid (`n = k^3`).
pub fn laplacian_3d(k: usize) -> SymmetricSparseMatrix {
    let id = |x: usize, y: usize, z: usize| x + k * (y + k * z);
    let mut t = Vec::with_capacity(4 * k * k * k);
    for z in 0..k {
        for y in 0..k {
            for x in 0..k {
                let c = id(x, y, z);
                t.push((c, c, 6.0));
                if x + 1 < k {
                    t.push((id(x + 1, y, z), c, -1.0));
                }
                if y + 1 < k {
                    t.push((id(x, y + 1, z), c, -1.0));
                }
                if z + 1 < k {
                    t.push((id(x, y, z + 1), c, -1.0));
                }
            }
        }
    }
    SymmetricSparseMatrix::from_triplets(k * k * k, t).expect("indices in range")
}

/// Random sparse matrix with about `degree` off-diagonal entries per
/// column, made strictly diagonally dominant and therefore SPD.
pub fn random_spd(n: usize, degree: usize, seed: u64) -> SymmetricSparseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Vec::new();
    let mut row_sum = vec![0.0f64; n];
    if n > 1 {
        for j in 0..n {
            for _ in 0..degree {
                let i = rng.gen_range(0..n);
                if i == j {
                    continue;
                }
                let v: f64 = rng.gen_range(-1.0..1.0);
                row_sum[i] += v.abs();
                row_sum[j] += v.abs();
                t.push((i.max(j), i.min(j), v));
            }
        }
    }
    t.extend(row_sum.iter().enumerate().map(|(j, s)| (j, j, s + 1.0)));
    SymmetricSparseMatrix::from_triplets(n, t).expect("indices in range")
}
