#![allow(dead_code)]

use rlchol_core::{FactorStructure, SymmetricSparseMatrix};

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

pub fn example_matrix() -> SymmetricSparseMatrix {
    let mut t = Vec::new();
    for (j, rows) in EXAMPLE_COLUMNS.iter().enumerate() {
        for &r in rows.iter() {
            t.push((r - 1, j, if r - 1 == j { 16.0 } else { 1.0 }));
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

/// Writes `text` to a fresh file inside `dir` and returns its path.
pub fn write_file(dir: &std::path::Path, name: &str, text: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}
