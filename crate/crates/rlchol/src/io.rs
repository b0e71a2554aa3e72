//! Matrix Market files, permutation files and plain vector files.
//!
//! Matrix Market input must be `matrix coordinate {real|integer|pattern}
//! symmetric`. Entries given above the diagonal are mirrored below it,
//! duplicates are summed and missing diagonals become explicit zeros.
//! Pattern files get 1 off the diagonal and `degree + 1` on it, which
//! makes them diagonally dominant; repeated pattern entries collapse.

use std::collections::BTreeSet;
use std::io::{BufRead, Write};

use rlchol_core::{Permutation, SymmetricSparseMatrix};

use crate::error::{parse_error, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    Real,
    Pattern,
}

/// A parsed Matrix Market file with its `%` comment lines (prefix removed).
#[derive(Debug, Clone)]
pub struct MatrixMarket {
    pub matrix: SymmetricSparseMatrix,
    pub comments: Vec<String>,
}

fn parse_header(line: &str) -> Result<Field> {
    let tokens: Vec<String> = line.split_whitespace().map(str::to_ascii_lowercase).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" {
        return Err(parse_error(1, "expected '%%MatrixMarket matrix <format> <field> <symmetry>'"));
    }
    if tokens[1] != "matrix" {
        return Err(parse_error(1, format!("unknown object '{}'", tokens[1])));
    }
    match tokens[2].as_str() {
        "coordinate" => {}
        "array" => return Err(Error::UnsupportedFormat("dense array storage".into())),
        other => return Err(parse_error(1, format!("unknown format '{other}'"))),
    }
    let field = match tokens[3].as_str() {
        "real" | "integer" => Field::Real,
        "pattern" => Field::Pattern,
        "complex" => return Err(Error::UnsupportedFormat("complex values".into())),
        other => return Err(parse_error(1, format!("unknown field '{other}'"))),
    };
    match tokens[4].as_str() {
        "symmetric" => Ok(field),
        "general" | "skew-symmetric" | "hermitian" => Err(Error::UnsupportedFormat(format!(
            "{} matrices (only symmetric is supported)",
            tokens[4]
        ))),
        other => Err(parse_error(1, format!("unknown symmetry '{other}'"))),
    }
}

fn parse_index(token: Option<&str>, n: usize, line: usize) -> Result<usize> {
    let token = token.ok_or_else(|| parse_error(line, "missing index"))?;
    let i: usize = token
        .parse()
        .map_err(|_| parse_error(line, format!("invalid index '{token}'")))?;
    if i == 0 || i > n {
        return Err(parse_error(line, format!("index {i} outside 1..={n}")));
    }
    Ok(i - 1)
}

pub fn read_matrix_market_with_comments<R: BufRead>(reader: R) -> Result<MatrixMarket> {
    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or_else(|| parse_error(1, "empty input"))?;
    let field = parse_header(&header?)?;

    let mut comments = Vec::new();
    let mut size = None;
    for (no, line) in lines.by_ref() {
        let line = line?;
        let trimmed = line.trim();
        if let Some(c) = trimmed.strip_prefix('%') {
            comments.push(c.to_string());
            continue;
        }
        if trimmed.is_empty() {
            continue;
        }
        let nums: Vec<&str> = trimmed.split_whitespace().collect();
        if nums.len() != 3 {
            return Err(parse_error(no, "size line must hold rows, columns and entries"));
        }
        let parsed: Vec<usize> = nums
            .iter()
            .map(|t| t.parse().map_err(|_| parse_error(no, format!("invalid count '{t}'"))))
            .collect::<Result<_>>()?;
        if parsed[0] != parsed[1] {
            return Err(Error::UnsupportedFormat(format!(
                "rectangular {} x {} matrix",
                parsed[0], parsed[1]
            )));
        }
        size = Some((no, parsed[0], parsed[2]));
        break;
    }
    let (size_line, n, nnz) = size.ok_or_else(|| parse_error(1, "missing size line"))?;

    let mut entries = Vec::with_capacity(nnz);
    let mut last = size_line;
    for (no, line) in lines {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        last = no;
        if entries.len() == nnz {
            return Err(parse_error(no, format!("more than the declared {nnz} entries")));
        }
        let mut tok = trimmed.split_whitespace();
        let i = parse_index(tok.next(), n, no)?;
        let j = parse_index(tok.next(), n, no)?;
        let v = match field {
            Field::Pattern => 1.0,
            Field::Real => {
                let t = tok.next().ok_or_else(|| parse_error(no, "missing value"))?;
                t.parse::<f64>()
                    .map_err(|_| parse_error(no, format!("invalid value '{t}'")))?
            }
        };
        if tok.next().is_some() {
            return Err(parse_error(no, "trailing tokens"));
        }
        entries.push((i.max(j), i.min(j), v));
    }
    if entries.len() != nnz {
        return Err(parse_error(
            last,
            format!("expected {nnz} entries, found {}", entries.len()),
        ));
    }

    let matrix = match field {
        Field::Real => SymmetricSparseMatrix::from_triplets(n, entries)?,
        Field::Pattern => pattern_matrix(n, &entries)?,
    };
    Ok(MatrixMarket { matrix, comments })
}

fn pattern_matrix(n: usize, entries: &[(usize, usize, f64)]) -> Result<SymmetricSparseMatrix> {
    let edges: BTreeSet<(usize, usize)> = entries
        .iter()
        .filter(|(i, j, _)| i != j)
        .map(|&(i, j, _)| (i, j))
        .collect();
    let mut degree = vec![0usize; n];
    for &(i, j) in &edges {
        degree[i] += 1;
        degree[j] += 1;
    }
    let triplets = edges
        .iter()
        .map(|&(i, j)| (i, j, 1.0))
        .chain(degree.iter().enumerate().map(|(j, &d)| (j, j, d as f64 + 1.0)));
    Ok(SymmetricSparseMatrix::from_triplets(n, triplets)?)
}

pub fn read_matrix_market<R: BufRead>(reader: R) -> Result<SymmetricSparseMatrix> {
    Ok(read_matrix_market_with_comments(reader)?.matrix)
}

pub fn read_matrix_market_str(text: &str) -> Result<SymmetricSparseMatrix> {
    read_matrix_market(text.as_bytes())
}

/// Writes the lower triangle, 1-based, with shortest round-trip values.
pub fn write_matrix_market<W: Write>(a: &SymmetricSparseMatrix, mut out: W) -> Result<()> {
    writeln!(out, "%%MatrixMarket matrix coordinate real symmetric")?;
    writeln!(out, "{} {} {}", a.n(), a.n(), a.nnz())?;
    for (i, j, v) in a.iter() {
        writeln!(out, "{} {} {}", i + 1, j + 1, v)?;
    }
    out.flush()?;
    Ok(())
}

fn tokens(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .flat_map(|(no, l)| l.split_whitespace().map(move |t| (no + 1, t)))
}

/// Reads `n` whitespace-separated 1-based integers; entry `i` is the new
/// position of original index `i`.
pub fn read_permutation(text: &str, n: usize) -> Result<Permutation> {
    let mut perm = Vec::with_capacity(n);
    for (no, t) in tokens(text) {
        let v: usize = t
            .parse()
            .map_err(|_| parse_error(no, format!("invalid index '{t}'")))?;
        perm.push(v);
    }
    if perm.len() != n {
        return Err(Error::Dimension {
            expected: n,
            found: perm.len(),
        });
    }
    let mut seen = vec![false; n];
    for &v in &perm {
        if v == 0 || v > n {
            return Err(Error::Validation(format!("permutation entry {v} outside 1..={n}")));
        }
        if std::mem::replace(&mut seen[v - 1], true) {
            return Err(Error::Validation(format!("permutation entry {v} repeated")));
        }
    }
    Ok(Permutation::from_old_to_new(perm.into_iter().map(|v| v - 1).collect())?)
}

pub fn write_permutation<W: Write>(perm: &Permutation, mut out: W) -> Result<()> {
    for &p in perm.old_to_new() {
        writeln!(out, "{}", p + 1)?;
    }
    Ok(())
}

/// One value per line; blank lines are skipped.
pub fn read_vector(text: &str) -> Result<Vec<f64>> {
    tokens(text)
        .map(|(no, t)| {
            t.parse::<f64>()
                .map_err(|_| parse_error(no, format!("invalid value '{t}'")))
        })
        .collect()
}

pub fn write_vector<W: Write>(v: &[f64], mut out: W) -> Result<()> {
    for x in v {
        writeln!(out, "{x}")?;
    }
    Ok(())
}
