//! Performance profiles over a timing table.
//!
//! For each matrix `p` the best time is the minimum over methods that
//! succeeded on it. Method `m` has ratio `t[p,m] / best[p]`, or infinity
//! when it failed (or has no row for `p`). Then
//! `rho_m(tau) = #{p : ratio[p,m] <= tau} / #matrices`, a right-continuous
//! step function whose breakpoints are the distinct finite ratios.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;

use crate::bench::{Status, TimingRow};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ProfilePoint {
    pub method: String,
    pub tau: f64,
    pub rho: f64,
}

#[derive(Debug, Clone)]
pub struct PerformanceProfile {
    /// Methods in order of first appearance.
    pub methods: Vec<String>,
    /// Matrices in order of first appearance.
    pub matrices: Vec<String>,
    /// `ratios[m][p]`; `f64::INFINITY` for failures.
    pub ratios: Vec<Vec<f64>>,
}

fn index_of(names: &mut Vec<String>, lookup: &mut HashMap<String, usize>, name: &str) -> usize {
    *lookup.entry(name.to_string()).or_insert_with(|| {
        names.push(name.to_string());
        names.len() - 1
    })
}

impl PerformanceProfile {
    pub fn new(rows: &[TimingRow]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Validation("timing table is empty".into()));
        }
        let (mut methods, mut matrices) = (Vec::new(), Vec::new());
        let (mut method_ix, mut matrix_ix) = (HashMap::new(), HashMap::new());
        let mut cells: BTreeMap<(usize, usize), Option<f64>> = BTreeMap::new();
        for r in rows {
            let m = index_of(&mut methods, &mut method_ix, &r.method);
            let p = index_of(&mut matrices, &mut matrix_ix, &r.matrix);
            let time = match (r.status, r.seconds) {
                (Status::Fail, _) => None,
                (Status::Ok, Some(t)) if t.is_finite() && t > 0.0 => Some(t),
                (Status::Ok, _) => {
                    return Err(Error::Validation(format!(
                        "time for {} on {} must be positive and finite",
                        r.method, r.matrix
                    )))
                }
            };
            if cells.insert((m, p), time).is_some() {
                return Err(Error::Validation(format!(
                    "duplicate row for {} on {}",
                    r.method, r.matrix
                )));
            }
        }

        let time = |m: usize, p: usize| cells.get(&(m, p)).copied().flatten();
        let best: Vec<Option<f64>> = (0..matrices.len())
            .map(|p| {
                (0..methods.len())
                    .filter_map(|m| time(m, p))
                    .min_by(f64::total_cmp)
            })
            .collect();
        let ratios = (0..methods.len())
            .map(|m| {
                (0..matrices.len())
                    .map(|p| match (time(m, p), best[p]) {
                        (Some(t), Some(b)) => t / b,
                        _ => f64::INFINITY,
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            methods,
            matrices,
            ratios,
        })
    }

    pub fn method_index(&self, method: &str) -> Option<usize> {
        self.methods.iter().position(|m| m == method)
    }

    /// Evaluates `rho_method(tau)`; `None` for an unknown method.
    pub fn rho(&self, method: &str, tau: f64) -> Option<f64> {
        let m = self.method_index(method)?;
        let hits = self.ratios[m].iter().filter(|&&r| r <= tau).count();
        Some(hits as f64 / self.matrices.len() as f64)
    }

    /// Step breakpoints per method: `tau = 1` and every distinct finite
    /// ratio above it, each with the value of `rho` from there on.
    pub fn breakpoints(&self) -> Vec<ProfilePoint> {
        let mut points = Vec::new();
        for (m, name) in self.methods.iter().enumerate() {
            let mut taus: Vec<f64> = self.ratios[m]
                .iter()
                .copied()
                .filter(|r| r.is_finite() && *r > 1.0)
                .collect();
            taus.push(1.0);
            taus.sort_by(f64::total_cmp);
            taus.dedup();
            for tau in taus {
                points.push(ProfilePoint {
                    method: name.clone(),
                    tau,
                    rho: self.rho(name, tau).expect("known method"),
                });
            }
        }
        points
    }
}

pub fn performance_profile(rows: &[TimingRow]) -> Result<Vec<ProfilePoint>> {
    Ok(PerformanceProfile::new(rows)?.breakpoints())
}

pub fn write_profile<W: Write>(points: &[ProfilePoint], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["method", "tau", "rho"])?;
    for p in points {
        w.write_record([p.method.clone(), p.tau.to_string(), p.rho.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
