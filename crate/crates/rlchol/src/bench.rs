//! Timing of the numeric factorization across methods and matrices.
//!
//! Each matrix is analysed once (outside the timed region); every method
//! then factors it `repeats` times and the median wall time is reported.
//! A method that fails on a matrix gets `status = fail` and no time.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rlchol_core::{
    Analysis, AnalysisOptions, HostBackend, OffloadConfig, SymmetricSparseMatrix, Variant,
};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Rl,
    Rlb,
    RlSimdev,
    RlbAggregated,
    RlbStreamed,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Rl,
        Method::Rlb,
        Method::RlSimdev,
        Method::RlbAggregated,
        Method::RlbStreamed,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Rl => "rl",
            Method::Rlb => "rlb",
            Method::RlSimdev => "rl-simdev",
            Method::RlbAggregated => "rlb-aggregated",
            Method::RlbStreamed => "rlb-streamed",
        }
    }

    fn variant(self) -> Option<Variant> {
        match self {
            Method::Rl | Method::Rlb => None,
            Method::RlSimdev => Some(Variant::Rl),
            Method::RlbAggregated => Some(Variant::RlbAggregated),
            Method::RlbStreamed => Some(Variant::RlbStreamed),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::Validation(format!("unknown method '{s}'")))
    }
}

/// Parses a comma-separated method list such as `rl,rlb-streamed`.
pub fn parse_methods(list: &str) -> Result<Vec<Method>> {
    let methods: Vec<Method> = list
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect::<Result<_>>()?;
    if methods.is_empty() {
        return Err(Error::Validation("empty method list".into()));
    }
    Ok(methods)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Fail => "fail",
        }
    }
}

/// One line of a timing CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct TimingRow {
    pub matrix: String,
    pub method: String,
    /// Median seconds; `None` exactly when the run failed.
    pub seconds: Option<f64>,
    pub status: Status,
}

impl TimingRow {
    pub fn ok(matrix: &str, method: &str, seconds: f64) -> Self {
        Self {
            matrix: matrix.into(),
            method: method.into(),
            seconds: Some(seconds),
            status: Status::Ok,
        }
    }

    pub fn fail(matrix: &str, method: &str) -> Self {
        Self {
            matrix: matrix.into(),
            method: method.into(),
            seconds: None,
            status: Status::Fail,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub repeats: usize,
    pub analysis: AnalysisOptions,
    /// Thresholds and memory limit for the simulated-device methods; the
    /// variant field is overridden per method.
    pub offload: OffloadConfig,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            repeats: 3,
            analysis: AnalysisOptions::default(),
            offload: OffloadConfig::default(),
        }
    }
}

pub fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let m = values.len() / 2;
    Some(if values.len() % 2 == 1 {
        values[m]
    } else {
        0.5 * (values[m - 1] + values[m])
    })
}

/// Runs one factorization of `analysis` with `method`.
pub fn run_method(analysis: &Analysis, method: Method, offload: &OffloadConfig) -> Result<()> {
    match method.variant() {
        None if method == Method::Rl => analysis.factor_rl(&mut HostBackend::new()).map(drop),
        None => analysis.factor_rlb(&mut HostBackend::new()).map(drop),
        Some(variant) => analysis
            .factor_offloaded(&OffloadConfig { variant, ..*offload })
            .map(drop),
    }?;
    Ok(())
}

fn time_method(analysis: &Analysis, method: Method, config: &BenchConfig) -> Option<f64> {
    let mut times = Vec::with_capacity(config.repeats);
    for _ in 0..config.repeats.max(1) {
        let start = Instant::now();
        run_method(analysis, method, &config.offload).ok()?;
        times.push(start.elapsed().as_secs_f64());
    }
    median(&mut times)
}

pub fn run_bench(
    matrices: &[(String, SymmetricSparseMatrix)],
    methods: &[Method],
    config: &BenchConfig,
) -> Vec<TimingRow> {
    let mut rows = Vec::with_capacity(matrices.len() * methods.len());
    for (name, a) in matrices {
        let analysis = Analysis::new(a, &config.analysis).ok();
        for &m in methods {
            let seconds = analysis.as_ref().and_then(|an| time_method(an, m, config));
            rows.push(match seconds {
                Some(t) => TimingRow::ok(name, m.as_str(), t),
                None => TimingRow::fail(name, m.as_str()),
            });
        }
    }
    rows
}

pub fn write_timings<W: Write>(rows: &[TimingRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["matrix", "method", "seconds", "status"])?;
    for r in rows {
        let seconds = r.seconds.map(|s| s.to_string()).unwrap_or_default();
        w.write_record([r.matrix.as_str(), r.method.as_str(), &seconds, r.status.as_str()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_timings<R: std::io::Read>(input: R) -> Result<Vec<TimingRow>> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = reader.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Validation(format!("timing file lacks a '{name}' column")))
    };
    let (cm, cmeth, cs, cst) = (col("matrix")?, col("method")?, col("seconds")?, col("status")?);
    let mut rows = Vec::new();
    for (k, record) in reader.records().enumerate() {
        let record = record?;
        let line = k + 2;
        let field = |c: usize| record.get(c).unwrap_or("");
        let status = match field(cst) {
            "ok" => Status::Ok,
            "fail" => Status::Fail,
            other => {
                return Err(crate::error::parse_error(line, format!("unknown status '{other}'")))
            }
        };
        let seconds = match (status, field(cs)) {
            (Status::Fail, _) => None,
            (Status::Ok, s) => Some(s.parse::<f64>().map_err(|_| {
                crate::error::parse_error(line, format!("invalid seconds '{s}'"))
            })?),
        };
        rows.push(TimingRow {
            matrix: field(cm).to_string(),
            method: field(cmeth).to_string(),
            seconds,
            status,
        });
    }
    Ok(rows)
}

pub fn read_timings_file(path: &Path) -> Result<Vec<TimingRow>> {
    read_timings(std::fs::File::open(path)?)
}
