//! Reproducible timing and accuracy comparison of the computation methods on
//! generated instances.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::dense::Tolerance;
use crate::error::{Error, Result};
use crate::gen::gen_random_pair;
use crate::method::Method;
use crate::verify::{residuals, ResidualReport};

/// Environment variable that overrides the configured seed.
pub const SEED_ENV: &str = "WCEP_SEED";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Markdown,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            other => Err(Error::Config(format!("unknown output format '{other}'"))),
        }
    }
}

/// Benchmark plan, read from a flat `key = value` file:
///
/// ```text
/// sizes = 100x200, 50x80
/// l_offsets = 0, 5
/// target_index = 4
/// seed = 42
/// repetitions = 5
/// methods = eq13, eq28
/// format = markdown
/// ```
#[derive(Clone, Debug, PartialEq)]
pub struct BenchConfig {
    pub sizes: Vec<(usize, usize)>,
    /// Each run uses `l = k + offset`.
    pub l_offsets: Vec<usize>,
    pub target_index: usize,
    pub seed: u64,
    pub repetitions: usize,
    pub methods: Vec<Method>,
    pub format: OutputFormat,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            sizes: vec![(100, 200)],
            l_offsets: vec![0],
            target_index: 4,
            seed: 0,
            repetitions: 5,
            methods: vec![Method::TwoPinv, Method::AwPinv],
            format: OutputFormat::Markdown,
        }
    }
}

fn list<T>(value: &str, item: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(item)
        .collect()
}

fn integer<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| Error::Config(format!("{key}: '{v}' is not a non-negative integer")))
}

fn size(v: &str) -> Result<(usize, usize)> {
    let (m, n) = v
        .split_once(['x', 'X'])
        .ok_or_else(|| Error::Config(format!("sizes: '{v}' is not of the form MxN")))?;
    let (m, n) = (integer::<usize>("sizes", m)?, integer::<usize>("sizes", n)?);
    if m == 0 || n == 0 {
        return Err(Error::Config(format!("sizes: '{v}' has a zero dimension")));
    }
    Ok((m, n))
}

impl FromStr for BenchConfig {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut cfg = BenchConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: idx + 1,
                msg: format!("expected key = value, got '{line}'"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "sizes" => cfg.sizes = list(value, size)?,
                "l_offsets" => cfg.l_offsets = list(value, |v| integer("l_offsets", v))?,
                "target_index" => cfg.target_index = integer(key, value)?,
                "seed" => cfg.seed = integer(key, value)?,
                "repetitions" => cfg.repetitions = integer(key, value)?,
                "methods" => cfg.methods = list(value, Method::from_str)?,
                "format" => cfg.format = value.parse()?,
                other => {
                    return Err(Error::Parse {
                        line: idx + 1,
                        msg: format!("unknown key '{other}'"),
                    })
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() || self.l_offsets.is_empty() || self.methods.is_empty() {
            return Err(Error::Config("sizes, l_offsets and methods must be non-empty".into()));
        }
        if self.repetitions == 0 {
            return Err(Error::Config("repetitions must be at least 1".into()));
        }
        if self.target_index == 0 {
            return Err(Error::Config("target_index must be at least 1".into()));
        }
        Ok(())
    }

    /// Applies the seed override from the environment, if set.
    pub fn with_env_seed(mut self) -> Result<Self> {
        if let Ok(v) = std::env::var(SEED_ENV) {
            self.seed = integer(SEED_ENV, &v)?;
        }
        Ok(self)
    }
}

#[derive(Clone, Debug)]
pub struct BenchRow {
    pub method: Method,
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub l: usize,
    /// Median wall-clock time over the repetitions.
    pub seconds: f64,
    /// `Err` holds the message of a failed method; the run continues.
    pub outcome: std::result::Result<ResidualReport, String>,
}

fn median(mut v: Vec<Duration>) -> Duration {
    v.sort();
    v[v.len() / 2]
}

/// Runs every size x offset x method combination sequentially. Instance
/// generation failures abort the run; method failures are recorded in
/// their row.
pub fn run_bench(cfg: &BenchConfig, tol: &Tolerance) -> Result<Vec<BenchRow>> {
    cfg.validate()?;
    let mut rows = Vec::new();
    for (i, &(m, n)) in cfg.sizes.iter().enumerate() {
        let pair = gen_random_pair(m, n, cfg.target_index, cfg.seed.wrapping_add(i as u64))?;
        let k = pair.k();
        for &off in &cfg.l_offsets {
            let l = k + off;
            for &method in &cfg.methods {
                let mut times = Vec::with_capacity(cfg.repetitions);
                let mut last = None;
                for _ in 0..cfg.repetitions {
                    let start = Instant::now();
                    let x = method.compute(&pair, Some(l), tol);
                    times.push(start.elapsed());
                    last = Some(x);
                }
                let outcome = match last.expect("at least one repetition") {
                    Ok(x) => residuals(&pair, &x, tol).map_err(|e| e.to_string()),
                    Err(e) => Err(e.to_string()),
                };
                rows.push(BenchRow {
                    method,
                    m,
                    n,
                    k,
                    l,
                    seconds: median(times).as_secs_f64(),
                    outcome,
                });
            }
        }
    }
    Ok(rows)
}

const CSV_HEADER: &str = "equation,m,n,k,l,seconds,r1,r2,r3,r1_rel,r2_rel,r3_rel,status";

pub fn rows_to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = write!(out, "{},{},{},{},{},{:.6}", r.method, r.m, r.n, r.k, r.l, r.seconds);
        match &r.outcome {
            Ok(rep) => {
                for v in rep.absolute().iter().chain(rep.relative().iter()) {
                    let _ = write!(out, ",{v:.4e}");
                }
                let _ = writeln!(out, ",{}", if rep.pass { "pass" } else { "fail" });
            }
            Err(msg) => {
                let _ = writeln!(out, ",,,,,,,\"error: {}\"", msg.replace('"', "'"));
            }
        }
    }
    out
}

/// Aligned markdown table in the column order Equation, Size, l, CPU Time,
/// r1, r2, r3, followed by the relative residuals.
pub fn rows_to_markdown(rows: &[BenchRow]) -> String {
    let header = [
        "Equation", "Size", "l", "CPU Time", "r1", "r2", "r3", "r1_rel", "r2_rel", "r3_rel", "status",
    ];
    let mut table: Vec<Vec<String>> = vec![header.iter().map(|s| s.to_string()).collect()];
    for r in rows {
        let mut cells = vec![
            r.method.to_string(),
            format!("{},{}", r.m, r.n),
            format!("{} (k={})", r.l, r.k),
            format!("{:.4}", r.seconds),
        ];
        match &r.outcome {
            Ok(rep) => {
                cells.extend(rep.absolute().iter().chain(rep.relative().iter()).map(|v| format!("{v:.4e}")));
                cells.push(if rep.pass { "pass" } else { "fail" }.to_string());
            }
            Err(msg) => {
                cells.extend(std::iter::repeat_n("-".to_string(), 6));
                cells.push(format!("error: {msg}"));
            }
        }
        table.push(cells);
    }
    let widths: Vec<usize> = (0..header.len())
        .map(|c| table.iter().map(|row| row[c].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for (i, row) in table.iter().enumerate() {
        out.push('|');
        for (cell, w) in row.iter().zip(&widths) {
            let _ = write!(out, " {cell:<w$} |");
        }
        out.push('\n');
        if i == 0 {
            out.push('|');
            for w in &widths {
                let _ = write!(out, "{}|", "-".repeat(w + 2));
            }
            out.push('\n');
        }
    }
    out
}

pub fn render(rows: &[BenchRow], format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => rows_to_csv(rows),
        OutputFormat::Markdown => rows_to_markdown(rows),
    }
}
