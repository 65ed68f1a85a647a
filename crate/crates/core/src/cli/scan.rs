//! Parameter-grid scans written as CSV.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;

use crate::criteria::{ClassParams, Condition, MOMENT_TOL};
use crate::error::{Error, Result};
use crate::series::{moments, KernelOrder};

pub const HEADER: [&str; 9] = [
    "condition",
    "form",
    "nu",
    "lambda",
    "alpha",
    "lhs",
    "rhs",
    "margin",
    "holds",
];

/// `steps` equally spaced values from `lo` to `hi` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRange {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl GridRange {
    pub fn single(v: f64) -> Self {
        GridRange { lo: v, hi: v, steps: 1 }
    }

    /// Accepts `v`, `lo,hi` (with `default_steps`) or `lo,hi,steps`.
    pub fn parse(text: &str, default_steps: usize) -> Result<Self> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        let num = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::param(format!("bad number `{s}` in range `{text}`")))
        };
        let range = match parts.as_slice() {
            [v] => Self::single(num(v)?),
            [lo, hi] => GridRange {
                lo: num(lo)?,
                hi: num(hi)?,
                steps: default_steps,
            },
            [lo, hi, steps] => GridRange {
                lo: num(lo)?,
                hi: num(hi)?,
                steps: steps
                    .parse()
                    .map_err(|_| Error::param(format!("bad step count `{steps}` in range `{text}`")))?,
            },
            _ => {
                return Err(Error::param(format!(
                    "range `{text}` must be `v`, `lo,hi` or `lo,hi,steps`"
                )))
            }
        };
        if range.steps == 0 {
            return Err(Error::param(format!("range `{text}` needs at least one step")));
        }
        if range.lo > range.hi {
            return Err(Error::param(format!("range `{text}` has lo > hi")));
        }
        Ok(range)
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.lo];
        }
        let last = self.steps - 1;
        (0..self.steps)
            .map(|i| {
                if i == last {
                    self.hi
                } else {
                    self.lo + (self.hi - self.lo) * i as f64 / last as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanSpec {
    pub condition: Condition,
    pub nu: GridRange,
    pub lambda: GridRange,
    pub alpha: GridRange,
}

/// 17 significant digits; parses back to the same double.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Rows in lexicographic `(nu, lambda, alpha)` order. Orders are evaluated in
/// parallel; the output order does not depend on scheduling.
pub fn scan_rows(spec: &ScanSpec) -> Result<Vec<[String; 9]>> {
    let nus = spec.nu.values();
    let lambdas = match spec.condition {
        Condition::Starlike | Condition::Convex => {
            if spec.lambda.values().iter().any(|&l| l != 0.0) {
                return Err(Error::param(format!("{} fixes lambda = 0", spec.condition.name())));
            }
            vec![0.0]
        }
        _ => spec.lambda.values(),
    };
    let alphas = spec.alpha.values();
    let mut params = Vec::with_capacity(lambdas.len() * alphas.len());
    for &l in &lambdas {
        for &a in &alphas {
            params.push(ClassParams::new(l, a)?);
        }
    }
    let orders = nus
        .iter()
        .map(|&nu| KernelOrder::operator(nu))
        .collect::<Result<Vec<_>>>()?;

    let blocks: Vec<Result<Vec<[String; 9]>>> = orders
        .par_iter()
        .map(|&nu| {
            let m = moments(nu, MOMENT_TOL)?;
            Ok(params
                .iter()
                .map(|&p| {
                    let v = spec.condition.evaluate(&m, p);
                    [
                        spec.condition.name().to_string(),
                        spec.condition.form().to_string(),
                        fmt_f64(nu.value()),
                        fmt_f64(p.lambda()),
                        fmt_f64(p.alpha()),
                        fmt_f64(v.lhs),
                        fmt_f64(v.rhs),
                        fmt_f64(v.margin),
                        v.holds.to_string(),
                    ]
                })
                .collect())
        })
        .collect();
    let mut rows = Vec::with_capacity(orders.len() * params.len());
    for block in blocks {
        rows.extend(block?);
    }
    Ok(rows)
}

/// Writes the scan to a temporary file beside `path`, then renames it into place.
pub fn write_scan(spec: &ScanSpec, path: &Path) -> std::result::Result<usize, String> {
    let rows = scan_rows(spec).map_err(|e| e.to_string())?;
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(tmp.as_file_mut());
        w.write_record(HEADER).map_err(|e| e.to_string())?;
        for row in &rows {
            w.write_record(row).map_err(|e| e.to_string())?;
        }
        w.flush().map_err(|e| e.to_string())?;
    }
    tmp.as_file_mut().flush().map_err(|e| e.to_string())?;
    tmp.persist(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(rows.len())
}
