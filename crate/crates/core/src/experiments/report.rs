//! Experiment reports: config echo, named fits, tolerance-cited checks, and
//! deterministic CSV serialization.

use std::fmt;
use std::io::Write as IoWrite;

use crate::error::{Error, Result};
use crate::exponents::Exponent;
use crate::experiments::fit::FitResult;

/// How a measured value is compared to its target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    /// pass iff observed >= target - tolerance
    LowerBound,
    /// pass iff observed <= target + tolerance
    UpperBound,
    /// pass iff |observed - target| <= tolerance
    WithinAbs,
}

impl CheckKind {
    fn token(self) -> &'static str {
        match self {
            CheckKind::LowerBound => "lower-bound",
            CheckKind::UpperBound => "upper-bound",
            CheckKind::WithinAbs => "within-abs",
        }
    }
}

/// One pass/fail comparison; the applied tolerance is part of the record.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub label: String,
    pub observed: f64,
    pub target: f64,
    pub tolerance: f64,
    pub kind: CheckKind,
    pub passed: bool,
}

impl Check {
    pub fn lower_bound(label: impl Into<String>, observed: f64, target: f64, tol: f64) -> Self {
        let passed = observed.is_finite() && observed >= target - tol;
        Check { label: label.into(), observed, target, tolerance: tol, kind: CheckKind::LowerBound, passed }
    }

    pub fn upper_bound(label: impl Into<String>, observed: f64, target: f64, tol: f64) -> Self {
        let passed = observed.is_finite() && observed <= target + tol;
        Check { label: label.into(), observed, target, tolerance: tol, kind: CheckKind::UpperBound, passed }
    }

    pub fn within_abs(label: impl Into<String>, observed: f64, target: f64, tol: f64) -> Self {
        let passed = observed.is_finite() && (observed - target).abs() <= tol;
        Check { label: label.into(), observed, target, tolerance: tol, kind: CheckKind::WithinAbs, passed }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: observed={:.6e} target={:.6e} tolerance={:.3e} ({}) -> {}",
            self.label,
            self.observed,
            self.target,
            self.tolerance,
            self.kind.token(),
            if self.passed { "PASS" } else { "FAIL" }
        )
    }
}

/// Aggregate experiment outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        })
    }
}

/// One serialized measurement: degree, eigenvalue parameter, a quantity
/// label, and its value.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub l: u32,
    pub lambda: f64,
    pub quantity: String,
    pub value: f64,
}

/// Full record of one experiment run: the effective configuration, the data
/// rows, the power-law fits, and every check with its tolerance.
#[derive(Debug, Clone, Default)]
pub struct ExperimentReport {
    pub experiment: String,
    pub config: Vec<(String, String)>,
    pub rows: Vec<CsvRow>,
    pub fits: Vec<(String, FitResult)>,
    pub checks: Vec<Check>,
}

impl ExperimentReport {
    pub fn new(experiment: impl Into<String>) -> Self {
        ExperimentReport { experiment: experiment.into(), ..Default::default() }
    }

    pub fn push_config(&mut self, key: impl Into<String>, value: impl fmt::Display) {
        self.config.push((key.into(), value.to_string()));
    }

    pub fn push_row(&mut self, l: u32, lambda: f64, quantity: impl Into<String>, value: f64) {
        self.rows.push(CsvRow { l, lambda, quantity: quantity.into(), value });
    }

    pub fn push_fit(&mut self, name: impl Into<String>, fit: FitResult) {
        self.fits.push((name.into(), fit));
    }

    pub fn push_check(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn fit(&self, name: &str) -> Option<&FitResult> {
        self.fits.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }

    pub fn check(&self, label: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.label == label)
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn verdict(&self) -> Verdict {
        if self.passed() {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    /// Human-readable summary: config, fits, checks, verdict.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("experiment: {}\n", self.experiment));
        for (k, v) in &self.config {
            s.push_str(&format!("  {k} = {v}\n"));
        }
        for (name, fit) in &self.fits {
            s.push_str(&format!(
                "fit {name}: slope={:.6} intercept={:.6} stderr={:.3e} r2={:.6} n={}\n",
                fit.slope,
                fit.intercept,
                fit.stderr,
                fit.r2,
                fit.points.len()
            ));
        }
        for c in &self.checks {
            s.push_str(&format!("check {c}\n"));
        }
        s.push_str(&format!("verdict: {}\n", self.verdict()));
        s
    }

    /// Serialize as CSV: a `l,lambda,quantity,value` table followed by a
    /// `#`-prefixed block carrying config, fits (with their points), checks,
    /// and the verdict. Floating-point fields use full-precision scientific
    /// notation so identical runs produce bit-identical files.
    pub fn write_csv<W: IoWrite>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "l,lambda,quantity,value")?;
        for r in &self.rows {
            writeln!(out, "{},{:.17e},{},{:.17e}", r.l, r.lambda, r.quantity, r.value)?;
        }
        writeln!(out, "# experiment = {}", self.experiment)?;
        for (k, v) in &self.config {
            writeln!(out, "# config {k} = {v}")?;
        }
        for (name, fit) in &self.fits {
            writeln!(
                out,
                "# fit {name}: slope={:.17e} intercept={:.17e} stderr={:.17e} r2={:.17e} n={}",
                fit.slope,
                fit.intercept,
                fit.stderr,
                fit.r2,
                fit.points.len()
            )?;
            for (x, y) in &fit.points {
                writeln!(out, "# fitpoint {name} {x:.17e} {y:.17e}")?;
            }
        }
        for c in &self.checks {
            writeln!(
                out,
                "# check {}: observed={:.17e} target={:.17e} tolerance={:.17e} comparison={} -> {}",
                c.label,
                c.observed,
                c.target,
                c.tolerance,
                c.kind.token(),
                if c.passed { "PASS" } else { "FAIL" }
            )?;
        }
        writeln!(out, "# verdict: {}", self.verdict())?;
        Ok(())
    }

    pub fn write_csv_file(&self, path: &std::path::Path) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        self.write_csv(&mut f)?;
        Ok(())
    }

    pub fn csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::numerical(format!("non-UTF8 CSV: {e}")))
    }
}

/// File-name token for an exponent: "inf", an integer like "8", or a
/// hyphenated ratio like "8-3" (underscores delimit fields in file names).
pub fn p_token(p: &Exponent) -> String {
    match p {
        Exponent::Infinity => "inf".to_string(),
        Exponent::Finite(r) => {
            if r.is_integer() {
                format!("{}", r.numer())
            } else {
                format!("{}-{}", r.numer(), r.denom())
            }
        }
    }
}

/// Conventional artifact name `<experiment>_<d>_<k>_<p>_<tag>.csv`.
pub fn csv_file_name(experiment: &str, d: u32, k: u32, p: &Exponent, tag: &str) -> String {
    format!("{experiment}_{d}_{k}_{}_{tag}.csv", p_token(p))
}
