//! The `solve`, `asym`, `compare` and `eigenfunction` pipelines.
//!
//! Each returns a [`CommandOutput`]: the table to write plus the verdicts
//! that go into the run report. The `verify` pipeline lives in
//! [`crate::verify`].

use sltx_core::asymptotics::{self, case_of, mu_asymptotic};
use sltx_core::spectrum::{self, Spectrum};
use sltx_core::{Error as CoreError, ValidatedProblem};

use crate::exec::Threads;
use crate::output::{num, opt_num, Table};

#[derive(Debug, thiserror::Error)]
pub enum CommandError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("numerical failure: {0}")]
    Numerical(#[from] CoreError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Pass => "PASS",
            Self::Fail => "FAIL",
            Self::Skipped => "SKIPPED",
        }
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Self::Pass
        } else {
            Self::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub table: Table,
    /// `(stage, status)` pairs for the run report.
    pub verdicts: Vec<(String, Status)>,
    /// Warnings for the diagnostic stream (e.g. an exhausted scan).
    pub notes: Vec<String>,
}

impl CommandOutput {
    fn plain(table: Table) -> Self {
        Self { table, verdicts: Vec::new(), notes: Vec::new() }
    }

    /// No executed stage failed.
    pub fn ok(&self) -> bool {
        self.verdicts.iter().all(|(_, s)| *s != Status::Fail)
    }
}

pub(crate) fn locate(problem: &ValidatedProblem, n_max: usize) -> Result<Spectrum, CoreError> {
    spectrum::locate_eigenvalues_with(problem, n_max, &Threads::available())
}

fn require_positive(n: usize, flag: &str) -> Result<(), CommandError> {
    if n == 0 {
        return Err(CommandError::Usage(format!("{flag} must be at least 1")));
    }
    Ok(())
}

/// Eigenvalue table: `n, lambda_n, mu_n, bracket_lo, bracket_hi, abs_delta`.
pub fn solve(problem: &ValidatedProblem, n_max: usize) -> Result<CommandOutput, CommandError> {
    require_positive(n_max, "--n-max")?;
    let spec = locate(problem, n_max)?;
    let mut t = Table::new(&["n", "lambda_n", "mu_n", "bracket_lo", "bracket_hi", "abs_delta"]);
    t.header.push(format!("n_max: {n_max}"));
    t.header.push(format!("lambda_floor: {}", num(spec.lambda_floor)));
    t.header.push(format!("exhausted: {}", spec.exhausted));
    for r in &spec.records {
        t.push(vec![
            r.n.to_string(),
            num(r.lambda_n),
            opt_num(r.mu_n),
            num(r.bracket.0),
            num(r.bracket.1),
            num(r.abs_delta),
        ]);
    }
    let mut out = CommandOutput::plain(t);
    if spec.exhausted {
        out.notes.push(format!(
            "scan budget exhausted: found {} of {n_max} eigenvalues (partial result)",
            spec.records.len()
        ));
    }
    Ok(out)
}

/// Asymptotic table: `n, case, mu_asym`.
pub fn asym(problem: &ValidatedProblem, n_max: usize) -> Result<CommandOutput, CommandError> {
    require_positive(n_max, "--n-max")?;
    let case = case_of(problem);
    let mut t = Table::new(&["n", "case", "mu_asym"]);
    t.header.push(format!("theta_total: {}", num(asymptotics::theta_total(problem))));
    for n in 1..=n_max {
        t.push(vec![n.to_string(), case.to_string(), num(mu_asymptotic(problem, n))]);
    }
    Ok(CommandOutput::plain(t))
}

/// Decay table `n, mu_computed, mu_asym, err, n_times_err` and a verdict line.
pub fn compare(problem: &ValidatedProblem, n_lo: usize, n_hi: usize, bound: f64) -> Result<CommandOutput, CommandError> {
    require_positive(n_lo, "--n-lo")?;
    if n_lo > n_hi {
        return Err(CommandError::Usage(format!("--n-lo ({n_lo}) exceeds --n-hi ({n_hi})")));
    }
    if !(bound > 0.0) {
        return Err(CommandError::Usage("--bound must be positive".into()));
    }
    // a few spare roots cover the index offset
    let spec = locate(problem, n_hi + 4)?;
    let report = asymptotics::decay_check(&spec.records, problem, n_lo, n_hi, bound)?;
    let mut t = Table::new(&["n", "mu_computed", "mu_asym", "err", "n_times_err"]);
    t.header.push(format!("case: {}", case_of(problem)));
    t.header.push(format!("index_offset: {}", report.offset));
    t.header.push(format!("bound: {}", num(bound)));
    for i in 0..report.indices.len() {
        t.push(vec![
            report.indices[i].to_string(),
            num(report.mu_computed[i]),
            num(report.mu_asym[i]),
            num(report.errors[i]),
            num(report.products[i]),
        ]);
    }
    let status = Status::from_bool(report.verdict);
    t.footer.push(format!(
        "verdict: {} (max n*err = {} over n in [{n_lo}, {n_hi}], bound {})",
        status.as_str(),
        num(report.max_product),
        num(bound)
    ));
    Ok(CommandOutput { table: t, verdicts: vec![("decay".into(), status)], notes: Vec::new() })
}

/// Sampled eigenfunction: `x, piece, u, u_prime`.
pub fn eigenfunction(problem: &ValidatedProblem, index: usize, samples: usize) -> Result<CommandOutput, CommandError> {
    require_positive(index, "--index")?;
    let spec = locate(problem, index)?;
    let rec = spec
        .records
        .get(index - 1)
        .ok_or(CommandError::Numerical(CoreError::MissingIndex { n: index }))?;
    let f = spectrum::eigenfunction(problem, rec, samples)?;
    let mut t = Table::new(&["x", "piece", "u", "u_prime"]);
    t.header.push(format!("index: {index}"));
    t.header.push(format!("lambda_n: {}", num(f.lambda_n)));
    t.header.push(format!("normalization: {}", num(f.normalization)));
    t.header.push(format!("sign_flipped: {}", f.sign_flipped));
    for s in &f.samples {
        t.push(vec![num(s.x), s.piece.number().to_string(), num(s.u), num(s.du)]);
    }
    Ok(CommandOutput::plain(t))
}
