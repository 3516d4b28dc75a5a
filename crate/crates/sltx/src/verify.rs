//! The property suite behind `sltx verify`.
//!
//! Stages run in a fixed order; each reports the measured quantity and its
//! tolerance. Symmetry and orthogonality are skipped for indefinite-form
//! specs (the bilinear form is not an inner product there), and the decay
//! stage is skipped when the interfaces are not phase-matched (the
//! asymptotic formulas do not apply).

use sltx_core::asymptotics;
use sltx_core::charfn;
use sltx_core::hilbert::{self, sample_domain_element, sample_domain_function};
use sltx_core::quadrature::QuadratureGrid;
use sltx_core::shooting::{self, build_chi, build_phi};
use sltx_core::spectrum::{self, EigenFunction, Spectrum};
use sltx_core::{Error as CoreError, FormKind, Piece, ValidatedProblem};

use crate::commands::{locate, CommandOutput, Status};
use crate::output::{num, Table};

/// Decay range and bound used by the suite.
pub const DECAY_RANGE: (usize, usize) = (5, 40);
pub const DECAY_BOUND: f64 = 1.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Stage {
    pub name: &'static str,
    pub status: Status,
    pub measured: Option<f64>,
    pub tolerance: Option<f64>,
    pub detail: String,
}

impl Stage {
    fn measured(name: &'static str, measured: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        Self {
            name,
            status: Status::from_bool(measured <= tolerance),
            measured: Some(measured),
            tolerance: Some(tolerance),
            detail: detail.into(),
        }
    }

    fn skipped(name: &'static str, why: &str) -> Self {
        Self { name, status: Status::Skipped, measured: None, tolerance: None, detail: why.into() }
    }

    fn failed(name: &'static str, err: &CoreError) -> Self {
        Self { name, status: Status::Fail, measured: None, tolerance: None, detail: err.to_string() }
    }
}

fn run(name: &'static str, f: impl FnOnce() -> Result<Stage, CoreError>) -> Stage {
    f().unwrap_or_else(|e| Stage::failed(name, &e))
}

/// `count` values spread over `[-20, 200]` (irrational spacing avoids
/// landing systematically on roots).
fn lambda_grid(count: usize) -> Vec<f64> {
    (0..count).map(|k| -20.0 + 220.0 * ((k as f64 + 0.5) * 0.618_033_988_749_895).fract()).collect()
}

/// Maximum of `consistency_residual / (1 + |Δ1|)`.
pub fn lemma_consistency(problem: &ValidatedProblem, lambdas: &[f64]) -> Result<f64, CoreError> {
    let mut worst: f64 = 0.0;
    for &l in lambdas {
        let v = charfn::delta(problem, l)?;
        worst = worst.max(v.consistency_residual / (1.0 + v.delta1.abs()));
    }
    Ok(worst)
}

/// Maximum over pieces of `(max W - min W) / max|W|` on `points` positions
/// spanning each closed piece.
pub fn wronskian_variation(problem: &ValidatedProblem, lambda: f64, points: usize) -> Result<f64, CoreError> {
    let phi = build_phi(problem, lambda)?;
    let chi = build_chi(problem, lambda)?;
    let mut worst: f64 = 0.0;
    for piece in Piece::ALL {
        let (a, b) = problem.bounds(piece);
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut peak: f64 = 0.0;
        for k in 0..points {
            let x = a + (b - a) * k as f64 / (points - 1) as f64;
            let w = shooting::wronskian_in(&phi, &chi, piece, x)?;
            lo = lo.min(w);
            hi = hi.max(w);
            peak = peak.max(w.abs());
        }
        worst = worst.max((hi - lo) / peak.max(f64::MIN_POSITIVE));
    }
    Ok(worst)
}

/// Maximum of `|Δ3_boundary - Δ3_wronskian| / max(|Δ3|, 1)`.
pub fn two_formula_gap(problem: &ValidatedProblem, lambdas: &[f64]) -> Result<f64, CoreError> {
    let mut worst: f64 = 0.0;
    for &l in lambdas {
        let phi = build_phi(problem, l)?;
        let chi = build_chi(problem, l)?;
        let w = charfn::delta_from_solutions(problem, &phi, &chi)?.delta3;
        let b = asymptotics::delta3_from_boundary(problem, l, phi.at_one());
        worst = worst.max((b - w).abs() / w.abs().max(1.0));
    }
    Ok(worst)
}

/// Maximum scaled symmetry residual over `pairs` seeded pairs, and the
/// residual reduction factor under grid halving for one pair.
pub fn symmetry(problem: &ValidatedProblem, pairs: u64) -> Result<(f64, f64), CoreError> {
    let grid = QuadratureGrid::new(problem)?;
    let mut worst: f64 = 0.0;
    for s in 0..pairs {
        let f = sample_domain_element(problem, &grid, 2 * s);
        let g = sample_domain_element(problem, &grid, 2 * s + 1);
        let c = hilbert::symmetry_check(problem, &f, &g)?;
        worst = worst.max(c.residual / c.scale);
    }
    let (f, g) = (sample_domain_function(problem, 1001), sample_domain_function(problem, 1002));
    let res = |panels| -> Result<f64, CoreError> {
        let grid = QuadratureGrid::composite(problem, panels, 2)?;
        hilbert::symmetry_residual(problem, &f.to_element(problem, &grid), &g.to_element(problem, &grid))
    };
    let ratio = res(4)? / res(8)?.max(f64::MIN_POSITIVE);
    Ok((worst, ratio))
}

fn jump_identities(problem: &ValidatedProblem, pairs: u64) -> Result<f64, CoreError> {
    let grid = QuadratureGrid::composite(problem, 1, 8)?;
    let mut worst: f64 = 0.0;
    for s in 0..pairs {
        let f = sample_domain_element(problem, &grid, 500 + 2 * s);
        let g = sample_domain_element(problem, &grid, 501 + 2 * s);
        for r in hilbert::wronskian_jump_identities(problem, &f, &g)? {
            worst = worst.max(r);
        }
    }
    Ok(worst)
}

/// Root residual bound: `|Δ(λ_n)| ≤ ROOT_RESIDUAL (1 + max|Δ(bracket ends)|)`.
pub const ROOT_RESIDUAL: f64 = 1e-7;
/// Eigenfunction residual bound, relative to `1 + max|u|`.
pub const EIGENFUNCTION_RESIDUAL: f64 = 1e-8;

/// Worst residual as a fraction of its bound (≤ 1 passes), over bracket
/// certificates, root residuals, eigenfunction boundary/transmission
/// residuals and unit norms.
pub fn eigen_residuals(
    problem: &ValidatedProblem,
    spec: &Spectrum,
    fns: &[EigenFunction],
) -> Result<(f64, String), CoreError> {
    let mut worst: f64 = 0.0;
    for r in &spec.records {
        let lo = charfn::delta_value(problem, r.bracket.0)?;
        let hi = charfn::delta_value(problem, r.bracket.1)?;
        if lo * hi >= 0.0 || !(r.bracket.0 < r.lambda_n && r.lambda_n < r.bracket.1) {
            return Ok((f64::INFINITY, format!("bracket certificate fails for n = {}", r.n)));
        }
        worst = worst.max(r.abs_delta / (ROOT_RESIDUAL * (1.0 + lo.abs().max(hi.abs()))));
    }
    for f in fns {
        let bound = EIGENFUNCTION_RESIDUAL * f.residual_scale();
        for v in f.transmission_residuals(problem).into_iter().chain(f.boundary_residuals(problem)) {
            worst = worst.max(v.abs() / bound);
        }
        let norm = hilbert::norm(problem, f.element())?;
        worst = worst.max((norm - 1.0).abs() / EIGENFUNCTION_RESIDUAL);
    }
    Ok((worst, format!("{} roots, {} eigenfunctions", spec.records.len(), fns.len())))
}

/// Worst deviation of the first `k` eigenfunctions' Gram matrix from the
/// identity: `(max |off-diagonal|, max |diagonal - 1|)`.
pub fn gram_deviation(problem: &ValidatedProblem, fns: &[EigenFunction]) -> Result<(f64, f64), CoreError> {
    let g = spectrum::orthogonality_matrix(problem, fns)?;
    let mut off: f64 = 0.0;
    let mut diag: f64 = 0.0;
    for (i, row) in g.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if i == j {
                diag = diag.max((v - 1.0).abs());
            } else {
                off = off.max(v.abs());
            }
        }
    }
    Ok((off, diag))
}

/// Runs every stage.
pub fn verify(problem: &ValidatedProblem) -> Vec<Stage> {
    let definite = problem.form() == FormKind::Definite;
    let lambdas = lambda_grid(16);
    let mut stages = Vec::new();

    stages.push(run("lemma_consistency", || {
        let worst = lemma_consistency(problem, &lambdas)?;
        Ok(Stage::measured("lemma_consistency", worst, 1e-7, "max residual/(1+|Δ1|) over 16 λ in [-20,200]"))
    }));
    stages.push(run("wronskian_constancy", || {
        let mut worst: f64 = 0.0;
        for &l in &lambdas[..4] {
            worst = worst.max(wronskian_variation(problem, l, 100)?);
        }
        Ok(Stage::measured("wronskian_constancy", worst, 1e-8, "relative variation over 100 points per piece, 4 λ"))
    }));
    stages.push(run("two_formula", || {
        let worst = two_formula_gap(problem, &lambdas)?;
        Ok(Stage::measured("two_formula", worst, 1e-8, "boundary vs Wronskian Δ3, relative, 16 λ"))
    }));
    stages.push(if definite {
        run("symmetry", || {
            let (worst, ratio) = symmetry(problem, 20)?;
            let mut s = Stage::measured("symmetry", worst, 1e-7, format!("20 seeded pairs; grid-halving ratio {ratio:.3e}"));
            if ratio < 4.0 {
                s.status = Status::Fail;
                s.detail = format!("grid-halving ratio {ratio:.3e} < 4");
            }
            Ok(s)
        })
    } else {
        Stage::skipped("symmetry", "indefinite form")
    });
    stages.push(run("wronskian_jumps", || {
        let worst = jump_identities(problem, 10)?;
        Ok(Stage::measured("wronskian_jumps", worst, 1e-10, "10 seeded pairs, both interfaces and x = -1"))
    }));

    let (n_lo, n_hi) = DECAY_RANGE;
    let located = locate(problem, n_hi + 4).and_then(|s| {
        let fns = s
            .records
            .iter()
            .map(|r| spectrum::eigenfunction(problem, r, 8))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((s, fns))
    });
    match &located {
        Ok((spec, fns)) => {
            stages.push(run("eigenpairs", || {
                let (mut worst, detail) = eigen_residuals(problem, spec, fns)?;
                let changes = spectrum::sign_changes_below_first(problem, spec, 64)?;
                if spec.exhausted || changes > 0 {
                    worst = f64::INFINITY;
                }
                Ok(Stage::measured(
                    "eigenpairs",
                    worst,
                    1.0,
                    format!("worst residual / bound; {detail}; exhausted {}; sign changes below λ1: {changes}", spec.exhausted),
                ))
            }));
            stages.push(if definite {
                run("orthogonality", || {
                    let (off, diag) = gram_deviation(problem, &fns[..fns.len().min(5)])?;
                    let mut s = Stage::measured("orthogonality", off, 1e-6, format!("first 5; max |diag-1| = {diag:.3e}"));
                    if diag > 1e-8 {
                        s.status = Status::Fail;
                    }
                    Ok(s)
                })
            } else {
                Stage::skipped("orthogonality", "indefinite form")
            });
            stages.push(if problem.is_phase_matched() {
                run("decay", || {
                    let offset = spectrum::align_offset(problem, &spec.records)?;
                    let r = asymptotics::decay_check(&spec.records, problem, n_lo, n_hi, DECAY_BOUND)?;
                    Ok(Stage::measured(
                        "decay",
                        r.max_product,
                        DECAY_BOUND,
                        format!("max n*err over n in [{n_lo}, {n_hi}], index offset {offset}"),
                    ))
                })
            } else {
                Stage::skipped("decay", "interfaces not phase-matched")
            });
        }
        Err(e) => {
            for name in ["eigenpairs", "orthogonality", "decay"] {
                stages.push(Stage::failed(name, e));
            }
        }
    }
    stages
}

/// Stage table: `stage, status, measured, tolerance, detail`.
pub fn verify_output(problem: &ValidatedProblem) -> CommandOutput {
    let stages = verify(problem);
    let mut t = Table::new(&["stage", "status", "measured", "tolerance", "detail"]);
    t.header.push(format!("form: {:?}", problem.form()));
    t.header.push(format!("phase_matched: {}", problem.is_phase_matched()));
    for s in &stages {
        t.push(vec![
            s.name.to_string(),
            s.status.as_str().to_string(),
            s.measured.map(num).unwrap_or_default(),
            s.tolerance.map(num).unwrap_or_default(),
            s.detail.clone(),
        ]);
    }
    let verdicts: Vec<_> = stages.iter().map(|s| (s.name.to_string(), s.status)).collect();
    let overall = Status::from_bool(verdicts.iter().all(|(_, s)| *s != Status::Fail));
    t.footer.push(format!("verdict: {}", overall.as_str()));
    CommandOutput { table: t, verdicts, notes: Vec::new() }
}
