//! Eigenvalues as the sign changes of `Δ(λ)`, normalized eigenfunctions and
//! their Gram matrix.
//!
//! The scan walks upward from a floor below which no eigenvalue can lie,
//! with a step adapted to the asymptotic gap `2μ π/Θ(1)`. Each sign change is
//! refined by bisection that switches to secant steps once the bracket is
//! small, keeping the sign-change bracket throughout. Only odd-multiplicity
//! roots are found: a root at which `Δ` touches zero without changing sign
//! is invisible to the scan.

use alloc::vec::Vec;

use crate::asymptotics;
use crate::charfn;
use crate::error::Error;
use crate::hilbert::{self, HilbertElement};
use crate::math;
use crate::problem::{Piece, ValidatedProblem};
use crate::quadrature::QuadratureGrid;
use crate::shooting::{build_chi, PiecewiseSolution, State};
use crate::Result;

use core::f64::consts::PI;

/// One located eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenRecord {
    /// 1-based position in ascending order.
    pub n: usize,
    pub lambda_n: f64,
    /// `√λ_n` when `λ_n > 0`.
    pub mu_n: Option<f64>,
    /// Scan bracket with `Δ(lo) Δ(hi) < 0`.
    pub bracket: (f64, f64),
    pub abs_delta: f64,
    pub refinement_iters: usize,
}

/// Parallel map used by the scan. The default runs sequentially; callers
/// with threads may supply their own.
pub trait Executor {
    fn map<T: Sync, R: Send>(&self, items: &[T], f: &(dyn Fn(&T) -> R + Sync)) -> Vec<R>;
}

/// Runs everything on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map<T: Sync, R: Send>(&self, items: &[T], f: &(dyn Fn(&T) -> R + Sync)) -> Vec<R> {
        items.iter().map(f).collect()
    }
}

/// Result of [`locate_eigenvalues`].
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub records: Vec<EigenRecord>,
    /// True when the scan budget ran out before `n_max` roots were found.
    pub exhausted: bool,
    pub lambda_floor: f64,
    /// Upper end of the scanned range.
    pub scanned_to: f64,
    /// Number of `Δ` evaluations spent.
    pub evaluations: usize,
}

/// `-factor (1 + max_i max|q| / min ω_i²)`.
pub fn scan_floor(problem: &ValidatedProblem) -> f64 {
    let qmax = Piece::ALL.iter().map(|&p| problem.max_abs_q(p)).fold(0.0, f64::max);
    let wmin = Piece::ALL.iter().map(|&p| problem.weight(p)).fold(f64::INFINITY, f64::min);
    -problem.solver.scan_floor_factor * (1.0 + qmax / wmin)
}

/// Scan step at `λ`: the asymptotic gap divided by `bracket_subdiv`.
pub fn scan_step(problem: &ValidatedProblem, lambda: f64) -> f64 {
    let spacing = PI / problem.total_phase();
    let mu = math::sqrt(lambda.max(0.0)).max(spacing);
    2.0 * mu * spacing / problem.solver.bracket_subdiv as f64
}

const CHUNK: usize = 32;

/// The first `n_max` eigenvalues in ascending order.
pub fn locate_eigenvalues(problem: &ValidatedProblem, n_max: usize) -> Result<Spectrum> {
    locate_eigenvalues_with(problem, n_max, &Sequential)
}

/// [`locate_eigenvalues`] with a caller-supplied executor for the grid
/// evaluations and bracket refinements. Results do not depend on it.
pub fn locate_eigenvalues_with<E: Executor>(problem: &ValidatedProblem, n_max: usize, exec: &E) -> Result<Spectrum> {
    locate_eigenvalues_budget(problem, n_max, default_budget(problem, n_max), exec)
}

/// Scan steps allowed by default: enough to cross the region below zero and
/// four times the expected number of steps up to the `n_max`-th gap.
pub fn default_budget(problem: &ValidatedProblem, n_max: usize) -> usize {
    let floor_steps = math::ceil(-scan_floor(problem) / scan_step(problem, 0.0)) as usize;
    floor_steps + 4 * problem.solver.bracket_subdiv * (n_max + 8)
}

/// [`locate_eigenvalues_with`] with an explicit limit on scan steps.
pub fn locate_eigenvalues_budget<E: Executor>(
    problem: &ValidatedProblem,
    n_max: usize,
    budget: usize,
    exec: &E,
) -> Result<Spectrum> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be at least 1"));
    }
    let floor = scan_floor(problem);

    let mut brackets: Vec<((f64, f64), (f64, f64))> = Vec::new();
    let mut evaluations = 0;
    let mut steps = 0;
    let mut prev = (floor, nonzero_delta(problem, floor, scan_step(problem, floor))?.1);
    evaluations += 1;
    while brackets.len() < n_max && steps < budget {
        let mut grid = Vec::with_capacity(CHUNK);
        let mut l = prev.0;
        for _ in 0..CHUNK.min(budget - steps) {
            l += scan_step(problem, l);
            grid.push(l);
        }
        steps += grid.len();
        evaluations += grid.len();
        let values = exec.map(&grid, &|&l| nonzero_delta(problem, l, scan_step(problem, l)));
        for v in values {
            let cur = v?;
            if prev.1.signum() != cur.1.signum() && brackets.len() < n_max {
                brackets.push((prev, cur));
            }
            prev = cur;
        }
    }
    let exhausted = brackets.len() < n_max;
    let refined = exec.map(&brackets, &|&(a, b)| refine(problem, a, b));
    let mut records = Vec::with_capacity(refined.len());
    for (i, r) in refined.into_iter().enumerate() {
        let (lambda, abs_delta, iters, evals) = r?;
        evaluations += evals;
        let (a, b) = brackets[i];
        records.push(EigenRecord {
            n: i + 1,
            lambda_n: lambda,
            mu_n: (lambda > 0.0).then(|| math::sqrt(lambda)),
            bracket: (a.0, b.0),
            abs_delta,
            refinement_iters: iters,
        });
    }
    Ok(Spectrum { records, exhausted, lambda_floor: floor, scanned_to: prev.0, evaluations })
}

/// `Δ` at `λ`, nudged off an exact zero so signs are always defined.
/// Returns the point actually used.
fn nonzero_delta(problem: &ValidatedProblem, lambda: f64, step: f64) -> Result<(f64, f64)> {
    let d = charfn::delta_value(problem, lambda)?;
    if d != 0.0 {
        return Ok((lambda, d));
    }
    let l = lambda + 1e-3 * step;
    Ok((l, charfn::delta_value(problem, l)?))
}

/// Bisection until the bracket is small, then secant (regula falsi with
/// the Illinois down-weighting) inside the bracket, halting at `root_tol`
/// or when floating-point resolution is exhausted.
///
/// Returns `(λ, |Δ(λ)|, iterations, evaluations)`.
fn refine(problem: &ValidatedProblem, lo: (f64, f64), hi: (f64, f64)) -> Result<(f64, f64, usize, usize)> {
    let tol = problem.solver.root_tol;
    let (mut a, mut fa) = lo;
    let (mut b, mut fb) = hi;
    let switch = 1e-4 * (b - a);
    let mut best = (f64::NAN, f64::INFINITY);
    let mut iters = 0;
    // which end was retained in the previous secant step (for Illinois)
    let mut retained: i8 = 0;
    while b - a > tol && iters < 400 {
        let secant = b - a <= switch;
        let mut x = if secant { (a * fb - b * fa) / (fb - fa) } else { 0.5 * (a + b) };
        if !(x > a && x < b) {
            x = 0.5 * (a + b);
        }
        if x <= a || x >= b {
            break; // no representable point strictly inside
        }
        let fx = charfn::delta_value(problem, x)?;
        iters += 1;
        if fx.abs() < best.1 {
            best = (x, fx.abs());
        }
        if fx == 0.0 {
            break;
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
            if secant && retained == 1 {
                fb *= 0.5;
            }
            retained = 1;
        } else {
            b = x;
            fb = fx;
            if secant && retained == -1 {
                fa *= 0.5;
            }
            retained = -1;
        }
    }
    if best.0.is_nan() {
        // bracket already below tolerance: take the midpoint
        let x = 0.5 * (a + b);
        let fx = charfn::delta_value(problem, x)?;
        iters += 1;
        best = (x, fx.abs());
    }
    Ok((best.0, best.1, iters, iters))
}

/// The spec's index offset check: every record with `n ≥ 5` and `λ > 0`
/// must map to the asymptotic index `n + offset` for one fixed offset.
pub fn align_offset(problem: &ValidatedProblem, records: &[EigenRecord]) -> Result<i64> {
    let offset = asymptotics::index_offset(problem, records)?;
    for r in records.iter().filter(|r| r.n >= 5) {
        if let Some(mu) = r.mu_n {
            let o = asymptotics::nearest_index(problem, mu) - r.n as i64;
            if o != offset {
                return Err(Error::MisalignedIndices { first: offset, other: o, at: r.n });
            }
        }
    }
    Ok(offset)
}

/// Evaluates `Δ` on `points` equally spaced values from the floor up to the
/// first bracket and counts sign changes (expected: none).
pub fn sign_changes_below_first(problem: &ValidatedProblem, spectrum: &Spectrum, points: usize) -> Result<usize> {
    let top = spectrum.records.first().map_or(spectrum.scanned_to, |r| r.bracket.0);
    let lo = spectrum.lambda_floor;
    let mut changes = 0;
    let mut prev: Option<f64> = None;
    for k in 0..points.max(2) {
        let l = lo + (top - lo) * k as f64 / (points.max(2) - 1) as f64;
        let d = charfn::delta_value(problem, l)?;
        if let Some(p) = prev {
            if p.signum() != d.signum() && d != 0.0 {
                changes += 1;
            }
        }
        if d != 0.0 {
            prev = Some(d);
        }
    }
    Ok(changes)
}

/// One sample of an eigenfunction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub x: f64,
    pub piece: Piece,
    pub u: f64,
    pub du: f64,
}

/// A normalized eigenfunction `u = c χ(·, λ_n)`.
#[derive(Debug, Clone)]
pub struct EigenFunction {
    pub n: usize,
    pub lambda_n: f64,
    /// Samples ordered by `x`; breakpoint rows appear once per side.
    pub samples: Vec<Sample>,
    /// `‖χ‖_H` before scaling.
    pub normalization: f64,
    /// True when the sign convention negated `χ`.
    pub sign_flipped: bool,
    solution: PiecewiseSolution,
    element: HilbertElement,
}

impl EigenFunction {
    pub fn solution(&self) -> &PiecewiseSolution {
        &self.solution
    }

    /// `(u, R1'(u))` on the problem's quadrature grid.
    pub fn element(&self) -> &HilbertElement {
        &self.element
    }

    pub fn max_abs_u(&self) -> f64 {
        self.solution.max_abs_u()
    }

    /// `[γ1u(h1-)-δ1u(h1+), γ2u'(h1-)-δ2u'(h1+), γ3u(h2-)-δ3u(h2+), γ4u'(h2-)-δ4u'(h2+)]`.
    pub fn transmission_residuals(&self, problem: &ValidatedProblem) -> [f64; 4] {
        let [a, b, c, d] = self.solution.breakpoint_states();
        let g = &problem.gamma;
        let dl = &problem.delta;
        [g[0] * a.u - dl[0] * b.u, g[1] * a.v - dl[1] * b.v, g[2] * c.u - dl[2] * d.u, g[3] * c.v - dl[3] * d.v]
    }

    /// Left and right boundary residuals at `λ_n`.
    pub fn boundary_residuals(&self, problem: &ValidatedProblem) -> [f64; 2] {
        let l = self.solution.at_minus_one();
        let r = self.solution.at_one();
        let [b1, b2] = problem.beta;
        let [b1p, b2p] = problem.beta_prime;
        let lam = self.lambda_n;
        [
            problem.cos_alpha() * l.u + problem.sin_alpha() * l.v,
            lam * (b1p * r.u - b2p * r.v) + (b1 * r.u - b2 * r.v),
        ]
    }

    /// `1 + max|u|`, the scale of the residual bounds.
    pub fn residual_scale(&self) -> f64 {
        1.0 + self.max_abs_u()
    }
}

/// Normalized eigenfunction for `rec`, sampled at `samples_per_piece`
/// interior points per piece plus the one-sided breakpoint values.
pub fn eigenfunction(problem: &ValidatedProblem, rec: &EigenRecord, samples_per_piece: usize) -> Result<EigenFunction> {
    let grid = QuadratureGrid::new(problem)?;
    eigenfunction_on(problem, &grid, rec, samples_per_piece)
}

/// [`eigenfunction`] with a caller-supplied quadrature grid.
pub fn eigenfunction_on(
    problem: &ValidatedProblem,
    grid: &QuadratureGrid,
    rec: &EigenRecord,
    samples_per_piece: usize,
) -> Result<EigenFunction> {
    let mut chi = build_chi(problem, rec.lambda_n)?;
    let raw = HilbertElement::from_solution(problem, grid, &chi);
    let norm = hilbert::norm(problem, &raw)?;
    let peak = chi.max_abs_u();
    if !(norm > 1e-300) || !(peak > 1e-300) || !norm.is_finite() {
        return Err(Error::DegenerateEigenfunction { lambda: rec.lambda_n });
    }
    let positions = sample_positions(problem, samples_per_piece);
    // sign: first sample above 1e-6 max|u| positive
    let first = positions
        .iter()
        .map(|&(p, x)| chi.state_in(p, x).u)
        .find(|u| u.abs() > 1e-6 * peak)
        .unwrap_or(1.0);
    let sign_flipped = first < 0.0;
    let scale = if sign_flipped { -1.0 / norm } else { 1.0 / norm };
    chi.scale(scale);
    let element = HilbertElement::from_solution(problem, grid, &chi);
    let samples = positions
        .iter()
        .map(|&(piece, x)| {
            let State { u, v } = chi.state_in(piece, x);
            Sample { x, piece, u, du: v }
        })
        .collect();
    Ok(EigenFunction {
        n: rec.n,
        lambda_n: rec.lambda_n,
        samples,
        normalization: norm,
        sign_flipped,
        solution: chi,
        element,
    })
}

/// `s` interior points `a + (b-a)k/(s+1)` per piece, with the one-sided
/// breakpoint rows `h1-`, `h1+`, `h2-`, `h2+` in between.
pub fn sample_positions(problem: &ValidatedProblem, s: usize) -> Vec<(Piece, f64)> {
    let mut out = Vec::with_capacity(3 * s + 4);
    for piece in Piece::ALL {
        let (a, b) = problem.bounds(piece);
        if piece != Piece::Left {
            out.push((piece, a));
        }
        for k in 1..=s {
            out.push((piece, a + (b - a) * k as f64 / (s + 1) as f64));
        }
        if piece != Piece::Right {
            out.push((piece, b));
        }
    }
    out
}

/// Gram matrix of the eigenfunctions in the `H` inner product.
pub fn orthogonality_matrix(problem: &ValidatedProblem, fns: &[EigenFunction]) -> Result<Vec<Vec<f64>>> {
    let n = fns.len();
    let mut m = alloc::vec![alloc::vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let v = hilbert::inner_product(problem, fns[i].element(), fns[j].element())?;
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    Ok(m)
}
