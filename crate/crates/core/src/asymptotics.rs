//! Leading-order asymptotic formulas and the `O(1/n)` decay check.
//!
//! Only leading terms are implemented; remainders are never evaluated and
//! are exercised empirically through [`decay_check`].
//!
//! The fundamental-solution forms `cos μΘ(x)` / `sin μΘ(x)` with the
//! piecewise prefactors `1, γ1/δ1, γ1γ3/(δ1δ3)` solve the transmission
//! conditions only for phase-matched interfaces (see
//! [`ValidatedProblem::is_phase_matched`]); for other specs the formulas are
//! still evaluated but describe a superposition only approximately.

use alloc::vec::Vec;
use core::fmt;

use crate::error::Error;
use crate::math;
use crate::problem::{PhaseConvention, Piece, Side, ValidatedProblem};
use crate::shooting::State;
use crate::spectrum::EigenRecord;
use crate::Result;

use core::f64::consts::PI;

/// `|sin α|` below this counts as `sin α = 0`.
pub const SIN_ALPHA_ZERO: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AsymptoticCase {
    /// `β2' ≠ 0`, `sin α ≠ 0`.
    Case1,
    /// `β2' ≠ 0`, `sin α = 0`.
    Case2,
    /// `β2' = 0`, `sin α ≠ 0`.
    Case3,
    /// `β2' = 0`, `sin α = 0`.
    Case4,
}

impl AsymptoticCase {
    pub fn number(self) -> u8 {
        match self {
            Self::Case1 => 1,
            Self::Case2 => 2,
            Self::Case3 => 3,
            Self::Case4 => 4,
        }
    }

    /// `s` in `μ_n ≈ π (n - s) / Θ(1)`.
    pub fn index_shift(self) -> f64 {
        match self {
            Self::Case1 => 1.0,
            Self::Case2 | Self::Case3 => 0.5,
            Self::Case4 => 0.0,
        }
    }
}

impl fmt::Display for AsymptoticCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Case{}", self.number())
    }
}

pub fn case_of(problem: &ValidatedProblem) -> AsymptoticCase {
    let b2p_zero = problem.beta_prime[1] == 0.0;
    let sin_zero = problem.sin_alpha().abs() < SIN_ALPHA_ZERO;
    match (b2p_zero, sin_zero) {
        (false, false) => AsymptoticCase::Case1,
        (false, true) => AsymptoticCase::Case2,
        (true, false) => AsymptoticCase::Case3,
        (true, true) => AsymptoticCase::Case4,
    }
}

fn sin_alpha_is_zero(problem: &ValidatedProblem) -> bool {
    problem.sin_alpha().abs() < SIN_ALPHA_ZERO
}

/// Phase at `x` under the spec's phase convention; `x` at a transmission
/// point is read as the left limit.
pub fn theta(problem: &ValidatedProblem, x: f64) -> f64 {
    match problem.phase_convention {
        PhaseConvention::Accumulated => problem.phase(x),
        PhaseConvention::Printed => {
            let piece = problem.piece_of(x.clamp(-1.0, 1.0), Side::Left).unwrap_or(Piece::Left);
            printed_phase_in(problem, piece, x)
        }
    }
}

/// The literal piecewise arguments `ω1(x+1)`, `ω2 x + ω1 h1 + ω1`, `ω3 x + ω2 h2 + ω1`.
pub fn printed_phase_in(problem: &ValidatedProblem, piece: Piece, x: f64) -> f64 {
    let [w1, w2, w3] = problem.omega;
    match piece {
        Piece::Left => w1 * (x + 1.0),
        Piece::Middle => w2 * x + w1 * problem.h1 + w1,
        Piece::Right => w3 * x + w2 * problem.h2 + w1,
    }
}

fn theta_in(problem: &ValidatedProblem, piece: Piece, x: f64) -> f64 {
    match problem.phase_convention {
        PhaseConvention::Accumulated => problem.phase(x),
        PhaseConvention::Printed => printed_phase_in(problem, piece, x),
    }
}

/// `Θ(1)` under the spec's phase convention.
pub fn theta_total(problem: &ValidatedProblem) -> f64 {
    theta_in(problem, Piece::Right, 1.0)
}

/// `π (n - s) / Θ(1)` with the case shift `s` (1, ½, ½, 0).
pub fn mu_asymptotic(problem: &ValidatedProblem, n: usize) -> f64 {
    let s = case_of(problem).index_shift();
    PI * (n as f64 - s) / theta_total(problem)
}

/// Amplitude ratios `[1, γ1/δ1, γ1γ3/(δ1δ3)]` carried by the leading forms.
pub fn piece_prefactor(problem: &ValidatedProblem, piece: Piece) -> f64 {
    let g = &problem.gamma;
    let d = &problem.delta;
    match piece {
        Piece::Left => 1.0,
        Piece::Middle => g[0] / d[0],
        Piece::Right => (g[0] / d[0]) * (g[2] / d[2]),
    }
}

/// Leading term of `φ^{(k)}(x, μ²)`, `k ∈ {0, 1}`. At a transmission point
/// the left-piece form is used; see [`phi_asymptotic_in`] for the other side.
pub fn phi_asymptotic(problem: &ValidatedProblem, mu: f64, x: f64, k: u8) -> Result<f64> {
    let piece = problem.piece_of(x, Side::Left)?;
    phi_asymptotic_in(problem, piece, mu, x, k)
}

/// Leading term of `φ^{(k)}` using the form of `piece`.
///
/// * `sin α ≠ 0`: `sin α · P_i · cos μΘ(x)`;
/// * `sin α = 0`: `-(cos α / (μ ω1)) · P_i · sin μΘ(x)`;
///
/// with `P_i` from [`piece_prefactor`]; `k = 1` differentiates, producing
/// the slope `ω_i` of the phase on the piece.
pub fn phi_asymptotic_in(problem: &ValidatedProblem, piece: Piece, mu: f64, x: f64, k: u8) -> Result<f64> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::InvalidArgument("μ must be positive"));
    }
    if k > 1 {
        return Err(Error::InvalidArgument("derivative order must be 0 or 1"));
    }
    let p = piece_prefactor(problem, piece);
    let arg = mu * theta_in(problem, piece, x);
    let slope = mu * problem.omega(piece);
    let (s, c) = (math::sin(arg), math::cos(arg));
    Ok(if sin_alpha_is_zero(problem) {
        let amp = -problem.cos_alpha() / (mu * problem.omega[0]) * p;
        if k == 0 {
            amp * s
        } else {
            amp * slope * c
        }
    } else {
        let amp = problem.sin_alpha() * p;
        if k == 0 {
            amp * c
        } else {
            -amp * slope * s
        }
    })
}

/// `Δ3(λ) = (β1' λ + β1) φ3(1) - (β2' λ + β2) φ3'(1)`.
pub fn delta3_from_boundary(problem: &ValidatedProblem, lambda: f64, phi3_at_1: State) -> f64 {
    let [b1, b2] = problem.beta;
    let [b1p, b2p] = problem.beta_prime;
    (b1p * lambda + b1) * phi3_at_1.u - (b2p * lambda + b2) * phi3_at_1.v
}

/// Case 1 leading term `P3 ω3 β2' sin α μ³ sin μΘ(1)` of `Δ3(μ²)`,
/// `P3 = γ1γ3/(δ1δ3)`.
pub fn delta_leading(problem: &ValidatedProblem, mu: f64) -> Result<f64> {
    if case_of(problem) != AsymptoticCase::Case1 {
        return Err(Error::WrongCase);
    }
    delta_leading_derived(problem, mu)
}

/// Leading term of `Δ3(μ²)` for every case, obtained by substituting the
/// leading `φ` forms into [`delta3_from_boundary`]:
///
/// * Case 1: `P3 ω3 β2' sin α μ³ sin μΘ`
/// * Case 2: `P3 (ω3/ω1) β2' cos α μ² cos μΘ`
/// * Case 3: `P3 β1' sin α μ² cos μΘ`
/// * Case 4: `-P3 (β1'/ω1) cos α μ sin μΘ`
pub fn delta_leading_derived(problem: &ValidatedProblem, mu: f64) -> Result<f64> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::InvalidArgument("μ must be positive"));
    }
    let p3 = piece_prefactor(problem, Piece::Right);
    let [w1, _, w3] = problem.omega;
    let [b1p, b2p] = problem.beta_prime;
    let arg = mu * theta_total(problem);
    let (s, c) = (math::sin(arg), math::cos(arg));
    let (sa, ca) = (problem.sin_alpha(), problem.cos_alpha());
    Ok(match case_of(problem) {
        AsymptoticCase::Case1 => p3 * w3 * b2p * sa * mu * mu * mu * s,
        AsymptoticCase::Case2 => p3 * (w3 / w1) * b2p * ca * mu * mu * c,
        AsymptoticCase::Case3 => p3 * b1p * sa * mu * mu * c,
        AsymptoticCase::Case4 => -p3 * (b1p / w1) * ca * mu * s,
    })
}

/// Case-matched leading form of the `n`-th eigenfunction at `x`, with
/// `μ = mu_asymptotic(n)`:
/// `P_i sin α cos μΘ(x)` (Cases 1, 3) or `-P_i (cos α/(μ ω1)) sin μΘ(x)`
/// (Cases 2, 4). A transmission point is read as the left limit.
pub fn eigenfunction_asymptotic(problem: &ValidatedProblem, n: usize, x: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("indices start at 1"));
    }
    let piece = problem.piece_of(x, Side::Left)?;
    let mu = mu_asymptotic(problem, n);
    let arg = mu * theta_in(problem, piece, x);
    let p = piece_prefactor(problem, piece);
    Ok(if sin_alpha_is_zero(problem) {
        -p * problem.cos_alpha() / (mu * problem.omega[0]) * math::sin(arg)
    } else {
        p * problem.sin_alpha() * math::cos(arg)
    })
}

/// The eigenfunction form exactly as printed: printed phase arguments and,
/// for `sin α = 0`, the prefactor `-((ω1+ω2)/ω1) cos α / (π(n-½))`.
/// Kept for side-by-side comparison only.
pub fn eigenfunction_asymptotic_printed(problem: &ValidatedProblem, n: usize, x: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("indices start at 1"));
    }
    let printed = problem.with_phase_convention(PhaseConvention::Printed);
    let piece = printed.piece_of(x, Side::Left)?;
    let mu = mu_asymptotic(&printed, n);
    let arg = mu * printed_phase_in(&printed, piece, x);
    let p = piece_prefactor(&printed, piece);
    let [w1, w2, _] = printed.omega;
    Ok(if sin_alpha_is_zero(&printed) {
        -p * ((w1 + w2) / w1) * printed.cos_alpha() / (PI * (n as f64 - 0.5)) * math::sin(arg)
    } else {
        p * printed.sin_alpha() * math::cos(arg)
    })
}

/// Asymptotic index closest to a computed `μ`.
pub fn nearest_index(problem: &ValidatedProblem, mu: f64) -> i64 {
    let s = case_of(problem).index_shift();
    let x = mu * theta_total(problem) / PI + s;
    math::round(x) as i64
}

/// Offset `n_asym - m` resolved from the first record with `m ≥ 5` and
/// `λ > 0`.
pub fn index_offset(problem: &ValidatedProblem, records: &[EigenRecord]) -> Result<i64> {
    let rec = records
        .iter()
        .find(|r| r.n >= 5 && r.mu_n.is_some())
        .ok_or(Error::MissingIndex { n: 5 })?;
    Ok(nearest_index(problem, rec.mu_n.unwrap_or(0.0)) - rec.n as i64)
}

/// Per-index comparison of computed and asymptotic `μ_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayReport {
    /// Asymptotic indices `n_lo..=n_hi`.
    pub indices: Vec<usize>,
    /// `μ` of the matched computed record.
    pub mu_computed: Vec<f64>,
    pub mu_asym: Vec<f64>,
    /// `e_n = |μ_computed - μ_asym|`.
    pub errors: Vec<f64>,
    /// `n e_n`.
    pub products: Vec<f64>,
    pub max_product: f64,
    pub bound: f64,
    /// `n_asym - record index`.
    pub offset: i64,
    pub verdict: bool,
}

/// Compares computed roots against [`mu_asymptotic`] for `n ∈ [n_lo, n_hi]`.
///
/// The index offset is resolved once (see [`index_offset`]) and then held
/// fixed, so a wrong phase shows up as a linearly growing `n e_n`.
pub fn decay_check(
    computed: &[EigenRecord],
    problem: &ValidatedProblem,
    n_lo: usize,
    n_hi: usize,
    bound: f64,
) -> Result<DecayReport> {
    if n_lo == 0 || n_lo > n_hi {
        return Err(Error::InvalidArgument("need 1 ≤ n_lo ≤ n_hi"));
    }
    if !(bound > 0.0) {
        return Err(Error::InvalidArgument("bound must be positive"));
    }
    let offset = index_offset(problem, computed)?;
    let mut report = DecayReport {
        indices: Vec::new(),
        mu_computed: Vec::new(),
        mu_asym: Vec::new(),
        errors: Vec::new(),
        products: Vec::new(),
        max_product: 0.0,
        bound,
        offset,
        verdict: false,
    };
    for n in n_lo..=n_hi {
        let m = n as i64 - offset;
        let mu = computed
            .iter()
            .find(|r| r.n as i64 == m)
            .and_then(|r| r.mu_n)
            .ok_or(Error::MissingIndex { n })?;
        let asym = mu_asymptotic(problem, n);
        let e = (mu - asym).abs();
        report.indices.push(n);
        report.mu_computed.push(mu);
        report.mu_asym.push(asym);
        report.errors.push(e);
        report.products.push(n as f64 * e);
        report.max_product = report.max_product.max(n as f64 * e);
    }
    report.verdict = report.max_product <= bound;
    Ok(report)
}
