//! Problem data, validation of the standing assumptions, and evaluation of
//! the piecewise coefficients.
//!
//! The equation is `-u'' + q(x) u = λ w(x) u` on `[-1, h1) ∪ (h1, h2) ∪ (h2, 1]`
//! with `w = ω_i²` on piece `i`. Nothing is ever evaluated "at" a transmission
//! point: callers pass a [`Side`] to pick the one-sided limit.

use core::ops::Deref;

use alloc::vec::Vec;

use crate::error::{Error, ValidationError};
use crate::math;
use crate::poly::Polynomial;
use crate::Result;

/// One of the three subintervals `[-1, h1]`, `[h1, h2]`, `[h2, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Piece {
    Left,
    Middle,
    Right,
}

impl Piece {
    pub const ALL: [Piece; 3] = [Piece::Left, Piece::Middle, Piece::Right];

    /// Zero-based index.
    pub fn index(self) -> usize {
        match self {
            Piece::Left => 0,
            Piece::Middle => 1,
            Piece::Right => 2,
        }
    }

    /// One-based label used in tables.
    pub fn number(self) -> usize {
        self.index() + 1
    }

    pub fn from_number(n: usize) -> Option<Self> {
        match n {
            1 => Some(Piece::Left),
            2 => Some(Piece::Middle),
            3 => Some(Piece::Right),
            _ => None,
        }
    }
}

/// Side tag for evaluation at a transmission point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Limit from the left (`h - 0`).
    Left,
    /// Limit from the right (`h + 0`).
    Right,
    /// Any point that is not a transmission point.
    Interior,
}

/// Potential `q`, one polynomial per piece.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PiecewisePotential {
    pub pieces: [Polynomial; 3],
}

impl PiecewisePotential {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new(left: Vec<f64>, middle: Vec<f64>, right: Vec<f64>) -> Self {
        Self { pieces: [Polynomial::new(left), Polynomial::new(middle), Polynomial::new(right)] }
    }

    pub fn piece(&self, piece: Piece) -> &Polynomial {
        &self.pieces[piece.index()]
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.iter().all(|p| p.coeffs().iter().all(|&c| c == 0.0))
    }
}

/// Numerical settings shared by the integrator, root finder and quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Relative/absolute tolerance of the adaptive integrator.
    pub rk_tol: f64,
    /// Absolute tolerance for eigenvalues on the λ-axis.
    pub root_tol: f64,
    /// Minimum number of scan samples per asymptotic eigenvalue gap.
    pub bracket_subdiv: usize,
    /// Gauss–Legendre nodes per piece.
    pub quad_nodes: usize,
    /// Multiplier for the lower end of the eigenvalue scan.
    pub scan_floor_factor: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { rk_tol: 1e-10, root_tol: 1e-11, bracket_subdiv: 8, quad_nodes: 257, scan_floor_factor: 10.0 }
    }
}

/// Phase function used by the asymptotic formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhaseConvention {
    /// `Θ(x) = ∫_{-1}^{x} ω`, piecewise linear with slopes `ω_i`.
    #[default]
    Accumulated,
    /// The literal arguments `ω1(x+1)`, `ω2 x + ω1 h1 + ω1`, `ω3 x + ω2 h2 + ω1`.
    /// They do not reduce to the interval length when all `ω_i = 1`; kept
    /// only as a negative control for the decay checks.
    Printed,
}

/// All coefficients of the boundary-value-transmission problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub h1: f64,
    pub h2: f64,
    /// Square roots of the weight on each piece.
    pub omega: [f64; 3],
    /// Angle of the boundary condition `cos α u(-1) + sin α u'(-1) = 0`.
    pub alpha: f64,
    /// `[β1, β2]`.
    pub beta: [f64; 2],
    /// `[β1', β2']`.
    pub beta_prime: [f64; 2],
    pub gamma: [f64; 4],
    pub delta: [f64; 4],
    pub q: PiecewisePotential,
    pub solver: SolverConfig,
    pub phase_convention: PhaseConvention,
}

impl ProblemSpec {
    /// Zero potential, unit weights and unit transmission constants, with
    /// breakpoints at `∓1/3`, `α = 0`, `β = (0, 1)`, `β' = (1, 0)`.
    pub fn reference() -> Self {
        Self {
            h1: -1.0 / 3.0,
            h2: 1.0 / 3.0,
            omega: [1.0; 3],
            alpha: 0.0,
            beta: [0.0, 1.0],
            beta_prime: [1.0, 0.0],
            gamma: [1.0; 4],
            delta: [1.0; 4],
            q: PiecewisePotential::zero(),
            solver: SolverConfig::default(),
            phase_convention: PhaseConvention::Accumulated,
        }
    }

    pub fn rho(&self) -> f64 {
        self.beta_prime[0] * self.beta[1] - self.beta[0] * self.beta_prime[1]
    }
}

/// Sign structure of the weighted bilinear form on `H`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormKind {
    /// All multipliers positive: a genuine inner product.
    Definite,
    /// Some multiplier is negative; symmetry certificates do not apply.
    Indefinite,
}

/// A [`ProblemSpec`] whose standing assumptions have been checked.
///
/// Immutable after construction; every method is a pure function.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedProblem {
    spec: ProblemSpec,
    rho: f64,
    sin_alpha: f64,
    cos_alpha: f64,
}

/// Checks every standing assumption and returns the spec unchanged on success.
pub fn validate(spec: ProblemSpec) -> core::result::Result<ValidatedProblem, ValidationError> {
    let finite = |v: f64, field: &'static str| {
        if v.is_finite() {
            Ok(())
        } else {
            Err(ValidationError::NonFinite { field })
        }
    };
    finite(spec.h1, "h1")?;
    finite(spec.h2, "h2")?;
    finite(spec.alpha, "alpha")?;
    for &w in &spec.omega {
        finite(w, "omega")?;
    }
    for &b in spec.beta.iter().chain(&spec.beta_prime) {
        finite(b, "beta")?;
    }
    for &g in spec.gamma.iter().chain(&spec.delta) {
        finite(g, "gamma/delta")?;
    }
    if !spec.q.pieces.iter().all(Polynomial::is_finite) {
        return Err(ValidationError::NonFinite { field: "q" });
    }

    if !(-1.0 < spec.h1 && spec.h1 < spec.h2 && spec.h2 < 1.0) {
        return Err(ValidationError::BreakpointOrder { h1: spec.h1, h2: spec.h2 });
    }
    for (i, &w) in spec.omega.iter().enumerate() {
        if w <= 0.0 {
            return Err(ValidationError::NonPositiveOmega { index: i + 1, value: w });
        }
    }
    if spec.beta_prime[0] == 0.0 && spec.beta_prime[1] == 0.0 {
        return Err(ValidationError::DegenerateBetaPrime);
    }
    if spec.beta[0] == 0.0 && spec.beta[1] == 0.0 {
        return Err(ValidationError::DegenerateBeta);
    }
    let rho = spec.rho();
    if rho <= 0.0 {
        return Err(ValidationError::NonPositiveRho { rho });
    }
    for (name, vals) in [("gamma", &spec.gamma), ("delta", &spec.delta)] {
        if let Some(i) = vals.iter().position(|&v| v == 0.0) {
            return Err(ValidationError::ZeroTransmission { name, index: i + 1 });
        }
    }

    let s = &spec.solver;
    let positive = |v: f64, field: &'static str| {
        if v > 0.0 && v.is_finite() {
            Ok(())
        } else {
            Err(ValidationError::SolverConfig { field, value: v })
        }
    };
    positive(s.rk_tol, "rk_tol")?;
    positive(s.root_tol, "root_tol")?;
    positive(s.scan_floor_factor, "scan_floor_factor")?;
    if s.quad_nodes == 0 {
        return Err(ValidationError::SolverConfig { field: "quad_nodes", value: 0.0 });
    }
    if s.bracket_subdiv < 4 {
        return Err(ValidationError::SolverConfig {
            field: "bracket_subdiv",
            value: s.bracket_subdiv as f64,
        });
    }

    let sin_alpha = math::sin(spec.alpha);
    let cos_alpha = math::cos(spec.alpha);
    Ok(ValidatedProblem { spec, rho, sin_alpha, cos_alpha })
}

impl Deref for ValidatedProblem {
    type Target = ProblemSpec;

    fn deref(&self) -> &ProblemSpec {
        &self.spec
    }
}

impl ValidatedProblem {
    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    pub fn into_spec(self) -> ProblemSpec {
        self.spec
    }

    /// Same problem with different solver settings.
    pub fn with_solver(&self, solver: SolverConfig) -> core::result::Result<Self, ValidationError> {
        let mut spec = self.spec.clone();
        spec.solver = solver;
        validate(spec)
    }

    /// Same problem with a different phase convention for the asymptotics.
    pub fn with_phase_convention(&self, phase: PhaseConvention) -> Self {
        let mut out = self.clone();
        out.spec.phase_convention = phase;
        out
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn sin_alpha(&self) -> f64 {
        self.sin_alpha
    }

    pub fn cos_alpha(&self) -> f64 {
        self.cos_alpha
    }

    pub fn bounds(&self, piece: Piece) -> (f64, f64) {
        match piece {
            Piece::Left => (-1.0, self.spec.h1),
            Piece::Middle => (self.spec.h1, self.spec.h2),
            Piece::Right => (self.spec.h2, 1.0),
        }
    }

    pub fn omega(&self, piece: Piece) -> f64 {
        self.spec.omega[piece.index()]
    }

    /// `ω_i²` on the given piece.
    pub fn weight(&self, piece: Piece) -> f64 {
        let w = self.omega(piece);
        w * w
    }

    /// Locates `x`; at a transmission point the side tag decides.
    pub fn piece_of(&self, x: f64, side: Side) -> Result<Piece> {
        if !(-1.0..=1.0).contains(&x) || x.is_nan() {
            return Err(Error::OutOfDomain { x });
        }
        let (h1, h2) = (self.spec.h1, self.spec.h2);
        let at_break = |h: f64, before: Piece, after: Piece| match side {
            Side::Left => Ok(before),
            Side::Right => Ok(after),
            Side::Interior => Err(Error::OneSidedValueRequired { x: h }),
        };
        if x < h1 {
            Ok(Piece::Left)
        } else if x == h1 {
            at_break(h1, Piece::Left, Piece::Middle)
        } else if x < h2 {
            Ok(Piece::Middle)
        } else if x == h2 {
            at_break(h2, Piece::Middle, Piece::Right)
        } else {
            Ok(Piece::Right)
        }
    }

    /// `ω(x)`, the weight value `ω_i²`; undefined at `h1`, `h2`.
    pub fn weight_at(&self, x: f64) -> Result<f64> {
        self.piece_of(x, Side::Interior).map(|p| self.weight(p))
    }

    /// `q(x)`, one-sided at transmission points.
    pub fn q_at(&self, x: f64, side: Side) -> Result<f64> {
        let piece = self.piece_of(x, side)?;
        Ok(self.spec.q.piece(piece).eval(x))
    }

    /// Accumulated phase `Θ(x) = ∫_{-1}^{x} √w`.
    pub fn phase(&self, x: f64) -> f64 {
        let [w1, w2, w3] = self.spec.omega;
        let (h1, h2) = (self.spec.h1, self.spec.h2);
        w1 * (x.min(h1) + 1.0) + w2 * (x - h1).clamp(0.0, h2 - h1) + w3 * (x - h2).max(0.0)
    }

    /// Total phase `Θ(1)`.
    pub fn total_phase(&self) -> f64 {
        self.phase(1.0)
    }

    /// Multipliers of the three `L2` parts of the inner product:
    /// `[1, δ1δ2/(γ1γ2), δ1δ2δ3δ4/(γ1γ2γ3γ4)]`.
    pub fn piece_factors(&self) -> [f64; 3] {
        let [g1, g2, g3, g4] = self.spec.gamma;
        let [d1, d2, d3, d4] = self.spec.delta;
        let m2 = (d1 * d2) / (g1 * g2);
        let m3 = m2 * (d3 * d4) / (g3 * g4);
        [1.0, m2, m3]
    }

    /// Coefficient of the boundary coordinate term `f1 g1`.
    pub fn boundary_factor(&self) -> f64 {
        self.piece_factors()[2] / self.rho
    }

    pub fn form(&self) -> FormKind {
        let [_, m2, m3] = self.piece_factors();
        if m2 > 0.0 && m3 > 0.0 && self.boundary_factor() > 0.0 {
            FormKind::Definite
        } else {
            FormKind::Indefinite
        }
    }

    /// True when the transmission ratios carry `cos(μΘ)`-type solutions
    /// across both interfaces without reflection:
    /// `(γ2/δ2) ω1 = (γ1/δ1) ω2` and `(γ4/δ4) ω2 = (γ3/δ3) ω3`.
    ///
    /// The leading asymptotic forms of the fundamental solutions (and the
    /// eigenvalue spacing `π/Θ(1)`) are only correct under this condition.
    pub fn is_phase_matched(&self) -> bool {
        let [g1, g2, g3, g4] = self.spec.gamma;
        let [d1, d2, d3, d4] = self.spec.delta;
        let [w1, w2, w3] = self.spec.omega;
        let close = |a: f64, b: f64| math::abs(a - b) <= 1e-12 * (a.abs().max(b.abs()));
        close(g2 / d2 * w1, g1 / d1 * w2) && close(g4 / d4 * w2, g3 / d3 * w3)
    }

    /// Upper bound of `|q|` on the closed piece (dense sampling).
    pub fn max_abs_q(&self, piece: Piece) -> f64 {
        let (a, b) = self.bounds(piece);
        let p = self.spec.q.piece(piece);
        const N: usize = 1024;
        (0..=N)
            .map(|k| math::abs(p.eval(a + (b - a) * k as f64 / N as f64)))
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn weighted(omega: [f64; 3]) -> ValidatedProblem {
        validate(ProblemSpec { omega, ..ProblemSpec::reference() }).unwrap()
    }

    #[test]
    fn reference_spec_is_accepted() {
        let p = validate(ProblemSpec::reference()).unwrap();
        assert_eq!(p.rho(), 1.0);
        assert_eq!(p.form(), FormKind::Definite);
        assert!(p.is_phase_matched());
    }

    #[test]
    fn degenerate_beta_prime_rejected() {
        let spec = ProblemSpec { beta_prime: [0.0, 0.0], ..ProblemSpec::reference() };
        assert_eq!(validate(spec), Err(ValidationError::DegenerateBetaPrime));
    }

    #[test]
    fn negative_rho_rejected() {
        let spec = ProblemSpec { beta: [1.0, 0.0], beta_prime: [0.0, 1.0], ..ProblemSpec::reference() };
        assert_eq!(validate(spec), Err(ValidationError::NonPositiveRho { rho: -1.0 }));
    }

    #[test]
    fn each_invariant_has_its_own_error() {
        let r = ProblemSpec::reference;
        assert!(matches!(
            validate(ProblemSpec { h1: 0.5, h2: 0.2, ..r() }),
            Err(ValidationError::BreakpointOrder { .. })
        ));
        assert!(matches!(
            validate(ProblemSpec { h1: -1.0, ..r() }),
            Err(ValidationError::BreakpointOrder { .. })
        ));
        assert_eq!(
            validate(ProblemSpec { omega: [1.0, 0.0, 1.0], ..r() }),
            Err(ValidationError::NonPositiveOmega { index: 2, value: 0.0 })
        );
        assert_eq!(
            validate(ProblemSpec { beta: [0.0, 0.0], ..r() }),
            Err(ValidationError::DegenerateBeta)
        );
        assert_eq!(
            validate(ProblemSpec { delta: [1.0, 1.0, 0.0, 1.0], ..r() }),
            Err(ValidationError::ZeroTransmission { name: "delta", index: 3 })
        );
        assert_eq!(
            validate(ProblemSpec { gamma: [0.0, 1.0, 1.0, 1.0], ..r() }),
            Err(ValidationError::ZeroTransmission { name: "gamma", index: 1 })
        );
        let mut spec = r();
        spec.solver.bracket_subdiv = 3;
        assert!(matches!(validate(spec), Err(ValidationError::SolverConfig { field: "bracket_subdiv", .. })));
        let mut spec = r();
        spec.q = PiecewisePotential::new(vec![f64::NAN], vec![0.0], vec![0.0]);
        assert_eq!(validate(spec), Err(ValidationError::NonFinite { field: "q" }));
    }

    #[test]
    fn validate_is_idempotent() {
        let p = validate(ProblemSpec::reference()).unwrap();
        let again = validate(p.clone().into_spec()).unwrap();
        assert_eq!(p, again);
    }

    #[test]
    fn weight_is_piecewise() {
        let p = weighted([1.0, 2.0, 3.0]);
        assert_eq!(p.weight_at(-0.9).unwrap(), 1.0);
        assert_eq!(p.weight_at(0.0).unwrap(), 4.0);
        assert_eq!(p.weight_at(0.9).unwrap(), 9.0);
        assert_eq!(p.weight_at(p.h2), Err(Error::OneSidedValueRequired { x: p.h2 }));
        assert_eq!(p.weight_at(1.5), Err(Error::OutOfDomain { x: 1.5 }));
    }

    #[test]
    fn q_is_piecewise_and_one_sided() {
        let spec = ProblemSpec {
            q: PiecewisePotential::new(vec![1.0, 2.0], vec![5.0], vec![0.0]),
            ..ProblemSpec::reference()
        };
        let p = validate(spec).unwrap();
        assert_eq!(p.q_at(-0.5, Side::Interior).unwrap(), 0.0);
        assert_eq!(p.q_at(p.h1, Side::Right).unwrap(), 5.0);
        assert_eq!(p.q_at(p.h1, Side::Left).unwrap(), 1.0 + 2.0 * p.h1);
        let zero = validate(ProblemSpec::reference()).unwrap();
        assert_eq!(zero.q_at(0.3, Side::Interior).unwrap(), 0.0);
    }

    #[test]
    fn phase_values() {
        let p = weighted([1.0, 1.0, 1.0]);
        assert_eq!(p.phase(-1.0), 0.0);
        assert_eq!(p.phase(1.0), 2.0);
        let p = weighted([1.0, 2.0, 3.0]);
        assert!((p.total_phase() - 4.0).abs() < 1e-15);
    }

    #[test]
    fn phase_matches_integrated_root_weight() {
        // Composite midpoint rule on √w is exact for a piecewise constant
        // integrand when no cell straddles a breakpoint.
        let p = weighted([1.0, 2.0, 3.0]);
        let n = 3 * 1000;
        let h = 2.0 / n as f64;
        let total: f64 = (0..n).map(|k| math::sqrt(p.weight_at(-1.0 + (k as f64 + 0.5) * h).unwrap()) * h).sum();
        assert!((total - 4.0).abs() < 1e-12, "{total}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn phase_is_monotone_with_piecewise_slopes(a in -1.0f64..1.0, b in -1.0f64..1.0) {
            let p = weighted([0.7, 2.0, 1.3]);
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(p.phase(lo) <= p.phase(hi));
            if lo < hi {
                prop_assert!(p.phase(lo) < p.phase(hi));
            }
            for piece in Piece::ALL {
                let (l, r) = p.bounds(piece);
                let (x0, x1) = (l + 0.25 * (r - l), l + 0.75 * (r - l));
                let slope = (p.phase(x1) - p.phase(x0)) / (x1 - x0);
                prop_assert!((slope - p.omega(piece)).abs() < 1e-12);
            }
        }

        #[test]
        fn evaluation_matches_direct_polynomial(t in 0.0f64..1.0) {
            let spec = ProblemSpec {
                q: PiecewisePotential::new(vec![1.0, -2.0, 0.5], vec![3.0, 1.0], vec![-1.0, 0.0, 0.0, 2.0]),
                omega: [1.0, 2.0, 3.0],
                ..ProblemSpec::reference()
            };
            let p = validate(spec).unwrap();
            for piece in Piece::ALL {
                let (l, r) = p.bounds(piece);
                let x = l + (r - l) * (0.001 + 0.998 * t);
                prop_assert_eq!(p.q_at(x, Side::Interior).unwrap(), p.q.piece(piece).eval(x));
                prop_assert_eq!(p.weight_at(x).unwrap(), p.weight(piece));
            }
        }
    }
}
