//! Characteristic Wronskians `Δ_i(λ) = W(φ_i, χ_i)` and the canonical `Δ(λ)`.
//!
//! The three Wronskians are related by the transmission ratios,
//! `Δ1 = (δ1δ2/γ1γ2) Δ2 = (δ1δ2δ3δ4/γ1γ2γ3γ4) Δ3`, so their zero sets
//! coincide. The canonical value is `Δ1`.

use alloc::vec::Vec;

use crate::error::Error;
use crate::problem::{Piece, ValidatedProblem};
use crate::shooting::{self, build_chi, build_phi, PiecewiseSolution};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharValue {
    pub lambda: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub delta3: f64,
    /// Canonical value, equal to `delta1`.
    pub delta: f64,
    /// `max(|Δ1 - m2 Δ2|, |Δ1 - m3 Δ3|)` with the transmission multipliers.
    pub consistency_residual: f64,
}

fn midpoint(problem: &ValidatedProblem, piece: Piece) -> f64 {
    let (a, b) = problem.bounds(piece);
    0.5 * (a + b)
}

/// `W(φ_i, χ_i)` at the midpoint of piece `i`.
pub fn delta_i(problem: &ValidatedProblem, lambda: f64, piece: Piece) -> Result<f64> {
    let phi = build_phi(problem, lambda)?;
    let chi = build_chi(problem, lambda)?;
    wronskian_at_mid(problem, &phi, &chi, piece)
}

fn wronskian_at_mid(
    problem: &ValidatedProblem,
    phi: &PiecewiseSolution,
    chi: &PiecewiseSolution,
    piece: Piece,
) -> Result<f64> {
    shooting::wronskian_in(phi, chi, piece, midpoint(problem, piece))
}

/// All three Wronskians from one `(φ, χ)` pair.
pub fn delta(problem: &ValidatedProblem, lambda: f64) -> Result<CharValue> {
    let phi = build_phi(problem, lambda)?;
    let chi = build_chi(problem, lambda)?;
    delta_from_solutions(problem, &phi, &chi)
}

pub fn delta_from_solutions(
    problem: &ValidatedProblem,
    phi: &PiecewiseSolution,
    chi: &PiecewiseSolution,
) -> Result<CharValue> {
    let d1 = wronskian_at_mid(problem, phi, chi, Piece::Left)?;
    let d2 = wronskian_at_mid(problem, phi, chi, Piece::Middle)?;
    let d3 = wronskian_at_mid(problem, phi, chi, Piece::Right)?;
    let [_, m2, m3] = problem.piece_factors();
    let consistency_residual = (d1 - m2 * d2).abs().max((d1 - m3 * d3).abs());
    Ok(CharValue { lambda: phi.lambda(), delta1: d1, delta2: d2, delta3: d3, delta: d1, consistency_residual })
}

/// Canonical `Δ(λ)` only.
pub fn delta_value(problem: &ValidatedProblem, lambda: f64) -> Result<f64> {
    delta_i(problem, lambda, Piece::Left)
}

/// Evaluates [`delta`] on an ascending grid, preserving order.
pub fn delta_on_grid(problem: &ValidatedProblem, lambdas: &[f64]) -> Result<Vec<CharValue>> {
    check_grid(lambdas)?;
    lambdas.iter().map(|&l| delta(problem, l)).collect()
}

pub fn check_grid(lambdas: &[f64]) -> Result<()> {
    if lambdas.iter().any(|l| !l.is_finite()) {
        return Err(Error::InvalidArgument("λ grid contains non-finite values"));
    }
    if lambdas.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument("λ grid must be ascending"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{validate, ProblemSpec};
    use crate::shooting::{build_chi_from, build_phi_from, State};

    fn reference() -> ValidatedProblem {
        validate(ProblemSpec::reference()).unwrap()
    }

    /// Closed form for the reference problem: `cos 2μ - μ sin 2μ` for λ = μ² > 0,
    /// `cosh 2κ + κ sinh 2κ` for λ = -κ².
    fn oracle(lambda: f64) -> f64 {
        if lambda >= 0.0 {
            let mu = lambda.sqrt();
            (2.0 * mu).cos() - mu * (2.0 * mu).sin()
        } else {
            let k = (-lambda).sqrt();
            (2.0 * k).cosh() + k * (2.0 * k).sinh()
        }
    }

    #[test]
    fn unit_transmission_gives_equal_wronskians() {
        let p = reference();
        for lambda in [-5.0, 0.3, 20.0] {
            let v = delta(&p, lambda).unwrap();
            let scale = 1.0 + v.delta1.abs();
            assert!((v.delta1 - v.delta2).abs() < 1e-8 * scale);
            assert!((v.delta1 - v.delta3).abs() < 1e-8 * scale);
        }
    }

    #[test]
    fn closed_form_values() {
        let p = reference();
        let d = delta_value(&p, 1.0).unwrap();
        assert!((d - (-1.325444)).abs() < 1e-6, "{d}");
        assert!((d - oracle(1.0)).abs() < 1e-9);
        let d0 = delta_value(&p, 0.0).unwrap();
        assert!((d0 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn matches_oracle_at_high_frequency() {
        let p = reference();
        for mu in [5.0f64, 17.3, 31.4, 63.0, 80.2] {
            let lambda = mu * mu;
            let got = delta_value(&p, lambda).unwrap();
            let want = oracle(lambda);
            assert!((got - want).abs() < 1e-9 * (1.0 + mu), "μ = {mu}: {got} vs {want}");
        }
    }

    #[test]
    fn lemma_identity_with_nonunit_constants() {
        let spec = ProblemSpec { gamma: [2.0, 3.0, 4.0, 5.0], delta: [1.0; 4], ..ProblemSpec::reference() };
        let p = validate(spec).unwrap();
        let v = delta(&p, 2.0).unwrap();
        assert!(v.consistency_residual <= 1e-8 * (1.0 + v.delta1.abs()));
    }

    #[test]
    fn bilinear_scaling_and_determinism() {
        let p = reference();
        let lambda = 7.0;
        let c = 3.5;
        let phi = build_phi(&p, lambda).unwrap();
        let chi = build_chi(&p, lambda).unwrap();
        let base = delta_from_solutions(&p, &phi, &chi).unwrap().delta;
        let (mut phi_s, mut chi_s) = (phi.clone(), chi.clone());
        phi_s.scale(c);
        chi_s.scale(c);
        let scaled = delta_from_solutions(&p, &phi_s, &chi_s).unwrap().delta;
        assert!((scaled - c * c * base).abs() < 1e-12 * scaled.abs().max(1.0));
        assert_eq!(delta(&p, lambda).unwrap(), delta(&p, lambda).unwrap());
    }

    #[test]
    fn flipping_the_left_launch_flips_delta() {
        let mut spec = ProblemSpec::reference();
        spec.alpha = 0.9;
        let p = validate(spec).unwrap();
        let lambda = 11.0;
        let chi = build_chi_from(&p, lambda, shooting::chi_launch(&p, lambda)).unwrap();
        let phi = build_phi(&p, lambda).unwrap();
        let flipped = build_phi_from(&p, lambda, State::new(-p.sin_alpha(), p.cos_alpha())).unwrap();
        let a = delta_from_solutions(&p, &phi, &chi).unwrap().delta;
        let b = delta_from_solutions(&p, &flipped, &chi).unwrap().delta;
        assert_eq!(a, -b);
    }

    #[test]
    fn grid_evaluation() {
        let p = reference();
        assert!(delta_on_grid(&p, &[]).unwrap().is_empty());
        let grid = [0.1, 0.25, 0.4];
        let vals = delta_on_grid(&p, &grid).unwrap();
        assert_eq!(vals.len(), 3);
        for (v, &l) in vals.iter().zip(&grid) {
            assert_eq!(v.lambda, l);
        }
        // sign change around μ ≈ 0.538 (λ ≈ 0.2896)
        assert!(vals[0].delta > 0.0 && vals[2].delta < 0.0);
        assert!(delta_on_grid(&p, &[1.0, 0.5]).is_err());
        assert!(delta_on_grid(&p, &[f64::NAN]).is_err());
    }

    #[test]
    fn second_differences_are_smooth() {
        // Second divided differences of Δ approximate Δ'' with O(h²) error;
        // halving h must shrink the deviation from the exact Δ''.
        let p = reference();
        let exact_second = |l: f64| {
            let e = 1e-3;
            (oracle(l + e) - 2.0 * oracle(l) + oracle(l - e)) / (e * e)
        };
        let dd = |l: f64, h: f64| {
            (delta_value(&p, l + h).unwrap() - 2.0 * delta_value(&p, l).unwrap() + delta_value(&p, l - h).unwrap())
                / (h * h)
        };
        for l in [-2.0, 0.0, 3.0, 10.0] {
            let target = exact_second(l);
            let e1 = (dd(l, 0.2) - target).abs();
            let e2 = (dd(l, 0.1) - target).abs();
            assert!(e2 < 0.5 * e1 || e2 < 1e-4 * (1.0 + target.abs()), "λ = {l}: {e1} {e2}");
        }
    }
}
