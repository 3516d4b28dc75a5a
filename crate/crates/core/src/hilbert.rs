//! The weighted space `H = L2(-1,h1) ⊕ L2(h1,h2) ⊕ L2(h2,1) ⊕ R`, the
//! operator `A` and numerical certificates of its symmetry.
//!
//! The inner product is
//! `⟨F,G⟩ = ω1² ∫₁ fg + m2 ω2² ∫₂ fg + m3 ω3² ∫₃ fg + (m3/ρ) f1 g1`
//! with `m2 = δ1δ2/(γ1γ2)` and `m3 = δ1δ2δ3δ4/(γ1γ2γ3γ4)`, and
//! `AF = ((-f'' + q f)/ω², -R1(f))` on elements with `f1 = R1'(f)`.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::math;
use crate::problem::{Piece, ValidatedProblem};
use crate::quadrature::QuadratureGrid;
use crate::shooting::{state_wronskian, PiecewiseSolution, State};
use crate::Result;

use core::f64::consts::PI;

/// One-sided end data of a piecewise function:
/// `[-1, h1-0, h1+0, h2-0, h2+0, 1]`.
pub type EndStates = [State; 6];

/// Derivative data that [`apply_A`] and the Wronskian identities need.
#[derive(Debug, Clone, PartialEq)]
pub struct Jets {
    /// `f'` at the quadrature nodes.
    pub d1: [Vec<f64>; 3],
    /// `f''` at the quadrature nodes.
    pub d2: [Vec<f64>; 3],
    pub ends: EndStates,
}

/// An element `F = (f, f1)` of `H`, with `f` sampled at the quadrature nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct HilbertElement {
    grid: QuadratureGrid,
    values: [Vec<f64>; 3],
    jets: Option<Jets>,
    f1: f64,
}

impl HilbertElement {
    /// Function values only; such an element supports inner products but
    /// not [`apply_A`].
    pub fn from_values(grid: &QuadratureGrid, mut f: impl FnMut(Piece, f64) -> f64, f1: f64) -> Self {
        let values = Piece::ALL.map(|p| grid.nodes(p).iter().map(|&x| f(p, x)).collect());
        Self { grid: grid.clone(), values, jets: None, f1 }
    }

    /// From a callback returning `(f, f', f'')` on each closed piece.
    pub fn from_jets(
        problem: &ValidatedProblem,
        grid: &QuadratureGrid,
        mut f: impl FnMut(Piece, f64) -> (f64, f64, f64),
        f1: f64,
    ) -> Self {
        let mut values: [Vec<f64>; 3] = Default::default();
        let mut d1: [Vec<f64>; 3] = Default::default();
        let mut d2: [Vec<f64>; 3] = Default::default();
        for p in Piece::ALL {
            for &x in grid.nodes(p) {
                let (u, v, w) = f(p, x);
                values[p.index()].push(u);
                d1[p.index()].push(v);
                d2[p.index()].push(w);
            }
        }
        let mut end = |p: Piece, x: f64| {
            let (u, v, _) = f(p, x);
            State::new(u, v)
        };
        let (h1, h2) = (problem.h1, problem.h2);
        let ends = [
            end(Piece::Left, -1.0),
            end(Piece::Left, h1),
            end(Piece::Middle, h1),
            end(Piece::Middle, h2),
            end(Piece::Right, h2),
            end(Piece::Right, 1.0),
        ];
        Self { grid: grid.clone(), values, jets: Some(Jets { d1, d2, ends }), f1 }
    }

    /// `(u, R1'(u))` for a shooting solution; `u''` comes from the equation.
    pub fn from_solution(problem: &ValidatedProblem, grid: &QuadratureGrid, sol: &PiecewiseSolution) -> Self {
        let mut el = Self::from_jets(
            problem,
            grid,
            |p, x| {
                let (s, w) = sol.jet_in(p, x);
                (s.u, s.v, w)
            },
            0.0,
        );
        if let Some(j) = &mut el.jets {
            // exact one-sided limits from the trajectories
            let [a, b, c, d] = sol.breakpoint_states();
            j.ends = [sol.at_minus_one(), a, b, c, d, sol.at_one()];
        }
        el.f1 = r1_prime_state(problem, sol.at_one());
        el
    }

    pub fn grid(&self) -> &QuadratureGrid {
        &self.grid
    }

    pub fn values(&self, piece: Piece) -> &[f64] {
        &self.values[piece.index()]
    }

    pub fn jets(&self) -> Option<&Jets> {
        self.jets.as_ref()
    }

    pub fn f1(&self) -> f64 {
        self.f1
    }

    pub fn with_f1(mut self, f1: f64) -> Self {
        self.f1 = f1;
        self
    }

    /// `a F + b G` (values and scalar coordinate; jets are dropped).
    pub fn linear_combination(a: f64, f: &Self, b: f64, g: &Self) -> Result<Self> {
        if f.grid != g.grid {
            return Err(Error::IncompatibleGrids);
        }
        let values = Piece::ALL.map(|p| {
            f.values(p).iter().zip(g.values(p)).map(|(x, y)| a * x + b * y).collect()
        });
        Ok(Self { grid: f.grid.clone(), values, jets: None, f1: a * f.f1 + b * g.f1 })
    }

    fn ends(&self) -> Result<&EndStates> {
        self.jets
            .as_ref()
            .map(|j| &j.ends)
            .ok_or(Error::InvalidArgument("element carries no derivative data"))
    }
}

/// `⟨F, G⟩_H` using the shared quadrature grid.
pub fn inner_product(problem: &ValidatedProblem, f: &HilbertElement, g: &HilbertElement) -> Result<f64> {
    if f.grid != g.grid {
        return Err(Error::IncompatibleGrids);
    }
    let factors = problem.piece_factors();
    let mut total = 0.0;
    for p in Piece::ALL {
        let w = f.grid.weights(p);
        let s: f64 = f.values(p).iter().zip(g.values(p)).zip(w).map(|((a, b), w)| a * b * w).sum();
        total += factors[p.index()] * problem.weight(p) * s;
    }
    Ok(total + problem.boundary_factor() * f.f1 * g.f1)
}

/// `‖F‖_H`; for indefinite forms this is `√|⟨F,F⟩|`.
pub fn norm(problem: &ValidatedProblem, f: &HilbertElement) -> Result<f64> {
    Ok(math::sqrt(inner_product(problem, f, f)?.abs()))
}

fn r1_state(problem: &ValidatedProblem, s: State) -> f64 {
    problem.beta[0] * s.u - problem.beta[1] * s.v
}

fn r1_prime_state(problem: &ValidatedProblem, s: State) -> f64 {
    problem.beta_prime[0] * s.u - problem.beta_prime[1] * s.v
}

/// `R1(f) = β1 f(1) - β2 f'(1)`.
#[allow(non_snake_case)]
pub fn R1(problem: &ValidatedProblem, f: &HilbertElement) -> Result<f64> {
    Ok(r1_state(problem, f.ends()?[5]))
}

/// `R1'(f) = β1' f(1) - β2' f'(1)`.
#[allow(non_snake_case)]
pub fn R1prime(problem: &ValidatedProblem, f: &HilbertElement) -> Result<f64> {
    Ok(r1_prime_state(problem, f.ends()?[5]))
}

/// `AF = ((-f'' + q f)/ω², -R1(f))`; needs derivative data.
#[allow(non_snake_case)]
pub fn apply_A(problem: &ValidatedProblem, f: &HilbertElement) -> Result<HilbertElement> {
    let jets = f.jets.as_ref().ok_or(Error::InvalidArgument("element carries no derivative data"))?;
    let values = Piece::ALL.map(|p| {
        let q = problem.q.piece(p);
        let w = problem.weight(p);
        f.grid
            .nodes(p)
            .iter()
            .zip(f.values(p))
            .zip(&jets.d2[p.index()])
            .map(|((&x, &u), &u2)| (-u2 + q.eval(x) * u) / w)
            .collect()
    });
    Ok(HilbertElement { grid: f.grid.clone(), values, jets: None, f1: -R1(problem, f)? })
}

/// Residuals of the domain conditions: `[L1 f, L3 f, L4 f, L5 f, L6 f, f1 - R1'(f)]`.
pub fn domain_residuals(problem: &ValidatedProblem, f: &HilbertElement) -> Result<[f64; 6]> {
    let e = f.ends()?;
    let g = &problem.gamma;
    let d = &problem.delta;
    Ok([
        problem.cos_alpha() * e[0].u + problem.sin_alpha() * e[0].v,
        g[0] * e[1].u - d[0] * e[2].u,
        g[1] * e[1].v - d[1] * e[2].v,
        g[2] * e[3].u - d[2] * e[4].u,
        g[3] * e[3].v - d[3] * e[4].v,
        f.f1 - r1_prime_state(problem, e[5]),
    ])
}

/// A smooth-per-piece function in `D(A)` built from Hermite cubics and
/// trigonometric bubbles.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainFunction {
    pieces: [PieceShape; 3],
    bounds: [(f64, f64); 3],
}

#[derive(Debug, Clone, PartialEq)]
struct PieceShape {
    /// Hermite data `(u(a), u'(a), u(b), u'(b))`.
    hermite: [f64; 4],
    /// Terms `c cos(kπt)` with zero value and slope at both ends in total.
    bubbles: Vec<(f64, f64)>,
}

impl PieceShape {
    fn eval(&self, a: f64, b: f64, x: f64) -> (f64, f64, f64) {
        let len = b - a;
        let t = (x - a) / len;
        let [ua, va, ub, vb] = self.hermite;
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        let d00 = 6.0 * t2 - 6.0 * t;
        let d10 = 3.0 * t2 - 4.0 * t + 1.0;
        let d01 = -6.0 * t2 + 6.0 * t;
        let d11 = 3.0 * t2 - 2.0 * t;
        let s00 = 12.0 * t - 6.0;
        let s10 = 6.0 * t - 4.0;
        let s01 = -12.0 * t + 6.0;
        let s11 = 6.0 * t - 2.0;
        let mut u = ua * h00 + va * len * h10 + ub * h01 + vb * len * h11;
        let mut v = (ua * d00 + ub * d01) / len + va * d10 + vb * d11;
        let mut w = (ua * s00 + ub * s01) / (len * len) + (va * s10 + vb * s11) / len;
        for &(c, k) in &self.bubbles {
            let om = k * PI / len;
            let arg = k * PI * t;
            u += c * math::cos(arg);
            v -= c * om * math::sin(arg);
            w -= c * om * om * math::cos(arg);
        }
        (u, v, w)
    }
}

/// `sin²(πt) cos(jπt)` written as cosines: `¼(2cos jπt − cos (j+2)πt − cos |j−2|πt)`.
fn bubble_terms(j: u32, c: f64) -> [(f64, f64); 3] {
    let j = j as f64;
    [(0.5 * c, j), (-0.25 * c, j + 2.0), (-0.25 * c, (j - 2.0).abs())]
}

impl DomainFunction {
    /// `(f, f', f'')` on the closed piece.
    pub fn eval(&self, piece: Piece, x: f64) -> (f64, f64, f64) {
        let (a, b) = self.bounds[piece.index()];
        self.pieces[piece.index()].eval(a, b, x)
    }

    /// `(f(1), f'(1))`.
    pub fn at_one(&self) -> State {
        let (u, v, _) = self.eval(Piece::Right, 1.0);
        State::new(u, v)
    }

    /// Element `(f, R1'(f))` on `grid`.
    pub fn to_element(&self, problem: &ValidatedProblem, grid: &QuadratureGrid) -> HilbertElement {
        let f1 = r1_prime_state(problem, self.at_one());
        HilbertElement::from_jets(problem, grid, |p, x| self.eval(p, x), f1)
    }
}

/// A random element of `D(A)`: `L1 f = 0` from the launch direction at `-1`,
/// the transmission jumps imposed on the Hermite data, random far-end data
/// and random bubbles; `f1 = R1'(f)`.
pub fn sample_domain_function(problem: &ValidatedProblem, seed: u64) -> DomainFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = &problem.gamma;
    let d = &problem.delta;
    let amp: f64 = rng.random_range(0.5..1.5) * if rng.random::<bool>() { 1.0 } else { -1.0 };
    let mut start = State::new(amp * problem.sin_alpha(), -amp * problem.cos_alpha());
    let mut pieces = Vec::with_capacity(3);
    for p in Piece::ALL {
        let end = State::new(rng.random_range(-1.0..1.0), rng.random_range(-2.0..2.0));
        let mut bubbles = Vec::new();
        for j in 0..3 {
            let c: f64 = rng.random_range(-0.5..0.5);
            bubbles.extend_from_slice(&bubble_terms(j, c));
        }
        pieces.push(PieceShape { hermite: [start.u, start.v, end.u, end.v], bubbles });
        start = match p {
            Piece::Left => State::new((g[0] / d[0]) * end.u, (g[1] / d[1]) * end.v),
            Piece::Middle => State::new((g[2] / d[2]) * end.u, (g[3] / d[3]) * end.v),
            Piece::Right => end,
        };
    }
    let mut it = pieces.into_iter();
    let pieces = [it.next().unwrap(), it.next().unwrap(), it.next().unwrap()];
    DomainFunction { pieces, bounds: Piece::ALL.map(|p| problem.bounds(p)) }
}

/// [`sample_domain_function`] sampled on `grid`.
pub fn sample_domain_element(problem: &ValidatedProblem, grid: &QuadratureGrid, seed: u64) -> HilbertElement {
    sample_domain_function(problem, seed).to_element(problem, grid)
}

/// `|⟨AF,G⟩ - ⟨F,AG⟩|`.
pub fn symmetry_residual(problem: &ValidatedProblem, f: &HilbertElement, g: &HilbertElement) -> Result<f64> {
    Ok(symmetry_check(problem, f, g)?.residual)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryCheck {
    pub residual: f64,
    /// `1 + ‖AF‖‖G‖ + ‖F‖‖AG‖`.
    pub scale: f64,
}

pub fn symmetry_check(problem: &ValidatedProblem, f: &HilbertElement, g: &HilbertElement) -> Result<SymmetryCheck> {
    let af = apply_A(problem, f)?;
    let ag = apply_A(problem, g)?;
    let residual = (inner_product(problem, &af, g)? - inner_product(problem, f, &ag)?).abs();
    let scale = 1.0 + norm(problem, &af)? * norm(problem, g)? + norm(problem, f)? * norm(problem, &ag)?;
    Ok(SymmetryCheck { residual, scale })
}

/// Boundary terms of `⟨AF,G⟩ - ⟨F,AG⟩` from integrating by parts twice,
/// valid for any elements with derivative data:
/// `m1(W(h1-) - W(-1)) + m2(W(h2-) - W(h1+)) + m3(W(1) - W(h2+))
///  + (m3/ρ)(f1 R1(g) - R1(f) g1)`.
pub fn green_identity_rhs(problem: &ValidatedProblem, f: &HilbertElement, g: &HilbertElement) -> Result<f64> {
    let (ef, eg) = (f.ends()?, g.ends()?);
    let w: [f64; 6] = core::array::from_fn(|i| state_wronskian(ef[i], eg[i]));
    let [m1, m2, m3] = problem.piece_factors();
    let r = f.f1 * r1_state(problem, eg[5]) - r1_state(problem, ef[5]) * g.f1;
    Ok(m1 * (w[1] - w[0]) + m2 * (w[3] - w[2]) + m3 * (w[5] - w[4]) + problem.boundary_factor() * r)
}

/// `[|W(h1-) - m2 W(h1+)|, |m2 W(h2-) - m3 W(h2+)|, |W(-1)|]`.
pub fn wronskian_jump_identities(problem: &ValidatedProblem, f: &HilbertElement, g: &HilbertElement) -> Result<[f64; 3]> {
    let (ef, eg) = (f.ends()?, g.ends()?);
    let w: [f64; 6] = core::array::from_fn(|i| state_wronskian(ef[i], eg[i]));
    let [_, m2, m3] = problem.piece_factors();
    Ok([(w[1] - m2 * w[2]).abs(), (m2 * w[3] - m3 * w[4]).abs(), w[0].abs()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{validate, FormKind, PiecewisePotential, ProblemSpec};
    use crate::shooting::build_chi;
    use alloc::vec;
    use core::f64::consts::FRAC_PI_2;
    use proptest::prelude::*;

    fn reference() -> ValidatedProblem {
        validate(ProblemSpec::reference()).unwrap()
    }

    fn general() -> ValidatedProblem {
        validate(ProblemSpec {
            omega: [1.0, 1.5, 0.7],
            alpha: 0.6,
            beta: [0.4, 1.2],
            beta_prime: [1.0, 0.3],
            gamma: [1.5, 0.8, 1.2, 2.0],
            delta: [1.0, 1.1, 0.9, 1.3],
            q: PiecewisePotential::new(vec![1.0, 0.5], vec![-2.0, 0.0, 1.0], vec![0.3]),
            ..ProblemSpec::reference()
        })
        .unwrap()
    }

    fn grid(p: &ValidatedProblem) -> QuadratureGrid {
        QuadratureGrid::composite(p, 1, 64).unwrap()
    }

    #[test]
    fn inner_product_trivial_values() {
        let p = reference();
        let g = grid(&p);
        let scalar = HilbertElement::from_values(&g, |_, _| 0.0, 1.0);
        assert!((inner_product(&p, &scalar, &scalar).unwrap() - 1.0).abs() < 1e-15);
        let one = HilbertElement::from_values(&g, |_, _| 1.0, 0.0);
        assert!((inner_product(&p, &one, &one).unwrap() - 2.0).abs() < 1e-14);
        let other = QuadratureGrid::composite(&p, 2, 64).unwrap();
        let e = HilbertElement::from_values(&other, |_, _| 1.0, 0.0);
        assert_eq!(inner_product(&p, &one, &e), Err(Error::IncompatibleGrids));
    }

    #[test]
    fn inner_product_is_symmetric() {
        let p = general();
        let g = grid(&p);
        let a = sample_domain_element(&p, &g, 1);
        let b = sample_domain_element(&p, &g, 2);
        assert_eq!(inner_product(&p, &a, &b).unwrap(), inner_product(&p, &b, &a).unwrap());
    }

    #[test]
    fn boundary_functionals() {
        let p = reference();
        let g = grid(&p);
        let f = HilbertElement::from_jets(&p, &g, |_, _| (5.0, 3.0, 0.0), 0.0);
        assert_eq!(R1(&p, &f).unwrap(), -3.0);
        assert_eq!(R1prime(&p, &f).unwrap(), 5.0);
    }

    proptest! {
        #[test]
        fn boundary_identity_in_integers(
            b in proptest::array::uniform4(-20i32..20),
            f in proptest::array::uniform2(-50i32..50),
            h in proptest::array::uniform2(-50i32..50),
        ) {
            // integer data keeps every product exact in f64
            let [b1, b2, b1p, b2p] = b.map(f64::from);
            let rho = b1p * b2 - b1 * b2p;
            prop_assume!(rho > 0.0);
            let spec = ProblemSpec { beta: [b1, b2], beta_prime: [b1p, b2p], ..ProblemSpec::reference() };
            let p = validate(spec).unwrap();
            let (sf, sg) = (State::new(f[0].into(), f[1].into()), State::new(h[0].into(), h[1].into()));
            let lhs = r1_prime_state(&p, sf) * r1_state(&p, sg) - r1_state(&p, sf) * r1_prime_state(&p, sg);
            prop_assert_eq!(lhs, -rho * state_wronskian(sf, sg));
        }
    }

    #[test]
    fn operator_on_simple_functions() {
        let p = validate(ProblemSpec { alpha: FRAC_PI_2, beta: [2.0, 1.0], ..ProblemSpec::reference() }).unwrap();
        let g = grid(&p);
        let c = 1.7;
        let f = HilbertElement::from_jets(&p, &g, |_, _| (c, 0.0, 0.0), c);
        let af = apply_A(&p, &f).unwrap();
        assert!(Piece::ALL.iter().all(|&pc| af.values(pc).iter().all(|&v| v == 0.0)));
        assert_eq!(af.f1(), -2.0 * c);
        let sq = HilbertElement::from_jets(&p, &g, |_, x| (x * x, 2.0 * x, 2.0), 0.0);
        let a = apply_A(&p, &sq).unwrap();
        assert!(Piece::ALL.iter().all(|&pc| a.values(pc).iter().all(|&v| v == -2.0)));
        let plain = HilbertElement::from_values(&g, |_, _| 1.0, 0.0);
        assert!(apply_A(&p, &plain).is_err());
    }

    #[test]
    fn constructed_elements_lie_in_domain() {
        for p in [reference(), general()] {
            let g = grid(&p);
            for seed in 0..10 {
                let f = sample_domain_element(&p, &g, seed);
                let r = domain_residuals(&p, &f).unwrap();
                assert!(r.iter().all(|v| v.abs() <= 1e-12), "{r:?}");
                assert_eq!(f.f1(), R1prime(&p, &f).unwrap());
            }
            let a = sample_domain_element(&p, &g, 3);
            let b = sample_domain_element(&p, &g, 4);
            let diff = HilbertElement::linear_combination(1.0, &a, -1.0, &b).unwrap();
            assert!(norm(&p, &diff).unwrap() > 0.0);
        }
    }

    #[test]
    fn bubbles_have_zero_boundary_data() {
        for j in 0..4 {
            let shape = PieceShape { hermite: [0.0; 4], bubbles: bubble_terms(j, 1.0).to_vec() };
            for t in [0.0, 1.0] {
                let (u, v, _) = shape.eval(0.0, 2.0, 2.0 * t);
                assert!(u.abs() < 1e-15 && v.abs() < 1e-14, "{j} {t} {u} {v}");
            }
            let (u, _, _) = shape.eval(0.0, 1.0, 0.3);
            let s = (PI * 0.3).sin();
            assert!((u - s * s * (j as f64 * PI * 0.3).cos()).abs() < 1e-14);
        }
    }

    #[test]
    fn piece_shape_derivatives_match_differences() {
        let p = general();
        let f = sample_domain_function(&p, 9);
        let h = 1e-5;
        for (pc, x) in [(Piece::Left, -0.6), (Piece::Middle, 0.0), (Piece::Right, 0.7)] {
            let (_, v, w) = f.eval(pc, x);
            let (up, vp, _) = f.eval(pc, x + h);
            let (um, vm, _) = f.eval(pc, x - h);
            assert!((v - (up - um) / (2.0 * h)).abs() < 1e-6);
            assert!((w - (vp - vm) / (2.0 * h)).abs() < 1e-5);
        }
    }

    #[test]
    fn symmetry_for_seeded_pairs() {
        for p in [reference(), general()] {
            assert_eq!(p.form(), FormKind::Definite);
            let g = QuadratureGrid::new(&p).unwrap();
            for seed in 0..20 {
                let f = sample_domain_element(&p, &g, 2 * seed);
                let h = sample_domain_element(&p, &g, 2 * seed + 1);
                let c = symmetry_check(&p, &f, &h).unwrap();
                assert!(c.residual <= 1e-7 * c.scale, "seed {seed}: {c:?}");
            }
            let f = sample_domain_element(&p, &g, 5);
            assert!(symmetry_residual(&p, &f, &f).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn symmetry_residual_converges_under_grid_halving() {
        let p = general();
        let (f, h) = (sample_domain_function(&p, 11), sample_domain_function(&p, 12));
        let res = |panels| {
            let g = QuadratureGrid::composite(&p, panels, 2).unwrap();
            symmetry_residual(&p, &f.to_element(&p, &g), &h.to_element(&p, &g)).unwrap()
        };
        let (coarse, fine) = (res(4), res(8));
        assert!(coarse > 0.0 && fine * 4.0 <= coarse, "{coarse} {fine}");
    }

    #[test]
    fn green_identity_for_free_elements() {
        // Elements violating every domain condition: the Green identity still holds.
        let p = general();
        let g = QuadratureGrid::new(&p).unwrap();
        let f = HilbertElement::from_jets(&p, &g, |pc, x| {
            let k = 1.0 + pc.index() as f64;
            ((k * x).sin() + 0.3, k * (k * x).cos(), -k * k * (k * x).sin())
        }, 0.7);
        let h = HilbertElement::from_jets(&p, &g, |pc, x| {
            let c = 0.5 + pc.index() as f64;
            ((c * x).exp(), c * (c * x).exp(), c * c * (c * x).exp())
        }, -1.3);
        let af = apply_A(&p, &f).unwrap();
        let ah = apply_A(&p, &h).unwrap();
        let lhs = inner_product(&p, &af, &h).unwrap() - inner_product(&p, &f, &ah).unwrap();
        let rhs = green_identity_rhs(&p, &f, &h).unwrap();
        assert!(lhs.abs() > 1e-3);
        assert!((lhs - rhs).abs() < 1e-10 * (1.0 + lhs.abs()), "{lhs} {rhs}");
    }

    #[test]
    fn wronskian_identities_and_negative_control() {
        let p = general();
        let g = grid(&p);
        let f = sample_domain_element(&p, &g, 21);
        let h = sample_domain_element(&p, &g, 22);
        assert!(wronskian_jump_identities(&p, &f, &h).unwrap().iter().all(|&r| r <= 1e-10));
        let mut spec = p.spec().clone();
        spec.gamma[0] *= 2.0;
        let broken = validate(spec).unwrap();
        let r = wronskian_jump_identities(&broken, &f, &h).unwrap();
        assert!(r[0] > 1e-6, "{r:?}");
        let unit = reference();
        let g = grid(&unit);
        let (f, h) = (sample_domain_element(&unit, &g, 1), sample_domain_element(&unit, &g, 2));
        let e = (f.jets().unwrap().ends, h.jets().unwrap().ends);
        let w = |i: usize| state_wronskian(e.0[i], e.1[i]);
        assert!((w(1) - w(2)).abs() < 1e-12 && (w(3) - w(4)).abs() < 1e-12);
    }

    #[test]
    fn positivity_on_definite_specs() {
        for p in [reference(), general()] {
            let g = grid(&p);
            for seed in 0..10 {
                let f = sample_domain_element(&p, &g, seed);
                assert!(inner_product(&p, &f, &f).unwrap() > 0.0);
            }
        }
    }

    #[test]
    fn shooting_element_satisfies_equation() {
        let p = general();
        let g = grid(&p);
        let lambda = 3.0;
        let chi = build_chi(&p, lambda).unwrap();
        let f = HilbertElement::from_solution(&p, &g, &chi);
        let af = apply_A(&p, &f).unwrap();
        // first component of AF - λF vanishes; the scalar part is λR1' + R1 = 0
        let r = HilbertElement::linear_combination(1.0, &af, -lambda, &f).unwrap();
        assert!(norm(&p, &r).unwrap() < 1e-8 * (1.0 + norm(&p, &f).unwrap()));
    }
}
