//! Fundamental solutions `φ` (launched at `x = -1`) and `χ` (launched at
//! `x = 1`), propagated across the transmission points with the jump ratios.
//!
//! `φ` satisfies the left boundary condition and all four transmission
//! conditions by construction; `χ` satisfies the λ-dependent right boundary
//! condition and the transmission conditions. Launch data are written with
//! exactly the prescribed ratios, so those residuals vanish bit for bit.

use crate::error::Error;
use crate::ode::{self, Coefficient, Trajectory};
use crate::problem::{Piece, Side, ValidatedProblem};
use crate::Result;

pub use crate::ode::State;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolutionKind {
    Phi,
    Chi,
}

/// A solution of the piecewise equation, one trajectory per piece.
#[derive(Debug, Clone)]
pub struct PiecewiseSolution {
    kind: SolutionKind,
    lambda: f64,
    pieces: [Trajectory; 3],
}

/// Integrates one piece of `-u'' + q u = λ ω_i² u` between `from` and `to`.
pub fn integrate_piece(
    problem: &ValidatedProblem,
    piece: Piece,
    lambda: f64,
    from: f64,
    to: f64,
    init: State,
) -> Result<Trajectory> {
    let (a, b) = problem.bounds(piece);
    let inside = |x: f64| x >= a && x <= b;
    if !inside(from) || !inside(to) {
        return Err(Error::InvalidArgument("integration range leaves the piece"));
    }
    let coef = Coefficient::for_piece(problem.q.piece(piece), lambda, problem.weight(piece));
    ode::integrate(&coef, from, to, init, problem.solver.rk_tol)
}

/// `φ(·, λ)` with the standard launch `(sin α, -cos α)` at `x = -1`.
pub fn build_phi(problem: &ValidatedProblem, lambda: f64) -> Result<PiecewiseSolution> {
    build_phi_from(problem, lambda, State::new(problem.sin_alpha(), -problem.cos_alpha()))
}

/// `χ(·, λ)` with the launch `(β2' λ + β2, β1' λ + β1)` at `x = 1`.
pub fn build_chi(problem: &ValidatedProblem, lambda: f64) -> Result<PiecewiseSolution> {
    build_chi_from(problem, lambda, chi_launch(problem, lambda))
}

pub fn chi_launch(problem: &ValidatedProblem, lambda: f64) -> State {
    let [b1, b2] = problem.beta;
    let [b1p, b2p] = problem.beta_prime;
    State::new(b2p * lambda + b2, b1p * lambda + b1)
}

/// Left-launched solution with arbitrary data at `x = -1`.
pub fn build_phi_from(problem: &ValidatedProblem, lambda: f64, at_minus_one: State) -> Result<PiecewiseSolution> {
    let (h1, h2) = (problem.h1, problem.h2);
    let g = &problem.gamma;
    let d = &problem.delta;
    let p1 = integrate_piece(problem, Piece::Left, lambda, -1.0, h1, at_minus_one)?;
    let s = p1.last_state();
    let launch2 = State::new((g[0] / d[0]) * s.u, (g[1] / d[1]) * s.v);
    let p2 = integrate_piece(problem, Piece::Middle, lambda, h1, h2, launch2)?;
    let s = p2.last_state();
    let launch3 = State::new((g[2] / d[2]) * s.u, (g[3] / d[3]) * s.v);
    let p3 = integrate_piece(problem, Piece::Right, lambda, h2, 1.0, launch3)?;
    Ok(PiecewiseSolution { kind: SolutionKind::Phi, lambda, pieces: [p1, p2, p3] })
}

/// Right-launched solution with arbitrary data at `x = 1`.
pub fn build_chi_from(problem: &ValidatedProblem, lambda: f64, at_one: State) -> Result<PiecewiseSolution> {
    let (h1, h2) = (problem.h1, problem.h2);
    let g = &problem.gamma;
    let d = &problem.delta;
    let p3 = integrate_piece(problem, Piece::Right, lambda, 1.0, h2, at_one)?;
    let s = p3.first_state();
    let launch2 = State::new((d[2] / g[2]) * s.u, (d[3] / g[3]) * s.v);
    let p2 = integrate_piece(problem, Piece::Middle, lambda, h2, h1, launch2)?;
    let s = p2.first_state();
    let launch1 = State::new((d[0] / g[0]) * s.u, (d[1] / g[1]) * s.v);
    let p1 = integrate_piece(problem, Piece::Left, lambda, h1, -1.0, launch1)?;
    Ok(PiecewiseSolution { kind: SolutionKind::Chi, lambda, pieces: [p1, p2, p3] })
}

impl PiecewiseSolution {
    pub fn kind(&self) -> SolutionKind {
        self.kind
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn trajectory(&self, piece: Piece) -> &Trajectory {
        &self.pieces[piece.index()]
    }

    /// State at `x` within `piece` (clamped to its closure).
    pub fn state_in(&self, piece: Piece, x: f64) -> State {
        self.pieces[piece.index()].eval(x)
    }

    /// `(u, u', u'')` within `piece`.
    pub fn jet_in(&self, piece: Piece, x: f64) -> (State, f64) {
        self.pieces[piece.index()].eval_with_second(x)
    }

    /// State at `x`, using the side tag at transmission points.
    pub fn state(&self, problem: &ValidatedProblem, x: f64, side: Side) -> Result<State> {
        let piece = problem.piece_of(x, side)?;
        Ok(self.state_in(piece, x))
    }

    pub fn at_minus_one(&self) -> State {
        self.pieces[0].first_state()
    }

    pub fn at_one(&self) -> State {
        self.pieces[2].last_state()
    }

    /// One-sided limits `[h1-0, h1+0, h2-0, h2+0]`.
    pub fn breakpoint_states(&self) -> [State; 4] {
        [
            self.pieces[0].last_state(),
            self.pieces[1].first_state(),
            self.pieces[1].last_state(),
            self.pieces[2].first_state(),
        ]
    }

    /// Multiplies the solution by `s` everywhere.
    pub fn scale(&mut self, s: f64) {
        for p in &mut self.pieces {
            p.scale(s);
        }
    }

    /// Largest `|u|` over the stored nodes.
    pub fn max_abs_u(&self) -> f64 {
        self.pieces
            .iter()
            .flat_map(|p| (0..p.len()).map(move |i| p.state_at_node(i).u.abs()))
            .fold(0.0, f64::max)
    }
}

/// `W(a, b; x) = a b' - a' b`.
pub fn wronskian(
    problem: &ValidatedProblem,
    a: &PiecewiseSolution,
    b: &PiecewiseSolution,
    x: f64,
    side: Side,
) -> Result<f64> {
    let piece = problem.piece_of(x, side)?;
    wronskian_in(a, b, piece, x)
}

pub fn wronskian_in(a: &PiecewiseSolution, b: &PiecewiseSolution, piece: Piece, x: f64) -> Result<f64> {
    if a.lambda.to_bits() != b.lambda.to_bits() {
        return Err(Error::LambdaMismatch { a: a.lambda, b: b.lambda });
    }
    let (sa, sb) = (a.state_in(piece, x), b.state_in(piece, x));
    Ok(state_wronskian(sa, sb))
}

#[inline]
pub fn state_wronskian(a: State, b: State) -> f64 {
    a.u * b.v - a.v * b.u
}
