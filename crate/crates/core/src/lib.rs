//! Spectral solver for a Sturm–Liouville problem on `[-1, 1]` with a
//! piecewise-constant weight, two interior transmission points and a
//! boundary condition at `x = 1` that depends on the spectral parameter.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function of an immutable [`ValidatedProblem`]; file formats, the command
//! line and parallel drivers live in the `sltx` companion crate.
//!
//! Layout:
//!
//! * [`problem`] – problem data, validation, piecewise coefficients, phase.
//! * [`ode`] – adaptive Runge–Kutta integrator with Hermite dense output.
//! * [`shooting`] – the left- and right-launched fundamental solutions.
//! * [`charfn`] – characteristic Wronskians and the canonical `Δ(λ)`.
//! * [`spectrum`] – eigenvalue location, eigenfunctions, Gram matrices.
//! * [`asymptotics`] – leading-order formulas and decay checks.
//! * [`hilbert`] – the weighted inner product, the operator `A` and
//!   numerical symmetry certificates.
#![no_std]
// `!(x > 0.0)` is deliberate: it rejects NaN together with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Index loops mirror the subscripted formulas they implement.
#![allow(clippy::needless_range_loop)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod asymptotics;
pub mod charfn;
mod error;
pub mod hilbert;
mod math;
pub mod ode;
pub mod poly;
pub mod problem;
pub mod quadrature;
pub mod shooting;
pub mod spectrum;

pub use error::{Error, ValidationError};
pub use problem::{
    validate, FormKind, Piece, PiecewisePotential, ProblemSpec, Side, SolverConfig,
    ValidatedProblem,
};
pub use shooting::{build_chi, build_phi, PiecewiseSolution, SolutionKind, State};

pub type Result<T, E = Error> = core::result::Result<T, E>;
