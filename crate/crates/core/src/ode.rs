//! Adaptive explicit Runge–Kutta integration of `u'' = c(x) u` on one piece,
//! where `c = q - λ ω²` is a polynomial.
//!
//! Steps use the Dormand–Prince 5(4) pair with local extrapolation. Because
//! the equation is linear with polynomial coefficients, every derivative of
//! the solution at a node follows from `(u, u')` alone, so dense output is a
//! two-point Hermite interpolant of degree 7 built from those exact jets
//! (interpolation error `O(h^8)`, above the order of the stepper).

use alloc::vec::Vec;

use crate::error::Error;
use crate::math;
use crate::poly::Polynomial;
use crate::Result;

/// Value and first derivative of a solution.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct State {
    pub u: f64,
    pub v: f64,
}

impl State {
    pub const fn new(u: f64, v: f64) -> Self {
        Self { u, v }
    }

    pub fn is_finite(&self) -> bool {
        self.u.is_finite() && self.v.is_finite()
    }

    pub fn scaled(self, s: f64) -> Self {
        Self { u: self.u * s, v: self.v * s }
    }
}

/// `c(x)` and its first three derivatives for `u'' = c u`.
#[derive(Debug, Clone)]
pub struct Coefficient {
    derivs: [Polynomial; 4],
}

impl Coefficient {
    pub fn new(c: Polynomial) -> Self {
        let c1 = c.derivative();
        let c2 = c1.derivative();
        let c3 = c2.derivative();
        Self { derivs: [c, c1, c2, c3] }
    }

    /// `q(x) - λ w` for one piece.
    pub fn for_piece(q: &Polynomial, lambda: f64, weight: f64) -> Self {
        Self::new(q.shifted(-lambda * weight))
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        self.derivs[0].eval(x)
    }

    /// `[u, u', ..., u^(5)]` at `x` from the state there.
    fn jet(&self, x: f64, s: State) -> [f64; 6] {
        let c0 = self.derivs[0].eval(x);
        let c1 = self.derivs[1].eval(x);
        let c2 = self.derivs[2].eval(x);
        let c3 = self.derivs[3].eval(x);
        let (u, u1) = (s.u, s.v);
        let u2 = c0 * u;
        let u3 = c1 * u + c0 * u1;
        let u4 = c2 * u + 2.0 * c1 * u1 + c0 * u2;
        let u5 = c3 * u + 3.0 * c2 * u1 + 3.0 * c1 * u2 + c0 * u3;
        [u, u1, u2, u3, u4, u5]
    }
}

/// Accepted nodes of one integration, stored in ascending `x`.
#[derive(Debug, Clone)]
pub struct Trajectory {
    nodes: Vec<f64>,
    jets: Vec<[f64; 6]>,
}

impl Trajectory {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn steps(&self) -> usize {
        self.nodes.len().saturating_sub(1)
    }

    pub fn start(&self) -> f64 {
        self.nodes[0]
    }

    pub fn end(&self) -> f64 {
        *self.nodes.last().expect("trajectory has nodes")
    }

    pub fn state_at_node(&self, i: usize) -> State {
        let j = &self.jets[i];
        State::new(j[0], j[1])
    }

    pub fn first_state(&self) -> State {
        self.state_at_node(0)
    }

    pub fn last_state(&self) -> State {
        self.state_at_node(self.nodes.len() - 1)
    }

    /// `(u, u', u'')` at `x`, by Hermite interpolation between nodes.
    ///
    /// `x` is clamped to the covered span.
    pub fn eval_with_second(&self, x: f64) -> (State, f64) {
        let n = self.nodes.len();
        if n == 1 || x <= self.nodes[0] {
            let j = &self.jets[0];
            return (State::new(j[0], j[1]), j[2]);
        }
        if x >= self.nodes[n - 1] {
            let j = &self.jets[n - 1];
            return (State::new(j[0], j[1]), j[2]);
        }
        let i = self.nodes.partition_point(|&node| node <= x) - 1;
        let (x0, x1) = (self.nodes[i], self.nodes[i + 1]);
        if x == x0 {
            let j = &self.jets[i];
            return (State::new(j[0], j[1]), j[2]);
        }
        let h = x1 - x0;
        let t = (x - x0) / h;
        let (a, b) = (&self.jets[i], &self.jets[i + 1]);
        let u = hermite(&taylor(a, 0, h), &taylor(b, 0, h), t);
        let v = hermite(&taylor(a, 1, h), &taylor(b, 1, h), t);
        let w = hermite(&taylor(a, 2, h), &taylor(b, 2, h), t);
        (State::new(u, v), w)
    }

    pub fn eval(&self, x: f64) -> State {
        self.eval_with_second(x).0
    }

    /// Applies `s` to every node.
    pub fn scale(&mut self, s: f64) {
        for j in &mut self.jets {
            for d in j.iter_mut() {
                *d *= s;
            }
        }
    }
}

/// Scaled Taylor coefficients `h^k f^(off+k)/k!` for `k = 0..4`.
fn taylor(jet: &[f64; 6], off: usize, h: f64) -> [f64; 4] {
    let mut out = [0.0; 4];
    let mut hk = 1.0;
    let mut fact = 1.0;
    for k in 0..4 {
        if k > 0 {
            hk *= h;
            fact *= k as f64;
        }
        out[k] = if off + k < 6 { jet[off + k] * hk / fact } else { 0.0 };
    }
    out
}

/// Two-point Hermite interpolant on `[0, 1]` with four Taylor coefficients
/// at each end, evaluated by Newton divided differences on the node
/// sequence `0,0,0,0,1,1,1,1`.
fn hermite(a: &[f64; 4], b: &[f64; 4], t: f64) -> f64 {
    const M: usize = 4;
    const N: usize = 2 * M;
    let z = |i: usize| if i < M { 0.0 } else { 1.0 };
    let mut q = [[0.0f64; N]; N];
    for i in 0..N {
        q[i][0] = if i < M { a[0] } else { b[0] };
    }
    for j in 1..N {
        for i in j..N {
            q[i][j] = if z(i) == z(i - j) {
                if i < M {
                    a[j]
                } else {
                    b[j]
                }
            } else {
                (q[i][j - 1] - q[i - 1][j - 1]) / (z(i) - z(i - j))
            };
        }
    }
    let mut acc = q[N - 1][N - 1];
    for j in (0..N - 1).rev() {
        acc = acc * (t - z(j)) + q[j][j];
    }
    acc
}

// Dormand–Prince 5(4).
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

const MAX_STEPS: usize = 2_000_000;

/// Integrates `u'' = c(x) u` from `from` to `to` (either direction).
///
/// The error of each step is measured component-wise against
/// `tol · max(|y|, running max |y|)`, so the tolerance is relative to the
/// amplitude of the oscillation rather than to the instantaneous value.
pub fn integrate(coef: &Coefficient, from: f64, to: f64, init: State, tol: f64) -> Result<Trajectory> {
    if !init.is_finite() {
        return Err(Error::InvalidArgument("non-finite initial state"));
    }
    let span = to - from;
    let mut nodes = Vec::new();
    let mut jets = Vec::new();
    nodes.push(from);
    jets.push(coef.jet(from, init));
    if span == 0.0 {
        return Ok(Trajectory { nodes, jets });
    }
    let dir = span.signum();
    let rhs = |x: f64, y: [f64; 2]| [y[1], coef.eval(x) * y[0]];

    let mut x = from;
    let mut y = [init.u, init.v];
    let mut scale = [math::abs(init.u), math::abs(init.v)];
    let mut k = [[0.0f64; 2]; 7];
    k[0] = rhs(x, y);

    // Initial step from the local oscillation scale.
    let c_mag = math::abs(coef.eval(from)).max(math::abs(coef.eval(to)));
    let mut h = dir * (0.1 / (1.0 + math::sqrt(c_mag))).min(math::abs(span)) * math::powf(tol / 1e-6, 0.2).min(1.0);
    let h_min = 1e-14 * math::abs(span);

    let mut steps = 0usize;
    loop {
        let remaining = to - x;
        if math::abs(h) >= math::abs(remaining) {
            h = remaining;
        }
        if math::abs(h) < h_min && math::abs(remaining) > h_min {
            return Err(Error::StiffOrInvalid { x, step: h });
        }
        steps += 1;
        if steps > MAX_STEPS {
            return Err(Error::StiffOrInvalid { x, step: h });
        }

        for s in 1..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                let a = A[s][j];
                if a != 0.0 {
                    ys[0] += h * a * kj[0];
                    ys[1] += h * a * kj[1];
                }
            }
            k[s] = rhs(x + C[s] * h, ys);
        }
        let mut y5 = y;
        let mut err = [0.0f64; 2];
        for s in 0..7 {
            for d in 0..2 {
                y5[d] += h * B5[s] * k[s][d];
                err[d] += h * (B5[s] - B4[s]) * k[s][d];
            }
        }
        let mut norm = 0.0;
        for d in 0..2 {
            let sc = tol * math::abs(y[d]).max(math::abs(y5[d])).max(scale[d]).max(f64::MIN_POSITIVE);
            let r = err[d] / sc;
            norm += r * r;
        }
        let norm = math::sqrt(norm / 2.0);
        if !norm.is_finite() {
            h *= 0.25;
            continue;
        }

        if norm <= 1.0 {
            let x_new = if h == remaining { to } else { x + h };
            x = x_new;
            y = y5;
            scale[0] = scale[0].max(math::abs(y[0]));
            scale[1] = scale[1].max(math::abs(y[1]));
            nodes.push(x);
            jets.push(coef.jet(x, State::new(y[0], y[1])));
            if x == to {
                break;
            }
            // First same as last.
            k[0] = k[6];
        }
        let factor = if norm == 0.0 { 5.0 } else { (0.9 * math::powf(norm, -0.2)).clamp(0.2, 5.0) };
        h *= if norm > 1.0 { factor.min(1.0) } else { factor };
    }

    if dir < 0.0 {
        nodes.reverse();
        jets.reverse();
    }
    Ok(Trajectory { nodes, jets })
}
