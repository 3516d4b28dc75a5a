//! Gauss–Legendre rules and the per-piece quadrature grid.

use alloc::vec::Vec;

use crate::error::Error;
use crate::math;
use crate::problem::{Piece, ValidatedProblem};
use crate::Result;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`,
/// nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = alloc::vec![0.0; n];
    let mut weights = alloc::vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = math::cos(core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Checks `∑ w x^k = ∫_{-1}^{1} x^k` for every degree the rule integrates exactly.
fn verify_rule(nodes: &[f64], weights: &[f64]) -> bool {
    let n = nodes.len();
    if weights.iter().any(|&w| w <= 0.0) {
        return false;
    }
    let mut powers: Vec<f64> = alloc::vec![1.0; n];
    for k in 0..2 * n {
        let sum: f64 = powers.iter().zip(weights).map(|(p, w)| p * w).sum();
        let exact = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
        if (sum - exact).abs() > 1e-12 {
            return false;
        }
        for (p, &x) in powers.iter_mut().zip(nodes) {
            *p *= x;
        }
    }
    true
}

/// Quadrature nodes and weights on each of the three pieces.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    nodes: [Vec<f64>; 3],
    weights: [Vec<f64>; 3],
}

impl QuadratureGrid {
    /// One Gauss–Legendre panel of `quad_nodes` points per piece.
    pub fn new(problem: &ValidatedProblem) -> Result<Self> {
        Self::composite(problem, 1, problem.solver.quad_nodes)
    }

    /// `panels` equal panels per piece, each with an `order`-point rule.
    pub fn composite(problem: &ValidatedProblem, panels: usize, order: usize) -> Result<Self> {
        if panels == 0 || order == 0 {
            return Err(Error::InvalidArgument("quadrature needs at least one panel and one node"));
        }
        let (ref_nodes, ref_weights) = gauss_legendre(order);
        if !verify_rule(&ref_nodes, &ref_weights) {
            return Err(Error::InvalidArgument("Gauss–Legendre rule failed its exactness check"));
        }
        let mut nodes: [Vec<f64>; 3] = Default::default();
        let mut weights: [Vec<f64>; 3] = Default::default();
        for piece in Piece::ALL {
            let (a, b) = problem.bounds(piece);
            let width = (b - a) / panels as f64;
            let (ns, ws) = (&mut nodes[piece.index()], &mut weights[piece.index()]);
            for k in 0..panels {
                let lo = a + width * k as f64;
                let mid = lo + 0.5 * width;
                for (&t, &w) in ref_nodes.iter().zip(&ref_weights) {
                    ns.push(mid + 0.5 * width * t);
                    ws.push(0.5 * width * w);
                }
            }
        }
        Ok(Self { nodes, weights })
    }

    pub fn nodes(&self, piece: Piece) -> &[f64] {
        &self.nodes[piece.index()]
    }

    pub fn weights(&self, piece: Piece) -> &[f64] {
        &self.weights[piece.index()]
    }

    /// `∫ f` over one piece.
    pub fn integrate(&self, piece: Piece, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes(piece).iter().zip(self.weights(piece)).map(|(&x, &w)| w * f(x)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{validate, ProblemSpec};

    #[test]
    fn small_rules_match_tables() {
        let (x, w) = gauss_legendre(2);
        let r = 1.0 / 3.0f64.sqrt();
        assert!((x[0] + r).abs() < 1e-15 && (x[1] - r).abs() < 1e-15);
        assert!((w[0] - 1.0).abs() < 1e-15);
        let (x, w) = gauss_legendre(3);
        assert_eq!(x[1], 0.0);
        assert!((w[1] - 8.0 / 9.0).abs() < 1e-15);
        assert!((x[2] - (0.6f64).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn large_rule_is_exact() {
        let (x, w) = gauss_legendre(257);
        assert!(verify_rule(&x, &w));
        assert!(x.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn grid_nodes_strictly_inside_pieces() {
        let p = validate(ProblemSpec::reference()).unwrap();
        let g = QuadratureGrid::composite(&p, 3, 4).unwrap();
        for piece in Piece::ALL {
            let (a, b) = p.bounds(piece);
            assert!(g.nodes(piece).iter().all(|&x| a < x && x < b));
            let total: f64 = g.weights(piece).iter().sum();
            assert!((total - (b - a)).abs() < 1e-14);
            let cubic = g.integrate(piece, |x| x * x * x);
            assert!((cubic - (b.powi(4) - a.powi(4)) / 4.0).abs() < 1e-14);
        }
    }

    #[test]
    fn composite_midpoint_converges_at_second_order() {
        let p = validate(ProblemSpec::reference()).unwrap();
        let exact = p.h1.exp() - (-1.0f64).exp();
        let err = |n| (QuadratureGrid::composite(&p, n, 1).unwrap().integrate(Piece::Left, f64::exp) - exact).abs();
        let ratio = err(8) / err(16);
        assert!((ratio - 4.0).abs() < 0.1, "{ratio}");
    }
}
