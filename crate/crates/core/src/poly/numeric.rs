//! Floating-point evaluation of the cost/probability families.
//!
//! The exact polynomials have huge alternating coefficients, so evaluating
//! them by Horner's rule in `f64` loses everything at moderate heights. The
//! level recursion is well conditioned, so floats are always computed
//! through it, carrying first and second derivatives along.

use crate::tree::{GateKind, TreeShape};

/// Value with first and second derivative in one variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet {
    pub fn constant(v: f64) -> Jet {
        Jet { v, d1: 0.0, d2: 0.0 }
    }

    pub fn variable(x: f64) -> Jet {
        Jet { v: x, d1: 1.0, d2: 0.0 }
    }

    pub fn add(self, o: Jet) -> Jet {
        Jet { v: self.v + o.v, d1: self.d1 + o.d1, d2: self.d2 + o.d2 }
    }

    pub fn sub(self, o: Jet) -> Jet {
        Jet { v: self.v - o.v, d1: self.d1 - o.d1, d2: self.d2 - o.d2 }
    }

    pub fn mul(self, o: Jet) -> Jet {
        Jet {
            v: self.v * o.v,
            d1: self.d1 * o.v + self.v * o.d1,
            d2: self.d2 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d2,
        }
    }
}

/// Cost and root probability (value 0) of the IID tree at leaf probability `x`.
pub fn cost_prob_jet(gate: GateKind, height: u32, x: f64) -> (Jet, Jet) {
    let one = Jet::constant(1.0);
    let two = Jet::constant(2.0);
    let mut c = one;
    let mut p = Jet::variable(x);
    for depth in (0..height).rev() {
        let g = if depth % 2 == 0 { gate } else { gate.dual() };
        (c, p) = match g {
            GateKind::Or => (c.mul(one.add(p)), p.mul(p)),
            GateKind::And => {
                let q = one.sub(p);
                (c.mul(two.sub(p)), one.sub(q.mul(q)))
            }
        };
    }
    (c, p)
}

pub fn cost_prob_f64(gate: GateKind, height: u32, x: f64) -> (f64, f64) {
    let (mut c, mut p) = (1.0, x);
    for depth in (0..height).rev() {
        let g = if depth % 2 == 0 { gate } else { gate.dual() };
        (c, p) = match g {
            GateKind::Or => (c * (1.0 + p), p * p),
            GateKind::And => (c * (2.0 - p), 1.0 - (1.0 - p) * (1.0 - p)),
        };
    }
    (c, p)
}

pub fn shape_cost_prob(shape: &TreeShape, x: f64) -> (f64, f64) {
    cost_prob_f64(shape.root_gate(), shape.height(), x)
}

/// Inverse of an increasing function on `[lo, hi]` by bisection.
///
/// Stops when the bracket is narrower than `tol` or can no longer be split
/// in floating point.
pub fn bisect_increasing(f: impl Fn(f64) -> f64, target: f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    if f(lo) >= target {
        return lo;
    }
    if f(hi) <= target {
        return hi;
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `p^{-1}(z)` for the root probability of the IID tree.
pub fn prob_inverse(gate: GateKind, height: u32, z: f64, tol: f64) -> f64 {
    bisect_increasing(|x| cost_prob_f64(gate, height, x).1, z, 0.0, 1.0, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::families::cost_prob;

    #[test]
    fn matches_exact_polynomials_at_low_height() {
        for h in 1..=4 {
            for gate in [GateKind::And, GateKind::Or] {
                let exact = cost_prob(gate, h).unwrap();
                let dc = exact.cost.derivative();
                let dp = exact.prob.derivative();
                for i in 0..=20 {
                    let x = i as f64 / 20.0;
                    let (c, p) = cost_prob_jet(gate, h, x);
                    assert!((c.v - exact.cost.eval_f64(x)).abs() < 1e-9);
                    assert!((p.v - exact.prob.eval_f64(x)).abs() < 1e-9);
                    assert!((c.d1 - dc.eval_f64(x)).abs() < 1e-8);
                    assert!((p.d1 - dp.eval_f64(x)).abs() < 1e-8);
                    assert!((c.d2 - dc.derivative().eval_f64(x)).abs() < 1e-7);
                    assert!((p.d2 - dp.derivative().eval_f64(x)).abs() < 1e-7);
                }
            }
        }
    }

    #[test]
    fn inverse_recovers_leaf_probability() {
        for h in 1..=6 {
            for &x in &[0.1, 0.37, 0.5, 0.83] {
                let (_, p) = cost_prob_f64(GateKind::Or, h, x);
                let back = prob_inverse(GateKind::Or, h, p, 1e-14);
                assert!((back - x).abs() < 1e-9, "h={h} x={x} back={back}");
            }
        }
    }

    #[test]
    fn bisection_clamps_to_bracket() {
        assert_eq!(bisect_increasing(|x| x, -1.0, 0.0, 1.0, 1e-9), 0.0);
        assert_eq!(bisect_increasing(|x| x, 2.0, 0.0, 1.0, 1e-9), 1.0);
        assert!((bisect_increasing(|x| x * x, 0.25, 0.0, 1.0, 1e-12) - 0.5).abs() < 1e-11);
    }
}
