//! Exact cost and root-probability polynomials of IID trees.

use num_rational::BigRational;
use serde::Serialize;

use super::ratpoly::RatPoly;
use crate::error::Result;
use crate::tree::{GateKind, TreeShape};

/// Expected cost and root probability of the height-`h` tree with root gate
/// `gate` when every leaf independently has probability `x` of being 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostProbPair {
    pub gate: GateKind,
    pub height: u32,
    pub cost: RatPoly,
    pub prob: RatPoly,
}

/// One level of composition: a `gate` node over two IID subtrees with
/// cost `c` and probability `p`.
pub fn compose_level(gate: GateKind, c: &RatPoly, p: &RatPoly) -> (RatPoly, RatPoly) {
    let one = RatPoly::one();
    match gate {
        GateKind::Or => (c * &(&one + p), p * p),
        GateKind::And => {
            let q = &one - p;
            (c * &(&RatPoly::from_ints(&[2]) - p), &one - &(&q * &q))
        }
    }
}

pub fn cost_prob(gate: GateKind, height: u32) -> Result<CostProbPair> {
    let shape = TreeShape::new(gate, height)?;
    let mut c = RatPoly::one();
    let mut p = RatPoly::x();
    for depth in (0..height).rev() {
        (c, p) = compose_level(shape.gate_at_depth(depth), &c, &p);
    }
    Ok(CostProbPair { gate, height, cost: c, prob: p })
}

impl CostProbPair {
    pub fn cost_at(&self, x: &BigRational) -> BigRational {
        self.cost.eval(x)
    }

    pub fn prob_at(&self, x: &BigRational) -> BigRational {
        self.prob.eval(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    #[test]
    fn height_one_bases() {
        let or1 = cost_prob(GateKind::Or, 1).unwrap();
        assert_eq!(or1.cost, RatPoly::from_ints(&[1, 1]));
        assert_eq!(or1.prob, RatPoly::from_ints(&[0, 0, 1]));
        let and1 = cost_prob(GateKind::And, 1).unwrap();
        assert_eq!(and1.cost, RatPoly::from_ints(&[2, -1]));
        assert_eq!(and1.prob, RatPoly::from_ints(&[0, 2, -1]));
    }

    #[test]
    fn height_two_closed_forms() {
        let or2 = cost_prob(GateKind::Or, 2).unwrap();
        let factored = &RatPoly::from_ints(&[2, -1]) * &RatPoly::from_ints(&[1, 2, -1]);
        assert_eq!(or2.cost, factored);
        assert_eq!(or2.cost, RatPoly::from_ints(&[2, 3, -4, 1]));
        assert_eq!(or2.prob, RatPoly::from_ints(&[0, 0, 4, -4, 1]));
        let and2 = cost_prob(GateKind::And, 2).unwrap();
        assert_eq!(and2.cost, &RatPoly::from_ints(&[1, 1]) * &RatPoly::from_ints(&[2, 0, -1]));
        assert_eq!(and2.prob, RatPoly::from_ints(&[0, 0, 2, 0, -1]));
    }

    #[test]
    fn degrees_grow_as_powers_of_two() {
        for h in 1..=6 {
            let f = cost_prob(GateKind::Or, h).unwrap();
            assert_eq!(f.prob.degree(), 1 << h);
            assert_eq!(f.cost.degree(), (1 << h) - 1);
        }
    }

    #[test]
    fn probability_endpoints() {
        for h in 1..=8 {
            for gate in [GateKind::And, GateKind::Or] {
                let f = cost_prob(gate, h).unwrap();
                assert!(f.prob_at(&BigRational::zero()).is_zero());
                assert!(f.prob_at(&BigRational::one()).is_one());
            }
        }
    }

    #[test]
    fn out_of_range_heights() {
        assert!(cost_prob(GateKind::Or, 0).is_err());
        assert!(cost_prob(GateKind::Or, 17).is_err());
    }
}
