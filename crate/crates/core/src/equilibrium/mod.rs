//! Maximin problems over independent distributions and the comparison with
//! correlated ones.
//!
//! Tolerances are absolute in probability space. Every report carries the
//! tolerances and seeds it was produced with.

mod cep1;
mod compare;
mod eigen;
mod iid;
mod proposition;

pub use cep1::{cep1_objective, cep1_solve, cep1_value, composite_cost, Cep1Report};
pub use compare::{compare_id_vs_correlated, Comparison};
pub use eigen::{eigen_search, EigenOptions};
pub use iid::{
    even_concavity_check, even_interior_dominance_check, maximize_iid, odd_height_bound_check, IidMaximum,
    ShapeCheck,
};
pub use proposition::{proposition_check, proposition_values, PropositionReport};

use serde::Serialize;
use serde_json::{json, Value};

use crate::distributions::IndependentDistribution;
use crate::error::{Error, Result};
use crate::scalar::{float_json, Scalar};

/// Residual allowed in `(1 - z)(1 - w) = 1 - r`.
pub const CONSTRAINT_TOL: f64 = 1e-10;
/// Default accuracy of reported maximisers.
pub const ARGMAX_TOL: f64 = 1e-6;

/// Required probability `r` that the root has value 0.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct RootConstraint {
    r: f64,
}

impl RootConstraint {
    pub fn new(r: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::input(format!("root probability must lie in [0, 1], got {r}")));
        }
        Ok(RootConstraint { r })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn is_interior(&self) -> bool {
        self.r > 0.0 && self.r < 1.0
    }

    fn require_interior(&self, what: &str) -> Result<f64> {
        if self.is_interior() {
            Ok(self.r)
        } else {
            Err(Error::domain(format!("{what} needs 0 < r < 1, got r = {}", self.r)))
        }
    }
}

/// Root probabilities `(z, w)` of the two subtrees below an AND root with
/// root probability `r`, larger one first.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChildProbPair {
    z: f64,
    w: f64,
}

impl ChildProbPair {
    /// Checks `0 <= w <= z <= r` and `(1 - z)(1 - w) = 1 - r` up to
    /// [`CONSTRAINT_TOL`].
    pub fn new(z: f64, w: f64, r: RootConstraint) -> Result<Self> {
        let r = r.r();
        let slack = CONSTRAINT_TOL;
        if !(w >= -slack && w <= z + slack && z <= r + slack) {
            return Err(Error::input(format!("need 0 <= w <= z <= r, got z = {z}, w = {w}, r = {r}")));
        }
        let residual = ((1.0 - z) * (1.0 - w) - (1.0 - r)).abs();
        if residual > slack {
            return Err(Error::input(format!(
                "(1 - z)(1 - w) misses 1 - r by {residual:e} at z = {z}, w = {w}, r = {r}"
            )));
        }
        Ok(ChildProbPair { z: z.clamp(0.0, 1.0), w: w.clamp(0.0, 1.0) })
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn w(&self) -> f64 {
        self.w
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Argmax {
    Independent(IndependentDistribution<f64>),
    Pair(ChildProbPair),
}

/// Result of a maximin search.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumReport {
    pub value: f64,
    pub argmax: Argmax,
    pub iterations: usize,
    /// `max_i |x_i - mean(x)|` over the leaf probabilities of the argmax.
    pub deviation: f64,
    pub certified_iid: bool,
    /// Whether every start reached the minimal step size.
    pub converged: bool,
    pub tol: f64,
    pub seeds: Vec<u64>,
}

impl EquilibriumReport {
    pub fn to_json(&self) -> Value {
        let argmax = match &self.argmax {
            Argmax::Independent(d) => json!({ "leaf_probs": d.to_json() }),
            Argmax::Pair(p) => json!({ "z": float_json(p.z), "w": float_json(p.w) }),
        };
        json!({
            "value": float_json(self.value),
            "argmax": argmax,
            "iterations": self.iterations,
            "deviation": float_json(self.deviation),
            "certified_iid": self.certified_iid,
            "converged": self.converged,
            "tol": float_json(self.tol),
            "constraint_tol": float_json(CONSTRAINT_TOL),
            "seeds": self.seeds,
        })
    }
}

pub(crate) fn deviation_from_mean<T: Scalar>(xs: &[T]) -> f64 {
    let xs: Vec<f64> = xs.iter().map(Scalar::to_f64).collect();
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    xs.iter().map(|x| (x - mean).abs()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constraint_types_validate() {
        assert!(RootConstraint::new(1.5).is_err());
        assert!(RootConstraint::new(f64::NAN).is_err());
        let r = RootConstraint::new(0.75).unwrap();
        assert!(ChildProbPair::new(0.5, 0.5, r).is_ok());
        assert!(ChildProbPair::new(0.5, 0.4, r).is_err());
        assert!(ChildProbPair::new(0.5, 0.6, r).is_err());
        let zero = RootConstraint::new(0.0).unwrap();
        assert!(matches!(zero.require_interior("x"), Err(Error::Domain(_))));
    }

    #[test]
    fn deviation_metric() {
        assert_eq!(deviation_from_mean(&[0.5, 0.5, 0.5]), 0.0);
        assert!((deviation_from_mean(&[0.0, 1.0]) - 0.5).abs() < 1e-15);
    }
}
