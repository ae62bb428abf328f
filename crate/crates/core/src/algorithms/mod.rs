//! Deterministic alpha-beta pruning algorithms on uniform trees and their
//! costs.
//!
//! An AND node skips its second child once the first evaluates to 0, an OR
//! node once the first evaluates to 1. A [`DirectionalOrder`] fixes which
//! child is visited first at each internal node; an [`AdaptiveStrategy`] is a
//! general decision tree over observed leaf values.

mod adaptive;
mod directional;

pub use adaptive::{min_cost_adaptive, AdaptiveStrategy};
pub(crate) use directional::min_cost_value;
pub use directional::{
    expected_cost_id, min_cost_directional_correlated, min_cost_over_orders, DirectionalOrder, Side,
};

use serde_json::{json, Value};

use crate::distributions::{CorrelatedDistribution, IndependentDistribution};
use crate::error::Result;
use crate::scalar::Scalar;
use crate::tree::{Assignment, TreeShape};

/// Something that evaluates the root of a tree by probing leaves.
pub trait Algorithm {
    /// Number of leaves probed on `a`, or a contract error when the
    /// algorithm breaks alpha-beta semantics on this input.
    fn probe_count(&self, shape: &TreeShape, a: &Assignment) -> Result<u32>;
}

/// Leaves probed by `strat` on assignment `a`.
pub fn run_cost(shape: &TreeShape, strat: &impl Algorithm, a: &Assignment) -> Result<u32> {
    a.check_shape(shape)?;
    strat.probe_count(shape, a)
}

/// `sum_a Pr(a) * run_cost(a)` over all assignments; the independent oracle
/// for [`expected_cost_id`].
pub fn expected_cost_exhaustive<T: Scalar>(
    shape: &TreeShape,
    strat: &impl Algorithm,
    d: &IndependentDistribution<T>,
) -> Result<T> {
    d.check_shape(shape)?;
    let mut total = T::zero();
    for a in shape.assignments()? {
        let w = d.weight_of(&a);
        if w.is_zero() {
            continue;
        }
        total = total + w * T::from_ratio(strat.probe_count(shape, &a)? as i64, 1);
    }
    Ok(total)
}

/// Expected cost of `strat` under a correlated distribution.
pub fn expected_cost_correlated<T: Scalar>(
    strat: &impl Algorithm,
    d: &CorrelatedDistribution<T>,
) -> Result<T> {
    let shape = d.shape();
    let mut total = T::zero();
    for (a, w) in d.support() {
        total = total + w.clone() * T::from_ratio(strat.probe_count(shape, a)? as i64, 1);
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    Directional(DirectionalOrder),
    Adaptive(AdaptiveStrategy),
}

impl Witness {
    pub fn to_json(&self, shape: &TreeShape) -> Value {
        match self {
            Witness::Directional(o) => json!({ "kind": "directional", "order": o.to_json() }),
            Witness::Adaptive(s) => json!({ "kind": "adaptive", "strategy": s.to_json(shape) }),
        }
    }
}

/// Minimum expected cost together with an algorithm attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct CostReport<T> {
    pub expected_cost: T,
    pub witness: Witness,
}

impl<T: Scalar> CostReport<T> {
    pub fn to_json(&self, shape: &TreeShape) -> Value {
        json!({ "expected_cost": self.expected_cost.to_json(), "witness": self.witness.to_json(shape) })
    }
}
