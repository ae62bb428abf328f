//! Independent versus correlated equilibria under a root-probability
//! constraint.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::eigen::{eigen_search, EigenOptions};
use super::proposition::proposition_values;
use super::{EquilibriumReport, RootConstraint};
use crate::algorithms::{min_cost_adaptive, min_cost_directional_correlated, CostReport};
use crate::distributions::{enumerate_reluctant, mix, uniform_on};
use crate::error::{Error, Result};
use crate::scalar::{float_json, ratio_to_f64, rational_string, Scalar};
use crate::tree::{TreeShape, MAX_ENUM_HEIGHT};

/// Gap by which a numerically found independent value must undercut the
/// correlated witness to count as strictly smaller.
pub const STRICT_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub shape: TreeShape,
    pub r: BigRational,
    /// Best minimum cost among independent distributions with root probability `r`.
    pub lhs: f64,
    /// The same value when it is known exactly (at `r = 0` and `r = 1`).
    pub lhs_exact: Option<BigRational>,
    pub eigen: Option<EquilibriumReport>,
    /// Minimum over all deterministic algorithms of the expected cost under
    /// the mixture `r * uniform(0-set) + (1 - r) * uniform(1-set)`.
    pub rhs_witness: CostReport<BigRational>,
    /// Minimum over directional orders under the same mixture.
    pub rhs_directional: CostReport<BigRational>,
    pub strict: bool,
}

impl Comparison {
    pub fn to_json(&self) -> Value {
        json!({
            "shape": self.shape.to_string(),
            "r": rational_string(&self.r),
            "lhs": float_json(self.lhs),
            "lhs_exact": self.lhs_exact.as_ref().map(rational_string),
            "lhs_source": if self.lhs_exact.is_some() { "proposition" } else { "eigen_search" },
            "eigen": self.eigen.as_ref().map(EquilibriumReport::to_json),
            "rhs_witness": self.rhs_witness.expected_cost.to_json(),
            "rhs_witness_distribution": "mix(uniform 0-set, uniform 1-set, r)",
            "rhs_witness_algorithm": self.rhs_witness.witness.to_json(&self.shape),
            "rhs_directional": self.rhs_directional.expected_cost.to_json(),
            "strict": self.strict,
            "strict_margin": float_json(STRICT_MARGIN),
        })
    }
}

/// Compares the independent maximin value with the mixed reluctant witness.
///
/// Endpoint values come from [`proposition_values`] and are compared
/// exactly; interior values come from [`eigen_search`] and must undercut the
/// witness by [`STRICT_MARGIN`].
pub fn compare_id_vs_correlated(shape: &TreeShape, r: &BigRational, opts: &EigenOptions) -> Result<Comparison> {
    if shape.height() < 2 {
        return Err(Error::domain(format!("the comparison needs height at least 2, got {shape}")));
    }
    if shape.height() > MAX_ENUM_HEIGHT {
        return Err(Error::capability(format!(
            "the comparison is bounded to height {MAX_ENUM_HEIGHT}, got {shape}"
        )));
    }
    if !r.is_probability() {
        return Err(Error::input(format!("root probability must lie in [0, 1], got {}", rational_string(r))));
    }
    let d0 = uniform_on(&enumerate_reluctant(shape, false)?)?;
    let d1 = uniform_on(&enumerate_reluctant(shape, true)?)?;
    let dmix = mix(&d0, &d1, r)?;
    let rhs_witness = min_cost_adaptive(&dmix)?;
    let rhs_directional = min_cost_directional_correlated(&dmix)?;

    let (lhs, lhs_exact, eigen, strict) = if r.is_zero() || r.is_one() {
        // root probability 1 forces the value 0 and vice versa
        let v = BigRational::from_integer(proposition_values(shape, r.is_zero()).into());
        let strict = v < rhs_witness.expected_cost;
        (ratio_to_f64(&v), Some(v), None, strict)
    } else {
        let rep = eigen_search(shape, RootConstraint::new(ratio_to_f64(r))?, opts)?;
        let strict = rep.value + STRICT_MARGIN < ratio_to_f64(&rhs_witness.expected_cost);
        (rep.value, None, Some(rep), strict)
    };
    Ok(Comparison { shape: *shape, r: r.clone(), lhs, lhs_exact, eigen, rhs_witness, rhs_directional, strict })
}
