//! Minimum cost when the root value is forced.

use num_rational::Ratio;
use serde_json::{json, Value};

use crate::algorithms::min_cost_value;
use crate::distributions::node_probabilities;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tree::{GateKind, TreeShape, MAX_ENUM_HEIGHT};

const MAX_LATTICE_POINTS: u64 = 10_000_000;

/// Closed-form minimum expected cost over directional orders for an
/// independent distribution whose root has value `i` almost surely:
/// `2^k` at height `2k`; at height `2k+1`, `2^k` when the root gate is
/// controlled by `i` (AND with 0, OR with 1) and `2^{k+1}` otherwise.
pub fn proposition_values(shape: &TreeShape, i: bool) -> u64 {
    let h = shape.height();
    let k = h / 2;
    if h % 2 == 0 {
        return 1 << k;
    }
    let controlled = match shape.root_gate() {
        GateKind::And => !i,
        GateKind::Or => i,
    };
    if controlled {
        1 << k
    } else {
        1 << (k + 1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropositionReport {
    pub shape: TreeShape,
    pub i: bool,
    pub grid: u32,
    pub value: u64,
    pub lattice_points: u64,
    /// Lattice distributions whose root value is `i` almost surely.
    pub forcing: u64,
    pub mismatches: u64,
    pub first_mismatch: Option<Vec<Ratio<i64>>>,
    /// Whether the distribution with every leaf equal to `i` attains the value.
    pub constant_attains: bool,
    /// A forcing lattice distribution that is not IID yet attains the value;
    /// none exists when the constant distribution is the only forcing one.
    pub non_iid_witness: Option<Vec<Ratio<i64>>>,
    pub holds: bool,
}

impl PropositionReport {
    pub fn to_json(&self) -> Value {
        let probs = |v: &Option<Vec<Ratio<i64>>>| {
            v.as_ref().map(|xs| xs.iter().map(Scalar::to_json).collect::<Vec<_>>())
        };
        json!({
            "shape": self.shape.to_string(),
            "i": self.i as u8,
            "grid": self.grid,
            "value": self.value,
            "lattice_points": self.lattice_points,
            "forcing": self.forcing,
            "mismatches": self.mismatches,
            "first_mismatch": probs(&self.first_mismatch),
            "constant_attains": self.constant_attains,
            "non_iid_witness": probs(&self.non_iid_witness),
            "holds": self.holds,
        })
    }
}

/// Checks [`proposition_values`] against every independent distribution with
/// leaf probabilities in `{0, 1/grid, ..., 1}` that forces the root to `i`.
pub fn proposition_check(shape: &TreeShape, i: bool, grid: u32) -> Result<PropositionReport> {
    if shape.height() > MAX_ENUM_HEIGHT {
        return Err(Error::capability(format!(
            "lattice enumeration is bounded to height {MAX_ENUM_HEIGHT}, got {shape}"
        )));
    }
    if grid == 0 {
        return Err(Error::input("grid must be positive"));
    }
    let n = shape.leaf_count();
    let lattice_points = (grid as u64 + 1)
        .checked_pow(n as u32)
        .filter(|&p| p <= MAX_LATTICE_POINTS)
        .ok_or_else(|| {
            Error::capability(format!("lattice of step 1/{grid} on {shape} exceeds {MAX_LATTICE_POINTS} points"))
        })?;
    let value = proposition_values(shape, i);
    let expected = Ratio::from_integer(value as i64);
    let target = if i { Ratio::from_integer(0) } else { Ratio::from_integer(1) };
    let levels: Vec<Ratio<i64>> = (0..=grid as i64).map(|j| Ratio::new(j, grid as i64)).collect();

    let mut idx = vec![0usize; n];
    let mut leaves = vec![levels[0]; n];
    let (mut forcing, mut mismatches) = (0, 0);
    let (mut first_mismatch, mut non_iid_witness) = (None, None);
    'outer: loop {
        for (l, &j) in leaves.iter_mut().zip(&idx) {
            *l = levels[j];
        }
        if node_probabilities(shape, &leaves)[1] == target {
            forcing += 1;
            if min_cost_value(shape, &leaves) == expected {
                if non_iid_witness.is_none() && leaves.iter().any(|x| *x != leaves[0]) {
                    non_iid_witness = Some(leaves.clone());
                }
            } else {
                mismatches += 1;
                first_mismatch.get_or_insert_with(|| leaves.clone());
            }
        }
        for j in idx.iter_mut().rev() {
            if *j < grid as usize {
                *j += 1;
                continue 'outer;
            }
            *j = 0;
        }
        break;
    }
    let constant = vec![target; n];
    let constant_attains = min_cost_value(shape, &constant) == expected;
    let holds = mismatches == 0 && forcing > 0 && constant_attains;
    Ok(PropositionReport {
        shape: *shape,
        i,
        grid,
        value,
        lattice_points,
        forcing,
        mismatches,
        first_mismatch,
        constant_attains,
        non_iid_witness,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_table() {
        let and3 = TreeShape::and_or(3).unwrap();
        assert_eq!(proposition_values(&TreeShape::and_or(2).unwrap(), false), 2);
        assert_eq!(proposition_values(&and3, false), 2);
        assert_eq!(proposition_values(&and3, true), 4);
        assert_eq!(proposition_values(&and3.dual(), true), 2);
        assert_eq!(proposition_values(&and3.dual(), false), 4);
    }

    #[test]
    fn lattice_examples() {
        let and2 = TreeShape::and_or(2).unwrap();
        for i in [false, true] {
            let rep = proposition_check(&and2, i, 4).unwrap();
            assert!(rep.holds, "{rep:?}");
            assert_eq!(rep.value, 2);
        }
        let and1 = TreeShape::and_or(1).unwrap();
        let rep = proposition_check(&and1, false, 4).unwrap();
        assert!(rep.holds, "{rep:?}");
        assert_eq!(rep.value, 1);
        let only_constant = proposition_check(&and1, true, 4).unwrap();
        assert!(only_constant.holds);
        assert_eq!((only_constant.forcing, only_constant.non_iid_witness), (1, None));
    }

    #[test]
    fn lattice_size_is_bounded() {
        let s = TreeShape::and_or(3).unwrap();
        assert!(matches!(proposition_check(&s, false, 100), Err(Error::Capability(_))));
    }
}
