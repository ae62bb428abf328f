//! General deterministic decision trees and the exact expectimax oracle.

use std::collections::HashMap;

use serde_json::{json, Value};

use super::{Algorithm, CostReport, Witness};
use crate::distributions::CorrelatedDistribution;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tree::{address_of, depth_of, Assignment, TreeShape, MAX_ENUM_HEIGHT};

/// Largest height an adaptive strategy can be run on (64 leaves).
const MAX_ADAPTIVE_HEIGHT: u32 = 6;

/// Decision tree over observed leaf values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdaptiveStrategy {
    /// Probe `leaf` (canonical index), then continue by the observed value.
    Probe { leaf: usize, if_false: Box<AdaptiveStrategy>, if_true: Box<AdaptiveStrategy> },
    /// Stop and announce the root value.
    Halt(bool),
}

impl AdaptiveStrategy {
    /// JSON decision tree with leaves named by their binary address.
    pub fn to_json(&self, shape: &TreeShape) -> Value {
        match self {
            AdaptiveStrategy::Halt(v) => json!({ "halt": *v as u8 }),
            AdaptiveStrategy::Probe { leaf, if_false, if_true } => json!({
                "probe": address_of(shape.leaf_count() + leaf),
                "if0": if_false.to_json(shape),
                "if1": if_true.to_json(shape),
            }),
        }
    }

    /// Number of decision nodes.
    pub fn size(&self) -> usize {
        match self {
            AdaptiveStrategy::Halt(_) => 0,
            AdaptiveStrategy::Probe { if_false, if_true, .. } => 1 + if_false.size() + if_true.size(),
        }
    }
}

/// What an algorithm knows: which leaves it has probed and their values,
/// bit `i` standing for leaf `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Knowledge {
    probed: u64,
    values: u64,
}

impl Knowledge {
    fn with(self, leaf: usize, value: bool) -> Knowledge {
        Knowledge {
            probed: self.probed | 1 << leaf,
            values: self.values | (value as u64) << leaf,
        }
    }
}

/// Known node values in heap order: `None` when not yet determined.
fn partial_values(shape: &TreeShape, k: Knowledge) -> Vec<Option<bool>> {
    let n = shape.leaf_count();
    let mut v = vec![None; 2 * n];
    for i in 0..n {
        if k.probed >> i & 1 == 1 {
            v[n + i] = Some(k.values >> i & 1 == 1);
        }
    }
    for i in (1..n).rev() {
        let gate = shape.gate_at_depth(depth_of(i));
        let c = gate.controlling();
        v[i] = match (v[2 * i], v[2 * i + 1]) {
            (Some(a), _) if a == c => Some(c),
            (_, Some(b)) if b == c => Some(c),
            (Some(_), Some(_)) => Some(!c),
            _ => None,
        };
    }
    v
}

/// Leaves whose probe could still matter: unprobed with no determined ancestor.
fn useful_leaves(shape: &TreeShape, values: &[Option<bool>]) -> Vec<usize> {
    let n = shape.leaf_count();
    (0..n)
        .filter(|&leaf| {
            let mut node = n + leaf;
            loop {
                if values[node].is_some() {
                    return false;
                }
                if node == 1 {
                    return true;
                }
                node /= 2;
            }
        })
        .collect()
}

impl Algorithm for AdaptiveStrategy {
    fn probe_count(&self, shape: &TreeShape, a: &Assignment) -> Result<u32> {
        if shape.height() > MAX_ADAPTIVE_HEIGHT {
            return Err(Error::capability(format!(
                "adaptive strategies are supported up to height {MAX_ADAPTIVE_HEIGHT}"
            )));
        }
        a.check_shape(shape)?;
        let mut k = Knowledge { probed: 0, values: 0 };
        let mut node = self;
        let mut probes = 0;
        loop {
            let values = partial_values(shape, k);
            match node {
                AdaptiveStrategy::Halt(v) => {
                    return match values[1] {
                        Some(root) if root == *v => Ok(probes),
                        Some(_) => Err(Error::contract(format!("halted with wrong value on {a}"))),
                        None => Err(Error::contract(format!("halted before the root is determined on {a}"))),
                    };
                }
                AdaptiveStrategy::Probe { leaf, if_false, if_true } => {
                    if *leaf >= shape.leaf_count() {
                        return Err(Error::contract(format!("leaf {leaf} outside {shape}")));
                    }
                    if k.probed >> leaf & 1 == 1 {
                        return Err(Error::contract(format!("leaf {leaf} probed twice on {a}")));
                    }
                    if !useful_leaves(shape, &values).contains(leaf) {
                        return Err(Error::contract(format!(
                            "leaf {leaf} lies in an already determined subtree on {a}"
                        )));
                    }
                    let bit = a.bits()[*leaf];
                    k = k.with(*leaf, bit);
                    probes += 1;
                    node = if bit { if_true } else { if_false };
                }
            }
        }
    }
}

struct Expectimax<'a, T> {
    shape: &'a TreeShape,
    support: Vec<(u64, T)>,
    memo: HashMap<Knowledge, (T, Option<usize>)>,
}

impl<T: Scalar> Expectimax<'_, T> {
    fn mass(&self, k: Knowledge) -> T {
        self.support
            .iter()
            .filter(|(m, _)| m & k.probed == k.values)
            .fold(T::zero(), |acc, (_, w)| acc + w.clone())
    }

    /// Minimum over strategies of `sum_a w(a) * probes(a)` restricted to the
    /// assignments consistent with `k`, and the leaf to probe next.
    fn solve(&mut self, k: Knowledge) -> (T, Option<usize>) {
        if let Some(hit) = self.memo.get(&k) {
            return hit.clone();
        }
        let values = partial_values(self.shape, k);
        let result = if values[1].is_some() {
            (T::zero(), None)
        } else {
            let mass = self.mass(k);
            let useful = useful_leaves(self.shape, &values);
            if mass.is_zero() {
                (T::zero(), useful.first().copied())
            } else {
                let mut best: Option<(T, usize)> = None;
                for leaf in useful {
                    let total =
                        mass.clone() + self.solve(k.with(leaf, false)).0 + self.solve(k.with(leaf, true)).0;
                    if best.as_ref().is_none_or(|(b, _)| total < *b) {
                        best = Some((total, leaf));
                    }
                }
                let (v, leaf) = best.expect("an undetermined root has a useful leaf");
                (v, Some(leaf))
            }
        };
        self.memo.insert(k, result.clone());
        result
    }

    fn strategy(&mut self, k: Knowledge) -> AdaptiveStrategy {
        let values = partial_values(self.shape, k);
        if let Some(root) = values[1] {
            return AdaptiveStrategy::Halt(root);
        }
        let leaf = self.solve(k).1.expect("undetermined root");
        AdaptiveStrategy::Probe {
            leaf,
            if_false: Box::new(self.strategy(k.with(leaf, false))),
            if_true: Box::new(self.strategy(k.with(leaf, true))),
        }
    }
}

/// Exact minimum expected cost over every deterministic alpha-beta decision
/// tree, by memoised search over information states. Ties go to the lowest
/// leaf index.
pub fn min_cost_adaptive<T: Scalar>(d: &CorrelatedDistribution<T>) -> Result<CostReport<T>> {
    let shape = d.shape();
    if shape.height() > MAX_ENUM_HEIGHT {
        return Err(Error::capability(format!(
            "adaptive search is bounded to height {MAX_ENUM_HEIGHT}, got {shape}"
        )));
    }
    let n = shape.leaf_count();
    let support = d
        .support()
        .iter()
        .map(|(a, w)| {
            let m = a.bits().iter().enumerate().fold(0u64, |m, (i, &b)| m | (b as u64) << i);
            (m, w.clone())
        })
        .collect();
    debug_assert!(n <= 64);
    let mut search = Expectimax { shape, support, memo: HashMap::new() };
    let root = Knowledge { probed: 0, values: 0 };
    let (expected_cost, _) = search.solve(root);
    let strategy = search.strategy(root);
    Ok(CostReport { expected_cost, witness: Witness::Adaptive(strategy) })
}
