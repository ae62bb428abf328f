//! Independent, identical and correlated distributions over truth assignments,
//! plus reluctant-assignment sets.
//!
//! A "probability" of a node is always the probability that it has the value
//! 0 (FALSE).

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tree::{depth_of, evaluate, node_values, Assignment, GateKind, TreeShape};

/// Per-leaf probability of the value 0, leaves in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct IndependentDistribution<T> {
    leaf_probs: Vec<T>,
}

impl<T: Scalar> IndependentDistribution<T> {
    pub fn new(leaf_probs: Vec<T>) -> Result<Self> {
        if !leaf_probs.len().is_power_of_two() || leaf_probs.len() < 2 {
            return Err(Error::input(format!(
                "need 2^h leaf probabilities with h >= 1, got {}",
                leaf_probs.len()
            )));
        }
        if let Some((i, p)) = leaf_probs.iter().enumerate().find(|(_, p)| !p.is_probability()) {
            return Err(Error::input(format!("leaf {i} has probability {p:?} outside [0, 1]")));
        }
        Ok(IndependentDistribution { leaf_probs })
    }

    pub fn leaf_probs(&self) -> &[T] {
        &self.leaf_probs
    }

    pub fn len(&self) -> usize {
        self.leaf_probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaf_probs.is_empty()
    }

    pub(crate) fn check_shape(&self, shape: &TreeShape) -> Result<()> {
        if self.leaf_probs.len() != shape.leaf_count() {
            return Err(Error::input(format!(
                "distribution has {} leaves, {shape} has {}",
                self.leaf_probs.len(),
                shape.leaf_count()
            )));
        }
        Ok(())
    }

    /// Probability of the assignment under independence.
    pub fn weight_of(&self, a: &Assignment) -> T {
        self.leaf_probs.iter().zip(a.bits()).fold(T::one(), |acc, (p, &bit)| {
            if bit {
                acc * (T::one() - p.clone())
            } else {
                acc * p.clone()
            }
        })
    }

    /// Whether all leaves share one probability.
    pub fn is_iid(&self) -> bool {
        self.leaf_probs.windows(2).all(|w| w[0] == w[1])
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.leaf_probs.iter().map(Scalar::to_json).collect())
    }
}

pub fn iid<T: Scalar>(shape: &TreeShape, x: T) -> Result<IndependentDistribution<T>> {
    IndependentDistribution::new(vec![x; shape.leaf_count()])
}

/// Probability that the root has the value 0.
pub fn root_probability<T: Scalar>(shape: &TreeShape, d: &IndependentDistribution<T>) -> Result<T> {
    d.check_shape(shape)?;
    Ok(node_probabilities(shape, d.leaf_probs())[1].clone())
}

/// Probabilities of every node in heap order (index 0 unused).
pub(crate) fn node_probabilities<T: Scalar>(shape: &TreeShape, leaves: &[T]) -> Vec<T> {
    let n = leaves.len();
    let mut p = vec![T::zero(); 2 * n];
    p[n..].clone_from_slice(leaves);
    for i in (1..n).rev() {
        p[i] = combine_prob(shape.gate_at_depth(depth_of(i)), &p[2 * i], &p[2 * i + 1]);
    }
    p
}

pub(crate) fn combine_prob<T: Scalar>(gate: GateKind, p1: &T, p2: &T) -> T {
    match gate {
        GateKind::Or => p1.clone() * p2.clone(),
        GateKind::And => T::one() - (T::one() - p1.clone()) * (T::one() - p2.clone()),
    }
}

/// Finitely supported distribution on assignments of one shape.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatedDistribution<T = BigRational> {
    shape: TreeShape,
    support: BTreeMap<Assignment, T>,
}

impl<T: Scalar> CorrelatedDistribution<T> {
    /// Zero weights are dropped; the rest must be nonnegative and sum to one.
    pub fn new(shape: TreeShape, weights: impl IntoIterator<Item = (Assignment, T)>) -> Result<Self> {
        let mut support = BTreeMap::new();
        for (a, w) in weights {
            a.check_shape(&shape)?;
            if w < T::zero() {
                return Err(Error::input(format!("negative weight {w:?} on {a}")));
            }
            if w.is_zero() {
                continue;
            }
            let slot = support.entry(a).or_insert_with(T::zero);
            *slot = slot.clone() + w;
        }
        let total = support.values().fold(T::zero(), |acc, w| acc + w.clone());
        if !total.approx_eq(&T::one()) {
            return Err(Error::input(format!("weights sum to {total:?}, not 1")));
        }
        Ok(CorrelatedDistribution { shape, support })
    }

    pub fn point_mass(shape: TreeShape, a: Assignment) -> Result<Self> {
        Self::new(shape, [(a, T::one())])
    }

    /// The product distribution induced by an independent one.
    pub fn from_independent(shape: TreeShape, d: &IndependentDistribution<T>) -> Result<Self> {
        d.check_shape(&shape)?;
        let support: Vec<_> = shape.assignments()?.map(|a| {
            let w = d.weight_of(&a);
            (a, w)
        }).collect();
        Self::new(shape, support)
    }

    pub fn shape(&self) -> &TreeShape {
        &self.shape
    }

    pub fn support(&self) -> &BTreeMap<Assignment, T> {
        &self.support
    }

    pub fn weight(&self, a: &Assignment) -> T {
        self.support.get(a).cloned().unwrap_or_else(T::zero)
    }

    /// Probability that the root evaluates to 0.
    pub fn root_probability(&self) -> T {
        self.support
            .iter()
            .filter(|(a, _)| !evaluate(&self.shape, a).unwrap_or(true))
            .fold(T::zero(), |acc, (_, w)| acc + w.clone())
    }

    /// JSON map from bit-string to weight.
    pub fn to_json(&self) -> Value {
        let map: Map<String, Value> =
            self.support.iter().map(|(a, w)| (a.to_string(), w.to_json())).collect();
        Value::Object(map)
    }
}

/// Pointwise `r * d0 + (1 - r) * d1`.
pub fn mix<T: Scalar>(
    d0: &CorrelatedDistribution<T>,
    d1: &CorrelatedDistribution<T>,
    r: &T,
) -> Result<CorrelatedDistribution<T>> {
    if d0.shape != d1.shape {
        return Err(Error::input(format!("cannot mix {} with {}", d0.shape, d1.shape)));
    }
    if !r.is_probability() {
        return Err(Error::input(format!("mixing weight {r:?} outside [0, 1]")));
    }
    let s = T::one() - r.clone();
    let weights = d0
        .support
        .iter()
        .map(|(a, w)| (a.clone(), r.clone() * w.clone()))
        .chain(d1.support.iter().map(|(a, w)| (a.clone(), s.clone() * w.clone())));
    CorrelatedDistribution::new(d0.shape, weights)
}

/// All reluctant assignments with a given root value.
#[derive(Debug, Clone, PartialEq)]
pub struct ISet {
    shape: TreeShape,
    value: bool,
    members: Vec<Assignment>,
}

impl ISet {
    pub fn shape(&self) -> &TreeShape {
        &self.shape
    }

    /// Root value shared by all members (`true` for the 1-set).
    pub fn value(&self) -> bool {
        self.value
    }

    pub fn members(&self) -> &[Assignment] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.members.iter().map(|a| Value::String(a.to_string())).collect())
    }
}

/// Reluctant: every AND node with value 0 has exactly one 0-child and every
/// OR node with value 1 has exactly one 1-child.
pub fn is_reluctant(shape: &TreeShape, a: &Assignment) -> Result<bool> {
    a.check_shape(shape)?;
    let v = node_values(shape, a);
    Ok((1..shape.leaf_count()).all(|i| {
        let gate = shape.gate_at_depth(depth_of(i));
        let controlling = gate.controlling();
        v[i] != controlling || (v[2 * i] == controlling) != (v[2 * i + 1] == controlling)
    }))
}

/// The `i`-set, built recursively from the two reluctance rules.
pub fn enumerate_reluctant(shape: &TreeShape, value: bool) -> Result<ISet> {
    shape.ensure_enumerable()?;
    let mut members = reluctant_rec(shape.root_gate(), shape.height(), value);
    members.sort();
    Ok(ISet { shape: *shape, value, members })
}

fn reluctant_rec(gate: GateKind, height: u32, value: bool) -> Vec<Assignment> {
    if height == 0 {
        return vec![Assignment::new(vec![value])];
    }
    let child = |v: bool| reluctant_rec(gate.dual(), height - 1, v);
    let pairs: Vec<(bool, bool)> = if value == gate.controlling() {
        vec![(value, !value), (!value, value)]
    } else {
        vec![(value, value)]
    };
    let mut out = Vec::new();
    for (lv, rv) in pairs {
        let (left, right) = (child(lv), child(rv));
        for l in &left {
            for r in &right {
                out.push(l.concat(r));
            }
        }
    }
    out
}

/// Size of the `i`-set without materialising it; works for every height.
pub fn reluctant_count(shape: &TreeShape, value: bool) -> BigUint {
    // counts[v] = number of reluctant assignments of the current subtree with value v
    let mut counts = [BigUint::one(), BigUint::one()];
    for depth in (0..shape.height()).rev() {
        let gate = shape.gate_at_depth(depth);
        let c = gate.controlling() as usize;
        let nc = 1 - c;
        let mut next = [BigUint::zero(), BigUint::zero()];
        next[c] = BigUint::from(2u32) * &counts[c] * &counts[nc];
        next[nc] = &counts[nc] * &counts[nc];
        counts = next;
    }
    counts[value as usize].clone()
}

/// Uniform distribution over the members of an i-set.
pub fn uniform_on(iset: &ISet) -> Result<CorrelatedDistribution<BigRational>> {
    if iset.is_empty() {
        return Err(Error::input("cannot build a uniform distribution on an empty set"));
    }
    let w = BigRational::new(1.into(), iset.len().into());
    CorrelatedDistribution::new(iset.shape, iset.members.iter().map(|a| (a.clone(), w.clone())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn a(s: &str) -> Assignment {
        s.parse().unwrap()
    }

    #[test]
    fn root_probability_examples() {
        let or2 = TreeShape::or_and(2).unwrap();
        let and2 = TreeShape::and_or(2).unwrap();
        assert_eq!(root_probability(&or2, &iid(&or2, q(1, 2)).unwrap()).unwrap(), q(9, 16));
        assert_eq!(root_probability(&and2, &iid(&and2, q(1, 2)).unwrap()).unwrap(), q(7, 16));
        let and1 = TreeShape::and_or(1).unwrap();
        let d = IndependentDistribution::new(vec![q(0, 1), q(1, 1)]).unwrap();
        assert_eq!(root_probability(&and1, &d).unwrap(), q(1, 1));
    }

    #[test]
    fn iid_examples() {
        let s2 = TreeShape::and_or(2).unwrap();
        assert_eq!(iid(&s2, 0.3).unwrap().leaf_probs(), &[0.3; 4]);
        let s1 = TreeShape::and_or(1).unwrap();
        assert_eq!(iid(&s1, 0.0).unwrap().leaf_probs(), &[0.0; 2]);
        let s3 = TreeShape::and_or(3).unwrap();
        assert_eq!(iid(&s3, 1.0).unwrap().leaf_probs(), &[1.0; 8]);
        assert!(iid(&s3, 1.5).is_err());
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let s2 = TreeShape::and_or(2).unwrap();
        let d = IndependentDistribution::new(vec![0.5, 0.5]).unwrap();
        assert!(root_probability(&s2, &d).is_err());
        assert!(IndependentDistribution::new(vec![0.5; 3]).is_err());
    }

    #[test]
    fn reluctant_sets_at_height_two() {
        let s = TreeShape::and_or(2).unwrap();
        let one = enumerate_reluctant(&s, true).unwrap();
        let ones: Vec<String> = one.members().iter().map(|x| x.to_string()).collect();
        assert_eq!(ones, ["0101", "0110", "1001", "1010"]);
        let zero = enumerate_reluctant(&s, false).unwrap();
        let zeros: Vec<String> = zero.members().iter().map(|x| x.to_string()).collect();
        assert_eq!(zeros, ["0001", "0010", "0100", "1000"]);
        let s1 = TreeShape::and_or(1).unwrap();
        let z1 = enumerate_reluctant(&s1, false).unwrap();
        assert_eq!(z1.members(), &[a("01"), a("10")]);
    }

    #[test]
    fn isets_match_brute_force_predicate() {
        for h in 1..=3 {
            for gate in [GateKind::And, GateKind::Or] {
                let s = TreeShape::new(gate, h).unwrap();
                for v in [false, true] {
                    let set = enumerate_reluctant(&s, v).unwrap();
                    let brute: Vec<Assignment> = s
                        .assignments()
                        .unwrap()
                        .filter(|x| is_reluctant(&s, x).unwrap() && evaluate(&s, x).unwrap() == v)
                        .collect();
                    assert_eq!(set.members(), &brute[..], "{s} value {v}");
                    assert_eq!(reluctant_count(&s, v), BigUint::from(brute.len()));
                    let dual_count = enumerate_reluctant(&s.dual(), !v).unwrap().len();
                    assert_eq!(set.len(), dual_count);
                }
            }
        }
    }

    #[test]
    fn reluctant_counts_beyond_enumeration() {
        let s = TreeShape::and_or(16).unwrap();
        assert!(enumerate_reluctant(&s, true).is_err());
        assert!(reluctant_count(&s, true) > BigUint::from(u64::MAX));
        let s4 = TreeShape::and_or(4).unwrap();
        // 1-set of AND-OR(4): both OR children in their reluctant 1-set, each
        // of those has one AND-OR(2) child with value 1 (4 ways) and one with value 0 (4 ways)
        assert_eq!(reluctant_count(&s4, true), BigUint::from((2u32 * 4 * 4).pow(2)));
    }

    #[test]
    fn uniform_and_mix() {
        let s = TreeShape::and_or(2).unwrap();
        let d1 = uniform_on(&enumerate_reluctant(&s, true).unwrap()).unwrap();
        assert!(d1.support().values().all(|w| *w == q(1, 4)));
        let d0 = uniform_on(&enumerate_reluctant(&s, false).unwrap()).unwrap();
        assert_eq!(d0.root_probability(), q(1, 1));
        assert_eq!(d1.root_probability(), q(0, 1));
        let s1 = TreeShape::and_or(1).unwrap();
        let z1 = uniform_on(&enumerate_reluctant(&s1, false).unwrap()).unwrap();
        assert!(z1.support().values().all(|w| *w == q(1, 2)));

        assert_eq!(mix(&d0, &d1, &q(1, 1)).unwrap(), d0);
        assert_eq!(mix(&d0, &d1, &q(0, 1)).unwrap(), d1);
        let half = mix(&d0, &d1, &q(1, 2)).unwrap();
        assert_eq!(half.support().len(), 8);
        assert!(half.support().values().all(|w| *w == q(1, 8)));
        assert_eq!(half.root_probability(), q(1, 2));
        let third = mix(&d0, &d1, &q(1, 3)).unwrap();
        assert_eq!(third.root_probability(), q(1, 3));

        assert!(mix(&d0, &z1, &q(1, 2)).is_err());
    }

    #[test]
    fn empty_iset_has_no_uniform_distribution() {
        let s = TreeShape::and_or(1).unwrap();
        let empty = ISet { shape: s, value: true, members: vec![] };
        assert!(uniform_on(&empty).is_err());
    }

    #[test]
    fn weights_must_sum_to_one() {
        let s = TreeShape::and_or(1).unwrap();
        assert!(CorrelatedDistribution::new(s, [(a("00"), q(1, 2))]).is_err());
        assert!(CorrelatedDistribution::new(s, [(a("00"), q(3, 2)), (a("11"), q(-1, 2))]).is_err());
        assert!(CorrelatedDistribution::new(s, [(a("00"), 0.5), (a("11"), 0.5 + 1e-13)]).is_ok());
    }

    #[test]
    fn product_lift_preserves_root_probability() {
        let s = TreeShape::or_and(2).unwrap();
        let d = IndependentDistribution::new(vec![
            Ratio::new(1i64, 3),
            Ratio::new(1, 2),
            Ratio::new(2, 5),
            Ratio::new(0, 1),
        ])
        .unwrap();
        let c = CorrelatedDistribution::from_independent(s, &d).unwrap();
        assert_eq!(c.root_probability(), root_probability(&s, &d).unwrap());
    }
}
