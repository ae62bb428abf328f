//! Uniform binary AND-OR / OR-AND trees, leaf addressing and truth assignments.
//!
//! Nodes are addressed by binary strings read from the root: the root is the
//! empty address, its children are `"0"` (left) and `"1"` (right), and so on.
//! Leaves sit at depth `h`, so a leaf address is an `h`-bit string and its
//! index in the canonical left-to-right order is that string read as a
//! binary number. Internally nodes use heap numbering (root = 1, children of
//! `n` are `2n` and `2n + 1`), which is the same order.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest height accepted anywhere in the crate.
pub const MAX_HEIGHT: u32 = 16;

/// Largest height for which all `2^(2^h)` assignments may be enumerated.
pub const MAX_ENUM_HEIGHT: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    And,
    Or,
}

impl GateKind {
    pub fn dual(self) -> GateKind {
        match self {
            GateKind::And => GateKind::Or,
            GateKind::Or => GateKind::And,
        }
    }

    pub fn apply(self, a: bool, b: bool) -> bool {
        match self {
            GateKind::And => a && b,
            GateKind::Or => a || b,
        }
    }

    /// The child value that settles the gate on its own (AND: false, OR: true).
    pub fn controlling(self) -> bool {
        matches!(self, GateKind::Or)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GateKind::And => "and",
            GateKind::Or => "or",
        })
    }
}

impl FromStr for GateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "and" | "and-or" => Ok(GateKind::And),
            "or" | "or-and" => Ok(GateKind::Or),
            _ => Err(Error::input(format!("unknown gate kind {s:?}"))),
        }
    }
}

/// A uniform binary tree fixed by its root gate and height.
///
/// Gates alternate by level, so the shape is described by two numbers and
/// nothing is materialised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TreeShape {
    root_gate: GateKind,
    height: u32,
}

impl TreeShape {
    pub fn new(root_gate: GateKind, height: u32) -> Result<Self> {
        if height == 0 || height > MAX_HEIGHT {
            return Err(Error::input(format!(
                "height must be in 1..={MAX_HEIGHT}, got {height}"
            )));
        }
        Ok(TreeShape { root_gate, height })
    }

    pub fn and_or(height: u32) -> Result<Self> {
        Self::new(GateKind::And, height)
    }

    pub fn or_and(height: u32) -> Result<Self> {
        Self::new(GateKind::Or, height)
    }

    pub fn root_gate(&self) -> GateKind {
        self.root_gate
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn leaf_count(&self) -> usize {
        1usize << self.height
    }

    pub fn internal_count(&self) -> usize {
        self.leaf_count() - 1
    }

    /// Gate at the given depth (the root is depth 0). Depth must be below `h`.
    pub fn gate_at_depth(&self, depth: u32) -> GateKind {
        if depth % 2 == 0 {
            self.root_gate
        } else {
            self.root_gate.dual()
        }
    }

    pub fn dual(&self) -> TreeShape {
        TreeShape { root_gate: self.root_gate.dual(), height: self.height }
    }

    /// Shape of either child subtree, `None` at height 1.
    pub fn child(&self) -> Option<TreeShape> {
        (self.height > 1).then(|| self.dual_with_height(self.height - 1))
    }

    fn dual_with_height(&self, height: u32) -> TreeShape {
        TreeShape { root_gate: self.root_gate.dual(), height }
    }

    pub(crate) fn ensure_enumerable(&self) -> Result<()> {
        if self.height > MAX_ENUM_HEIGHT {
            return Err(Error::capability(format!(
                "height {} exceeds the enumeration bound {MAX_ENUM_HEIGHT}",
                self.height
            )));
        }
        Ok(())
    }

    /// Every assignment of the shape, in increasing bit-string order.
    pub fn assignments(&self) -> Result<impl Iterator<Item = Assignment>> {
        self.ensure_enumerable()?;
        let n = self.leaf_count();
        Ok((0u64..(1u64 << n)).map(move |m| Assignment::from_mask(m, n)))
    }
}

impl fmt::Display for TreeShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.root_gate {
            GateKind::And => write!(f, "AND-OR(h={})", self.height),
            GateKind::Or => write!(f, "OR-AND(h={})", self.height),
        }
    }
}

/// Heap index of the node with the given binary address.
pub fn heap_index(address: &str) -> Result<usize> {
    let mut n = 1usize;
    for c in address.chars() {
        n = match c {
            '0' => 2 * n,
            '1' => 2 * n + 1,
            _ => return Err(Error::input(format!("bad node address {address:?}"))),
        };
    }
    Ok(n)
}

/// Binary address of a heap index (`1` is the root, `""`).
pub fn address_of(heap: usize) -> String {
    let depth = usize::BITS - 1 - heap.leading_zeros();
    (0..depth).rev().map(|i| if heap >> i & 1 == 1 { '1' } else { '0' }).collect()
}

pub(crate) fn depth_of(heap: usize) -> u32 {
    usize::BITS - 1 - heap.leading_zeros()
}

/// One truth assignment: `true` is TRUE (1), `false` is FALSE (0).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    bits: Vec<bool>,
}

impl Assignment {
    pub fn new(bits: Vec<bool>) -> Self {
        Assignment { bits }
    }

    pub fn constant(value: bool, len: usize) -> Self {
        Assignment { bits: vec![value; len] }
    }

    /// Leftmost leaf is the most significant bit of `mask`.
    pub fn from_mask(mask: u64, len: usize) -> Self {
        Assignment { bits: (0..len).map(|i| mask >> (len - 1 - i) & 1 == 1).collect() }
    }

    /// Inverse of [`Assignment::from_mask`]; only defined for at most 64 leaves.
    pub fn to_mask(&self) -> u64 {
        self.bits.iter().fold(0u64, |m, &b| (m << 1) | b as u64)
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn complement(&self) -> Assignment {
        Assignment { bits: self.bits.iter().map(|b| !b).collect() }
    }

    pub fn concat(&self, right: &Assignment) -> Assignment {
        let mut bits = self.bits.clone();
        bits.extend_from_slice(&right.bits);
        Assignment { bits }
    }

    pub(crate) fn check_shape(&self, shape: &TreeShape) -> Result<()> {
        if self.bits.len() != shape.leaf_count() {
            return Err(Error::input(format!(
                "assignment has {} leaves, {shape} has {}",
                self.bits.len(),
                shape.leaf_count()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Assignment({self})")
    }
}

impl FromStr for Assignment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::input(format!("bad assignment bit-string {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Assignment { bits })
    }
}

impl Serialize for Assignment {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Assignment {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Root value of `shape` under `a` with plain AND/OR semantics.
pub fn evaluate(shape: &TreeShape, a: &Assignment) -> Result<bool> {
    a.check_shape(shape)?;
    Ok(eval_range(shape.root_gate(), a.bits()))
}

fn eval_range(gate: GateKind, leaves: &[bool]) -> bool {
    if leaves.len() == 1 {
        return leaves[0];
    }
    let (l, r) = leaves.split_at(leaves.len() / 2);
    gate.apply(eval_range(gate.dual(), l), eval_range(gate.dual(), r))
}

/// Values of every node in heap order (index 0 unused).
pub(crate) fn node_values(shape: &TreeShape, a: &Assignment) -> Vec<bool> {
    let n = shape.leaf_count();
    let mut v = vec![false; 2 * n];
    v[n..].copy_from_slice(a.bits());
    for i in (1..n).rev() {
        let gate = shape.gate_at_depth(depth_of(i));
        v[i] = gate.apply(v[2 * i], v[2 * i + 1]);
    }
    v
}

pub fn dual(shape: &TreeShape) -> TreeShape {
    shape.dual()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(s: &str) -> Assignment {
        s.parse().unwrap()
    }

    #[test]
    fn evaluates_small_examples() {
        let and2 = TreeShape::and_or(2).unwrap();
        let or2 = TreeShape::or_and(2).unwrap();
        assert!(evaluate(&and2, &a("1110")).unwrap());
        assert!(!evaluate(&and2, &a("0000")).unwrap());
        assert!(evaluate(&or2, &a("1111")).unwrap());
        assert!(!evaluate(&and2, &a("0010")).unwrap());
    }

    #[test]
    fn length_mismatch_is_an_input_error() {
        let and2 = TreeShape::and_or(2).unwrap();
        assert!(matches!(evaluate(&and2, &a("101")), Err(Error::Input(_))));
    }

    #[test]
    fn dual_swaps_gate_and_is_an_involution() {
        let s = TreeShape::and_or(2).unwrap();
        assert_eq!(dual(&s), TreeShape::or_and(2).unwrap());
        let s5 = TreeShape::or_and(5).unwrap();
        assert_eq!(dual(&s5), TreeShape::and_or(5).unwrap());
        let s3 = TreeShape::and_or(3).unwrap();
        assert_eq!(dual(&dual(&s3)), s3);
    }

    #[test]
    fn heights_are_bounded() {
        assert!(TreeShape::and_or(0).is_err());
        assert!(TreeShape::and_or(17).is_err());
        let big = TreeShape::and_or(16).unwrap();
        assert_eq!(big.leaf_count(), 65536);
        assert!(big.assignments().is_err());
    }

    #[test]
    fn addresses_round_trip() {
        assert_eq!(address_of(1), "");
        assert_eq!(address_of(2), "0");
        assert_eq!(address_of(7), "11");
        for i in 1..64 {
            assert_eq!(heap_index(&address_of(i)).unwrap(), i);
        }
        assert!(heap_index("012").is_err());
    }

    #[test]
    fn de_morgan_duality_exhaustive() {
        for h in 1..=3 {
            for gate in [GateKind::And, GateKind::Or] {
                let s = TreeShape::new(gate, h).unwrap();
                for x in s.assignments().unwrap() {
                    let lhs = evaluate(&s, &x).unwrap();
                    let rhs = evaluate(&s.dual(), &x.complement()).unwrap();
                    assert_eq!(lhs, !rhs, "{s} {x}");
                }
            }
        }
    }

    #[test]
    fn evaluation_is_monotone() {
        for h in 1..=3 {
            for gate in [GateKind::And, GateKind::Or] {
                let s = TreeShape::new(gate, h).unwrap();
                for x in s.assignments().unwrap() {
                    if evaluate(&s, &x).unwrap() {
                        continue;
                    }
                    for i in 0..x.len() {
                        if x.bits()[i] {
                            let mut bits = x.bits().to_vec();
                            bits[i] = false;
                            assert!(!evaluate(&s, &Assignment::new(bits)).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn node_values_match_evaluate() {
        let s = TreeShape::or_and(3).unwrap();
        for x in s.assignments().unwrap() {
            assert_eq!(node_values(&s, &x)[1], evaluate(&s, &x).unwrap());
        }
    }

    #[test]
    fn bit_strings_round_trip() {
        let x = a("1110");
        assert_eq!(x.to_string(), "1110");
        assert_eq!(x.to_mask(), 0b1110);
        assert_eq!(Assignment::from_mask(0b1110, 4), x);
        assert_eq!(serde_json::to_string(&x).unwrap(), "\"1110\"");
        let back: Assignment = serde_json::from_str("\"0101\"").unwrap();
        assert_eq!(back, a("0101"));
        assert!("01a".parse::<Assignment>().is_err());
    }
}
