use std::collections::BTreeMap;

use serde_json::Value;

use super::{Algorithm, CostReport, Witness};
use crate::distributions::{combine_prob, CorrelatedDistribution, IndependentDistribution};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tree::{address_of, depth_of, heap_index, Assignment, GateKind, TreeShape};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    L,
    R,
}

impl Side {
    fn as_str(self) -> &'static str {
        match self {
            Side::L => "L",
            Side::R => "R",
        }
    }
}

/// First child to visit at every internal node, in heap order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DirectionalOrder {
    height: u32,
    first: Vec<Side>,
}

impl DirectionalOrder {
    pub fn left_to_right(shape: &TreeShape) -> Self {
        DirectionalOrder { height: shape.height(), first: vec![Side::L; shape.internal_count()] }
    }

    /// Internal node `i` (heap numbering) visits `pick(i)` first.
    pub fn from_fn(shape: &TreeShape, pick: impl Fn(usize) -> Side) -> Self {
        DirectionalOrder {
            height: shape.height(),
            first: (1..shape.leaf_count()).map(pick).collect(),
        }
    }

    /// All `2^(2^h - 1)` orders; only for enumerable heights.
    pub fn all(shape: &TreeShape) -> Result<Vec<DirectionalOrder>> {
        shape.ensure_enumerable()?;
        let k = shape.internal_count();
        Ok((0u32..1 << k)
            .map(|m| DirectionalOrder::from_fn(shape, |i| if m >> (i - 1) & 1 == 1 { Side::R } else { Side::L }))
            .collect())
    }

    pub fn first_child(&self, heap: usize) -> Side {
        self.first[heap - 1]
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    fn check_shape(&self, shape: &TreeShape) -> Result<()> {
        if self.height != shape.height() {
            return Err(Error::input(format!(
                "order is for height {}, shape {shape} has height {}",
                self.height,
                shape.height()
            )));
        }
        Ok(())
    }

    /// The linear leaf arrangement the order induces.
    pub fn leaf_sequence(&self) -> Vec<usize> {
        let n = 1usize << self.height;
        let mut out = Vec::with_capacity(n);
        self.collect_leaves(1, n, &mut out);
        out
    }

    fn collect_leaves(&self, node: usize, n: usize, out: &mut Vec<usize>) {
        if node >= n {
            out.push(node - n);
            return;
        }
        let (a, b) = self.children_in_order(node);
        self.collect_leaves(a, n, out);
        self.collect_leaves(b, n, out);
    }

    fn children_in_order(&self, node: usize) -> (usize, usize) {
        match self.first_child(node) {
            Side::L => (2 * node, 2 * node + 1),
            Side::R => (2 * node + 1, 2 * node),
        }
    }

    /// JSON object from node address (root is `""`) to `"L"` / `"R"`.
    pub fn to_json(&self) -> Value {
        let map: BTreeMap<String, Value> = self
            .first
            .iter()
            .enumerate()
            .map(|(i, s)| (address_of(i + 1), Value::String(s.as_str().into())))
            .collect();
        Value::Object(map.into_iter().collect())
    }

    pub fn from_json(shape: &TreeShape, v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::input("order must be a JSON object"))?;
        let mut first = vec![None; shape.internal_count()];
        for (addr, side) in obj {
            let i = heap_index(addr)?;
            if i >= shape.leaf_count() {
                return Err(Error::input(format!("{addr:?} is not an internal node of {shape}")));
            }
            first[i - 1] = Some(match side.as_str() {
                Some("L") => Side::L,
                Some("R") => Side::R,
                _ => return Err(Error::input(format!("bad side {side} at {addr:?}"))),
            });
        }
        let first = first
            .into_iter()
            .enumerate()
            .map(|(i, s)| s.ok_or_else(|| Error::input(format!("missing node {:?}", address_of(i + 1)))))
            .collect::<Result<Vec<_>>>()?;
        Ok(DirectionalOrder { height: shape.height(), first })
    }

    fn eval(&self, shape: &TreeShape, node: usize, bits: &[bool]) -> (bool, u32) {
        let n = bits.len();
        if node >= n {
            return (bits[node - n], 1);
        }
        let gate = shape.gate_at_depth(depth_of(node));
        let (a, b) = self.children_in_order(node);
        let (v1, c1) = self.eval(shape, a, bits);
        if v1 == gate.controlling() {
            return (v1, c1);
        }
        let (v2, c2) = self.eval(shape, b, bits);
        (v2, c1 + c2)
    }
}

impl Algorithm for DirectionalOrder {
    fn probe_count(&self, shape: &TreeShape, a: &Assignment) -> Result<u32> {
        self.check_shape(shape)?;
        a.check_shape(shape)?;
        Ok(self.eval(shape, 1, a.bits()).1)
    }
}

/// Expected cost and root probability after visiting `first` then `second`.
fn node_cost<T: Scalar>(gate: GateKind, first: (&T, &T), second: (&T, &T)) -> T {
    let (c1, p1) = first;
    let (c2, _) = second;
    // probability that the first child does not settle the node
    let carry_on = match gate {
        GateKind::Or => p1.clone(),
        GateKind::And => T::one() - p1.clone(),
    };
    c1.clone() + carry_on * c2.clone()
}

/// Bottom-up expected cost of a directional order under an independent
/// distribution.
pub fn expected_cost_id<T: Scalar>(
    shape: &TreeShape,
    order: &DirectionalOrder,
    d: &IndependentDistribution<T>,
) -> Result<T> {
    d.check_shape(shape)?;
    order.check_shape(shape)?;
    let n = shape.leaf_count();
    let mut cost = vec![T::zero(); 2 * n];
    let mut prob = vec![T::zero(); 2 * n];
    for i in 0..n {
        cost[n + i] = T::one();
        prob[n + i] = d.leaf_probs()[i].clone();
    }
    for i in (1..n).rev() {
        let gate = shape.gate_at_depth(depth_of(i));
        let (a, b) = order.children_in_order(i);
        cost[i] = node_cost(gate, (&cost[a], &prob[a]), (&cost[b], &prob[b]));
        prob[i] = combine_prob(gate, &prob[a], &prob[b]);
    }
    Ok(cost[1].clone())
}

/// Cheapest directional order for an independent distribution.
///
/// Subtrees are independent, so choosing the cheaper visiting order at each
/// node separately is optimal. Ties go to the left child.
pub fn min_cost_over_orders<T: Scalar>(
    shape: &TreeShape,
    d: &IndependentDistribution<T>,
) -> Result<CostReport<T>> {
    d.check_shape(shape)?;
    let (cost, first) = order_dp(shape, d.leaf_probs());
    Ok(CostReport {
        expected_cost: cost,
        witness: Witness::Directional(DirectionalOrder { height: shape.height(), first }),
    })
}

/// The same dynamic program without building a report; the inner loop of
/// the equilibrium searches.
pub(crate) fn min_cost_value<T: Scalar>(shape: &TreeShape, leaves: &[T]) -> T {
    order_dp(shape, leaves).0
}

fn order_dp<T: Scalar>(shape: &TreeShape, leaves: &[T]) -> (T, Vec<Side>) {
    let n = leaves.len();
    let mut cost = vec![T::zero(); 2 * n];
    let mut prob = vec![T::zero(); 2 * n];
    let mut first = vec![Side::L; n - 1];
    for i in 0..n {
        cost[n + i] = T::one();
        prob[n + i] = leaves[i].clone();
    }
    for i in (1..n).rev() {
        let gate = shape.gate_at_depth(depth_of(i));
        let (l, r) = (2 * i, 2 * i + 1);
        let left_first = node_cost(gate, (&cost[l], &prob[l]), (&cost[r], &prob[r]));
        let right_first = node_cost(gate, (&cost[r], &prob[r]), (&cost[l], &prob[l]));
        if left_first <= right_first {
            cost[i] = left_first;
        } else {
            cost[i] = right_first;
            first[i - 1] = Side::R;
        }
        prob[i] = combine_prob(gate, &prob[l], &prob[r]);
    }
    (cost[1].clone(), first)
}

/// Cheapest directional order for a correlated distribution, by enumerating
/// every order.
pub fn min_cost_directional_correlated<T: Scalar>(
    d: &CorrelatedDistribution<T>,
) -> Result<CostReport<T>> {
    let shape = d.shape();
    let mut best: Option<(T, DirectionalOrder)> = None;
    for order in DirectionalOrder::all(shape)? {
        let c = super::expected_cost_correlated(&order, d)?;
        if best.as_ref().is_none_or(|(b, _)| c < *b) {
            best = Some((c, order));
        }
    }
    let (expected_cost, order) = best.expect("at least one order");
    Ok(CostReport { expected_cost, witness: Witness::Directional(order) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::{expected_cost_exhaustive, run_cost};
    use crate::distributions::iid;
    use num_rational::{BigRational, Ratio};

    fn a(s: &str) -> Assignment {
        s.parse().unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn run_cost_examples() {
        let s = TreeShape::and_or(2).unwrap();
        let ltr = DirectionalOrder::left_to_right(&s);
        assert_eq!(run_cost(&s, &ltr, &a("0000")).unwrap(), 2);
        assert_eq!(run_cost(&s, &ltr, &a("1111")).unwrap(), 2);
        assert_eq!(run_cost(&s, &ltr, &a("1110")).unwrap(), 2);
        assert_eq!(run_cost(&s, &ltr, &a("0101")).unwrap(), 4);
        assert!(run_cost(&s, &ltr, &a("01")).is_err());
        let s3 = TreeShape::and_or(3).unwrap();
        assert!(run_cost(&s3, &ltr, &a("00000000")).is_err());
    }

    #[test]
    fn expected_cost_examples() {
        let or2 = TreeShape::or_and(2).unwrap();
        let ltr = DirectionalOrder::left_to_right(&or2);
        assert_eq!(expected_cost_id(&or2, &ltr, &iid(&or2, q(1, 2)).unwrap()).unwrap(), q(21, 8));
        assert_eq!(expected_cost_id(&or2, &ltr, &iid(&or2, q(1, 1)).unwrap()).unwrap(), q(2, 1));
        let and2 = TreeShape::and_or(2).unwrap();
        assert_eq!(expected_cost_id(&and2, &ltr, &iid(&and2, q(1, 2)).unwrap()).unwrap(), q(21, 8));
    }

    #[test]
    fn order_dp_examples() {
        let and2 = TreeShape::and_or(2).unwrap();
        let r = min_cost_over_orders(&and2, &iid(&and2, q(3, 10)).unwrap()).unwrap();
        assert_eq!(r.expected_cost, q(13, 10) * (q(2, 1) - q(9, 100)));
        // IID ties everywhere, so the witness stays left-to-right
        assert_eq!(r.witness, Witness::Directional(DirectionalOrder::left_to_right(&and2)));

        let and1 = TreeShape::and_or(1).unwrap();
        let d = IndependentDistribution::new(vec![q(1, 10), q(9, 10)]).unwrap();
        let r = min_cost_over_orders(&and1, &d).unwrap();
        assert_eq!(r.expected_cost, q(11, 10));
        let Witness::Directional(o) = &r.witness else { panic!() };
        assert_eq!(o.first_child(1), Side::R);

        let or1 = TreeShape::or_and(1).unwrap();
        let d = IndependentDistribution::new(vec![q(9, 10), q(1, 10)]).unwrap();
        let r = min_cost_over_orders(&or1, &d).unwrap();
        assert_eq!(r.expected_cost, q(11, 10));
        let Witness::Directional(o) = &r.witness else { panic!() };
        assert_eq!(o.first_child(1), Side::R);
    }

    #[test]
    fn probabilities_are_validated() {
        assert!(IndependentDistribution::new(vec![q(-1, 10), q(1, 2)]).is_err());
        assert!(IndependentDistribution::new(vec![1.2, 0.5]).is_err());
    }

    #[test]
    fn recursion_matches_enumeration_for_every_order() {
        let probs = [Ratio::new(1i64, 3), Ratio::new(1, 2), Ratio::new(2, 7), Ratio::new(0, 1),
            Ratio::new(5, 6), Ratio::new(1, 1), Ratio::new(3, 4), Ratio::new(1, 9)];
        for h in 1..=3 {
            for gate in [GateKind::And, GateKind::Or] {
                let s = TreeShape::new(gate, h).unwrap();
                let d = IndependentDistribution::new(probs[..s.leaf_count()].to_vec()).unwrap();
                let mut best = None;
                for order in DirectionalOrder::all(&s).unwrap() {
                    let rec = expected_cost_id(&s, &order, &d).unwrap();
                    let brute = expected_cost_exhaustive(&s, &order, &d).unwrap();
                    assert_eq!(rec, brute);
                    best = Some(match best { Some(b) if b <= rec => b, _ => rec });
                }
                assert_eq!(min_cost_over_orders(&s, &d).unwrap().expected_cost, best.unwrap());
            }
        }
    }

    #[test]
    fn iid_cost_is_order_invariant() {
        for h in 1..=3 {
            let s = TreeShape::and_or(h).unwrap();
            let d = iid(&s, Ratio::new(2i64, 5)).unwrap();
            let costs: Vec<_> = DirectionalOrder::all(&s)
                .unwrap()
                .iter()
                .map(|o| expected_cost_id(&s, o, &d).unwrap())
                .collect();
            assert!(costs.windows(2).all(|w| w[0] == w[1]));
        }
    }

    #[test]
    fn cost_is_bounded_by_leaf_count() {
        let s = TreeShape::or_and(3).unwrap();
        for order in DirectionalOrder::all(&s).unwrap().iter().step_by(7) {
            for x in s.assignments().unwrap() {
                let c = run_cost(&s, order, &x).unwrap();
                assert!((1..=8).contains(&c));
            }
        }
    }

    #[test]
    fn order_json_round_trip() {
        let s = TreeShape::and_or(2).unwrap();
        let o = DirectionalOrder::from_fn(&s, |i| if i == 3 { Side::R } else { Side::L });
        let v = o.to_json();
        assert_eq!(v.to_string(), r#"{"":"L","0":"L","1":"R"}"#);
        assert_eq!(DirectionalOrder::from_json(&s, &v).unwrap(), o);
        assert!(DirectionalOrder::from_json(&s, &serde_json::json!({"": "L"})).is_err());
        assert_eq!(o.leaf_sequence(), vec![0, 1, 3, 2]);
    }
}
