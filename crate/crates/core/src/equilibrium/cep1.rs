//! The two-subtree constrained extremum problem below an AND root.
//!
//! With OR subtrees of height `h` holding root probabilities `z >= w` and
//! `(1 - z)(1 - w) = 1 - r`, the cost of probing the `z` subtree first is
//! `f(z, w) = c(z) + (1 - z) c(w)` where `c(u) = c_or_h(p_or_h^{-1}(u))`.

use serde_json::{json, Value};

use super::{ChildProbPair, RootConstraint};
use crate::error::{Error, Result};
use crate::poly::numeric::{cost_prob_f64, prob_inverse};
use crate::scalar::float_json;
use crate::tree::GateKind;

const SCAN_POINTS: usize = 65;
const MONOTONE_GRID: usize = 200;

/// Cost of the IID tree whose root probability is `u`.
pub fn composite_cost(gate: GateKind, height: u32, u: f64) -> f64 {
    let x = prob_inverse(gate, height, u, 0.0);
    cost_prob_f64(gate, height, x).0
}

/// `f(z, w)` without checking the side conditions.
pub fn cep1_value(h: u32, z: f64, w: f64) -> f64 {
    composite_cost(GateKind::Or, h, z) + (1.0 - z) * composite_cost(GateKind::Or, h, w)
}

pub fn cep1_objective(h: u32, pair: &ChildProbPair) -> Result<f64> {
    if h == 0 {
        return Err(Error::input("height must be positive"));
    }
    Ok(cep1_value(h, pair.z(), pair.w()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cep1Report {
    pub height: u32,
    pub r: f64,
    pub pair: ChildProbPair,
    pub value: f64,
    /// Grid scans performed.
    pub iterations: usize,
    /// Whether consecutive differences of `f1` on the monotonicity grid are all negative.
    pub decreasing_f1: bool,
    /// Largest of those differences.
    pub max_difference: f64,
    pub grid_points: usize,
    pub tol: f64,
}

impl Cep1Report {
    pub fn to_json(&self) -> Value {
        json!({
            "height": self.height,
            "r": float_json(self.r),
            "argmax": { "z": float_json(self.pair.z()), "w": float_json(self.pair.w()) },
            "value": float_json(self.value),
            "iterations": self.iterations,
            "decreasing_f1": self.decreasing_f1,
            "max_difference": float_json(self.max_difference),
            "grid_points": self.grid_points,
            "tol": float_json(self.tol),
        })
    }
}

/// Maximises `f1(z) = f(z, omega(z))`, `omega(z) = 1 - (1 - r)/(1 - z)`,
/// over `[1 - sqrt(1 - r), r]` by repeated grid scans, and samples `f1` for
/// monotonicity.
pub fn cep1_solve(h: u32, r: RootConstraint, tol: f64) -> Result<Cep1Report> {
    if h == 0 {
        return Err(Error::input("height must be positive"));
    }
    if !(tol > 0.0) {
        return Err(Error::input(format!("tolerance must be positive, got {tol}")));
    }
    let rv = r.require_interior("cep1")?;
    let omega = |z: f64| 1.0 - (1.0 - rv) / (1.0 - z);
    let f1 = |z: f64| cep1_value(h, z, omega(z).max(0.0));
    let (start, end) = (1.0 - (1.0 - rv).sqrt(), rv);

    let (mut lo, mut hi) = (start, end);
    let mut best = (f1(lo), lo);
    let mut iterations = 0;
    while hi - lo > tol / 4.0 {
        iterations += 1;
        let step = (hi - lo) / (SCAN_POINTS - 1) as f64;
        let (idx, v) = (0..SCAN_POINTS)
            .map(|j| (j, f1(lo + step * j as f64)))
            .fold((0, f64::NEG_INFINITY), |acc, (j, v)| if v > acc.1 { (j, v) } else { acc });
        if v > best.0 {
            best = (v, lo + step * idx as f64);
        }
        let centre = lo + step * idx as f64;
        (lo, hi) = ((centre - step).max(start), (centre + step).min(end));
        if step == 0.0 {
            break;
        }
    }
    let z = best.1;
    let pair = ChildProbPair::new(z, omega(z).clamp(0.0, z), r)?;

    let step = (end - start) / (MONOTONE_GRID - 1) as f64;
    let samples: Vec<f64> = (0..MONOTONE_GRID).map(|j| f1(start + step * j as f64)).collect();
    let max_difference = samples.windows(2).map(|s| s[1] - s[0]).fold(f64::NEG_INFINITY, f64::max);

    Ok(Cep1Report {
        height: h,
        r: rv,
        pair,
        value: best.0,
        iterations,
        decreasing_f1: max_difference < 0.0,
        max_difference,
        grid_points: MONOTONE_GRID,
        tol,
    })
}
