//! Unconstrained IID maximisation and sampled shape properties of the
//! cost curves.

use serde::Serialize;
use serde_json::{json, Value};

use super::cep1::composite_cost;
use crate::error::{Error, Result};
use crate::poly::find_alpha;
use crate::poly::numeric::{cost_prob_f64, cost_prob_jet, shape_cost_prob};
use crate::scalar::float_json;
use crate::tree::{GateKind, TreeShape};

const DERIVATIVE_GRID: usize = 10_000;
const GOLDEN_MAX_ITERATIONS: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IidMaximum {
    pub x: f64,
    pub value: f64,
    /// Sign changes of the derivative over the sampling grid.
    pub sign_changes: usize,
    pub unimodal: bool,
    pub iterations: usize,
    pub tol: f64,
}

impl IidMaximum {
    pub fn to_json(&self) -> Value {
        json!({
            "x": float_json(self.x),
            "value": float_json(self.value),
            "sign_changes": self.sign_changes,
            "unimodal": self.unimodal,
            "iterations": self.iterations,
            "tol": float_json(self.tol),
        })
    }
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, usize) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut iterations = 0;
    while b - a > tol && iterations < GOLDEN_MAX_ITERATIONS {
        iterations += 1;
        if fc >= fd {
            b = d;
            (d, fd) = (c, fc);
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            (c, fc) = (d, fd);
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    (0.5 * (a + b), iterations)
}

/// Maximiser of the IID cost curve over `[0, 1]`.
///
/// The derivative is sampled on a 10^4 grid; each change of sign from
/// positive to negative brackets a local maximum refined by golden-section
/// search. Endpoints compete with the local maxima.
pub fn maximize_iid(shape: &TreeShape, tol: f64) -> Result<IidMaximum> {
    if !(tol > 0.0) {
        return Err(Error::input(format!("tolerance must be positive, got {tol}")));
    }
    let (gate, h) = (shape.root_gate(), shape.height());
    let cost = |x: f64| cost_prob_f64(gate, h, x).0;
    let xs: Vec<f64> = (0..=DERIVATIVE_GRID).map(|j| j as f64 / DERIVATIVE_GRID as f64).collect();
    let signs: Vec<(usize, f64)> = xs
        .iter()
        .enumerate()
        .map(|(j, &x)| (j, cost_prob_jet(gate, h, x).0.d1))
        .filter(|(_, d)| *d != 0.0)
        .collect();
    let mut sign_changes = 0;
    let mut peaks = Vec::new();
    for pair in signs.windows(2) {
        let ((i, di), (j, dj)) = (pair[0], pair[1]);
        if (di > 0.0) != (dj > 0.0) {
            sign_changes += 1;
            if di > 0.0 {
                peaks.push((xs[i], xs[j]));
            }
        }
    }
    let unimodal = sign_changes == 0 || (sign_changes == 1 && peaks.len() == 1);
    let mut best = (0.0, cost(0.0));
    if cost(1.0) > best.1 {
        best = (1.0, cost(1.0));
    }
    let mut iterations = 0;
    for (a, b) in peaks {
        let (x, it) = golden_max(cost, a, b, tol / 10.0);
        iterations += it;
        if cost(x) > best.1 {
            best = (x, cost(x));
        }
    }
    Ok(IidMaximum { x: best.0, value: best.1, sign_changes, unimodal, iterations, tol })
}

/// A sampled inequality: whether it held at every grid point and the
/// tightest margin seen.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShapeCheck {
    pub name: String,
    pub height: u32,
    pub holds: bool,
    pub points: usize,
    /// Smallest margin; positive when the inequality holds.
    pub worst_margin: f64,
    pub worst_at: f64,
}

impl ShapeCheck {
    fn from_margins(name: &str, height: u32, samples: impl Iterator<Item = (f64, f64)>) -> ShapeCheck {
        let mut check = ShapeCheck {
            name: name.to_string(),
            height,
            holds: true,
            points: 0,
            worst_margin: f64::INFINITY,
            worst_at: f64::NAN,
        };
        for (at, margin) in samples {
            check.points += 1;
            if margin < check.worst_margin {
                check.worst_margin = margin;
                check.worst_at = at;
            }
            check.holds &= margin > 0.0;
        }
        check
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "height": self.height,
            "holds": self.holds,
            "points": self.points,
            "worst_margin": float_json(self.worst_margin),
            "worst_at": float_json(self.worst_at),
        })
    }
}

fn require_parity(height: u32, odd: bool) -> Result<()> {
    if height == 0 || (height % 2 == 1) != odd {
        let kind = if odd { "odd" } else { "even" };
        return Err(Error::input(format!("need a positive {kind} height, got {height}")));
    }
    Ok(())
}

/// `c_or_h(x) > 2^{k+1}` for odd `h = 2k+1` at `points` grid points of
/// `(alpha + 1e-3, 1 - 1e-3)`.
pub fn odd_height_bound_check(height: u32, points: usize) -> Result<ShapeCheck> {
    require_parity(height, true)?;
    if points < 2 {
        return Err(Error::input("need at least two grid points"));
    }
    let alpha = find_alpha(1e-14)?.alpha;
    let (a, b) = (alpha + 1e-3, 1.0 - 1e-3);
    let bound = 2f64.powi(height as i32 / 2 + 1);
    let samples = (0..points).map(|j| {
        let x = a + (b - a) * j as f64 / (points - 1) as f64;
        (x, cost_prob_f64(GateKind::Or, height, x).0 - bound)
    });
    Ok(ShapeCheck::from_margins("odd_height_bound", height, samples))
}

/// Negative second differences of `c(z) = c_and_h(p_and_h^{-1}(z))` on the
/// grid `j / grid` for even `h`.
pub fn even_concavity_check(height: u32, grid: usize) -> Result<ShapeCheck> {
    require_parity(height, false)?;
    if grid < 2 {
        return Err(Error::input("grid must be at least 2"));
    }
    let c: Vec<f64> =
        (0..=grid).map(|j| composite_cost(GateKind::And, height, j as f64 / grid as f64)).collect();
    let samples = (1..grid).map(|j| (j as f64 / grid as f64, -(c[j - 1] - 2.0 * c[j] + c[j + 1])));
    Ok(ShapeCheck::from_margins("even_concavity", height, samples))
}

/// `c(z) > c(0) = c(1) = 2^k` at interior grid points for even `h = 2k`,
/// with `c` as in [`even_concavity_check`].
pub fn even_interior_dominance_check(height: u32, grid: usize) -> Result<ShapeCheck> {
    require_parity(height, false)?;
    if grid < 2 {
        return Err(Error::input("grid must be at least 2"));
    }
    let base = 2f64.powi(height as i32 / 2);
    let shape = TreeShape::and_or(height)?;
    let ends_ok = [0.0, 1.0].iter().all(|&x| (shape_cost_prob(&shape, x).0 - base).abs() < 1e-12);
    let samples = (1..grid).map(|j| {
        let z = j as f64 / grid as f64;
        (z, composite_cost(GateKind::And, height, z) - base)
    });
    let mut check = ShapeCheck::from_margins("even_interior_dominance", height, samples);
    check.holds &= ends_ok;
    Ok(check)
}
