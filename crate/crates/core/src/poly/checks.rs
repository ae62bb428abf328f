//! Exact identities and monotonicity certificates for the cost/probability
//! families, and the root of the odd-height threshold polynomial.

use num_rational::BigRational;
use serde::Serialize;

use super::certify::{certify_negative, certify_positive, count_roots_unit, CountMethod, SignCertificate};
use super::families::cost_prob;
use super::ratpoly::RatPoly;
use crate::error::{Error, Result};
use crate::tree::GateKind;

/// Formal derivative.
pub fn derivative(p: &RatPoly) -> RatPoly {
    p.derivative()
}

/// Checks that applying the one-level recursion twice to the OR-rooted
/// height-`h` family gives the closed two-level form
/// `c' = (2 - p)(-p^2 + 2p + 1) c`, `p' = p^2 (p - 2)^2`.
pub fn two_level_consistency(h: u32) -> Result<bool> {
    let base = cost_prob(GateKind::Or, h)?;
    let lifted = cost_prob(GateKind::Or, h + 2)?;
    // g(y) = (2 - y)(-y^2 + 2y + 1), q(y) = y^2 (y - 2)^2
    let g = &RatPoly::from_ints(&[2, -1]) * &RatPoly::from_ints(&[1, 2, -1]);
    let q = &RatPoly::from_ints(&[0, 0, 1]) * &RatPoly::from_ints(&[4, -4, 1]);
    let cost = &g.compose(&base.prob) * &base.cost;
    let prob = q.compose(&base.prob);
    Ok(cost == lifted.cost && prob == lifted.prob)
}

/// `c_or / p_or` strictly decreasing on (0, 1), certified through the sign of
/// the numerator of its derivative, `c' p - c p'`.
pub fn lemma1_certificate(h: u32, method: CountMethod) -> Result<SignCertificate> {
    let f = cost_prob(GateKind::Or, h)?;
    Ok(certify_negative(&ratio_derivative_numerator(&f.cost, &f.prob), method))
}

/// `c_or' / p_or'` strictly decreasing on (0, 1).
pub fn lemma2_certificate(h: u32, method: CountMethod) -> Result<SignCertificate> {
    let f = cost_prob(GateKind::Or, h)?;
    let n = ratio_derivative_numerator(&f.cost.derivative(), &f.prob.derivative());
    Ok(certify_negative(&n, method))
}

/// `p_or' > 0` on (0, 1).
pub fn prob_increasing_certificate(h: u32, method: CountMethod) -> Result<SignCertificate> {
    let f = cost_prob(GateKind::Or, h)?;
    Ok(certify_positive(&f.prob.derivative(), method))
}

/// Numerator of `(a / b)'`.
pub fn ratio_derivative_numerator(a: &RatPoly, b: &RatPoly) -> RatPoly {
    &(&a.derivative() * b) - &(a * &b.derivative())
}

/// The AND-rooted family seen through the dual tree:
/// `c_and(x) / (1 - p_and(x)) = c_or(1 - x) / p_or(1 - x)` and the same for
/// first derivatives, both as cross-multiplied polynomial identities. The
/// unreduced ratios are additionally compared at the interior points
/// `i / grid`.
pub fn duality_check(h: u32, grid: u32) -> Result<bool> {
    if grid < 2 {
        return Err(Error::input(format!("grid must be at least 2, got {grid}")));
    }
    let and = cost_prob(GateKind::And, h)?;
    let or = cost_prob(GateKind::Or, h)?;
    let one = RatPoly::one();
    let not_p_and = &one - &and.prob;
    let c_or_r = or.cost.reflect();
    let p_or_r = or.prob.reflect();
    let ratio_ok = &and.cost * &p_or_r == &c_or_r * &not_p_and;

    // derivatives at 1 - x, i.e. c_or'(1 - x), not d/dx of c_or(1 - x)
    let dc_or_r = or.cost.derivative().reflect();
    let dp_or_r = or.prob.derivative().reflect();
    let primed_ok = &and.cost.derivative() * &dp_or_r == &dc_or_r * &not_p_and.derivative();

    let sampled_ok = (1..grid).all(|i| {
        let x = BigRational::new(i.into(), grid.into());
        let lhs_den = not_p_and.eval(&x);
        let rhs_den = p_or_r.eval(&x);
        if num_traits::Zero::is_zero(&lhs_den) || num_traits::Zero::is_zero(&rhs_den) {
            return true;
        }
        and.cost.eval(&x) / lhs_den == c_or_r.eval(&x) / rhs_den
    });
    Ok(ratio_ok && primed_ok && sampled_ok)
}

/// `c_and2(t) (1 + p_and2(t)) = (1 + t)(t^2 (1 - t^2)(3 - t^2) + 2)`.
pub fn identity38_check() -> bool {
    let f = cost_prob(GateKind::And, 2).expect("height 2 is in range");
    let lhs = &f.cost * &(&RatPoly::one() + &f.prob);
    let t2 = RatPoly::from_ints(&[0, 0, 1]);
    let inner = &(&(&t2 * &RatPoly::from_ints(&[1, 0, -1])) * &RatPoly::from_ints(&[3, 0, -1]))
        + &RatPoly::from_ints(&[2]);
    let rhs = &RatPoly::from_ints(&[1, 1]) * &inner;
    lhs == rhs
}

/// `f(x) = x^6 + 2x^5 - 2x^4 - 6x^3 - 3x^2 + 2`.
pub fn alpha_polynomial() -> RatPoly {
    RatPoly::from_ints(&[2, 0, -3, -6, -2, 2, 1])
}

/// `c_or3(x) - 4 = (x - 1) f(x)`.
pub fn factorization35_check() -> bool {
    let c3 = cost_prob(GateKind::Or, 3).expect("height 3 is in range").cost;
    let lhs = &c3 - &RatPoly::from_ints(&[4]);
    lhs == &RatPoly::from_ints(&[-1, 1]) * &alpha_polynomial()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaReport {
    pub alpha: f64,
    /// Final bracket with `f(lo) > 0 > f(hi)`.
    pub lo: f64,
    pub hi: f64,
    /// Number of roots of `f` in (0, 1) by Sturm count.
    pub roots_in_interval: usize,
}

/// Root of `f` in (0, 1) by bisection to bracket width `tol`, with a Sturm
/// count confirming it is the only one.
pub fn find_alpha(tol: f64) -> Result<AlphaReport> {
    if !(tol > 0.0) {
        return Err(Error::input(format!("tolerance must be positive, got {tol}")));
    }
    let f = alpha_polynomial();
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f.eval_f64(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let roots = count_roots_unit(&f, CountMethod::Sturm).unwrap_or(usize::MAX);
    Ok(AlphaReport { alpha: 0.5 * (lo + hi), lo, hi, roots_in_interval: roots })
}
