//! Exact real-root counting on the open unit interval and the strict sign
//! certificates built on it.
//!
//! Two independent exact counters are provided:
//!
//! * Sturm sequences (primitive pseudo-remainder sequence over the integers),
//!   the reference method;
//! * Descartes' rule of signs with dyadic bisection (Vincent-Collins-Akritas),
//!   which needs only Taylor shifts and scales to the degree-2000 polynomials
//!   that appear at height 10, where remainder sequences are out of reach.
//!
//! Both operate on integer polynomials that do not vanish at 0 or 1.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::ratpoly::RatPoly;

/// Largest degree certified with Sturm sequences under [`CountMethod::Auto`].
pub const STURM_MAX_DEGREE: usize = 300;

/// Dyadic bisection depth at which the Descartes counter gives up.
const MAX_BISECTION_DEPTH: u32 = 96;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMethod {
    Sturm,
    Descartes,
    /// Sturm up to [`STURM_MAX_DEGREE`], Descartes above.
    Auto,
}

impl CountMethod {
    fn resolve(self, degree: usize) -> CountMethod {
        match self {
            CountMethod::Auto if degree <= STURM_MAX_DEGREE => CountMethod::Sturm,
            CountMethod::Auto => CountMethod::Descartes,
            m => m,
        }
    }
}

/// Outcome of certifying `P(x) < 0` (or `> 0`) for all `0 < x < 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignCertificate {
    pub holds: bool,
    pub method: CountMethod,
    /// Degree of the polynomial under test.
    pub degree: usize,
    /// Distinct real roots strictly inside (0, 1); `None` when the counter
    /// could not resolve them.
    pub roots_in_interval: Option<usize>,
    /// Sign of the polynomial at x = 1/2.
    pub midpoint_sign: i8,
    /// An interval containing an offending point when the certificate fails.
    #[serde(serialize_with = "ser_interval")]
    pub offending: Option<(BigRational, BigRational)>,
}

fn ser_interval<S: serde::Serializer>(
    iv: &Option<(BigRational, BigRational)>,
    s: S,
) -> Result<S::Ok, S::Error> {
    use crate::scalar::rational_string;
    match iv {
        None => s.serialize_none(),
        Some((a, b)) => s.collect_seq([rational_string(a), rational_string(b)]),
    }
}

/// Certifies `P(x) < 0` on (0, 1): no root inside plus a negative sample.
pub fn certify_negative(p: &RatPoly, method: CountMethod) -> SignCertificate {
    let degree = p.degree();
    let half = BigRational::new(1.into(), 2.into());
    let midpoint_sign = sign_of(&p.eval(&half));
    let method = method.resolve(degree);
    if p.is_zero() {
        return SignCertificate {
            holds: false,
            method,
            degree,
            roots_in_interval: None,
            midpoint_sign,
            offending: Some((BigRational::zero(), BigRational::one())),
        };
    }
    let core = strip_endpoint_roots(p.primitive_integer());
    let (roots, isolating) = match method {
        CountMethod::Sturm => {
            let seq = sturm_sequence(&core);
            let n = sturm_count_unit(&seq);
            let iv = (n > 0).then(|| localize_with_sturm(&seq));
            (Some(n), iv)
        }
        _ => match descartes_isolate_unit(&core) {
            Ok(ivs) => {
                let first = ivs.first().cloned();
                (Some(ivs.len()), first)
            }
            Err(unresolved) => (None, Some(unresolved)),
        },
    };
    let holds = roots == Some(0) && midpoint_sign < 0;
    let offending = if holds {
        None
    } else if let Some(iv) = isolating {
        Some(iv)
    } else {
        Some((half.clone(), half))
    };
    SignCertificate { holds, method, degree, roots_in_interval: roots, midpoint_sign, offending }
}

/// Certifies `P(x) > 0` on (0, 1).
pub fn certify_positive(p: &RatPoly, method: CountMethod) -> SignCertificate {
    let mut cert = certify_negative(&-p, method);
    cert.midpoint_sign = -cert.midpoint_sign;
    cert
}

/// Number of distinct real roots of `p` strictly inside (0, 1).
pub fn count_roots_unit(p: &RatPoly, method: CountMethod) -> Option<usize> {
    if p.is_zero() {
        return None;
    }
    let core = strip_endpoint_roots(p.primitive_integer());
    match method.resolve(core.len().saturating_sub(1)) {
        CountMethod::Sturm => Some(sturm_count_unit(&sturm_sequence(&core))),
        _ => descartes_isolate_unit(&core).ok().map(|v| v.len()),
    }
}

fn sign_of(q: &BigRational) -> i8 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

fn trim(p: &mut Vec<BigInt>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

/// Divides out every factor `x` and `x - 1`.
fn strip_endpoint_roots(mut p: Vec<BigInt>) -> Vec<BigInt> {
    trim(&mut p);
    let lead_zeros = p.iter().take_while(|c| c.is_zero()).count();
    p.drain(..lead_zeros);
    while p.len() > 1 && p.iter().sum::<BigInt>().is_zero() {
        p = divide_by_x_minus_one(&p);
    }
    p
}

/// Exact synthetic division by `x - 1`; the caller guarantees `p(1) = 0`.
fn divide_by_x_minus_one(p: &[BigInt]) -> Vec<BigInt> {
    let n = p.len() - 1;
    let mut q = vec![BigInt::zero(); n];
    let mut carry = BigInt::zero();
    for i in (1..=n).rev() {
        carry += &p[i];
        q[i - 1] = carry.clone();
    }
    q
}

fn sign_variations<'a>(signs: impl Iterator<Item = Sign> + 'a) -> usize {
    let mut last = Sign::NoSign;
    let mut count = 0;
    for s in signs {
        if s == Sign::NoSign {
            continue;
        }
        if last != Sign::NoSign && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

// ---------------------------------------------------------------- Sturm ----

/// The Sturm chain `p, p', -rem(p, p'), ...`, each member divided by its
/// positive content.
pub(crate) fn sturm_sequence(p: &[BigInt]) -> Vec<Vec<BigInt>> {
    let mut seq = vec![p.to_vec()];
    let dp: Vec<BigInt> =
        p.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect();
    let mut dp = dp;
    trim(&mut dp);
    if dp.is_empty() {
        return seq;
    }
    seq.push(make_primitive(dp));
    loop {
        let n = seq.len();
        let (a, b) = (&seq[n - 2], &seq[n - 1]);
        if b.len() <= 1 {
            break;
        }
        let (mut rem, sign) = pseudo_remainder(a, b);
        if rem.is_empty() {
            break;
        }
        // true remainder = rem / (lc(b)^steps): flip when that scale is negative,
        // then negate for the Sturm convention
        if sign > 0 {
            for c in rem.iter_mut() {
                *c = -&*c;
            }
        }
        seq.push(make_primitive(rem));
    }
    seq
}

fn make_primitive(p: Vec<BigInt>) -> Vec<BigInt> {
    let g = p.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if g.is_zero() || g.is_one() {
        p
    } else {
        p.into_iter().map(|c| c / &g).collect()
    }
}

/// Returns `R` with `lc(b)^k * a = Q * b + R` and the sign of `lc(b)^k`.
fn pseudo_remainder(a: &[BigInt], b: &[BigInt]) -> (Vec<BigInt>, i8) {
    let mut r = a.to_vec();
    trim(&mut r);
    let lb = b.last().expect("nonzero divisor").clone();
    let db = b.len() - 1;
    let mut steps = 0u32;
    while !r.is_empty() && r.len() > db {
        let k = r.len() - 1 - db;
        let lr = r.last().unwrap().clone();
        for c in r.iter_mut() {
            *c *= &lb;
        }
        for (j, bj) in b.iter().enumerate() {
            r[k + j] -= &lr * bj;
        }
        trim(&mut r);
        steps += 1;
    }
    let sign = if lb.is_negative() && steps % 2 == 1 { -1 } else { 1 };
    (r, sign)
}

/// Sign of `p(num/den)` for `den > 0`, evaluated homogeneously.
fn sign_at(p: &[BigInt], num: &BigInt, den: &BigInt) -> Sign {
    if p.is_empty() {
        return Sign::NoSign;
    }
    let mut acc = BigInt::zero();
    let mut den_pow = BigInt::one();
    for c in p.iter().rev() {
        // c_{n-k} picks up den^k
        acc = acc * num + c * &den_pow;
        den_pow *= den;
    }
    acc.sign()
}

fn variations_at(seq: &[Vec<BigInt>], num: &BigInt, den: &BigInt) -> usize {
    sign_variations(seq.iter().map(|p| sign_at(p, num, den)))
}

/// Distinct roots in (0, 1); the chain's base must not vanish at 0 or 1.
fn sturm_count_unit(seq: &[Vec<BigInt>]) -> usize {
    let at0 = sign_variations(seq.iter().map(|p| p.first().map_or(Sign::NoSign, |c| c.sign())));
    let at1 = sign_variations(seq.iter().map(|p| p.iter().sum::<BigInt>().sign()));
    at0.saturating_sub(at1)
}

/// Bisects with Sturm counts to a width-2^-20 interval holding a root.
fn localize_with_sturm(seq: &[Vec<BigInt>]) -> (BigRational, BigRational) {
    let (mut lo, mut hi) = (BigInt::zero(), BigInt::one());
    let mut den = BigInt::one();
    let count = |a: &BigInt, b: &BigInt, d: &BigInt| {
        let va = variations_at(seq, a, d);
        let vb = variations_at(seq, b, d);
        va.saturating_sub(vb)
    };
    for _ in 0..20 {
        lo *= 2;
        hi *= 2;
        den *= 2;
        let mid = (&lo + &hi) / 2;
        if sign_at(&seq[0], &mid, &den) == Sign::NoSign {
            let q = BigRational::new(mid, den);
            return (q.clone(), q);
        }
        if count(&lo, &mid, &den) > 0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (BigRational::new(lo, den.clone()), BigRational::new(hi, den))
}

// ------------------------------------------------------------- Descartes ----

/// In-place `p(x) -> p(x + 1)`.
fn taylor_shift_one(p: &mut [BigInt]) {
    let n = p.len();
    for i in 0..n.saturating_sub(1) {
        for j in (i..n - 1).rev() {
            let next = p[j + 1].clone();
            p[j] += next;
        }
    }
}

/// Sign variations of `(1 + t)^n p(1 / (1 + t))`, an upper bound on the
/// number of roots in (0, 1) with the same parity.
fn descartes_bound_unit(p: &[BigInt]) -> usize {
    let mut q: Vec<BigInt> = p.iter().rev().cloned().collect();
    taylor_shift_one(&mut q);
    sign_variations(q.iter().map(|c| c.sign()))
}

fn remove_power_of_two(p: &mut [BigInt]) {
    let tz = p.iter().filter(|c| !c.is_zero()).filter_map(|c| c.trailing_zeros()).min();
    if let Some(tz) = tz.filter(|&t| t > 0) {
        for c in p.iter_mut() {
            *c >>= tz as usize;
        }
    }
}

/// Isolating intervals for the roots in (0, 1).
///
/// `Err` carries an interval the bisection could not resolve (a multiple root
/// or a cluster closer than the depth limit).
fn descartes_isolate_unit(p: &[BigInt]) -> Result<Vec<(BigRational, BigRational)>, (BigRational, BigRational)> {
    let mut out = Vec::new();
    // work items: polynomial on (0,1) representing the dyadic interval [k/2^d, (k+1)/2^d]
    let mut stack = vec![(p.to_vec(), BigInt::zero(), 0u32)];
    while let Some((poly, k, d)) = stack.pop() {
        let den = BigInt::one() << d as usize;
        let interval = || (BigRational::new(k.clone(), den.clone()), BigRational::new(&k + 1, den.clone()));
        let v = descartes_bound_unit(&poly);
        if v == 0 {
            continue;
        }
        if v == 1 {
            out.push(interval());
            continue;
        }
        if d >= MAX_BISECTION_DEPTH {
            return Err(interval());
        }
        let n = poly.len() - 1;
        // left half: 2^n p(x / 2)
        let mut left: Vec<BigInt> =
            poly.iter().enumerate().map(|(i, c)| c << (n - i)).collect();
        let mut right = left.clone();
        taylor_shift_one(&mut right);
        // right(0) = left(1) = 2^n p(1/2)
        if right[0].is_zero() {
            let mid = BigRational::new(2 * &k + 1, &den * 2);
            out.push((mid.clone(), mid));
            left = divide_by_x_minus_one(&left);
            right.remove(0);
        }
        remove_power_of_two(&mut left);
        remove_power_of_two(&mut right);
        stack.push((right, 2 * &k + 1, d + 1));
        stack.push((left, 2 * &k, d + 1));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}
