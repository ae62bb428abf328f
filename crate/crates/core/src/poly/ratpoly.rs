use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::scalar::{parse_rational, rational_string};

/// Univariate polynomial with exact rational coefficients, lowest degree first.
///
/// The highest stored coefficient is never zero; the zero polynomial has no
/// coefficients at all.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn from_bigints(coeffs: Vec<BigInt>) -> Self {
        Self::new(coeffs.into_iter().map(BigRational::from_integer).collect())
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::from_ints(&[1])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Horner evaluation in floating point. Only sensible for low degrees or
    /// small coefficients; large family members should be evaluated through
    /// [`crate::poly::numeric`] instead.
    pub fn eval_f64(&self, x: f64) -> f64 {
        use crate::scalar::ratio_to_f64;
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + ratio_to_f64(c))
    }

    pub fn derivative(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(i.into()))
                .collect(),
        )
    }

    pub fn scale(&self, k: &BigRational) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// `self(inner(x))` by Horner's rule.
    pub fn compose(&self, inner: &RatPoly) -> RatPoly {
        self.coeffs
            .iter()
            .rev()
            .fold(RatPoly::zero(), |acc, c| &(&acc * inner) + &RatPoly::constant(c.clone()))
    }

    /// `self(1 - x)`.
    pub fn reflect(&self) -> RatPoly {
        self.compose(&RatPoly::from_ints(&[1, -1]))
    }

    /// Splits into integer numerators over one positive common denominator.
    pub fn to_integer_parts(&self) -> (Vec<BigInt>, BigInt) {
        let den = self.coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let nums = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        (nums, den)
    }

    /// Integer polynomial with the same roots and the same sign as `self`,
    /// coefficients divided by their gcd.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let (nums, _) = self.to_integer_parts();
        let g = nums.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        if g.is_zero() || g.is_one() {
            nums
        } else {
            nums.into_iter().map(|c| c / &g).collect()
        }
    }
}

/// Schoolbook product of integer coefficient vectors.
pub(crate) fn int_convolve(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

impl Add for &RatPoly {
    type Output = RatPoly;

    fn add(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = BigRational::zero();
        RatPoly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;

    fn sub(self, rhs: &RatPoly) -> RatPoly {
        self + &(-rhs)
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;

    fn neg(self) -> RatPoly {
        RatPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;

    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        // multiply over the integers, then divide by the product of denominators
        let (a, da) = self.to_integer_parts();
        let (b, db) = rhs.to_integer_parts();
        let den = da * db;
        let prod = int_convolve(&a, &b);
        if den.is_one() {
            RatPoly::from_bigints(prod)
        } else {
            RatPoly::new(prod.into_iter().map(|c| BigRational::new(c, den.clone())).collect())
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RatPoly {
            type Output = RatPoly;
            fn $m(self, rhs: RatPoly) -> RatPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatPoly({self})")
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            let show_coeff = !mag.is_one() || i == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for RatPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(rational_string))
    }
}

impl<'de> Deserialize<'de> for RatPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect::<Result<Vec<_>, _>>()
            .map(RatPoly::new)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn derivative_examples() {
        let p = RatPoly::from_ints(&[0, 0, 4, -4, 1]);
        assert_eq!(p.derivative(), RatPoly::from_ints(&[0, 8, -12, 4]));
        assert_eq!(RatPoly::from_ints(&[2]).derivative(), RatPoly::zero());
        let c = RatPoly::from_ints(&[2, 3, -4, 1]);
        assert_eq!(c.derivative(), RatPoly::from_ints(&[3, -8, 3]));
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        let p = RatPoly::from_ints(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), 1);
        assert!(RatPoly::from_ints(&[0, 0]).is_zero());
        assert_eq!(p.leading(), q(2, 1));
    }

    #[test]
    fn composition_and_reflection() {
        // (1 + x) at 1 - x is 2 - x
        assert_eq!(RatPoly::from_ints(&[1, 1]).reflect(), RatPoly::from_ints(&[2, -1]));
        let sq = RatPoly::from_ints(&[0, 0, 1]);
        let shifted = RatPoly::from_ints(&[1, 1]);
        assert_eq!(sq.compose(&shifted), RatPoly::from_ints(&[1, 2, 1]));
    }

    #[test]
    fn rational_product_and_eval() {
        let p = RatPoly::new(vec![q(1, 2), q(1, 3)]);
        let sq = &p * &p;
        assert_eq!(sq, RatPoly::new(vec![q(1, 4), q(1, 3), q(1, 9)]));
        assert_eq!(sq.eval(&q(3, 1)), q(9, 4));
        assert!((sq.eval_f64(3.0) - 2.25).abs() < 1e-12);
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(RatPoly::from_ints(&[2, 3, -4, 1]).to_string(), "x^3 - 4x^2 + 3x + 2");
        assert_eq!(RatPoly::zero().to_string(), "0");
        assert_eq!(RatPoly::from_ints(&[0, -1]).to_string(), "-x");
    }

    #[test]
    fn json_is_array_of_num_den_strings() {
        let p = RatPoly::from_ints(&[2, 3, -4, 1]);
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"["2/1","3/1","-4/1","1/1"]"#);
    }

    fn small_poly() -> impl Strategy<Value = RatPoly> {
        prop::collection::vec((-20i64..20, 1i64..6), 0..6).prop_map(|cs| {
            RatPoly::new(cs.into_iter().map(|(n, d)| q(n, d)).collect())
        })
    }

    proptest! {
        #[test]
        fn product_evaluates_pointwise(a in small_poly(), b in small_poly(), n in -5i64..5, d in 1i64..4) {
            let x = q(n, d);
            prop_assert_eq!((&a * &b).eval(&x), a.eval(&x) * b.eval(&x));
            prop_assert_eq!((&a + &b).eval(&x), a.eval(&x) + b.eval(&x));
            prop_assert_eq!((&a - &b).eval(&x), a.eval(&x) - b.eval(&x));
            prop_assert_eq!(a.compose(&b).eval(&x), a.eval(&b.eval(&x)));
        }

        #[test]
        fn product_rule(a in small_poly(), b in small_poly()) {
            let lhs = (&a * &b).derivative();
            let rhs = &(&a.derivative() * &b) + &(&a * &b.derivative());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn json_round_trip(a in small_poly()) {
            let s = serde_json::to_string(&a).unwrap();
            let back: RatPoly = serde_json::from_str(&s).unwrap();
            prop_assert_eq!(back, a);
        }

        #[test]
        fn primitive_integer_keeps_sign(a in small_poly(), n in -5i64..5) {
            let ints = a.primitive_integer();
            let p = RatPoly::from_bigints(ints);
            let x = q(n, 1);
            prop_assert_eq!(p.eval(&x).signum(), a.eval(&x).signum());
        }
    }
}
