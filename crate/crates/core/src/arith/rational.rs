use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Nonnegative fraction over `u128`, always in lowest terms.
///
/// Every operation is exact; anything that would leave the 128-bit range
/// returns [`Error::Overflow`] instead of wrapping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExactRational {
    num: u128,
    den: u128,
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Full 256-bit product as (high, low).
fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    const MASK: u128 = u64::MAX as u128;
    let (a1, a0) = (a >> 64, a & MASK);
    let (b1, b0) = (b >> 64, b & MASK);
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;
    let mid = (p00 >> 64) + (p01 & MASK) + (p10 & MASK);
    let lo = (p00 & MASK) | (mid << 64);
    let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (hi, lo)
}

impl ExactRational {
    pub const ZERO: Self = Self { num: 0, den: 1 };
    pub const ONE: Self = Self { num: 1, den: 1 };

    pub fn new(num: u128, den: u128) -> Result<Self> {
        if den == 0 {
            return Err(Error::Domain("zero denominator".into()));
        }
        let g = gcd(num, den);
        Ok(Self {
            num: num / g,
            den: den / g,
        })
    }

    pub fn from_integer(n: u128) -> Self {
        Self { num: n, den: 1 }
    }

    pub fn numer(&self) -> u128 {
        self.num
    }

    pub fn denom(&self) -> u128 {
        self.den
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        // cross-reduce first so intermediate products stay small
        let g1 = gcd(self.num, rhs.den);
        let g2 = gcd(rhs.num, self.den);
        let num = (self.num / g1)
            .checked_mul(rhs.num / g2)
            .ok_or(Error::Overflow)?;
        let den = (self.den / g2)
            .checked_mul(rhs.den / g1)
            .ok_or(Error::Overflow)?;
        Ok(Self { num, den })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        self.checked_mul(&rhs.recip()?)
    }

    pub fn recip(&self) -> Result<Self> {
        if self.num == 0 {
            return Err(Error::Domain("reciprocal of zero".into()));
        }
        Ok(Self {
            num: self.den,
            den: self.num,
        })
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        let g = gcd(self.den, rhs.den);
        let l = (self.den / g).checked_mul(rhs.den).ok_or(Error::Overflow)?;
        let a = self
            .num
            .checked_mul(l / self.den)
            .ok_or(Error::Overflow)?;
        let b = rhs.num.checked_mul(l / rhs.den).ok_or(Error::Overflow)?;
        Self::new(a.checked_add(b).ok_or(Error::Overflow)?, l)
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl Ord for ExactRational {
    fn cmp(&self, other: &Self) -> Ordering {
        mul_wide(self.num, other.den).cmp(&mul_wide(other.num, self.den))
    }
}

impl PartialOrd for ExactRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(a: u128, b: u128) -> ExactRational {
        ExactRational::new(a, b).unwrap()
    }

    #[test]
    fn reduces_and_orders() {
        assert_eq!(r(6, 8), r(3, 4));
        assert!(r(2, 3) < r(3, 4));
        assert_eq!(r(3, 4).checked_mul(&r(5, 6)).unwrap(), r(5, 8));
        assert_eq!(r(1, 3).checked_add(&r(1, 6)).unwrap(), r(1, 2));
        assert_eq!(r(5, 8).recip().unwrap(), r(8, 5));
        assert_eq!(r(0, 7), ExactRational::ZERO);
        assert!(ExactRational::new(1, 0).is_err());
        assert!(ExactRational::ZERO.recip().is_err());
    }

    #[test]
    fn overflow_is_reported() {
        let big = ExactRational::from_integer(u128::MAX / 2);
        assert!(matches!(big.checked_mul(&r(3, 1)), Err(Error::Overflow)));
        // comparison never overflows even when cross products exceed 128 bits
        let a = r(u128::MAX - 1, u128::MAX);
        let b = r(u128::MAX - 2, u128::MAX - 1);
        assert!(b < a);
    }

    #[test]
    fn wide_multiply() {
        assert_eq!(mul_wide(u128::MAX, u128::MAX), (u128::MAX - 1, 1));
        assert_eq!(mul_wide(1 << 64, 1 << 64), (1, 0));
        assert_eq!(mul_wide(12345, 678910), (0, 12345 * 678910));
    }

    proptest! {
        #[test]
        fn order_matches_cross_multiplication(a in 0u64.., b in 1u64.., c in 0u64.., d in 1u64..) {
            let x = r(a.into(), b.into());
            let y = r(c.into(), d.into());
            let lhs = u128::from(a) * u128::from(d);
            let rhs = u128::from(c) * u128::from(b);
            prop_assert_eq!(x.cmp(&y), lhs.cmp(&rhs));
        }

        #[test]
        fn to_f64_is_close(a in 0u64.., b in 1u64..) {
            let x = r(a.into(), b.into());
            let exact = a as f64 / b as f64;
            prop_assert!((x.to_f64() - exact).abs() <= 4.0 * f64::EPSILON * exact.abs().max(f64::MIN_POSITIVE));
        }
    }
}
