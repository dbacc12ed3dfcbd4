//! Exact binary fractions.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// `numerator / 2^exponent`, kept with an odd numerator (or zero with
/// exponent 0).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    numerator: BigInt,
    exponent: u64,
}

impl Dyadic {
    pub fn new(numerator: BigInt, exponent: u64) -> Dyadic {
        let mut d = Dyadic { numerator, exponent };
        d.canonicalise();
        d
    }

    pub fn zero() -> Dyadic {
        Dyadic::new(BigInt::zero(), 0)
    }

    pub fn from_int(v: i64) -> Dyadic {
        Dyadic::new(BigInt::from(v), 0)
    }

    /// `2^-k`.
    pub fn pow2_neg(k: u64) -> Dyadic {
        Dyadic::new(BigInt::one(), k)
    }

    fn canonicalise(&mut self) {
        if self.numerator.is_zero() {
            self.exponent = 0;
            return;
        }
        let tz = self.numerator.trailing_zeros().unwrap_or(0).min(self.exponent);
        self.numerator >>= tz as usize;
        self.exponent -= tz;
    }

    pub fn numerator(&self) -> &BigInt {
        &self.numerator
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// Number of binary digits after the point in the canonical rendering.
    pub fn bit_length(&self) -> u64 {
        self.exponent
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.numerator.clone(), BigInt::one() << self.exponent as usize)
    }

    /// Exact conversion; fails unless the reduced denominator is a power of 2.
    pub fn from_rational(r: &BigRational) -> Result<Dyadic> {
        let den = r.denom();
        let k = den.trailing_zeros().unwrap_or(0);
        if (den >> k as usize) != BigInt::one() {
            return Err(Error::Config(format!("{r} is not dyadic")));
        }
        Ok(Dyadic::new(r.numer().clone(), k))
    }

    /// Largest multiple of `2^-bits` not above `r`.
    pub fn floor_rational(r: &BigRational, bits: u64) -> Dyadic {
        let scaled = r * BigRational::from_integer(BigInt::one() << bits as usize);
        Dyadic::new(scaled.floor().to_integer(), bits)
    }

    /// Smallest multiple of `2^-bits` not below `r`.
    pub fn ceil_rational(r: &BigRational, bits: u64) -> Dyadic {
        let scaled = r * BigRational::from_integer(BigInt::one() << bits as usize);
        Dyadic::new(scaled.ceil().to_integer(), bits)
    }

    fn aligned(&self, other: &Dyadic) -> (BigInt, BigInt, u64) {
        let e = self.exponent.max(other.exponent);
        (
            &self.numerator << (e - self.exponent) as usize,
            &other.numerator << (e - other.exponent) as usize,
            e,
        )
    }

    /// Product with another dyadic.
    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.numerator * &other.numerator, self.exponent + other.exponent)
    }

    /// Multiplies by `2^-k`.
    pub fn shr(&self, k: u64) -> Dyadic {
        Dyadic::new(self.numerator.clone(), self.exponent + k)
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(rhs);
        Dyadic::new(a + b, e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(rhs);
        Dyadic::new(a - b, e)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic::new(-self.numerator.clone(), self.exponent)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `0b` + integer part in binary, then `.` and exactly `exponent` fraction
/// digits when the value is not an integer; a leading `-` for negatives.
impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let neg = self.numerator.sign() == Sign::Minus;
        let mag = self.numerator.abs();
        let e = self.exponent as usize;
        let (int, frac) = mag.div_mod_floor(&(BigInt::one() << e));
        if neg {
            f.write_str("-")?;
        }
        write!(f, "0b{}", int.to_str_radix(2))?;
        if e > 0 {
            let bits = frac.to_str_radix(2);
            write!(f, ".{}{}", "0".repeat(e - bits.len()), bits)?;
        }
        Ok(())
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Dyadic> {
        let bad = || Error::Config(format!("cannot parse dyadic {s:?}"));
        let (neg, rest) = match s.trim().strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, s.trim()),
        };
        let body = rest.strip_prefix("0b").ok_or_else(bad)?;
        let (int, frac) = body.split_once('.').unwrap_or((body, ""));
        if int.is_empty() || !int.chars().chain(frac.chars()).all(|c| c == '0' || c == '1') {
            return Err(bad());
        }
        let digits = format!("{int}{frac}");
        let mag = BigInt::parse_bytes(digits.as_bytes(), 2).ok_or_else(bad)?;
        Ok(Dyadic::new(if neg { -mag } else { mag }, frac.len() as u64))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let d = Dyadic::new(BigInt::from(12), 5);
        assert_eq!(d.numerator(), &BigInt::from(3));
        assert_eq!(d.exponent(), 3);
        assert_eq!(Dyadic::new(BigInt::zero(), 9).exponent(), 0);
        assert_eq!(Dyadic::new(BigInt::from(8), 2), Dyadic::from_int(2));
    }

    #[test]
    fn rendering() {
        assert_eq!(Dyadic::pow2_neg(6).to_string(), "0b0.000001");
        assert_eq!(Dyadic::zero().to_string(), "0b0");
        assert_eq!(Dyadic::new(BigInt::from(-5), 1).to_string(), "-0b10.1");
        for s in ["0b0.0001", "0b101", "-0b0.011", "0b11.00101"] {
            assert_eq!(s.parse::<Dyadic>().unwrap().to_string(), s);
        }
        assert_eq!("0b0.0100".parse::<Dyadic>().unwrap().to_string(), "0b0.01");
        assert!("0.01".parse::<Dyadic>().is_err());
        assert!("0b0.012".parse::<Dyadic>().is_err());
    }

    #[test]
    fn arithmetic_and_order() {
        let a = Dyadic::pow2_neg(2);
        let b = Dyadic::pow2_neg(3);
        assert_eq!((&a + &b).to_string(), "0b0.011");
        assert_eq!((&b - &a).to_string(), "-0b0.001");
        assert!(b < a);
        assert_eq!(a.mul(&b), Dyadic::pow2_neg(5));
    }

    #[test]
    fn rational_conversions() {
        let third = BigRational::new(BigInt::from(1), BigInt::from(3));
        assert!(Dyadic::from_rational(&third).is_err());
        let lo = Dyadic::floor_rational(&third, 4);
        let hi = Dyadic::ceil_rational(&third, 4);
        assert_eq!(lo.to_string(), "0b0.0101");
        assert_eq!(hi.to_string(), "0b0.011");
        let q = BigRational::new(BigInt::from(3), BigInt::from(8));
        assert_eq!(Dyadic::from_rational(&q).unwrap().to_rational(), q);
    }
}
