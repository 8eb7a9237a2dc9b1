use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{fmt_rational, powi, to_f64, Rational};
use crate::error::{Error, Result};

/// Closed rational interval `[lo, hi]` certified to contain a real number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: Rational,
    pub hi: Rational,
}

impl Enclosure {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "enclosure with lo > hi");
        Enclosure { lo, hi }
    }

    pub fn exact(v: Rational) -> Self {
        Enclosure {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(BigInt::from(2))
    }

    pub fn contains(&self, v: &Rational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Largest distance from `v` to any point of the interval.
    pub fn max_distance(&self, v: &Rational) -> Rational {
        let a = (&self.lo - v).abs();
        let b = (&self.hi - v).abs();
        if a > b {
            a
        } else {
            b
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let a = &self.lo * r;
        let b = &self.hi * r;
        if a <= b {
            Enclosure::new(a, b)
        } else {
            Enclosure::new(b, a)
        }
    }

    pub fn mul(&self, other: &Enclosure) -> Self {
        let c = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Enclosure::new(lo, hi)
    }

    pub fn recip(&self) -> Result<Self> {
        if self.contains_zero() {
            return Err(Error::Domain("reciprocal of an enclosure containing 0".into()));
        }
        Ok(Enclosure::new(self.hi.recip(), self.lo.recip()))
    }

    pub fn div(&self, other: &Enclosure) -> Result<Self> {
        Ok(self.mul(&other.recip()?))
    }

    /// Widens the end points outward to multiples of `2^-bits`.
    pub fn round_outward(&self, bits: u32) -> Self {
        if self.is_exact() && self.lo.denom().bits() <= u64::from(bits) {
            return self.clone();
        }
        let scale = Rational::from_integer(BigInt::one() << bits);
        let lo = (&self.lo * &scale).floor() / &scale;
        let hi = (&self.hi * &scale).ceil() / &scale;
        Enclosure::new(lo, hi)
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.mid())
    }

    pub fn fmt_pair(&self) -> (String, String) {
        (fmt_rational(&self.lo), fmt_rational(&self.hi))
    }
}

/// `base^exponent` for rational `base > 0` and rational exponent, enclosed in
/// an interval of relative width about `2^-bits`.
pub fn pow_rational(base: &Rational, exponent: &Rational, bits: u32) -> Result<Enclosure> {
    if !base.is_positive() {
        return Err(Error::Domain(format!(
            "real power of non-positive base {}",
            fmt_rational(base)
        )));
    }
    let p = exponent.numer();
    let s = exponent.denom();
    let p_i64: i64 = p
        .try_into()
        .map_err(|_| Error::Domain("exponent numerator too large".into()))?;
    let s_u32: u32 = s
        .try_into()
        .map_err(|_| Error::Domain("exponent denominator too large".into()))?;
    let y = powi(base, p_i64);
    if s_u32 == 1 {
        return Ok(Enclosure::exact(y));
    }
    // keep `bits` significant bits regardless of the magnitude of y
    let mag = y.numer().bits() as i64 - y.denom().bits() as i64;
    let shift = (bits as i64 - mag / s_u32 as i64).max(bits as i64).max(8) as usize;
    let scaled = (&y * Rational::from_integer(BigInt::one() << (shift * s_u32 as usize))).floor();
    let n = scaled.to_integer();
    let r = n.nth_root(s_u32);
    let den = Rational::from_integer(BigInt::one() << shift);
    let lo = Rational::from_integer(r.clone()) / &den;
    let hi = Rational::from_integer(r + BigInt::one()) / &den;
    debug_assert!(!lo.is_zero() || y.is_zero() || shift > 0);
    Ok(Enclosure::new(lo, hi))
}
