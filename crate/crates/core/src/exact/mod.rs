//! Exact scalar arithmetic.
//!
//! Every lattice quantity in this crate lives in the rationals. Irrational
//! constants (infinite q-products, real powers) are carried as certified
//! [`Enclosure`]s with rational end points.

mod enclosure;
mod poly;
mod ratfunc;

pub use enclosure::{pow_rational, Enclosure};
pub use poly::{interpolate, Poly};
pub use ratfunc::RatFunc;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Polynomial in the sinusoidal coordinate with exact rational coefficients.
pub type EtaPolynomial = Poly<Rational>;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `r^e` for any integer exponent. Panics on `0^e` with `e < 0`.
pub fn powi(r: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow(r.clone(), e as usize)
    } else {
        assert!(!r.is_zero(), "zero raised to a negative power");
        num_traits::pow(r.recip(), (-e) as usize)
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Decimal-free `"p/q"` (or `"p"` for integers).
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p/q"`, `"p"`, a plain decimal such as `"0.25"` or a decimal
/// with exponent such as `"1e-20"`, exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not an exact rational: {s:?}"));
    if let Some((mantissa, exp)) = s.split_once(['e', 'E']) {
        let e: i64 = exp.parse().map_err(|_| bad())?;
        if mantissa.contains('/') {
            return Err(bad());
        }
        return Ok(parse_rational(mantissa)? * powi(&int(10), e));
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.trim_start().starts_with('-');
        let w: BigInt = if whole.is_empty() || whole == "-" {
            BigInt::zero()
        } else {
            whole.parse().map_err(|_| bad())?
        };
        let f: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let mag = Rational::new(w.abs() * &scale + f, scale);
        return Ok(if negative { -mag } else { mag });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Scalars the generic polynomial and determinant code runs over.
///
/// Implemented by [`Rational`] and by [`RatFunc`] (rational functions in one
/// deformation parameter), which is how exact parameter limits reuse the
/// Casoratian machinery.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    fn from_rational(r: &Rational) -> Self;
    fn from_int(n: i64) -> Self {
        Self::from_rational(&int(n))
    }
}

impl Field for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
}

/// Rising factorial `(a)_k = a(a+1)...(a+k-1)`, with `(a)_0 = 1`.
pub fn pochhammer<F: Field>(a: &F, k: usize) -> F {
    let mut acc = F::one();
    for j in 0..k {
        acc = acc * (a.clone() + F::from_int(j as i64));
    }
    acc
}

/// Finite q-shifted factorial `(a;q)_k = prod_{j<k} (1 - a q^j)`.
pub fn q_pochhammer(a: &Rational, q: &Rational, k: usize) -> Rational {
    // accumulate numerator and denominator separately, reducing once at the end
    let (an, ad) = (a.numer(), a.denom());
    let (qn, qd) = (q.numer(), q.denom());
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    let mut tn = an.clone(); // a q^j = tn / td
    let mut td = ad.clone();
    for _ in 0..k {
        num *= &td - &tn;
        den *= &td;
        tn *= qn;
        td *= qd;
    }
    Rational::new(num, den)
}

/// `(a;q)_k` for a possibly negative `k`, using `(a;q)_{-k} = 1/(a q^{-k};q)_k`.
///
/// Returns `None` when the negative-order symbol has a vanishing denominator.
pub fn q_pochhammer_signed(a: &Rational, q: &Rational, k: i64) -> Option<Rational> {
    if k >= 0 {
        return Some(q_pochhammer(a, q, k as usize));
    }
    let m = (-k) as usize;
    let den = q_pochhammer(&(a * powi(q, k)), q, m);
    if den.is_zero() {
        None
    } else {
        Some(den.recip())
    }
}

/// Default target width for certified infinite products.
pub fn default_eps() -> Rational {
    Rational::new(BigInt::one(), num_traits::pow(BigInt::from(10), 30))
}

/// Infinite q-shifted factorial `(a;q)_inf` enclosed to absolute width `< eps`.
///
/// With `T_N = |a| |q|^N / (1 - |q|)`, the tail `prod_{j>=N} (1 - a q^j)`
/// lies in `[1 - T_N, 1/(1 - T_N)]` once `T_N < 1`.
pub fn q_pochhammer_inf(a: &Rational, q: &Rational, eps: &Rational) -> Result<Enclosure> {
    if q.abs() >= Rational::one() {
        return Err(Error::Domain(format!(
            "(a;q)_inf needs |q| < 1, got q = {}",
            fmt_rational(q)
        )));
    }
    if !eps.is_positive() {
        return Err(Error::Domain("error bound must be positive".into()));
    }
    let one = Rational::one();
    let qa = q.abs();
    let mut partial = one.clone();
    let mut term = a.clone(); // a q^N
    let denom = &one - &qa;
    let three = int(3);
    loop {
        let tail = term.abs() / &denom;
        if partial.is_zero() {
            return Ok(Enclosure::exact(partial));
        }
        if tail < rat(1, 2) && &three * &tail * partial.abs() < *eps {
            let lo_f = &one - &tail;
            let hi_f = (&one - &tail).recip();
            let (lo, hi) = if partial.is_positive() {
                (&partial * &lo_f, &partial * &hi_f)
            } else {
                (&partial * &hi_f, &partial * &lo_f)
            };
            return Ok(Enclosure::new(lo, hi));
        }
        partial *= &one - &term;
        term *= q;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(&int(2), 3), int(24));
        assert_eq!(pochhammer(&rat(7, 3), 0), int(1));
        // (-2)(-1)(0)(1)
        assert_eq!(pochhammer(&int(-2), 4), int(0));
    }

    #[test]
    fn q_pochhammer_examples() {
        assert_eq!(q_pochhammer(&rat(1, 2), &rat(1, 2), 2), rat(3, 8));
        assert_eq!(q_pochhammer(&rat(5, 7), &rat(1, 3), 0), int(1));
    }

    #[test]
    fn q_pochhammer_infinite_matches_long_partial_product() {
        let eps = rat(1, 1) / Rational::from_integer(num_traits::pow(BigInt::from(10), 20));
        let enc = q_pochhammer_inf(&rat(1, 8), &rat(1, 2), &eps).unwrap();
        let p70 = q_pochhammer(&rat(1, 8), &rat(1, 2), 70);
        assert!(enc.width() < eps);
        assert!(enc.contains(&p70) || (enc.mid() - &p70).abs() < eps);
        // tail of the 70-factor product is below 2^-70
        assert!((enc.mid() - &p70).abs() < eps);
    }

    #[test]
    fn q_pochhammer_infinite_rejects_large_q() {
        assert!(matches!(
            q_pochhammer_inf(&rat(1, 8), &int(1), &default_eps()),
            Err(Error::Domain(_))
        ));
        assert!(q_pochhammer_inf(&rat(1, 8), &rat(-3, 2), &default_eps()).is_err());
    }

    #[test]
    fn q_pochhammer_infinite_negative_argument() {
        // (-1/2; 1/3)_inf > 1; compare against a long partial product.
        let enc = q_pochhammer_inf(&rat(-1, 2), &rat(1, 3), &default_eps()).unwrap();
        let p = q_pochhammer(&rat(-1, 2), &rat(1, 3), 120);
        assert!(enc.lo > int(1));
        assert!((enc.mid() - p).abs() < default_eps());
    }

    #[test]
    fn signed_q_pochhammer() {
        let q = rat(1, 2);
        let a = rat(3, 5);
        // (a;q)_{-2} (a q^{-2};q)_2 = 1
        let neg = q_pochhammer_signed(&a, &q, -2).unwrap();
        assert_eq!(neg * q_pochhammer(&(&a * powi(&q, -2)), &q, 2), int(1));
        // 1/(q;q)_{-1} = 0 pattern: (q;q)_{-1} = 1/(1;q)_1 has a vanishing denominator
        assert_eq!(q_pochhammer_signed(&q, &q, -1), None);
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("1/2").unwrap(), rat(1, 2));
        assert_eq!(parse_rational(" -6/4 ").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("-0.5").unwrap(), rat(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert_eq!(parse_rational("1e-20").unwrap(), Rational::new(1.into(), num_traits::pow(BigInt::from(10), 20)));
        assert_eq!(parse_rational("2.5E3").unwrap(), int(2500));
        assert!(parse_rational("1/2e3").is_err());
        assert_eq!(fmt_rational(&rat(-3, 2)), "-3/2");
        assert_eq!(fmt_rational(&int(4)), "4");
    }

    #[test]
    fn integer_powers() {
        assert_eq!(powi(&rat(1, 2), 3), rat(1, 8));
        assert_eq!(powi(&rat(1, 2), -3), int(8));
        assert_eq!(powi(&rat(5, 3), 0), int(1));
    }

    fn small_rat() -> impl proptest::strategy::Strategy<Value = Rational> {
        use proptest::prelude::*;
        (-50i64..50, 1i64..13).prop_map(|(n, d)| rat(n, d))
    }

    proptest::proptest! {
        #[test]
        fn rational_field_axioms(a in small_rat(), b in small_rat(), c in small_rat()) {
            proptest::prop_assert_eq!(&a + &b, &b + &a);
            proptest::prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
            proptest::prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
        }

        #[test]
        fn q_pochhammer_step(a in small_rat(), q in small_rat(), k in 0usize..12) {
            let lhs = q_pochhammer(&a, &q, k + 1);
            let rhs = q_pochhammer(&a, &q, k) * (int(1) - &a * powi(&q, k as i64));
            proptest::prop_assert_eq!(lhs, rhs);
        }
    }
}
