use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{fmt_rational, Field, Poly, Rational};
use crate::error::{Error, Result};

/// Element of `Q(t)`: reduced fraction with a monic denominator.
#[derive(Clone, Debug, PartialEq)]
pub struct RatFunc {
    num: Poly<Rational>,
    den: Poly<Rational>,
}

impl RatFunc {
    pub fn new(num: Poly<Rational>, den: Poly<Rational>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Domain("rational function with zero denominator".into()));
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly<Rational>, den: Poly<Rational>) -> Self {
        if num.is_zero() {
            return RatFunc {
                num,
                den: Poly::one(),
            };
        }
        let g = Poly::gcd(&num, &den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let lead = den.leading();
        RatFunc {
            num: num.scale(&lead.recip()),
            den: den.scale(&lead.recip()),
        }
    }

    pub fn from_poly(p: Poly<Rational>) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    /// The deformation parameter `t` itself.
    pub fn var() -> Self {
        Self::from_poly(Poly::var())
    }

    pub fn numer(&self) -> &Poly<Rational> {
        &self.num
    }

    pub fn denom(&self) -> &Poly<Rational> {
        &self.den
    }

    pub fn recip(&self) -> Self {
        assert!(!self.num.is_zero(), "reciprocal of the zero rational function");
        Self::reduce(self.den.clone(), self.num.clone())
    }

    pub fn powi(&self, e: i64) -> Self {
        let base = if e < 0 { self.recip() } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc * base.clone();
        }
        acc
    }

    /// Value at `t0` of the reduced fraction.
    pub fn limit_at(&self, t0: &Rational) -> Result<Rational> {
        let d = self.den.eval(t0);
        if d.is_zero() {
            return Err(Error::Pole(fmt_rational(t0)));
        }
        Ok(self.num.eval(t0) / d)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Poly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "[{}]/[{}]", self.num, self.den)
        }
    }
}

impl Add for RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: RatFunc) -> RatFunc {
        if self.den == rhs.den {
            return RatFunc::reduce(&self.num + &rhs.num, self.den);
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFunc::reduce(num, &self.den * &rhs.den)
    }
}

impl Sub for RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: RatFunc) -> RatFunc {
        self + (-rhs)
    }
}

impl Mul for RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: RatFunc) -> RatFunc {
        RatFunc::reduce(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: RatFunc) -> RatFunc {
        self * rhs.recip()
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den,
        }
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFunc {
    fn one() -> Self {
        Self::from_poly(Poly::one())
    }
}

impl Field for RatFunc {
    fn from_rational(r: &Rational) -> Self {
        Self::from_poly(Poly::constant(r.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use proptest::prelude::*;

    fn p(c: &[i64]) -> Poly<Rational> {
        Poly::new(c.iter().map(|&k| int(k)).collect())
    }

    #[test]
    fn limit_examples() {
        // (1-t^2)/(1-t) at 1
        let f = RatFunc::new(p(&[1, 0, -1]), p(&[1, -1])).unwrap();
        assert_eq!(f.limit_at(&int(1)).unwrap(), int(2));
        // (t^2-3t+2)/(t-1) at 1
        let g = RatFunc::new(p(&[2, -3, 1]), p(&[-1, 1])).unwrap();
        assert_eq!(g.limit_at(&int(1)).unwrap(), int(-1));
        let c = RatFunc::from_rational(&rat(3, 7));
        assert_eq!(c.limit_at(&rat(-5, 2)).unwrap(), rat(3, 7));
    }

    #[test]
    fn pole_is_reported() {
        let f = RatFunc::new(p(&[1]), p(&[-1, 1])).unwrap();
        assert_eq!(f.limit_at(&int(1)), Err(Error::Pole("1".into())));
        assert!(RatFunc::new(p(&[1]), Poly::zero()).is_err());
    }

    #[test]
    fn stored_reduced() {
        let f = RatFunc::new(p(&[-2, 2]), p(&[-3, 3])).unwrap();
        assert_eq!(f, RatFunc::from_rational(&rat(2, 3)));
        let t = RatFunc::var();
        assert_eq!(t.powi(-2) * t.powi(3), t);
    }

    fn small_ratfunc() -> impl Strategy<Value = RatFunc> {
        let coeffs = prop::collection::vec(-6i64..6, 0..4);
        (coeffs.clone(), coeffs).prop_filter_map("nonzero denominator", |(n, d)| {
            RatFunc::new(p(&n), p(&d)).ok()
        })
    }

    proptest! {
        #[test]
        fn field_axioms(a in small_ratfunc(), b in small_ratfunc(), c in small_ratfunc()) {
            prop_assert_eq!(a.clone() + b.clone(), b.clone() + a.clone());
            prop_assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
            prop_assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b.clone() + c.clone()));
            prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
            prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
            if !b.is_zero() {
                prop_assert_eq!((a.clone() / b.clone()) * b.clone(), a);
            }
        }
    }
}
