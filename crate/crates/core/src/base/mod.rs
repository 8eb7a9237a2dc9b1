//! The three shape-invariant base systems: Meixner (M), little q-Jacobi (lqJ)
//! and little q-Laguerre (lqL).
//!
//! Lattice functions are evaluated at a *site*: the point `x` itself for M and
//! `z = q^x` for the q-families. All potentials are rational in the site, so
//! "valid for any x" identities can be checked at arbitrary rational sites.

mod lattice;
mod verify;

pub use lattice::LatticeVector;
pub(crate) use verify::off_lattice_sites;
pub use verify::{
    verify_difference_equation, verify_dual_spot_check, verify_shift_relations,
    verify_zero_mode,
};

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{
    default_eps, fmt_rational, interpolate, int, pochhammer, pow_rational, powi, q_pochhammer,
    q_pochhammer_inf, rat, Enclosure, EtaPolynomial, Rational,
};

/// Largest `m` for which lqJ validation rejects `a = b q^{m+1}`.
pub const SPECIAL_CONFIG_BOUND: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "M")]
    Meixner,
    #[serde(rename = "lqJ")]
    LittleQJacobi,
    #[serde(rename = "lqL")]
    LittleQLaguerre,
}

impl Family {
    pub fn tag(self) -> &'static str {
        match self {
            Family::Meixner => "M",
            Family::LittleQJacobi => "lqJ",
            Family::LittleQLaguerre => "lqL",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "m" | "meixner" => Ok(Family::Meixner),
            "lqj" | "little-q-jacobi" => Ok(Family::LittleQJacobi),
            "lql" | "little-q-laguerre" => Ok(Family::LittleQLaguerre),
            _ => Err(Error::Parse(format!("unknown family {s:?} (expected M, lqJ or lqL)"))),
        }
    }
}

/// Parameters of one of the base systems.
///
/// Values built through [`FamilyParams::meixner`] and friends are validated.
/// Twisted and shifted parameters (which may leave the admissible range on
/// purpose) are produced by the transformation methods without re-validation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FamilyParams {
    Meixner { beta: Rational, c: Rational },
    LittleQJacobi { a: Rational, b: Rational, q: Rational },
    LittleQLaguerre { a: Rational, q: Rational },
}

use FamilyParams::{LittleQJacobi as Lqj, LittleQLaguerre as Lql, Meixner as Mx};

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParams(msg.into())
}

impl FamilyParams {
    pub fn meixner(beta: Rational, c: Rational) -> Result<Self> {
        let p = Mx { beta, c };
        p.validate()?;
        Ok(p)
    }

    pub fn little_q_jacobi(a: Rational, b: Rational, q: Rational) -> Result<Self> {
        let p = Lqj { a, b, q };
        p.validate()?;
        Ok(p)
    }

    pub fn little_q_laguerre(a: Rational, q: Rational) -> Result<Self> {
        let p = Lql { a, q };
        p.validate()?;
        Ok(p)
    }

    /// Checks the admissible parameter range of the system.
    pub fn validate(&self) -> Result<()> {
        let one = Rational::one();
        match self {
            Mx { beta, c } => {
                if !beta.is_positive() {
                    return Err(invalid(format!("M requires beta>0, got beta={}", fmt_rational(beta))));
                }
                if !(c.is_positive() && *c < one) {
                    return Err(invalid(format!("M requires 0<c<1, got c={}", fmt_rational(c))));
                }
            }
            Lqj { a, b, q } => {
                check_q(q)?;
                check_a(a, q)?;
                if *b >= q.recip() {
                    return Err(invalid(format!("lqJ requires b<1/q, got b={}", fmt_rational(b))));
                }
                let mut bq = b * q;
                for m in 0..=SPECIAL_CONFIG_BOUND {
                    if *a == bq {
                        return Err(invalid(format!(
                            "lqJ special configuration a=b*q^(m+1) with m={m} is excluded"
                        )));
                    }
                    bq *= q;
                }
            }
            Lql { a, q } => {
                check_q(q)?;
                check_a(a, q)?;
            }
        }
        Ok(())
    }

    pub fn family(&self) -> Family {
        match self {
            Mx { .. } => Family::Meixner,
            Lqj { .. } => Family::LittleQJacobi,
            Lql { .. } => Family::LittleQLaguerre,
        }
    }

    pub fn q(&self) -> Option<&Rational> {
        match self {
            Mx { .. } => None,
            Lqj { q, .. } | Lql { q, .. } => Some(q),
        }
    }

    /// `(name, value)` pairs in a fixed order.
    pub fn named_values(&self) -> Vec<(&'static str, Rational)> {
        match self {
            Mx { beta, c } => vec![("beta", beta.clone()), ("c", c.clone())],
            Lqj { a, b, q } => vec![("a", a.clone()), ("b", b.clone()), ("q", q.clone())],
            Lql { a, q } => vec![("a", a.clone()), ("q", q.clone())],
        }
    }

    /// `lambda + k delta`.
    pub fn shift(&self, k: i64) -> Self {
        match self {
            Mx { beta, c } => Mx { beta: beta + int(k), c: c.clone() },
            Lqj { a, b, q } => {
                let f = powi(q, k);
                Lqj { a: a * &f, b: b * &f, q: q.clone() }
            }
            Lql { a, q } => Lql { a: a * powi(q, k), q: q.clone() },
        }
    }

    /// `lambda + k delta~`, the shift intertwined with the twist.
    pub fn tilde_shift(&self, k: i64) -> Self {
        match self {
            Mx { beta, c } => Mx { beta: beta + int(k), c: c.clone() },
            Lqj { a, b, q } => Lqj { a: a * powi(q, -k), b: b * powi(q, k), q: q.clone() },
            Lql { a, q } => Lql { a: a * powi(q, -k), q: q.clone() },
        }
    }

    /// The involutive twist producing the virtual-state system.
    pub fn twist(&self) -> Self {
        match self {
            Mx { beta, c } => Mx { beta: beta.clone(), c: c.recip() },
            Lqj { a, b, q } => Lqj { a: a.recip(), b: b.clone(), q: q.clone() },
            Lql { a, q } => Lql { a: a.recip(), q: q.clone() },
        }
    }

    pub fn kappa(&self) -> Rational {
        match self {
            Mx { .. } => Rational::one(),
            Lqj { q, .. } | Lql { q, .. } => q.recip(),
        }
    }

    /// Site of the lattice point `x`: `x` for M, `q^x` otherwise.
    pub fn site(&self, x: i64) -> Rational {
        match self.q() {
            None => int(x),
            Some(q) => powi(q, x),
        }
    }

    /// Site of `x + k` given the site of `x`.
    pub fn site_step(&self, s: &Rational, k: i64) -> Rational {
        match self.q() {
            None => s + int(k),
            Some(q) => s * powi(q, k),
        }
    }

    pub fn b_at(&self, s: &Rational) -> Rational {
        match self {
            Mx { beta, c } => c * (s + beta),
            Lqj { a, b, q } => a * (s.recip() - b * q),
            Lql { a, .. } => a * s.recip(),
        }
    }

    pub fn d_at(&self, s: &Rational) -> Rational {
        match self {
            Mx { .. } => s.clone(),
            Lqj { .. } | Lql { .. } => s.recip() - Rational::one(),
        }
    }

    pub fn eta_at(&self, s: &Rational) -> Rational {
        match self {
            Mx { .. } => s.clone(),
            _ => Rational::one() - s,
        }
    }

    pub fn varphi_at(&self, s: &Rational) -> Rational {
        match self {
            Mx { .. } => Rational::one(),
            _ => s.clone(),
        }
    }

    pub fn potential_b(&self, x: i64) -> Rational {
        self.b_at(&self.site(x))
    }

    pub fn potential_d(&self, x: i64) -> Rational {
        self.d_at(&self.site(x))
    }

    pub fn eta(&self, x: i64) -> Rational {
        self.eta_at(&self.site(x))
    }

    pub fn varphi(&self, x: i64) -> Rational {
        self.varphi_at(&self.site(x))
    }

    pub fn energy(&self, n: usize) -> Rational {
        let one = Rational::one();
        match self {
            Mx { c, .. } => (&one - c) * int(n as i64),
            Lqj { a, b, q } => {
                let qn = powi(q, n as i64);
                (qn.recip() - &one) * (&one - a * b * q * qn)
            }
            Lql { q, .. } => powi(q, -(n as i64)) - one,
        }
    }

    /// Closed form of the squared ground state; zero for `x < 0`.
    pub fn phi0_sq(&self, x: i64) -> Rational {
        if x < 0 {
            return Rational::zero();
        }
        let xu = x as usize;
        match self {
            Mx { beta, c } => pochhammer(beta, xu) * powi(c, x) / factorial(xu),
            Lqj { a, b, q } => {
                q_pochhammer(&(b * q), q, xu) / q_pochhammer(q, q, xu) * powi(&(a * q), x)
            }
            Lql { a, q } => powi(&(a * q), x) / q_pochhammer(q, q, xu),
        }
    }

    /// Squared ground state from the zero-mode recursion `B(x) phi0(x)^2 = D(x+1) phi0(x+1)^2`.
    pub fn phi0_sq_by_recursion(&self, x: i64) -> Rational {
        if x < 0 {
            return Rational::zero();
        }
        let mut acc = Rational::one();
        for y in 0..x {
            acc = acc * self.potential_b(y) / self.potential_d(y + 1);
        }
        acc
    }

    /// `P_n` at a site, from the terminating hypergeometric series.
    ///
    /// Works for any parameter values for which the series denominators do
    /// not vanish, in particular for twisted parameters.
    pub fn p_value_at(&self, n: usize, s: &Rational) -> Rational {
        let one = Rational::one();
        match self {
            Mx { beta, c } => {
                // 2F1(-n, -x; beta | 1 - 1/c)
                let z = &one - c.recip();
                let mut term = one.clone();
                let mut acc = one.clone();
                for k in 0..n {
                    let kr = int(k as i64);
                    term = term * (int(-(n as i64)) + &kr) * (-s + &kr) * &z
                        / ((beta + &kr) * (&kr + &one));
                    acc += &term;
                }
                acc
            }
            Lqj { a, b, q } => q_series(a, b, q, n, s),
            Lql { a, q } => q_series(a, &Rational::zero(), q, n, s),
        }
    }

    pub fn p_value(&self, n: usize, x: i64) -> Rational {
        self.p_value_at(n, &self.site(x))
    }

    /// Independent evaluation of the q-polynomials through the
    /// `(a^{-1}q^{-n};q)_n/(bq;q)_n 2phi1(q^{-n}, abq^{n+1}; aq | q; q^{x+1})` form.
    ///
    /// `None` for M or when a series denominator vanishes.
    pub fn p_value_alt_at(&self, n: usize, s: &Rational) -> Option<Rational> {
        let (a, b, q) = match self {
            Mx { .. } => return None,
            Lqj { a, b, q } => (a, b.clone(), q),
            Lql { a, q } => (a, Rational::zero(), q),
        };
        let one = Rational::one();
        let nn = n as i64;
        let qn = powi(q, -nn);
        let abqn = a * &b * q * powi(q, nn);
        let pref_den = q_pochhammer(&(&b * q), q, n);
        if pref_den.is_zero() {
            return None;
        }
        let pref = q_pochhammer(&(a.recip() * &qn), q, n) / pref_den;
        let arg = s * q;
        let mut acc = Rational::zero();
        let mut term = one.clone();
        for k in 0..=n {
            if k > 0 {
                let kk = (k - 1) as i64;
                let qk = powi(q, kk);
                let den = (&one - a * q * &qk) * (&one - q * &qk);
                if den.is_zero() {
                    return None;
                }
                term = term * (&one - &qn * &qk) * (&one - &abqn * &qk) * &arg / den;
            }
            acc += &term;
        }
        Some(pref * acc)
    }

    /// Coefficients of `P_n` in `eta`, by interpolation at `x = 0..=n`.
    pub fn p_poly(&self, n: usize) -> Result<EtaPolynomial> {
        let pts: Vec<_> = (0..=n as i64)
            .map(|x| {
                let s = self.site(x);
                (self.eta_at(&s), self.p_value_at(n, &s))
            })
            .collect();
        let p = interpolate(&pts)?;
        if p.degree() != Some(n) {
            return Err(Error::DegreeAnomaly {
                what: format!("P_{n}"),
                expected: n,
                found: format!("{:?}", p.degree()),
            });
        }
        Ok(p)
    }

    /// Closed form of the coefficient of `eta^n` in `P_n`.
    pub fn leading_coeff(&self, n: usize) -> Rational {
        let one = Rational::one();
        let nn = n as i64;
        match self {
            Mx { beta, c } => powi(&(&one - c.recip()), nn) / pochhammer(beta, n),
            Lqj { a, b, q } => {
                powi(&-a, -nn) * powi(q, -nn * nn)
                    * q_pochhammer(&(a * b * powi(q, nn + 1)), q, n)
                    / q_pochhammer(&(b * q), q, n)
            }
            Lql { a, q } => powi(&-a, -nn) * powi(q, -nn * nn),
        }
    }

    /// Squared normalisation constant `d_n^2`, enclosed with absolute error below `eps`
    /// (exact whenever it is rational).
    pub fn dn_sq(&self, n: usize) -> Result<Enclosure> {
        self.dn_sq_eps(n, &default_eps())
    }

    pub fn dn_sq_eps(&self, n: usize, eps: &Rational) -> Result<Enclosure> {
        let one = Rational::one();
        let nn = n as i64;
        match self {
            Mx { beta, c } => {
                let pre = pochhammer(beta, n) * powi(c, nn) / factorial(n);
                let bits = 64 + eps_bits(eps);
                let pw = pow_rational(&(&one - c), beta, bits)?;
                Ok(pw.scale(&pre))
            }
            Lqj { a, b, q } => {
                let abq = a * b * q;
                let pre = q_pochhammer(&(b * q), q, n) * q_pochhammer(&abq, q, n)
                    * powi(a, nn)
                    * powi(q, nn * nn)
                    / (q_pochhammer(q, q, n) * q_pochhammer(&(a * q), q, n))
                    * (&one - &abq * powi(q, 2 * nn))
                    / (&one - &abq);
                let tight = eps / (int(4) * (pre.abs() + &one));
                let num = q_pochhammer_inf(&(a * q), q, &tight)?;
                let den = q_pochhammer_inf(&(&abq * q), q, &tight)?;
                Ok(num.div(&den)?.scale(&pre))
            }
            Lql { a, q } => {
                let pre = powi(a, nn) * powi(q, nn * nn)
                    / (q_pochhammer(q, q, n) * q_pochhammer(&(a * q), q, n));
                let tight = eps / (int(2) * (pre.abs() + &one));
                Ok(q_pochhammer_inf(&(a * q), q, &tight)?.scale(&pre))
            }
        }
    }

    /// Twist constants `(alpha, alpha')` of the linear relation between the
    /// original and twisted Hamiltonians.
    pub fn alpha_constants(&self) -> (Rational, Rational) {
        let one = Rational::one();
        match self {
            Mx { beta, c } => (c.clone(), -(&one - c) * beta),
            Lqj { a, b, q } => (a.clone(), -(&one - a) * (&one - b * q)),
            Lql { a, .. } => (a.clone(), -(&one - a)),
        }
    }
}

impl fmt::Display for FamilyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.family())?;
        for (i, (k, v)) in self.named_values().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k}={}", fmt_rational(v))?;
        }
        write!(f, ")")
    }
}

fn check_q(q: &Rational) -> Result<()> {
    if !(q.is_positive() && *q < Rational::one()) {
        return Err(invalid(format!("requires 0<q<1, got q={}", fmt_rational(q))));
    }
    Ok(())
}

fn check_a(a: &Rational, q: &Rational) -> Result<()> {
    if !(a.is_positive() && *a < q.recip()) {
        return Err(invalid(format!("requires 0<a<1/q, got a={}", fmt_rational(a))));
    }
    Ok(())
}

pub(crate) fn factorial(n: usize) -> Rational {
    pochhammer(&Rational::one(), n)
}

fn eps_bits(eps: &Rational) -> u32 {
    let bits = eps.denom().bits() as i64 - eps.numer().bits() as i64;
    bits.clamp(0, 4096) as u32
}

/// `sum_k (q^-n, ab q^{n+1}, 1/s; q)_k / (bq, q; q)_k (s/a)^k (-1)^k q^{-k(k-1)/2}`.
fn q_series(a: &Rational, b: &Rational, q: &Rational, n: usize, s: &Rational) -> Rational {
    let one = Rational::one();
    let nn = n as i64;
    let qmn = powi(q, -nn);
    let abqn = a * b * powi(q, nn + 1);
    let sinv = s.recip();
    let ratio = -(s / a);
    let mut acc = one.clone();
    let mut term = one.clone();
    for k in 0..n {
        let qk = powi(q, k as i64);
        term = term
            * (&one - &qmn * &qk)
            * (&one - &abqn * &qk)
            * (&one - &sinv * &qk)
            * &ratio
            / ((&one - b * q * &qk) * (&one - q * &qk) * &qk);
        acc += &term;
    }
    acc
}

/// The default parameter points exercised by the test suites and the CLI.
pub fn default_matrix() -> Vec<FamilyParams> {
    vec![
        Mx { beta: int(1), c: rat(1, 2) },
        Mx { beta: rat(5, 2), c: rat(1, 3) },
        Lqj { a: rat(1, 32), b: rat(1, 3), q: rat(1, 2) },
        Lqj { a: rat(1, 32), b: rat(-1, 2), q: rat(1, 2) },
        Lql { a: rat(1, 32), q: rat(1, 2) },
    ]
}

#[cfg(test)]
mod tests;
