//! Numeric `q -> 1` limits along `q_k = 1 - 2^{-k}`.
//!
//! Each `q_k` is exact. `a = q^alpha` and `b = q^beta` are rounded down to
//! [`PRECISION_BITS`] binary places and everything after that is exact
//! rational arithmetic, so the only error is the rounding, amplified by at
//! most `(1-q)^{-degree}`: about `2^{-192+14*8}` in the worst case checked
//! here.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::{jacobi_ratio, laguerre_ratio};
use crate::base::{Family, FamilyParams};
use crate::error::{Error, Result};
use crate::exact::{int, powi, rat, to_f64, EtaPolynomial, Rational};
use crate::multi_indexed::{DeletionSet, MultiIndexedSystem};
use crate::virtual_states::xi_poly;

pub const PRECISION_BITS: u64 = 192;

/// First `k` of the sequence `q_k = 1 - 2^{-k}`.
const K_MIN: u32 = 4;

/// `q^alpha` rounded down to `bits` binary places, for `q > 0` and rational `alpha`.
pub fn q_power(q: &Rational, alpha: &Rational, bits: u64) -> Rational {
    let (base, r) = if alpha.is_negative() {
        (q.recip(), -alpha.numer())
    } else {
        (q.clone(), alpha.numer().clone())
    };
    let s = alpha.denom();
    let r = u32::try_from(r).expect("exponent numerator too large");
    let s32 = u32::try_from(s.clone()).expect("exponent denominator too large");
    let scale = BigInt::one() << (bits * u64::from(s32));
    let x = num_traits::pow(base.numer().clone(), r as usize) * scale
        / num_traits::pow(base.denom().clone(), r as usize);
    Rational::new(x.nth_root(s32), BigInt::one() << bits)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QTarget {
    /// `P_{D,n}`; `D` may be empty.
    Eigen { labels: Vec<usize>, n: usize },
    /// The deforming polynomial `xi_v`.
    Virtual { v: usize },
}

#[derive(Clone, Debug)]
pub struct QLimitReport {
    pub family: Family,
    pub target: QTarget,
    /// Coefficient distance to the classical ratio at each `k`, relative to
    /// `max(1, largest classical coefficient)`, when there is a classical ratio.
    pub errors: Vec<f64>,
    /// `max |c_k - c_{k-1}|` over the coefficients, from `k = K_MIN + 1`.
    pub differences: Vec<f64>,
    /// Successive-difference ratios; first order convergence puts them near 1/2.
    pub ratios: Vec<f64>,
    /// Relative distance of the second-order Richardson value at `k_max` to
    /// the classical ratio, or to the previous Richardson value when there is none.
    pub extrapolated_error: Rational,
    pub raw_error: Option<Rational>,
    pub pass: bool,
}

fn max_distance(a: &EtaPolynomial, b: &EtaPolynomial) -> Rational {
    let len = a.coeffs().len().max(b.coeffs().len());
    (0..len)
        .map(|k| (a.coeff(k) - b.coeff(k)).abs())
        .fold(Rational::zero(), |m, d| if d > m { d } else { m })
}

/// Coefficient distance relative to `max(1, max |t_k|)`.
fn relative_distance(a: &EtaPolynomial, t: &EtaPolynomial) -> Rational {
    let scale = t
        .coeffs()
        .iter()
        .map(|c| c.abs())
        .fold(Rational::one(), |m, c| if c > m { c } else { m });
    max_distance(a, t) / scale
}

fn params_at(family: Family, alpha: &Rational, beta: Option<&Rational>, q: &Rational) -> Result<FamilyParams> {
    let a = q_power(q, alpha, PRECISION_BITS);
    match family {
        Family::LittleQJacobi => {
            let beta = beta.ok_or_else(|| Error::InvalidParams("lqJ limit needs beta".into()))?;
            FamilyParams::little_q_jacobi(a, q_power(q, beta, PRECISION_BITS), q.clone())
        }
        Family::LittleQLaguerre => FamilyParams::little_q_laguerre(a, q.clone()),
        Family::Meixner => Err(Error::InvalidParams("q -> 1 limits need a q-family".into())),
    }
}

/// The left-hand side at one `q`, as a polynomial in the limit variable `eta`.
fn sample(family: Family, p: &FamilyParams, target: &QTarget) -> Result<EtaPolynomial> {
    let poly = match target {
        QTarget::Eigen { labels, n } if labels.is_empty() => p.p_poly(*n)?,
        QTarget::Eigen { labels, n } => {
            let d = DeletionSet::new(p, labels.clone())?;
            MultiIndexedSystem::build(p, &d, *n)?.p_poly(*n).clone()
        }
        QTarget::Virtual { v } => xi_poly(p, *v)?,
    };
    let q = p.q().expect("q-family");
    let one = Rational::one();
    Ok(match family {
        // P(1 - eta)
        Family::LittleQJacobi => poly.compose_affine(&int(-1), &one),
        // P(1 - (1-q) eta) / P(1)
        _ => {
            let at_one = poly.eval(&one);
            if at_one.is_zero() {
                return Err(Error::Domain("polynomial vanishes at eta = 1".into()));
            }
            poly.compose_affine(&(q - &one), &one).scale(&at_one.recip())
        }
    })
}

fn classical(family: Family, alpha: &Rational, beta: Option<&Rational>, target: &QTarget) -> Result<Option<EtaPolynomial>> {
    let beta = beta.cloned().unwrap_or_else(Rational::zero);
    Ok(match (family, target) {
        (_, QTarget::Eigen { labels, .. }) if !labels.is_empty() => None,
        (Family::LittleQJacobi, QTarget::Eigen { n, .. }) => Some(jacobi_ratio(alpha, &beta, *n)?),
        (Family::LittleQJacobi, QTarget::Virtual { v }) => Some(jacobi_ratio(&-alpha, &beta, *v)?),
        (_, QTarget::Eigen { n, .. }) => Some(laguerre_ratio(alpha, *n, false)?),
        (_, QTarget::Virtual { v }) => Some(laguerre_ratio(&-alpha, *v, false)?),
    })
}

/// Follows `target` along `q_k`, `k = 4..=k_max`, with `a = q^alpha` (and
/// `b = q^beta` for lqJ). Passes when the last three successive-difference
/// ratios lie in `[0.4, 0.6]` and the Richardson value is within `tol` of the
/// classical ratio (of the previous Richardson value when `D` is nonempty).
pub fn q_limit_numeric(
    family: Family,
    alpha: &Rational,
    beta: Option<&Rational>,
    target: QTarget,
    k_max: u32,
    tol: &Rational,
) -> Result<QLimitReport> {
    if k_max < K_MIN + 4 {
        return Err(Error::InvalidParams(format!("k_max must be at least {}", K_MIN + 4)));
    }
    let reference = classical(family, alpha, beta, &target)?;
    let samples = (K_MIN..=k_max)
        .into_par_iter()
        .map(|k| {
            let q = Rational::one() - powi(&int(2), -i64::from(k));
            sample(family, &params_at(family, alpha, beta, &q)?, &target)
        })
        .collect::<Result<Vec<_>>>()?;
    let errors: Vec<f64> = match &reference {
        Some(t) => samples.iter().map(|s| to_f64(&relative_distance(s, t))).collect(),
        None => Vec::new(),
    };
    let diffs: Vec<Rational> = samples.windows(2).map(|w| max_distance(&w[1], &w[0])).collect();
    let ratios: Vec<f64> = diffs
        .windows(2)
        .map(|w| if w[0].is_zero() { f64::NAN } else { to_f64(&(&w[1] / &w[0])) })
        .collect();
    // (8 c_k - 6 c_(k-1) + c_(k-2)) / 3 removes the O(h) and O(h^2) terms, h = 2^-k
    let richardson = |i: usize| -> EtaPolynomial {
        let v = &(&samples[i].scale(&int(8)) - &samples[i - 1].scale(&int(6))) + &samples[i - 2];
        v.scale(&rat(1, 3))
    };
    let last = samples.len() - 1;
    let extrapolated_error = match &reference {
        Some(t) => relative_distance(&richardson(last), t),
        None => relative_distance(&richardson(last), &richardson(last - 1)),
    };
    let raw_error = reference.as_ref().map(|t| relative_distance(&samples[last], t));
    // a sequence that is constant from the start has converged exactly
    let constant = diffs.iter().all(Zero::is_zero);
    let first_order = constant || ratios.iter().rev().take(3).all(|r| (0.4..=0.6).contains(r));
    let pass = first_order && extrapolated_error <= *tol;
    Ok(QLimitReport {
        family,
        target,
        errors,
        differences: diffs.iter().map(to_f64).collect(),
        ratios,
        extrapolated_error,
        raw_error,
        pass,
    })
}
