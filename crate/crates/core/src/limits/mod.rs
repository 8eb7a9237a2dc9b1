//! Reductions to the classical Laguerre and Jacobi polynomials.
//!
//! The Meixner construction is carried out over `Q(c)` so that `c -> 1` is an
//! exact limit of rational functions. The little q-families are followed
//! numerically along `q_k = 1 - 2^{-k}` (see [`q_limit`]), since `a = q^alpha`
//! is not rational in `q` for fractional `alpha`.

mod q_limit;

use num_traits::{One, Zero};

use crate::casoratian::casoratian_from_columns;
use crate::error::{Error, Result};
use crate::exact::{fmt_rational, int, interpolate, pochhammer, Field, Poly, RatFunc, Rational};
use crate::exact::EtaPolynomial;
use crate::multi_indexed::{ell, MultiIndexedSystem};
use crate::base::FamilyParams;
use crate::report::CheckReport;

pub use q_limit::{q_limit_numeric, q_power, QLimitReport, QTarget, PRECISION_BITS};

#[derive(Clone, Debug, PartialEq)]
pub enum ClassicalKind {
    Laguerre { alpha: Rational },
    Jacobi { alpha: Rational, beta: Rational },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalPolynomial {
    pub kind: ClassicalKind,
    pub degree: usize,
    pub poly: EtaPolynomial,
}

impl ClassicalPolynomial {
    /// `L_n(0)` or `P_n(-1)`, the value the limits are normalised by.
    pub fn normalising_value(&self) -> Rational {
        match self.kind {
            ClassicalKind::Laguerre { .. } => self.poly.eval(&Rational::zero()),
            ClassicalKind::Jacobi { .. } => self.poly.eval(&int(-1)),
        }
    }
}

/// Generalised binomial `t (t-1) ... (t-k+1) / k!`.
fn binom(t: &Rational, k: usize) -> Rational {
    let mut acc = Rational::one();
    for j in 0..k {
        acc = acc * (t - int(j as i64)) / int(j as i64 + 1);
    }
    acc
}

/// `L_n^(alpha)(eta) = sum_k (-1)^k binom(n+alpha, n-k) eta^k / k!`.
pub fn laguerre(alpha: &Rational, n: usize) -> ClassicalPolynomial {
    let top = alpha + int(n as i64);
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut fact = Rational::one();
    for k in 0..=n {
        if k > 0 {
            fact *= int(k as i64);
        }
        let sign = if k % 2 == 0 { int(1) } else { int(-1) };
        coeffs.push(sign * binom(&top, n - k) / &fact);
    }
    ClassicalPolynomial {
        kind: ClassicalKind::Laguerre { alpha: alpha.clone() },
        degree: n,
        poly: Poly::new(coeffs),
    }
}

/// `P_n^(alpha,beta)(z) = sum_s binom(n+alpha, n-s) binom(n+beta, s) ((z-1)/2)^s ((z+1)/2)^(n-s)`.
pub fn jacobi(alpha: &Rational, beta: &Rational, n: usize) -> ClassicalPolynomial {
    let half = Rational::new(1.into(), 2.into());
    let minus = Poly::linear(half.clone(), -&half);
    let plus = Poly::linear(half.clone(), half);
    let na = alpha + int(n as i64);
    let nb = beta + int(n as i64);
    let mut poly = Poly::zero();
    for s in 0..=n {
        let mut term = Poly::constant(binom(&na, n - s) * binom(&nb, s));
        for _ in 0..s {
            term = &term * &minus;
        }
        for _ in 0..n - s {
            term = &term * &plus;
        }
        poly = &poly + &term;
    }
    ClassicalPolynomial {
        kind: ClassicalKind::Jacobi { alpha: alpha.clone(), beta: beta.clone() },
        degree: n,
        poly,
    }
}

/// `L_n^(alpha)(s eta) / L_n^(alpha)(0)` for `s = +-1`.
pub fn laguerre_ratio(alpha: &Rational, n: usize, reflect: bool) -> Result<EtaPolynomial> {
    let l = laguerre(alpha, n);
    let at0 = l.normalising_value();
    if at0.is_zero() {
        return Err(Error::Domain(format!(
            "L_{n}^({})(0) vanishes",
            fmt_rational(alpha)
        )));
    }
    let s = if reflect { int(-1) } else { int(1) };
    Ok(l.poly.rescale_var(&s).scale(&at0.recip()))
}

/// `P_n^(alpha,beta)(1 - 2 eta) / P_n^(alpha,beta)(-1)` as a polynomial in `eta`.
pub fn jacobi_ratio(alpha: &Rational, beta: &Rational, n: usize) -> Result<EtaPolynomial> {
    let j = jacobi(alpha, beta, n);
    let at = j.normalising_value();
    if at.is_zero() {
        return Err(Error::Domain(format!(
            "P_{n}^({},{})(-1) vanishes",
            fmt_rational(alpha),
            fmt_rational(beta)
        )));
    }
    Ok(j.poly.compose_affine(&int(-2), &int(1)).scale(&at.recip()))
}

/// `2F1(-n, -x; beta | z)` over `Q(c)`.
fn meixner_series(n: usize, x: i64, beta: &Rational, z: &RatFunc) -> RatFunc {
    let mut term = RatFunc::one();
    let mut acc = RatFunc::one();
    for k in 0..n as i64 {
        let f = (int(k - n as i64) * int(k - x)) / ((beta + int(k)) * int(k + 1));
        term = term * RatFunc::from_rational(&f) * z.clone();
        acc = acc + term.clone();
    }
    acc
}

/// Coefficients in `eta` of an element of `Q(c)[eta]`, substituted
/// `eta -> eta/(1-c)` and evaluated at `c = 1`.
fn rescaled_limit(poly: &Poly<RatFunc>) -> Result<EtaPolynomial> {
    let one_minus_c = RatFunc::one() - RatFunc::var();
    let scaled = poly.rescale_var(&one_minus_c.recip());
    let coeffs = scaled
        .coeffs()
        .iter()
        .map(|f| f.limit_at(&Rational::one()))
        .collect::<Result<Vec<_>>>()?;
    Ok(Poly::new(coeffs))
}

/// Interpolates lattice values in `eta = x` over `Q(c)` and re-checks two further points.
fn fit_over_qc(what: &str, degree: usize, value: impl Fn(i64) -> RatFunc) -> Result<Poly<RatFunc>> {
    let pts: Vec<(RatFunc, RatFunc)> = (0..=degree as i64)
        .map(|x| (RatFunc::from_int(x), value(x)))
        .collect();
    let poly = interpolate(&pts)?;
    for x in degree as i64 + 1..=degree as i64 + 2 {
        if poly.eval(&RatFunc::from_int(x)) != value(x) {
            return Err(Error::Validation { what: what.to_string(), x });
        }
    }
    if poly.degree() != Some(degree) {
        return Err(Error::DegreeAnomaly {
            what: what.to_string(),
            expected: degree,
            found: format!("{:?}", poly.degree()),
        });
    }
    Ok(poly)
}

/// `P_{D,n}(eta; (alpha+1, c))` with coefficients in `Q(c)`.
///
/// Built from the Casoratian `W[xi_{d_1}, .., xi_{d_M}, nu P_n]` with
/// `nu = c^x`, normalised by its value at `x = 0`.
pub fn meixner_multi_poly_qc(alpha: &Rational, labels: &[usize], n: usize) -> Result<Poly<RatFunc>> {
    let beta = alpha + int(1);
    if beta <= Rational::zero() {
        return Err(Error::InvalidParams(format!(
            "M requires beta = alpha+1 > 0, got alpha={}",
            fmt_rational(alpha)
        )));
    }
    let c = RatFunc::var();
    let z = RatFunc::one() - c.recip();
    let z_twisted = RatFunc::one() - c.clone();
    let size = labels.len() + 1;
    let column = |x: i64| -> Vec<Vec<RatFunc>> {
        let mut cols: Vec<Vec<RatFunc>> = labels
            .iter()
            .map(|&d| (0..size as i64).map(|j| meixner_series(d, x + j, &beta, &z_twisted)).collect())
            .collect();
        cols.push(
            (0..size as i64)
                .map(|j| c.powi(x + j) * meixner_series(n, x + j, &beta, &z))
                .collect(),
        );
        cols
    };
    let w0 = casoratian_from_columns(&column(0));
    if w0.is_zero() {
        return Err(Error::Domain(format!("Casoratian vanishes at x=0 for D={labels:?}, n={n}")));
    }
    let value = |x: i64| casoratian_from_columns(&column(x)) / (w0.clone() * c.powi(x));
    fit_over_qc(&format!("P_(D,{n}) over Q(c) for {labels:?}"), ell(labels) + n, value)
}

/// `xi_v(eta; (alpha+1, c))` with coefficients in `Q(c)`.
pub fn meixner_xi_qc(alpha: &Rational, v: usize) -> Poly<RatFunc> {
    let beta = alpha + int(1);
    let z = RatFunc::one() - RatFunc::var();
    // sum_k (-v)_k / ((beta)_k k!) z^k (-eta)_k
    let mut poly = Poly::zero();
    let mut falling = Poly::<RatFunc>::one();
    let mut fact = Rational::one();
    for k in 0..=v {
        if k > 0 {
            let km = int(k as i64 - 1);
            falling = &falling * &Poly::linear(RatFunc::from_int(-1), RatFunc::from_rational(&km));
            fact *= int(k as i64);
        }
        let coef = pochhammer(&int(-(v as i64)), k) / (pochhammer(&beta, k) * &fact);
        let term = falling.scale(&(RatFunc::from_rational(&coef) * z.powi(k as i64)));
        poly = &poly + &term;
    }
    poly
}

/// `lim_{c->1} P_{D,n}(eta/(1-c); (alpha+1, c))`; an error if the limit has a pole.
pub fn meixner_limit_exact(alpha: &Rational, labels: &[usize], n: usize) -> Result<EtaPolynomial> {
    rescaled_limit(&meixner_multi_poly_qc(alpha, labels, n)?)
}

/// `lim_{c->1} xi_v(eta/(1-c); (alpha+1, c))`.
pub fn meixner_xi_limit_exact(alpha: &Rational, v: usize) -> Result<EtaPolynomial> {
    rescaled_limit(&meixner_xi_qc(alpha, v))
}

/// Exact `c -> 1` limits: undeformed and virtual-state polynomials against
/// Laguerre ratios, multi-indexed limits for existence, degree and
/// normalisation, and the `Q(c)` construction against the rational one at
/// `c = c_check`.
pub fn verify_meixner_limits(
    alphas: &[Rational],
    deletion_sets: &[Vec<usize>],
    n_max: usize,
    v_max: usize,
    c_check: &Rational,
) -> CheckReport {
    let mut r = CheckReport::new(
        "limits.meixner",
        "lim_(c->1) P_n(eta/(1-c);(alpha+1,c)) = L_n^(alpha)(eta)/L_n^(alpha)(0); lim xi_v = L_v^(alpha)(-eta)/L_v^(alpha)(0); lim P_(D,n) exists with degree l_D+n and constant term 1",
    );
    for alpha in alphas {
        let a = fmt_rational(alpha);
        for n in 0..=n_max {
            match (meixner_limit_exact(alpha, &[], n), laguerre_ratio(alpha, n, false)) {
                (Ok(lim), Ok(target)) => r.check(
                    lim == target,
                    || format!("P_{n} alpha={a}"),
                    || format!("{lim} vs {target}"),
                ),
                (Err(e), _) | (_, Err(e)) => r.error(format!("P_{n} alpha={a}"), e),
            }
        }
        for v in 1..=v_max {
            match (meixner_xi_limit_exact(alpha, v), laguerre_ratio(alpha, v, true)) {
                (Ok(lim), Ok(target)) => r.check(
                    lim == target,
                    || format!("xi_{v} alpha={a}"),
                    || format!("{lim} vs {target}"),
                ),
                (Err(e), _) | (_, Err(e)) => r.error(format!("xi_{v} alpha={a}"), e),
            }
        }
        for labels in deletion_sets {
            let sys = FamilyParams::meixner(alpha + int(1), c_check.clone())
                .and_then(|p| MultiIndexedSystem::build_ordered(&p, labels, n_max));
            for n in 0..=n_max {
                let loc = || format!("D={labels:?} n={n} alpha={a}");
                let qc = match meixner_multi_poly_qc(alpha, labels, n) {
                    Ok(q) => q,
                    Err(e) => {
                        r.error(loc(), e);
                        continue;
                    }
                };
                match &sys {
                    Ok(sys) => {
                        let at: std::result::Result<Vec<Rational>, Error> =
                            qc.coeffs().iter().map(|f| f.limit_at(c_check)).collect();
                        let ok = at.map(Poly::new).ok().as_ref() == Some(sys.p_poly(n));
                        r.check(ok, || format!("{} at c={}", loc(), fmt_rational(c_check)), || "Q(c) construction differs".into());
                    }
                    Err(e) => r.error(loc(), e),
                }
                match rescaled_limit(&qc) {
                    Ok(lim) => {
                        let deg = ell(labels) + n;
                        r.check(lim.degree() == Some(deg), || format!("degree {}", loc()), || {
                            format!("expected {deg}, got {:?}", lim.degree())
                        });
                        r.check_eq(|| format!("constant term {}", loc()), &lim.coeff(0), &Rational::one());
                    }
                    Err(e) => r.error(format!("limit {}", loc()), e),
                }
            }
        }
    }
    r
}

#[cfg(test)]
mod tests;
