//! Virtual-state vectors obtained by twisting the parameters.
//!
//! The twisted potentials `B'(x) = B(x; t(lambda))`, `D' = D` satisfy
//! `alpha^2 B'(x) D'(x+1) = B(x) D(x+1)` and `alpha (B' + D') + alpha' = B + D`,
//! so the twisted polynomials `xi_v(x) = P_v(x; t(lambda))` give solutions of
//! the original equation with negative energy that stay positive on the lattice.

use num_traits::{One, Signed, Zero};

use crate::base::FamilyParams;
use crate::error::{Error, Result};
use crate::exact::{int, pochhammer, powi, q_pochhammer, EtaPolynomial, Rational};
use crate::report::CheckReport;

/// The base system together with its twisted partner and the constants
/// linking the two Hamiltonians.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistedSystem {
    pub base: FamilyParams,
    pub twisted: FamilyParams,
    pub alpha: Rational,
    pub alpha_prime: Rational,
}

impl TwistedSystem {
    pub fn new(base: &FamilyParams) -> Self {
        let (alpha, alpha_prime) = base.alpha_constants();
        TwistedSystem {
            base: base.clone(),
            twisted: base.twist(),
            alpha,
            alpha_prime,
        }
    }

    pub fn b_prime_at(&self, s: &Rational) -> Rational {
        self.twisted.b_at(s)
    }

    pub fn d_prime_at(&self, s: &Rational) -> Rational {
        self.base.d_at(s)
    }
}

/// `E~_v = alpha E_v(t(lambda)) + alpha'`.
pub fn virtual_energy(p: &FamilyParams, v: usize) -> Rational {
    let (alpha, alpha_prime) = p.alpha_constants();
    alpha * p.twist().energy(v) + alpha_prime
}

/// Factorised closed form of the virtual energy.
pub fn virtual_energy_closed(p: &FamilyParams, v: usize) -> Rational {
    let one = Rational::one();
    let vv = v as i64;
    match p {
        FamilyParams::Meixner { beta, c } => -(&one - c) * (int(vv) + beta),
        FamilyParams::LittleQJacobi { a, b, q } => {
            -(&one - a * powi(q, -vv)) * (&one - b * powi(q, vv + 1))
        }
        FamilyParams::LittleQLaguerre { a, q } => -(&one - a * powi(q, -vv)),
    }
}

/// Largest admissible label: `None` (unbounded) for M, otherwise the greatest
/// `v` with `a < q^v` (possibly 0).
pub fn v_max(p: &FamilyParams) -> Option<usize> {
    let (a, q) = match p {
        FamilyParams::Meixner { .. } => return None,
        FamilyParams::LittleQJacobi { a, q, .. } | FamilyParams::LittleQLaguerre { a, q } => (a, q),
    };
    let mut v = 0;
    let mut qv = q.clone();
    while a < &qv {
        v += 1;
        qv *= q;
    }
    Some(v)
}

/// Admissible virtual-state labels, at most `v_cap` of them for M.
///
/// Empty when `a >= q` for the q-families.
pub fn index_set(p: &FamilyParams, v_cap: usize) -> Vec<usize> {
    match v_max(p) {
        None => (1..=v_cap).collect(),
        Some(vm) => (1..=vm).collect(),
    }
}

pub fn xi_value_at(p: &FamilyParams, v: usize, s: &Rational) -> Rational {
    p.twist().p_value_at(v, s)
}

pub fn xi_value(p: &FamilyParams, v: usize, x: i64) -> Rational {
    xi_value_at(p, v, &p.site(x))
}

pub fn xi_poly(p: &FamilyParams, v: usize) -> Result<EtaPolynomial> {
    p.twist().p_poly(v)
}

/// `nu(x) = phi0(x)/phi0'(x)`: `c^x` for M, `a^x` for the q-families.
pub fn nu(p: &FamilyParams, x: i64) -> Rational {
    match p {
        FamilyParams::Meixner { c, .. } => powi(c, x),
        FamilyParams::LittleQJacobi { a, .. } | FamilyParams::LittleQLaguerre { a, .. } => powi(a, x),
    }
}

/// Terms of the manifestly positive rearrangement of `xi_v(x)`.
///
/// The value is `prefactor * sum(terms)`. Fails when a series denominator
/// vanishes, which happens only for labels outside the index set.
pub fn positive_series(p: &FamilyParams, v: usize, x: i64) -> Result<(Rational, Vec<Rational>)> {
    let one = Rational::one();
    let vv = v as i64;
    match p {
        FamilyParams::Meixner { beta, c } => {
            let kmax = v.min(x.max(0) as usize);
            let terms = (0..=kmax)
                .map(|k| {
                    let kk = k as i64;
                    pochhammer(&int(vv - kk + 1), k) * pochhammer(&int(x - kk + 1), k)
                        / pochhammer(beta, k)
                        * powi(&(&one - c), kk)
                        / pochhammer(&one, k)
                })
                .collect();
            Ok((one, terms))
        }
        FamilyParams::LittleQJacobi { a, b, q } => lqj_positive_series(a, b, q, v, x),
        FamilyParams::LittleQLaguerre { a, q } => lqj_positive_series(a, &Rational::zero(), q, v, x),
    }
}

fn lqj_positive_series(
    a: &Rational,
    b: &Rational,
    q: &Rational,
    v: usize,
    x: i64,
) -> Result<(Rational, Vec<Rational>)> {
    let vv = v as i64;
    let pref = q_pochhammer(&(a * powi(q, -vv)), q, v) * q_pochhammer(&(b * powi(q, x + 1)), q, v)
        / q_pochhammer(&(b * q), q, v);
    let z = a * powi(q, x - vv);
    let terms = (0..=v)
        .map(|k| -> Result<Rational> {
            let kk = k as i64;
            let num = q_pochhammer(&powi(q, vv - kk + 1), q, k)
                * q_pochhammer(&(b * powi(q, vv - kk + 1)), q, k);
            let den = q_pochhammer(&(a * powi(q, -kk)), q, k)
                * q_pochhammer(&(b * powi(q, vv - kk + 1 + x)), q, k)
                * q_pochhammer(q, q, k);
            if den.is_zero() {
                return Err(Error::Domain(format!("positive series for v={v} has a vanishing denominator")));
            }
            Ok(num / den * powi(&z, kk))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((pref, terms))
}

/// Checks the twisted-potential conditions and the boundary behaviour of `B'`, `D'`.
pub fn verify_linear_relation(p: &FamilyParams, x_max: i64) -> CheckReport {
    let t = TwistedSystem::new(p);
    let mut r = CheckReport::new(
        format!("virtual.linear_relation[{p}]"),
        "alpha^2 B'(x) D'(x+1) = B(x) D(x+1), alpha(B'(x)+D'(x)) + alpha' = B(x)+D(x), alpha>0, alpha'<0, B'>0, D'>0, D'(0)=0",
    );
    r.check(t.alpha.is_positive(), || "alpha>0".into(), || t.alpha.to_string());
    r.check(t.alpha_prime.is_negative(), || "alpha'<0".into(), || t.alpha_prime.to_string());
    r.check_eq(|| "alpha' = E~_0".into(), &t.alpha_prime, &virtual_energy(p, 0));
    let a2 = &t.alpha * &t.alpha;
    let sites = (0..=x_max)
        .map(|x| (format!("x={x}"), p.site(x)))
        .chain(crate::base::off_lattice_sites(p, 5).into_iter().map(|s| (format!("site={s}"), s)));
    for (loc, s) in sites {
        let s1 = p.site_step(&s, 1);
        let lhs = &a2 * t.b_prime_at(&s) * t.d_prime_at(&s1);
        let rhs = p.b_at(&s) * p.d_at(&s1);
        r.check_eq(|| format!("product {loc}"), &lhs, &rhs);
        let lhs = &t.alpha * (t.b_prime_at(&s) + t.d_prime_at(&s)) + &t.alpha_prime;
        let rhs = p.b_at(&s) + p.d_at(&s);
        r.check_eq(|| format!("sum {loc}"), &lhs, &rhs);
    }
    r.check_eq(|| "D'(0)".into(), &t.d_prime_at(&p.site(0)), &Rational::zero());
    for x in 0..=x_max {
        let bp = t.b_prime_at(&p.site(x));
        r.check(bp.is_positive(), || format!("B'>0 x={x}"), || bp.to_string());
        let dp = t.d_prime_at(&p.site(x + 1));
        r.check(dp.is_positive(), || format!("D'>0 x={}", x + 1), || dp.to_string());
    }
    r
}

/// Term-by-term positivity of the rearranged series and agreement with `xi_v`.
pub fn positivity_certificate(p: &FamilyParams, v: usize, x_max: i64) -> CheckReport {
    let mut r = CheckReport::new(
        format!("virtual.positivity[{p}, v={v}]"),
        "xi_v(x) is a sum of positive terms, hence xi_v(x) > 0 on the whole lattice",
    );
    for x in 0..=x_max {
        let (pref, terms) = match positive_series(p, v, x) {
            Ok(series) => series,
            Err(e) => {
                r.error(format!("x={x}"), e);
                continue;
            }
        };
        r.check(pref.is_positive(), || format!("prefactor x={x}"), || pref.to_string());
        for (k, t) in terms.iter().enumerate() {
            r.check(t.is_positive(), || format!("term k={k} x={x}"), || t.to_string());
        }
        let sum: Rational = terms.into_iter().sum::<Rational>() * &pref;
        let xi = xi_value(p, v, x);
        r.check_eq(|| format!("series = xi_v x={x}"), &sum, &xi);
        r.check(xi.is_positive(), || format!("xi_v>0 x={x}"), || xi.to_string());
    }
    r
}

/// Energies, the twisted difference equation, normalisation and degree of
/// `xi_v`, the functional relations of `nu`, and the infinite norm of the
/// virtual state vector.
pub fn verify_virtual_state(p: &FamilyParams, v: usize, x_max: i64) -> CheckReport {
    let t = TwistedSystem::new(p);
    let mut r = CheckReport::new(
        format!("virtual.state[{p}, v={v}]"),
        "E~_v = alpha E'_v + alpha' < 0, B'(xi(x)-xi(x+1)) + D'(xi(x)-xi(x-1)) = E'_v xi(x), xi(0)=1, deg xi_v = v, nu relations, infinite norm",
    );
    let e_tilde = virtual_energy(p, v);
    r.check_eq(|| "closed form of E~_v".into(), &e_tilde, &virtual_energy_closed(p, v));
    r.check(e_tilde.is_negative(), || "E~_v<0".into(), || e_tilde.to_string());
    let e_prime = t.twisted.energy(v);
    for x in 0..=x_max {
        let s = p.site(x);
        let xi = xi_value_at(p, v, &s);
        let lhs = t.b_prime_at(&s) * (&xi - xi_value_at(p, v, &p.site_step(&s, 1)))
            + t.d_prime_at(&s) * (&xi - xi_value_at(p, v, &p.site_step(&s, -1)));
        r.check_eq(|| format!("twisted equation x={x}"), &lhs, &(&e_prime * &xi));
    }
    r.check_eq(|| "xi_v(0)".into(), &xi_value(p, v, 0), &Rational::one());
    match xi_poly(p, v) {
        Ok(poly) => {
            r.check(poly.degree() == Some(v), || "degree".into(), || format!("{:?}", poly.degree()))
        }
        Err(e) => r.error("degree", e),
    }
    for x in -3..=x_max.min(30) {
        let s = p.site(x);
        let lhs = nu(p, x + 1) * &t.alpha * t.b_prime_at(&s);
        r.check_eq(|| format!("nu(x+1) x={x}"), &lhs, &(p.b_at(&s) * nu(p, x)));
        let lhs = nu(p, x - 1) * &t.alpha * t.d_prime_at(&s);
        r.check_eq(|| format!("nu(x-1) x={x}"), &lhs, &(p.d_at(&s) * nu(p, x)));
    }
    check_infinite_norm(p, v, x_max, &mut r);
    r
}

/// `phi0'(x)^2 xi_v(x)^2` has term ratio tending to `1/c` (M) or `q/a` (q-families),
/// both exceeding 1; the ratio is also checked on the upper half of the window.
fn check_infinite_norm(p: &FamilyParams, v: usize, x_max: i64, r: &mut CheckReport) {
    let limit = match p {
        FamilyParams::Meixner { c, .. } => c.recip(),
        FamilyParams::LittleQJacobi { a, q, .. } | FamilyParams::LittleQLaguerre { a, q } => q / a,
    };
    r.check(limit > Rational::one(), || "limiting term ratio > 1".into(), || limit.to_string());
    let tw = p.twist();
    let term = |x: i64| {
        let xi = xi_value(p, v, x);
        tw.phi0_sq(x) * &xi * &xi
    };
    let mut prev = term(x_max / 2);
    for x in (x_max / 2 + 1)..=x_max {
        let cur = term(x);
        r.check(cur > prev, || format!("growing norm terms x={x}"), || cur.to_string());
        prev = cur;
    }
}
