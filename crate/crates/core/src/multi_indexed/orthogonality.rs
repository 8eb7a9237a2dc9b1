//! Orthogonality sums with certified tails.
//!
//! The summand is `t(x) = phi0(x; lambda')^2 R(x)` with
//! `R = P_{D,n} P_{D,m} / (Xi(x) Xi(x+1))`. Past a computable point `R` is
//! bounded by `K x^e` (M) or by a constant `K` (q-families), and the ground
//! state ratio is bounded by some `r < 1`, so the tail is dominated by a
//! geometric series.

use num_traits::{One, Signed, Zero};

use super::MultiIndexedSystem;
use crate::base::FamilyParams;
use crate::error::{Error, Result};
use crate::exact::{fmt_rational, int, powi, to_f64, Enclosure, EtaPolynomial, Rational};
use crate::report::CheckReport;

/// Hard cap on the number of summed terms.
const MAX_TERMS: i64 = 5000;

#[derive(Clone, Debug)]
pub struct OrthogonalitySum {
    pub n: usize,
    pub m: usize,
    /// Exact partial sum over `x = 0..=last`.
    pub partial: Rational,
    pub last: i64,
    /// Certified bound on the absolute value of the omitted tail.
    pub tail_bound: Rational,
    /// `delta_nm / (d_n^2 d~_{D,n}^2)`.
    pub target: Enclosure,
    /// Scale that the relative tolerance refers to.
    pub scale: Rational,
    /// Distance to the target plus tail bound: the certified error.
    pub certified_error: Rational,
    pub pass: bool,
}

fn abs_sum(poly: &EtaPolynomial) -> Rational {
    poly.coeffs().iter().map(|a| a.abs()).sum()
}

/// `1/(d_n^2 d~_{D,n}^2)` enclosed with relative error well below `rel_tol`.
fn diagonal_target(sys: &MultiIndexedSystem, n: usize, rel_tol: &Rational) -> Result<Enclosure> {
    let p = &sys.params;
    let coarse = p.dn_sq(n)?;
    let eps = rel_tol * coarse.lo.abs() / int(1000);
    let dn = p.dn_sq_eps(n, &eps)?;
    dn.scale(&sys.multi_poly(n).dt_sq).recip()
}

/// Tail majorant: returns `(start, bound)` such that
/// `|t(x)| <= bound(x)` for `x >= start`, and a ratio bound for it.
struct Tail {
    /// Constant in front of the majorant.
    k: Rational,
    /// Power of `x` in the majorant (M only).
    e: u32,
    /// First lattice point where the majorant is valid.
    start: i64,
}

fn tail_majorant(sys: &MultiIndexedSystem, n: usize, m: usize) -> Result<Tail> {
    let p = &sys.params;
    let pn = sys.p_poly(n);
    let pm = sys.p_poly(m);
    let s = abs_sum(pn) * abs_sum(pm);
    match p.q() {
        None => {
            // |Xi(x)| >= |lead| x^l / 2 once sum_{k<l} |a_k/lead| x^{k-l} <= 1/2
            let lead = sys.xi.leading().abs();
            let l = sys.ell;
            let ratios: Vec<Rational> = sys.xi.coeffs()[..l].iter().map(|a| a.abs() / &lead).collect();
            let mut start = 1i64;
            loop {
                let x = int(start);
                let excess: Rational = ratios
                    .iter()
                    .enumerate()
                    .map(|(k, a)| a / powi(&x, (l - k) as i64))
                    .sum();
                if excess * int(2) <= Rational::one() {
                    break;
                }
                start += 1;
            }
            Ok(Tail {
                k: int(4) * s / (&lead * &lead),
                e: (n + m) as u32,
                start,
            })
        }
        Some(q) => {
            // |Xi(eta) - Xi(1)| <= sum k|a_k| q^x on the lattice
            let at_one: Rational = sys.xi.coeffs().iter().sum();
            if !at_one.is_positive() {
                return Err(Error::NonDecaying(format!(
                    "Xi_D(eta=1) = {} is not positive",
                    fmt_rational(&at_one)
                )));
            }
            let lip: Rational = sys
                .xi
                .coeffs()
                .iter()
                .enumerate()
                .map(|(k, a)| a.abs() * int(k as i64))
                .sum();
            let mut start = 0i64;
            let mut qx = Rational::one();
            while &lip * &qx * int(2) > at_one {
                start += 1;
                qx *= q;
            }
            Ok(Tail { k: int(4) * s / (&at_one * &at_one), e: 0, start })
        }
    }
}

/// Bound on `u(x+1)/u(x)` valid for all `x >= y`, where
/// `u(x) = phi0(x; g)^2 x^e`; `None` if it is not below 1.
fn ratio_bound(g: &FamilyParams, e: u32, y: i64) -> Option<Rational> {
    let one = Rational::one();
    let r = match g {
        FamilyParams::Meixner { beta, c } => {
            // c (x+beta)/(x+1) (1+1/x)^e
            let yr = int(y);
            let growth = &one + (beta - &one).abs() / (&yr + &one);
            c * growth * powi(&(&one + yr.recip()), e as i64)
        }
        FamilyParams::LittleQJacobi { a, b, q } => {
            let qy = powi(q, y + 1);
            a * q * (&one + b.abs() * &qy) / (&one - &qy)
        }
        FamilyParams::LittleQLaguerre { a, q } => {
            let qy = powi(q, y + 1);
            a * q / (&one - &qy)
        }
    };
    (r < one).then_some(r)
}

/// `sum_x w_D(x) P_{D,n}(x) P_{D,m}(x)` with a certified tail, compared with
/// `delta_nm / (d_n^2 d~_{D,n}^2)` at relative tolerance `rel_tol`.
pub fn orthogonality_sum(
    sys: &MultiIndexedSystem,
    n: usize,
    m: usize,
    rel_tol: &Rational,
) -> Result<OrthogonalitySum> {
    let g = sys.ground_params();
    let tn = diagonal_target(sys, n, rel_tol)?;
    let target = if n == m {
        tn.clone()
    } else {
        Enclosure::exact(Rational::zero())
    };
    let scale = if n == m {
        tn.lo.clone()
    } else {
        let tm = diagonal_target(sys, m, rel_tol)?;
        if tm.lo < tn.lo {
            tm.lo
        } else {
            tn.lo
        }
    };
    let goal = rel_tol * &scale / int(4);
    let tail = tail_majorant(sys, n, m)?;
    let mut partial = Rational::zero();
    let mut x = 0i64;
    loop {
        partial += sys.weight(x) * sys.p_check(n, x) * sys.p_check(m, x);
        let y = x + 1;
        if y >= tail.start.max(1) {
            if let Some(r) = ratio_bound(&g, tail.e, y) {
                let u = g.phi0_sq(y) * powi(&int(y), tail.e as i64);
                let bound = &tail.k * u / (Rational::one() - r);
                if bound <= goal {
                    let certified_error = target.max_distance(&partial) + &bound;
                    let pass = certified_error <= rel_tol * &scale;
                    return Ok(OrthogonalitySum {
                        n,
                        m,
                        partial,
                        last: x,
                        tail_bound: bound,
                        target,
                        scale,
                        certified_error,
                        pass,
                    });
                }
            }
        }
        x += 1;
        if x > MAX_TERMS {
            return Err(Error::NonDecaying(format!(
                "tail bound not reached after {MAX_TERMS} terms for {g}"
            )));
        }
    }
}

/// All pairs `0 <= n, m <= n_max`.
pub fn verify_orthogonality(sys: &MultiIndexedSystem, n_max: usize, rel_tol: &Rational) -> CheckReport {
    let mut r = CheckReport::new(
        format!("multi.orthogonality[{}, D={:?}]", sys.params, sys.labels()),
        "sum_x w_D(x) P_(D,n)(x) P_(D,m)(x) = delta_nm / (d_n^2 d~_(D,n)^2)",
    );
    for n in 0..=n_max.min(sys.n_max()) {
        for m in n..=n_max.min(sys.n_max()) {
            match orthogonality_sum(sys, n, m, rel_tol) {
                Ok(s) => r.record(s.pass, || {
                    (
                        format!("n={n} m={m} terms=0..={} certified error {:.3e}", s.last, to_f64(&s.certified_error)),
                        fmt_rational(&s.partial),
                        format!("[{}, {}]", fmt_rational(&s.target.lo), fmt_rational(&s.target.hi)),
                    )
                }),
                Err(e) => r.error(format!("n={n} m={m}"), e),
            }
        }
    }
    r
}
