//! Multi-indexed polynomials: deleting the virtual states `d_1..d_M` turns
//! Casoratians of the twisted polynomials into the denominator polynomial
//! `Xi_D` and the eigenpolynomials `P_{D,n}` of the deformed system.
//!
//! Coefficients are extracted by evaluating the Casoratians on the lattice,
//! dividing out the closed-form prefactors and interpolating in `eta`. Every
//! construction is re-validated on lattice points beyond the interpolation
//! nodes.

mod chain;
mod orthogonality;
mod verify;

use std::fmt;

use num_traits::{One, Zero};

use crate::base::FamilyParams;
use crate::casoratian::casoratian_from_columns;
use crate::error::{Error, Result};
use crate::exact::{fmt_rational, int, interpolate, powi, EtaPolynomial, Rational};
use crate::virtual_states::{nu, v_max, virtual_energy, xi_poly};

pub use chain::{chain_build, chain_verify, sign_factor, verify_order_independence, ChainState};
pub use orthogonality::{orthogonality_sum, verify_orthogonality, OrthogonalitySum};
pub use verify::{
    count_sign_changes, verify_eigen_equation, verify_nodes, verify_potentials,
    verify_shape_invariance, verify_special_identities, verify_structure,
};

/// Extra lattice points on which an interpolated polynomial is re-checked.
const VALIDATION_POINTS: i64 = 10;

/// Sorted, distinct labels of the deleted virtual states.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DeletionSet {
    labels: Vec<usize>,
}

impl DeletionSet {
    /// Checks that the labels are distinct, positive and inside the index
    /// set of `p`; the result is sorted.
    pub fn new(p: &FamilyParams, mut labels: Vec<usize>) -> Result<Self> {
        labels.sort_unstable();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidDeletionSet(format!(
                "labels must be distinct, got {labels:?}"
            )));
        }
        if labels.first() == Some(&0) {
            return Err(Error::InvalidDeletionSet("labels must be at least 1".into()));
        }
        check_index_set(p, &labels)?;
        Ok(DeletionSet { labels })
    }

    pub fn empty() -> Self {
        DeletionSet { labels: Vec::new() }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn ell(&self) -> usize {
        ell(&self.labels)
    }
}

impl fmt::Display for DeletionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.labels.iter().map(|d| d.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

fn check_index_set(p: &FamilyParams, labels: &[usize]) -> Result<()> {
    if let Some(vm) = v_max(p) {
        if let Some(d) = labels.iter().find(|&&d| d > vm) {
            return Err(Error::InvalidDeletionSet(format!(
                "label {d} lies outside the index set 1..={vm} of {p} (needs a < q^d)"
            )));
        }
    }
    Ok(())
}

/// `l_D = sum d_j - M(M-1)/2`.
pub fn ell(labels: &[usize]) -> usize {
    let m = labels.len();
    labels.iter().sum::<usize>() - m * m.saturating_sub(1) / 2
}

/// `varphi_M(x) = prod_{j<k} varphi(x+j-1)`: 1 for M, `q^{M(M-1)x/2 + M(M-1)(M-2)/6}` otherwise.
pub fn varphi_m(p: &FamilyParams, m: usize, x: i64) -> Rational {
    match p.q() {
        None => Rational::one(),
        Some(q) => {
            let mm = m as i64;
            let e = mm * (mm - 1) / 2 * x + mm * (mm - 1) * (mm - 2) / 6;
            powi(q, e)
        }
    }
}

/// `alpha B'(x)` at the lattice point `x`.
pub(crate) fn alpha_b_prime(p: &FamilyParams, x: i64) -> Rational {
    p.alpha_constants().0 * p.twist().potential_b(x)
}

/// Closed form of `C_D` for the labels in the given order.
pub fn c_d_closed(p: &FamilyParams, labels: &[usize]) -> Rational {
    let m = labels.len();
    let e: Vec<Rational> = labels.iter().map(|&d| virtual_energy(p, d)).collect();
    let mut acc = varphi_m(p, m, 0).recip();
    for j in 0..m {
        let den = alpha_b_prime(p, j as i64);
        for k in j + 1..m {
            acc = acc * (&e[j] - &e[k]) / &den;
        }
    }
    acc
}

/// `d~_{D,n}^2 = varphi_M(0)/varphi_{M+1}(0) prod_j (E_n - E~_{d_j}) / (alpha B'(j-1))`.
pub fn dt_sq_closed(p: &FamilyParams, labels: &[usize], n: usize) -> Rational {
    let m = labels.len();
    let en = p.energy(n);
    let mut acc = varphi_m(p, m, 0) / varphi_m(p, m + 1, 0);
    for (j, &d) in labels.iter().enumerate() {
        acc = acc * (&en - virtual_energy(p, d)) / alpha_b_prime(p, j as i64);
    }
    acc
}

/// `C_{D,n} = (-1)^M C_D d~_{D,n}^2`.
pub fn c_dn_closed(p: &FamilyParams, labels: &[usize], n: usize) -> Rational {
    let v = c_d_closed(p, labels) * dt_sq_closed(p, labels, n);
    if labels.len() % 2 == 1 {
        -v
    } else {
        v
    }
}

/// Closed form of the top coefficient of `Xi_D`.
pub fn xi_leading_closed(p: &FamilyParams, labels: &[usize]) -> Rational {
    let t = p.twist();
    let mut acc = Rational::one();
    for (j, &d) in labels.iter().enumerate() {
        acc = acc * t.leading_coeff(d) / t.leading_coeff(j);
    }
    let m = labels.len();
    for j in 0..m {
        for k in j + 1..m {
            let (dj, dk) = (labels[j] as i64, labels[k] as i64);
            let (jj, kk) = (j as i64, k as i64);
            acc *= match p {
                FamilyParams::Meixner { .. } => Rational::one(),
                FamilyParams::LittleQJacobi { a, b, q } => {
                    (a * powi(q, -(jj + kk)) - b * q) / (a * powi(q, -(dj + dk)) - b * q)
                }
                FamilyParams::LittleQLaguerre { q, .. } => powi(q, dj + dk - (jj + kk)),
            };
        }
    }
    acc
}

/// Closed form of the top coefficient of `P_{D,n}`.
pub fn p_leading_closed(p: &FamilyParams, labels: &[usize], n: usize) -> Rational {
    let mut acc = xi_leading_closed(p, labels) * p.leading_coeff(n);
    let nn = n as i64;
    for (j, &d) in labels.iter().enumerate() {
        let (d, jj) = (d as i64, j as i64);
        acc *= match p {
            FamilyParams::Meixner { beta, .. } => (beta + int(jj)) / (beta + int(d + nn)),
            FamilyParams::LittleQJacobi { b, q, .. } => {
                (powi(q, -jj) - b * q) / (powi(q, -(d + nn)) - b * q)
            }
            FamilyParams::LittleQLaguerre { q, .. } => powi(q, d + nn - jj),
        };
    }
    acc
}

/// `P_{D,n}` with the constants fixing its normalisation.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiPoly {
    pub poly: EtaPolynomial,
    pub c_dn: Rational,
    pub dt_sq: Rational,
}

/// The deformed system obtained by deleting a list of virtual states.
///
/// The labels keep the order in which they were deleted; `Xi_D` and
/// `P_{D,n}` do not depend on it.
#[derive(Clone, Debug)]
pub struct MultiIndexedSystem {
    pub params: FamilyParams,
    labels: Vec<usize>,
    /// `Xi_D(eta; lambda)`.
    pub xi: EtaPolynomial,
    /// `Xi_D(eta; lambda + delta)`.
    pub xi_up: EtaPolynomial,
    pub ell: usize,
    pub c_d: Rational,
    polys: Vec<MultiPoly>,
    seeds: Vec<EtaPolynomial>,
    base_polys: Vec<EtaPolynomial>,
}

impl MultiIndexedSystem {
    /// Builds `Xi_D` and `P_{D,n}` for `n = 0..=n_max`.
    pub fn build(p: &FamilyParams, d: &DeletionSet, n_max: usize) -> Result<Self> {
        Self::build_ordered(p, d.labels(), n_max)
    }

    /// Like [`build`](Self::build) for labels in an arbitrary deletion order.
    /// Label 0 (the constant `xi_0 = 1`) is admitted here.
    pub fn build_ordered(p: &FamilyParams, labels: &[usize], n_max: usize) -> Result<Self> {
        let mut sorted = labels.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidDeletionSet(format!(
                "labels must be distinct, got {labels:?}"
            )));
        }
        check_index_set(p, labels)?;
        let seeds = labels
            .iter()
            .map(|&d| xi_poly(p, d))
            .collect::<Result<Vec<_>>>()?;
        let base_polys = (0..=n_max).map(|n| p.p_poly(n)).collect::<Result<Vec<_>>>()?;
        let mut sys = MultiIndexedSystem {
            params: p.clone(),
            labels: labels.to_vec(),
            xi: EtaPolynomial::one(),
            xi_up: EtaPolynomial::one(),
            ell: ell(labels),
            c_d: c_d_closed(p, labels),
            polys: Vec::new(),
            seeds,
            base_polys,
        };
        sys.xi = sys.extract_xi()?;
        sys.xi_up = denominator_poly(&p.shift(1), labels)?.0;
        sys.polys = (0..=n_max)
            .map(|n| sys.extract_p(n))
            .collect::<Result<Vec<_>>>()?;
        Ok(sys)
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn m(&self) -> usize {
        self.labels.len()
    }

    pub fn n_max(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn multi_poly(&self, n: usize) -> &MultiPoly {
        &self.polys[n]
    }

    pub fn p_poly(&self, n: usize) -> &EtaPolynomial {
        &self.polys[n].poly
    }

    /// `P_n(eta; lambda)` of the undeformed system.
    pub fn base_poly(&self, n: usize) -> &EtaPolynomial {
        &self.base_polys[n]
    }

    /// `Xi_D(eta(x))`.
    pub fn xi_check(&self, x: i64) -> Rational {
        self.xi.eval(&self.params.eta(x))
    }

    pub fn xi_up_check(&self, x: i64) -> Rational {
        self.xi_up.eval(&self.params.eta(x))
    }

    /// `P_{D,n}(eta(x))`.
    pub fn p_check(&self, n: usize, x: i64) -> Rational {
        self.polys[n].poly.eval(&self.params.eta(x))
    }

    /// `lambda + M delta~`, the parameters of the ground state that survives the deletions.
    pub fn ground_params(&self) -> FamilyParams {
        self.params.tilde_shift(self.m() as i64)
    }

    /// `B_D(x) = B(x; lambda + M delta~) Xi(x)/Xi(x+1) Xi_up(x+1)/Xi_up(x)`.
    pub fn potential_b(&self, x: i64) -> Rational {
        self.ground_params().potential_b(x) * self.xi_check(x) / self.xi_check(x + 1)
            * self.xi_up_check(x + 1)
            / self.xi_up_check(x)
    }

    /// `D_D(x) = D(x) Xi(x+1)/Xi(x) Xi_up(x-1)/Xi_up(x)`.
    pub fn potential_d(&self, x: i64) -> Rational {
        let d = self.params.potential_d(x);
        if d.is_zero() {
            return d;
        }
        d * self.xi_check(x + 1) / self.xi_check(x) * self.xi_up_check(x - 1) / self.xi_up_check(x)
    }

    /// `w_D(x) = psi_D(x)^2 / Xi_D(1) = phi0(x; lambda + M delta~)^2 / (Xi(x) Xi(x+1))`.
    pub fn weight(&self, x: i64) -> Rational {
        self.ground_params().phi0_sq(x) / (self.xi_check(x) * self.xi_check(x + 1))
    }

    /// `xi_{d}(x)` for the `k`-th deleted label.
    pub(crate) fn seed_value(&self, k: usize, x: i64) -> Rational {
        self.seeds[k].eval(&self.params.eta(x))
    }

    /// `(nu P_n)(x)`.
    pub(crate) fn nu_p(&self, n: usize, x: i64) -> Rational {
        nu(&self.params, x) * self.base_polys[n].eval(&self.params.eta(x))
    }

    /// Casoratian of the first `s` seeds, optionally followed by one more function.
    pub(crate) fn casoratian_with(
        &self,
        s: usize,
        extra: Option<&dyn Fn(i64) -> Rational>,
        x: i64,
    ) -> Rational {
        let size = s + usize::from(extra.is_some());
        let mut cols: Vec<Vec<Rational>> = (0..s)
            .map(|k| (0..size).map(|j| self.seed_value(k, x + j as i64)).collect())
            .collect();
        if let Some(f) = extra {
            cols.push((0..size).map(|j| f(x + j as i64)).collect());
        }
        casoratian_from_columns(&cols)
    }

    fn extract_xi(&self) -> Result<EtaPolynomial> {
        let p = &self.params;
        let m = self.m();
        let w0 = self.casoratian_with(m, None, 0);
        let derived = w0 / varphi_m(p, m, 0);
        if derived != self.c_d {
            return Err(Error::ConstantMismatch {
                what: format!("C_D for {:?}", self.labels),
                closed: fmt_rational(&self.c_d),
                derived: fmt_rational(&derived),
            });
        }
        let value = |x: i64| self.casoratian_with(m, None, x) / (&self.c_d * varphi_m(p, m, x));
        fit(p, self.ell, format!("Xi_D for {:?}", self.labels), value)
    }

    fn extract_p(&self, n: usize) -> Result<MultiPoly> {
        let p = &self.params;
        let m = self.m();
        let dt_sq = dt_sq_closed(p, &self.labels, n);
        let c_dn = c_dn_closed(p, &self.labels, n);
        let f = |y: i64| self.nu_p(n, y);
        let derived = self.casoratian_with(m, Some(&f), 0) / varphi_m(p, m + 1, 0);
        if derived != c_dn {
            return Err(Error::ConstantMismatch {
                what: format!("C_(D,{n}) for {:?}", self.labels),
                closed: fmt_rational(&c_dn),
                derived: fmt_rational(&derived),
            });
        }
        let ground = self.ground_params();
        let value = |x: i64| {
            self.casoratian_with(m, Some(&f), x) / (&c_dn * varphi_m(p, m + 1, x) * nu(&ground, x))
        };
        let poly = fit(p, self.ell + n, format!("P_(D,{n}) for {:?}", self.labels), value)?;
        Ok(MultiPoly { poly, c_dn, dt_sq })
    }
}

/// `(Xi_D, C_D)` without building any `P_{D,n}`.
pub fn denominator_poly(p: &FamilyParams, labels: &[usize]) -> Result<(EtaPolynomial, Rational)> {
    check_index_set(p, labels)?;
    let seeds = labels.iter().map(|&d| xi_poly(p, d)).collect::<Result<Vec<_>>>()?;
    let sys = MultiIndexedSystem {
        params: p.clone(),
        labels: labels.to_vec(),
        xi: EtaPolynomial::one(),
        xi_up: EtaPolynomial::one(),
        ell: ell(labels),
        c_d: c_d_closed(p, labels),
        polys: Vec::new(),
        seeds,
        base_polys: Vec::new(),
    };
    let xi = sys.extract_xi()?;
    Ok((xi, sys.c_d))
}

/// Interpolates `value` at `x = 0..=degree` in `eta` and re-validates on
/// further lattice points; the result must have exactly the expected degree.
fn fit(
    p: &FamilyParams,
    degree: usize,
    what: String,
    value: impl Fn(i64) -> Rational,
) -> Result<EtaPolynomial> {
    let top = degree as i64;
    let pts: Vec<(Rational, Rational)> = (0..=top).map(|x| (p.eta(x), value(x))).collect();
    let poly = interpolate(&pts)?;
    for x in top + 1..=top + VALIDATION_POINTS {
        if poly.eval(&p.eta(x)) != value(x) {
            return Err(Error::Validation { what, x });
        }
    }
    if poly.degree() != Some(degree) {
        return Err(Error::DegreeAnomaly {
            what,
            expected: degree,
            found: format!("{:?}", poly.degree()),
        });
    }
    Ok(poly)
}
