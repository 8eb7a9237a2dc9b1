use num_traits::{One, Signed, Zero};

use super::{
    c_d_closed, c_dn_closed, p_leading_closed, varphi_m, xi_leading_closed, DeletionSet,
    MultiIndexedSystem,
};
use crate::base::FamilyParams;
use crate::exact::{int, EtaPolynomial, Rational};
use crate::report::CheckReport;

/// Upper end of the positivity window for `Xi_D`.
const POSITIVITY_WINDOW: i64 = 100;

fn tag(sys: &MultiIndexedSystem) -> String {
    format!("{}, D={:?}", sys.params, sys.labels())
}

/// Normalisation, degrees, leading coefficients, the constants `C_D`,
/// `C_{D,n}` and positivity of `Xi_D` on the lattice.
pub fn verify_structure(sys: &MultiIndexedSystem) -> CheckReport {
    let p = &sys.params;
    let labels = sys.labels();
    let m = sys.m();
    let mut r = CheckReport::new(
        format!("multi.structure[{}]", tag(sys)),
        "Xi_D(0)=P_(D,n)(0)=1, deg Xi_D = l_D, deg P_(D,n) = l_D+n, leading coefficients, C_D and C_(D,n) closed forms, Xi_D(x)>0",
    );
    let expected_ell = labels.iter().sum::<usize>() as i64 - (m * m.saturating_sub(1) / 2) as i64;
    r.check(sys.ell as i64 == expected_ell, || "l_D".into(), || sys.ell.to_string());
    r.check_eq(|| "Xi_D(0)".into(), &sys.xi_check(0), &Rational::one());
    r.check(
        sys.xi.degree() == Some(sys.ell),
        || "deg Xi_D".into(),
        || format!("{:?}", sys.xi.degree()),
    );
    r.check_eq(
        || "leading coefficient of Xi_D".into(),
        &sys.xi.leading(),
        &xi_leading_closed(p, labels),
    );
    let w0 = sys.casoratian_with(m, None, 0);
    r.check_eq(|| "C_D".into(), &(w0 / varphi_m(p, m, 0)), &c_d_closed(p, labels));
    for n in 0..=sys.n_max() {
        let poly = sys.p_poly(n);
        r.check_eq(|| format!("P_(D,{n})(0)"), &sys.p_check(n, 0), &Rational::one());
        r.check(
            poly.degree() == Some(sys.ell + n),
            || format!("deg P_(D,{n})"),
            || format!("{:?}", poly.degree()),
        );
        r.check_eq(
            || format!("leading coefficient of P_{n}"),
            &sys.base_poly(n).leading(),
            &p.leading_coeff(n),
        );
        r.check_eq(
            || format!("leading coefficient of P_(D,{n})"),
            &poly.leading(),
            &p_leading_closed(p, labels, n),
        );
        let f = |y: i64| sys.nu_p(n, y);
        let w0 = sys.casoratian_with(m, Some(&f), 0);
        r.check_eq(
            || format!("C_(D,{n})"),
            &(w0 / varphi_m(p, m + 1, 0)),
            &c_dn_closed(p, labels, n),
        );
    }
    for x in 0..=POSITIVITY_WINDOW {
        let v = sys.xi_check(x);
        r.check(v.is_positive(), || format!("Xi_D>0 x={x}"), || v.to_string());
    }
    r
}

/// Positivity and boundary value of `B_D`, `D_D`, the zero-mode relation of
/// the deformed ground state and the closed form of the weight.
pub fn verify_potentials(sys: &MultiIndexedSystem, x_max: i64) -> CheckReport {
    let mut r = CheckReport::new(
        format!("multi.potentials[{}]", tag(sys)),
        "B_D(x)>0, D_D(x+1)>0, D_D(0)=0, B_D(x) w_D(x) P_(D,0)(x)^2 = D_D(x+1) w_D(x+1) P_(D,0)(x+1)^2, w_D(0) = 1/Xi_D(1), Xi_D(1) w_D(x) P_(D,0)(x)^2 = prod B_D(y)/D_D(y+1)",
    );
    r.check_eq(|| "D_D(0)".into(), &sys.potential_d(0), &Rational::zero());
    r.check_eq(|| "w_D(0)".into(), &sys.weight(0), &sys.xi_check(1).recip());
    let xi1 = sys.xi_check(1);
    let mut ground_sq = Rational::one();
    for x in 0..=x_max {
        let b = sys.potential_b(x);
        let d = sys.potential_d(x + 1);
        r.check(b.is_positive(), || format!("B_D>0 x={x}"), || b.to_string());
        r.check(d.is_positive(), || format!("D_D>0 x={}", x + 1), || d.to_string());
        let p0 = sys.p_check(0, x);
        let p1 = sys.p_check(0, x + 1);
        let lhs = &b * sys.weight(x) * &p0 * &p0;
        let rhs = &d * sys.weight(x + 1) * &p1 * &p1;
        r.check_eq(|| format!("zero mode x={x}"), &lhs, &rhs);
        r.check_eq(
            || format!("ground state product x={x}"),
            &(&xi1 * sys.weight(x) * &p0 * &p0),
            &ground_sq,
        );
        ground_sq = ground_sq * b / d;
    }
    r
}

/// The similarity-transformed deformed Hamiltonian has the `P_{D,n}` as
/// eigenpolynomials; also checked in the ground-state gauge
/// `B_D (Q(x)-Q(x+1)) + D_D (Q(x)-Q(x-1)) = E_n Q(x)`, `Q = P_{D,n}/P_{D,0}`.
pub fn verify_eigen_equation(sys: &MultiIndexedSystem, n_max: usize, x_max: i64) -> CheckReport {
    let p = &sys.params;
    let ground = sys.ground_params();
    let mut r = CheckReport::new(
        format!("multi.eigen_equation[{}]", tag(sys)),
        "B(x;l+M d~) Xi(x)/Xi(x+1) (Xi(x+1;l+d)/Xi(x;l+d) P(x) - P(x+1)) + D(x) Xi(x+1)/Xi(x) (Xi(x-1;l+d)/Xi(x;l+d) P(x) - P(x-1)) = E_n P(x)",
    );
    for n in 0..=n_max.min(sys.n_max()) {
        let e = p.energy(n);
        for x in 0..=x_max {
            let pv = sys.p_check(n, x);
            let (xi0, xi1) = (sys.xi_check(x), sys.xi_check(x + 1));
            let (u0, u1, um) = (sys.xi_up_check(x), sys.xi_up_check(x + 1), sys.xi_up_check(x - 1));
            let lhs = ground.potential_b(x) * &xi0 / &xi1 * (&u1 / &u0 * &pv - sys.p_check(n, x + 1))
                + p.potential_d(x) * &xi1 / &xi0 * (&um / &u0 * &pv - sys.p_check(n, x - 1));
            r.check_eq(|| format!("n={n} x={x}"), &lhs, &(&e * &pv));

            let q = |y: i64| sys.p_check(n, y) / sys.p_check(0, y);
            let qx = q(x);
            let dd = sys.potential_d(x);
            let mut lhs = sys.potential_b(x) * (&qx - q(x + 1));
            if !dd.is_zero() {
                lhs += dd * (&qx - q(x - 1));
            }
            r.check_eq(|| format!("ground-state gauge n={n} x={x}"), &lhs, &(&e * &qx));
        }
    }
    r
}

/// Forward/backward shift relations of the deformed system (both forms of
/// the backward operator), their composition, and the square-root-free
/// shape invariance of the deformed potentials. `up` must be built at
/// `lambda + delta` with the same labels.
pub fn verify_shape_invariance(
    sys: &MultiIndexedSystem,
    up: &MultiIndexedSystem,
    n_max: usize,
    x_max: i64,
) -> CheckReport {
    let p = &sys.params;
    let ground = sys.ground_params();
    let mut r = CheckReport::new(
        format!("multi.shape_invariance[{}]", tag(sys)),
        "F_D P_(D,n)(x;l) = E_n P_(D,n-1)(x;l+d), B_D P_(D,n-1)(x;l+d) = P_(D,n)(x;l), B_D F_D = H~_D, A_D A_D^dag = kappa A_D(l+d)^dag A_D(l+d) + E_1",
    );
    if up.params != p.shift(1) || up.labels() != sys.labels() {
        r.error("setup", "shifted system does not match lambda + delta");
        return r;
    }
    let b0 = ground.potential_b(0);
    let forward = |f: &dyn Fn(i64) -> Rational, x: i64| -> Rational {
        &b0 / (p.varphi(x) * sys.xi_check(x + 1))
            * (sys.xi_up_check(x + 1) * f(x) - sys.xi_up_check(x) * f(x + 1))
    };
    let backward = |g: &dyn Fn(i64) -> Rational, x: i64| -> Rational {
        let mut v = ground.potential_b(x) * sys.xi_check(x) * p.varphi(x) * g(x);
        let d = p.potential_d(x);
        if !d.is_zero() {
            v -= d * sys.xi_check(x + 1) * p.varphi(x - 1) * g(x - 1);
        }
        v / (&b0 * sys.xi_up_check(x))
    };
    // psi_D(x; lambda)^2 for the system `s`
    let psi_sq = |s: &MultiIndexedSystem, x: i64| -> Rational {
        let g = s.ground_params().phi0_sq(x);
        if g.is_zero() {
            return g;
        }
        s.xi_check(1) * g / (s.xi_check(x) * s.xi_check(x + 1))
    };
    let backward_psi = |g: &dyn Fn(i64) -> Rational, x: i64| -> Rational {
        let h = |y: i64| psi_sq(up, y) * g(y) / (p.varphi(y) * sys.xi_check(y + 1));
        let mut inner = sys.xi_up_check(x + 1) * h(x);
        if x > 0 {
            inner -= sys.xi_up_check(x - 1) * h(x - 1);
        }
        sys.xi_check(1) / up.xi_check(1) * inner / psi_sq(sys, x)
    };
    for n in 1..=n_max.min(sys.n_max()).min(up.n_max() + 1) {
        let e = p.energy(n);
        let pn = |y: i64| sys.p_check(n, y);
        let pm = |y: i64| up.p_check(n - 1, y);
        let fpn = |y: i64| forward(&pn, y);
        for x in 0..=x_max {
            r.check_eq(|| format!("forward n={n} x={x}"), &fpn(x), &(&e * pm(x)));
            r.check_eq(|| format!("backward n={n} x={x}"), &backward(&pm, x), &pn(x));
            r.check_eq(
                || format!("backward (psi form) n={n} x={x}"),
                &backward_psi(&pm, x),
                &pn(x),
            );
            r.check_eq(
                || format!("round trip n={n} x={x}"),
                &backward(&fpn, x),
                &(&e * pn(x)),
            );
        }
    }
    let kappa = p.kappa();
    let e1 = p.energy(1);
    for x in 0..=x_max {
        let lhs = sys.potential_b(x) + sys.potential_d(x + 1);
        let rhs = &kappa * (up.potential_b(x) + up.potential_d(x)) + &e1;
        r.check_eq(|| format!("diagonal x={x}"), &lhs, &rhs);
        if x >= 1 {
            let lhs = sys.potential_b(x) * sys.potential_d(x);
            let rhs = &kappa * &kappa * up.potential_b(x - 1) * up.potential_d(x);
            r.check_eq(|| format!("off-diagonal x={x}"), &lhs, &rhs);
        }
    }
    r
}

/// `P_{D,0}(x; lambda) = Xi_D(x; lambda + delta)` and the reduction of a
/// level-0 deletion, `P_{D+{0},n}(x; lambda) = P_{D',n}(x; lambda + delta~)`
/// with `D' = {d_j - 1}` (likewise for `Xi`).
pub fn verify_special_identities(p: &FamilyParams, d: &DeletionSet, n_max: usize) -> CheckReport {
    let mut r = CheckReport::new(
        format!("multi.special_identities[{p}, D={d}]"),
        "P_(D,0)(x;l) = Xi_D(x;l+d); P_(D,n)(x;l)|_(d_M=0) = P_(D',n)(x;l+d~), D'={d_j-1}",
    );
    let sys = match MultiIndexedSystem::build(p, d, n_max) {
        Ok(s) => s,
        Err(e) => {
            r.error("build", e);
            return r;
        }
    };
    compare_polys(&mut r, "P_(D,0) vs Xi_D(l+d)", sys.p_poly(0), &sys.xi_up);

    let mut with_zero = d.labels().to_vec();
    with_zero.push(0);
    let reduced: Vec<usize> = d.labels().iter().map(|&v| v - 1).collect();
    let lhs = MultiIndexedSystem::build_ordered(p, &with_zero, n_max);
    let rhs = MultiIndexedSystem::build_ordered(&p.tilde_shift(1), &reduced, n_max);
    match (lhs, rhs) {
        (Ok(a), Ok(b)) => {
            compare_polys(&mut r, "Xi with level 0", &a.xi, &b.xi);
            for n in 0..=n_max {
                compare_polys(&mut r, &format!("P_(D,{n}) with level 0"), a.p_poly(n), b.p_poly(n));
                r.check_eq(|| format!("x=0 n={n}"), &a.p_check(n, 0), &Rational::one());
            }
        }
        (Err(e), _) | (_, Err(e)) => r.error("level-0 build", e),
    }
    r
}

fn compare_polys(r: &mut CheckReport, what: &str, a: &EtaPolynomial, b: &EtaPolynomial) {
    let len = a.coeffs().len().max(b.coeffs().len());
    for k in 0..len {
        r.check_eq(|| format!("{what}: coefficient {k}"), &a.coeff(k), &b.coeff(k));
    }
}

/// Number of strict sign changes, zeros skipped.
pub fn count_sign_changes(values: &[Rational]) -> usize {
    let mut last: Option<bool> = None;
    let mut count = 0;
    for v in values {
        if v.is_zero() {
            continue;
        }
        let pos = v.is_positive();
        if last.is_some_and(|l| l != pos) {
            count += 1;
        }
        last = Some(pos);
    }
    count
}

/// Lattice point beyond which `P(eta(x))` provably keeps its sign.
fn sign_window(p: &FamilyParams, poly: &EtaPolynomial) -> Option<i64> {
    let lead = poly.leading();
    let deg = poly.degree()?;
    match p.q() {
        None => {
            // Cauchy bound on the real roots.
            let bound = poly.coeffs()[..deg]
                .iter()
                .map(|a| (a / &lead).abs())
                .fold(Rational::zero(), |m, v| if v > m { v } else { m })
                + Rational::one();
            Some(bound.ceil().to_integer().try_into().ok()?)
        }
        Some(q) => {
            // |P(eta) - P(1)| <= sum k|a_k| (1 - eta) on [0, 1]
            let at_one: Rational = poly.coeffs().iter().sum();
            if at_one.is_zero() {
                return None;
            }
            let lip: Rational = poly
                .coeffs()
                .iter()
                .enumerate()
                .map(|(k, a)| a.abs() * int(k as i64))
                .sum();
            let mut x = 0;
            let mut qx = Rational::one();
            while lip.clone() * &qx >= at_one.abs() {
                x += 1;
                qx *= q;
            }
            Some(x)
        }
    }
}

/// `P_{D,n}(x)` changes sign exactly `n` times on the lattice.
pub fn verify_nodes(sys: &MultiIndexedSystem, n_max: usize) -> CheckReport {
    let mut r = CheckReport::new(
        format!("multi.nodes[{}]", tag(sys)),
        "P_(D,n)(eta(x)) has exactly n sign changes on x = 0, 1, 2, ...",
    );
    for n in 0..=n_max.min(sys.n_max()) {
        let Some(top) = sign_window(&sys.params, sys.p_poly(n)) else {
            r.error(format!("n={n}"), "no certified sign window");
            continue;
        };
        let values: Vec<Rational> = (0..=top + 1).map(|x| sys.p_check(n, x)).collect();
        let changes = count_sign_changes(&values);
        r.check(changes == n, || format!("n={n} window 0..={}", top + 1), || changes.to_string());
    }
    r
}
