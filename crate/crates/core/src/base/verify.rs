use num_traits::{One, Zero};

use super::FamilyParams;
use crate::exact::{int, rat, Rational};
use crate::report::CheckReport;

/// Sample sites away from the lattice: `x = k + 1/3` for M, `z = (3/5) q^k` otherwise.
pub(crate) fn off_lattice_sites(p: &FamilyParams, count: i64) -> Vec<Rational> {
    (0..count)
        .map(|k| match p.q() {
            None => int(k) + rat(1, 3),
            Some(_) => rat(3, 5) * p.site(k),
        })
        .collect()
}

/// `B(x)(P(x) - P(x+1)) + D(x)(P(x) - P(x-1)) = E_n P(x)` at lattice points
/// `0..=x_max` and at rational off-lattice sites.
pub fn verify_difference_equation(p: &FamilyParams, n: usize, x_max: i64) -> CheckReport {
    let mut r = CheckReport::new(
        format!("base.difference_equation[{p}, n={n}]"),
        "B(x)(P_n(x)-P_n(x+1)) + D(x)(P_n(x)-P_n(x-1)) = E_n P_n(x)",
    );
    let e = p.energy(n);
    let lattice = (0..=x_max).map(|x| (format!("x={x}"), p.site(x)));
    let off = off_lattice_sites(p, 6)
        .into_iter()
        .map(|s| (format!("site={s}"), s));
    for (loc, s) in lattice.chain(off) {
        let pv = p.p_value_at(n, &s);
        let lhs = p.b_at(&s) * (&pv - p.p_value_at(n, &p.site_step(&s, 1)))
            + p.d_at(&s) * (&pv - p.p_value_at(n, &p.site_step(&s, -1)));
        r.check_eq(|| format!("n={n} {loc}"), &lhs, &(&e * &pv));
    }
    r
}

/// `F P(x) = B(0)/varphi(x) (P(x) - P(x+1))`.
pub(crate) fn forward_shift(p: &FamilyParams, s: &Rational, f: impl Fn(&Rational) -> Rational) -> Rational {
    p.b_at(&p.site(0)) / p.varphi_at(s) * (f(s) - f(&p.site_step(s, 1)))
}

/// `B Q(x) = (B(x) varphi(x) Q(x) - D(x) varphi(x-1) Q(x-1)) / B(0)`.
pub(crate) fn backward_shift(p: &FamilyParams, s: &Rational, f: impl Fn(&Rational) -> Rational) -> Rational {
    let sm = p.site_step(s, -1);
    (p.b_at(s) * p.varphi_at(s) * f(s) - p.d_at(s) * p.varphi_at(&sm) * f(&sm)) / p.b_at(&p.site(0))
}

/// Rodrigues-type formula
/// `P_n(x) = phi0(x)^-2 ((1 - e^-d) varphi^-1)^n phi0(x; lambda + n delta)^2`.
pub fn rodrigues_value(p: &FamilyParams, n: usize, x: i64) -> Rational {
    let shifted = p.shift(n as i64);
    let lo = x - n as i64;
    // window[i] holds the current function at x - n + i
    let mut window: Vec<Rational> = (lo..=x).map(|y| shifted.phi0_sq(y)).collect();
    for step in 0..n {
        let first = lo + step as i64 + 1;
        window = (1..window.len())
            .map(|i| {
                let y = first + i as i64 - 1;
                &window[i] / p.varphi(y) - &window[i - 1] / p.varphi(y - 1)
            })
            .collect();
    }
    debug_assert_eq!(window.len(), 1);
    &window[0] / p.phi0_sq(x)
}

/// Forward/backward shift relations, the Rodrigues formula and the
/// square-root-free form of the shape invariance condition.
pub fn verify_shift_relations(p: &FamilyParams, n_max: usize) -> CheckReport {
    let mut r = CheckReport::new(
        format!("base.shift_relations[{p}]"),
        "F P_n(x;l) = E_n P_{n-1}(x;l+d), B P_{n-1}(x;l+d) = P_n(x;l), Rodrigues formula, shape invariance",
    );
    let up = p.shift(1);
    let x_top = n_max as i64 + 5;
    let sites: Vec<(String, Rational)> = (0..=x_top)
        .map(|x| (format!("x={x}"), p.site(x)))
        .chain(off_lattice_sites(p, 3).into_iter().map(|s| (format!("site={s}"), s)))
        .collect();
    for n in 1..=n_max {
        let e = p.energy(n);
        for (loc, s) in &sites {
            let fwd = forward_shift(p, s, |t| p.p_value_at(n, t));
            r.check_eq(|| format!("forward n={n} {loc}"), &fwd, &(&e * up.p_value_at(n - 1, s)));
            let bwd = backward_shift(p, s, |t| up.p_value_at(n - 1, t));
            r.check_eq(|| format!("backward n={n} {loc}"), &bwd, &p.p_value_at(n, s));
        }
    }
    for n in 0..=n_max {
        for x in 0..=x_top {
            r.check_eq(
                || format!("rodrigues n={n} x={x}"),
                &rodrigues_value(p, n, x),
                &p.p_value(n, x),
            );
        }
    }
    // A A^dag = kappa A(l+d)^dag A(l+d) + E_1 written entrywise without square roots.
    let kappa = p.kappa();
    let e1 = p.energy(1);
    for x in 0..=x_top {
        let lhs = p.potential_b(x) + p.potential_d(x + 1);
        let rhs = &kappa * (up.potential_b(x) + up.potential_d(x)) + &e1;
        r.check_eq(|| format!("shape invariance diagonal x={x}"), &lhs, &rhs);
        if x >= 1 {
            let lhs = p.potential_b(x) * p.potential_d(x);
            let rhs = &kappa * &kappa * up.potential_b(x - 1) * up.potential_d(x);
            r.check_eq(|| format!("shape invariance off-diagonal x={x}"), &lhs, &rhs);
        }
    }
    r
}

/// Zero-mode relation of the ground state, its closed form, the
/// `varphi`/`eta` relation, boundary values and the ordering of the spectrum.
pub fn verify_zero_mode(p: &FamilyParams, x_max: i64, n_max: usize) -> CheckReport {
    let mut r = CheckReport::new(
        format!("base.ground_state[{p}]"),
        "B(x) phi0(x)^2 = D(x+1) phi0(x+1)^2, phi0(0)=1, varphi(x) = (eta(x+1)-eta(x))/eta(1), 0=E_0<E_1<...",
    );
    r.check_eq(|| "phi0(0)^2".into(), &p.phi0_sq(0), &Rational::one());
    r.check_eq(|| "D(0)".into(), &p.potential_d(0), &Rational::zero());
    r.check_eq(|| "eta(0)".into(), &p.eta(0), &Rational::zero());
    r.check_eq(|| "E_0".into(), &p.energy(0), &Rational::zero());
    for x in 0..=x_max {
        let lhs = p.potential_b(x) * p.phi0_sq(x);
        let rhs = p.potential_d(x + 1) * p.phi0_sq(x + 1);
        r.check_eq(|| format!("zero mode x={x}"), &lhs, &rhs);
        r.check_eq(
            || format!("phi0^2 closed vs recursion x={x}"),
            &p.phi0_sq(x),
            &p.phi0_sq_by_recursion(x),
        );
        let vp = (p.eta(x + 1) - p.eta(x)) / p.eta(1);
        r.check_eq(|| format!("varphi x={x}"), &p.varphi(x), &vp);
        let b = p.potential_b(x);
        r.check(b > Rational::zero(), || format!("B>0 x={x}"), || b.to_string());
        let d = p.potential_d(x + 1);
        r.check(d > Rational::zero(), || format!("D>0 x={}", x + 1), || d.to_string());
    }
    for n in 0..n_max {
        let (a, b) = (p.energy(n), p.energy(n + 1));
        r.check(a < b, || format!("E_{n} < E_{}", n + 1), || format!("{a} vs {b}"));
    }
    r
}

/// Meixner self-duality `P_n(x) = P_x(n)` on `0 <= n, x <= size`.
pub fn verify_dual_spot_check(p: &FamilyParams, size: usize) -> CheckReport {
    let mut r = CheckReport::new(format!("base.self_duality[{p}]"), "Meixner: P_n(x) = P_x(n)");
    if p.q().is_some() {
        return r;
    }
    for n in 0..=size {
        for x in 0..=size {
            r.check_eq(
                || format!("n={n} x={x}"),
                &p.p_value(n, x as i64),
                &p.p_value(x, n as i64),
            );
        }
    }
    r
}
