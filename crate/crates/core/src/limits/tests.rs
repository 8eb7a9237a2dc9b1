use super::*;
use crate::base::Family;
use crate::exact::rat;

fn poly(c: &[Rational]) -> EtaPolynomial {
    Poly::new(c.to_vec())
}

#[test]
fn classical_low_degrees() {
    let a = rat(3, 2);
    assert_eq!(laguerre(&a, 0).poly, Poly::one());
    assert_eq!(jacobi(&a, &int(2), 0).poly, Poly::one());
    // L_1 = alpha + 1 - eta
    assert_eq!(laguerre(&int(0), 1).poly, poly(&[int(1), int(-1)]));
    assert_eq!(laguerre(&a, 1).poly, poly(&[rat(5, 2), int(-1)]));
    // P_1(-1) = -(beta+1)
    assert_eq!(jacobi(&a, &int(2), 1).normalising_value(), int(-3));
}

#[test]
fn classical_normalisations() {
    for n in 0..6 {
        for (al, be) in [(rat(1, 2), rat(1, 3)), (int(-3), int(2)), (int(0), int(0))] {
            let l = laguerre(&al, n);
            assert_eq!(l.normalising_value(), pochhammer(&(&al + int(1)), n) / pochhammer(&int(1), n));
            let j = jacobi(&al, &be, n);
            let sign = if n % 2 == 0 { int(1) } else { int(-1) };
            assert_eq!(j.normalising_value(), sign * pochhammer(&(&be + int(1)), n) / pochhammer(&int(1), n));
            // P^(a,b)(-z) = (-1)^n P^(b,a)(z)
            let swapped = jacobi(&be, &al, n).poly.rescale_var(&int(-1));
            let sign = if n % 2 == 0 { int(1) } else { int(-1) };
            assert_eq!(j.poly.scale(&sign), swapped);
        }
    }
}

#[test]
fn laguerre_three_term_recurrence() {
    // (n+1) L_{n+1} = (2n+1+alpha-x) L_n - (n+alpha) L_{n-1}
    let al = rat(2, 3);
    for n in 1..6 {
        let lhs = laguerre(&al, n + 1).poly.scale(&int(n as i64 + 1));
        let lin = Poly::linear(int(-1), int(2 * n as i64 + 1) + &al);
        let rhs = &(&lin * &laguerre(&al, n).poly) - &laguerre(&al, n - 1).poly.scale(&(int(n as i64) + &al));
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn meixner_limit_examples() {
    assert_eq!(meixner_limit_exact(&int(0), &[], 1).unwrap(), poly(&[int(1), int(-1)]));
    assert_eq!(meixner_xi_limit_exact(&int(0), 1).unwrap(), poly(&[int(1), int(1)]));
    let lim = meixner_limit_exact(&rat(1, 2), &[1, 2], 0).unwrap();
    assert_eq!(lim.coeff(0), int(1));
    assert_eq!(lim.degree(), Some(2));
}

#[test]
fn meixner_limits_small_matrix() {
    let r = verify_meixner_limits(&[int(0), rat(3, 2)], &[vec![1], vec![1, 2]], 2, 3, &rat(1, 2));
    assert!(r.passed(), "{:?}", r.witnesses);
}

#[test]
fn q_power_rounding() {
    let q = rat(3, 4);
    assert_eq!(q_power(&q, &int(2), 64), rat(9, 16));
    let r = q_power(&q, &rat(1, 2), 64);
    assert!(&r * &r <= q);
    let up = &r + Rational::new(1.into(), num_bigint::BigInt::from(1) << 64);
    assert!(&up * &up > q);
    assert_eq!(q_power(&q, &int(-1), 8), Rational::new(341.into(), 256.into()));
}

#[test]
fn q_laguerre_example_converges() {
    // n=1, alpha=1 tends to 1 - eta/2
    let r = q_limit_numeric(
        Family::LittleQLaguerre,
        &int(1),
        None,
        QTarget::Eigen { labels: vec![], n: 1 },
        14,
        &rat(1, 1_000_000),
    )
    .unwrap();
    assert!(r.pass, "{r:?}");
}

#[test]
fn q_laguerre_virtual_example() {
    // v=1, alpha=2 tends to L_1^(-2)(eta)/L_1^(-2)(0) = 1 + eta
    assert_eq!(laguerre_ratio(&int(-2), 1, false).unwrap(), poly(&[int(1), int(1)]));
    let r = q_limit_numeric(
        Family::LittleQLaguerre,
        &int(2),
        None,
        QTarget::Virtual { v: 1 },
        14,
        &rat(1, 1_000_000),
    )
    .unwrap();
    assert!(r.pass, "{r:?}");
}

#[test]
fn q_jacobi_constant() {
    let r = q_limit_numeric(
        Family::LittleQJacobi,
        &rat(3, 2),
        Some(&rat(1, 3)),
        QTarget::Eigen { labels: vec![], n: 0 },
        10,
        &rat(1, 1_000_000),
    )
    .unwrap();
    assert_eq!(r.raw_error, Some(Rational::zero()));
}
