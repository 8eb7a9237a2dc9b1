use super::*;
use crate::exact::{rat, Poly};
use proptest::prelude::*;

fn m(beta: Rational, c: Rational) -> FamilyParams {
    FamilyParams::meixner(beta, c).unwrap()
}

fn lqj(a: Rational, b: Rational, q: Rational) -> FamilyParams {
    FamilyParams::little_q_jacobi(a, b, q).unwrap()
}

fn lql(a: Rational, q: Rational) -> FamilyParams {
    FamilyParams::little_q_laguerre(a, q).unwrap()
}

#[test]
fn potentials_examples() {
    let p = m(int(1), rat(1, 2));
    assert_eq!(p.potential_b(3), int(2));
    assert_eq!(p.potential_d(3), int(3));
    let l = lql(rat(1, 4), rat(1, 2));
    assert_eq!(l.potential_b(2), int(1));
    assert_eq!(l.potential_d(2), int(3));
    for f in default_matrix() {
        assert_eq!(f.potential_d(0), int(0));
        assert_eq!(f.eta(0), int(0));
    }
}

#[test]
fn energies_examples() {
    assert_eq!(m(int(1), rat(1, 2)).energy(3), rat(3, 2));
    assert_eq!(lql(rat(1, 4), rat(1, 2)).energy(2), int(3));
    for f in default_matrix() {
        assert_eq!(f.energy(0), int(0));
    }
}

#[test]
fn eta_and_varphi() {
    let p = lqj(rat(1, 4), rat(1, 3), rat(1, 2));
    assert_eq!(p.eta(1), rat(1, 2));
    assert_eq!(p.varphi(1), rat(1, 2));
    for f in default_matrix() {
        for x in 0..=20 {
            assert_eq!(f.varphi(x), (f.eta(x + 1) - f.eta(x)) / f.eta(1));
        }
    }
}

#[test]
fn ground_state_examples() {
    let p = m(int(1), rat(1, 2));
    assert_eq!(p.phi0_sq(3), rat(1, 8));
    assert_eq!(lql(rat(1, 4), rat(1, 2)).phi0_sq(1), rat(1, 4));
    for f in default_matrix() {
        assert_eq!(f.phi0_sq(0), int(1));
        assert_eq!(f.phi0_sq(-1), int(0));
        for x in 0..=100 {
            assert_eq!(f.potential_b(x) * f.phi0_sq(x), f.potential_d(x + 1) * f.phi0_sq(x + 1));
        }
    }
}

#[test]
fn polynomial_value_examples() {
    let p = m(int(1), rat(1, 2));
    assert_eq!(p.p_value(1, 2), int(-1));
    let q = m(int(2), rat(1, 3));
    assert_eq!(q.p_value(2, 3), q.p_value(3, 2));
    for f in default_matrix() {
        for n in 0..8 {
            assert_eq!(f.p_value(n, 0), int(1));
        }
    }
}

#[test]
fn polynomial_coefficients_examples() {
    let p = m(int(1), rat(1, 2));
    assert_eq!(p.p_poly(0).unwrap(), Poly::one());
    assert_eq!(p.p_poly(1).unwrap(), Poly::new(vec![int(1), int(-1)]));
    assert_eq!(p.leading_coeff(1), int(-1));
    let l = lql(rat(1, 4), rat(1, 2));
    assert_eq!(l.p_poly(1).unwrap().leading(), int(-8));
    assert_eq!(l.leading_coeff(1), int(-8));
}

#[test]
fn coefficients_reproduce_values_and_leading_terms() {
    for f in default_matrix() {
        for n in 0..=8 {
            let poly = f.p_poly(n).unwrap();
            assert_eq!(poly.degree(), Some(n));
            assert_eq!(poly.coeff(0), int(1));
            assert_eq!(poly.leading(), f.leading_coeff(n), "{f} n={n}");
            for x in 0..=(n as i64 + 5) {
                assert_eq!(poly.eval(&f.eta(x)), f.p_value(n, x));
            }
        }
    }
}

#[test]
fn q_series_agrees_with_second_representation() {
    for f in default_matrix().into_iter().filter(|f| f.q().is_some()) {
        for n in 0..=6 {
            for x in -2..=12 {
                let s = f.site(x);
                assert_eq!(Some(f.p_value_at(n, &s)), f.p_value_alt_at(n, &s), "{f} n={n} x={x}");
            }
        }
    }
}

#[test]
fn little_q_laguerre_is_b_zero_jacobi() {
    let l = lql(rat(1, 8), rat(1, 3));
    let j = FamilyParams::LittleQJacobi { a: rat(1, 8), b: int(0), q: rat(1, 3) };
    for n in 0..6 {
        for x in 0..10 {
            assert_eq!(l.p_value(n, x), j.p_value(n, x));
        }
        assert_eq!(l.energy(n), j.energy(n));
        let (dl, dj) = (l.dn_sq(n).unwrap(), j.dn_sq(n).unwrap());
        assert!(dl.lo <= dj.hi && dj.lo <= dl.hi);
    }
}

#[test]
fn dn_sq_examples() {
    let p = m(int(1), rat(1, 2));
    assert_eq!(p.dn_sq(0).unwrap(), Enclosure::exact(rat(1, 2)));
    assert_eq!(p.dn_sq(1).unwrap(), Enclosure::exact(rat(1, 4)));
    // sum_x phi0^2 = sum 2^-x = 2 = 1/d_0^2
    let partial: Rational = (0..200).map(|x| p.phi0_sq(x)).sum();
    assert!((int(2) - partial) < rat(1, 1 << 60));
}

#[test]
fn dn_sq_irrational_power_is_enclosed() {
    let p = m(rat(5, 2), rat(1, 3));
    let d0 = p.dn_sq(0).unwrap();
    assert!(d0.width() < default_eps());
    // (2/3)^(5/2)
    assert!((d0.to_f64() - (2.0f64 / 3.0).powf(2.5)).abs() < 1e-15);
}

#[test]
fn q_dn_sq_matches_direct_weight_sum() {
    // sum_x phi0(x)^2 = 1/d_0^2
    for f in default_matrix().into_iter().filter(|f| f.q().is_some()) {
        let d0 = f.dn_sq(0).unwrap();
        let partial: Rational = (0..120).map(|x| f.phi0_sq(x)).sum();
        let err = (partial * d0.mid() - int(1)).abs();
        assert!(err < rat(1, 1 << 50), "{f}");
    }
}

#[test]
fn validation_rules() {
    assert!(FamilyParams::meixner(int(1), int(2)).is_err());
    assert!(FamilyParams::meixner(int(0), rat(1, 2)).is_err());
    assert!(FamilyParams::meixner(int(1), int(1)).is_err());
    let e = FamilyParams::meixner(int(1), int(2)).unwrap_err().to_string();
    assert!(e.contains("0<c<1"), "{e}");
    assert!(FamilyParams::little_q_jacobi(rat(1, 4), rat(1, 3), int(1)).is_err());
    assert!(FamilyParams::little_q_jacobi(int(3), rat(1, 3), rat(1, 2)).is_err());
    assert!(FamilyParams::little_q_jacobi(rat(1, 4), int(2), rat(1, 2)).is_err());
    // a = b q
    assert!(FamilyParams::little_q_jacobi(rat(1, 8), rat(1, 4), rat(1, 2)).is_err());
    // a = b q^3
    assert!(FamilyParams::little_q_jacobi(rat(1, 32), rat(1, 4), rat(1, 2)).is_err());
    // negative b is allowed
    assert!(FamilyParams::little_q_jacobi(rat(1, 32), rat(-1, 2), rat(1, 2)).is_ok());
    assert!(FamilyParams::little_q_laguerre(int(0), rat(1, 2)).is_err());
    for f in default_matrix() {
        f.validate().unwrap();
    }
}

#[test]
fn family_parsing() {
    assert_eq!("M".parse::<Family>().unwrap(), Family::Meixner);
    assert_eq!("lqj".parse::<Family>().unwrap(), Family::LittleQJacobi);
    assert_eq!("lqL".parse::<Family>().unwrap(), Family::LittleQLaguerre);
    assert!("x".parse::<Family>().is_err());
}

#[test]
fn verification_reports_pass_on_default_matrix() {
    for f in default_matrix() {
        for n in 0..=5 {
            let r = verify_difference_equation(&f, n, 20);
            assert!(r.passed(), "{:?}", r.witnesses);
        }
        let r = verify_shift_relations(&f, 4);
        assert!(r.passed(), "{:?}", r.witnesses);
        let r = verify_zero_mode(&f, 40, 30);
        assert!(r.passed(), "{:?}", r.witnesses);
    }
    assert!(verify_dual_spot_check(&m(int(2), rat(1, 3)), 6).passed());
}

#[test]
fn difference_equation_worked_example() {
    // M beta=1, c=1/2, n=1, x=2: both sides -1/2
    let p = m(int(1), rat(1, 2));
    let lhs = p.potential_b(2) * (p.p_value(1, 2) - p.p_value(1, 3))
        + p.potential_d(2) * (p.p_value(1, 2) - p.p_value(1, 1));
    assert_eq!(lhs, rat(-1, 2));
    assert_eq!(p.energy(1) * p.p_value(1, 2), rat(-1, 2));
}

#[test]
fn difference_equation_detects_a_wrong_energy() {
    // sanity: the checker is not vacuous
    let p = m(int(1), rat(1, 2));
    let wrong = FamilyParams::Meixner { beta: int(1), c: rat(1, 3) };
    let mut r = crate::report::CheckReport::new("t", "t");
    for x in 1..5 {
        let pv = wrong.p_value(2, x);
        let lhs = p.potential_b(x) * (&pv - wrong.p_value(2, x + 1))
            + p.potential_d(x) * (&pv - wrong.p_value(2, x - 1));
        r.check_eq(|| String::new(), &lhs, &(p.energy(2) * pv));
    }
    assert!(!r.passed());
}

#[test]
fn rodrigues_little_q_laguerre_example() {
    let p = lql(rat(1, 8), rat(1, 2));
    for n in 0..=4 {
        for x in 0..10 {
            assert_eq!(verify::rodrigues_value(&p, n, x), p.p_value(n, x));
        }
    }
}

#[test]
fn forward_then_backward_round_trip() {
    // B F P_2 = E_2 P_2
    let p = m(int(1), rat(1, 2));
    let up = p.shift(1);
    for x in 0..8 {
        let s = p.site(x);
        let val = verify::backward_shift(&p, &s, |t| {
            verify::forward_shift(&p, t, |u| p.p_value_at(2, u))
        });
        assert_eq!(val, p.energy(2) * p.p_value(2, x));
        let _ = &up;
    }
}

#[test]
fn twist_and_shifts() {
    let p = m(int(1), rat(1, 2));
    assert_eq!(p.twist(), FamilyParams::Meixner { beta: int(1), c: int(2) });
    assert_eq!(p.tilde_shift(1), FamilyParams::Meixner { beta: int(2), c: rat(1, 2) });
    let j = lqj(rat(1, 4), rat(1, 3), rat(1, 2));
    assert_eq!(j.twist(), FamilyParams::LittleQJacobi { a: int(4), b: rat(1, 3), q: rat(1, 2) });
    assert_eq!(
        lql(rat(1, 8), rat(1, 2)).tilde_shift(1),
        FamilyParams::LittleQLaguerre { a: rat(1, 4), q: rat(1, 2) }
    );
    for f in default_matrix() {
        assert_eq!(f.twist().twist(), f);
        for u in 1..=3 {
            assert_eq!(f.twist().shift(u), f.tilde_shift(u).twist());
        }
        // B(x; l+d)/B(x+1; l) = kappa^-2
        for x in 0..10 {
            let k = f.kappa();
            assert_eq!(f.shift(1).potential_b(x) / f.potential_b(x + 1), (&k * &k).recip());
        }
    }
}

fn any_params() -> impl Strategy<Value = FamilyParams> {
    let m = (1i64..12, 1i64..4, 1i64..9).prop_filter_map("0<c<1", |(bn, bd, cn)| {
        FamilyParams::meixner(rat(bn, bd), rat(cn, 10)).ok()
    });
    let j = (1i64..20, -6i64..6, 2i64..5).prop_filter_map("valid lqJ", |(an, bn, qd)| {
        FamilyParams::little_q_jacobi(rat(an, 40), rat(bn, 5), rat(1, qd)).ok()
    });
    let l = (1i64..30, 2i64..5)
        .prop_filter_map("valid lqL", |(an, qd)| FamilyParams::little_q_laguerre(rat(an, 31), rat(1, qd)).ok());
    prop_oneof![m, j, l]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn difference_equation_holds_for_random_parameters(p in any_params(), n in 0usize..5) {
        let r = verify_difference_equation(&p, n, 8);
        prop_assert!(r.passed(), "{:?}", r.witnesses);
    }

    #[test]
    fn spectrum_is_increasing(p in any_params()) {
        for n in 0..50 {
            prop_assert!(p.energy(n) < p.energy(n + 1));
        }
    }

    #[test]
    fn twist_is_an_involution(p in any_params()) {
        prop_assert_eq!(p.twist().twist(), p);
    }
}
