//! The step-by-step Darboux chain: after deleting `d_1..d_s` the hat
//! potentials, the standard-form potentials and the eigenvectors are ratios
//! of the Casoratians
//! `w_s = W[xi_{d_1}..xi_{d_s}]`, `w'_{s,v} = W[.., xi_v]`, `w''_{s,n} = W[.., nu P_n]`.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use super::{alpha_b_prime, MultiIndexedSystem};
use crate::exact::{powi, EtaPolynomial, Rational};
use crate::report::CheckReport;
use crate::virtual_states::{index_set, virtual_energy, xi_poly};

/// Number of spectator labels `v` used for the `w'` identities.
const SPECTATORS: usize = 3;

/// One step of the chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainState {
    pub step: usize,
    pub deleted: Vec<usize>,
    /// `S_{d_1..d_s}` from the closed form.
    pub sign: i32,
    /// The same sign factor from the step recursion.
    pub sign_by_recursion: i32,
}

fn sgn(r: &Rational) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

/// `S_{d_1..d_s} = (-1)^s prod_{i<j} sgn(E~_{d_i} - E~_{d_j})`.
pub fn sign_factor(energies: &[Rational]) -> i32 {
    let s = energies.len();
    let mut acc = if s % 2 == 0 { 1 } else { -1 };
    for i in 0..s {
        for j in i + 1..s {
            acc *= sgn(&(&energies[i] - &energies[j]));
        }
    }
    acc
}

pub fn chain_build(sys: &MultiIndexedSystem) -> Vec<ChainState> {
    let energies: Vec<Rational> = sys.labels().iter().map(|&d| virtual_energy(&sys.params, d)).collect();
    let mut out = Vec::with_capacity(sys.m() + 1);
    let mut rec = 1;
    for s in 0..=sys.m() {
        if s > 0 {
            let mut prod = 1;
            for e in &energies[..s - 1] {
                prod *= sgn(&(e - &energies[s - 1]));
            }
            rec = -rec * prod;
        }
        out.push(ChainState {
            step: s,
            deleted: sys.labels()[..s].to_vec(),
            sign: sign_factor(&energies[..s]),
            sign_by_recursion: rec,
        });
    }
    out
}

/// Tabulated Casoratians over `lo..=hi`.
struct Chain<'a> {
    sys: &'a MultiIndexedSystem,
    lo: i64,
    w: Vec<Vec<Rational>>,
    wp: Vec<BTreeMap<usize, Vec<Rational>>>,
    wpp: Vec<Vec<Vec<Rational>>>,
    energies: Vec<Rational>,
    spectators: Vec<(usize, Rational)>,
}

impl<'a> Chain<'a> {
    fn new(sys: &'a MultiIndexedSystem, spectators: &[usize], n_max: usize, lo: i64, hi: i64) -> Self {
        let p = &sys.params;
        let m = sys.m();
        let seeds: Vec<(usize, EtaPolynomial)> = spectators
            .iter()
            .filter_map(|&v| xi_poly(p, v).ok().map(|poly| (v, poly)))
            .collect();
        let range = || lo..=hi;
        let mut w = Vec::new();
        let mut wp = Vec::new();
        let mut wpp = Vec::new();
        for s in 0..=m {
            w.push(range().map(|x| sys.casoratian_with(s, None, x)).collect());
            let mut by_v = BTreeMap::new();
            for (v, poly) in &seeds {
                let f = |y: i64| poly.eval(&p.eta(y));
                by_v.insert(*v, range().map(|x| sys.casoratian_with(s, Some(&f), x)).collect());
            }
            wp.push(by_v);
            wpp.push(
                (0..=n_max)
                    .map(|n| {
                        let f = |y: i64| sys.nu_p(n, y);
                        range().map(|x| sys.casoratian_with(s, Some(&f), x)).collect()
                    })
                    .collect(),
            );
        }
        Chain {
            sys,
            lo,
            w,
            wp,
            wpp,
            energies: sys.labels().iter().map(|&d| virtual_energy(p, d)).collect(),
            spectators: seeds.iter().map(|(v, _)| (*v, virtual_energy(p, *v))).collect(),
        }
    }

    fn idx(&self, x: i64) -> usize {
        (x - self.lo) as usize
    }

    fn w(&self, s: usize, x: i64) -> &Rational {
        &self.w[s][self.idx(x)]
    }

    fn wp(&self, s: usize, v: usize, x: i64) -> &Rational {
        &self.wp[s][&v][self.idx(x)]
    }

    fn wpp(&self, s: usize, n: usize, x: i64) -> &Rational {
        &self.wpp[s][n][self.idx(x)]
    }

    fn ab(&self, x: i64) -> Rational {
        alpha_b_prime(&self.sys.params, x)
    }

    /// `alpha D'(x)`; `D' = D`.
    fn ad(&self, x: i64) -> Rational {
        self.sys.params.alpha_constants().0 * self.sys.params.potential_d(x)
    }

    fn b_hat(&self, s: usize, x: i64) -> Rational {
        self.ab(x + s as i64 - 1) * self.w(s - 1, x) / self.w(s - 1, x + 1) * self.w(s, x + 1)
            / self.w(s, x)
    }

    fn d_hat(&self, s: usize, x: i64) -> Rational {
        let ad = self.ad(x);
        if ad.is_zero() {
            return ad;
        }
        ad * self.w(s - 1, x + 1) / self.w(s - 1, x) * self.w(s, x - 1) / self.w(s, x)
    }

    /// `B^_s(x) + D^_s(x+1) + E~_{d_s}`, or `alpha B'(x) + alpha D'(x) + alpha'` at `s = 0`.
    fn diagonal(&self, s: usize, x: i64) -> Rational {
        if s == 0 {
            let p = &self.sys.params;
            return self.ab(x) + self.ad(x) + p.alpha_constants().1;
        }
        self.b_hat(s, x) + self.d_hat(s, x + 1) + &self.energies[s - 1]
    }

    /// `B^_s(x+1) D^_s(x+1)`, or `B(x) D(x+1)` at `s = 0`.
    fn off_diagonal(&self, s: usize, x: i64) -> Rational {
        if s == 0 {
            let p = &self.sys.params;
            return p.potential_b(x) * p.potential_d(x + 1);
        }
        self.b_hat(s, x + 1) * self.d_hat(s, x + 1)
    }

    /// Right-hand side shared by the two eigen identities with `f = w'` or
    /// `w''`, multiplied through by `f(x)` since `w''_{s,n}` may vanish on the lattice.
    fn ratio_form(&self, s: usize, f: impl Fn(i64) -> Rational, x: i64) -> Rational {
        let mut v = self.ab(x + s as i64) * self.w(s, x) / self.w(s, x + 1) * f(x + 1);
        let ad = self.ad(x);
        if !ad.is_zero() {
            v += ad * self.w(s, x + 1) / self.w(s, x) * f(x - 1);
        }
        v
    }

    fn b_std(&self, s: usize, x: i64) -> Rational {
        self.ab(x + s as i64) * self.w(s, x) / self.w(s, x + 1) * self.wpp(s, 0, x + 1)
            / self.wpp(s, 0, x)
    }

    fn d_std(&self, s: usize, x: i64) -> Rational {
        let ad = self.ad(x);
        if ad.is_zero() {
            return ad;
        }
        ad * self.w(s, x + 1) / self.w(s, x) * self.wpp(s, 0, x - 1) / self.wpp(s, 0, x)
    }

    /// Square of the chain eigenvector `phi_{d_1..d_M n}(x)`.
    fn eigen_sq(&self, n: usize, x: i64) -> Rational {
        let m = self.sys.m();
        let twisted = self.sys.params.twist();
        let mut v = twisted.phi0_sq_by_recursion(x) / (self.w(m, x) * self.w(m, x + 1));
        for j in 0..m {
            v *= self.ab(x + j as i64);
        }
        let f = self.wpp(m, n, x);
        v * f * f
    }

    /// `prod_{i<j<=s} sgn(E~_{d_i} - E~_{d_j})`.
    fn sign_product(&self, s: usize) -> i32 {
        let parity = if s % 2 == 0 { 1 } else { -1 };
        sign_factor(&self.energies[..s]) * parity
    }
}

/// Spectator labels: admissible, not deleted.
fn spectators(sys: &MultiIndexedSystem) -> Vec<usize> {
    let cap = sys.labels().iter().copied().max().unwrap_or(0) + SPECTATORS;
    index_set(&sys.params, cap)
        .into_iter()
        .filter(|v| !sys.labels().contains(v))
        .take(SPECTATORS)
        .collect()
}

/// Verifies every step of the chain for the deletion order of `sys`.
pub fn chain_verify(sys: &MultiIndexedSystem, n_max: usize, x_max: i64) -> CheckReport {
    let p = &sys.params;
    let m = sys.m();
    let n_max = n_max.min(sys.n_max());
    let mut r = CheckReport::new(
        format!("chain[{}, order={:?}]", p, sys.labels()),
        "hat potentials positive with D^(0)=0, eigen identities for w' and w'' (two forms each), sign conditions, factorisation bookkeeping, standard form, sign factor recursion, squared eigenvectors and norms at s=M",
    );
    let chain = Chain::new(sys, &spectators(sys), n_max, -1, x_max + 3);
    let alpha = p.alpha_constants().0;

    for st in chain_build(sys) {
        r.check(
            st.sign == st.sign_by_recursion,
            || format!("sign factor s={}", st.step),
            || format!("{} vs {}", st.sign, st.sign_by_recursion),
        );
    }

    for s in 0..=m {
        let sp = chain.sign_product(s);
        for x in 0..=x_max {
            // sign conditions
            let v = chain.w(s, x) * Rational::from_integer(sp.into());
            r.check(v.is_positive(), || format!("w_s sign s={s} x={x}"), || v.to_string());
            for (v_label, ev) in &chain.spectators {
                let mut sign = sp;
                for e in &chain.energies[..s] {
                    sign *= sgn(&(e - ev));
                }
                let val = chain.wp(s, *v_label, x) * Rational::from_integer(sign.into());
                r.check(val.is_positive(), || format!("w' sign s={s} v={v_label} x={x}"), || val.to_string());
            }
            let sign = if s % 2 == 0 { sp } else { -sp };
            let val = chain.wpp(s, 0, x) * Rational::from_integer(sign.into());
            r.check(val.is_positive(), || format!("w''_0 sign s={s} x={x}"), || val.to_string());

            // eigen identities
            for (v_label, ev) in &chain.spectators {
                let lhs = (chain.diagonal(s, x) - ev) * chain.wp(s, *v_label, x);
                let rhs = chain.ratio_form(s, |y| chain.wp(s, *v_label, y).clone(), x);
                r.check_eq(|| format!("id1 s={s} v={v_label} x={x}"), &lhs, &rhs);
            }
            for n in 0..=n_max {
                let lhs = (chain.diagonal(s, x) - p.energy(n)) * chain.wpp(s, n, x);
                let rhs = chain.ratio_form(s, |y| chain.wpp(s, n, y).clone(), x);
                r.check_eq(|| format!("id2 s={s} n={n} x={x}"), &lhs, &rhs);
            }

            if s < m {
                let step_e = &chain.energies[s];
                let ab = chain.ab(x + s as i64);
                let ad = chain.ad(x);
                for (v_label, ev) in &chain.spectators {
                    let lhs = &ab * chain.w(s, x) * chain.wp(s + 1, *v_label, x);
                    let rhs = &ad * chain.w(s, x + 1) * chain.wp(s + 1, *v_label, x - 1)
                        + (step_e - ev) * chain.w(s + 1, x) * chain.wp(s, *v_label, x);
                    r.check_eq(|| format!("id3 s={s} v={v_label} x={x}"), &lhs, &rhs);
                }
                for n in 0..=n_max {
                    let lhs = &ab * chain.w(s, x) * chain.wpp(s + 1, n, x);
                    let rhs = &ad * chain.w(s, x + 1) * chain.wpp(s + 1, n, x - 1)
                        + (step_e - p.energy(n)) * chain.w(s + 1, x) * chain.wpp(s, n, x);
                    r.check_eq(|| format!("id4 s={s} n={n} x={x}"), &lhs, &rhs);
                }
                // factorisation bookkeeping between steps s and s+1
                let lhs = chain.b_hat(s + 1, x) * chain.d_hat(s + 1, x + 1);
                r.check_eq(|| format!("product s={s} x={x}"), &lhs, &chain.off_diagonal(s, x));
                let lhs = chain.b_hat(s + 1, x) + chain.d_hat(s + 1, x) + step_e;
                r.check_eq(|| format!("sum s={s} x={x}"), &lhs, &chain.diagonal(s, x));
            }

            if s >= 1 {
                let b = chain.b_hat(s, x);
                r.check(b.is_positive(), || format!("B^>0 s={s} x={x}"), || b.to_string());
                let d = chain.d_hat(s, x + 1);
                r.check(d.is_positive(), || format!("D^>0 s={s} x={}", x + 1), || d.to_string());
            }

            // standard form
            let bs = chain.b_std(s, x);
            let ds = chain.d_std(s, x + 1);
            r.check(bs.is_positive(), || format!("B_s>0 s={s} x={x}"), || bs.to_string());
            r.check(ds.is_positive(), || format!("D_s>0 s={s} x={}", x + 1), || ds.to_string());
            if s == 0 {
                r.check_eq(|| format!("B_0 = B x={x}"), &bs, &p.potential_b(x));
                r.check_eq(|| format!("D_0 = D x={}", x + 1), &ds, &p.potential_d(x + 1));
            } else {
                r.check_eq(|| format!("standard product s={s} x={x}"), &(&bs * &ds), &chain.off_diagonal(s, x));
                let lhs = &bs + chain.d_std(s, x);
                r.check_eq(|| format!("standard sum s={s} x={x}"), &lhs, &chain.diagonal(s, x));
            }
        }
        r.check_eq(|| format!("D_s(0) s={s}"), &chain.d_std(s, 0), &Rational::zero());
        if s >= 1 {
            r.check_eq(|| format!("D^(0) s={s}"), &chain.d_hat(s, 0), &Rational::zero());
        }
    }

    // s = M against the closed forms in terms of Xi_D
    let kappa_pow = powi(&p.kappa(), (m * m.saturating_sub(1) / 2) as i64);
    let mut shift_prod = Rational::one();
    for j in 0..m {
        shift_prod *= &alpha * p.twist().shift(j as i64).potential_b(0);
    }
    for x in 0..=x_max {
        r.check_eq(|| format!("B_D chain vs Xi form x={x}"), &chain.b_std(m, x), &sys.potential_b(x));
        r.check_eq(|| format!("D_D chain vs Xi form x={x}"), &chain.d_std(m, x), &sys.potential_d(x));
    }
    for n in 0..=n_max {
        let mp = sys.multi_poly(n);
        let ratio = &mp.c_dn / &sys.c_d;
        let k = &kappa_pow * &ratio * &ratio * &shift_prod;
        for x in 0..=x_max {
            let pv = sys.p_check(n, x);
            let rhs = &k * sys.weight(x) * &pv * &pv;
            r.check_eq(|| format!("squared eigenvector n={n} x={x}"), &chain.eigen_sq(n, x), &rhs);
        }
        let prod: Rational = chain
            .energies
            .iter()
            .fold(Rational::one(), |acc, e| acc * (p.energy(n) - e));
        r.check_eq(|| format!("norm n={n}"), &(&k / &mp.dt_sq), &prod);
    }
    r
}

/// `Xi_D`, `P_{D,n}`, the final potentials and the squared eigenvectors do
/// not depend on the order of deletion; every permutation is compared with
/// the sorted order and chain-verified.
pub fn verify_order_independence(
    sys: &MultiIndexedSystem,
    n_max: usize,
    x_max: i64,
) -> CheckReport {
    let p = &sys.params;
    let mut r = CheckReport::new(
        format!("chain.order_independence[{}, D={:?}]", p, sys.labels()),
        "Xi_D, P_(D,n), B_D, D_D and phi_(D,n)^2 are the same for every deletion order",
    );
    let n_max = n_max.min(sys.n_max());
    let reference = Chain::new(sys, &[], n_max, -1, x_max + 3);
    for order in permutations(sys.labels()) {
        if order == sys.labels() {
            continue;
        }
        let other = match MultiIndexedSystem::build_ordered(p, &order, n_max) {
            Ok(o) => o,
            Err(e) => {
                r.error(format!("order {order:?}"), e);
                continue;
            }
        };
        r.check(other.xi == sys.xi, || format!("Xi order {order:?}"), || other.xi.to_string());
        for n in 0..=n_max {
            r.check(
                other.p_poly(n) == sys.p_poly(n),
                || format!("P_(D,{n}) order {order:?}"),
                || other.p_poly(n).to_string(),
            );
        }
        let c = Chain::new(&other, &[], n_max, -1, x_max + 3);
        let m = sys.m();
        for x in 0..=x_max {
            r.check_eq(|| format!("B_D order {order:?} x={x}"), &c.b_std(m, x), &reference.b_std(m, x));
            r.check_eq(|| format!("D_D order {order:?} x={x}"), &c.d_std(m, x), &reference.d_std(m, x));
            for n in 0..=n_max {
                r.check_eq(
                    || format!("phi^2 order {order:?} n={n} x={x}"),
                    &c.eigen_sq(n, x),
                    &reference.eigen_sq(n, x),
                );
            }
        }
        r.absorb(chain_verify(&other, n_max, x_max));
    }
    r
}

fn permutations(labels: &[usize]) -> Vec<Vec<usize>> {
    if labels.len() <= 1 {
        return vec![labels.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..labels.len() {
        let mut rest = labels.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}
