//! Casorati determinants `W[f_1..f_n](x) = det(f_k(x+j-1))`, the discrete
//! analogue of Wronskians.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::{int, Field, Poly, Rational};
use crate::report::CheckReport;

/// A function on the integer lattice.
pub trait GridFunction<F> {
    fn at(&self, x: i64) -> F;
}

impl<F, T: Fn(i64) -> F + ?Sized> GridFunction<F> for T {
    fn at(&self, x: i64) -> F {
        self(x)
    }
}

/// Below this size determinants are expanded by cofactors.
const COFACTOR_LIMIT: usize = 5;

/// Determinant of a square matrix given as rows.
pub fn determinant<F: Field>(m: &[Vec<F>]) -> F {
    let n = m.len();
    debug_assert!(m.iter().all(|row| row.len() == n));
    if n < COFACTOR_LIMIT {
        let cols: Vec<usize> = (0..n).collect();
        cofactor(m, 0, &cols)
    } else {
        bareiss(m.to_vec())
    }
}

fn cofactor<F: Field>(m: &[Vec<F>], row: usize, cols: &[usize]) -> F {
    if cols.is_empty() {
        return F::one();
    }
    if cols.len() == 1 {
        return m[row][cols[0]].clone();
    }
    let mut acc = F::zero();
    for (i, &c) in cols.iter().enumerate() {
        let entry = &m[row][c];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&k| k != c).collect();
        let minor = entry.clone() * cofactor(m, row + 1, &rest);
        acc = if i % 2 == 0 { acc + minor } else { acc - minor };
    }
    acc
}

/// Fraction-free elimination; every division is exact.
fn bareiss<F: Field>(mut a: Vec<Vec<F>>) -> F {
    let n = a.len();
    let mut sign = false;
    let mut prev = F::one();
    for k in 0..n.saturating_sub(1) {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = !sign;
                }
                None => return F::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].clone() * a[k][k].clone() - a[i][k].clone() * a[k][j].clone();
                a[i][j] = v / prev.clone();
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign {
        -det
    } else {
        det
    }
}

/// `W[f_1, ..., f_n](x)`; equal to 1 for an empty list.
pub fn casoratian<F: Field, G: GridFunction<F> + ?Sized>(fs: &[&G], x: i64) -> F {
    let n = fs.len();
    let m: Vec<Vec<F>> = (0..n)
        .map(|j| fs.iter().map(|f| f.at(x + j as i64)).collect())
        .collect();
    determinant(&m)
}

/// Casoratian of functions given by their values on a window: `columns[k][j] = f_k(x+j)`.
pub fn casoratian_from_columns<F: Field>(columns: &[Vec<F>]) -> F {
    let n = columns.len();
    let m: Vec<Vec<F>> = (0..n)
        .map(|j| columns.iter().map(|c| c[j].clone()).collect())
        .collect();
    determinant(&m)
}

type Grid = Box<dyn Fn(i64) -> Rational>;

fn random_poly(rng: &mut ChaCha8Rng) -> Poly<Rational> {
    let deg = rng.gen_range(0..=5);
    let coeffs = (0..=deg)
        .map(|_| int(rng.gen_range(-6..=6)) / int(rng.gen_range(1..=3)))
        .collect();
    Poly::new(coeffs)
}

fn grid(p: Poly<Rational>) -> Grid {
    Box::new(move |x| p.eval(&int(x)))
}

fn refs(v: &[Grid]) -> Vec<&dyn Fn(i64) -> Rational> {
    v.iter().map(|b| b.as_ref()).collect()
}

/// Checks the gauge identity, the two-column reduction and the
/// complementary-minor identity on `instances` random polynomial families
/// each, with `n <= n_max` functions, at `x` in `x_range`.
pub fn verify_identities(
    seed: u64,
    instances: usize,
    n_max: usize,
    x_range: std::ops::RangeInclusive<i64>,
) -> Vec<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gauge = CheckReport::new(
        "casoratian.gauge",
        "W[g f_1, ..., g f_n](x) = prod_{k<n} g(x+k) W[f_1, ..., f_n](x)",
    );
    let mut reduction = CheckReport::new(
        "casoratian.two_column_reduction",
        "W[W[f..,g], W[f..,h]](x) = W[f..](x+1) W[f..,g,h](x)",
    );
    let mut minors = CheckReport::new(
        "casoratian.complementary_minors",
        "W[F_1..F_n](x) = (-1)^{n(n-1)/2} prod_{k=0}^{n-2} W[f_1..f_n](x+k), F_j = W[f without f_j]",
    );
    for inst in 0..instances {
        let n = rng.gen_range(0..=n_max);
        let fps: Vec<Poly<Rational>> = (0..n).map(|_| random_poly(&mut rng)).collect();
        let gp = random_poly(&mut rng);
        let hp = random_poly(&mut rng);
        let fs: Vec<Grid> = fps.iter().cloned().map(grid).collect();
        let f_refs = refs(&fs);

        let gauged: Vec<Grid> = fps
            .iter()
            .map(|f| grid(f * &gp))
            .collect();
        for x in x_range.clone() {
            let lhs: Rational = casoratian(&refs(&gauged), x);
            let prod: Rational = (0..n as i64).map(|k| gp.eval(&int(x + k))).product();
            let rhs = prod * casoratian(&f_refs, x);
            gauge.check_eq(|| format!("instance={inst} n={n} x={x}"), &lhs, &rhs);
        }

        let with = |extra: &Poly<Rational>| -> Grid {
            let mut all: Vec<Grid> = fps.iter().cloned().map(grid).collect();
            all.push(grid(extra.clone()));
            Box::new(move |x| casoratian(&refs(&all), x))
        };
        let wg = with(&gp);
        let wh = with(&hp);
        let mut fgh: Vec<Grid> = fps.iter().cloned().map(grid).collect();
        fgh.push(grid(gp.clone()));
        fgh.push(grid(hp.clone()));
        for x in x_range.clone() {
            let lhs: Rational = casoratian(&[wg.as_ref(), wh.as_ref()], x);
            let rhs = casoratian(&f_refs, x + 1) * casoratian(&refs(&fgh), x);
            reduction.check_eq(|| format!("instance={inst} n={n} x={x}"), &lhs, &rhs);
        }

        let big: Vec<Grid> = (0..n)
            .map(|j| {
                let rest: Vec<Grid> = fps
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, f)| grid(f.clone()))
                    .collect();
                Box::new(move |x| casoratian(&refs(&rest), x)) as Grid
            })
            .collect();
        for x in x_range.clone() {
            let lhs: Rational = casoratian(&refs(&big), x);
            let mut rhs: Rational = (0..n.saturating_sub(1) as i64)
                .map(|k| casoratian(&f_refs, x + k))
                .product();
            if (n * n.saturating_sub(1) / 2) % 2 == 1 {
                rhs = -rhs;
            }
            minors.check_eq(|| format!("instance={inst} n={n} x={x}"), &lhs, &rhs);
        }
    }
    vec![gauge, reduction, minors]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use proptest::prelude::{prop, prop_assert_eq, proptest, Strategy};

    fn poly_grid(c: Vec<i64>) -> impl Fn(i64) -> Rational {
        let p = Poly::new(c.into_iter().map(int).collect());
        move |x| p.eval(&int(x))
    }

    #[test]
    fn small_cases() {
        let none: [&dyn Fn(i64) -> Rational; 0] = [];
        assert_eq!(casoratian(&none, 7), int(1));
        let f = |x: i64| int(x * x);
        assert_eq!(casoratian(&[&f as &dyn Fn(i64) -> Rational], 3), int(9));
        let one = |_: i64| int(1);
        let id = |x: i64| int(x);
        let fs: [&dyn Fn(i64) -> Rational; 2] = [&one, &id];
        for x in -4..4 {
            assert_eq!(casoratian(&fs, x), int(1));
        }
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=7 {
            for _ in 0..5 {
                let m: Vec<Vec<Rational>> = (0..n)
                    .map(|_| (0..n).map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=4))).collect())
                    .collect();
                let cols: Vec<usize> = (0..n).collect();
                assert_eq!(bareiss(m.clone()), cofactor(&m, 0, &cols));
            }
        }
        // zero pivot forcing a row swap
        let m = vec![
            vec![int(0), int(1), int(2), int(3), int(1)],
            vec![int(1), int(0), int(1), int(2), int(2)],
            vec![int(2), int(1), int(0), int(1), int(3)],
            vec![int(3), int(2), int(1), int(0), int(5)],
            vec![int(1), int(1), int(1), int(1), int(0)],
        ];
        let cols: Vec<usize> = (0..5).collect();
        assert_eq!(determinant(&m), cofactor(&m, 0, &cols));
    }

    #[test]
    fn identities_hold_on_random_instances() {
        for r in verify_identities(11, 30, 4, -5..=5) {
            assert!(r.passed(), "{}: {:?}", r.id, r.witnesses);
        }
    }

    #[test]
    fn gauge_by_constant_one() {
        let one = |_: i64| int(1);
        let f = poly_grid(vec![1, 2, 3]);
        let g = poly_grid(vec![0, 1]);
        let gf = |x: i64| one(x) * f(x);
        let gg = |x: i64| one(x) * g(x);
        let a: [&dyn Fn(i64) -> Rational; 2] = [&gf, &gg];
        let b: [&dyn Fn(i64) -> Rational; 2] = [&f, &g];
        assert_eq!(casoratian(&a, 2), casoratian(&b, 2));
    }

    fn coeffs() -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(-5i64..5, 1..4)
    }

    proptest! {
        #[test]
        fn swapping_two_functions_flips_sign(a in coeffs(), b in coeffs(), c in coeffs(), x in -6i64..6) {
            let (fa, fb, fc) = (poly_grid(a), poly_grid(b), poly_grid(c));
            let w1: Rational = casoratian(&[&fa as &dyn Fn(i64) -> Rational, &fb, &fc], x);
            let w2: Rational = casoratian(&[&fb as &dyn Fn(i64) -> Rational, &fa, &fc], x);
            prop_assert_eq!(w1, -w2);
        }

        #[test]
        fn linear_in_each_argument(a in coeffs(), b in coeffs(), c in coeffs(), s in -4i64..4, x in -6i64..6) {
            let (fa, fb, fc) = (poly_grid(a), poly_grid(b), poly_grid(c));
            let comb = |y: i64| fa(y) * int(s) + fb(y);
            let lhs: Rational = casoratian(&[&comb as &dyn Fn(i64) -> Rational, &fc], x);
            let wa: Rational = casoratian(&[&fa as &dyn Fn(i64) -> Rational, &fc], x);
            let wb: Rational = casoratian(&[&fb as &dyn Fn(i64) -> Rational, &fc], x);
            prop_assert_eq!(lhs, wa * int(s) + wb);
        }

        #[test]
        fn dependent_functions_give_zero(a in coeffs(), b in coeffs(), s in -4i64..4, x in -6i64..6) {
            let (fa, fb) = (poly_grid(a), poly_grid(b));
            let dep = |y: i64| fa(y) * int(s) - fb(y) * int(2);
            let w: Rational = casoratian(&[&fa as &dyn Fn(i64) -> Rational, &fb, &dep], x);
            prop_assert_eq!(w, int(0));
        }
    }
}
