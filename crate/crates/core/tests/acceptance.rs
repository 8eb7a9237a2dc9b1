//! Acceptance run over the default parameter matrix. One PASS/FAIL line per
//! criterion; exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use miop::base::{
    default_matrix, verify_difference_equation, verify_shift_relations, Family, FamilyParams,
};
use miop::casoratian::verify_identities;
use miop::exact::{int, rat, to_f64, Rational};
use miop::limits::{q_limit_numeric, verify_meixner_limits, QTarget};
use miop::multi_indexed::{
    chain_verify, orthogonality_sum, verify_eigen_equation, verify_order_independence,
    verify_orthogonality, verify_special_identities, verify_structure, DeletionSet,
    MultiIndexedSystem,
};
use miop::report::CheckReport;
use miop::virtual_states::{
    index_set, positivity_certificate, verify_linear_relation, verify_virtual_state,
    virtual_energy,
};

const DELETIONS: [&[usize]; 6] = [&[1], &[2], &[1, 2], &[1, 3], &[2, 4], &[1, 2, 3]];

struct Outcome {
    checked: usize,
    failures: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { checked: 0, failures: Vec::new() }
    }

    fn absorb(&mut self, r: &CheckReport) {
        self.checked += r.checked;
        if !r.passed() {
            let w = r
                .witnesses
                .first()
                .map(|w| format!(" at {}: {} vs {}", w.location, w.lhs, w.rhs))
                .unwrap_or_default();
            self.failures.push(format!("{} ({} failures){w}", r.id, r.failures));
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

struct Systems {
    entries: Vec<(FamilyParams, DeletionSet, MultiIndexedSystem)>,
}

fn build_systems(n_max: usize) -> Systems {
    let mut entries = Vec::new();
    for p in default_matrix() {
        for labels in DELETIONS {
            let d = DeletionSet::new(&p, labels.to_vec())
                .unwrap_or_else(|e| panic!("{p} D={labels:?}: {e}"));
            let sys = MultiIndexedSystem::build(&p, &d, n_max)
                .unwrap_or_else(|e| panic!("{p} D={labels:?}: {e}"));
            entries.push((p.clone(), d, sys));
        }
    }
    Systems { entries }
}

fn criterion_1() -> Outcome {
    let mut o = Outcome::new();
    for p in default_matrix() {
        for n in 0..=8 {
            o.absorb(&verify_difference_equation(&p, n, 30));
        }
    }
    o
}

fn criterion_2() -> Outcome {
    let mut o = Outcome::new();
    for p in default_matrix() {
        o.absorb(&verify_shift_relations(&p, 6));
    }
    o
}

fn criterion_3() -> Outcome {
    let mut o = Outcome::new();
    for p in default_matrix() {
        o.absorb(&verify_linear_relation(&p, 40));
        let (alpha, alpha_prime) = p.alpha_constants();
        o.check(alpha > Rational::from_integer(0.into()), || format!("{p}: alpha = {alpha}"));
        o.check(alpha_prime < Rational::from_integer(0.into()), || format!("{p}: alpha' = {alpha_prime}"));
    }
    o
}

fn criterion_4() -> Outcome {
    let mut o = Outcome::new();
    for p in default_matrix() {
        for v in index_set(&p, 8) {
            o.absorb(&positivity_certificate(&p, v, 100));
            o.absorb(&verify_virtual_state(&p, v, 100));
            let e = virtual_energy(&p, v);
            o.check(e < Rational::from_integer(0.into()), || format!("{p}: E~_{v} = {e}"));
        }
    }
    o
}

fn criterion_5() -> Outcome {
    let mut o = Outcome::new();
    for r in verify_identities(20_240_601, 100, 4, 0..=10) {
        o.absorb(&r);
    }
    o
}

fn criterion_6(s: &Systems) -> Outcome {
    let mut o = Outcome::new();
    for (_, _, sys) in &s.entries {
        o.absorb(&chain_verify(sys, 3, 10));
        o.absorb(&verify_order_independence(sys, 2, 6));
    }
    o
}

fn criterion_7(s: &Systems) -> Outcome {
    let mut o = Outcome::new();
    for (p, d, sys) in &s.entries {
        o.absorb(&verify_structure(sys));
        o.absorb(&verify_special_identities(p, d, 3));
    }
    o
}

fn criterion_8(s: &Systems) -> Outcome {
    let mut o = Outcome::new();
    for (_, _, sys) in &s.entries {
        o.absorb(&verify_eigen_equation(sys, 5, 20));
    }
    o
}

fn criterion_9(s: &Systems) -> Outcome {
    let mut o = Outcome::new();
    let tol = rat(1, 10).pow(20);
    for (_, _, sys) in &s.entries {
        o.absorb(&verify_orthogonality(sys, 3, &tol));
    }
    let p = FamilyParams::meixner(int(1), rat(1, 2)).unwrap();
    let sys = MultiIndexedSystem::build(&p, &DeletionSet::new(&p, vec![1]).unwrap(), 0).unwrap();
    match orthogonality_sum(&sys, 0, 0, &tol) {
        Ok(sum) => {
            let exact = sum.target.is_exact() && sum.target.lo == int(2);
            o.check(exact && sum.pass, || {
                format!("M(1,1/2) D={{1}} n=m=0: target {:?}, error {:e}", sum.target, to_f64(&sum.certified_error))
            });
        }
        Err(e) => o.check(false, || format!("M(1,1/2) D={{1}}: {e}")),
    }
    o
}

fn criterion_10() -> Outcome {
    let mut o = Outcome::new();
    let sets: Vec<Vec<usize>> = DELETIONS.iter().map(|d| d.to_vec()).collect();
    for p in default_matrix() {
        if let FamilyParams::Meixner { beta, c } = &p {
            o.absorb(&verify_meixner_limits(&[beta - int(1)], &sets, 4, 3, c));
        }
    }
    let tol = rat(1, 1_000_000);
    let cases = [
        (Family::LittleQJacobi, rat(9, 2), Some(rat(1, 3))),
        (Family::LittleQJacobi, rat(3, 2), Some(rat(5, 2))),
        (Family::LittleQLaguerre, rat(9, 2), None),
        (Family::LittleQLaguerre, rat(3, 2), None),
    ];
    for (family, alpha, beta) in cases {
        let targets = (0..=4)
            .map(|n| QTarget::Eigen { labels: vec![], n })
            .chain((1..=3).map(|v| QTarget::Virtual { v }));
        for t in targets {
            match q_limit_numeric(family, &alpha, beta.as_ref(), t.clone(), 14, &tol) {
                Ok(r) => o.check(r.pass, || {
                    format!(
                        "{family} alpha={alpha} beta={beta:?} {t:?}: error {:e}, ratios {:?}",
                        to_f64(&r.extrapolated_error),
                        r.ratios
                    )
                }),
                Err(e) => o.check(false, || format!("{family} alpha={alpha} {t:?}: {e}")),
            }
        }
    }
    o
}

fn report(n: usize, what: &str, limit: Option<Duration>, run: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let o = run();
    let elapsed = start.elapsed();
    let slow = limit.is_some_and(|l| elapsed > l);
    let ok = o.failures.is_empty() && !slow;
    println!(
        "{} criterion {n:>2} {what}: {} checks, {} failing, {:.1}s{}",
        if ok { "PASS" } else { "FAIL" },
        o.checked,
        o.failures.len(),
        elapsed.as_secs_f64(),
        if slow { format!(" (limit {}s)", limit.unwrap().as_secs()) } else { String::new() }
    );
    for f in o.failures.iter().take(5) {
        println!("    {f}");
    }
    ok
}

fn main() -> ExitCode {
    let mut ok = true;
    ok &= report(1, "base difference equation", Some(Duration::from_secs(30)), criterion_1);
    ok &= report(2, "shift relations and Rodrigues formula", None, criterion_2);
    ok &= report(3, "linear relation and twist constants", None, criterion_3);
    ok &= report(4, "virtual-state positivity", None, criterion_4);
    ok &= report(5, "Casoratian identities", None, criterion_5);

    let start = Instant::now();
    let systems = build_systems(5);
    println!(
        "     built {} (family, D) systems in {:.1}s",
        systems.entries.len(),
        start.elapsed().as_secs_f64()
    );
    ok &= report(6, "chain identities and order independence", None, || criterion_6(&systems));
    ok &= report(7, "multi-indexed structure", None, || criterion_7(&systems));
    ok &= report(8, "deformed eigen-equation", None, || criterion_8(&systems));
    ok &= report(9, "orthogonality", Some(Duration::from_secs(120)), || criterion_9(&systems));
    ok &= report(10, "limits", None, criterion_10);
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
