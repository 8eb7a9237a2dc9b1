use std::io::Write;

use miop::base::{verify_difference_equation, verify_shift_relations, verify_zero_mode, Family};
use miop::casoratian;
use miop::exact::{int, rat, to_f64};
use miop::limits::{q_limit_numeric, verify_meixner_limits, QTarget};
use miop::multi_indexed::{
    chain_verify, verify_eigen_equation, verify_nodes, verify_order_independence,
    verify_orthogonality, verify_potentials, verify_shape_invariance, verify_special_identities,
    verify_structure, MultiIndexedSystem,
};
use miop::report::{CheckReport, Status};
use miop::virtual_states::{index_set, positivity_certificate, verify_linear_relation, verify_virtual_state};
use serde::{Deserialize, Serialize};

use crate::config::{Format, RunConfig, Setup, Suite};

pub const SCHEMA_VERSION: u32 = 1;

/// Labels checked by the virtual suite when the family has no upper bound.
const MEIXNER_LABELS: usize = 8;
/// Seed of the random Casoratian instances.
const CASORATIAN_SEED: u64 = 1;
const CASORATIAN_INSTANCES: usize = 100;
/// Last `k` of the `q_k = 1 - 2^{-k}` sequence.
const Q_LIMIT_K_MAX: u32 = 14;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteEntry {
    pub suite: Suite,
    #[serde(flatten)]
    pub check: CheckReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub status: Status,
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub config: RunConfig,
    pub suites: Vec<SuiteEntry>,
    pub summary: Summary,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.summary.status == Status::Pass
    }
}

fn base_suite(s: &Setup, cfg: &RunConfig) -> Vec<CheckReport> {
    let p = &s.params;
    let mut out: Vec<CheckReport> = (0..=cfg.n_max)
        .map(|n| verify_difference_equation(p, n, cfg.x_max))
        .collect();
    out.push(verify_shift_relations(p, cfg.n_max));
    out.push(verify_zero_mode(p, cfg.x_max, cfg.n_max));
    out
}

fn virtual_suite(s: &Setup, cfg: &RunConfig) -> Vec<CheckReport> {
    let p = &s.params;
    let cap = s.deletions.labels().iter().copied().max().unwrap_or(0).max(MEIXNER_LABELS);
    let mut out = vec![verify_linear_relation(p, cfg.x_max)];
    for v in index_set(p, cap) {
        out.push(positivity_certificate(p, v, cfg.x_max));
        out.push(verify_virtual_state(p, v, cfg.x_max));
    }
    out
}

fn casoratian_suite(cfg: &RunConfig) -> Vec<CheckReport> {
    casoratian::verify_identities(CASORATIAN_SEED, CASORATIAN_INSTANCES, 4, 0..=cfg.x_max.min(10))
}

fn build(s: &Setup, cfg: &RunConfig, suite: &str) -> Result<MultiIndexedSystem, CheckReport> {
    MultiIndexedSystem::build(&s.params, &s.deletions, cfg.n_max).map_err(|e| {
        let mut r = CheckReport::new(format!("{suite}.build[{}, D={}]", s.params, s.deletions), "construction of Xi_D and P_(D,n)");
        r.error("build", e);
        r
    })
}

fn chain_suite(s: &Setup, cfg: &RunConfig) -> Vec<CheckReport> {
    match build(s, cfg, "chain") {
        Ok(sys) => vec![
            chain_verify(&sys, cfg.n_max, cfg.x_max),
            verify_order_independence(&sys, cfg.n_max, cfg.x_max),
        ],
        Err(r) => vec![r],
    }
}

fn multi_suite(s: &Setup, cfg: &RunConfig) -> Vec<CheckReport> {
    let sys = match build(s, cfg, "multi") {
        Ok(sys) => sys,
        Err(r) => return vec![r],
    };
    let mut out = vec![
        verify_structure(&sys),
        verify_potentials(&sys, cfg.x_max),
        verify_eigen_equation(&sys, cfg.n_max, cfg.x_max),
    ];
    match MultiIndexedSystem::build(&s.params.shift(1), &s.deletions, cfg.n_max) {
        Ok(up) => out.push(verify_shape_invariance(&sys, &up, cfg.n_max, cfg.x_max)),
        Err(e) => {
            let mut r = CheckReport::new("multi.shape_invariance", "system at lambda + delta");
            r.error("build", e);
            out.push(r);
        }
    }
    out.push(verify_special_identities(&s.params, &s.deletions, cfg.n_max));
    out.push(verify_nodes(&sys, cfg.n_max));
    out.push(verify_orthogonality(&sys, cfg.n_max, &s.rel_tol));
    out
}

fn limits_suite(s: &Setup, cfg: &RunConfig) -> Vec<CheckReport> {
    let labels = s.deletions.labels().to_vec();
    let n_max = cfg.n_max.min(4);
    if let miop::base::FamilyParams::Meixner { beta, c } = &s.params {
        let sets: Vec<Vec<usize>> = if labels.is_empty() { vec![] } else { vec![labels] };
        return vec![verify_meixner_limits(&[beta - int(1)], &sets, n_max, 3, c)];
    }
    // a = q^alpha with alpha above every label, so the deletions stay admissible as q -> 1
    let family = s.params.family();
    let alpha = int(labels.iter().copied().max().unwrap_or(3).max(3) as i64) + rat(1, 2);
    let beta = (family == Family::LittleQJacobi).then(|| rat(1, 3));
    let tol = rat(1, 1_000_000);
    let mut r = CheckReport::new(
        format!("limits.q[{family}, alpha={alpha}{}]", beta.as_ref().map(|b| format!(", beta={b}")).unwrap_or_default()),
        "q -> 1 limits at a=q^alpha (b=q^beta): P_n and xi_v tend to Jacobi/Laguerre ratios with first order convergence; P_(D,n) converges",
    );
    let mut targets: Vec<QTarget> = (0..=n_max).map(|n| QTarget::Eigen { labels: vec![], n }).collect();
    targets.extend((1..=3).map(|v| QTarget::Virtual { v }));
    if !labels.is_empty() {
        targets.extend((0..=n_max.min(2)).map(|n| QTarget::Eigen { labels: labels.clone(), n }));
    }
    for t in targets {
        match q_limit_numeric(family, &alpha, beta.as_ref(), t.clone(), Q_LIMIT_K_MAX, &tol) {
            Ok(q) => r.record(q.pass, || {
                (
                    format!("{t:?}"),
                    format!("richardson error {:.3e}", to_f64(&q.extrapolated_error)),
                    format!("ratios {:?}", q.ratios.iter().rev().take(3).collect::<Vec<_>>()),
                )
            }),
            Err(e) => r.error(format!("{t:?}"), e),
        }
    }
    vec![r]
}

/// Runs the selected suites in a fixed order.
pub fn run(cfg: &RunConfig, s: &Setup) -> Report {
    let mut suites = Vec::new();
    for &suite in &cfg.suites {
        let checks = match suite {
            Suite::Base => base_suite(s, cfg),
            Suite::Virtual => virtual_suite(s, cfg),
            Suite::Casoratian => casoratian_suite(cfg),
            Suite::Chain => chain_suite(s, cfg),
            Suite::Multi => multi_suite(s, cfg),
            Suite::Limits => limits_suite(s, cfg),
        };
        suites.extend(checks.into_iter().map(|check| SuiteEntry { suite, check }));
    }
    let passed = suites.iter().filter(|e| e.check.passed()).count();
    let failed = suites.len() - passed;
    Report {
        schema_version: SCHEMA_VERSION,
        config: cfg.clone(),
        summary: Summary {
            status: if failed == 0 { Status::Pass } else { Status::Fail },
            checks: suites.len(),
            passed,
            failed,
        },
        suites,
    }
}

pub fn write_report(report: &Report, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, report)?;
            writeln!(out)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["suite", "id", "status", "checked", "failures", "witness_location", "witness_lhs", "witness_rhs"])?;
            for e in &report.suites {
                let c = &e.check;
                let status = if c.passed() { "pass" } else { "fail" };
                let (loc, lhs, rhs) = c
                    .witnesses
                    .first()
                    .map(|w| (w.location.as_str(), w.lhs.as_str(), w.rhs.as_str()))
                    .unwrap_or(("", "", ""));
                w.write_record([
                    e.suite.name(),
                    &c.id,
                    status,
                    &c.checked.to_string(),
                    &c.failures.to_string(),
                    loc,
                    lhs,
                    rhs,
                ])?;
            }
            w.flush()
        }
    }
}
