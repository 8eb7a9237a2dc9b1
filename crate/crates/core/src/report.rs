//! Pass/fail records produced by the verification routines.

use serde::{Deserialize, Serialize};

use crate::exact::{fmt_rational, Rational};

/// Number of failing witnesses kept per check; further failures are only counted.
const MAX_WITNESSES: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub location: String,
    pub lhs: String,
    pub rhs: String,
}

/// Outcome of one identity check over many sample points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub id: String,
    /// Human-readable statement of the identity being checked.
    #[serde(rename = "paper_ref")]
    pub identity: String,
    pub status: Status,
    pub checked: usize,
    pub failures: usize,
    pub witnesses: Vec<Witness>,
}

impl CheckReport {
    pub fn new(id: impl Into<String>, identity: impl Into<String>) -> Self {
        CheckReport {
            id: id.into(),
            identity: identity.into(),
            status: Status::Pass,
            checked: 0,
            failures: 0,
            witnesses: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn record(&mut self, ok: bool, location: impl FnOnce() -> (String, String, String)) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            self.status = Status::Fail;
            if self.witnesses.len() < MAX_WITNESSES {
                let (location, lhs, rhs) = location();
                self.witnesses.push(Witness { location, lhs, rhs });
            }
        }
    }

    /// Records an exact equality `lhs == rhs`.
    pub fn check_eq(&mut self, location: impl FnOnce() -> String, lhs: &Rational, rhs: &Rational) {
        self.record(lhs == rhs, || {
            (location(), fmt_rational(lhs), fmt_rational(rhs))
        });
    }

    /// Records a boolean condition; `detail` describes the offending value.
    pub fn check(&mut self, ok: bool, location: impl FnOnce() -> String, detail: impl FnOnce() -> String) {
        self.record(ok, || (location(), detail(), String::new()));
    }

    /// Records an operation that could not be carried out at all.
    pub fn error(&mut self, location: impl Into<String>, err: impl std::fmt::Display) {
        let location = location.into();
        let msg = err.to_string();
        self.record(false, || (location, msg, String::new()));
    }

    /// Folds another report's counts and witnesses into this one.
    pub fn absorb(&mut self, other: CheckReport) {
        self.checked += other.checked;
        self.failures += other.failures;
        if other.status == Status::Fail {
            self.status = Status::Fail;
        }
        for w in other.witnesses {
            if self.witnesses.len() >= MAX_WITNESSES {
                break;
            }
            self.witnesses.push(Witness {
                location: format!("{}: {}", other.id, w.location),
                ..w
            });
        }
    }
}
