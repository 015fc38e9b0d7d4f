//! Pass/fail summaries shared by the relation checkers.

use alloc::string::String;
use alloc::vec::Vec;

/// One relation family, e.g. `CK3`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub struct RelationReport {
    pub name: String,
    pub cases: usize,
    pub max_defect: f64,
    /// Cases whose defect exceeded the tolerance.
    pub failures: usize,
    pub pass: bool,
    /// Description of the worst case, when there is a nonzero defect.
    #[cfg_attr(feature = "serde", serde(skip_serializing_if = "Option::is_none"))]
    pub worst: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub struct CKReport {
    pub relations: Vec<RelationReport>,
    pub tol: f64,
    pub exact: bool,
}

impl CKReport {
    pub fn new(tol: f64, exact: bool) -> Self {
        CKReport { relations: Vec::new(), tol, exact }
    }

    pub fn passed(&self) -> bool {
        self.relations.iter().all(|r| r.pass)
    }

    pub fn max_defect(&self) -> f64 {
        self.relations.iter().map(|r| r.max_defect).fold(0.0, f64::max)
    }

    pub fn relation(&self, name: &str) -> Option<&RelationReport> {
        self.relations.iter().find(|r| r.name == name)
    }

    /// Start a relation; feed it with [`Tally::record`].
    pub fn tally(&self, name: &str) -> Tally {
        Tally { name: name.into(), tol: self.tol, cases: 0, failures: 0, max_defect: 0.0, worst: None }
    }

    pub fn push(&mut self, t: Tally) {
        let pass = t.max_defect <= self.tol;
        self.relations.push(RelationReport {
            name: t.name,
            cases: t.cases,
            max_defect: t.max_defect,
            failures: t.failures,
            pass,
            worst: t.worst,
        });
    }
}

pub struct Tally {
    name: String,
    tol: f64,
    cases: usize,
    failures: usize,
    max_defect: f64,
    worst: Option<String>,
}

impl Tally {
    /// A NaN defect counts as a failure.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn record(&mut self, defect: f64, case: impl FnOnce() -> String) {
        self.cases += 1;
        if !(defect <= self.tol) {
            self.failures += 1;
        }
        if defect > self.max_defect || defect.is_nan() {
            self.max_defect = if defect.is_nan() { f64::INFINITY } else { defect };
            self.worst = Some(case());
        }
    }
}
