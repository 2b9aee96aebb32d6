//! Check reports shared by the verification suites and the CLI.

use serde::{Deserialize, Serialize};

use crate::laurent::{lattice_fraction, precision_string, LaurentSeries, Precision};
use crate::tate::TateElement;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Verified,
    Failed,
    Inconclusive,
}

impl Status {
    /// Worst of two statuses: failed beats inconclusive beats verified.
    pub fn combine(self, other: Status) -> Status {
        use Status::*;
        match (self, other) {
            (Failed, _) | (_, Failed) => Failed,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Verified,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    /// Precision (as a power of `θ^{-1}`) through which the check holds.
    pub precision: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_discrepant_exponent: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, status: Status, precision: Precision, den: i64) -> Self {
        Check {
            name: name.into(),
            status,
            precision: precision_string(precision, den),
            witness: None,
            first_discrepant_exponent: None,
            detail: None,
        }
    }

    pub fn with_witness(mut self, w: impl Into<String>) -> Self {
        self.witness = Some(w.into());
        self
    }

    pub fn with_detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }

    pub fn flag(name: impl Into<String>, ok: bool, precision: Precision, den: i64) -> Self {
        Self::new(name, if ok { Status::Verified } else { Status::Failed }, precision, den)
    }

    /// Coefficient equality of two series below lattice index `n`.
    pub fn series_eq(name: impl Into<String>, a: &LaurentSeries, b: &LaurentSeries, n: i64) -> Self {
        let den = a.lattice_den();
        Self::from_discrepancy(name, a.first_discrepancy(b, n), n, den, covered(&[a.precision(), b.precision()], n))
    }

    /// Coefficient equality of two Tate elements below lattice index `n`.
    pub fn tate_eq(name: impl Into<String>, a: &TateElement, b: &TateElement, n: i64) -> Self {
        let den = a.field().lattice_den();
        Self::from_discrepancy(name, a.first_discrepancy(b, n), n, den, covered(&[a.precision(), b.precision()], n))
    }

    /// `a ≡ 0` below `n`.
    pub fn tate_zero(name: impl Into<String>, a: &TateElement, n: i64) -> Self {
        let zero = TateElement::zero(a.field(), a.s());
        Self::tate_eq(name, a, &zero, n)
    }

    fn from_discrepancy(name: impl Into<String>, d: Option<i64>, n: i64, den: i64, covered: bool) -> Self {
        match (d, covered) {
            (Some(k), _) => {
                let mut c = Self::new(name, Status::Failed, Some(n), den);
                c.first_discrepant_exponent = Some(lattice_fraction(k, den));
                c
            }
            (None, true) => Self::new(name, Status::Verified, Some(n), den),
            (None, false) => Self::new(name, Status::Inconclusive, Some(n), den)
                .with_detail("operands are not known through the requested precision"),
        }
    }
}

fn covered(precisions: &[Precision], n: i64) -> bool {
    precisions.iter().all(|p| p.map_or(true, |p| p >= n))
}

/// A named value kept for dual-precision comparisons.
#[derive(Clone, Debug)]
pub struct Artifact {
    pub name: String,
    pub value: TateElement,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub q: u32,
    pub precision: String,
    pub status: Status,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(suite: impl Into<String>, q: u32, precision: String, checks: Vec<Check>) -> Self {
        let status = checks.iter().fold(Status::Verified, |s, c| s.combine(c.status));
        Report { suite: suite.into(), q, precision, status, checks }
    }
}
