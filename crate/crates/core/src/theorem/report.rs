use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::{Factorization, IntSet};
use crate::invariants::ClassSizeSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    HypothesisNotMet,
    VerifiedDecomposition,
    #[serde(rename = "COUNTEREXAMPLE")]
    Counterexample,
}

/// One factor of a decomposition, as found inside the group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorDescriptor {
    pub order: u64,
    pub class_sizes: IntSet,
    /// Generators in cycle notation over the group's points.
    pub generators: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub omega: IntSet,
    pub n: u64,
    pub a: FactorDescriptor,
    pub b: FactorDescriptor,
    pub n_is_prime_power: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LemmaStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaOutcome {
    pub status: LemmaStatus,
    pub checked: u64,
    pub exhaustive: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl LemmaOutcome {
    pub(crate) fn from_counts(checked: u64, failures: u64, exhaustive: bool) -> Self {
        Self {
            status: if failures == 0 {
                LemmaStatus::Pass
            } else {
                LemmaStatus::Fail
            },
            checked,
            exhaustive,
            note: (failures > 0).then(|| format!("{failures} violating cases")),
        }
    }

    pub(crate) fn skipped(note: impl Into<String>) -> Self {
        Self {
            status: LemmaStatus::Skipped,
            checked: 0,
            exhaustive: false,
            note: Some(note.into()),
        }
    }
}

/// Verdict and evidence for one group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub group_name: String,
    pub group_order: u64,
    pub n_of_g: ClassSizeSet,
    pub factorizations: Vec<Factorization>,
    pub decompositions: Vec<Decomposition>,
    pub verdict: Verdict,
    pub lemma_results: BTreeMap<String, LemmaOutcome>,
    /// Phase durations in milliseconds.
    pub timings: BTreeMap<String, u64>,
}
