//! Verification harness for the decomposition theorem on class-size sets
//! of the form `Ω × {1, n}`, plus executable checks of the supporting
//! lemmas.

mod coprime;
mod lemmas;
mod report;
mod verify;

use thiserror::Error;

use crate::arith::ArithError;
use crate::perm::GroupError;

pub use coprime::{
    check_coprime_action_splitting, coprime_witness_catalog, CoprimeActionWitness, SplittingOutcome,
};
pub use lemmas::{
    check_centralizing_every_class, check_normal_p_complement, check_sylow_center_central,
    run_lemma_suite, LemmaConfig,
};
pub use report::{
    Decomposition, FactorDescriptor, LemmaOutcome, LemmaStatus, TheoremReport, Verdict,
};
pub use verify::{recheck_decomposition, verify_main_theorem, VerifyConfig};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoremError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("check does not apply: {0}")]
    Inapplicable(String),
    #[error("acting group of order {acting} is not coprime to the base order {base}")]
    NotCoprime { acting: usize, base: usize },
    #[error("base group is not abelian")]
    NotAbelian,
    #[error("actor {0} is not an automorphism of the base group")]
    InvalidAutomorphism(usize),
}
