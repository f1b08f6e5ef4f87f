//! Permutation-group engine: enumeration, classes, centralisers, Sylow and
//! normal subgroups, quotients, products and composition factors.

mod classes;
mod group;
mod grp;
mod normal;
mod permutation;
mod product;
mod quotient;
mod subgroup;

use thiserror::Error;

pub use classes::ConjugacyClass;
pub use group::{Group, DEFAULT_ELEMENT_CAP};
pub use grp::GrpFile;
pub use normal::{CompositionFactor, DEFAULT_NORMAL_BUDGET};
pub use permutation::Permutation;
pub use quotient::Quotient;
pub use subgroup::Subgroup;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("group enumeration exceeded the cap of {cap} elements")]
    CapExceeded { cap: usize },
    #[error("element is not in the group")]
    ElementNotInGroup,
    #[error("subgroup belongs to a different group")]
    NotASubgroup,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("element is not a p-element")]
    NotAPElement,
    #[error("normal-subgroup search exceeded its budget of {budget} nodes")]
    BudgetExceeded { budget: u64 },
    #[error("coset action on {index} points is too large to enumerate")]
    QuotientTooLarge { index: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

/// Position of an element in its group's lexicographic element order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElemId(pub u32);

impl ElemId {
    pub const IDENTITY: ElemId = ElemId(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}
