//! Finite permutation groups and the arithmetic of their conjugacy class
//! sizes.

pub mod arith;
pub mod corpus;
pub mod invariants;
pub mod perm;
pub mod theorem;
