//! Group invariants read off the class sizes: `N(G)`, indices, the largest
//! `p`-part among class sizes, the R(p) trichotomy, p-centrality and the
//! commuting-Sylow criterion.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{self, IntSet};
use crate::perm::{ElemId, Group, GroupError, Subgroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("the two primes must differ, got {0} twice")]
    EqualPrimes(u64),
}

/// The set of distinct class sizes, with how many classes have each size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassSizeSet {
    pub sizes: IntSet,
    pub multiplicities: BTreeMap<u64, usize>,
}

pub fn class_size_set(g: &Group) -> ClassSizeSet {
    let mut multiplicities = BTreeMap::new();
    for c in g.conjugacy_classes() {
        *multiplicities.entry(c.size() as u64).or_insert(0) += 1;
    }
    let sizes =
        IntSet::from_values(multiplicities.keys().copied()).expect("class sizes are positive");
    ClassSizeSet {
        sizes,
        multiplicities,
    }
}

/// `|N| / |C_N(a)|` for `a` anywhere in `g`.
pub fn index_of(g: &Group, n: &Subgroup, a: ElemId) -> Result<u64, GroupError> {
    g.check_subgroup(n)?;
    if a.index() >= g.order() {
        return Err(GroupError::ElementNotInGroup);
    }
    let centralizing = n.elements().iter().filter(|&&y| g.commutes(a, y)).count();
    Ok((n.order() / centralizing) as u64)
}

/// Largest `p`-part occurring among the class sizes.
pub fn g_double_norm_p(g: &Group, p: u64) -> Result<u64, GroupError> {
    if !arith::is_prime(p) {
        return Err(GroupError::NotPrime(p));
    }
    let sizes = class_size_set(g).sizes;
    let value = sizes
        .iter()
        .map(|a| arith::p_part(a, p).expect("prime"))
        .max()
        .unwrap_or(1);
    debug_assert_eq!(arith::p_part(g.order() as u64, p).unwrap() % value, 0);
    Ok(value)
}

pub fn g_double_norm_pi(g: &Group, primes: &[u64]) -> Result<u64, GroupError> {
    primes
        .iter()
        .try_fold(1, |acc, &p| Ok(acc * g_double_norm_p(g, p)?))
}

/// Product over every prime dividing `|G|`.
pub fn g_double_norm(g: &Group) -> u64 {
    let primes = arith::prime_divisors(g.order() as u64).expect("order is positive");
    g_double_norm_pi(g, &primes).expect("primes")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RpStatus {
    NotRp,
    RpStar,
    RpStarStar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RpClassification {
    pub status: RpStatus,
    /// Exponent of the single non-trivial `p`-part, when there is one.
    pub alpha: Option<u32>,
}

/// Places `g` in the R(p) trichotomy.
///
/// When no class size is divisible by `p` the group is reported as
/// `RpStarStar` without an exponent: no `p`-element can then have a class
/// size divisible by `p`.
pub fn classify_rp(g: &Group, p: u64) -> Result<RpClassification, GroupError> {
    if !arith::is_prime(p) {
        return Err(GroupError::NotPrime(p));
    }
    let nontrivial: Vec<u64> = {
        let mut parts: Vec<u64> = class_size_set(g)
            .sizes
            .iter()
            .map(|a| arith::p_part(a, p).expect("prime"))
            .filter(|&part| part > 1)
            .collect();
        parts.sort_unstable();
        parts.dedup();
        parts
    };
    let alpha = match nontrivial.as_slice() {
        [] => {
            return Ok(RpClassification {
                status: RpStatus::RpStarStar,
                alpha: None,
            })
        }
        [part] => part.trailing_zeros_base(p),
        _ => {
            return Ok(RpClassification {
                status: RpStatus::NotRp,
                alpha: None,
            })
        }
    };
    let star = g
        .conjugacy_classes()
        .iter()
        .any(|c| g.is_p_element(c.representative, p) && c.size() as u64 % p == 0);
    Ok(RpClassification {
        status: if star {
            RpStatus::RpStar
        } else {
            RpStatus::RpStarStar
        },
        alpha: Some(alpha),
    })
}

trait ExponentBase {
    fn trailing_zeros_base(self, p: u64) -> u32;
}

impl ExponentBase for u64 {
    fn trailing_zeros_base(mut self, p: u64) -> u32 {
        let mut e = 0;
        while self % p == 0 {
            self /= p;
            e += 1;
        }
        e
    }
}

/// `Z(h)` for a subgroup `h`.
pub(crate) fn subgroup_center(g: &Group, h: &Subgroup) -> Vec<ElemId> {
    h.elements()
        .iter()
        .copied()
        .filter(|&y| h.generators().iter().all(|&s| g.commutes(s, y)))
        .collect()
}

/// Whether the `p`-element `x` lies in the centre of some Sylow
/// `p`-subgroup.
///
/// `x ∈ Z(P^g)` exactly when `x^(g⁻¹) ∈ Z(P)`, so the search runs over the
/// conjugates of `x` against the centre of one computed Sylow subgroup.
pub fn is_p_central(g: &Group, x: ElemId, p: u64) -> Result<bool, GroupError> {
    if x.index() >= g.order() {
        return Err(GroupError::ElementNotInGroup);
    }
    if !arith::is_prime(p) {
        return Err(GroupError::NotPrime(p));
    }
    if !g.is_p_element(x, p) {
        return Err(GroupError::NotAPElement);
    }
    let sylow = g.sylow_subgroup(p)?;
    let class = &g.conjugacy_classes()[g.class_index(x)];
    Ok(subgroup_center(g, &sylow)
        .iter()
        .any(|z| class.members.binary_search(z).is_ok()))
}

pub fn all_p_elements_p_central(g: &Group, p: u64) -> Result<bool, GroupError> {
    if !arith::is_prime(p) {
        return Err(GroupError::NotPrime(p));
    }
    let sylow = g.sylow_subgroup(p)?;
    let center = subgroup_center(g, &sylow);
    Ok(g.conjugacy_classes()
        .iter()
        .filter(|c| g.is_p_element(c.representative, p))
        .all(|c| center.iter().any(|z| c.members.binary_search(z).is_ok())))
}

/// The two sides of the commuting-Sylow equivalence for primes `p != q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SylowCommute {
    /// No `q`-element has class size divisible by `p`, and vice versa.
    pub class_side: bool,
    /// Some Sylow `p`-subgroup commutes elementwise with some Sylow
    /// `q`-subgroup.
    pub subgroup_side: bool,
}

pub fn sylow_commute_criterion(g: &Group, p: u64, q: u64) -> Result<SylowCommute, InvariantError> {
    if p == q {
        return Err(InvariantError::EqualPrimes(p));
    }
    for r in [p, q] {
        if !arith::is_prime(r) {
            return Err(GroupError::NotPrime(r).into());
        }
    }
    let class_side = g.conjugacy_classes().iter().all(|c| {
        let size = c.size() as u64;
        let x = c.representative;
        !(g.is_p_element(x, q) && size % p == 0) && !(g.is_p_element(x, p) && size % q == 0)
    });

    // Fix one Sylow p-subgroup; every pair of conjugates is conjugate to a
    // pair with this first member, so only the q-side needs to move.
    let sp = g.sylow_subgroup(p)?;
    let sq = g.sylow_subgroup(q)?;
    let mut visited = fixedbitset::FixedBitSet::with_capacity(g.order());
    let normalizer_q = g.normalizer(&sq)?;
    let mut subgroup_side = false;
    for y in g.elements() {
        if visited.contains(y.index()) {
            continue;
        }
        // mark the coset N_G(Q)·y, which gives the same conjugate Q^y
        for &n in normalizer_q.elements() {
            visited.insert(g.mul(n, y).index());
        }
        let commutes = sq.generators().iter().all(|&b| {
            let b = g.conj(b, y);
            sp.generators().iter().all(|&a| g.commutes(a, b))
        });
        if commutes {
            subgroup_side = true;
            break;
        }
    }
    Ok(SylowCommute {
        class_side,
        subgroup_side,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;

    fn group(d: usize, gens: &[&str]) -> Group {
        let gens: Vec<_> = gens
            .iter()
            .map(|s| Permutation::parse_cycles(s, d).unwrap())
            .collect();
        Group::from_generators(d, &gens, 100_000).unwrap()
    }

    fn elem(g: &Group, s: &str) -> ElemId {
        g.locate(&Permutation::parse_cycles(s, g.degree()).unwrap())
            .unwrap()
    }

    fn s3() -> Group {
        group(3, &["(0 1)", "(0 1 2)"])
    }

    fn s4() -> Group {
        group(4, &["(0 1)", "(0 1 2 3)"])
    }

    fn a5() -> Group {
        group(5, &["(0 1 2 3 4)", "(2 3 4)"])
    }

    #[test]
    fn class_size_sets() {
        assert_eq!(class_size_set(&s3()).sizes.to_vec(), vec![1, 2, 3]);
        let n = class_size_set(&a5());
        assert_eq!(n.sizes.to_vec(), vec![1, 12, 15, 20]);
        assert_eq!(n.multiplicities[&12], 2);
    }

    #[test]
    fn indices() {
        let g = s3();
        let t = elem(&g, "(0 1)");
        assert_eq!(index_of(&g, &g.whole(), g.identity()).unwrap(), 1);
        assert_eq!(index_of(&g, &g.whole(), t).unwrap(), 3);
        let a3 = g.subgroup_generated([elem(&g, "(0 1 2)")]).unwrap();
        assert_eq!(index_of(&g, &a3, t).unwrap(), 3);
    }

    #[test]
    fn largest_p_parts() {
        let g = s3();
        assert_eq!(g_double_norm_p(&g, 2).unwrap(), 2);
        assert_eq!(g_double_norm_p(&g, 3).unwrap(), 3);
        assert_eq!(g_double_norm(&g), 6);
        assert_eq!(g_double_norm_p(&a5(), 2).unwrap(), 4);
        let c6 = group(6, &["(0 1 2 3 4 5)"]);
        assert_eq!(g_double_norm_p(&c6, 2).unwrap(), 1);
        assert_eq!(g_double_norm_pi(&a5(), &[2, 3, 5]).unwrap(), 4 * 3 * 5);
    }

    #[test]
    fn rp_examples() {
        assert_eq!(
            classify_rp(&s3(), 2).unwrap(),
            RpClassification {
                status: RpStatus::RpStarStar,
                alpha: Some(1)
            }
        );
        assert_eq!(classify_rp(&s4(), 2).unwrap().status, RpStatus::NotRp);
        let c6 = group(6, &["(0 1 2 3 4 5)"]);
        assert_eq!(
            classify_rp(&c6, 5).unwrap(),
            RpClassification {
                status: RpStatus::RpStarStar,
                alpha: None
            }
        );
        // A5: 2-parts of {1,12,15,20} are {1,4,1,4}; its only 2-elements
        // are the 15 double transpositions, whose class size is odd
        assert_eq!(
            classify_rp(&a5(), 2).unwrap(),
            RpClassification {
                status: RpStatus::RpStarStar,
                alpha: Some(2)
            }
        );
    }

    #[test]
    fn p_centrality() {
        let g = s3();
        assert!(is_p_central(&g, elem(&g, "(0 1)"), 2).unwrap());
        let g = s4();
        assert!(is_p_central(&g, elem(&g, "(0 1)(2 3)"), 2).unwrap());
        assert!(!is_p_central(&g, elem(&g, "(0 1 2 3)"), 2).unwrap());
        assert!(!all_p_elements_p_central(&g, 2).unwrap());
        assert_eq!(
            is_p_central(&g, elem(&g, "(0 1 2)"), 2),
            Err(GroupError::NotAPElement)
        );
        let c6 = group(6, &["(0 1 2 3 4 5)"]);
        assert!(all_p_elements_p_central(&c6, 2).unwrap());
        assert!(all_p_elements_p_central(&c6, 3).unwrap());
    }

    /// Every Sylow p-subgroup of S4 (the three dihedral subgroups), built by
    /// brute force, and the centres of each.
    #[test]
    fn p_centrality_against_all_sylow_conjugates() {
        let g = s4();
        let p = g.sylow_subgroup(2).unwrap();
        let mut conjugates: Vec<Vec<ElemId>> = g
            .elements()
            .map(|y| g.conjugate_subgroup(&p, y).elements().to_vec())
            .collect();
        conjugates.sort();
        conjugates.dedup();
        assert_eq!(conjugates.len(), 3);
        for x in g.elements().filter(|&x| g.is_p_element(x, 2)) {
            let brute = conjugates
                .iter()
                .any(|c| c.contains(&x) && c.iter().all(|&y| g.commutes(x, y)));
            assert_eq!(is_p_central(&g, x, 2).unwrap(), brute);
        }
    }

    #[test]
    fn commuting_sylows() {
        let c6 = group(6, &["(0 1 2 3 4 5)"]);
        let r = sylow_commute_criterion(&c6, 2, 3).unwrap();
        assert!(r.class_side && r.subgroup_side);
        let r = sylow_commute_criterion(&s3(), 2, 3).unwrap();
        assert!(!r.class_side && !r.subgroup_side);
        assert_eq!(
            sylow_commute_criterion(&s3(), 3, 3),
            Err(InvariantError::EqualPrimes(3))
        );
        // A5 x C7
        let g = group(12, &["(0 1 2 3 4)", "(2 3 4)", "(5 6 7 8 9 10 11)"]);
        let r = sylow_commute_criterion(&g, 5, 7).unwrap();
        assert!(r.class_side && r.subgroup_side);
    }
}
