use fixedbitset::FixedBitSet;
use rustc_hash::FxHashMap;

use super::{ElemId, Group, GroupError, Subgroup};
use crate::arith;

/// Default limit on join attempts during normal-subgroup enumeration.
pub const DEFAULT_NORMAL_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CompositionFactor {
    pub order: u64,
    pub abelian: bool,
}

impl Group {
    /// Classes (by index) whose union is `h`.
    pub fn class_bits(&self, h: &Subgroup) -> FixedBitSet {
        let mut bits = FixedBitSet::with_capacity(self.conjugacy_classes().len());
        for &x in h.elements() {
            bits.insert(self.class_index(x));
        }
        bits
    }

    /// Normal closure of each conjugacy class, in class order.
    pub fn class_closures(&self) -> Vec<Subgroup> {
        self.conjugacy_classes()
            .iter()
            .map(|c| self.extend_subgroup(&self.trivial_subgroup(), c.members.iter().copied()))
            .collect()
    }

    /// Every normal subgroup, ordered by order and then element list.
    ///
    /// Normal subgroups are exactly the product-closed unions of classes that
    /// contain the identity. The search grows such unions from the trivial
    /// subgroup: each step adjoins one more class and closes the result, so
    /// every node is itself a normal subgroup, and every normal subgroup is
    /// reached by adjoining its classes one at a time. Each attempted step
    /// counts against `budget`.
    pub fn normal_subgroups(&self, budget: u64) -> Result<Vec<Subgroup>, GroupError> {
        let mut nodes = 0u64;
        let mut spend = |n: u64| {
            nodes += n;
            if nodes > budget {
                Err(GroupError::BudgetExceeded { budget })
            } else {
                Ok(())
            }
        };

        spend(self.conjugacy_classes().len() as u64)?;
        let mut closures: Vec<(FixedBitSet, Subgroup)> = Vec::new();
        for closure in self.class_closures() {
            let bits = self.class_bits(&closure);
            if !closures.iter().any(|(b, _)| *b == bits) {
                closures.push((bits, closure));
            }
        }

        let trivial = self.trivial_subgroup();
        let mut found: Vec<(FixedBitSet, Subgroup)> = vec![(self.class_bits(&trivial), trivial)];
        let mut seen: FxHashMap<FixedBitSet, usize> = FxHashMap::default();
        seen.insert(found[0].0.clone(), 0);
        let mut next = 0;
        while next < found.len() {
            for (bits, closure) in &closures {
                let (current_bits, current) = &found[next];
                if bits.is_subset(current_bits) {
                    continue;
                }
                spend(1)?;
                let joined = if current_bits.is_subset(bits) {
                    closure.clone()
                } else {
                    self.extend_subgroup(current, closure.generators().iter().copied())
                };
                let joined_bits = self.class_bits(&joined);
                if !seen.contains_key(&joined_bits) {
                    seen.insert(joined_bits.clone(), found.len());
                    found.push((joined_bits, joined));
                }
            }
            next += 1;
        }

        let mut out: Vec<Subgroup> = found.into_iter().map(|(_, h)| h).collect();
        out.sort();
        Ok(out)
    }

    /// `O_{p'}(G)`: the join of the normal closures of classes whose closure
    /// has order prime to `p`.
    ///
    /// An element lies in the largest normal `p'`-subgroup exactly when its
    /// normal closure is a `p'`-group, so no full enumeration is needed.
    pub fn o_p_prime(&self, p: u64) -> Result<Subgroup, GroupError> {
        if !arith::is_prime(p) {
            return Err(GroupError::NotPrime(p));
        }
        let mut joined = self.trivial_subgroup();
        for class in self.conjugacy_classes() {
            let x = class.representative;
            if joined.contains(x) || self.element_order(x) % p == 0 {
                continue;
            }
            let closure =
                self.extend_subgroup(&self.trivial_subgroup(), class.members.iter().copied());
            if closure.order() as u64 % p != 0 {
                joined = self.extend_subgroup(&joined, closure.generators().iter().copied());
            }
        }
        Ok(joined)
    }

    /// True when the elements of order prime to `p` form a subgroup, which is
    /// then a normal complement to every Sylow `p`-subgroup.
    pub fn has_normal_p_complement(&self, p: u64) -> Result<bool, GroupError> {
        if !arith::is_prime(p) {
            return Err(GroupError::NotPrime(p));
        }
        let order = self.order() as u64;
        let complement = (order / arith::p_part(order, p).expect("prime")) as usize;
        let p_regular: Vec<ElemId> = self
            .elements()
            .filter(|&x| self.element_order(x) % p != 0)
            .collect();
        if p_regular.len() != complement {
            return Ok(false);
        }
        let generated = self.subgroup_generated(p_regular)?;
        Ok(generated.order() == complement)
    }

    /// Composition factor orders with abelian flags, top of the series first.
    ///
    /// At each level the chosen maximal normal subgroup is the largest one,
    /// ties broken by the least element list.
    pub fn composition_factors(&self, budget: u64) -> Result<Vec<CompositionFactor>, GroupError> {
        self.composition_factors_by(budget, |maximal| {
            maximal
                .iter()
                .max_by(|a, b| a.order().cmp(&b.order()).then_with(|| b.cmp(a)))
                .copied()
                .expect("a non-trivial group has a maximal normal subgroup")
        })
    }

    pub(crate) fn composition_factors_by<F>(
        &self,
        budget: u64,
        choose: F,
    ) -> Result<Vec<CompositionFactor>, GroupError>
    where
        F: for<'a> Fn(&[&'a Subgroup]) -> &'a Subgroup + Copy,
    {
        let mut factors = Vec::new();
        let mut current = self.clone();
        while current.order() > 1 {
            let normals = current.normal_subgroups(budget)?;
            let proper: Vec<&Subgroup> = normals
                .iter()
                .filter(|h| h.order() < current.order())
                .collect();
            let maximal: Vec<&Subgroup> = proper
                .iter()
                .copied()
                .filter(|h| {
                    !proper
                        .iter()
                        .any(|k| k.order() > h.order() && h.is_subset(k))
                })
                .collect();
            let chosen = choose(&maximal);
            let gens = current.generator_ids();
            let abelian = gens.iter().all(|&a| {
                gens.iter().all(|&b| {
                    let commutator = current.mul(
                        current.mul(current.inv(a), current.inv(b)),
                        current.mul(a, b),
                    );
                    chosen.contains(commutator)
                })
            });
            factors.push(CompositionFactor {
                order: (current.order() / chosen.order()) as u64,
                abelian,
            });
            current = current.subgroup_as_group(chosen)?;
        }
        Ok(factors)
    }
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

    fn orders(hs: &[Subgroup]) -> Vec<usize> {
        hs.iter().map(Subgroup::order).collect()
    }

    #[test]
    fn normal_subgroup_examples() {
        let s3 = group(3, &["(0 1)", "(0 1 2)"]);
        assert_eq!(
            orders(&s3.normal_subgroups(DEFAULT_NORMAL_BUDGET).unwrap()),
            vec![1, 3, 6]
        );
        let a5 = group(5, &["(0 1 2 3 4)", "(2 3 4)"]);
        assert_eq!(
            orders(&a5.normal_subgroups(DEFAULT_NORMAL_BUDGET).unwrap()),
            vec![1, 60]
        );
        let c4 = group(4, &["(0 1 2 3)"]);
        assert_eq!(
            orders(&c4.normal_subgroups(DEFAULT_NORMAL_BUDGET).unwrap()),
            vec![1, 2, 4]
        );
        let s4 = group(4, &["(0 1)", "(0 1 2 3)"]);
        assert_eq!(
            orders(&s4.normal_subgroups(DEFAULT_NORMAL_BUDGET).unwrap()),
            vec![1, 4, 12, 24]
        );
    }

    #[test]
    fn budget_is_a_hard_error() {
        let s4 = group(4, &["(0 1)", "(0 1 2 3)"]);
        assert_eq!(
            s4.normal_subgroups(3),
            Err(GroupError::BudgetExceeded { budget: 3 })
        );
    }

    #[test]
    fn normal_p_complements() {
        let s3 = group(3, &["(0 1)", "(0 1 2)"]);
        assert!(!s3.has_normal_p_complement(3).unwrap());
        assert!(s3.o_p_prime(3).unwrap().is_trivial());
        assert!(s3.has_normal_p_complement(2).unwrap());
        assert_eq!(s3.o_p_prime(2).unwrap().order(), 3);
        let c6 = group(6, &["(0 1 2 3 4 5)"]);
        for p in [2, 3, 5] {
            assert!(c6.has_normal_p_complement(p).unwrap());
        }
        assert_eq!(c6.has_normal_p_complement(4), Err(GroupError::NotPrime(4)));
    }

    #[test]
    fn composition_factor_examples() {
        let f = |order, abelian| CompositionFactor { order, abelian };
        let s4 = group(4, &["(0 1)", "(0 1 2 3)"]);
        assert_eq!(
            s4.composition_factors(DEFAULT_NORMAL_BUDGET).unwrap(),
            vec![f(2, true), f(3, true), f(2, true), f(2, true)]
        );
        let a5 = group(5, &["(0 1 2 3 4)", "(2 3 4)"]);
        assert_eq!(
            a5.composition_factors(DEFAULT_NORMAL_BUDGET).unwrap(),
            vec![f(60, false)]
        );
        let c6 = group(6, &["(0 1 2 3 4 5)"]);
        let mut fs = c6.composition_factors(DEFAULT_NORMAL_BUDGET).unwrap();
        fs.sort();
        assert_eq!(fs, vec![f(2, true), f(3, true)]);
        assert!(Group::trivial(3)
            .composition_factors(10)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn composition_factors_do_not_depend_on_tie_break() {
        // C2 x C2 x C3 on disjoint supports: many maximal normal subgroups.
        let g = group(7, &["(0 1)", "(2 3)", "(4 5 6)"]);
        let mut largest = g.composition_factors(DEFAULT_NORMAL_BUDGET).unwrap();
        let mut smallest = g
            .composition_factors_by(DEFAULT_NORMAL_BUDGET, |m| m.iter().min().copied().unwrap())
            .unwrap();
        largest.sort();
        smallest.sort();
        assert_eq!(largest, smallest);
    }
}
