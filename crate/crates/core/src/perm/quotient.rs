use fixedbitset::FixedBitSet;

use super::{ElemId, Group, GroupError, Permutation, Subgroup};

/// Coset-action points above which a quotient is refused (index squared).
const MAX_QUOTIENT_CELLS: usize = 1 << 26;

/// `G/K` as the permutation group induced on the right cosets of `K`.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub group: Group,
    coset_of: Vec<u32>,
    coset_image: Vec<ElemId>,
}

impl Quotient {
    /// Image of `x` in the quotient group.
    pub fn project(&self, x: ElemId) -> ElemId {
        self.coset_image[self.coset_of[x.index()] as usize]
    }

    pub fn coset_count(&self) -> usize {
        self.coset_image.len()
    }

    /// Images of the elements of `h`, as a mask over the quotient.
    pub fn project_subgroup(&self, h: &Subgroup) -> FixedBitSet {
        let mut mask = FixedBitSet::with_capacity(self.group.order());
        for &x in h.elements() {
            mask.insert(self.project(x).index());
        }
        mask
    }
}

impl Group {
    /// The quotient by a normal subgroup, via the coset action.
    pub fn quotient_group(&self, k: &Subgroup) -> Result<Quotient, GroupError> {
        if !self.is_normal(k)? {
            return Err(GroupError::NotNormal);
        }
        let index = self.order() / k.order();
        if index.saturating_mul(index) > MAX_QUOTIENT_CELLS {
            return Err(GroupError::QuotientTooLarge { index });
        }
        let mut coset_of = vec![u32::MAX; self.order()];
        let mut reps = Vec::with_capacity(index);
        for g in self.elements() {
            if coset_of[g.index()] != u32::MAX {
                continue;
            }
            for &y in k.elements() {
                coset_of[self.mul(y, g).index()] = reps.len() as u32;
            }
            reps.push(g);
        }
        let action = |g: ElemId| {
            Permutation::from_images_unchecked(
                reps.iter()
                    .map(|&r| coset_of[self.mul(r, g).index()])
                    .collect(),
            )
        };
        let gens: Vec<Permutation> = self.generator_ids().iter().map(|&g| action(g)).collect();
        let group = Group::from_generators(index, &gens, index)?;
        let coset_image = reps
            .iter()
            .map(|&r| {
                group
                    .locate(&action(r))
                    .expect("coset action is a homomorphism")
            })
            .collect();
        Ok(Quotient {
            group,
            coset_of,
            coset_image,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(d: usize, gens: &[&str]) -> Group {
        let gens: Vec<_> = gens
            .iter()
            .map(|s| Permutation::parse_cycles(s, d).unwrap())
            .collect();
        Group::from_generators(d, &gens, 100_000).unwrap()
    }

    #[test]
    fn quotient_examples() {
        let s3 = group(3, &["(0 1)", "(0 1 2)"]);
        let normals = s3.normal_subgroups(1000).unwrap();
        let q = s3.quotient_group(&normals[1]).unwrap();
        assert_eq!(q.group.order(), 2);

        let c4 = group(4, &["(0 1 2 3)"]);
        let square = c4
            .locate(&Permutation::parse_cycles("(0 2)(1 3)", 4).unwrap())
            .unwrap();
        let k = c4.subgroup_generated([square]).unwrap();
        assert_eq!(c4.quotient_group(&k).unwrap().group.order(), 2);

        let t = s3
            .locate(&Permutation::parse_cycles("(0 1)", 3).unwrap())
            .unwrap();
        let not_normal = s3.subgroup_generated([t]).unwrap();
        assert_eq!(
            s3.quotient_group(&not_normal).unwrap_err(),
            GroupError::NotNormal
        );
    }

    #[test]
    fn projection_is_a_homomorphism_with_kernel_k() {
        let s4 = group(4, &["(0 1)", "(0 1 2 3)"]);
        for k in s4.normal_subgroups(1000).unwrap() {
            let q = s4.quotient_group(&k).unwrap();
            assert_eq!(q.group.order() * k.order(), 24);
            for a in s4.elements() {
                assert_eq!(q.project(a) == ElemId::IDENTITY, k.contains(a));
                for b in s4.elements() {
                    assert_eq!(
                        q.project(s4.mul(a, b)),
                        q.group.mul(q.project(a), q.project(b))
                    );
                }
            }
        }
    }
}
