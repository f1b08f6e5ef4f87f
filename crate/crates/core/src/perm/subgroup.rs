use std::cmp::Ordering;

use fixedbitset::FixedBitSet;

use super::{ElemId, Group, GroupError};
use crate::arith;

/// A subgroup of a [`Group`], held as a set of element ids of that group.
///
/// The parent is not stored; every query takes the parent group explicitly
/// and rejects subgroups whose element mask was built for a different order.
/// Equality and ordering look at the elements only, never the generators.
#[derive(Debug, Clone)]
pub struct Subgroup {
    elements: Vec<ElemId>,
    mask: FixedBitSet,
    generators: Vec<ElemId>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Members, ascending.
    pub fn elements(&self) -> &[ElemId] {
        &self.elements
    }

    pub fn generators(&self) -> &[ElemId] {
        &self.generators
    }

    pub fn mask(&self) -> &FixedBitSet {
        &self.mask
    }

    pub fn contains(&self, x: ElemId) -> bool {
        self.mask.contains(x.index())
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.mask.is_subset(&other.mask)
    }

    pub fn intersection_order(&self, other: &Subgroup) -> usize {
        self.mask.intersection(&other.mask).count()
    }

    pub(crate) fn parent_order(&self) -> usize {
        self.mask.len()
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl Eq for Subgroup {}

impl std::hash::Hash for Subgroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.elements.hash(state);
    }
}

/// Orders by size, then by element list.
impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| self.elements.cmp(&other.elements))
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Group {
    pub(crate) fn check_subgroup(&self, h: &Subgroup) -> Result<(), GroupError> {
        if h.parent_order() == self.order() {
            Ok(())
        } else {
            Err(GroupError::NotASubgroup)
        }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        let mut mask = FixedBitSet::with_capacity(self.order());
        mask.insert(0);
        Subgroup {
            elements: vec![ElemId::IDENTITY],
            mask,
            generators: Vec::new(),
        }
    }

    pub fn whole(&self) -> Subgroup {
        let mut mask = FixedBitSet::with_capacity(self.order());
        mask.insert_range(..);
        Subgroup {
            elements: self.elements().collect(),
            mask,
            generators: self.generator_ids().to_vec(),
        }
    }

    /// Smallest subgroup containing `seeds`.
    pub fn subgroup_generated<I>(&self, seeds: I) -> Result<Subgroup, GroupError>
    where
        I: IntoIterator<Item = ElemId>,
    {
        let seeds: Vec<ElemId> = seeds.into_iter().collect();
        for &s in &seeds {
            self.check(s)?;
        }
        Ok(self.extend_subgroup(&self.trivial_subgroup(), seeds))
    }

    /// `<h, seeds>`, grown one right coset of the previous stage at a time.
    pub fn extend_subgroup<I>(&self, h: &Subgroup, seeds: I) -> Subgroup
    where
        I: IntoIterator<Item = ElemId>,
    {
        let mut elements = h.elements.clone();
        let mut mask = h.mask.clone();
        let mut generators = h.generators.clone();
        for s in seeds {
            if mask.contains(s.index()) {
                continue;
            }
            generators.push(s);
            let previous = elements.len();
            self.add_coset(&mut elements, &mut mask, previous, s);
            let mut reps = vec![s];
            let mut next = 0;
            while next < reps.len() {
                for &g in &generators {
                    let t = self.mul(reps[next], g);
                    if !mask.contains(t.index()) {
                        self.add_coset(&mut elements, &mut mask, previous, t);
                        reps.push(t);
                    }
                }
                next += 1;
            }
        }
        elements.sort_unstable();
        Subgroup {
            elements,
            mask,
            generators,
        }
    }

    fn add_coset(
        &self,
        elements: &mut Vec<ElemId>,
        mask: &mut FixedBitSet,
        previous: usize,
        rep: ElemId,
    ) {
        for i in 0..previous {
            let y = self.mul(elements[i], rep);
            if !mask.put(y.index()) {
                elements.push(y);
            }
        }
    }

    /// Wraps a mask already known to be closed under multiplication.
    pub(crate) fn subgroup_from_mask(&self, mask: FixedBitSet) -> Subgroup {
        let mut current = self.trivial_subgroup();
        for x in mask.ones() {
            let x = ElemId(x as u32);
            if !current.contains(x) {
                current = self.extend_subgroup(&current, [x]);
            }
        }
        debug_assert_eq!(current.mask, mask);
        current
    }

    /// True when conjugating each generator of `h` by each generator of the
    /// group stays inside `h`.
    pub fn is_normal(&self, h: &Subgroup) -> Result<bool, GroupError> {
        self.check_subgroup(h)?;
        Ok(self
            .generator_ids()
            .iter()
            .all(|&g| h.generators().iter().all(|&x| h.contains(self.conj(x, g)))))
    }

    /// `N_G(h)`.
    pub fn normalizer(&self, h: &Subgroup) -> Result<Subgroup, GroupError> {
        self.check_subgroup(h)?;
        let mut mask = FixedBitSet::with_capacity(self.order());
        for y in self.elements() {
            if h.generators().iter().all(|&x| h.contains(self.conj(x, y))) {
                mask.insert(y.index());
            }
        }
        Ok(self.subgroup_from_mask(mask))
    }

    /// `h^g = g⁻¹ h g`.
    pub fn conjugate_subgroup(&self, h: &Subgroup, g: ElemId) -> Subgroup {
        let gens: Vec<ElemId> = h.generators().iter().map(|&x| self.conj(x, g)).collect();
        self.extend_subgroup(&self.trivial_subgroup(), gens)
    }

    /// A Sylow `p`-subgroup, grown from the first non-trivial `p`-element.
    pub fn sylow_subgroup(&self, p: u64) -> Result<Subgroup, GroupError> {
        if !arith::is_prime(p) {
            return Err(GroupError::NotPrime(p));
        }
        let start = self
            .elements()
            .find(|&x| x != ElemId::IDENTITY && self.is_p_element(x, p));
        self.sylow_from(p, start)
    }

    /// Sylow `p`-subgroup growth seeded at `start`: while short of the full
    /// `p`-part, adjoin the first `p`-element of `N_G(P) \ P`.
    pub fn sylow_from(&self, p: u64, start: Option<ElemId>) -> Result<Subgroup, GroupError> {
        if !arith::is_prime(p) {
            return Err(GroupError::NotPrime(p));
        }
        let target = arith::p_part(self.order() as u64, p).expect("p is prime") as usize;
        let mut sylow = self.trivial_subgroup();
        if let Some(x) = start {
            self.check(x)?;
            if !self.is_p_element(x, p) {
                return Err(GroupError::NotAPElement);
            }
            sylow = self.extend_subgroup(&sylow, [x]);
        }
        while sylow.order() < target {
            let normalizer = self.normalizer(&sylow)?;
            let y = normalizer
                .elements()
                .iter()
                .copied()
                .find(|&y| !sylow.contains(y) && self.is_p_element(y, p))
                .expect("a p-subgroup short of Sylow order has a p-element in N(P) \\ P");
            sylow = self.extend_subgroup(&sylow, [y]);
        }
        Ok(sylow)
    }

    /// The subgroup as a group in its own right (same degree, same points).
    pub fn subgroup_as_group(&self, h: &Subgroup) -> Result<Group, GroupError> {
        self.check_subgroup(h)?;
        let flat: Vec<u32> = h
            .elements()
            .iter()
            .flat_map(|&x| self.images(x).iter().copied())
            .collect();
        let gens = h.generators().iter().map(|&x| self.perm(x)).collect();
        Ok(Group::from_sorted(self.degree(), gens, flat))
    }
}
