use fixedbitset::FixedBitSet;

use super::{ElemId, Group, GroupError, Subgroup};

/// An orbit of the group acting on itself by conjugation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyClass {
    /// Least member in element order.
    pub representative: ElemId,
    /// Members, ascending.
    pub members: Vec<ElemId>,
}

impl ConjugacyClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

#[derive(Debug, Clone)]
pub(crate) struct ClassTable {
    pub(crate) classes: Vec<ConjugacyClass>,
    pub(crate) class_of: Vec<u32>,
}

impl ClassTable {
    fn compute(g: &Group) -> Self {
        let mut seen = FixedBitSet::with_capacity(g.order());
        let mut classes = Vec::new();
        for x in g.elements() {
            if seen.contains(x.index()) {
                continue;
            }
            seen.insert(x.index());
            let mut members = vec![x];
            let mut next = 0;
            while next < members.len() {
                let y = members[next];
                for &s in g.generator_ids() {
                    let z = g.conj(y, s);
                    if !seen.put(z.index()) {
                        members.push(z);
                    }
                }
                next += 1;
            }
            members.sort_unstable();
            classes.push(ConjugacyClass {
                representative: x,
                members,
            });
        }
        classes.sort_by_key(|c| (c.size(), c.representative));
        let mut class_of = vec![0; g.order()];
        for (i, c) in classes.iter().enumerate() {
            for m in &c.members {
                class_of[m.index()] = i as u32;
            }
        }
        Self { classes, class_of }
    }
}

impl Group {
    fn class_table(&self) -> &ClassTable {
        self.classes.get_or_init(|| ClassTable::compute(self))
    }

    /// Conjugacy classes ordered by size, then representative.
    pub fn conjugacy_classes(&self) -> &[ConjugacyClass] {
        &self.class_table().classes
    }

    /// Position of the class containing `x` in [`Group::conjugacy_classes`].
    pub fn class_index(&self, x: ElemId) -> usize {
        self.class_table().class_of[x.index()] as usize
    }

    pub fn class_size(&self, x: ElemId) -> usize {
        self.conjugacy_classes()[self.class_index(x)].size()
    }

    pub fn centralizer_mask(&self, x: ElemId) -> FixedBitSet {
        let mut mask = FixedBitSet::with_capacity(self.order());
        for y in self.elements() {
            if self.commutes(x, y) {
                mask.insert(y.index());
            }
        }
        mask
    }

    /// `C_G(x)`.
    pub fn centralizer(&self, x: ElemId) -> Result<Subgroup, GroupError> {
        self.check(x)?;
        let mask = self.centralizer_mask(x);
        Ok(self.subgroup_from_mask(mask))
    }

    /// `Z(G)`: elements commuting with every generator.
    pub fn center(&self) -> Subgroup {
        let mut mask = FixedBitSet::with_capacity(self.order());
        for y in self.elements() {
            if self.generator_ids().iter().all(|&s| self.commutes(s, y)) {
                mask.insert(y.index());
            }
        }
        self.subgroup_from_mask(mask)
    }
}
