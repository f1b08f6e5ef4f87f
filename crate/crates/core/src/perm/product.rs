use super::{Group, GroupError, Permutation, Subgroup};

impl Group {
    /// External direct product acting on disjoint point sets: `a` on the
    /// first `deg(a)` points, `b` on the rest.
    pub fn direct_product(a: &Group, b: &Group, cap: usize) -> Result<Group, GroupError> {
        let degree = a.degree() + b.degree();
        let gens: Vec<Permutation> = a
            .generators()
            .iter()
            .map(|g| g.extend(degree))
            .chain(b.generators().iter().map(|g| g.shift(a.degree())))
            .collect();
        Group::from_generators(degree, &gens, cap)
    }

    /// Both normal, trivial intersection, orders multiply to `|G|`.
    pub fn is_internal_direct_product(
        &self,
        a: &Subgroup,
        b: &Subgroup,
    ) -> Result<bool, GroupError> {
        Ok(self.is_normal(a)?
            && self.is_normal(b)?
            && a.intersection_order(b) == 1
            && a.order() * b.order() == self.order())
    }
}
