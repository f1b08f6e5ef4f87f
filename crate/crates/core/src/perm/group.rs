use std::fmt;
use std::hash::BuildHasherDefault;
use std::sync::OnceLock;

use indexmap::IndexSet;
use rustc_hash::{FxHashMap, FxHasher};
use smallvec::SmallVec;

use super::classes::ClassTable;
use super::{ElemId, GroupError, Permutation};

/// Default ceiling on the number of enumerated elements.
pub const DEFAULT_ELEMENT_CAP: usize = 100_000;

type BaseKey = SmallVec<[u32; 8]>;

/// A finite permutation group with every element enumerated.
///
/// Elements are stored in lexicographic order of their image arrays, so the
/// identity is always element 0. Each element is addressed by an [`ElemId`].
/// A base (points whose pointwise stabiliser is trivial) is kept so that a
/// product can be located from a handful of point images instead of the full
/// image array.
#[derive(Clone)]
pub struct Group {
    degree: usize,
    generators: Vec<Permutation>,
    generator_ids: Vec<ElemId>,
    images: Vec<u32>,
    inverses: Vec<ElemId>,
    orders: Vec<u32>,
    base: Vec<u32>,
    index: FxHashMap<BaseKey, u32>,
    pub(super) classes: OnceLock<ClassTable>,
}

impl Group {
    /// Enumerates the group generated by `gens` acting on `0..degree`.
    ///
    /// Fails with [`GroupError::CapExceeded`] as soon as more than `cap`
    /// elements have been produced.
    pub fn from_generators(
        degree: usize,
        gens: &[Permutation],
        cap: usize,
    ) -> Result<Self, GroupError> {
        if cap == 0 {
            return Err(GroupError::CapExceeded { cap });
        }
        for g in gens {
            if g.degree() != degree {
                return Err(GroupError::InvalidPermutation(format!(
                    "generator {g} has degree {} but the group has degree {degree}",
                    g.degree()
                )));
            }
        }

        // Dimino: grow by whole right cosets of the previous subgroup.
        let mut elements: IndexSet<Vec<u32>, BuildHasherDefault<FxHasher>> = IndexSet::default();
        elements.insert((0..degree as u32).collect());
        let mut active: Vec<&Permutation> = Vec::new();
        for g in gens {
            if elements.contains(g.images()) {
                continue;
            }
            active.push(g);
            let previous = elements.len();
            let mut reps: Vec<Vec<u32>> = vec![g.images().to_vec()];
            add_coset(&mut elements, previous, g.images(), cap)?;
            let mut next = 0;
            while next < reps.len() {
                for s in &active {
                    let t: Vec<u32> = reps[next].iter().map(|&i| s.image(i)).collect();
                    if !elements.contains(&t) {
                        add_coset(&mut elements, previous, &t, cap)?;
                        reps.push(t);
                    }
                }
                next += 1;
            }
        }

        let mut sorted: Vec<Vec<u32>> = elements.into_iter().collect();
        sorted.sort_unstable();
        let flat: Vec<u32> = sorted.into_iter().flatten().collect();
        Ok(Self::from_sorted(degree, gens.to_vec(), flat))
    }

    /// Builds a group from a lexicographically sorted, closed element list.
    pub(crate) fn from_sorted(degree: usize, generators: Vec<Permutation>, flat: Vec<u32>) -> Self {
        let order = flat.len().checked_div(degree).unwrap_or(1);
        let row = |i: usize| &flat[i * degree..(i + 1) * degree];

        let mut base = Vec::new();
        let mut unresolved: Vec<usize> = (1..order).collect();
        while let Some(&x) = unresolved.first() {
            let point = row(x)
                .iter()
                .enumerate()
                .find(|&(i, &v)| i as u32 != v)
                .map(|(i, _)| i)
                .expect("non-identity element moves a point");
            base.push(point as u32);
            unresolved.retain(|&y| row(y)[point] == point as u32);
        }

        let mut index = FxHashMap::default();
        index.reserve(order);
        for i in 0..order {
            let key: BaseKey = base.iter().map(|&b| row(i)[b as usize]).collect();
            index.insert(key, i as u32);
        }

        let mut group = Self {
            degree,
            generators,
            generator_ids: Vec::new(),
            images: flat,
            inverses: Vec::new(),
            orders: Vec::new(),
            base,
            index,
            classes: OnceLock::new(),
        };
        group.inverses = (0..order)
            .map(|i| {
                let r = group.row(i);
                let key: BaseKey = group
                    .base
                    .iter()
                    .map(|&b| r.iter().position(|&v| v == b).unwrap() as u32)
                    .collect();
                ElemId(group.index[&key])
            })
            .collect();
        group.orders = (0..order)
            .map(|i| Permutation::from_images_unchecked(group.row(i).to_vec()).order() as u32)
            .collect();
        group.generator_ids = group
            .generators
            .iter()
            .map(|g| group.locate(g).expect("generator is an element"))
            .collect();
        group
    }

    pub fn trivial(degree: usize) -> Self {
        Self::from_sorted(degree, Vec::new(), (0..degree as u32).collect())
    }

    fn row(&self, i: usize) -> &[u32] {
        &self.images[i * self.degree..(i + 1) * self.degree]
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.inverses.len()
    }

    /// Generators as supplied at construction.
    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn generator_ids(&self) -> &[ElemId] {
        &self.generator_ids
    }

    pub fn base(&self) -> &[u32] {
        &self.base
    }

    pub fn identity(&self) -> ElemId {
        ElemId::IDENTITY
    }

    pub fn elements(&self) -> impl ExactSizeIterator<Item = ElemId> {
        (0..self.order() as u32).map(ElemId)
    }

    pub fn images(&self, x: ElemId) -> &[u32] {
        self.row(x.index())
    }

    pub fn perm(&self, x: ElemId) -> Permutation {
        Permutation::from_images_unchecked(self.images(x).to_vec())
    }

    /// Finds a permutation among the elements.
    pub fn locate(&self, p: &Permutation) -> Option<ElemId> {
        if p.degree() != self.degree {
            return None;
        }
        let key: BaseKey = self.base.iter().map(|&b| p.image(b)).collect();
        let id = ElemId(*self.index.get(key.as_slice())?);
        (self.images(id) == p.images()).then_some(id)
    }

    pub(crate) fn check(&self, x: ElemId) -> Result<(), GroupError> {
        if x.index() < self.order() {
            Ok(())
        } else {
            Err(GroupError::ElementNotInGroup)
        }
    }

    fn lookup(&self, key: &[u32]) -> ElemId {
        ElemId(self.index[key])
    }

    /// `a` followed by `b`.
    pub fn mul(&self, a: ElemId, b: ElemId) -> ElemId {
        let (ra, rb) = (self.images(a), self.images(b));
        let key: BaseKey = self
            .base
            .iter()
            .map(|&p| rb[ra[p as usize] as usize])
            .collect();
        self.lookup(&key)
    }

    pub fn inv(&self, a: ElemId) -> ElemId {
        self.inverses[a.index()]
    }

    /// `g⁻¹ x g`.
    pub fn conj(&self, x: ElemId, g: ElemId) -> ElemId {
        let (rg, rx, rgi) = (self.images(g), self.images(x), self.images(self.inv(g)));
        let key: BaseKey = self
            .base
            .iter()
            .map(|&p| rg[rx[rgi[p as usize] as usize] as usize])
            .collect();
        self.lookup(&key)
    }

    pub fn commutes(&self, a: ElemId, b: ElemId) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn pow(&self, a: ElemId, mut e: u64) -> ElemId {
        let mut acc = ElemId::IDENTITY;
        let mut sq = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, sq);
            }
            sq = self.mul(sq, sq);
            e >>= 1;
        }
        acc
    }

    pub fn element_order(&self, a: ElemId) -> u64 {
        self.orders[a.index()] as u64
    }

    /// True when the order of `a` is a power of `p` (the identity included).
    pub fn is_p_element(&self, a: ElemId, p: u64) -> bool {
        let mut o = self.element_order(a);
        while o % p == 0 {
            o /= p;
        }
        o == 1
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generator_ids();
        gens.iter()
            .enumerate()
            .all(|(i, &a)| gens[i + 1..].iter().all(|&b| self.commutes(a, b)))
    }
}

fn add_coset(
    elements: &mut IndexSet<Vec<u32>, BuildHasherDefault<FxHasher>>,
    previous: usize,
    rep: &[u32],
    cap: usize,
) -> Result<(), GroupError> {
    for i in 0..previous {
        let h = &elements[i];
        let product: Vec<u32> = h.iter().map(|&p| rep[p as usize]).collect();
        elements.insert(product);
        if elements.len() > cap {
            return Err(GroupError::CapExceeded { cap });
        }
    }
    Ok(())
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Group")
            .field("degree", &self.degree)
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.images == other.images
    }
}

impl Eq for Group {}
