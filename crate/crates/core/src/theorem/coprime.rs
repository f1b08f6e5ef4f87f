use fixedbitset::FixedBitSet;

use super::TheoremError;
use crate::arith::gcd;
use crate::perm::{ElemId, Group, Permutation, Subgroup, DEFAULT_ELEMENT_CAP};

/// A group of automorphisms acting on an abelian base group.
///
/// Each actor permutes the element ids of `base`; together the actors
/// generate the acting group.
#[derive(Debug, Clone)]
pub struct CoprimeActionWitness {
    pub base: Group,
    pub actors: Vec<Permutation>,
}

impl CoprimeActionWitness {
    pub fn new(base: Group, actors: Vec<Permutation>) -> Self {
        Self { base, actors }
    }

    /// Base `C_{m_1} × … × C_{m_k}` with each actor an integer matrix acting
    /// on exponent vectors: `v ↦ M v`, coordinate `i` reduced mod `m_i`.
    pub fn from_matrices(moduli: &[u32], matrices: &[Vec<Vec<u32>>]) -> Result<Self, TheoremError> {
        let degree: usize = moduli.iter().map(|&m| m as usize).sum();
        let mut offset = 0;
        let mut gens = Vec::new();
        for &m in moduli {
            let cycle: Vec<u32> = (offset..offset + m).collect();
            gens.push(Permutation::from_cycles(degree, &[&cycle])?);
            offset += m;
        }
        let base = Group::from_generators(degree, &gens, DEFAULT_ELEMENT_CAP)?;

        // Mixed-radix index of an exponent vector -> element id.
        let size = base.order();
        let mut id_of = vec![ElemId::IDENTITY; size];
        for (index, slot) in id_of.iter_mut().enumerate() {
            let mut x = ElemId::IDENTITY;
            for (i, &e) in exponents(moduli, index).iter().enumerate() {
                x = base.mul(x, base.pow(base.generator_ids()[i], e as u64));
            }
            *slot = x;
        }

        let mut actors = Vec::new();
        for (a, m) in matrices.iter().enumerate() {
            if m.len() != moduli.len() || m.iter().any(|row| row.len() != moduli.len()) {
                return Err(TheoremError::InvalidAutomorphism(a));
            }
            let mut images = vec![0u32; size];
            for index in 0..size {
                let v = exponents(moduli, index);
                let w: Vec<u32> = m
                    .iter()
                    .zip(moduli)
                    .map(|(row, &mi)| {
                        let s: u64 = row.iter().zip(&v).map(|(&r, &x)| r as u64 * x as u64).sum();
                        (s % mi as u64) as u32
                    })
                    .collect();
                images[id_of[index].index()] = id_of[radix(moduli, &w)].0;
            }
            actors.push(
                Permutation::from_images(images)
                    .map_err(|_| TheoremError::InvalidAutomorphism(a))?,
            );
        }
        Ok(Self { base, actors })
    }

    fn apply(&self, actor: usize, x: ElemId) -> ElemId {
        ElemId(self.actors[actor].image(x.0))
    }
}

fn exponents(moduli: &[u32], mut index: usize) -> Vec<u32> {
    moduli
        .iter()
        .map(|&m| {
            let e = (index % m as usize) as u32;
            index /= m as usize;
            e
        })
        .collect()
}

fn radix(moduli: &[u32], v: &[u32]) -> usize {
    moduli
        .iter()
        .zip(v)
        .rev()
        .fold(0, |acc, (&m, &e)| acc * m as usize + e as usize)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplittingOutcome {
    pub acting_order: usize,
    /// Elements fixed by every actor.
    pub fixed: Subgroup,
    /// Generated by `x⁻¹ · x^a` over base elements `x` and actors `a`.
    pub commutator: Subgroup,
    /// Whether the base is the internal direct product of the two.
    pub passed: bool,
}

/// Checks that a coprime action on an abelian group splits it as the fixed
/// points times the commutator subgroup.
pub fn check_coprime_action_splitting(
    w: &CoprimeActionWitness,
) -> Result<SplittingOutcome, TheoremError> {
    let base = &w.base;
    if !base.is_abelian() {
        return Err(TheoremError::NotAbelian);
    }
    for (a, actor) in w.actors.iter().enumerate() {
        let homomorphism = actor.degree() == base.order()
            && base.elements().all(|x| {
                base.generator_ids()
                    .iter()
                    .all(|&s| w.apply(a, base.mul(x, s)) == base.mul(w.apply(a, x), w.apply(a, s)))
            });
        if !homomorphism {
            return Err(TheoremError::InvalidAutomorphism(a));
        }
    }
    let acting_order = if w.actors.is_empty() {
        1
    } else {
        Group::from_generators(base.order(), &w.actors, DEFAULT_ELEMENT_CAP)?.order()
    };
    if gcd(acting_order as u64, base.order() as u64) != 1 {
        return Err(TheoremError::NotCoprime {
            acting: acting_order,
            base: base.order(),
        });
    }

    let mut fixed_mask = FixedBitSet::with_capacity(base.order());
    let mut seeds = Vec::new();
    for x in base.elements() {
        if (0..w.actors.len()).all(|a| w.apply(a, x) == x) {
            fixed_mask.insert(x.index());
        }
        for a in 0..w.actors.len() {
            seeds.push(base.mul(base.inv(x), w.apply(a, x)));
        }
    }
    let fixed = base.subgroup_from_mask(fixed_mask);
    let commutator = base.subgroup_generated(seeds)?;
    let passed = base.is_internal_direct_product(&fixed, &commutator)?;
    Ok(SplittingOutcome {
        acting_order,
        fixed,
        commutator,
        passed,
    })
}

/// Named coprime-action witnesses over small abelian groups.
pub fn coprime_witness_catalog() -> Vec<(String, CoprimeActionWitness)> {
    type Matrix = Vec<Vec<u32>>;
    let entries: Vec<(&str, Vec<u32>, Vec<Matrix>)> = vec![
        (
            "C2^2 by order 3",
            vec![2, 2],
            vec![vec![vec![0, 1], vec![1, 1]]],
        ),
        ("C3 by inversion", vec![3], vec![vec![vec![2]]]),
        ("C5 by inversion", vec![5], vec![vec![vec![4]]]),
        ("C7 by inversion", vec![7], vec![vec![vec![6]]]),
        ("C9 by inversion", vec![9], vec![vec![vec![8]]]),
        ("C15 by inversion", vec![15], vec![vec![vec![14]]]),
        ("C7 by x2", vec![7], vec![vec![vec![2]]]),
        ("C13 by x3", vec![13], vec![vec![vec![3]]]),
        ("C11 by x3", vec![11], vec![vec![vec![3]]]),
        ("C5 by x2", vec![5], vec![vec![vec![2]]]),
        (
            "C7 by x2 and x6",
            vec![7],
            vec![vec![vec![2]], vec![vec![6]]],
        ),
        (
            "C3^2 by swap",
            vec![3, 3],
            vec![vec![vec![0, 1], vec![1, 0]]],
        ),
        (
            "C5^2 by swap",
            vec![5, 5],
            vec![vec![vec![0, 1], vec![1, 0]]],
        ),
        (
            "C2^3 by Singer cycle",
            vec![2, 2, 2],
            vec![vec![vec![0, 0, 1], vec![1, 0, 1], vec![0, 1, 0]]],
        ),
        (
            "C7^2 by diag(2,4)",
            vec![7, 7],
            vec![vec![vec![2, 0], vec![0, 4]]],
        ),
        ("C3^2 by -1", vec![3, 3], vec![vec![vec![2, 0], vec![0, 2]]]),
        (
            "C5xC3 by diag(4,2)",
            vec![5, 3],
            vec![vec![vec![4, 0], vec![0, 2]]],
        ),
        (
            "C5xC7 by diag(4,6)",
            vec![5, 7],
            vec![vec![vec![4, 0], vec![0, 6]]],
        ),
        (
            "C4^2 by order 3",
            vec![4, 4],
            vec![vec![vec![0, 3], vec![1, 3]]],
        ),
        (
            "C3^2 by rotation",
            vec![3, 3],
            vec![vec![vec![0, 2], vec![1, 0]]],
        ),
        (
            "C3^2 by diag(1,2)",
            vec![3, 3],
            vec![vec![vec![1, 0], vec![0, 2]]],
        ),
        (
            "C5^2 by diag(1,4)",
            vec![5, 5],
            vec![vec![vec![1, 0], vec![0, 4]]],
        ),
        ("C6 trivially", vec![6], vec![]),
        ("C2^2 trivially", vec![2, 2], vec![]),
    ];
    entries
        .into_iter()
        .map(|(name, moduli, matrices)| {
            let w = CoprimeActionWitness::from_matrices(&moduli, &matrices)
                .expect("catalog entries are valid");
            (name.to_string(), w)
        })
        .collect()
}
