//! Integer-set combinatorics over class sizes: prime parts, divisibility
//! extremes, separatedness, set products and the divisibility digraph.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("zero is not a positive integer")]
    Zero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("operation requires a nonempty set")]
    EmptySet,
    #[error("class-size set must contain 1")]
    MissingOne,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// The set of primes dividing `k`, ascending.
pub fn prime_divisors(k: u64) -> Result<Vec<u64>, ArithError> {
    if k == 0 {
        return Err(ArithError::Zero);
    }
    let mut out = Vec::new();
    let mut rest = k;
    let mut d = 2;
    while d * d <= rest {
        if rest % d == 0 {
            out.push(d);
            while rest % d == 0 {
                rest /= d;
            }
        }
        d += 1;
    }
    if rest > 1 {
        out.push(rest);
    }
    Ok(out)
}

/// Highest power of the prime `p` dividing `k`.
pub fn p_part(k: u64, p: u64) -> Result<u64, ArithError> {
    if k == 0 {
        return Err(ArithError::Zero);
    }
    if !is_prime(p) {
        return Err(ArithError::NotPrime(p));
    }
    let mut part = 1;
    let mut rest = k;
    while rest % p == 0 {
        rest /= p;
        part *= p;
    }
    Ok(part)
}

/// True when `n` is `p^a` for a prime `p` and `a >= 1`.
pub fn is_prime_power(n: u64) -> bool {
    n > 1 && prime_divisors(n).map(|ps| ps.len() == 1).unwrap_or(false)
}

/// A finite set of positive integers.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct IntSet(BTreeSet<u64>);

impl IntSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_values<I: IntoIterator<Item = u64>>(values: I) -> Result<Self, ArithError> {
        let set: BTreeSet<u64> = values.into_iter().collect();
        if set.contains(&0) {
            return Err(ArithError::Zero);
        }
        Ok(Self(set))
    }

    pub fn insert(&mut self, value: u64) -> Result<bool, ArithError> {
        if value == 0 {
            return Err(ArithError::Zero);
        }
        Ok(self.0.insert(value))
    }

    pub fn contains(&self, value: u64) -> bool {
        self.0.contains(&value)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Ascending iteration.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().copied()
    }

    pub fn max(&self) -> Option<u64> {
        self.0.last().copied()
    }

    /// Copy of the set with `value` removed.
    pub fn without(&self, value: u64) -> IntSet {
        let mut set = self.0.clone();
        set.remove(&value);
        Self(set)
    }

    pub fn is_subset(&self, other: &IntSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.0.iter().copied().collect()
    }

    fn require_nonempty(&self) -> Result<(), ArithError> {
        if self.0.is_empty() {
            Err(ArithError::EmptySet)
        } else {
            Ok(())
        }
    }
}

impl TryFrom<Vec<u64>> for IntSet {
    type Error = ArithError;

    fn try_from(values: Vec<u64>) -> Result<Self, Self::Error> {
        IntSet::from_values(values)
    }
}

impl From<IntSet> for Vec<u64> {
    fn from(set: IntSet) -> Self {
        set.to_vec()
    }
}

impl fmt::Display for IntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_char('{')?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                f.write_char(',')?;
            }
            write!(f, "{v}")?;
        }
        f.write_char('}')
    }
}

/// Elements dividing no other element of `s`.
pub fn max_elements(s: &IntSet) -> Result<IntSet, ArithError> {
    s.require_nonempty()?;
    Ok(IntSet(
        s.iter()
            .filter(|&a| !s.iter().any(|b| b != a && b % a == 0))
            .collect(),
    ))
}

/// Elements divisible by no other element of `s`.
pub fn min_elements(s: &IntSet) -> Result<IntSet, ArithError> {
    s.require_nonempty()?;
    Ok(IntSet(
        s.iter()
            .filter(|&a| !s.iter().any(|b| b != a && a % b == 0))
            .collect(),
    ))
}

/// Every element fails to divide at least one maximal element.
///
/// Any set containing 1 is non-separated; callers testing a class-size set
/// pass it with 1 removed.
pub fn is_separated(s: &IntSet) -> Result<bool, ArithError> {
    let maximal = max_elements(s)?;
    Ok(s.iter().all(|a| maximal.iter().any(|b| b % a != 0)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetProduct {
    pub set: IntSet,
    /// `|a × b| = |a|·|b|`, i.e. no two pairs produced the same product.
    pub collision_free: bool,
}

pub fn set_product(a: &IntSet, b: &IntSet) -> Result<SetProduct, ArithError> {
    a.require_nonempty()?;
    b.require_nonempty()?;
    let set: BTreeSet<u64> = a
        .iter()
        .flat_map(|x| b.iter().map(move |y| x * y))
        .collect();
    let collision_free = set.len() == a.len() * b.len();
    Ok(SetProduct {
        set: IntSet(set),
        collision_free,
    })
}

/// Digraph on an integer set with an edge `a -> b` whenever `a | b`, `a != b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisibilityDigraph {
    pub vertices: IntSet,
    pub edges: Vec<(u64, u64)>,
}

pub fn divisibility_digraph(s: &IntSet) -> Result<DivisibilityDigraph, ArithError> {
    s.require_nonempty()?;
    let edges = s
        .iter()
        .flat_map(|a| {
            s.iter()
                .filter(move |&b| b != a && b % a == 0)
                .map(move |b| (a, b))
        })
        .collect();
    Ok(DivisibilityDigraph {
        vertices: s.clone(),
        edges,
    })
}

impl DivisibilityDigraph {
    /// Weakly connected components, each ascending, ordered by least vertex.
    pub fn weak_components(&self) -> Vec<Vec<u64>> {
        let verts = self.vertices.to_vec();
        let position = |v: u64| verts.binary_search(&v).expect("edge endpoint is a vertex");
        let mut uf = UnionFind::<usize>::new(verts.len());
        for &(a, b) in &self.edges {
            uf.union(position(a), position(b));
        }
        let labels = uf.into_labeling();
        let mut groups: Vec<(usize, Vec<u64>)> = Vec::new();
        for (i, &v) in verts.iter().enumerate() {
            match groups.iter_mut().find(|(l, _)| *l == labels[i]) {
                Some((_, members)) => members.push(v),
                None => groups.push((labels[i], vec![v])),
            }
        }
        groups.into_iter().map(|(_, m)| m).collect()
    }

    pub fn is_disconnected(&self) -> bool {
        self.weak_components().len() >= 2
    }

    /// Graphviz rendering with ascending node order.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph gamma {\n");
        for v in self.vertices.iter() {
            let _ = writeln!(out, "  {v} [label=\"{v}\"];");
        }
        for &(a, b) in &self.edges {
            let _ = writeln!(out, "  {a} -> {b};");
        }
        out.push_str("}\n");
        out
    }
}

/// Convenience wrapper: components of `divisibility_digraph(s)`, empty for
/// an empty set.
pub fn weak_components(s: &IntSet) -> Vec<Vec<u64>> {
    match divisibility_digraph(s) {
        Ok(g) => g.weak_components(),
        Err(_) => Vec::new(),
    }
}

/// A split `N = omega × {1, n}` satisfying the coprimality and
/// disconnectedness hypotheses.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Factorization {
    pub omega: IntSet,
    pub n: u64,
}

/// All `(omega, n)` with `omega × {1,n} = n_of_g`, `gcd(n, a) = 1` for
/// `a` in `omega \ {1}`, and the divisibility digraph of `omega \ {1}`
/// disconnected. Ordered by ascending `n`.
///
/// For a given `n`, coprimality pins `omega` down completely: `n·a` shares a
/// factor with `n`, so every member of `n_of_g` coprime to `n` must lie in
/// `omega`, and nothing else can.
pub fn find_hypothesis_factorizations(n_of_g: &IntSet) -> Result<Vec<Factorization>, ArithError> {
    if !n_of_g.contains(1) {
        return Err(ArithError::MissingOne);
    }
    let mut found = Vec::new();
    for n in n_of_g.iter().filter(|&n| n > 1) {
        let omega = IntSet(n_of_g.iter().filter(|&a| gcd(a, n) == 1).collect());
        let pair = IntSet::from_values([1, n])?;
        let product = set_product(&omega, &pair)?;
        if product.set != *n_of_g {
            continue;
        }
        let rest = omega.without(1);
        if rest.is_empty() || !divisibility_digraph(&rest)?.is_disconnected() {
            continue;
        }
        found.push(Factorization { omega, n });
    }
    Ok(found)
}
