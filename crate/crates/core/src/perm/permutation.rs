use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::GroupError;

/// A bijection on `0..degree`, stored as its image array.
///
/// Products compose left to right: `a.then(&b)` maps `i` to `b[a[i]]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Self {
            images: (0..degree as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self, GroupError> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            match seen.get_mut(i as usize) {
                Some(s) if !*s => *s = true,
                _ => return Err(GroupError::InvalidPermutation(format!("{images:?}"))),
            }
        }
        Ok(Self { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        debug_assert!(Self::from_images(images.clone()).is_ok());
        Self { images }
    }

    /// Builds a permutation from disjoint cycles over `0..degree`.
    pub fn from_cycles(degree: usize, cycles: &[&[u32]]) -> Result<Self, GroupError> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                let b = cycle[(k + 1) % cycle.len()];
                if a as usize >= degree || b as usize >= degree || touched[a as usize] {
                    return Err(GroupError::InvalidPermutation(format!("{cycles:?}")));
                }
                touched[a as usize] = true;
                images[a as usize] = b;
            }
        }
        Self::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn image(&self, point: u32) -> u32 {
        self.images[point as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i as u32 == v)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Self {
            images: self
                .images
                .iter()
                .map(|&i| other.images[i as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v as usize] = i as u32;
        }
        Self { images }
    }

    /// Non-trivial cycles, each starting at its least point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.images.len()];
        let mut out = Vec::new();
        for start in 0..self.images.len() {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p as u32);
                p = self.images[p] as usize;
            }
            out.push(cycle);
        }
        out
    }

    /// Lcm of the cycle lengths.
    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .fold(1, |acc, c| crate::arith::lcm(acc, c.len() as u64))
    }

    /// Extends to a larger degree, fixing the new points.
    pub fn extend(&self, degree: usize) -> Permutation {
        let mut images = self.images.clone();
        images.extend(self.images.len() as u32..degree as u32);
        Self { images }
    }

    /// Moves every point up by `offset`, the new low points fixed.
    pub fn shift(&self, offset: usize) -> Permutation {
        let mut images: Vec<u32> = (0..offset as u32).collect();
        images.extend(self.images.iter().map(|&v| v + offset as u32));
        Self { images }
    }

    /// Parses disjoint-cycle notation such as `(0 1 2)(3 4)` or `()`.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Self, GroupError> {
        let bad = || GroupError::Parse(format!("malformed cycle notation: {text:?}"));
        let mut cycles: Vec<Vec<u32>> = Vec::new();
        let mut rest = text.trim();
        if rest.is_empty() {
            return Err(bad());
        }
        while !rest.is_empty() {
            let body = rest.strip_prefix('(').ok_or_else(bad)?;
            let end = body.find(')').ok_or_else(bad)?;
            let points = body[..end]
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<u32>().map_err(|_| bad()))
                .collect::<Result<Vec<_>, _>>()?;
            if !points.is_empty() {
                cycles.push(points);
            }
            rest = body[end + 1..].trim_start();
        }
        let refs: Vec<&[u32]> = cycles.iter().map(Vec::as_slice).collect();
        Self::from_cycles(degree, &refs)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for cycle in cycles {
            f.write_str("(")?;
            for (k, p) in cycle.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]{}", self.degree(), self)
    }
}

impl TryFrom<Vec<u32>> for Permutation {
    type Error = GroupError;

    fn try_from(images: Vec<u32>) -> Result<Self, Self::Error> {
        Self::from_images(images)
    }
}

impl From<Permutation> for Vec<u32> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}

impl FromStr for Permutation {
    type Err = GroupError;

    /// Cycle notation with the degree inferred from the largest point.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let degree = s
            .split(|c: char| !c.is_ascii_digit())
            .filter_map(|t| t.parse::<usize>().ok())
            .max()
            .map_or(0, |m| m + 1);
        Self::parse_cycles(s, degree)
    }
}
