//! Permutations of `{0, …, r-1}` and their action on `F_ℓ^r / diag`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fp::FMat;

/// A permutation stored as its image list: `i ↦ images[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return Err(Error::arg(format!("{images:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(r: usize) -> Self {
        Permutation {
            images: (0..r).collect(),
        }
    }

    /// Builds a permutation of `{0..r}` from disjoint cycles.
    pub fn from_cycles(r: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..r).collect();
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                let b = cycle[(k + 1) % cycle.len()];
                if a >= r || b >= r {
                    return Err(Error::arg(format!("cycle entry out of range for r = {r}")));
                }
                images[a] = b;
            }
        }
        Self::new(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Self) -> Self {
        Permutation {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Permutation { images }
    }

    /// Cycle lengths in non-increasing order, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = vec![false; self.images.len()];
        let mut out = Vec::new();
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i];
                len += 1;
            }
            out.push(len);
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    pub fn sign(&self) -> i32 {
        let transpositions: usize = self.cycle_type().iter().map(|c| c - 1).sum();
        if transpositions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Every permutation of `{0..r}` in lexicographic order.
    pub fn all(r: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..r).collect();
        loop {
            out.push(Permutation { images: cur.clone() });
            // next lexicographic permutation
            let Some(i) = (1..r).rev().find(|&i| cur[i - 1] < cur[i]) else {
                break;
            };
            let j = (i..r).rev().find(|&j| cur[j] > cur[i - 1]).expect("exists");
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }
}

/// Matrix of `σ` on `F_ℓ^r / diag(F_ℓ)` in the basis of the classes of
/// `e_1, …, e_{r-1}`; the class of `e_r` is `-(e_1 + … + e_{r-1})`.
pub fn perm_embed(sigma: &Permutation, ell: u64) -> FMat {
    let r = sigma.degree();
    let d = r.saturating_sub(1);
    let mut m = FMat::zeros(ell, d, d);
    for j in 0..d {
        let image = sigma.apply(j);
        if image < d {
            m.set(image, j, 1);
        } else {
            for i in 0..d {
                m.set(i, j, -1);
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_types_and_signs() {
        let t = Permutation::from_cycles(5, &[&[0, 3]]).unwrap();
        assert_eq!(t.cycle_type(), vec![2, 1, 1, 1]);
        assert_eq!(t.sign(), -1);
        let c = Permutation::from_cycles(5, &[&[0, 1, 2], &[3, 4]]).unwrap();
        assert_eq!(c.cycle_type(), vec![3, 2]);
        assert_eq!(c.sign(), -1);
        assert_eq!(c.compose(&c.inverse()), Permutation::identity(5));
        assert_eq!(Permutation::all(4).len(), 24);
        assert!(Permutation::new(vec![0, 0]).is_err());
    }

    #[test]
    fn embed_examples() {
        assert_eq!(perm_embed(&Permutation::identity(4), 5), FMat::identity(5, 3));
        let t = Permutation::from_cycles(4, &[&[1, 3]]).unwrap();
        assert_eq!(perm_embed(&t, 5).det(), 4);
        let c = Permutation::from_cycles(4, &[&[0, 2, 3]]).unwrap();
        assert_eq!(perm_embed(&c, 5).det(), 1);
    }
}
