//! Permutations of the four vertices of a tetrahedron.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A permutation of `{0, 1, 2, 3}` stored as its image array.
///
/// `p[v]` is the image of vertex `v`. Face gluings use the convention that
/// vertex `v` of the source tetrahedron is identified with vertex `p[v]` of
/// the target, so face `f` is glued to face `p[f]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[u8; 4]", into = "[u8; 4]")]
pub struct Perm4([u8; 4]);

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4([0, 1, 2, 3]);

    /// Returns `None` unless `images` is a permutation of `0..4`.
    pub fn new(images: [u8; 4]) -> Option<Self> {
        let mut seen = [false; 4];
        for &x in &images {
            if x > 3 || seen[x as usize] {
                return None;
            }
            seen[x as usize] = true;
        }
        Some(Perm4(images))
    }

    /// Transposition of `a` and `b`.
    pub fn swap(a: usize, b: usize) -> Self {
        let mut p = [0u8, 1, 2, 3];
        p.swap(a, b);
        Perm4(p)
    }

    #[inline]
    pub fn apply(self, v: usize) -> usize {
        self.0[v] as usize
    }

    pub fn images(self) -> [u8; 4] {
        self.0
    }

    pub fn inverse(self) -> Self {
        let mut q = [0u8; 4];
        for (v, &w) in self.0.iter().enumerate() {
            q[w as usize] = v as u8;
        }
        Perm4(q)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(self, other: Perm4) -> Self {
        let mut q = [0u8; 4];
        for (v, slot) in q.iter_mut().enumerate() {
            *slot = self.0[other.0[v] as usize];
        }
        Perm4(q)
    }

    pub fn is_even(self) -> bool {
        let mut inversions = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                if self.0[i] > self.0[j] {
                    inversions += 1;
                }
            }
        }
        inversions % 2 == 0
    }

    /// Builds the permutation sending `from[i]` to `to[i]`.
    pub fn mapping(from: [usize; 4], to: [usize; 4]) -> Option<Self> {
        let mut p = [0u8; 4];
        for i in 0..4 {
            if from[i] > 3 || to[i] > 3 {
                return None;
            }
            p[from[i]] = to[i] as u8;
        }
        Perm4::new(p).filter(|q| (0..4).all(|i| q.apply(from[i]) == to[i]))
    }
}

impl TryFrom<[u8; 4]> for Perm4 {
    type Error = String;

    fn try_from(images: [u8; 4]) -> Result<Self, Self::Error> {
        Perm4::new(images).ok_or_else(|| format!("{images:?} is not a permutation of 0..4"))
    }
}

impl From<Perm4> for [u8; 4] {
    fn from(p: Perm4) -> Self {
        p.0
    }
}

impl fmt::Debug for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}{}", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

impl fmt::Display for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
