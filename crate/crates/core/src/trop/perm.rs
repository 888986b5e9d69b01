//! Permutations of `{0, .., n-1}` and precomputed enumeration tables.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::TropError;

/// Largest size for which every bijection is enumerated explicitly.
pub const MAX_ENUMERATED: usize = 7;

/// A bijection on `{0, .., n-1}`; displayed 1-based in cycle notation and
/// serialized as its 1-based image list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, TropError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n || seen[v] {
                return Err(TropError::NotABijection(images.clone()));
            }
            seen[v] = true;
        }
        Ok(Permutation { images })
    }

    /// Build from 0-based cycles; unspecified points are fixed.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self, TropError> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                if a >= n || touched[a] {
                    return Err(TropError::NotABijection(cycle.to_vec()));
                }
                touched[a] = true;
                images[a] = cycle[(k + 1) % cycle.len()];
            }
        }
        Self::from_images(images)
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&j| self.images[j]).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Non-trivial cycles, each starting at its smallest element, sorted by that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut cur = self.images[start];
            while cur != start {
                seen[cur] = true;
                cycle.push(cur);
                cur = self.images[cur];
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Cycle lengths including fixed points, sorted descending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut lens: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        let moved: usize = lens.iter().sum();
        lens.extend(std::iter::repeat_n(1, self.images.len() - moved));
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens
    }

    pub fn has_transposition(&self) -> bool {
        self.cycles().iter().any(|c| c.len() == 2)
    }

    /// +1 or -1.
    pub fn sign(&self) -> i32 {
        let transpositions: usize = self.cycles().iter().map(|c| c.len() - 1).sum();
        if transpositions.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = TropError;
    fn try_from(v: Vec<usize>) -> Result<Self, Self::Error> {
        if v.contains(&0) {
            return Err(TropError::NotABijection(v));
        }
        Permutation::from_images(v.into_iter().map(|x| x - 1).collect())
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images.into_iter().map(|x| x + 1).collect()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            f.write_str("(")?;
            for (k, a) in c.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", a + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{}", self)
    }
}

/// All permutations of `k` points in lexicographic order, stored flat with stride `k`.
pub(crate) struct PermTable {
    pub k: usize,
    pub flat: Vec<u8>,
    pub signs: Vec<i8>,
}

impl PermTable {
    pub fn count(&self) -> usize {
        self.signs.len()
    }

    pub fn get(&self, idx: usize) -> &[u8] {
        &self.flat[idx * self.k..(idx + 1) * self.k]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u8]> + '_ {
        self.flat.chunks_exact(self.k.max(1)).take(self.count())
    }
}

fn build_table(k: usize) -> PermTable {
    let mut flat = Vec::new();
    let mut signs = Vec::new();
    let mut current: Vec<u8> = (0..k as u8).collect();
    loop {
        flat.extend_from_slice(&current);
        let p = Permutation {
            images: current.iter().map(|&v| v as usize).collect(),
        };
        signs.push(p.sign() as i8);
        if !next_permutation(&mut current) {
            break;
        }
    }
    PermTable { k, flat, signs }
}

fn next_permutation(v: &mut [u8]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Lexicographic permutation table for `k <= MAX_ENUMERATED`.
pub(crate) fn table(k: usize) -> &'static PermTable {
    static TABLES: OnceLock<Vec<PermTable>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| (0..=MAX_ENUMERATED).map(build_table).collect());
    &tables[k]
}
