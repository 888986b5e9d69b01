use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::value::TropValue;

/// A product `X(i1,σ(i1)) ⋯ X(ir,σ(ir))` with its weight under `X(i,j) ↦ A(i,j)`.
///
/// Pairs are ordered `(row, col)`, sorted by row, 0-based parent indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub pairs: Vec<(usize, usize)>,
    pub weight: TropValue,
}

impl Monomial {
    /// Forget the order inside each pair.
    pub fn symmetrize(&self) -> SymMonomial {
        SymMonomial::new(self.pairs.clone(), self.weight)
    }

    pub fn contains(&self, row: usize, col: usize) -> bool {
        self.pairs.contains(&(row, col))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs.iter().map(|&(i, j)| var_name(i, j)).collect();
        f.write_str(&parts.join(" "))
    }
}

/// A minimizing monomial under the identification `X(i,j) = X(j,i)`:
/// a multiset of unordered pairs, canonically `i <= j` and sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymMonomial {
    pairs: Vec<(usize, usize)>,
    pub weight: TropValue,
}

impl SymMonomial {
    pub fn new(pairs: Vec<(usize, usize)>, weight: TropValue) -> Self {
        let mut pairs: Vec<(usize, usize)> = pairs
            .into_iter()
            .map(|(i, j)| if i <= j { (i, j) } else { (j, i) })
            .collect();
        pairs.sort_unstable();
        SymMonomial { pairs, weight }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn degree(&self) -> usize {
        self.pairs.len()
    }

    pub fn contains_pair(&self, i: usize, j: usize) -> bool {
        let key = if i <= j { (i, j) } else { (j, i) };
        self.pairs.binary_search(&key).is_ok()
    }

    pub fn multiplicity(&self, i: usize, j: usize) -> usize {
        let key = if i <= j { (i, j) } else { (j, i) };
        self.pairs.iter().filter(|&&p| p == key).count()
    }

    /// The sub-multiset of variables touching `idx`.
    pub fn involving(&self, idx: usize) -> Vec<(usize, usize)> {
        self.pairs
            .iter()
            .copied()
            .filter(|&(i, j)| i == idx || j == idx)
            .collect()
    }

    /// Same multiset of pairs, ignoring weight.
    pub fn same_pairs(&self, other: &SymMonomial) -> bool {
        self.pairs == other.pairs
    }
}

impl fmt::Display for SymMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let mut k = 0;
        while k < self.pairs.len() {
            let p = self.pairs[k];
            let mut e = 1;
            while k + e < self.pairs.len() && self.pairs[k + e] == p {
                e += 1;
            }
            let name = var_name(p.0, p.1);
            parts.push(if e > 1 { format!("{name}^{e}") } else { name });
            k += e;
        }
        f.write_str(&parts.join(" "))
    }
}

fn var_name(i: usize, j: usize) -> String {
    if i < 9 && j < 9 {
        format!("X{}{}", i + 1, j + 1)
    } else {
        format!("X({},{})", i + 1, j + 1)
    }
}

#[derive(Serialize, Deserialize)]
struct SymMonomialJson {
    pairs: Vec<[usize; 2]>,
    weight: TropValue,
}

/// Serialized with 1-based indices.
impl Serialize for SymMonomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SymMonomialJson {
            pairs: self.pairs.iter().map(|&(i, j)| [i + 1, j + 1]).collect(),
            weight: self.weight,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymMonomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = SymMonomialJson::deserialize(d)?;
        let mut pairs = Vec::with_capacity(raw.pairs.len());
        for [i, j] in raw.pairs {
            if i == 0 || j == 0 {
                return Err(serde::de::Error::custom("monomial indices are 1-based"));
            }
            pairs.push((i - 1, j - 1));
        }
        Ok(SymMonomial::new(pairs, raw.weight))
    }
}
