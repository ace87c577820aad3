//! Formal integer chains over an ordered key type. Simplices are stored in
//! canonical ascending vertex order; inserting a simplex in any order picks
//! up the sign of the sorting permutation, which is how all orientation
//! bookkeeping in the crate is done.

use std::collections::BTreeMap;

/// Finite integer-linear combination of simplices/flags/subspace flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain<K: Ord + Clone> {
    terms: BTreeMap<K, i64>,
}

pub type SimplexChain = Chain<Vec<usize>>;
pub type FlagChain = Chain<Vec<Vec<usize>>>;

impl<K: Ord + Clone> Default for Chain<K> {
    fn default() -> Self {
        Chain {
            terms: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> Chain<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn of(key: K, coeff: i64) -> Self {
        let mut c = Self::zero();
        c.add_term(key, coeff);
        c
    }

    pub fn add_term(&mut self, key: K, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let entry = self.terms.entry(key).or_insert(0);
        *entry = entry
            .checked_add(coeff)
            .expect("chain coefficient overflow");
        if *entry == 0 {
            let dead: Vec<K> = self
                .terms
                .iter()
                .filter(|(_, &v)| v == 0)
                .map(|(k, _)| k.clone())
                .collect();
            for k in dead {
                self.terms.remove(&k);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, &v) in &other.terms {
            out.add_term(k.clone(), v);
        }
        out
    }

    pub fn neg(&self) -> Self {
        Chain {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: i64) -> Self {
        if c == 0 {
            return Self::zero();
        }
        Chain {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), c * v)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &K) -> i64 {
        self.terms.get(key).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&K, i64)> {
        self.terms.iter().map(|(k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn map_keys<L: Ord + Clone>(&self, mut f: impl FnMut(&K) -> Option<(L, i64)>) -> Chain<L> {
        let mut out = Chain::zero();
        for (k, v) in &self.terms {
            if let Some((l, sign)) = f(k) {
                out.add_term(l, sign * v);
            }
        }
        out
    }
}

/// Sign of the permutation sorting `v` ascending; None if entries repeat.
pub fn sort_sign<T: Ord + Clone>(v: &[T]) -> Option<(Vec<T>, i64)> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].cmp(&v[b]));
    let sorted: Vec<T> = idx.iter().map(|&i| v[i].clone()).collect();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    let mut sign = 1i64;
    for i in 0..idx.len() {
        for j in (i + 1)..idx.len() {
            if idx[i] > idx[j] {
                sign = -sign;
            }
        }
    }
    Some((sorted, sign))
}

impl SimplexChain {
    /// Insert an oriented simplex given with vertices in any order; the
    /// coefficient picks up the sign of the sorting permutation. Degenerate
    /// simplices vanish.
    pub fn of_oriented(verts: &[usize], coeff: i64) -> SimplexChain {
        match sort_sign(verts) {
            Some((sorted, sign)) => Chain::of(sorted, sign * coeff),
            None => Chain::zero(),
        }
    }

    /// Alternating-sign boundary; vertices map to the empty simplex, which
    /// is the augmentation in degree -1.
    pub fn boundary(&self) -> SimplexChain {
        let mut out = Chain::zero();
        for (simplex, coeff) in self.terms() {
            for (i, _) in simplex.iter().enumerate() {
                let mut face = simplex.clone();
                face.remove(i);
                let sign = if i % 2 == 0 { 1 } else { -1 };
                out.add_term(face, sign * coeff);
            }
        }
        out
    }
}

impl FlagChain {
    pub fn of_flag(flag: &[Vec<usize>], coeff: i64) -> FlagChain {
        match sort_sign(flag) {
            Some((sorted, sign)) => Chain::of(sorted, sign * coeff),
            None => Chain::zero(),
        }
    }

    pub fn boundary(&self) -> FlagChain {
        let mut out = Chain::zero();
        for (flag, coeff) in self.terms() {
            for (i, _) in flag.iter().enumerate() {
                let mut face = flag.clone();
                face.remove(i);
                let sign = if i % 2 == 0 { 1 } else { -1 };
                out.add_term(face, sign * coeff);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orientation_signs() {
        let c = SimplexChain::of_oriented(&[2, 0, 1], 1);
        assert_eq!(c.coeff(&vec![0, 1, 2]), 1); // even permutation
        let c = SimplexChain::of_oriented(&[1, 0, 2], 1);
        assert_eq!(c.coeff(&vec![0, 1, 2]), -1);
        assert!(SimplexChain::of_oriented(&[0, 0, 1], 1).is_zero());
    }

    #[test]
    fn boundary_squares_to_zero() {
        let c = SimplexChain::of_oriented(&[0, 1, 2, 3], 1);
        assert!(c.boundary().boundary().is_zero());
    }

    #[test]
    fn boundary_of_edge() {
        let c = SimplexChain::of_oriented(&[0, 1], 1);
        let b = c.boundary();
        assert_eq!(b.coeff(&vec![1]), 1);
        assert_eq!(b.coeff(&vec![0]), -1);
    }
}
