//! Finite posets with strict order stored as a reachability matrix, heights,
//! links/intervals, order complexes and order-preserving maps.

use std::collections::BTreeSet;

use super::complex::SimplicialComplex;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Poset {
    labels: Vec<String>,
    less: Vec<bool>, // less[i * n + j] ⟺ element i < element j
}

impl Poset {
    /// Build from labels and generating strict relations; takes the
    /// transitive closure and rejects cycles.
    pub fn new(labels: Vec<String>, relations: &[(usize, usize)]) -> Result<Poset> {
        let n = labels.len();
        let mut less = vec![false; n * n];
        for &(a, b) in relations {
            assert!(a < n && b < n, "relation out of range");
            less[a * n + b] = true;
        }
        // Floyd-Warshall closure
        for k in 0..n {
            for i in 0..n {
                if less[i * n + k] {
                    for j in 0..n {
                        if less[k * n + j] {
                            less[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            if less[i * n + i] {
                return Err(Error::Invalid(format!(
                    "relation has a cycle through {}",
                    labels[i]
                )));
            }
        }
        Ok(Poset { labels, less })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        self.less[a * self.len() + b]
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        a == b || self.lt(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        a == b || self.lt(a, b) || self.lt(b, a)
    }

    /// Height: length of the longest chain ending at the element.
    pub fn height(&self, x: usize) -> i64 {
        self.heights()[x]
    }

    pub fn heights(&self) -> Vec<i64> {
        let n = self.len();
        let mut h: Vec<i64> = vec![0; n];
        // iterate in a topological order by repeated relaxation
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (0..n).filter(|&j| self.lt(j, i)).count());
        for &i in &order {
            let below = (0..n).filter(|&j| self.lt(j, i));
            let mut best = 0;
            for j in below {
                best = best.max(h[j] + 1);
            }
            h[i] = best;
        }
        h
    }

    /// Longest chain length (number of strict steps) in the whole poset.
    pub fn chain_dimension(&self) -> i64 {
        self.heights().into_iter().max().unwrap_or(-1)
    }

    fn subposet_of(&self, keep: &[usize]) -> (Poset, Vec<usize>) {
        let labels = keep.iter().map(|&i| self.labels[i].clone()).collect();
        let m = keep.len();
        let mut less = vec![false; m * m];
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                if self.lt(i, j) {
                    less[a * m + b] = true;
                }
            }
        }
        (Poset { labels, less }, keep.to_vec())
    }

    pub fn upper_link(&self, x: usize) -> Poset {
        let keep: Vec<usize> = (0..self.len()).filter(|&y| self.lt(x, y)).collect();
        self.subposet_of(&keep).0
    }

    pub fn lower_link(&self, x: usize) -> Poset {
        let keep: Vec<usize> = (0..self.len()).filter(|&y| self.lt(y, x)).collect();
        self.subposet_of(&keep).0
    }

    pub fn interval(&self, x: usize, z: usize) -> Poset {
        let keep: Vec<usize> = (0..self.len())
            .filter(|&y| self.lt(x, y) && self.lt(y, z))
            .collect();
        self.subposet_of(&keep).0
    }

    pub fn subposet(&self, keep: &[usize]) -> Poset {
        self.subposet_of(keep).0
    }

    /// Elements with nothing above them.
    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&x| (0..self.len()).all(|y| !self.lt(x, y)))
            .collect()
    }

    /// Cover relations x ⋖ y (no z strictly between).
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if self.lt(x, y) && !(0..n).any(|z| self.lt(x, z) && self.lt(z, y)) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Permuted copy (for relabeling-invariance tests): element i of the new
    /// poset is element perm[i] of the old one.
    pub fn relabeled(&self, perm: &[usize]) -> Poset {
        assert_eq!(perm.len(), self.len());
        let labels = perm.iter().map(|&i| self.labels[i].clone()).collect();
        let n = self.len();
        let mut less = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                if self.lt(perm[a], perm[b]) {
                    less[a * n + b] = true;
                }
            }
        }
        Poset { labels, less }
    }
}

/// Order complex: vertices are the poset's elements, k-simplices its chains
/// x_0 < ... < x_k.
pub fn order_complex(p: &Poset) -> SimplicialComplex {
    let n = p.len();
    let mut family: BTreeSet<Vec<usize>> = BTreeSet::new();
    // DFS extension over chains; simplices are chains as sorted index sets
    let mut stack: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    while let Some(chain) = stack.pop() {
        let mut sorted = chain.clone();
        sorted.sort_unstable();
        if !family.insert(sorted) {
            continue;
        }
        let last = *chain.last().unwrap();
        for y in 0..n {
            if p.lt(last, y) {
                let mut bigger = chain.clone();
                bigger.push(y);
                stack.push(bigger);
            }
        }
    }
    SimplicialComplex::from_family_checked(n, family).expect("chains are downward closed")
}

/// An order-preserving map of posets; `strict` requires x < y ⇒ f(x) < f(y),
/// otherwise f(x) ≤ f(y).
#[derive(Clone, Debug)]
pub struct PosetMap {
    pub source: Poset,
    pub target: Poset,
    pub map: Vec<usize>,
    pub strict: bool,
}

impl PosetMap {
    pub fn new(source: Poset, target: Poset, map: Vec<usize>, strict: bool) -> Result<PosetMap> {
        assert_eq!(map.len(), source.len());
        for &v in &map {
            assert!(v < target.len(), "image out of range");
        }
        for x in 0..source.len() {
            for y in 0..source.len() {
                if source.lt(x, y) {
                    let ok = if strict {
                        target.lt(map[x], map[y])
                    } else {
                        target.le(map[x], map[y])
                    };
                    if !ok {
                        return Err(Error::NotMonotone(if strict {
                            "strictly increasing"
                        } else {
                            "order-preserving"
                        }));
                    }
                }
            }
        }
        Ok(PosetMap {
            source,
            target,
            map,
            strict,
        })
    }

    /// Poset fiber f_{≤ y} = {x : f(x) ≤ y}.
    pub fn fiber_below(&self, y: usize) -> Poset {
        let keep: Vec<usize> = (0..self.source.len())
            .filter(|&x| self.target.le(self.map[x], y))
            .collect();
        self.source.subposet(&keep)
    }
}


/// Simplex poset P(K) of a complex, ordered by the face relation; elements
/// come back ordered by (dimension, lex), a linear extension.
pub fn simplex_poset(k: &SimplicialComplex) -> (Poset, Vec<Vec<usize>>) {
    let mut elements: Vec<Vec<usize>> = k.all_simplices().cloned().collect();
    elements.sort_by(|a, b| (a.len(), a.clone()).cmp(&(b.len(), b.clone())));
    let labels: Vec<String> = elements.iter().map(|s| format!("{s:?}")).collect();
    let mut rels = Vec::new();
    for (i, a) in elements.iter().enumerate() {
        for (j, b) in elements.iter().enumerate() {
            if a.len() < b.len() && a.iter().all(|v| b.contains(v)) {
                rels.push((i, j));
            }
        }
    }
    let poset = Poset::new(labels, &rels).expect("face relation is acyclic");
    (poset, elements)
}
