//! Bounded fundamental-group triviality attempt via Tietze simplification
//! of the edge-path presentation. Connectivity claims in the sources are
//! homotopy-theoretic; homology plus this check is what the artifact can
//! certify, so outcomes are "proven trivial" or "inconclusive", never a
//! negative claim.

use std::collections::HashMap;

use super::complex::SimplicialComplex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Pi1Outcome {
    ProvenTrivial,
    Inconclusive,
    NotAttempted,
}

const MAX_PASSES: usize = 40;
const MAX_WORD_LEN: usize = 4096;

/// Edge-path presentation on a spanning tree, then bounded simplification.
/// Requires a connected complex (callers check 0-connectivity first).
pub fn pi1_triviality(complex: &SimplicialComplex) -> Pi1Outcome {
    let verts = complex.vertices_used();
    if verts.is_empty() {
        return Pi1Outcome::NotAttempted;
    }
    // spanning tree by BFS over the 1-skeleton
    let mut tree: HashMap<usize, usize> = HashMap::new(); // vertex -> parent
    let mut seen = vec![false; complex.vertex_count()];
    let root = verts[0];
    seen[root] = true;
    let mut queue = std::collections::VecDeque::from([root]);
    let edges: Vec<(usize, usize)> = complex.simplices(1).iter().map(|e| (e[0], e[1])).collect();
    let mut adjacency: HashMap<usize, Vec<usize>> = HashMap::new();
    for &(a, b) in &edges {
        adjacency.entry(a).or_default().push(b);
        adjacency.entry(b).or_default().push(a);
    }
    while let Some(v) = queue.pop_front() {
        for &w in adjacency.get(&v).into_iter().flatten() {
            if !seen[w] {
                seen[w] = true;
                tree.insert(w, v);
                queue.push_back(w);
            }
        }
    }
    if verts.iter().any(|&v| !seen[v]) {
        return Pi1Outcome::NotAttempted; // disconnected
    }
    let in_tree = |a: usize, b: usize| tree.get(&a) == Some(&b) || tree.get(&b) == Some(&a);
    // generators: non-tree edges, numbered from 1 (sign = direction)
    let mut gen_of: HashMap<(usize, usize), i32> = HashMap::new();
    let mut next = 1i32;
    for &(a, b) in &edges {
        if !in_tree(a, b) {
            gen_of.insert((a, b), next);
            next += 1;
        }
    }
    let letter = |a: usize, b: usize| -> Option<i32> {
        // edge traversed a -> b
        if in_tree(a, b) {
            None
        } else if let Some(&g) = gen_of.get(&(a.min(b), a.max(b))) {
            Some(if a < b { g } else { -g })
        } else {
            None
        }
    };
    // relations from 2-simplices: path a->b->c->a
    let mut relations: Vec<Vec<i32>> = Vec::new();
    for t in complex.simplices(2) {
        let (a, b, c) = (t[0], t[1], t[2]);
        let mut word = Vec::new();
        for (x, y) in [(a, b), (b, c), (c, a)] {
            if let Some(g) = letter(x, y) {
                word.push(g);
            }
        }
        if !word.is_empty() {
            relations.push(word);
        }
    }
    let gens = (next - 1) as usize;
    simplify(gens, relations)
}

fn free_reduce(word: &mut Vec<i32>) {
    let mut out: Vec<i32> = Vec::with_capacity(word.len());
    for &g in word.iter() {
        if out.last() == Some(&-g) {
            out.pop();
        } else {
            out.push(g);
        }
    }
    *word = out;
}

fn simplify(gens: usize, mut relations: Vec<Vec<i32>>) -> Pi1Outcome {
    if gens == 0 {
        return Pi1Outcome::ProvenTrivial;
    }
    let mut alive: Vec<bool> = vec![true; gens + 1];
    let mut alive_count = gens;
    for _ in 0..MAX_PASSES {
        for w in relations.iter_mut() {
            free_reduce(w);
        }
        relations.retain(|w| !w.is_empty());
        // a length-1 relation kills its generator
        let mut killed = None;
        for w in &relations {
            if w.len() == 1 {
                killed = Some(w[0].unsigned_abs() as usize);
                break;
            }
        }
        // otherwise substitute a generator that appears exactly once in some
        // relation: g = inverse of the rest
        let mut substitution: Option<(usize, Vec<i32>)> = None;
        if killed.is_none() {
            'rel: for w in &relations {
                for (i, &g) in w.iter().enumerate() {
                    let id = g.unsigned_abs() as usize;
                    let occurrences = w
                        .iter()
                        .filter(|&&h| h.unsigned_abs() as usize == id)
                        .count();
                    if occurrences == 1 {
                        // g = (prefix)^{-1} (suffix)^{-1}  when w = prefix g suffix
                        let mut rest: Vec<i32> = Vec::new();
                        for &h in w[i + 1..].iter().chain(w[..i].iter()) {
                            rest.push(h);
                        }
                        let mut value: Vec<i32> = rest.iter().rev().map(|&h| -h).collect();
                        if g < 0 {
                            value = value.iter().rev().map(|&h| -h).collect();
                        }
                        substitution = Some((id, value));
                        break 'rel;
                    }
                }
            }
        }
        match (killed, substitution) {
            (Some(id), _) => {
                alive[id] = false;
                alive_count -= 1;
                for w in relations.iter_mut() {
                    w.retain(|&g| g.unsigned_abs() as usize != id);
                }
            }
            (None, Some((id, value))) => {
                alive[id] = false;
                alive_count -= 1;
                let mut too_long = false;
                for w in relations.iter_mut() {
                    let mut out: Vec<i32> = Vec::new();
                    for &g in w.iter() {
                        if g.unsigned_abs() as usize == id {
                            if g > 0 {
                                out.extend(value.iter().copied());
                            } else {
                                out.extend(value.iter().rev().map(|&h| -h));
                            }
                        } else {
                            out.push(g);
                        }
                    }
                    if out.len() > MAX_WORD_LEN {
                        too_long = true;
                    }
                    *w = out;
                }
                if too_long {
                    return Pi1Outcome::Inconclusive;
                }
            }
            (None, None) => break,
        }
        if alive_count == 0 {
            return Pi1Outcome::ProvenTrivial;
        }
    }
    if alive_count == 0 {
        Pi1Outcome::ProvenTrivial
    } else {
        Pi1Outcome::Inconclusive
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disc_is_simply_connected() {
        let k = SimplicialComplex::from_maximal(3, &[vec![0, 1, 2]]);
        assert_eq!(pi1_triviality(&k), Pi1Outcome::ProvenTrivial);
    }

    #[test]
    fn sphere_is_simply_connected() {
        let k = SimplicialComplex::from_maximal(
            4,
            &[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]],
        );
        assert_eq!(pi1_triviality(&k), Pi1Outcome::ProvenTrivial);
    }

    #[test]
    fn circle_is_inconclusive() {
        let k = SimplicialComplex::from_maximal(3, &[vec![0, 1], vec![1, 2], vec![0, 2]]);
        assert_eq!(pi1_triviality(&k), Pi1Outcome::Inconclusive);
    }
}
