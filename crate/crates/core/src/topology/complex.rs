//! Ordered simplicial complexes: downward-closed families of subsets of a
//! totally ordered vertex universe, with links, stars, joins, suspension and
//! the barycentric subdivision chain map.

use std::collections::{BTreeSet, HashMap};

use super::chain::{Chain, FlagChain, SimplexChain};
use crate::error::{Error, Result};

/// Simplices stored per dimension in ascending vertex order; the vertex
/// universe is `0..vertex_count` and unused vertices are allowed (links and
/// full subcomplexes stay on the parent universe).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertex_count: usize,
    dims: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

impl SimplicialComplex {
    pub fn empty(vertex_count: usize) -> Self {
        SimplicialComplex {
            vertex_count,
            dims: Vec::new(),
            index: Vec::new(),
        }
    }

    /// Build from maximal simplices, closing downward.
    pub fn from_maximal(vertex_count: usize, maximal: &[Vec<usize>]) -> Self {
        let mut family: BTreeSet<Vec<usize>> = BTreeSet::new();
        for m in maximal {
            let mut s = m.clone();
            s.sort_unstable();
            s.dedup();
            assert_eq!(s.len(), m.len(), "repeated vertex in simplex");
            assert!(s.iter().all(|&v| v < vertex_count), "vertex out of range");
            insert_with_faces(&mut family, s);
        }
        Self::from_sorted_family(vertex_count, family)
    }

    /// Build from an explicit family and verify downward closure; the
    /// violating face is reported, not repaired.
    pub fn from_family_checked(
        vertex_count: usize,
        family: impl IntoIterator<Item = Vec<usize>>,
    ) -> Result<Self> {
        let set: BTreeSet<Vec<usize>> = family
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s
            })
            .collect();
        for simplex in &set {
            assert!(
                simplex.iter().all(|&v| v < vertex_count),
                "vertex out of range"
            );
            if simplex.len() <= 1 {
                continue;
            }
            for i in 0..simplex.len() {
                let mut face = simplex.clone();
                face.remove(i);
                if !set.contains(&face) {
                    return Err(Error::ClosureViolation {
                        face: format!("{face:?}"),
                        simplex: format!("{simplex:?}"),
                    });
                }
            }
        }
        Ok(Self::from_sorted_family(vertex_count, set))
    }

    fn from_sorted_family(vertex_count: usize, family: BTreeSet<Vec<usize>>) -> Self {
        let mut dims: Vec<Vec<Vec<usize>>> = Vec::new();
        for s in family {
            if s.is_empty() {
                continue;
            }
            let k = s.len() - 1;
            while dims.len() <= k {
                dims.push(Vec::new());
            }
            dims[k].push(s);
        }
        for level in dims.iter_mut() {
            level.sort_unstable();
        }
        let index = dims
            .iter()
            .map(|level| {
                level
                    .iter()
                    .enumerate()
                    .map(|(i, s)| (s.clone(), i))
                    .collect()
            })
            .collect();
        SimplicialComplex {
            vertex_count,
            dims,
            index,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Dimension; -1 for the empty complex.
    pub fn dim(&self) -> i64 {
        self.dims.len() as i64 - 1
    }

    pub fn is_empty_complex(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn simplices(&self, k: usize) -> &[Vec<usize>] {
        self.dims.get(k).map_or(&[], |v| v.as_slice())
    }

    pub fn simplex_count(&self, k: usize) -> usize {
        self.simplices(k).len()
    }

    pub fn total_simplices(&self) -> usize {
        self.dims.iter().map(|d| d.len()).sum()
    }

    pub fn contains(&self, simplex: &[usize]) -> bool {
        if simplex.is_empty() {
            return true;
        }
        let mut s = simplex.to_vec();
        s.sort_unstable();
        self.index
            .get(s.len() - 1)
            .map_or(false, |m| m.contains_key(&s))
    }

    pub fn simplex_position(&self, simplex: &[usize]) -> Option<usize> {
        self.index.get(simplex.len() - 1)?.get(simplex).copied()
    }

    pub fn all_simplices(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.dims.iter().flatten()
    }

    pub fn vertices_used(&self) -> Vec<usize> {
        self.simplices(0).iter().map(|s| s[0]).collect()
    }

    pub fn facets(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for k in 0..self.dims.len() {
            for s in &self.dims[k] {
                let maximal = !(0..self.vertex_count).any(|v| {
                    if s.contains(&v) {
                        return false;
                    }
                    let mut bigger = s.clone();
                    bigger.push(v);
                    bigger.sort_unstable();
                    self.contains(&bigger)
                });
                if maximal {
                    out.push(s.clone());
                }
            }
        }
        out
    }

    pub fn is_pure(&self, d: i64) -> std::result::Result<(), Vec<usize>> {
        for f in self.facets() {
            if f.len() as i64 - 1 != d {
                return Err(f);
            }
        }
        Ok(())
    }

    /// Reduced Euler characteristic: Σ (-1)^k #k-simplices - 1 over the
    /// augmented complex; the empty complex has χ̃ = -(-1) ... = -1·(-1)^{-1},
    /// i.e. χ̃(∅) = -1 with only the (-1)-cell.
    pub fn reduced_euler(&self) -> i64 {
        let mut chi: i64 = -1; // the empty simplex in degree -1
        for (k, level) in self.dims.iter().enumerate() {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            chi += sign * level.len() as i64;
        }
        chi
    }

    /// (link, star) of a simplex: link = {Σ : Σ∪Δ ∈ K, Σ∩Δ = ∅},
    /// star = {Σ : Σ∪Δ ∈ K}; both on the same vertex universe.
    pub fn link_star(&self, simplex: &[usize]) -> Result<(SimplicialComplex, SimplicialComplex)> {
        if !self.contains(simplex) {
            return Err(Error::NotASimplex(format!("{simplex:?}")));
        }
        let delta: BTreeSet<usize> = simplex.iter().copied().collect();
        let mut link = BTreeSet::new();
        let mut star = BTreeSet::new();
        for s in self.all_simplices() {
            let union: Vec<usize> = s
                .iter()
                .copied()
                .chain(delta.iter().copied())
                .collect::<BTreeSet<usize>>()
                .into_iter()
                .collect();
            if self.contains(&union) {
                star.insert(s.clone());
                if s.iter().all(|v| !delta.contains(v)) {
                    link.insert(s.clone());
                }
            }
        }
        Ok((
            Self::from_sorted_family(self.vertex_count, link),
            Self::from_sorted_family(self.vertex_count, star),
        ))
    }

    pub fn link(&self, simplex: &[usize]) -> Result<SimplicialComplex> {
        Ok(self.link_star(simplex)?.0)
    }

    /// Full subcomplex on a vertex subset (same universe).
    pub fn full_subcomplex(&self, verts: &BTreeSet<usize>) -> SimplicialComplex {
        let family: BTreeSet<Vec<usize>> = self
            .all_simplices()
            .filter(|s| s.iter().all(|v| verts.contains(v)))
            .cloned()
            .collect();
        Self::from_sorted_family(self.vertex_count, family)
    }

    /// Intersection of two complexes on the same universe.
    pub fn intersection(&self, other: &SimplicialComplex) -> SimplicialComplex {
        let family: BTreeSet<Vec<usize>> = self
            .all_simplices()
            .filter(|s| other.contains(s))
            .cloned()
            .collect();
        Self::from_sorted_family(self.vertex_count.max(other.vertex_count), family)
    }

    pub fn union(&self, other: &SimplicialComplex) -> SimplicialComplex {
        let family: BTreeSet<Vec<usize>> = self
            .all_simplices()
            .chain(other.all_simplices())
            .cloned()
            .collect();
        Self::from_sorted_family(self.vertex_count.max(other.vertex_count), family)
    }

    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.all_simplices().all(|s| other.contains(s))
    }
}

fn insert_with_faces(family: &mut BTreeSet<Vec<usize>>, simplex: Vec<usize>) {
    if simplex.is_empty() || family.contains(&simplex) {
        return;
    }
    for i in 0..simplex.len() {
        let mut face = simplex.clone();
        face.remove(i);
        insert_with_faces(family, face);
    }
    family.insert(simplex);
}

/// Join of two complexes living on one vertex universe with disjoint used
/// vertex sets. Simplices of the join are unions σ ∪ τ.
pub fn join_suspend(k: &SimplicialComplex, l: &SimplicialComplex) -> Result<SimplicialComplex> {
    let vk: BTreeSet<usize> = k.vertices_used().into_iter().collect();
    let vl: BTreeSet<usize> = l.vertices_used().into_iter().collect();
    let shared = vk.intersection(&vl).count();
    if shared > 0 {
        return Err(Error::VertexCollision(shared));
    }
    let universe = k.vertex_count().max(l.vertex_count());
    let mut family: BTreeSet<Vec<usize>> = BTreeSet::new();
    let k_simps: Vec<Vec<usize>> = std::iter::once(vec![])
        .chain(k.all_simplices().cloned())
        .collect();
    let l_simps: Vec<Vec<usize>> = std::iter::once(vec![])
        .chain(l.all_simplices().cloned())
        .collect();
    for a in &k_simps {
        for b in &l_simps {
            if a.is_empty() && b.is_empty() {
                continue;
            }
            let mut u: Vec<usize> = a.iter().chain(b.iter()).copied().collect();
            u.sort_unstable();
            family.insert(u);
        }
    }
    Ok(SimplicialComplex::from_sorted_family(universe, family))
}

/// Suspension chain map for L ≅ S^0 = {a, b}: σ ↦ a∗σ − b∗σ, including the
/// empty simplex in degree -1 (which maps to [a] − [b]). Induces the
/// suspension isomorphism on reduced homology.
pub fn suspension_chain(c: &SimplexChain, a: usize, b: usize) -> SimplexChain {
    let mut out = Chain::zero();
    for (s, coeff) in c.terms() {
        let mut with_a = s.clone();
        with_a.push(a);
        let mut with_b = s.clone();
        with_b.push(b);
        out = out.add(&SimplexChain::of_oriented(&with_a, coeff));
        out = out.add(&SimplexChain::of_oriented(&with_b, -coeff));
    }
    out
}

/// Barycentric subdivision: the order complex of the simplex poset. Returns
/// the subdivided complex together with the simplex list indexing its
/// vertices (vertex i of the subdivision is `simplices[i]` of K, ordered by
/// dimension then lexicographically, which is a linear extension).
pub fn barycentric_subdivide(k: &SimplicialComplex) -> (SimplicialComplex, Vec<Vec<usize>>) {
    let mut verts: Vec<Vec<usize>> = k.all_simplices().cloned().collect();
    verts.sort_by(|a, b| (a.len(), a.clone()).cmp(&(b.len(), b.clone())));
    // chains of the face relation; generate by extension along strict faces
    let mut family: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut frontier: Vec<Vec<usize>> = (0..verts.len()).map(|i| vec![i]).collect();
    while let Some(flag) = frontier.pop() {
        family.insert(flag.clone());
        let last = &verts[flag[flag.len() - 1]];
        for (i, cand) in verts.iter().enumerate() {
            if cand.len() > last.len() && is_strict_face(last, cand) {
                let mut bigger = flag.clone();
                bigger.push(i);
                if !family.contains(&bigger) {
                    frontier.push(bigger);
                }
            }
        }
    }
    (
        SimplicialComplex::from_sorted_family(verts.len(), family),
        verts,
    )
}

fn is_strict_face(a: &[usize], b: &[usize]) -> bool {
    a.len() < b.len() && a.iter().all(|v| b.contains(v))
}

/// Barycentric subdivision chain map
/// b([v_0..v_k]) = Σ_{π ∈ S_{k+1}} sgn(π) · [F_0^π ⊂ ... ⊂ F_k^π] with
/// F_i^π = {v_{π(0)}, ..., v_{π(i)}}. Commutes with boundaries on the nose.
pub fn barycentric_chain(c: &SimplexChain) -> FlagChain {
    let mut out: FlagChain = Chain::zero();
    for (simplex, coeff) in c.terms() {
        let k = simplex.len();
        if k == 0 {
            // degree -1 passes through: empty flag
            out.add_term(vec![], coeff);
            continue;
        }
        let mut perm: Vec<usize> = (0..k).collect();
        permute_all(&mut perm, 0, &mut |p, sign| {
            let mut flag: Vec<Vec<usize>> = Vec::with_capacity(k);
            let mut face: Vec<usize> = Vec::with_capacity(k);
            for &i in p {
                face.push(simplex[i]);
                let mut sorted = face.clone();
                sorted.sort_unstable();
                flag.push(sorted);
            }
            out.add_term(flag, sign * coeff);
        });
    }
    out
}

fn permute_all(perm: &mut Vec<usize>, at: usize, visit: &mut impl FnMut(&[usize], i64)) {
    let n = perm.len();
    if at == n {
        // sign by inversion count
        let mut sign = 1i64;
        for i in 0..n {
            for j in (i + 1)..n {
                if perm[i] > perm[j] {
                    sign = -sign;
                }
            }
        }
        visit(perm, sign);
        return;
    }
    for i in at..n {
        perm.swap(at, i);
        permute_all(perm, at + 1, visit);
        perm.swap(at, i);
    }
}

/// Convert a flag chain into a simplex chain of the subdivided complex,
/// using the vertex indexing returned by `barycentric_subdivide`. Flags are
/// strictly nested so their subdivision vertex ids ascend: no sign fixes.
pub fn flag_chain_in_subdivision(
    flags: &FlagChain,
    subdivision_vertices: &[Vec<usize>],
) -> SimplexChain {
    let pos: HashMap<&Vec<usize>, usize> = subdivision_vertices
        .iter()
        .enumerate()
        .map(|(i, s)| (s, i))
        .collect();
    flags.map_keys(|flag| {
        let ids: Vec<usize> = flag.iter().map(|f| pos[f]).collect();
        debug_assert!(ids.windows(2).all(|w| w[0] < w[1]));
        Some((ids, 1))
    })
}
