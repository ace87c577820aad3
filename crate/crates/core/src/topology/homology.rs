//! Exact integral homology of complexes and pairs, through Smith normal
//! form, plus finitely presented abelian groups with induced-map checks.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};

use super::chain::SimplexChain;
use super::complex::SimplicialComplex;
use crate::linalg::{elementary_divisors_sparse, kernel_z, smith_normal_form, solve_z, IntMatrix};

/// Reduced Betti numbers and torsion coefficients per degree. Degree -1 is
/// present so the empty complex reports b̃_{-1} = 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyReport {
    pub betti: BTreeMap<i64, usize>,
    pub torsion: BTreeMap<i64, Vec<BigInt>>,
}

impl HomologyReport {
    pub fn betti(&self, k: i64) -> usize {
        self.betti.get(&k).copied().unwrap_or(0)
    }

    pub fn torsion(&self, k: i64) -> &[BigInt] {
        self.torsion.get(&k).map_or(&[], |v| v.as_slice())
    }

    pub fn is_trivial(&self) -> bool {
        self.betti.values().all(|&b| b == 0) && self.torsion.values().all(|t| t.is_empty())
    }

    /// Homology concentrated in degree d and free there (zero allowed).
    pub fn concentrated_free(&self, d: i64) -> bool {
        self.betti.iter().all(|(&k, &b)| k == d || b == 0)
            && self.torsion.values().all(|t| t.is_empty())
    }

    /// Homologically k-connected: reduced homology vanishes through degree k.
    /// k = -1 means nonempty; k ≤ -2 is vacuous.
    pub fn connected_through(&self, k: i64) -> bool {
        self.betti.iter().all(|(&deg, &b)| deg > k || b == 0)
            && self.torsion.iter().all(|(&deg, t)| deg > k || t.is_empty())
    }

    pub fn describe(&self) -> String {
        let parts: Vec<String> = self
            .betti
            .iter()
            .filter(|(_, &b)| b > 0)
            .map(|(k, b)| format!("b~{k}={b}"))
            .chain(
                self.torsion
                    .iter()
                    .filter(|(_, t)| !t.is_empty())
                    .map(|(k, t)| {
                        format!(
                            "t{k}=[{}]",
                            t.iter()
                                .map(|x| x.to_string())
                                .collect::<Vec<_>>()
                                .join(",")
                        )
                    }),
            )
            .collect();
        if parts.is_empty() {
            "trivial".into()
        } else {
            parts.join(" ")
        }
    }
}

/// Boundary matrix ∂_k: C_k -> C_{k-1} as sparse triplets; k = 0 is the
/// augmentation row.
fn boundary_triplets(
    k: usize,
    complex: &SimplicialComplex,
) -> (usize, usize, Vec<(usize, usize, i64)>) {
    let cols = complex.simplex_count(k);
    if k == 0 {
        return (1, cols, (0..cols).map(|j| (0, j, 1)).collect());
    }
    let rows = complex.simplex_count(k - 1);
    let mut trip = Vec::new();
    for (j, s) in complex.simplices(k).iter().enumerate() {
        for (i, _) in s.iter().enumerate() {
            let mut face = s.clone();
            face.remove(i);
            let r = complex
                .simplex_position(&face)
                .expect("complex not downward closed");
            let sign = if i % 2 == 0 { 1 } else { -1 };
            trip.push((r, j, sign));
        }
    }
    (rows, cols, trip)
}

/// Reduced integral homology (augmented chain complex).
pub fn reduced_homology(complex: &SimplicialComplex) -> HomologyReport {
    if complex.is_empty_complex() {
        let mut betti = BTreeMap::new();
        betti.insert(-1, 1);
        return HomologyReport {
            betti,
            torsion: BTreeMap::new(),
        };
    }
    let top = complex.dim() as usize;
    // divisors of ∂_k for k = 0..=top
    let mut divisors: Vec<Vec<BigInt>> = Vec::with_capacity(top + 1);
    for k in 0..=top {
        let (r, c, trip) = boundary_triplets(k, complex);
        divisors.push(elementary_divisors_sparse(r, c, &trip));
    }
    let rank = |k: usize| -> usize { divisors.get(k).map_or(0, |d| d.len()) };
    let mut betti = BTreeMap::new();
    let mut torsion = BTreeMap::new();
    // degree -1: C_{-1} = Z, rank ∂_0 = 1 for nonempty
    betti.insert(-1, 1 - rank(0));
    for k in 0..=top {
        let ck = complex.simplex_count(k);
        let b = ck - rank(k) - rank(k + 1);
        betti.insert(k as i64, b);
        if k + 1 <= top {
            let tors: Vec<BigInt> = divisors[k + 1]
                .iter()
                .filter(|d| !d.is_one())
                .cloned()
                .collect();
            if !tors.is_empty() {
                torsion.insert(k as i64, tors);
            }
        }
    }
    let report = HomologyReport { betti, torsion };
    // consistency: reduced Euler characteristic from face counts
    let chi_faces = complex.reduced_euler();
    let chi_homology: i64 = report
        .betti
        .iter()
        .map(|(&k, &b)| {
            if k.rem_euclid(2) == 0 {
                b as i64
            } else {
                -(b as i64)
            }
        })
        .sum();
    assert_eq!(
        chi_faces, chi_homology,
        "Euler characteristic mismatch: faces {chi_faces}, homology {chi_homology}"
    );
    report
}

/// Integral homology of the pair (K, L): the quotient complex on simplices
/// of K not in L, no augmentation.
pub fn relative_homology(k: &SimplicialComplex, l: &SimplicialComplex) -> HomologyReport {
    assert!(l.is_subcomplex_of(k), "L must be a subcomplex of K");
    let top = if k.dim() < 0 { 0 } else { k.dim() as usize };
    let mut bases: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut index: Vec<HashMap<Vec<usize>, usize>> = Vec::new();
    for deg in 0..=top {
        let level: Vec<Vec<usize>> = k
            .simplices(deg)
            .iter()
            .filter(|s| !l.contains(s))
            .cloned()
            .collect();
        index.push(
            level
                .iter()
                .enumerate()
                .map(|(i, s)| (s.clone(), i))
                .collect(),
        );
        bases.push(level);
    }
    let mut divisors: Vec<Vec<BigInt>> = Vec::new();
    for deg in 0..=top {
        if deg == 0 {
            divisors.push(Vec::new()); // ∂_0 = 0 relatively
            continue;
        }
        let mut trip = Vec::new();
        for (j, s) in bases[deg].iter().enumerate() {
            for (i, _) in s.iter().enumerate() {
                let mut face = s.clone();
                face.remove(i);
                if let Some(&r) = index[deg - 1].get(&face) {
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    trip.push((r, j, sign));
                }
            }
        }
        divisors.push(elementary_divisors_sparse(
            bases[deg - 1].len(),
            bases[deg].len(),
            &trip,
        ));
    }
    let rank = |d: usize| -> usize { divisors.get(d).map_or(0, |v| v.len()) };
    let mut betti = BTreeMap::new();
    let mut torsion = BTreeMap::new();
    for deg in 0..=top {
        let b = bases[deg].len() - rank(deg) - rank(deg + 1);
        betti.insert(deg as i64, b);
        if deg + 1 <= top {
            let tors: Vec<BigInt> = divisors[deg + 1]
                .iter()
                .filter(|d| !d.is_one())
                .cloned()
                .collect();
            if !tors.is_empty() {
                torsion.insert(deg as i64, tors);
            }
        }
    }
    HomologyReport { betti, torsion }
}

/// Finitely presented abelian group Z^gens / im(rels).
#[derive(Clone, Debug)]
pub struct Presentation {
    pub gens: usize,
    pub rels: IntMatrix, // gens × r, columns are relations
}

impl Presentation {
    pub fn invariants(&self) -> (usize, Vec<BigInt>) {
        if self.gens == 0 {
            return (0, vec![]);
        }
        let snf = smith_normal_form(&self.rels);
        let torsion: Vec<BigInt> = snf
            .diagonal
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect();
        (self.gens - snf.rank, torsion)
    }

    pub fn rank(&self) -> usize {
        self.invariants().0
    }

    pub fn is_trivial(&self) -> bool {
        let (r, t) = self.invariants();
        r == 0 && t.is_empty()
    }
}

/// Homology in one degree with explicit cycle-basis generators, for mapping
/// classes around. `pair` restricts to relative chains mod L.
pub struct HomologyAt {
    pub degree: usize,
    pub presentation: Presentation,
    /// Chains of K generating the cycle space (the presentation's generators)
    pub cycle_basis: Vec<SimplexChain>,
    basis_simplices: Vec<Vec<usize>>,
    kernel_matrix: IntMatrix, // columns = cycle basis in simplex coords
}

impl HomologyAt {
    /// Coordinates of a cycle's class in the presentation's generators;
    /// None when the chain is not supported on the degree's basis or is not
    /// in the kernel lattice.
    pub fn class_of(&self, chain: &SimplexChain) -> Option<Vec<BigInt>> {
        let mut coords = vec![BigInt::zero(); self.basis_simplices.len()];
        for (s, c) in chain.terms() {
            let pos = self.basis_simplices.binary_search(s).ok()?;
            coords[pos] = BigInt::from(c);
        }
        solve_z(&self.kernel_matrix, &coords)
    }
}

/// Homology of K (or of the pair (K, L)) at a fixed degree, presented with
/// generators. Reduced (augmented) in the absolute case.
pub fn homology_presentation(
    k: &SimplicialComplex,
    l: Option<&SimplicialComplex>,
    degree: usize,
) -> HomologyAt {
    let in_l = |s: &Vec<usize>| l.map_or(false, |l| l.contains(s));
    let basis: Vec<Vec<usize>> = k
        .simplices(degree)
        .iter()
        .filter(|s| !in_l(s))
        .cloned()
        .collect();
    let below: Vec<Vec<usize>> = if degree == 0 {
        vec![] // augmentation handled separately
    } else {
        k.simplices(degree - 1)
            .iter()
            .filter(|s| !in_l(s))
            .cloned()
            .collect()
    };
    let below_pos: HashMap<&Vec<usize>, usize> =
        below.iter().enumerate().map(|(i, s)| (s, i)).collect();

    // ∂_degree matrix (plus augmentation row in absolute degree 0)
    let rows = if degree == 0 {
        if l.is_none() {
            1
        } else {
            0
        }
    } else {
        below.len()
    };
    let mut dk = IntMatrix::zeros(rows, basis.len());
    for (j, s) in basis.iter().enumerate() {
        if degree == 0 {
            if l.is_none() {
                dk.set(0, j, BigInt::one());
            }
            continue;
        }
        for (i, _) in s.iter().enumerate() {
            let mut face = s.clone();
            face.remove(i);
            if let Some(&r) = below_pos.get(&face) {
                let sign = if i % 2 == 0 { 1 } else { -1 };
                dk.set(r, j, BigInt::from(sign));
            }
        }
    }
    let kernel = kernel_z(&dk);
    let kernel_matrix = IntMatrix::from_fn(basis.len(), kernel.len(), |i, j| kernel[j][i]);

    // boundaries from degree+1, expressed in kernel coordinates
    let above: Vec<Vec<usize>> = k
        .simplices(degree + 1)
        .iter()
        .filter(|s| !in_l(s))
        .cloned()
        .collect();
    let mut rel_cols: Vec<Vec<BigInt>> = Vec::new();
    for s in &above {
        let mut col = vec![BigInt::zero(); basis.len()];
        for (i, _) in s.iter().enumerate() {
            let mut face = s.clone();
            face.remove(i);
            if let Ok(pos) = basis.binary_search(&face) {
                let sign = if i % 2 == 0 { 1 } else { -1 };
                col[pos] += BigInt::from(sign);
            }
        }
        let x = solve_z(&kernel_matrix, &col).expect("boundary is not a cycle");
        rel_cols.push(x);
    }
    let rels = IntMatrix::from_fn(kernel.len(), rel_cols.len(), |i, j| {
        crate::linalg::to_i64(&rel_cols[j][i])
    });
    let cycle_basis: Vec<SimplexChain> = kernel
        .iter()
        .map(|v| {
            let mut c = SimplexChain::zero();
            for (i, &coef) in v.iter().enumerate() {
                if coef != 0 {
                    c.add_term(basis[i].clone(), coef);
                }
            }
            c
        })
        .collect();
    HomologyAt {
        degree,
        presentation: Presentation {
            gens: kernel.len(),
            rels,
        },
        cycle_basis,
        basis_simplices: basis,
        kernel_matrix,
    }
}

/// Whether a map of presented groups given on generators is an isomorphism:
/// surjectivity via the cokernel of [φ | rels2], injectivity by checking
/// that kernel solutions land in im(rels1).
pub fn map_is_isomorphism(src: &Presentation, dst: &Presentation, phi: &IntMatrix) -> bool {
    assert_eq!(phi.rows(), dst.gens);
    assert_eq!(phi.cols(), src.gens);
    if !map_is_surjective(dst, phi) {
        return false;
    }
    // kernel: solutions (x, y) of φx = rels2·y must have x ∈ im(rels1)
    let stacked = IntMatrix::from_fn(dst.gens, src.gens + dst.rels.cols(), |i, j| {
        if j < src.gens {
            crate::linalg::to_i64(phi.at(i, j))
        } else {
            -crate::linalg::to_i64(dst.rels.at(i, j - src.gens))
        }
    });
    for v in kernel_z(&stacked) {
        let x: Vec<BigInt> = v[..src.gens].iter().map(|&c| BigInt::from(c)).collect();
        if x.iter().all(|c| c.is_zero()) {
            continue;
        }
        if solve_z(&src.rels, &x).is_none() {
            return false;
        }
    }
    true
}

pub fn map_is_surjective(dst: &Presentation, phi: &IntMatrix) -> bool {
    if dst.gens == 0 {
        return true;
    }
    let stacked = IntMatrix::from_fn(dst.gens, phi.cols() + dst.rels.cols(), |i, j| {
        if j < phi.cols() {
            crate::linalg::to_i64(phi.at(i, j))
        } else {
            crate::linalg::to_i64(dst.rels.at(i, j - phi.cols()))
        }
    });
    let snf = smith_normal_form(&stacked);
    snf.rank == dst.gens && snf.diagonal.iter().all(|d| d.is_one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::complex::SimplicialComplex;
    use num_traits::Signed;

    #[test]
    fn three_isolated_points() {
        let k = SimplicialComplex::from_maximal(3, &[vec![0], vec![1], vec![2]]);
        let h = reduced_homology(&k);
        assert_eq!(h.betti(0), 2);
        assert_eq!(h.betti(-1), 0);
    }

    #[test]
    fn empty_complex_has_degree_minus_one() {
        let k = SimplicialComplex::empty(0);
        let h = reduced_homology(&k);
        assert_eq!(h.betti(-1), 1);
    }

    #[test]
    fn sphere_boundary_of_tetrahedron() {
        let k = SimplicialComplex::from_maximal(
            4,
            &[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]],
        );
        let h = reduced_homology(&k);
        assert_eq!(h.betti(2), 1);
        assert_eq!(h.betti(1), 0);
        assert_eq!(h.betti(0), 0);
        assert!(h.torsion(1).is_empty());
    }

    #[test]
    fn projective_plane_torsion() {
        // minimal 6-vertex triangulation of RP^2 (antipodal icosahedron)
        let rp2: Vec<Vec<usize>> = vec![
            vec![0, 1, 3],
            vec![0, 1, 4],
            vec![0, 2, 3],
            vec![0, 2, 5],
            vec![0, 4, 5],
            vec![1, 2, 4],
            vec![1, 2, 5],
            vec![1, 3, 5],
            vec![2, 3, 4],
            vec![3, 4, 5],
        ];
        let k = SimplicialComplex::from_maximal(6, &rp2);
        let h = reduced_homology(&k);
        assert_eq!(h.betti(0), 0);
        assert_eq!(h.betti(1), 0);
        assert_eq!(h.betti(2), 0);
        assert_eq!(h.torsion(1), &[BigInt::from(2)]);
    }

    #[test]
    fn relative_disc_mod_boundary() {
        let disc = SimplicialComplex::from_maximal(3, &[vec![0, 1, 2]]);
        let boundary = SimplicialComplex::from_maximal(3, &[vec![0, 1], vec![1, 2], vec![0, 2]]);
        let h = relative_homology(&disc, &boundary);
        assert_eq!(h.betti(2), 1);
        assert_eq!(h.betti(1), 0);
        assert_eq!(h.betti(0), 0);
    }

    #[test]
    fn presentation_of_circle() {
        let k = SimplicialComplex::from_maximal(3, &[vec![0, 1], vec![1, 2], vec![0, 2]]);
        let h1 = homology_presentation(&k, None, 1);
        let (rank, tors) = h1.presentation.invariants();
        assert_eq!(rank, 1);
        assert!(tors.is_empty());
        // the fundamental cycle maps to a generator
        let z = SimplexChain::of_oriented(&[0, 1], 1)
            .add(&SimplexChain::of_oriented(&[1, 2], 1))
            .add(&SimplexChain::of_oriented(&[0, 2], -1));
        let class = h1.class_of(&z).unwrap();
        assert!(class.iter().any(|c| c.abs() == BigInt::one()));
    }

    #[test]
    fn iso_check_on_identity() {
        let p = Presentation {
            gens: 2,
            rels: IntMatrix::from_rows(&[vec![2], vec![0]]),
        };
        let id = IntMatrix::identity(2);
        assert!(map_is_isomorphism(&p, &p, &id));
        let doubling = IntMatrix::from_rows(&[vec![2, 0], vec![0, 1]]);
        assert!(!map_is_isomorphism(&p, &p, &doubling));
    }
}
