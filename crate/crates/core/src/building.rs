//! Tits buildings of type C_n over prime fields at desk scale: the full
//! poset of nontrivial isotropic subspaces, the restricted variant inside
//! W = <e_1, f_1, ..., e_{n-1}, f_{n-1}, e_n>, upper links above a frozen
//! isotropic subspace, and type-A subspace posets. Rational-building data is
//! never enumerated; it is carried chain-level by `QFlagChain`.

use serde::Serialize;
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::symplectic::{enumerate_isotropic_fq, fq_lines, FqSubspace, QSubspace};
use crate::topology::chain::Chain;
use crate::topology::cm::{cm_certificate, CmReport};
use crate::topology::complex::SimplicialComplex;
use crate::topology::homology::reduced_homology;
use crate::topology::poset::{order_complex, Poset};

/// Which building to construct.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum BuildingVariant {
    /// All nontrivial isotropic subspaces of F_q^{2n}.
    Full,
    /// Those contained in W = <e_1, f_1, ..., e_{n-1}, f_{n-1}, e_n>.
    RestrictedToW,
    /// Upper link of <e_1, ..., e_m> in the genus-(m+n) building.
    UpperLink { m: usize },
    /// All nontrivial proper subspaces of F_q^dim (no form).
    TypeA { dim: usize },
}

#[derive(Clone, Debug)]
pub struct BuildingPoset {
    pub variant: BuildingVariant,
    pub n: usize,
    pub q: u64,
    pub elements: Vec<FqSubspace>,
    pub poset: Poset,
}

pub const DEFAULT_BUDGET: usize = 20_000;

impl BuildingPoset {
    pub fn order_complex(&self) -> SimplicialComplex {
        order_complex(&self.poset)
    }

    pub fn position(&self, sub: &FqSubspace) -> Option<usize> {
        self.elements
            .binary_search_by(|probe| (probe.dim(), probe.basis()).cmp(&(sub.dim(), sub.basis())))
            .ok()
    }

    pub fn cover_count(&self) -> usize {
        self.poset.covers().len()
    }
}

fn poset_of_subspaces(elements: &[FqSubspace]) -> Poset {
    let labels: Vec<String> = elements.iter().map(|s| s.label()).collect();
    let mut rels = Vec::new();
    for (i, a) in elements.iter().enumerate() {
        for (j, b) in elements.iter().enumerate() {
            if a.dim() < b.dim() && b.contains(a) {
                rels.push((i, j));
            }
        }
    }
    Poset::new(labels, &rels).expect("inclusion is a strict order")
}

/// The subspace W = <e_1, f_1, ..., e_{n-1}, f_{n-1}, e_n> over F_q: in the
/// standard coordinates, vectors whose f_n coordinate vanishes.
pub fn w_subspace_fq(n: usize, q: u64) -> FqSubspace {
    let dim = 2 * n;
    let rows: Vec<Vec<u64>> = (0..dim - 1)
        .map(|i| {
            let mut v = vec![0u64; dim];
            v[i] = 1;
            v
        })
        .collect();
    FqSubspace::from_generators(q, &rows)
}

/// Build a building poset; elements are canonical and sorted by
/// (dimension, echelon form), which is a linear extension of inclusion.
pub fn build_building(
    variant: BuildingVariant,
    n: usize,
    q: u64,
    budget: usize,
) -> Result<BuildingPoset> {
    let mut elements: Vec<FqSubspace> = match &variant {
        BuildingVariant::Full => {
            let mut all = Vec::new();
            for d in 1..=n {
                all.extend(enumerate_isotropic_fq(n, q, d, budget)?);
            }
            all
        }
        BuildingVariant::RestrictedToW => {
            let w = w_subspace_fq(n, q);
            let mut all = Vec::new();
            for d in 1..=n {
                all.extend(
                    enumerate_isotropic_fq(n, q, d, budget)?
                        .into_iter()
                        .filter(|v| w.contains(v)),
                );
            }
            all
        }
        BuildingVariant::UpperLink { m } => {
            let ambient = m + n;
            let frozen_rows: Vec<Vec<u64>> = (0..*m)
                .map(|i| {
                    let mut v = vec![0u64; 2 * ambient];
                    v[2 * i] = 1;
                    v
                })
                .collect();
            let frozen = FqSubspace::from_generators(q, &frozen_rows);
            let mut all = Vec::new();
            for d in (m + 1)..=ambient {
                all.extend(
                    enumerate_isotropic_fq(ambient, q, d, budget)?
                        .into_iter()
                        .filter(|v| v.contains(&frozen)),
                );
            }
            all
        }
        BuildingVariant::TypeA { dim } => enumerate_all_subspaces(*dim, q, budget)?,
    };
    elements.sort_by(|a, b| (a.dim(), a.basis()).cmp(&(b.dim(), b.basis())));
    if elements.len() > budget {
        return Err(Error::BudgetExceeded {
            what: format!("building elements ({variant:?})"),
            count: elements.len(),
            budget,
        });
    }
    let poset = poset_of_subspaces(&elements);
    Ok(BuildingPoset {
        variant,
        n,
        q,
        elements,
        poset,
    })
}

/// All nontrivial proper subspaces of F_q^dim, by RREF extension.
fn enumerate_all_subspaces(dim: usize, q: u64, budget: usize) -> Result<Vec<FqSubspace>> {
    let lines = fq_lines(dim, q);
    let mut all: Vec<FqSubspace> = Vec::new();
    let mut layer: BTreeSet<FqSubspace> = lines
        .iter()
        .map(|l| FqSubspace::from_generators(q, &[l.clone()]))
        .collect();
    for _d in 1..dim {
        all.extend(layer.iter().cloned());
        if all.len() > budget {
            return Err(Error::BudgetExceeded {
                what: format!("subspaces of F_{q}^{dim}"),
                count: all.len(),
                budget,
            });
        }
        let mut next: BTreeSet<FqSubspace> = BTreeSet::new();
        for sub in &layer {
            if sub.dim() + 1 >= dim {
                continue;
            }
            for l in &lines {
                if !sub.contains_vector(l) {
                    let mut rows = sub.basis().to_vec();
                    rows.push(l.clone());
                    next.insert(FqSubspace::from_generators(q, &rows));
                }
            }
        }
        layer = next;
    }
    Ok(all)
}

/// Formal integer combination of flags V_0 ⊊ ... ⊊ V_k of canonical
/// rational subspaces; supports chains in the infinite Q-building.
pub type QFlagChain = Chain<Vec<QSubspace>>;

/// Boundary by face deletion with alternating signs; squares to zero.
pub fn q_chain_boundary(c: &QFlagChain) -> QFlagChain {
    let mut out = QFlagChain::zero();
    for (flag, coeff) in c.terms() {
        for i in 0..flag.len() {
            let mut face = flag.clone();
            face.remove(i);
            let sign = if i % 2 == 0 { 1 } else { -1 };
            out.add_term(face, sign * coeff);
        }
    }
    out
}

/// Complex of partial isotropic frames over F_q: vertices are the lines of
/// F_q^{2n}, simplices the independent line sets with isotropic span.
pub fn isotropic_frame_complex(n: usize, q: u64) -> SimplicialComplex {
    let lines = fq_lines(2 * n, q);
    let nv = lines.len();
    let mut family: Vec<Vec<usize>> = Vec::new();
    let mut frontier: Vec<(Vec<usize>, FqSubspace)> = (0..nv)
        .map(|i| (vec![i], FqSubspace::from_generators(q, &[lines[i].clone()])))
        .collect();
    while let Some((simplex, span)) = frontier.pop() {
        family.push(simplex.clone());
        if span.dim() == n {
            continue;
        }
        let last = *simplex.last().unwrap();
        for j in (last + 1)..nv {
            if span.contains_vector(&lines[j]) {
                continue;
            }
            let mut rows = span.basis().to_vec();
            rows.push(lines[j].clone());
            let bigger = FqSubspace::from_generators(q, &rows);
            if bigger.is_isotropic() {
                let mut s = simplex.clone();
                s.push(j);
                frontier.push((s, bigger));
            }
        }
    }
    SimplicialComplex::from_family_checked(nv, family).expect("frame complexes are downward closed")
}

#[derive(Clone, Debug, Serialize)]
pub struct RestrictionReport {
    pub n: usize,
    pub q: u64,
    pub closure_passed: bool,
    pub upper_link_isos_checked: usize,
    pub upper_link_isos_passed: bool,
    pub cone_passed: bool,
    pub contractible: bool,
    pub cm: CmReport,
    pub witness: Option<String>,
}

impl RestrictionReport {
    pub fn passed(&self) -> bool {
        self.closure_passed
            && self.upper_link_isos_passed
            && self.cone_passed
            && self.contractible
            && self.cm.passed
    }
}

/// Exhaustive verification of the three restricted-building facts over F_q:
/// closure of V ↦ <e_n> + V, the mutually inverse upper-link isomorphisms
/// through <e_n, f_n>^⊥, and the cone/contractibility certificate, plus the
/// Cohen-Macaulay certificate at dimension n-1.
pub fn verify_restriction_lemmas(n: usize, q: u64, budget: usize) -> Result<RestrictionReport> {
    let restricted = build_building(BuildingVariant::RestrictedToW, n, q, budget)?;
    let w = w_subspace_fq(n, q);
    let dim = 2 * n;
    let mut en_row = vec![0u64; dim];
    en_row[dim - 2] = 1;
    let en = FqSubspace::from_generators(q, &[en_row]);
    let mut witness: Option<String> = None;

    // (a) closure: <e_n> + V stays in the restricted building
    let mut closure_passed = true;
    for v in &restricted.elements {
        let sum = en.sum(v);
        let ok = sum.is_isotropic() && w.contains(&sum) && restricted.position(&sum).is_some();
        if !ok {
            closure_passed = false;
            witness.get_or_insert_with(|| format!("closure fails at {}", v.label()));
        }
    }

    // (b) upper-link isomorphisms for every Q ⊇ <e_n>
    let enfn_perp = {
        let mut e = vec![0u64; dim];
        e[dim - 2] = 1;
        let mut f = vec![0u64; dim];
        f[dim - 1] = 1;
        FqSubspace::from_generators(q, &[e, f]).perp()
    };
    let smaller: Vec<FqSubspace> = {
        // nontrivial isotropic subspaces of the genus-(n-1) space <e_n,f_n>^⊥
        let mut all = Vec::new();
        for d in 1..n {
            all.extend(
                enumerate_isotropic_fq(n, q, d, budget)?
                    .into_iter()
                    .filter(|v| enfn_perp.contains(v)),
            );
        }
        all
    };
    let mut isos_checked = 0;
    let mut isos_passed = true;
    for qv in &restricted.elements {
        if !qv.contains(&en) {
            continue;
        }
        isos_checked += 1;
        let upper: Vec<&FqSubspace> = restricted
            .elements
            .iter()
            .filter(|v| v.dim() > qv.dim() && v.contains(qv))
            .collect();
        let q_cap = qv.intersect(&enfn_perp);
        let target: Vec<&FqSubspace> = smaller
            .iter()
            .filter(|v| {
                if q_cap.dim() == 0 {
                    true
                } else {
                    v.dim() > q_cap.dim() && v.contains(&q_cap)
                }
            })
            .collect();
        // φ: V ↦ V ∩ P and ψ: V' ↦ <e_n> ⊕ V' must be mutually inverse
        let mut ok = upper.len() == target.len();
        if ok {
            for v in &upper {
                let phi = v.intersect(&enfn_perp);
                let back = en.sum(&phi);
                if phi.dim() + 1 != v.dim() || !target.iter().any(|t| **t == phi) || back != **v {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            for t in &target {
                let psi = en.sum(t);
                let back = psi.intersect(&enfn_perp);
                if !upper.iter().any(|u| **u == psi) || back != **t {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            isos_passed = false;
            witness.get_or_insert_with(|| format!("upper-link iso fails above {}", qv.label()));
        }
    }

    // (c) cone structure of f(V) = <e_n> + V and homological contractibility
    let mut cone_passed = true;
    for (i, v) in restricted.elements.iter().enumerate() {
        let fv = en.sum(v);
        let j = restricted.position(&fv);
        match j {
            Some(j) => {
                // monotone with V ≤ f(V), idempotent, image coned at <e_n>
                if !(i == j || restricted.poset.lt(i, j)) || !fv.contains(&en) {
                    cone_passed = false;
                }
                if en.sum(&fv) != fv {
                    cone_passed = false;
                }
            }
            None => cone_passed = false,
        }
        if !cone_passed {
            witness.get_or_insert_with(|| format!("cone check fails at {}", v.label()));
            break;
        }
    }
    let oc = restricted.order_complex();
    let contractible = reduced_homology(&oc).is_trivial();
    let cm = cm_certificate(&restricted.poset, n as i64 - 1);

    Ok(RestrictionReport {
        n,
        q,
        closure_passed,
        upper_link_isos_checked: isos_checked,
        upper_link_isos_passed: isos_passed,
        cone_passed,
        contractible,
        cm,
        witness,
    })
}
