//! Cohen-Macaulay certification and the two poset-fibration checkers.
//!
//! "d-spherical" is certified homologically: reduced homology concentrated
//! in degree d and free there, with the complex of dimension at most d. The
//! (-1)-spherical complex is the empty one. Where a source statement needs
//! honest k-connectivity with k ≥ 1, a bounded π₁ attempt is run and its
//! outcome recorded; certificates are labeled accordingly.

use serde::Serialize;

use super::complex::SimplicialComplex;
use super::homology::{reduced_homology, HomologyReport};
use super::pi1::{pi1_triviality, Pi1Outcome};
use super::poset::{order_complex, Poset, PosetMap};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub enum CmFailure {
    NonPure {
        facet: String,
    },
    WholeComplex {
        detail: String,
    },
    LowerLink {
        element: String,
        detail: String,
    },
    UpperLink {
        element: String,
        detail: String,
    },
    Interval {
        lower: String,
        upper: String,
        detail: String,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct CmReport {
    pub dimension: i64,
    pub passed: bool,
    pub failure: Option<CmFailure>,
    pub whole_homology: String,
    pub pi1: Pi1Outcome,
    pub certification: &'static str,
}

fn spherical(complex: &SimplicialComplex, d: i64) -> std::result::Result<HomologyReport, String> {
    if complex.dim() > d {
        return Err(format!(
            "dimension {} exceeds required sphericity degree {}",
            complex.dim(),
            d
        ));
    }
    let h = reduced_homology(complex);
    if !h.concentrated_free(d) {
        return Err(format!(
            "homology not concentrated free in degree {d}: {}",
            h.describe()
        ));
    }
    Ok(h)
}

/// Certify that a poset is Cohen-Macaulay of dimension `d`: order complex
/// d-spherical and, for every element and comparable pair, the lower link,
/// upper link and open interval spherical of the complementary dimensions,
/// with heights as the dimension bookkeeping. Purity is checked first so a
/// failure names a concrete facet.
pub fn cm_certificate(p: &Poset, d: i64) -> CmReport {
    let oc = order_complex(p);
    let fail = |failure: CmFailure, whole: &HomologyReport, pi1: Pi1Outcome| CmReport {
        dimension: d,
        passed: false,
        failure: Some(failure),
        whole_homology: whole.describe(),
        pi1,
        certification: "homological",
    };
    let whole = reduced_homology(&oc);

    if let Err(facet) = oc.is_pure(d) {
        let name: Vec<&str> = facet.iter().map(|&i| p.label(i)).collect();
        return fail(
            CmFailure::NonPure {
                facet: format!("{{{}}}", name.join(", ")),
            },
            &whole,
            Pi1Outcome::NotAttempted,
        );
    }
    let pi1 = if d >= 2 && whole.connected_through(0) {
        pi1_triviality(&oc)
    } else {
        Pi1Outcome::NotAttempted
    };
    if oc.dim() > d || !whole.concentrated_free(d) {
        return fail(
            CmFailure::WholeComplex {
                detail: whole.describe(),
            },
            &whole,
            pi1,
        );
    }
    let heights = p.heights();
    for x in 0..p.len() {
        let hx = heights[x];
        if let Err(detail) = spherical(&order_complex(&p.lower_link(x)), hx - 1) {
            return fail(
                CmFailure::LowerLink {
                    element: p.label(x).to_string(),
                    detail,
                },
                &whole,
                pi1,
            );
        }
        if let Err(detail) = spherical(&order_complex(&p.upper_link(x)), d - hx - 1) {
            return fail(
                CmFailure::UpperLink {
                    element: p.label(x).to_string(),
                    detail,
                },
                &whole,
                pi1,
            );
        }
        for z in 0..p.len() {
            if p.lt(x, z) {
                if let Err(detail) =
                    spherical(&order_complex(&p.interval(x, z)), heights[z] - hx - 2)
                {
                    return fail(
                        CmFailure::Interval {
                            lower: p.label(x).to_string(),
                            upper: p.label(z).to_string(),
                            detail,
                        },
                        &whole,
                        pi1,
                    );
                }
            }
        }
    }
    CmReport {
        dimension: d,
        passed: true,
        failure: None,
        whole_homology: whole.describe(),
        pi1,
        certification: "homological",
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FiberFailure {
    pub at: String,
    pub what: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FibrationReport {
    pub mode: String,
    pub passed: bool,
    pub failures: Vec<FiberFailure>,
    /// π₁ attempts that stayed inconclusive where ≥1-connectivity was
    /// required; the certification is homological, so these are recorded
    /// rather than failed.
    pub pi1_inconclusive: Vec<String>,
    pub certification: &'static str,
}

/// Hypotheses of the fiber theorem for strictly increasing maps: target
/// Cohen-Macaulay of dimension d, every fiber f_{≤y} Cohen-Macaulay of
/// dimension h(y).
pub fn quillen_check(f: &PosetMap, d: i64) -> Result<FibrationReport> {
    if !f.strict {
        return Err(Error::NotMonotone("strictly increasing"));
    }
    let mut failures = Vec::new();
    let target_cm = cm_certificate(&f.target, d);
    if !target_cm.passed {
        failures.push(FiberFailure {
            at: "target".into(),
            what: "target not Cohen-Macaulay".into(),
            detail: format!("{:?}", target_cm.failure),
        });
    }
    let heights = f.target.heights();
    for y in 0..f.target.len() {
        let fiber = f.fiber_below(y);
        let report = cm_certificate(&fiber, heights[y]);
        if !report.passed {
            failures.push(FiberFailure {
                at: f.target.label(y).to_string(),
                what: format!("fiber not Cohen-Macaulay of dimension {}", heights[y]),
                detail: format!("{:?}", report.failure),
            });
        }
    }
    Ok(FibrationReport {
        mode: format!("quillen(d={d})"),
        passed: failures.is_empty(),
        failures,
        pi1_inconclusive: Vec::new(),
        certification: "homological",
    })
}

/// Hypotheses of the van der Kallen-Looijenga criterion: t increasing and
/// bounded, every fiber f_{≤y} homologically (t(y)-2)-connected, every upper
/// link Y_{>y} homologically (θ-t(y)-1)-connected. π₁ is attempted whenever
/// the required connectivity is ≥ 1.
pub fn vdkl_check(f: &PosetMap, theta: i64, t: &[i64]) -> Result<FibrationReport> {
    assert_eq!(t.len(), f.target.len());
    for y in 0..f.target.len() {
        for z in 0..f.target.len() {
            if f.target.lt(y, z) && t[y] >= t[z] {
                return Err(Error::NotMonotone("increasing (t)"));
            }
        }
    }
    let mut failures = Vec::new();
    let mut pi1_inconclusive = Vec::new();
    let mut check = |complex: &SimplicialComplex, k: i64, at: String, what: String| {
        let h = reduced_homology(complex);
        if !h.connected_through(k) {
            failures.push(FiberFailure {
                at: at.clone(),
                what,
                detail: h.describe(),
            });
            return;
        }
        if k >= 1 {
            // homology is certified; π₁ recorded as additional evidence
            let pi1 = pi1_triviality(complex);
            if pi1 == Pi1Outcome::Inconclusive {
                pi1_inconclusive.push(format!("{at}: required {k}-connected"));
            }
        }
    };
    for y in 0..f.target.len() {
        let fiber = order_complex(&f.fiber_below(y));
        check(
            &fiber,
            t[y] - 2,
            f.target.label(y).to_string(),
            format!("fiber not ({})-connected", t[y] - 2),
        );
        let upper = order_complex(&f.target.upper_link(y));
        check(
            &upper,
            theta - t[y] - 1,
            f.target.label(y).to_string(),
            format!("upper link not ({})-connected", theta - t[y] - 1),
        );
    }
    Ok(FibrationReport {
        mode: format!("vdkl(theta={theta})"),
        passed: failures.is_empty(),
        failures,
        pi1_inconclusive,
        certification: "homological",
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Face poset of the boundary of a triangle (all proper faces).
    fn triangle_boundary_poset() -> Poset {
        let labels: Vec<String> = vec!["0", "1", "2", "01", "02", "12"]
            .into_iter()
            .map(String::from)
            .collect();
        let rels = vec![(0, 3), (0, 4), (1, 3), (1, 5), (2, 4), (2, 5)];
        Poset::new(labels, &rels).unwrap()
    }

    #[test]
    fn triangle_boundary_is_cm_dim_1() {
        let report = cm_certificate(&triangle_boundary_poset(), 1);
        assert!(report.passed, "{:?}", report.failure);
    }

    #[test]
    fn non_pure_poset_rejected_with_witness() {
        // disjoint union of an edge-poset (chain of length 1) and a point
        let p = Poset::new(vec!["a".into(), "b".into(), "c".into()], &[(0, 1)]).unwrap();
        let report = cm_certificate(&p, 1);
        assert!(!report.passed);
        assert!(matches!(report.failure, Some(CmFailure::NonPure { .. })));
    }

    #[test]
    fn identity_map_on_cm_poset_passes_quillen() {
        let p = triangle_boundary_poset();
        let id = PosetMap::new(p.clone(), p.clone(), (0..p.len()).collect(), true).unwrap();
        let report = quillen_check(&id, 1).unwrap();
        assert!(report.passed, "{:?}", report.failures);
    }

    #[test]
    fn constant_map_vdkl_trivial_case() {
        // constant map from a nonempty CM poset to a point, θ = 0, t ≡ 1:
        // the fiber condition is (-1)-connectedness = nonemptiness
        let p = triangle_boundary_poset();
        let point = Poset::new(vec!["*".into()], &[]).unwrap();
        let f = PosetMap::new(p, point, vec![0; 6], false).unwrap();
        let report = vdkl_check(&f, 0, &[1]).unwrap();
        assert!(report.passed, "{:?}", report.failures);
    }

    #[test]
    fn vdkl_failure_has_witness() {
        // two incomparable points over one point with t ≡ 2 forces the fiber
        // to be 0-connected, which fails
        let p = Poset::new(vec!["x".into(), "y".into()], &[]).unwrap();
        let point = Poset::new(vec!["*".into()], &[]).unwrap();
        let f = PosetMap::new(p, point, vec![0, 0], false).unwrap();
        let report = vdkl_check(&f, 1, &[2]).unwrap();
        assert!(!report.passed);
        assert_eq!(report.failures[0].at, "*");
    }

    #[test]
    fn quillen_failure_on_bad_fiber() {
        // source (a < b) ⊔ {c}, target a 2-chain; fiber over the top is the
        // whole non-pure source
        let src = Poset::new(vec!["a".into(), "b".into(), "c".into()], &[(0, 1)]).unwrap();
        let tgt = Poset::new(vec!["y0".into(), "y1".into()], &[(0, 1)]).unwrap();
        let f = PosetMap::new(src, tgt, vec![0, 1, 1], true).unwrap();
        let report = quillen_check(&f, 1).unwrap();
        assert!(!report.passed);
        assert!(report.failures.iter().any(|fl| fl.at == "y1"));
    }

    #[test]
    fn non_strict_map_rejected_by_quillen() {
        let p = Poset::new(vec!["a".into(), "b".into()], &[(0, 1)]).unwrap();
        let f = PosetMap::new(p.clone(), p, vec![0, 1], false).unwrap();
        assert!(quillen_check(&f, 1).is_err());
    }
}
