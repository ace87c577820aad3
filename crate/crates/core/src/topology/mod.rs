//! Finite posets and ordered simplicial complexes with exact integral
//! homology, plus the reusable topological certificates: Cohen-Macaulay
//! certification, poset fibration hypotheses (Quillen / van der
//! Kallen-Looijenga), and a bounded fundamental-group triviality attempt.

pub mod chain;
pub mod cm;
pub mod complex;
pub mod homology;
pub mod pi1;
pub mod poset;
pub mod serialize;

pub use chain::{Chain, FlagChain, SimplexChain};
pub use cm::{cm_certificate, quillen_check, vdkl_check, CmReport};
pub use complex::{
    barycentric_chain, barycentric_subdivide, join_suspend, suspension_chain, SimplicialComplex,
};
pub use homology::{
    homology_presentation, reduced_homology, relative_homology, HomologyReport, Presentation,
};
pub use poset::{order_complex, Poset, PosetMap};
