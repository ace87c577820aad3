//! Text/JSON serialization of complexes and posets with content hashes,
//! shared by the CLI cache.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::complex::SimplicialComplex;
use super::poset::Poset;
use crate::error::{Error, Result};

pub const COMPLEX_SCHEMA: &str = "stb.complex.v1";
pub const POSET_SCHEMA: &str = "stb.poset.v1";

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexDto {
    pub schema: String,
    /// Build parameters of the instance, embedded in the cache key.
    pub header: serde_json::Value,
    pub vertices: Vec<String>,
    pub maximal_simplices: Vec<Vec<usize>>,
}

impl ComplexDto {
    pub fn new(
        complex: &SimplicialComplex,
        labels: &[String],
        header: serde_json::Value,
    ) -> ComplexDto {
        ComplexDto {
            schema: COMPLEX_SCHEMA.to_string(),
            header,
            vertices: labels.to_vec(),
            maximal_simplices: complex.facets(),
        }
    }

    pub fn content_hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("dto serializes");
        let mut hasher = Sha256::new();
        hasher.update(canonical.as_bytes());
        hex(&hasher.finalize())
    }

    pub fn to_complex(&self) -> Result<SimplicialComplex> {
        for s in &self.maximal_simplices {
            if s.iter().any(|&v| v >= self.vertices.len()) {
                return Err(Error::Invalid("simplex vertex out of range".into()));
            }
        }
        Ok(SimplicialComplex::from_maximal(
            self.vertices.len(),
            &self.maximal_simplices,
        ))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PosetDto {
    pub schema: String,
    pub header: serde_json::Value,
    pub elements: Vec<String>,
    pub covers: Vec<(usize, usize)>,
}

impl PosetDto {
    pub fn new(poset: &Poset, header: serde_json::Value) -> PosetDto {
        PosetDto {
            schema: POSET_SCHEMA.to_string(),
            header,
            elements: poset.labels().to_vec(),
            covers: poset.covers(),
        }
    }

    pub fn content_hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("dto serializes");
        let mut hasher = Sha256::new();
        hasher.update(canonical.as_bytes());
        hex(&hasher.finalize())
    }

    pub fn to_poset(&self) -> Result<Poset> {
        Poset::new(self.elements.clone(), &self.covers)
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Cache key of a build request: hash of the canonical header string alone.
pub fn header_cache_key(header: &serde_json::Value) -> String {
    let mut hasher = Sha256::new();
    hasher.update(
        serde_json::to_string(header)
            .expect("header serializes")
            .as_bytes(),
    );
    hex(&hasher.finalize())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_round_trip_and_stable_hash() {
        let k = SimplicialComplex::from_maximal(3, &[vec![0, 1], vec![1, 2]]);
        let labels: Vec<String> = vec!["a".into(), "b".into(), "c".into()];
        let dto = ComplexDto::new(&k, &labels, serde_json::json!({"kind": "test"}));
        let h1 = dto.content_hash();
        let text = serde_json::to_string(&dto).unwrap();
        let back: ComplexDto = serde_json::from_str(&text).unwrap();
        assert_eq!(back.content_hash(), h1);
        assert_eq!(back.to_complex().unwrap(), k);
    }

    #[test]
    fn poset_round_trip() {
        let p = Poset::new(vec!["x".into(), "y".into(), "z".into()], &[(0, 1), (1, 2)]).unwrap();
        let dto = PosetDto::new(&p, serde_json::json!({}));
        let back = dto.to_poset().unwrap();
        assert!(back.lt(0, 2));
        assert_eq!(back.labels(), p.labels());
    }
}
