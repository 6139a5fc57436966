//! The lattice file format `{"rank", "gram", "labels", "ample"}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, GramLattice};
use crate::presets::Preset;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeFile {
    pub rank: usize,
    pub gram: Vec<Vec<i64>>,
    #[serde(default)]
    pub labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ample: Option<Vec<i64>>,
}

impl LatticeFile {
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim().is_empty() {
            return Err(Error::Parse("empty lattice file".into()));
        }
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Validated lattice and seed. The seed, when given, must have positive
    /// square; ampleness is checked once the curves are known.
    pub fn into_lattice(self) -> Result<(GramLattice, Option<DivisorClass>)> {
        if self.gram.len() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                found: self.gram.len(),
            });
        }
        if let Some(row) = self.gram.iter().find(|r| r.len() != self.rank) {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                found: row.len(),
            });
        }
        let lattice = GramLattice::new(self.gram, self.labels)?;
        let seed = match self.ample {
            None => None,
            Some(a) => {
                let d = DivisorClass::new(a);
                let sq = lattice.square(&d)?;
                if sq <= 0 {
                    return Err(Error::NonPositiveSquare { class: d.into_coords(), square: sq });
                }
                Some(d)
            }
        };
        Ok((lattice, seed))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("lattice files serialize")
    }
}

impl From<&Preset> for LatticeFile {
    fn from(p: &Preset) -> Self {
        LatticeFile {
            rank: p.lattice.rank(),
            gram: p.lattice.gram().clone(),
            labels: p.lattice.labels().to_vec(),
            ample: p.seed.as_ref().map(|s| s.coords().to_vec()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    #[test]
    fn presets_round_trip() {
        for p in presets::catalog() {
            let f = LatticeFile::from(&p);
            let back = LatticeFile::parse(&f.to_json()).unwrap();
            assert_eq!(back, f);
            let (lat, seed) = back.into_lattice().unwrap();
            assert_eq!(&lat, &p.lattice);
            assert_eq!(seed, p.seed);
        }
    }

    #[test]
    fn rejects_bad_files() {
        assert!(matches!(LatticeFile::parse(""), Err(Error::Parse(_))));
        assert!(matches!(LatticeFile::parse("{\"rank\": 2"), Err(Error::Parse(_))));
        let odd = LatticeFile::parse(r#"{"rank": 2, "gram": [[1, 0], [0, -2]]}"#).unwrap();
        assert!(matches!(odd.into_lattice(), Err(Error::InvalidLattice(_))));
        let definite = LatticeFile::parse(r#"{"rank": 2, "gram": [[-2, 0], [0, -2]]}"#).unwrap();
        assert!(matches!(definite.into_lattice(), Err(Error::InvalidLattice(_))));
        let short = LatticeFile::parse(r#"{"rank": 3, "gram": [[2, 0], [0, -2]]}"#).unwrap();
        assert!(short.into_lattice().is_err());
        let bad_seed = LatticeFile::parse(r#"{"rank": 2, "gram": [[2, 0], [0, -2]], "ample": [0, 1]}"#).unwrap();
        assert!(matches!(bad_seed.into_lattice(), Err(Error::NonPositiveSquare { .. })));
    }
}
