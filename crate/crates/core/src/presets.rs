//! Catalog of the named lattices: the eight compact types with their ample
//! seeds and printed data, plus auxiliary reference lattices.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, GramLattice};
use crate::series::SeriesKind;

#[derive(Debug, Clone)]
pub struct Preset {
    pub name: &'static str,
    pub lattice: GramLattice,
    /// Ample seed in the preset basis; absent for auxiliary lattices.
    pub seed: Option<DivisorClass>,
    pub expected_curves: Option<usize>,
    pub expected_ell: Option<BigRational>,
    /// Twice the largest printed curve degree.
    pub default_kmax: i64,
}

/// Names with an ample seed, in catalog order.
pub const MAIN: [&str; 8] = ["S1", "S2", "S3", "S4", "S5", "S6", "L24", "L27"];
/// Reference lattices without seeds.
pub const AUXILIARY: [&str; 3] = ["L25", "S113", "S114"];

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

struct Entry {
    gram: Vec<Vec<i64>>,
    labels: &'static [&'static str],
    seed: Option<Vec<i64>>,
    curves: Option<usize>,
    ell: Option<(i64, i64)>,
    kmax: i64,
}

fn entry(name: &str) -> Option<Entry> {
    let s = match name {
        "S1" => Entry {
            gram: vec![vec![6, 0, 0], vec![0, -2, 0], vec![0, 0, -2]],
            labels: &["L", "A1", "A2"],
            seed: Some(vec![1, -1, -1]),
            curves: Some(6),
            ell: Some((3, 1)),
            kmax: 4,
        },
        "S2" => Entry {
            gram: vec![vec![36, 0, 0], vec![0, -2, 1], vec![0, 1, -2]],
            labels: &["L", "A1", "A2"],
            seed: Some(vec![1, -4, -4]),
            curves: Some(6),
            ell: Some((9, 1)),
            kmax: 8,
        },
        "S3" => Entry {
            gram: vec![vec![12, 0, 0], vec![0, -2, 1], vec![0, 1, -2]],
            labels: &["L", "A1", "A2"],
            seed: Some(vec![1, -2, -2]),
            curves: Some(4),
            ell: Some((3, 1)),
            kmax: 4,
        },
        "S4" => Entry {
            gram: vec![vec![-2, 1, 3], vec![1, -2, 1], vec![3, 1, -2]],
            labels: &["A1", "A2", "A3"],
            seed: Some(vec![1, 0, 1]),
            curves: Some(4),
            ell: Some((10, 3)),
            kmax: 4,
        },
        "S5" => Entry {
            gram: vec![vec![4, 0, 0], vec![0, -2, 1], vec![0, 1, -2]],
            labels: &["L", "A1", "A2"],
            seed: Some(vec![1, -1, -1]),
            curves: Some(4),
            ell: Some((2, 1)),
            kmax: 2,
        },
        "S6" => Entry {
            gram: vec![vec![-2, 1, 5], vec![1, -2, 0], vec![5, 0, -2]],
            labels: &["A1", "A3", "A5"],
            seed: Some(vec![1, -1, 1]),
            curves: Some(6),
            ell: Some((22, 3)),
            kmax: 6,
        },
        "L24" => Entry {
            gram: vec![
                vec![2, 1, 1, 1],
                vec![1, -2, 0, 0],
                vec![1, 0, -2, 0],
                vec![1, 0, 0, -2],
            ],
            labels: &["L", "A1", "A2", "A3"],
            seed: Some(vec![1, 0, 0, 0]),
            curves: Some(6),
            ell: Some((7, 2)),
            kmax: 2,
        },
        "L27" => Entry {
            gram: vec![
                vec![-2, 1, 1, 1],
                vec![1, -2, 0, 0],
                vec![1, 0, -2, 4],
                vec![1, 0, 4, -2],
            ],
            labels: &["A2", "A4", "A5", "A7"],
            seed: Some(vec![0, -1, 1, 1]),
            curves: Some(8),
            ell: Some((15, 2)),
            kmax: 4,
        },
        "L25" => Entry {
            gram: vec![
                vec![-2, 3, 0, 0],
                vec![3, -2, 1, 1],
                vec![0, 1, -2, 1],
                vec![0, 1, 1, -2],
            ],
            labels: &["B1", "B2", "B3", "B5"],
            seed: None,
            curves: None,
            ell: None,
            kmax: 0,
        },
        "S113" => Entry {
            gram: vec![vec![-2, 3, 0], vec![3, -2, 2], vec![0, 2, -2]],
            labels: &["B1", "B2", "B3"],
            seed: None,
            curves: None,
            ell: None,
            kmax: 0,
        },
        "S114" => Entry {
            gram: vec![vec![-2, 4, 0], vec![4, -2, 2], vec![0, 2, -2]],
            labels: &["C1", "C2", "C3"],
            seed: None,
            curves: None,
            ell: None,
            kmax: 0,
        },
        _ => return None,
    };
    Some(s)
}

/// Looks up a catalog entry by name.
pub fn preset(name: &str) -> Result<Preset> {
    let canonical = MAIN
        .iter()
        .chain(AUXILIARY.iter())
        .find(|n| n.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::UnknownName(name.to_string()))?;
    let s = entry(canonical).expect("catalog names have entries");
    Ok(Preset {
        name: canonical,
        lattice: GramLattice::new(s.gram, labels(s.labels))?,
        seed: s.seed.map(DivisorClass::new),
        expected_curves: s.curves,
        expected_ell: s.ell.map(|(p, q)| ratio(p, q)),
        default_kmax: s.kmax,
    })
}

/// Every catalog entry, main types first.
pub fn catalog() -> Vec<Preset> {
    MAIN.iter()
        .chain(AUXILIARY.iter())
        .map(|n| preset(n).expect("catalog entries are valid"))
        .collect()
}

/// A series as printed in the literature, exponent to coefficient. Exponents
/// are kept as printed, odd ones included.
#[derive(Debug, Clone, Deserialize)]
pub struct GoldenSeries {
    pub preset: String,
    pub kind: SeriesKind,
    /// Last exponent covered by the printed terms.
    pub through: i64,
    coefficients: BTreeMap<String, u64>,
}

impl GoldenSeries {
    /// Printed coefficient, 0 when the term is absent.
    pub fn get(&self, exponent: i64) -> u64 {
        self.coefficients.get(&exponent.to_string()).copied().unwrap_or(0)
    }

    /// Printed exponents, ascending.
    pub fn exponents(&self) -> Vec<i64> {
        let mut e: Vec<i64> = self
            .coefficients
            .keys()
            .map(|k| k.parse().expect("golden exponents are integers"))
            .collect();
        e.sort();
        e
    }
}

const GOLDEN: [(&str, &str); 9] = [
    ("S1_theta", include_str!("../data/golden/S1_theta.json")),
    ("S2_theta", include_str!("../data/golden/S2_theta.json")),
    ("S2_xi", include_str!("../data/golden/S2_xi.json")),
    ("S3_theta", include_str!("../data/golden/S3_theta.json")),
    ("S4_theta", include_str!("../data/golden/S4_theta.json")),
    ("S5_theta", include_str!("../data/golden/S5_theta.json")),
    ("S6_theta", include_str!("../data/golden/S6_theta.json")),
    ("L24_theta", include_str!("../data/golden/L24_theta.json")),
    ("L27_theta", include_str!("../data/golden/L27_theta.json")),
];

/// The printed series for a preset, if one is shipped.
pub fn golden_series(name: &str, kind: SeriesKind) -> Option<GoldenSeries> {
    let key = format!("{name}_{kind}");
    GOLDEN
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, text)| serde_json::from_str(text).expect("shipped golden files parse"))
}

/// One known discrepancy between printed and computed data.
#[derive(Debug, Clone, Deserialize)]
pub struct Erratum {
    pub preset: String,
    pub kind: String,
    #[serde(default)]
    pub exponent: Option<i64>,
    #[serde(default)]
    pub paper_value: Option<u64>,
    #[serde(default)]
    pub computed_value: Option<u64>,
    pub note: String,
}

const ERRATA: &str = include_str!("../data/errata.json");

pub fn errata() -> Vec<Erratum> {
    serde_json::from_str(ERRATA).expect("shipped errata file parses")
}

/// The series erratum for `(preset, kind, exponent)`, if recorded.
pub fn series_erratum(name: &str, kind: SeriesKind, exponent: i64) -> Option<Erratum> {
    let kind = kind.to_string();
    errata()
        .into_iter()
        .find(|e| e.preset == name && e.kind == kind && e.exponent == Some(exponent))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    #[test]
    fn catalog_is_valid() {
        let all = catalog();
        assert_eq!(all.len(), 11);
        let dets: Vec<u64> = all.iter().map(|p| p.lattice.abs_determinant()).collect();
        assert_eq!(dets, vec![24, 108, 36, 20, 12, 44, 28, 60, 27, 18, 32]);
        for p in &all {
            if let Some(seed) = &p.seed {
                assert!(p.lattice.square(seed).unwrap() > 0, "{}", p.name);
            }
        }
    }

    #[test]
    fn seeds_have_printed_squares() {
        for (name, sq) in [("S1", 2), ("S2", 4), ("S3", 4), ("S4", 2), ("S5", 2), ("S6", 2), ("L24", 2), ("L27", 2)] {
            let p = preset(name).unwrap();
            assert_eq!(p.lattice.square(p.seed.as_ref().unwrap()).unwrap(), sq);
        }
    }

    #[test]
    fn golden_files_load() {
        for name in MAIN {
            let g = golden_series(name, SeriesKind::Theta).unwrap();
            assert_eq!(g.preset, name);
            assert_eq!(g.get(g.exponents()[0]), 1);
        }
        assert_eq!(golden_series("S2", SeriesKind::Xi).unwrap().get(36), 7);
        assert!(golden_series("L25", SeriesKind::Theta).is_none());
        assert!(!errata().is_empty());
    }

    #[test]
    fn lookup_is_case_insensitive() {
        assert_eq!(preset("l27").unwrap().name, "L27");
        assert!(matches!(preset("S7"), Err(Error::UnknownName(_))));
        assert!(preset("S2").unwrap().lattice.determinant().is_positive());
    }
}
