//! Generating series counting big and nef classes by square.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cone::{is_nef, ChamberDescription, CurveSystem};
use crate::enumeration::ShimadaProjection;
use crate::error::{Error, Result};
use crate::lattice::{is_primitive, DivisorClass};
use crate::linalg;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesKind {
    /// Primitive big and nef classes.
    Theta,
    /// All big and nef classes.
    Xi,
}

impl fmt::Display for SeriesKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeriesKind::Theta => "theta",
            SeriesKind::Xi => "xi",
        })
    }
}

impl std::str::FromStr for SeriesKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theta" => Ok(SeriesKind::Theta),
            "xi" => Ok(SeriesKind::Xi),
            _ => Err(Error::UnknownName(s.to_string())),
        }
    }
}

/// Coefficients for every even square `2 <= d <= max_square`, zeros included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesTable {
    pub kind: SeriesKind,
    pub max_square: i64,
    pub coefficients: BTreeMap<i64, u64>,
}

impl SeriesTable {
    pub fn get(&self, d: i64) -> u64 {
        self.coefficients.get(&d).copied().unwrap_or(0)
    }

    fn monomial(c: u64, d: i64) -> String {
        if c == 1 {
            format!("T^{d}")
        } else {
            format!("{c}T^{d}")
        }
    }

    /// `c1 T^d1 + c2 T^d2 + ...` over the nonzero coefficients.
    pub fn polynomial(&self) -> String {
        let terms: Vec<String> = self
            .coefficients
            .iter()
            .filter(|(_, &c)| c != 0)
            .map(|(&d, &c)| Self::monomial(c, d))
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    /// `T^d0 + 2(...)` when every coefficient after the leading one is even
    /// and the leading one is 1.
    pub fn factored(&self) -> Option<String> {
        let mut nonzero = self.coefficients.iter().filter(|(_, &c)| c != 0);
        let (&d0, &c0) = nonzero.next()?;
        let rest: Vec<(i64, u64)> = nonzero.map(|(&d, &c)| (d, c)).collect();
        if c0 != 1 || rest.is_empty() || rest.iter().any(|(_, c)| c % 2 != 0) {
            return None;
        }
        let inner: Vec<String> = rest.iter().map(|&(d, c)| Self::monomial(c / 2, d)).collect();
        Some(format!("T^{d0} + 2({} + ...)", inner.join(" + ")))
    }
}

/// Largest `k` with `k^2 <= ell * H^2 * d`.
pub fn degree_bound(seed_square: i64, ell: &BigRational, d: i64) -> i64 {
    let x = ell * BigRational::from_integer(BigInt::from(seed_square) * BigInt::from(d));
    linalg::floor_sqrt_rational(&x).to_i64().unwrap_or(i64::MAX)
}

fn classes_of_square(
    cs: &CurveSystem,
    projection: &ShimadaProjection,
    ell: &BigRational,
    d: i64,
) -> Result<Vec<DivisorClass>> {
    let bound = degree_bound(cs.seed_square(), ell, d);
    let mut out = Vec::new();
    for k in 1..=bound {
        for c in projection.cell(d, k)?.classes {
            if is_nef(cs, &c)? {
                out.push(c);
            }
        }
    }
    Ok(out)
}

/// Every nef class `D` with `D^2 = d > 0`, ordered by degree then
/// coordinates. Degrees are searched up to [`degree_bound`].
pub fn big_nef_classes_of_square(
    cs: &CurveSystem,
    ch: &ChamberDescription,
    d: i64,
) -> Result<Vec<DivisorClass>> {
    if d <= 0 {
        return Ok(Vec::new());
    }
    let projection = ShimadaProjection::new(cs.lattice(), cs.ample_seed())?;
    classes_of_square(cs, &projection, &ch.ell, d)
}

fn series(cs: &CurveSystem, ch: &ChamberDescription, max_square: i64, kind: SeriesKind) -> Result<SeriesTable> {
    let projection = ShimadaProjection::new(cs.lattice(), cs.ample_seed())?;
    let squares: Vec<i64> = (1..=max_square / 2).map(|h| 2 * h).collect();
    let counts: Vec<(i64, u64)> = squares
        .par_iter()
        .map(|&d| {
            let classes = classes_of_square(cs, &projection, &ch.ell, d)?;
            let n = match kind {
                SeriesKind::Xi => classes.len(),
                SeriesKind::Theta => {
                    let mut n = 0;
                    for c in &classes {
                        if is_primitive(c)? {
                            n += 1;
                        }
                    }
                    n
                }
            };
            Ok((d, n as u64))
        })
        .collect::<Result<_>>()?;
    Ok(SeriesTable {
        kind,
        max_square,
        coefficients: counts.into_iter().collect(),
    })
}

/// Counts of primitive big and nef classes of each even square up to
/// `max_square`.
pub fn theta_series(cs: &CurveSystem, ch: &ChamberDescription, max_square: i64) -> Result<SeriesTable> {
    series(cs, ch, max_square, SeriesKind::Theta)
}

/// Counts of all big and nef classes of each even square up to `max_square`.
pub fn xi_series(cs: &CurveSystem, ch: &ChamberDescription, max_square: i64) -> Result<SeriesTable> {
    series(cs, ch, max_square, SeriesKind::Xi)
}

/// `xi(d) = sum over m^2 | d of theta(d / m^2)`, computed from a theta table.
pub fn xi_from_theta(theta: &SeriesTable) -> SeriesTable {
    let coefficients = theta
        .coefficients
        .keys()
        .map(|&d| {
            let mut sum = 0;
            let mut m = 1;
            while m * m <= d {
                if d % (m * m) == 0 {
                    sum += theta.get(d / (m * m));
                }
                m += 1;
            }
            (d, sum)
        })
        .collect();
    SeriesTable {
        kind: SeriesKind::Xi,
        max_square: theta.max_square,
        coefficients,
    }
}

/// The smallest positive square carrying a big and nef class, with those
/// classes, searched up to `max_square`.
pub fn minimal_polarization(
    cs: &CurveSystem,
    ch: &ChamberDescription,
    max_square: i64,
) -> Result<Option<(i64, Vec<DivisorClass>)>> {
    let projection = ShimadaProjection::new(cs.lattice(), cs.ample_seed())?;
    let mut d = 2;
    while d <= max_square {
        let classes = classes_of_square(cs, &projection, &ch.ell, d)?;
        if !classes.is_empty() {
            return Ok(Some((d, classes)));
        }
        d += 2;
    }
    Ok(None)
}
