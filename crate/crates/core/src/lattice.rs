//! Even integer lattices of signature `(1, rho - 1)` and divisor classes on them.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix};

/// An integer coordinate vector in the basis of a [`GramLattice`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DivisorClass(Vec<i64>);

impl DivisorClass {
    pub fn new(coords: Vec<i64>) -> Self {
        DivisorClass(coords)
    }

    pub fn zero(rank: usize) -> Self {
        DivisorClass(vec![0; rank])
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        DivisorClass(v)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<i64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &DivisorClass) -> DivisorClass {
        DivisorClass(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &DivisorClass) -> DivisorClass {
        DivisorClass(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> DivisorClass {
        DivisorClass(self.0.iter().map(|a| a * k).collect())
    }

    pub fn neg(&self) -> DivisorClass {
        self.scale(-1)
    }

    /// Gcd of the coordinates (0 for the zero vector).
    pub fn content(&self) -> i64 {
        linalg::gcd_slice(&self.0)
    }

    /// Sign-normalized copy: first nonzero coordinate positive.
    pub fn sign_normalized(&self) -> DivisorClass {
        match self.0.iter().find(|&&x| x != 0) {
            Some(&x) if x < 0 => self.neg(),
            _ => self.clone(),
        }
    }

    /// `Some(m)` if `self = m * other`, for a nonzero `other`.
    pub fn multiple_of(&self, other: &DivisorClass) -> Option<i64> {
        let (i, &o) = other.0.iter().enumerate().find(|(_, &x)| x != 0)?;
        if self.0[i] % o != 0 {
            return None;
        }
        let m = self.0[i] / o;
        (other.scale(m) == *self).then_some(m)
    }
}

impl From<Vec<i64>> for DivisorClass {
    fn from(v: Vec<i64>) -> Self {
        DivisorClass(v)
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// `gcd` of the coordinates is 1.
pub fn is_primitive(v: &DivisorClass) -> Result<bool> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(v.content() == 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub pos: usize,
    pub neg: usize,
    pub zero: usize,
}

/// Signature of an arbitrary symmetric integer matrix.
pub fn signature_of(gram: &[Vec<i64>]) -> Signature {
    let (pos, neg, zero) = linalg::inertia(gram);
    Signature { pos, neg, zero }
}

/// An even, non-degenerate, hyperbolic integer lattice with a fixed basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramLattice {
    gram: IntMatrix,
    labels: Vec<String>,
}

impl GramLattice {
    /// Validates symmetry, evenness, non-degeneracy and signature `(1, rho - 1)`.
    pub fn new(gram: IntMatrix, labels: Vec<String>) -> Result<Self> {
        let lat = Self::new_even(gram, labels)?;
        let sig = lat.signature();
        if sig.pos != 1 || sig.zero != 0 {
            return Err(Error::InvalidLattice(format!(
                "signature ({}, {}, {}) is not hyperbolic",
                sig.pos, sig.neg, sig.zero
            )));
        }
        Ok(lat)
    }

    /// Like [`GramLattice::new`] without the signature requirement. Used for
    /// definite lattices met during isometry testing.
    pub fn new_even(gram: IntMatrix, labels: Vec<String>) -> Result<Self> {
        let rank = gram.len();
        if rank == 0 {
            return Err(Error::InvalidLattice("rank 0".into()));
        }
        if !linalg::is_symmetric(&gram) {
            return Err(Error::InvalidLattice("Gram matrix is not symmetric".into()));
        }
        if let Some(i) = (0..rank).find(|&i| gram[i][i] % 2 != 0) {
            return Err(Error::InvalidLattice(format!(
                "odd diagonal entry {} at position {i}",
                gram[i][i]
            )));
        }
        let labels = if labels.is_empty() {
            (1..=rank).map(|i| format!("e{i}")).collect()
        } else if labels.len() != rank {
            return Err(Error::DimensionMismatch {
                expected: rank,
                found: labels.len(),
            });
        } else {
            labels
        };
        let lat = GramLattice { gram, labels };
        if lat.determinant() == BigInt::from(0) {
            return Err(Error::InvalidLattice("degenerate Gram matrix".into()));
        }
        Ok(lat)
    }

    pub fn from_rows(gram: IntMatrix) -> Result<Self> {
        Self::new(gram, Vec::new())
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn determinant(&self) -> BigInt {
        linalg::determinant(&self.gram)
    }

    pub fn abs_determinant(&self) -> u64 {
        self.determinant()
            .abs()
            .to_u64()
            .expect("determinant fits in u64 at supported ranks")
    }

    pub fn signature(&self) -> Signature {
        signature_of(&self.gram)
    }

    fn check(&self, v: &DivisorClass) -> Result<()> {
        if v.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                found: v.len(),
            });
        }
        Ok(())
    }

    /// The intersection number `v^T G w`.
    pub fn bilinear(&self, v: &DivisorClass, w: &DivisorClass) -> Result<i64> {
        self.check(v)?;
        self.check(w)?;
        self.try_dot(v.coords(), w.coords())
    }

    pub fn square(&self, v: &DivisorClass) -> Result<i64> {
        self.bilinear(v, v)
    }

    pub(crate) fn try_dot(&self, v: &[i64], w: &[i64]) -> Result<i64> {
        let mut acc: i128 = 0;
        for (i, row) in self.gram.iter().enumerate() {
            if v[i] == 0 {
                continue;
            }
            let inner: i128 = row
                .iter()
                .zip(w)
                .map(|(&g, &x)| i128::from(g) * i128::from(x))
                .sum();
            acc += i128::from(v[i]) * inner;
        }
        i64::try_from(acc).map_err(|_| Error::Overflow)
    }

    /// Unchecked-dimension intersection number for internal hot paths.
    pub(crate) fn dot(&self, v: &[i64], w: &[i64]) -> i64 {
        self.try_dot(v, w).expect("intersection number overflows i64")
    }

    /// Row vector `G v`, the linear functional `x -> v . x`.
    pub(crate) fn functional(&self, v: &[i64]) -> Result<Vec<i64>> {
        linalg::mat_vec(&self.gram, v)
    }

    /// Gram matrix of the given vectors.
    pub fn gram_of(&self, vectors: &[DivisorClass]) -> Result<IntMatrix> {
        vectors
            .iter()
            .map(|a| vectors.iter().map(|b| self.bilinear(a, b)).collect())
            .collect()
    }

    /// Lattice in a new basis given by the rows of `basis` (must be unimodular).
    pub fn change_basis(&self, basis: &[Vec<i64>]) -> Result<GramLattice> {
        let classes: Vec<DivisorClass> = basis.iter().cloned().map(DivisorClass::new).collect();
        GramLattice::new_even(self.gram_of(&classes)?, Vec::new())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s1() -> GramLattice {
        GramLattice::from_rows(vec![vec![6, 0, 0], vec![0, -2, 0], vec![0, 0, -2]]).unwrap()
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            GramLattice::from_rows(vec![vec![3, 0], vec![0, -2]]),
            Err(Error::InvalidLattice(_))
        ));
        assert!(matches!(
            GramLattice::from_rows(vec![vec![2, 1], vec![0, -2]]),
            Err(Error::InvalidLattice(_))
        ));
        assert!(matches!(
            GramLattice::from_rows(vec![vec![2, 2], vec![2, 2]]),
            Err(Error::InvalidLattice(_))
        ));
        assert!(matches!(
            GramLattice::from_rows(vec![vec![-2, 0], vec![0, -2]]),
            Err(Error::InvalidLattice(_))
        ));
    }

    #[test]
    fn bilinear_values() {
        let lat = s1();
        let a1 = DivisorClass::new(vec![0, 1, 0]);
        assert_eq!(lat.bilinear(&a1, &a1).unwrap(), -2);
        assert_eq!(lat.bilinear(&DivisorClass::zero(3), &a1).unwrap(), 0);
        assert!(matches!(
            lat.bilinear(&DivisorClass::new(vec![1, 0]), &a1),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn signatures() {
        assert_eq!(
            GramLattice::from_rows(vec![vec![2]]).unwrap().signature(),
            Signature { pos: 1, neg: 0, zero: 0 }
        );
    }

    #[test]
    fn primitivity() {
        assert!(!is_primitive(&DivisorClass::new(vec![2, -2, 2])).unwrap());
        assert!(is_primitive(&DivisorClass::new(vec![1, -1, 1])).unwrap());
        assert!(is_primitive(&DivisorClass::new(vec![0, 3, 5])).unwrap());
        assert_eq!(is_primitive(&DivisorClass::zero(3)), Err(Error::ZeroVector));
    }

    #[test]
    fn multiples() {
        let d = DivisorClass::new(vec![1, -1, 1]);
        assert_eq!(DivisorClass::new(vec![3, -3, 3]).multiple_of(&d), Some(3));
        assert_eq!(DivisorClass::new(vec![3, -3, 2]).multiple_of(&d), None);
    }

    proptest! {
        #[test]
        fn bilinear_is_symmetric(v in prop::collection::vec(-50i64..50, 3),
                                 w in prop::collection::vec(-50i64..50, 3)) {
            let lat = GramLattice::from_rows(vec![vec![36, 0, 0], vec![0, -2, 1], vec![0, 1, -2]]).unwrap();
            let (v, w) = (DivisorClass::new(v), DivisorClass::new(w));
            prop_assert_eq!(lat.bilinear(&v, &w).unwrap(), lat.bilinear(&w, &v).unwrap());
            prop_assert_eq!(lat.square(&v).unwrap() % 2, 0);
        }
    }
}
