//! Discriminant groups `L*/L`, their quadratic forms, isotropic elements and
//! the even overlattices they generate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::GramLattice;
use crate::linalg::{self, RatMatrix};

/// A rational vector in lattice coordinates.
pub type RationalVector = Vec<BigRational>;

/// The finite group `L*/L` of a non-degenerate lattice.
#[derive(Debug, Clone)]
pub struct DiscriminantGroup {
    gram: Vec<Vec<i64>>,
    /// Invariant factors `d_1 | d_2 | ...`, each `> 1`.
    pub invariant_factors: Vec<i64>,
    /// Lifts of the generators to `L* ⊂ L ⊗ Q`.
    pub generator_lifts: Vec<RationalVector>,
    /// `q(g_i) = g_i^T G g_i` reduced to `[0, 2)`.
    pub q_values: Vec<BigRational>,
}

/// An element `sum m_i g_i` of a discriminant group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscriminantElement {
    /// Coefficients `0 <= m_i < d_i` on the generators.
    pub coefficients: Vec<i64>,
    /// A lift to `L*` with coordinates in `[0, 1)`.
    pub lift: RationalVector,
    /// Order of the element in the group.
    pub order: i64,
    /// `q(x)` in `[0, 2)`.
    pub q: BigRational,
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// `x` reduced into `[0, m)`.
fn reduce_mod(x: &BigRational, m: i64) -> BigRational {
    let m = rat(m);
    let q = (x / &m).floor();
    x - q * m
}

/// Fractional part of every coordinate.
fn reduce_lift(v: &[BigRational]) -> RationalVector {
    v.iter().map(|x| x - x.floor()).collect()
}

pub fn quadratic_value(gram: &[Vec<i64>], v: &[BigRational]) -> BigRational {
    let mut acc = BigRational::zero();
    for (i, row) in gram.iter().enumerate() {
        for (j, &g) in row.iter().enumerate() {
            if g != 0 {
                acc += &v[i] * &v[j] * rat(g);
            }
        }
    }
    acc
}

/// `q(x)` reduced into `[0, 2)`.
pub fn q_mod_two(gram: &[Vec<i64>], v: &[BigRational]) -> BigRational {
    reduce_mod(&quadratic_value(gram, v), 2)
}

/// Discriminant group from the Smith normal form `U G V = D` of the Gram
/// matrix: the generator for an invariant factor `d_i > 1` lifts to
/// `G^{-1} U^{-1} e_i`.
pub fn discriminant_group(lattice: &GramLattice) -> Result<DiscriminantGroup> {
    discriminant_group_of_gram(lattice.gram())
}

pub fn discriminant_group_of_gram(gram: &[Vec<i64>]) -> Result<DiscriminantGroup> {
    let n = gram.len();
    let inverse =
        linalg::rational_inverse(gram).ok_or_else(|| Error::InvalidLattice("singular Gram matrix".into()))?;
    let snf = linalg::smith_normal_form(gram);
    let u = linalg::from_big(&snf.u)?;
    let u_inv = linalg::rational_inverse(&u).expect("unimodular transform is invertible");
    // G^{-1} U^{-1}
    let w: RatMatrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| &inverse[i][k] * &u_inv[k][j]).sum())
                .collect()
        })
        .collect();
    let mut invariant_factors = Vec::new();
    let mut generator_lifts = Vec::new();
    let mut q_values = Vec::new();
    for (i, d) in snf.diagonal().iter().enumerate() {
        if d.is_one() {
            continue;
        }
        let d = d.to_i64().ok_or(Error::Overflow)?;
        let lift = reduce_lift(&(0..n).map(|r| w[r][i].clone()).collect::<Vec<_>>());
        q_values.push(q_mod_two(gram, &lift));
        invariant_factors.push(d);
        generator_lifts.push(lift);
    }
    Ok(DiscriminantGroup {
        gram: gram.to_vec(),
        invariant_factors,
        generator_lifts,
        q_values,
    })
}

impl DiscriminantGroup {
    pub fn order(&self) -> i64 {
        self.invariant_factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    /// The element with the given generator coefficients.
    pub fn element(&self, coefficients: &[i64]) -> DiscriminantElement {
        let n = self.gram.len();
        let coefficients: Vec<i64> = coefficients
            .iter()
            .zip(&self.invariant_factors)
            .map(|(&m, &d)| m.rem_euclid(d))
            .collect();
        let mut lift = vec![BigRational::zero(); n];
        for (m, g) in coefficients.iter().zip(&self.generator_lifts) {
            for (x, y) in lift.iter_mut().zip(g) {
                *x += y * rat(*m);
            }
        }
        let lift = reduce_lift(&lift);
        let order = coefficients
            .iter()
            .zip(&self.invariant_factors)
            .map(|(&m, &d)| d / m.gcd(&d))
            .fold(1i64, |acc, o| acc.lcm(&o));
        let q = q_mod_two(&self.gram, &lift);
        DiscriminantElement {
            coefficients,
            lift,
            order,
            q,
        }
    }

    /// Every element of the group, in lexicographic coefficient order.
    pub fn elements(&self) -> Vec<DiscriminantElement> {
        let mut out = Vec::with_capacity(self.order() as usize);
        let mut coeffs = vec![0i64; self.invariant_factors.len()];
        loop {
            out.push(self.element(&coeffs));
            let mut i = coeffs.len();
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                coeffs[i] += 1;
                if coeffs[i] < self.invariant_factors[i] {
                    break;
                }
                coeffs[i] = 0;
            }
        }
    }

    /// Non-trivial isotropic elements (`q(x) = 0` in `Q/2Z`), one per pair
    /// `{x, -x}`: both generate the same isotropic subgroup and the same
    /// overlattice. The representative kept is the first in coefficient order.
    pub fn isotropic_elements(&self) -> Vec<DiscriminantElement> {
        let mut out: Vec<DiscriminantElement> = Vec::new();
        for x in self.elements() {
            if x.order == 1 || !x.q.is_zero() {
                continue;
            }
            let negated: Vec<i64> = x.coefficients.iter().map(|m| -m).collect();
            let neg = self.element(&negated);
            if out.iter().any(|y| y.coefficients == neg.coefficients) {
                continue;
            }
            out.push(x);
        }
        out
    }

    /// Every non-trivial isotropic element, `x` and `-x` both listed.
    pub fn all_isotropic_elements(&self) -> Vec<DiscriminantElement> {
        self.elements()
            .into_iter()
            .filter(|x| x.order > 1 && x.q.is_zero())
            .collect()
    }
}

/// Even overlattice `L + Z x` for an isotropic discriminant element `x`, in
/// an HNF basis of the saturation. Returns the new lattice and its basis
/// vectors as rational vectors in the old coordinates.
pub fn overlattice_from_isotropic(
    lattice: &GramLattice,
    x: &DiscriminantElement,
) -> Result<(GramLattice, Vec<RationalVector>)> {
    if x.order == 1 || x.lift.iter().all(Zero::is_zero) {
        return Err(Error::TrivialElement);
    }
    let q = q_mod_two(lattice.gram(), &x.lift);
    if !q.is_zero() {
        return Err(Error::NotIsotropic { q: q.to_string() });
    }
    let n = lattice.rank();
    // clear denominators: rows m*e_i and m*x, then HNF
    let m = x
        .lift
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut rows: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { m.clone() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    rows.push(x.lift.iter().map(|c| (c * &m).to_integer()).collect());
    let hnf = linalg::row_hnf(&rows);
    let basis: Vec<RationalVector> = hnf.h[..hnf.rank]
        .iter()
        .map(|r| {
            r.iter()
                .map(|c| BigRational::new(c.clone(), m.clone()))
                .collect()
        })
        .collect();
    let mut gram = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = BigRational::zero();
            for (a, row) in lattice.gram().iter().enumerate() {
                for (b, &g) in row.iter().enumerate() {
                    if g != 0 {
                        acc += &basis[i][a] * &basis[j][b] * rat(g);
                    }
                }
            }
            if !acc.is_integer() {
                return Err(Error::NotIsotropic { q: acc.to_string() });
            }
            gram[i][j] = acc.to_integer().to_i64().ok_or(Error::Overflow)?;
        }
    }
    let over = if lattice.signature().pos == 1 {
        GramLattice::new(gram, Vec::new())?
    } else {
        GramLattice::new_even(gram, Vec::new())?
    };
    Ok((over, basis))
}

/// Index of the overlattice, `sqrt(|det L| / |det L'|)`.
pub fn overlattice_index(lattice: &GramLattice, over: &GramLattice) -> Option<u64> {
    let a = lattice.abs_determinant();
    let b = over.abs_determinant();
    if b == 0 || a % b != 0 {
        return None;
    }
    let r = a / b;
    let s = num_integer::Roots::sqrt(&r);
    (s * s == r).then_some(s)
}

/// Display a rational as `p/q` (or `p`).
pub fn fraction_string(x: &BigRational) -> String {
    if x.is_integer() {
        x.to_integer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Serializable summary of one element.
#[derive(Debug, Clone, Serialize)]
pub struct ElementReport {
    pub coefficients: Vec<i64>,
    pub lift: Vec<String>,
    pub order: i64,
    pub q: String,
}

impl From<&DiscriminantElement> for ElementReport {
    fn from(x: &DiscriminantElement) -> Self {
        ElementReport {
            coefficients: x.coefficients.clone(),
            lift: x.lift.iter().map(fraction_string).collect(),
            order: x.order,
            q: fraction_string(&x.q),
        }
    }
}

impl DiscriminantElement {
    pub fn is_zero(&self) -> bool {
        self.lift.iter().all(|c| c.is_zero())
    }

    /// `order * lift` is integral.
    pub fn order_kills_lift(&self) -> bool {
        self.lift.iter().all(|c| (c * rat(self.order)).is_integer())
    }

    pub fn q_is_negative_zero(&self) -> bool {
        self.q.is_negative()
    }
}
