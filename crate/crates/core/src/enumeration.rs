//! Exact enumeration of lattice vectors of prescribed norm, and of classes of
//! prescribed square and degree against a positive class.
//!
//! The definite enumeration is a Fincke-Pohst branch and bound run entirely in
//! integers: the positive definite form is peeled one variable at a time by
//! completing the square, and the scaled Schur complements
//! `Q_{l+1} = a_l * Q_l' - b_l b_l^T` carry the bounds for the remaining
//! coordinates. Classes of square `d` and degree `k` against `H` are found by
//! projecting onto `H^perp` via `D -> (H^2) D - (D.H) H`, enumerating the
//! negative definite complement, and lifting back.

use std::cmp::Ordering;

use num_integer::Roots;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, GramLattice};
use crate::linalg::{self, IntMatrix};

/// Fraction-free square-completion chain of a positive definite form.
#[derive(Debug, Clone)]
struct FormChain {
    /// `lead[l]`: leading coefficient `a_l` of `Q_l`.
    lead: Vec<i128>,
    /// `cross[l]`: first row of `Q_l` past the diagonal, `b_l`.
    cross: Vec<Vec<i128>>,
}

impl FormChain {
    fn new(form: &[Vec<i64>]) -> Result<Self> {
        let n = form.len();
        let mut q: Vec<Vec<i128>> = form
            .iter()
            .map(|r| r.iter().map(|&x| i128::from(x)).collect())
            .collect();
        let mut lead = Vec::with_capacity(n);
        let mut cross = Vec::with_capacity(n);
        for _ in 0..n {
            let a = q[0][0];
            if a <= 0 {
                return Err(Error::NotNegativeDefinite);
            }
            let b: Vec<i128> = q[0][1..].to_vec();
            let m = b.len();
            let mut next = vec![vec![0i128; m]; m];
            for i in 0..m {
                for j in 0..m {
                    next[i][j] = a
                        .checked_mul(q[i + 1][j + 1])
                        .zip(b[i].checked_mul(b[j]))
                        .and_then(|(x, y)| x.checked_sub(y))
                        .ok_or(Error::Overflow)?;
                }
            }
            lead.push(a);
            cross.push(b);
            q = next;
        }
        Ok(FormChain { lead, cross })
    }

    fn dim(&self) -> usize {
        self.lead.len()
    }

    /// Calls `visit(x, Q(x))` for every integer `x` with `Q(x) <= bound`.
    fn for_each_within(&self, bound: i128, visit: &mut dyn FnMut(&[i64], i128)) -> Result<()> {
        let n = self.dim();
        if bound < 0 {
            return Ok(());
        }
        if n == 0 {
            visit(&[], 0);
            return Ok(());
        }
        // level bounds B_l = bound * prod_{j<l} a_j
        let mut bounds = Vec::with_capacity(n);
        let mut b = bound;
        for l in 0..n {
            bounds.push(b);
            b = b.checked_mul(self.lead[l]).ok_or(Error::Overflow)?;
        }
        let mut x = vec![0i64; n];
        self.descend(n - 1, 0, &bounds, &mut x, visit)
    }

    fn descend(
        &self,
        level: usize,
        tail_value: i128,
        bounds: &[i128],
        x: &mut [i64],
        visit: &mut dyn FnMut(&[i64], i128),
    ) -> Result<()> {
        let a = self.lead[level];
        let slack = a
            .checked_mul(bounds[level])
            .and_then(|v| v.checked_sub(tail_value))
            .ok_or(Error::Overflow)?;
        if slack < 0 {
            return Ok(());
        }
        let beta: i128 = self.cross[level]
            .iter()
            .zip(&x[level + 1..])
            .map(|(&c, &xi)| c * i128::from(xi))
            .sum();
        let m = slack.sqrt();
        let lo = div_ceil(-m - beta, a);
        let hi = div_floor(m - beta, a);
        for xi in lo..=hi {
            let t = a * xi + beta;
            let value = (t * t + tail_value) / a;
            x[level] = i64::try_from(xi).map_err(|_| Error::Overflow)?;
            if level == 0 {
                visit(x, value);
            } else {
                self.descend(level - 1, value, bounds, x, visit)?;
            }
        }
        x[level] = 0;
        Ok(())
    }
}

fn div_floor(a: i128, b: i128) -> i128 {
    num_integer::Integer::div_floor(&a, &b)
}

fn div_ceil(a: i128, b: i128) -> i128 {
    -div_floor(-a, b)
}

/// Lexicographic order on coordinates; the canonical order of all outputs.
pub fn canonical_cmp(a: &[i64], b: &[i64]) -> Ordering {
    a.cmp(b)
}

/// All vectors `v != 0` with `v^T G v = norm` for a negative definite `G`,
/// sorted lexicographically. `norm = 0` yields the empty list.
pub fn vectors_of_norm(neg_def_gram: &[Vec<i64>], norm: i64) -> Result<Vec<Vec<i64>>> {
    if !linalg::is_symmetric(neg_def_gram) {
        return Err(Error::InvalidLattice("Gram matrix is not symmetric".into()));
    }
    let pos: IntMatrix = neg_def_gram
        .iter()
        .map(|r| r.iter().map(|&x| -x).collect())
        .collect();
    let chain = FormChain::new(&pos)?;
    if norm >= 0 {
        return Ok(Vec::new());
    }
    let target = -i128::from(norm);
    let mut out = Vec::new();
    chain.for_each_within(target, &mut |x, v| {
        if v == target {
            out.push(x.to_vec());
        }
    })?;
    out.sort();
    Ok(out)
}

/// Calls `visit` for each integer vector `x` with `x^T Q x <= bound`, `Q`
/// positive definite (the zero vector included).
pub fn for_each_short_vector(
    pos_def_gram: &[Vec<i64>],
    bound: i64,
    mut visit: impl FnMut(&[i64], i64),
) -> Result<()> {
    let chain = FormChain::new(pos_def_gram)?;
    chain.for_each_within(i128::from(bound), &mut |x, v| {
        visit(x, v as i64);
    })
}

/// Classes found for one `(square, degree)` cell, with the number of
/// projected vectors whose lift was not integral.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellEnumeration {
    pub classes: Vec<DivisorClass>,
    pub discarded: usize,
}

/// Projection onto the orthogonal complement of a positive class `H`,
/// reusable across many `(square, degree)` cells.
#[derive(Debug, Clone)]
pub struct ShimadaProjection {
    lattice: GramLattice,
    seed: DivisorClass,
    seed_square: i64,
    /// Rows: a basis of `H^perp` in lattice coordinates.
    complement: IntMatrix,
    chain: FormChain,
}

impl ShimadaProjection {
    pub fn new(lattice: &GramLattice, seed: &DivisorClass) -> Result<Self> {
        let seed_square = lattice.square(seed)?;
        if seed_square <= 0 {
            return Err(Error::NonPositiveSquare {
                class: seed.coords().to_vec(),
                square: seed_square,
            });
        }
        let functional = lattice.functional(seed.coords())?;
        let complement = linalg::integer_kernel(&[functional])?;
        let classes: Vec<DivisorClass> =
            complement.iter().cloned().map(DivisorClass::new).collect();
        let form: IntMatrix = lattice
            .gram_of(&classes)?
            .into_iter()
            .map(|r| r.into_iter().map(|x| -x).collect())
            .collect();
        let chain = FormChain::new(&form)?;
        Ok(ShimadaProjection {
            lattice: lattice.clone(),
            seed: seed.clone(),
            seed_square,
            complement,
            chain,
        })
    }

    pub fn lattice(&self) -> &GramLattice {
        &self.lattice
    }

    pub fn seed(&self) -> &DivisorClass {
        &self.seed
    }

    pub fn seed_square(&self) -> i64 {
        self.seed_square
    }

    /// Norm that `pi(D) = (H^2) D - (D.H) H` must have for a class of square
    /// `d` and degree `k`.
    pub fn projected_norm(&self, square: i64, degree: i64) -> i128 {
        let h2 = i128::from(self.seed_square);
        h2 * h2 * i128::from(square) - i128::from(degree) * i128::from(degree) * h2
    }

    /// Every class `D` with `D^2 = square` and `H.D = degree`, sorted.
    pub fn cell(&self, square: i64, degree: i64) -> Result<CellEnumeration> {
        let norm = self.projected_norm(square, degree);
        let mut classes = Vec::new();
        let mut discarded = 0usize;
        if norm > 0 {
            return Ok(CellEnumeration { classes, discarded });
        }
        let target = -norm;
        let rank = self.lattice.rank();
        let h2 = i128::from(self.seed_square);
        let lift_offset: Vec<i128> = self
            .seed
            .coords()
            .iter()
            .map(|&c| i128::from(c) * i128::from(degree))
            .collect();
        let mut overflow = false;
        self.chain.for_each_within(target, &mut |y, value| {
            if value != target {
                return;
            }
            let mut coords = Vec::with_capacity(rank);
            for (j, off) in lift_offset.iter().enumerate() {
                let s: i128 = y
                    .iter()
                    .zip(&self.complement)
                    .map(|(&yi, row)| i128::from(yi) * i128::from(row[j]))
                    .sum();
                let num = s + off;
                if num % h2 != 0 {
                    discarded += 1;
                    return;
                }
                match i64::try_from(num / h2) {
                    Ok(c) => coords.push(c),
                    Err(_) => {
                        overflow = true;
                        return;
                    }
                }
            }
            classes.push(DivisorClass::new(coords));
        })?;
        if overflow {
            return Err(Error::Overflow);
        }
        classes.sort();
        Ok(CellEnumeration { classes, discarded })
    }

    /// `(-2)`-classes with `0 < H.r <= kmax`, ordered by degree then canonically.
    pub fn roots_up_to_degree(&self, kmax: i64) -> Result<Vec<DivisorClass>> {
        let per_degree: Vec<Vec<DivisorClass>> = (1..=kmax.max(0))
            .into_par_iter()
            .map(|k| self.cell(-2, k).map(|c| c.classes))
            .collect::<Result<_>>()?;
        Ok(per_degree.into_iter().flatten().collect())
    }
}

/// Every class `D` with `D^2 = square` and `H.D = degree`, sorted.
pub fn classes_with_square_and_degree(
    lattice: &GramLattice,
    seed: &DivisorClass,
    square: i64,
    degree: i64,
) -> Result<Vec<DivisorClass>> {
    Ok(ShimadaProjection::new(lattice, seed)?
        .cell(square, degree)?
        .classes)
}

/// All `(-2)`-classes `r` with `0 < H.r <= kmax`, ordered by degree, ties in
/// canonical order.
pub fn minus_two_classes_up_to_degree(
    lattice: &GramLattice,
    seed: &DivisorClass,
    kmax: i64,
) -> Result<Vec<DivisorClass>> {
    ShimadaProjection::new(lattice, seed)?.roots_up_to_degree(kmax)
}
