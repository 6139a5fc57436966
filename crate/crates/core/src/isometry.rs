//! Isometry testing for small lattices by backtracking over vectors of
//! matching norms.

use crate::enumeration::{self, ShimadaProjection};
use crate::lattice::{signature_of, DivisorClass, GramLattice};
use crate::linalg::{self, IntMatrix};

/// Search cap on the degree `v . h2` of the image of the positive test vector.
const DEGREE_FACTOR: i64 = 16;

/// Largest rank supported by [`isometry_small`].
pub const MAX_RANK: usize = 5;

fn same_invariants(g1: &[Vec<i64>], g2: &[Vec<i64>]) -> bool {
    g1.len() == g2.len()
        && linalg::determinant(g1) == linalg::determinant(g2)
        && signature_of(g1) == signature_of(g2)
        && linalg::smith_normal_form(g1).diagonal() == linalg::smith_normal_form(g2).diagonal()
}

/// A unimodular `U` with `U^T G2 U = G1` (columns of `U` are the images of the
/// basis of `l1` in `l2`), or `None`. Ranks above [`MAX_RANK`] return `None`.
///
/// Definite lattices are handled completely. For hyperbolic lattices the
/// image of a short positive vector is searched with degree against a fixed
/// positive vector of `l2` up to a cap, which suffices at catalog scale.
pub fn isometry_small(l1: &GramLattice, l2: &GramLattice) -> Option<IntMatrix> {
    isometry_of_grams(l1.gram(), l2.gram())
}

pub fn isometry_of_grams(g1: &[Vec<i64>], g2: &[Vec<i64>]) -> Option<IntMatrix> {
    let n = g1.len();
    if n == 0 || n > MAX_RANK || !same_invariants(g1, g2) {
        return None;
    }
    let sig = signature_of(g1);
    if sig.pos == 0 || sig.neg == 0 {
        let flip = if sig.pos > 0 { -1 } else { 1 };
        let neg1: IntMatrix = g1.iter().map(|r| r.iter().map(|x| flip * x).collect()).collect();
        let neg2: IntMatrix = g2.iter().map(|r| r.iter().map(|x| flip * x).collect()).collect();
        let candidates: Vec<Vec<Vec<i64>>> = (0..n)
            .map(|i| enumeration::vectors_of_norm(&neg2, neg1[i][i]).ok())
            .collect::<Option<_>>()?;
        return backtrack(&neg1, &neg2, &candidates);
    }
    if sig.pos != 1 {
        return None;
    }
    let l1 = GramLattice::new(g1.to_vec(), Vec::new()).ok()?;
    let l2 = GramLattice::new(g2.to_vec(), Vec::new()).ok()?;
    let h1 = short_positive_vector(&l1)?;
    let h2 = short_positive_vector(&l2)?;
    let s1 = l1.square(&h1).ok()?;
    let s2 = l2.square(&h2).ok()?;
    let images_of_basis: Vec<(i64, i64)> = (0..n)
        .map(|i| {
            let e = DivisorClass::unit(n, i);
            (g1[i][i], l1.bilinear(&e, &h1).unwrap_or(0))
        })
        .collect();
    let start = num_integer::Roots::sqrt(&(s1 * s2));
    let cap = start * DEGREE_FACTOR + DEGREE_FACTOR;
    let projection = ShimadaProjection::new(&l2, &h2).ok()?;
    for k in start.max(1)..=cap {
        let images = projection.cell(s1, k).ok()?.classes;
        for v in images {
            let local = ShimadaProjection::new(&l2, &v).ok()?;
            let candidates: Vec<Vec<Vec<i64>>> = images_of_basis
                .iter()
                .map(|&(sq, deg)| {
                    local
                        .cell(sq, deg)
                        .map(|c| c.classes.into_iter().map(DivisorClass::into_coords).collect())
                })
                .collect::<Result<_, _>>()
                .ok()?;
            if let Some(u) = backtrack(g1, g2, &candidates) {
                return Some(u);
            }
        }
    }
    None
}

/// A vector of smallest positive square found in a small coordinate box.
fn short_positive_vector(lat: &GramLattice) -> Option<DivisorClass> {
    let n = lat.rank();
    for radius in [1i64, 2, 3, 5, 8] {
        let side = (2 * radius + 1) as u64;
        let mut best: Option<(i64, Vec<i64>)> = None;
        for idx in 0..side.pow(n as u32) {
            let mut rest = idx;
            let x: Vec<i64> = (0..n)
                .map(|_| {
                    let c = (rest % side) as i64 - radius;
                    rest /= side;
                    c
                })
                .collect();
            if let Ok(s) = lat.square(&DivisorClass::new(x.clone())) {
                if s > 0 && best.as_ref().map_or(true, |(b, v)| (s, &x) < (*b, v)) {
                    best = Some((s, x));
                }
            }
        }
        if let Some((_, v)) = best {
            return Some(DivisorClass::new(v));
        }
    }
    None
}

fn dot(g: &[Vec<i64>], v: &[i64], w: &[i64]) -> i128 {
    let mut acc = 0i128;
    for (i, row) in g.iter().enumerate() {
        if v[i] == 0 {
            continue;
        }
        let inner: i128 = row.iter().zip(w).map(|(&a, &b)| i128::from(a) * i128::from(b)).sum();
        acc += i128::from(v[i]) * inner;
    }
    acc
}

/// Assign images to basis vectors one at a time, checking every Gram entry
/// between assigned vectors.
fn backtrack(g1: &[Vec<i64>], g2: &[Vec<i64>], candidates: &[Vec<Vec<i64>>]) -> Option<IntMatrix> {
    let n = g1.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (candidates[i].len(), i));
    let mut chosen: Vec<Option<usize>> = vec![None; n];

    fn go(
        depth: usize,
        order: &[usize],
        g1: &[Vec<i64>],
        g2: &[Vec<i64>],
        candidates: &[Vec<Vec<i64>>],
        chosen: &mut Vec<Option<usize>>,
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let i = order[depth];
        for (ci, v) in candidates[i].iter().enumerate() {
            let ok = order[..depth].iter().all(|&j| {
                let w = &candidates[j][chosen[j].unwrap()];
                dot(g2, v, w) == i128::from(g1[i][j])
            });
            if !ok {
                continue;
            }
            chosen[i] = Some(ci);
            if go(depth + 1, order, g1, g2, candidates, chosen) {
                return true;
            }
        }
        chosen[i] = None;
        false
    }

    if !go(0, &order, g1, g2, candidates, &mut chosen) {
        return None;
    }
    let mut u = vec![vec![0i64; n]; n];
    for i in 0..n {
        let v = &candidates[i][chosen[i]?];
        for r in 0..n {
            u[r][i] = v[r];
        }
    }
    Some(u)
}

/// `U^T G2 U == G1`.
pub fn verify_isometry(g1: &[Vec<i64>], g2: &[Vec<i64>], u: &[Vec<i64>]) -> bool {
    let Ok(g2u) = linalg::mat_mul(g2, u) else { return false };
    let Ok(m) = linalg::mat_mul(&linalg::transpose(u), &g2u) else { return false };
    m == g1
}
