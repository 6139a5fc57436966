//! Exact integer and rational linear algebra on small dense matrices.
//!
//! Matrices are stored row-major as `Vec<Vec<_>>`. Everything that can grow
//! (eliminations, normal forms) runs on `BigInt` / `BigRational`; results are
//! narrowed back to `i64` with an overflow check.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type IntMatrix = Vec<Vec<i64>>;
pub type BigMatrix = Vec<Vec<BigInt>>;
pub type RatMatrix = Vec<Vec<BigRational>>;

pub fn to_big(m: &[Vec<i64>]) -> BigMatrix {
    m.iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

pub fn big_to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64().ok_or(Error::Overflow)
}

pub fn from_big(m: &[Vec<BigInt>]) -> Result<IntMatrix> {
    m.iter()
        .map(|row| row.iter().map(big_to_i64).collect())
        .collect()
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

fn big_identity(n: usize) -> BigMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn is_symmetric(m: &[Vec<i64>]) -> bool {
    let n = m.len();
    m.iter().all(|row| row.len() == n)
        && (0..n).all(|i| (0..i).all(|j| m[i][j] == m[j][i]))
}

/// `a * b` with overflow checking.
pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Result<IntMatrix> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            if row.len() != inner {
                return Err(Error::DimensionMismatch {
                    expected: inner,
                    found: row.len(),
                });
            }
            (0..cols)
                .map(|j| {
                    let acc: i128 = (0..inner)
                        .map(|k| i128::from(row[k]) * i128::from(b[k][j]))
                        .sum();
                    i64::try_from(acc).map_err(|_| Error::Overflow)
                })
                .collect()
        })
        .collect()
}

/// `m * v` with overflow checking.
pub fn mat_vec(m: &[Vec<i64>], v: &[i64]) -> Result<Vec<i64>> {
    m.iter()
        .map(|row| {
            if row.len() != v.len() {
                return Err(Error::DimensionMismatch {
                    expected: row.len(),
                    found: v.len(),
                });
            }
            let acc: i128 = row
                .iter()
                .zip(v)
                .map(|(&a, &b)| i128::from(a) * i128::from(b))
                .sum();
            i64::try_from(acc).map_err(|_| Error::Overflow)
        })
        .collect()
}

/// Determinant by Bareiss fraction-free elimination.
pub fn determinant(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = to_big(m);
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Determinant of a small matrix in `i128`, for hot loops; falls back to
/// `BigInt` if an intermediate value would overflow.
pub fn small_determinant(m: &[&[i64]]) -> BigInt {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| i128::from(x)).collect())
        .collect();
    let mut sign: i128 = 1;
    let mut prev: i128 = 1;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(p) => {
                    a.swap(k, p);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[k][k]
                    .checked_mul(a[i][j])
                    .zip(a[i][k].checked_mul(a[k][j]))
                    .and_then(|(x, y)| x.checked_sub(y));
                match v {
                    Some(v) => a[i][j] = v / prev,
                    None => {
                        let owned: IntMatrix = m.iter().map(|r| r.to_vec()).collect();
                        return determinant(&owned);
                    }
                }
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    BigInt::from(sign * a[n - 1][n - 1])
}

/// Rank over the rationals by fraction-free (Bareiss) elimination.
pub fn exact_rank(m: &[Vec<i64>]) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut a = to_big(m);
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Row Hermite normal form `H = U * A` with `U` unimodular.
#[derive(Debug, Clone)]
pub struct RowHnf {
    pub h: BigMatrix,
    pub u: BigMatrix,
    pub rank: usize,
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

fn row_sub_mul(m: &mut [Vec<BigInt>], target: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let (t, s) = if target < src {
        let (lo, hi) = m.split_at_mut(src);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(target);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in t.iter_mut().zip(s.iter()) {
        *x -= q * y;
    }
}

pub fn row_hnf(a: &[Vec<BigInt>]) -> RowHnf {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut h = a.to_vec();
    let mut u = big_identity(m);
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        loop {
            let pivot = (r..m)
                .filter(|&i| !h[i][c].is_zero())
                .min_by(|&i, &j| h[i][c].abs().cmp(&h[j][c].abs()));
            let Some(p) = pivot else { break };
            h.swap(r, p);
            u.swap(r, p);
            let mut done = true;
            for i in r + 1..m {
                if h[i][c].is_zero() {
                    continue;
                }
                let q = floor_div(&h[i][c], &h[r][c]);
                row_sub_mul(&mut h, i, r, &q);
                row_sub_mul(&mut u, i, r, &q);
                if !h[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[r][c].is_zero() {
            continue;
        }
        if h[r][c].is_negative() {
            for x in h[r].iter_mut() {
                *x = -x.clone();
            }
            for x in u[r].iter_mut() {
                *x = -x.clone();
            }
        }
        for i in 0..r {
            let q = floor_div(&h[i][c], &h[r][c]);
            row_sub_mul(&mut h, i, r, &q);
            row_sub_mul(&mut u, i, r, &q);
        }
        r += 1;
    }
    RowHnf { h, u, rank: r }
}

/// Basis (as rows) of the saturated lattice `{x in Z^n : A x = 0}`.
pub fn integer_kernel(a: &[Vec<i64>]) -> Result<IntMatrix> {
    let n = a.first().map_or(0, Vec::len);
    if a.is_empty() {
        return Ok(identity(n));
    }
    let t = to_big(&transpose(a));
    let hnf = row_hnf(&t);
    from_big(&hnf.u[hnf.rank..])
}

/// Smith normal form `U * A * V = D` with `d_1 | d_2 | ...` non-negative.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub d: BigMatrix,
    pub u: BigMatrix,
    pub v: BigMatrix,
}

impl SmithForm {
    /// Diagonal entries `d_1, ..., d_min(m,n)` (zeros included).
    pub fn diagonal(&self) -> Vec<BigInt> {
        let k = self.d.len().min(self.d.first().map_or(0, Vec::len));
        (0..k).map(|i| self.d[i][i].clone()).collect()
    }
}

fn col_sub_mul(m: &mut [Vec<BigInt>], target: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        let s = row[src].clone();
        row[target] -= q * s;
    }
}

fn swap_cols(m: &mut [Vec<BigInt>], i: usize, j: usize) {
    for row in m.iter_mut() {
        row.swap(i, j);
    }
}

pub fn smith_normal_form(a: &[Vec<i64>]) -> SmithForm {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut d = to_big(a);
    let mut u = big_identity(m);
    let mut v = big_identity(n);
    for t in 0..m.min(n) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if d[i][j].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return SmithForm { d, u, v };
            };
            d.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut d, t, pj);
            swap_cols(&mut v, t, pj);

            let mut clean = true;
            for i in t + 1..m {
                let q = floor_div(&d[i][t], &d[t][t]);
                row_sub_mul(&mut d, i, t, &q);
                row_sub_mul(&mut u, i, t, &q);
                if !d[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                let q = floor_div(&d[t][j], &d[t][t]);
                col_sub_mul(&mut d, j, t, &q);
                col_sub_mul(&mut v, j, t, &q);
                if !d[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..m)
                .find(|&i| (t + 1..n).any(|j| !(&d[i][j] % &d[t][t]).is_zero()));
            match bad {
                Some(i) => {
                    // fold the offending row into the pivot row and retry
                    let minus_one = -BigInt::one();
                    row_sub_mul(&mut d, t, i, &minus_one);
                    row_sub_mul(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
    }
    SmithForm { d, u, v }
}

pub fn to_rational(m: &[Vec<i64>]) -> RatMatrix {
    m.iter()
        .map(|row| {
            row.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect()
        })
        .collect()
}

/// Inverse over the rationals by Gauss-Jordan elimination; `None` if singular.
pub fn rational_inverse(m: &[Vec<i64>]) -> Option<RatMatrix> {
    let n = m.len();
    let mut a = to_rational(m);
    let mut inv: RatMatrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        inv.swap(c, p);
        let piv = a[c][c].clone();
        for j in 0..n {
            a[c][j] = &a[c][j] / &piv;
            inv[c][j] = &inv[c][j] / &piv;
        }
        for i in 0..n {
            if i == c || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for j in 0..n {
                let x = &f * &a[c][j];
                a[i][j] -= x;
                let y = &f * &inv[c][j];
                inv[i][j] -= y;
            }
        }
    }
    Some(inv)
}

/// Inertia `(positive, negative, zero)` of a symmetric integer matrix, by
/// exact rational congruence diagonalization.
pub fn inertia(m: &[Vec<i64>]) -> (usize, usize, usize) {
    let n = m.len();
    let mut a = to_rational(m);
    let (mut pos, mut neg) = (0, 0);
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(i) = (k + 1..n).find(|&i| !a[i][i].is_zero()) {
                swap_sym(&mut a, k, i);
            } else if let Some((i, j)) = (k..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !a[i][j].is_zero())
            {
                // all remaining diagonal entries vanish: x_i <- x_i + x_j
                // turns the entry at (i, i) into 2 a_ij != 0
                add_sym(&mut a, i, j);
                swap_sym(&mut a, k, i);
            } else {
                break;
            }
        }
        let piv = a[k][k].clone();
        if piv.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for r in k + 1..n {
            if a[r][k].is_zero() {
                continue;
            }
            let f = &a[r][k] / &piv;
            for c in k..n {
                let x = &f * &a[k][c];
                a[r][c] -= x;
            }
            for c in k..n {
                let x = &f * &a[c][k];
                a[c][r] -= x;
            }
        }
    }
    (pos, neg, n - pos - neg)
}

fn swap_sym(a: &mut RatMatrix, i: usize, j: usize) {
    a.swap(i, j);
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

fn add_sym(a: &mut RatMatrix, i: usize, j: usize) {
    let n = a.len();
    for c in 0..n {
        let x = a[j][c].clone();
        a[i][c] += x;
    }
    for r in 0..n {
        let x = a[r][j].clone();
        a[r][i] += x;
    }
}

pub fn gcd_slice(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Integer square root of a non-negative big integer (floor).
pub fn isqrt_big(x: &BigInt) -> BigInt {
    x.sqrt()
}

/// Floor of the square root of a non-negative rational.
pub fn floor_sqrt_rational(x: &BigRational) -> BigInt {
    if !x.is_positive() {
        return BigInt::zero();
    }
    isqrt_big(&x.floor().to_integer())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(m: &[Vec<BigInt>]) -> IntMatrix {
        from_big(m).unwrap()
    }

    #[test]
    fn determinant_of_presets() {
        let s2 = vec![vec![36, 0, 0], vec![0, -2, 1], vec![0, 1, -2]];
        assert_eq!(determinant(&s2), BigInt::from(108));
        let l24 = vec![
            vec![2, 1, 1, 1],
            vec![1, -2, 0, 0],
            vec![1, 0, -2, 0],
            vec![1, 0, 0, -2],
        ];
        assert_eq!(determinant(&l24), BigInt::from(-28));
        let rows: Vec<&[i64]> = l24.iter().map(Vec::as_slice).collect();
        assert_eq!(small_determinant(&rows), BigInt::from(-28));
    }

    #[test]
    fn rank_of_zero_and_singular() {
        assert_eq!(exact_rank(&[vec![0, 0], vec![0, 0]]), 0);
        assert_eq!(exact_rank(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(exact_rank(&[vec![0, 1, 2], vec![0, 2, 4], vec![1, 0, 0]]), 2);
    }

    #[test]
    fn smith_form_diag_two() {
        let snf = smith_normal_form(&[vec![2, 0], vec![0, 2]]);
        assert_eq!(snf.diagonal(), vec![BigInt::from(2), BigInt::from(2)]);
    }

    #[test]
    fn smith_form_reconstructs() {
        let a = vec![vec![36, 0, 0], vec![0, -2, 1], vec![0, 1, -2]];
        let snf = smith_normal_form(&a);
        let u = big(&snf.u);
        let v = big(&snf.v);
        let uav = mat_mul(&mat_mul(&u, &a).unwrap(), &v).unwrap();
        assert_eq!(uav, big(&snf.d));
        let diag: Vec<i64> = snf.diagonal().iter().map(|x| x.to_i64().unwrap()).collect();
        assert_eq!(diag, vec![1, 3, 36]);
        assert_eq!(determinant(&u).abs(), BigInt::one());
        assert_eq!(determinant(&v).abs(), BigInt::one());
    }

    #[test]
    fn kernel_of_single_row() {
        let k = integer_kernel(&[vec![2, 4, 6]]).unwrap();
        assert_eq!(k.len(), 2);
        for row in &k {
            assert_eq!(2 * row[0] + 4 * row[1] + 6 * row[2], 0);
        }
        // saturated: the kernel lattice has index 1 in its rational span
        let snf = smith_normal_form(&k);
        assert!(snf.diagonal().iter().all(|d| d.is_one()));
    }

    #[test]
    fn inertia_handles_zero_diagonal() {
        assert_eq!(inertia(&[vec![0, 1], vec![1, 0]]), (1, 1, 0));
        assert_eq!(inertia(&[vec![2]]), (1, 0, 0));
        assert_eq!(
            inertia(&[vec![36, 0, 0], vec![0, -2, 1], vec![0, 1, -2]]),
            (1, 2, 0)
        );
        assert_eq!(inertia(&[vec![1, 1], vec![1, 1]]), (1, 0, 1));
        assert_eq!(
            inertia(&[vec![0, 0, 1], vec![0, 0, 0], vec![1, 0, 0]]),
            (1, 1, 1)
        );
    }

    #[test]
    fn inverse_round_trip() {
        let a = vec![vec![2, 1], vec![1, -2]];
        let inv = rational_inverse(&a).unwrap();
        let r = to_rational(&a);
        for i in 0..2 {
            for j in 0..2 {
                let s: BigRational = (0..2).map(|k| &r[i][k] * &inv[k][j]).sum();
                assert_eq!(s, BigRational::from_integer(BigInt::from(i64::from(i == j))));
            }
        }
        assert!(rational_inverse(&[vec![1, 2], vec![2, 4]]).is_none());
    }
}
