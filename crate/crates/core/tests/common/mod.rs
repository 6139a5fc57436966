//! Shared test data and the box-scan oracle.
#![allow(dead_code)]

use std::collections::BTreeMap;

use k3scan_core::presets::{self, Preset};
use k3scan_core::series::degree_bound;
use k3scan_core::{chamber_vertices, vinberg_sieve, ChamberDescription, CurveSystem, DivisorClass, GramLattice};

/// Every class `x` with `0 <= H.x <= kmax` and `x^2 >= min_square`, bucketed
/// by `(square, degree)`.
///
/// Brute force over a coordinate box. `Q = 2 h h^T - H^2 G` with `h = G H` is
/// positive definite and `Q(x) = 2 (H.x)^2 - H^2 x^2`, so the box comes from
/// the diagonal of `Q^-1` in floating point, padded by one.
pub fn box_scan(
    lat: &GramLattice,
    seed: &DivisorClass,
    kmax: i64,
    min_square: i64,
) -> BTreeMap<(i64, i64), Vec<Vec<i64>>> {
    let g = lat.gram();
    let n = lat.rank();
    let h: Vec<i64> = (0..n).map(|i| (0..n).map(|j| g[i][j] * seed.coords()[j]).sum()).collect();
    let h2: i64 = h.iter().zip(seed.coords()).map(|(a, b)| a * b).sum();
    let q: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| (2 * h[i] * h[j] - h2 * g[i][j]) as f64).collect())
        .collect();
    let qinv = invert(&q);
    let c = (2 * kmax * kmax - h2 * min_square) as f64;
    let bounds: Vec<i64> = (0..n).map(|i| (c * qinv[i][i]).sqrt().floor() as i64 + 1).collect();

    let mut out: BTreeMap<(i64, i64), Vec<Vec<i64>>> = BTreeMap::new();
    let mut x: Vec<i64> = bounds.iter().map(|b| -b).collect();
    loop {
        let k: i64 = h.iter().zip(&x).map(|(a, b)| a * b).sum();
        if (0..=kmax).contains(&k) {
            let mut d = 0;
            for i in 0..n {
                for j in 0..n {
                    d += x[i] * g[i][j] * x[j];
                }
            }
            if d >= min_square {
                out.entry((d, k)).or_default().push(x.clone());
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                for v in out.values_mut() {
                    v.sort();
                }
                return out;
            }
            if x[i] < bounds[i] {
                x[i] += 1;
                break;
            }
            x[i] = -bounds[i];
            i += 1;
        }
    }
}

fn invert(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            row
        })
        .collect();
    for col in 0..n {
        let p = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        a.swap(col, p);
        let pivot = a[col][col];
        for v in a[col].iter_mut() {
            *v /= pivot;
        }
        for r in 0..n {
            if r != col {
                let f = a[r][col];
                let pivot_row = a[col].clone();
                for (v, pv) in a[r].iter_mut().zip(pivot_row) {
                    *v -= f * pv;
                }
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

pub fn main_preset(name: &str) -> (Preset, DivisorClass) {
    let p = presets::preset(name).unwrap();
    let seed = p.seed.clone().unwrap();
    (p, seed)
}

/// The curve system at the preset's default sieve degree, with its chamber.
pub fn sieved(name: &str) -> (CurveSystem, ChamberDescription) {
    let (p, seed) = main_preset(name);
    let cs = vinberg_sieve(&p.lattice, &seed, p.default_kmax).unwrap();
    let ch = chamber_vertices(&cs).unwrap();
    (cs, ch)
}

/// Intersection matrices of the curves as printed, in the printed order.
pub fn printed_curve_gram(name: &str) -> Vec<Vec<i64>> {
    let cyclic = |first: &[i64]| -> Vec<Vec<i64>> {
        let n = first.len();
        (0..n).map(|i| (0..n).map(|j| first[(j + n - i) % n]).collect()).collect()
    };
    match name {
        "S1" => cyclic(&[-2, 0, 4, 6, 4, 0]),
        "S2" => cyclic(&[-2, 1, 7, 10, 7, 1]),
        "S3" => vec![vec![-2, 1, 4, 1], vec![1, -2, 1, 4], vec![4, 1, -2, 1], vec![1, 4, 1, -2]],
        "S4" => vec![vec![-2, 1, 3, 1], vec![1, -2, 1, 6], vec![3, 1, -2, 1], vec![1, 6, 1, -2]],
        "S5" => vec![vec![-2, 1, 3, 0], vec![1, -2, 0, 3], vec![3, 0, -2, 1], vec![0, 3, 1, -2]],
        "S6" => vec![
            vec![-2, 6, 1, 5, 5, 1],
            vec![6, -2, 5, 1, 1, 5],
            vec![1, 5, -2, 11, 0, 9],
            vec![5, 1, 11, -2, 9, 0],
            vec![5, 1, 0, 9, -2, 11],
            vec![1, 5, 9, 0, 11, -2],
        ],
        "L24" => vec![
            vec![-2, 0, 0, 3, 1, 1],
            vec![0, -2, 0, 1, 3, 1],
            vec![0, 0, -2, 1, 1, 3],
            vec![3, 1, 1, -2, 0, 0],
            vec![1, 3, 1, 0, -2, 0],
            vec![1, 1, 3, 0, 0, -2],
        ],
        "L27" => vec![
            vec![-2, 3, 1, 1, 1, 1, 1, 1],
            vec![3, -2, 1, 1, 1, 1, 1, 1],
            vec![1, 1, -2, 6, 4, 0, 4, 0],
            vec![1, 1, 6, -2, 0, 4, 0, 4],
            vec![1, 1, 4, 0, -2, 6, 4, 0],
            vec![1, 1, 0, 4, 6, -2, 0, 4],
            vec![1, 1, 4, 0, 4, 0, -2, 6],
            vec![1, 1, 0, 4, 0, 4, 6, -2],
        ],
        _ => panic!("no printed matrix for {name}"),
    }
}

/// A permutation `p` with `a[p[i]][p[j]] == b[i][j]`, by backtracking.
pub fn permutation_to(a: &[Vec<i64>], b: &[Vec<i64>]) -> Option<Vec<usize>> {
    fn extend(a: &[Vec<i64>], b: &[Vec<i64>], p: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let i = p.len();
        if i == b.len() {
            return true;
        }
        for c in 0..a.len() {
            if used[c] || a[c][c] != b[i][i] || (0..i).any(|j| a[c][p[j]] != b[i][j]) {
                continue;
            }
            used[c] = true;
            p.push(c);
            if extend(a, b, p, used) {
                return true;
            }
            p.pop();
            used[c] = false;
        }
        false
    }
    if a.len() != b.len() {
        return None;
    }
    let mut p = Vec::new();
    let mut used = vec![false; a.len()];
    extend(a, b, &mut p, &mut used).then_some(p)
}

/// Chamber vertices as printed, in the preset basis.
pub fn printed_vertices(name: &str) -> Vec<Vec<i64>> {
    match name {
        // printed on the curves (A1, A2, A3) with A3 = L - 5A1 - 3A2
        "S2" => [[5, 3, 1], [13, -9, 5], [17, -21, 13], [13, -21, 17], [5, -9, 13], [1, 3, 5]]
            .iter()
            .map(|&[x, y, z]| vec![z, x - 5 * z, y - 3 * z])
            .collect(),
        "L27" => vec![
            vec![6, 3, 7, 2],
            vec![6, -27, 22, 17],
            vec![-6, -18, 23, 13],
            vec![6, 3, 2, 7],
            vec![6, -27, 17, 22],
            vec![-6, -18, 13, 23],
            vec![6, -12, 17, 7],
            vec![-6, -3, 13, 8],
            vec![-6, -33, 28, 23],
            vec![6, -12, 7, 17],
            vec![-6, -3, 8, 13],
            vec![-6, -33, 23, 28],
        ],
        _ => panic!("no printed vertices for {name}"),
    }
}

/// Whether `x` is nef against every curve of `cs`.
pub fn nef(cs: &CurveSystem, x: &[i64]) -> bool {
    let lat = cs.lattice();
    let d = DivisorClass::new(x.to_vec());
    cs.curves().iter().all(|c| lat.bilinear(c, &d).unwrap() >= 0)
}

pub fn gcd(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |a, &b| {
        let (mut a, mut b) = (a.abs(), b.abs());
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    })
}

/// Counts of (all, primitive) nef classes of square `d` by box scan, with
/// degrees scanned to twice the degree bound; asserts nothing nef lies
/// beyond the bound.
pub fn oracle_counts(name: &str, d: i64) -> (u64, u64) {
    let (p, seed) = main_preset(name);
    let (cs, ch) = sieved(name);
    let h2 = p.lattice.square(&seed).unwrap();
    let bound = degree_bound(h2, &ch.ell, d);
    let scan = box_scan(&p.lattice, &seed, 2 * bound, d);
    let (mut all, mut primitive) = (0, 0);
    for ((sq, k), classes) in scan {
        if sq != d {
            continue;
        }
        for x in classes.iter().filter(|x| nef(&cs, x)) {
            assert!(k <= bound, "{name}: nef class {x:?} of degree {k} beyond bound {bound}");
            all += 1;
            if gcd(x) == 1 {
                primitive += 1;
            }
        }
    }
    (all, primitive)
}
