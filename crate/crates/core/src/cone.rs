//! `(-2)`-curves by the Vinberg sieve, nef and ample tests, vertices of the
//! fundamental chamber and the hyperbolic radius seen from the ample seed.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use crate::enumeration::ShimadaProjection;
use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, GramLattice};
use crate::linalg::{self, IntMatrix};

/// An ample seed with the complete list of `(-2)`-curves.
#[derive(Debug, Clone)]
pub struct CurveSystem {
    lattice: GramLattice,
    ample_seed: DivisorClass,
    curves: Vec<DivisorClass>,
    gram_of_curves: IntMatrix,
    sieved_degree: i64,
}

impl CurveSystem {
    /// Wraps an externally known curve list, checking the invariants. The
    /// list is taken as complete.
    pub fn from_curves(
        lattice: &GramLattice,
        ample_seed: &DivisorClass,
        curves: Vec<DivisorClass>,
    ) -> Result<Self> {
        let seed_square = lattice.square(ample_seed)?;
        if seed_square <= 0 {
            return Err(Error::NonPositiveSquare {
                class: ample_seed.coords().to_vec(),
                square: seed_square,
            });
        }
        for c in &curves {
            if lattice.square(c)? != -2 || lattice.bilinear(c, ample_seed)? <= 0 {
                return Err(Error::InvalidLattice(format!("{c} is not a (-2)-class of positive degree")));
            }
        }
        let gram_of_curves = lattice.gram_of(&curves)?;
        for (i, row) in gram_of_curves.iter().enumerate() {
            if row.iter().enumerate().any(|(j, &x)| i != j && x < 0) {
                return Err(Error::InvalidLattice("curves with negative intersection".into()));
            }
        }
        let sieved_degree = curves
            .iter()
            .map(|c| lattice.dot(c.coords(), ample_seed.coords()))
            .max()
            .unwrap_or(0);
        Ok(CurveSystem {
            lattice: lattice.clone(),
            ample_seed: ample_seed.clone(),
            curves,
            gram_of_curves,
            sieved_degree,
        })
    }

    pub fn lattice(&self) -> &GramLattice {
        &self.lattice
    }

    pub fn ample_seed(&self) -> &DivisorClass {
        &self.ample_seed
    }

    pub fn curves(&self) -> &[DivisorClass] {
        &self.curves
    }

    pub fn gram_of_curves(&self) -> &IntMatrix {
        &self.gram_of_curves
    }

    /// Every `(-2)`-class of degree at most this was examined by the sieve.
    pub fn sieved_degree(&self) -> i64 {
        self.sieved_degree
    }

    pub fn seed_square(&self) -> i64 {
        self.lattice.dot(self.ample_seed.coords(), self.ample_seed.coords())
    }

    /// Degree `H . D` against the ample seed.
    pub fn degree(&self, d: &DivisorClass) -> Result<i64> {
        self.lattice.bilinear(&self.ample_seed, d)
    }

    pub fn curve_degrees(&self) -> Vec<i64> {
        self.curves
            .iter()
            .map(|c| self.lattice.dot(c.coords(), self.ample_seed.coords()))
            .collect()
    }
}

/// `D . c >= 0` for every curve, `D^2 >= 0` and `D . H >= 0`.
pub fn is_nef(cs: &CurveSystem, d: &DivisorClass) -> Result<bool> {
    let lat = &cs.lattice;
    if lat.square(d)? < 0 || lat.bilinear(d, &cs.ample_seed)? < 0 {
        return Ok(false);
    }
    for c in &cs.curves {
        if lat.bilinear(d, c)? < 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `D^2 > 0`, `D . H > 0` and `D . c > 0` for every curve.
pub fn is_ample(cs: &CurveSystem, d: &DivisorClass) -> Result<bool> {
    let lat = &cs.lattice;
    if lat.square(d)? <= 0 || lat.bilinear(d, &cs.ample_seed)? <= 0 {
        return Ok(false);
    }
    for c in &cs.curves {
        if lat.bilinear(d, c)? <= 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `(D . D')^2 / (D^2 D'^2)`, the squared hyperbolic cosine of the distance
/// between the rays of two positive classes.
pub fn hyperbolic_ell(lat: &GramLattice, d: &DivisorClass, d2: &DivisorClass) -> Result<BigRational> {
    let s1 = lat.square(d)?;
    let s2 = lat.square(d2)?;
    for (v, s) in [(d, s1), (d2, s2)] {
        if s <= 0 {
            return Err(Error::NonPositiveSquare {
                class: v.coords().to_vec(),
                square: s,
            });
        }
    }
    let p = BigInt::from(lat.bilinear(d, d2)?);
    Ok(BigRational::new(&p * &p, BigInt::from(s1) * BigInt::from(s2)))
}

/// `arccosh(sqrt(ell))`, for display only.
pub fn distance_display(ell: &BigRational) -> f64 {
    let x = ell.to_f64().unwrap_or(f64::INFINITY);
    x.sqrt().acosh()
}

/// A vertex of the fundamental chamber.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChamberVertex {
    pub class: DivisorClass,
    pub square: i64,
    pub degree: i64,
    /// Indices of the curves orthogonal to the vertex.
    pub contracted: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct ChamberDescription {
    /// Sorted by coordinates.
    pub vertices: Vec<ChamberVertex>,
    /// `max (H.v)^2 / (H^2 v^2)` over the vertices.
    pub ell: BigRational,
    pub dmax_display: f64,
}

/// `k`-subsets of `0..n` in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Extreme rays of `{x : x . c >= 0 for all curves c}` when that cone is a
/// compact chamber inside the positive cone. `kmax` labels the failure.
fn polytope_vertices(
    lat: &GramLattice,
    seed: &DivisorClass,
    curves: &[DivisorClass],
    kmax: i64,
) -> Result<Vec<ChamberVertex>> {
    let rho = lat.rank();
    let incomplete = |reason: String| Error::IncompleteSieve { kmax, reason };
    let functionals: IntMatrix = curves
        .iter()
        .map(|c| lat.functional(c.coords()))
        .collect::<Result<_>>()?;
    if functionals.is_empty() || linalg::exact_rank(&functionals) < rho {
        return Err(incomplete(format!("{} curves do not span the lattice", curves.len())));
    }
    let mut vertices: Vec<ChamberVertex> = Vec::new();
    for subset in subsets(curves.len(), rho - 1) {
        let rows: IntMatrix = subset.iter().map(|&i| functionals[i].clone()).collect();
        let kernel = linalg::integer_kernel(&rows)?;
        if kernel.len() != 1 {
            continue;
        }
        let g = DivisorClass::new(kernel[0].clone());
        for x in [g.clone(), g.neg()] {
            let mut nef = true;
            for f in &functionals {
                let v: i128 = f.iter().zip(x.coords()).map(|(&a, &b)| i128::from(a) * i128::from(b)).sum();
                if v < 0 {
                    nef = false;
                    break;
                }
            }
            if !nef || vertices.iter().any(|v| v.class == x) {
                continue;
            }
            let square = lat.square(&x)?;
            let degree = lat.bilinear(&x, seed)?;
            if degree <= 0 || square < 0 {
                return Err(incomplete(format!(
                    "chamber candidate leaves the positive cone at {x} (square {square})"
                )));
            }
            if square == 0 {
                return Err(Error::NonCompactChamber {
                    vertex: x.into_coords(),
                    square,
                });
            }
            let contracted = (0..curves.len())
                .filter(|&i| lat.dot(curves[i].coords(), x.coords()) == 0)
                .collect();
            vertices.push(ChamberVertex {
                class: x,
                square,
                degree,
                contracted,
            });
        }
    }
    if vertices.is_empty() {
        return Err(incomplete("no chamber vertices".into()));
    }
    // every curve must support a facet
    for i in 0..curves.len() {
        let on_facet: IntMatrix = vertices
            .iter()
            .filter(|v| v.contracted.contains(&i))
            .map(|v| v.class.coords().to_vec())
            .collect();
        if on_facet.is_empty() || linalg::exact_rank(&on_facet) < rho - 1 {
            return Err(incomplete(format!("curve {} does not support a facet", curves[i])));
        }
    }
    vertices.sort_by(|a, b| a.class.cmp(&b.class));
    Ok(vertices)
}

fn ell_of(seed_square: i64, vertices: &[ChamberVertex]) -> BigRational {
    vertices
        .iter()
        .map(|v| {
            let k = BigInt::from(v.degree);
            BigRational::new(&k * &k, BigInt::from(seed_square) * BigInt::from(v.square))
        })
        .max()
        .unwrap_or_else(BigRational::one)
}

/// Largest degree a `(-2)`-curve outside the current candidate chamber could
/// have: a wall cutting off a vertex `v` is closer to `H` than `v`, so
/// `k^2 / (2 H^2) <= ell - 1`.
fn certificate_degree(seed_square: i64, ell: &BigRational) -> i64 {
    let bound = (ell - BigRational::one()) * BigRational::from_integer(BigInt::from(2 * seed_square));
    linalg::floor_sqrt_rational(&bound)
        .to_i64()
        .unwrap_or(i64::MAX)
}

/// Vinberg sieve: `(-2)`-classes of positive degree are processed in
/// ascending degree (canonical order within a degree) and `r` is accepted iff
/// `r . c >= 0` for every curve accepted before it.
///
/// After degree `kmax` the candidate chamber is checked for closure. If it is
/// compact, the sieve continues up to the degree bound implied by its radius,
/// which certifies that no curve was missed.
pub fn vinberg_sieve(lat: &GramLattice, seed: &DivisorClass, kmax: i64) -> Result<CurveSystem> {
    let projection = ShimadaProjection::new(lat, seed)?;
    if let Some(r) = projection.cell(-2, 0)?.classes.into_iter().next() {
        return Err(Error::WallDegenerate { class: r.into_coords() });
    }
    let seed_square = projection.seed_square();
    let mut curves: Vec<DivisorClass> = Vec::new();
    let mut processed = 0i64;
    let mut target = kmax.max(0);
    loop {
        let batches: Vec<Vec<DivisorClass>> = (processed + 1..=target)
            .into_par_iter()
            .map(|k| projection.cell(-2, k).map(|c| c.classes))
            .collect::<Result<_>>()?;
        for r in batches.into_iter().flatten() {
            if curves.iter().all(|c| lat.dot(r.coords(), c.coords()) >= 0) {
                curves.push(r);
            }
        }
        processed = processed.max(target);
        let vertices = polytope_vertices(lat, seed, &curves, processed)?;
        let ell = ell_of(seed_square, &vertices);
        let needed = certificate_degree(seed_square, &ell);
        if needed <= processed {
            break;
        }
        target = needed;
    }
    let gram_of_curves = lat.gram_of(&curves)?;
    Ok(CurveSystem {
        lattice: lat.clone(),
        ample_seed: seed.clone(),
        curves,
        gram_of_curves,
        sieved_degree: processed,
    })
}

/// Vertices of the fundamental chamber with squares, degrees against the
/// ample seed and the radius `ell`.
pub fn chamber_vertices(cs: &CurveSystem) -> Result<ChamberDescription> {
    let vertices = polytope_vertices(&cs.lattice, &cs.ample_seed, &cs.curves, cs.sieved_degree)?;
    let ell = ell_of(cs.seed_square(), &vertices);
    let dmax_display = distance_display(&ell);
    Ok(ChamberDescription {
        vertices,
        ell,
        dmax_display,
    })
}

/// Pairs `(i, j, m)` with `curve_i + curve_j = m D`, `m > 0`.
pub fn pair_relations(cs: &CurveSystem, d: &DivisorClass) -> Vec<(usize, usize, i64)> {
    let mut out = Vec::new();
    for i in 0..cs.curves.len() {
        for j in i + 1..cs.curves.len() {
            let sum = cs.curves[i].add(&cs.curves[j]);
            if let Some(m) = sum.multiple_of(d) {
                if m > 0 {
                    out.push((i, j, m));
                }
            }
        }
    }
    out
}
