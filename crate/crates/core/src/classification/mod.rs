//! Exhaustive searches over parametric intersection matrices of curve
//! configurations, filtered by exact rank, and identification of the
//! lattices they generate.

mod builtin;
pub mod expr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::Value;

use crate::discriminant::{discriminant_group, overlattice_from_isotropic};
use crate::error::{Error, Result};
use crate::isometry::isometry_small;
use crate::lattice::GramLattice;
use crate::linalg::{self, IntMatrix};
use crate::presets;

pub use builtin::{builtin_search, builtin_searches, l27_template, BuiltinSearch};
pub use expr::{parse_affine, parse_constraint, AffineExpr, Constraint, Relation};

/// `exact_rank` of an integer matrix over the rationals.
pub use crate::linalg::exact_rank;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parameter {
    pub name: String,
    pub lo: i64,
    pub hi: i64,
}

/// Affine expression with parameters resolved to indices.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Resolved {
    constant: i64,
    terms: Vec<(usize, i64)>,
    /// Number of leading parameters that determine the value.
    depth: usize,
}

impl Resolved {
    fn eval(&self, values: &[i64]) -> i64 {
        self.terms
            .iter()
            .fold(self.constant, |acc, &(p, c)| acc + c * values[p])
    }
}

fn resolve(e: &AffineExpr, params: &[Parameter]) -> Result<Resolved> {
    let mut terms = Vec::new();
    for (name, &c) in &e.terms {
        let idx = params
            .iter()
            .position(|p| &p.name == name)
            .ok_or_else(|| Error::Template(format!("unknown parameter {name:?}")))?;
        terms.push((idx, c));
    }
    terms.sort();
    let depth = terms.iter().map(|&(p, _)| p + 1).max().unwrap_or(0);
    Ok(Resolved {
        constant: e.constant,
        terms,
        depth,
    })
}

#[derive(Debug, Clone)]
struct ResolvedConstraint {
    expr: Resolved,
    relation: Relation,
}

/// A symmetric matrix whose entries are affine in bounded integer
/// parameters, with constraints, normalizations and a target rank.
#[derive(Debug, Clone)]
pub struct MatrixTemplate {
    pub name: String,
    pub size: usize,
    /// Parameters in search order.
    pub parameters: Vec<Parameter>,
    pub entries: Vec<Vec<AffineExpr>>,
    /// Conditions every solution satisfies.
    pub constraints: Vec<Constraint>,
    /// Conditions selecting representatives up to the symmetries.
    pub normalizations: Vec<Constraint>,
    pub target_rank: usize,
    /// Simultaneous row/column permutations preserving the template family.
    pub symmetries: Vec<Vec<usize>>,
    resolved_entries: Vec<Vec<Resolved>>,
    resolved_constraints: Vec<ResolvedConstraint>,
}

impl MatrixTemplate {
    pub fn new(
        name: &str,
        entries: &[Vec<String>],
        domains: &[(String, i64, i64)],
        constraints: &[String],
        normalizations: &[String],
        target_rank: usize,
        symmetries: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let size = entries.len();
        if size == 0 || entries.iter().any(|r| r.len() != size) {
            return Err(Error::Template("entries must form a non-empty square array".into()));
        }
        let mut parameters = Vec::new();
        for (n, lo, hi) in domains {
            if lo > hi {
                return Err(Error::Template(format!("empty domain for {n}")));
            }
            if parameters.iter().any(|p: &Parameter| &p.name == n) {
                return Err(Error::Template(format!("duplicate parameter {n}")));
            }
            parameters.push(Parameter {
                name: n.clone(),
                lo: *lo,
                hi: *hi,
            });
        }
        let entries: Vec<Vec<AffineExpr>> = entries
            .iter()
            .map(|r| r.iter().map(|s| parse_affine(s)).collect())
            .collect::<Result<_>>()?;
        for i in 0..size {
            for j in 0..i {
                if entries[i][j] != entries[j][i] {
                    return Err(Error::Template(format!(
                        "entries ({i},{j}) and ({j},{i}) differ: {} vs {}",
                        entries[i][j], entries[j][i]
                    )));
                }
            }
        }
        if target_rank > size {
            return Err(Error::Template("target rank exceeds size".into()));
        }
        for s in &symmetries {
            let mut sorted = s.clone();
            sorted.sort();
            if sorted != (0..size).collect::<Vec<_>>() {
                return Err(Error::Template(format!("{s:?} is not a permutation of 0..{size}")));
            }
        }
        let constraints: Vec<Constraint> = constraints.iter().map(|s| parse_constraint(s)).collect::<Result<_>>()?;
        let normalizations: Vec<Constraint> =
            normalizations.iter().map(|s| parse_constraint(s)).collect::<Result<_>>()?;
        let resolved_entries = entries
            .iter()
            .map(|r| r.iter().map(|e| resolve(e, &parameters)).collect())
            .collect::<Result<_>>()?;
        let resolved_constraints = constraints
            .iter()
            .chain(normalizations.iter())
            .map(|c| {
                Ok(ResolvedConstraint {
                    expr: resolve(&c.expr, &parameters)?,
                    relation: c.relation,
                })
            })
            .collect::<Result<_>>()?;
        Ok(MatrixTemplate {
            name: name.to_string(),
            size,
            parameters,
            entries,
            constraints,
            normalizations,
            target_rank,
            symmetries,
            resolved_entries,
            resolved_constraints,
        })
    }

    /// Parses the template JSON format
    /// `{"size", "entries", "domains", "normalize", "target_rank"}` with
    /// optional `"name"`, `"constraints"` and `"symmetries"`.
    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct File {
            #[serde(default)]
            name: Option<String>,
            size: usize,
            entries: Vec<Vec<Value>>,
            domains: serde_json::Map<String, Value>,
            #[serde(default)]
            normalize: Vec<String>,
            #[serde(default)]
            constraints: Vec<String>,
            target_rank: usize,
            #[serde(default)]
            symmetries: Vec<Vec<usize>>,
        }
        let f: File = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if f.entries.len() != f.size {
            return Err(Error::Template(format!(
                "size {} but {} rows of entries",
                f.size,
                f.entries.len()
            )));
        }
        let entries: Vec<Vec<String>> = f
            .entries
            .iter()
            .map(|r| {
                r.iter()
                    .map(|v| match v {
                        Value::String(s) => Ok(s.clone()),
                        Value::Number(n) if n.is_i64() => Ok(n.to_string()),
                        _ => Err(Error::Template(format!("bad entry {v}"))),
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        let domains: Vec<(String, i64, i64)> = f
            .domains
            .iter()
            .map(|(k, v)| {
                let pair = v
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .and_then(|a| Some((a[0].as_i64()?, a[1].as_i64()?)))
                    .ok_or_else(|| Error::Template(format!("domain of {k} must be [lo, hi]")))?;
                Ok((k.clone(), pair.0, pair.1))
            })
            .collect::<Result<_>>()?;
        MatrixTemplate::new(
            f.name.as_deref().unwrap_or("custom"),
            &entries,
            &domains,
            &f.constraints,
            &f.normalize,
            f.target_rank,
            f.symmetries,
        )
    }

    /// The same family with the normalizations dropped.
    pub fn without_normalizations(&self) -> MatrixTemplate {
        let text = |cs: &[Constraint]| cs.iter().map(|c| c.text.clone()).collect::<Vec<_>>();
        let entries: Vec<Vec<String>> = self.entries.iter().map(|r| r.iter().map(|e| e.to_string()).collect()).collect();
        let domains: Vec<(String, i64, i64)> = self.parameters.iter().map(|p| (p.name.clone(), p.lo, p.hi)).collect();
        MatrixTemplate::new(
            &self.name,
            &entries,
            &domains,
            &text(&self.constraints),
            &[],
            self.target_rank,
            self.symmetries.clone(),
        )
        .expect("a valid template stays valid without normalizations")
    }

    /// The matrix at the given parameter values.
    pub fn instantiate(&self, values: &[i64]) -> IntMatrix {
        self.resolved_entries
            .iter()
            .map(|r| r.iter().map(|e| e.eval(values)).collect())
            .collect()
    }

    /// Number of points in the full parameter box.
    pub fn raw_domain_size(&self) -> u128 {
        self.parameters
            .iter()
            .map(|p| (p.hi - p.lo + 1) as u128)
            .product()
    }
}

/// `k`-subsets of `0..n`, lexicographic.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Pruning data: checks that become decidable once `d` parameters are set.
struct Plan {
    minors: Vec<Vec<(Vec<usize>, Vec<usize>)>>,
    constraints: Vec<Vec<usize>>,
    /// Equality constraints that fix parameter `d` from earlier ones.
    forcing: Vec<Vec<usize>>,
}

fn plan(t: &MatrixTemplate) -> Plan {
    let np = t.parameters.len();
    let mut minors = vec![Vec::new(); np + 1];
    let k = t.target_rank + 1;
    if k <= t.size {
        let sets = subsets(t.size, k);
        for (a, rows) in sets.iter().enumerate() {
            for cols in &sets[a..] {
                let depth = rows
                    .iter()
                    .flat_map(|&i| cols.iter().map(move |&j| (i, j)))
                    .map(|(i, j)| t.resolved_entries[i][j].depth)
                    .max()
                    .unwrap_or(0);
                minors[depth].push((rows.clone(), cols.clone()));
            }
        }
    }
    let mut constraints = vec![Vec::new(); np + 1];
    let mut forcing = vec![Vec::new(); np];
    for (ci, c) in t.resolved_constraints.iter().enumerate() {
        constraints[c.expr.depth].push(ci);
        if c.relation == Relation::Eq && c.expr.depth > 0 {
            forcing[c.expr.depth - 1].push(ci);
        }
    }
    Plan {
        minors,
        constraints,
        forcing,
    }
}

fn minor_vanishes(m: &[Vec<i64>], rows: &[usize], cols: &[usize]) -> bool {
    let sub: Vec<Vec<i64>> = rows.iter().map(|&i| cols.iter().map(|&j| m[i][j]).collect()).collect();
    let refs: Vec<&[i64]> = sub.iter().map(|r| r.as_slice()).collect();
    linalg::small_determinant(&refs).is_zero()
}

struct Search<'a> {
    t: &'a MatrixTemplate,
    plan: &'a Plan,
}

impl Search<'_> {
    /// Checks everything decided by the first `d` parameters.
    fn admissible(&self, values: &[i64], d: usize) -> bool {
        for &ci in &self.plan.constraints[d] {
            let c = &self.t.resolved_constraints[ci];
            if !c.relation.holds(c.expr.eval(values)) {
                return false;
            }
        }
        if self.plan.minors[d].is_empty() {
            return true;
        }
        let m = self.t.instantiate(values);
        self.plan.minors[d]
            .iter()
            .all(|(r, c)| minor_vanishes(&m, r, c))
    }

    fn candidates(&self, values: &[i64], d: usize) -> Vec<i64> {
        let p = &self.t.parameters[d];
        for &ci in &self.plan.forcing[d] {
            let e = &self.t.resolved_constraints[ci].expr;
            let coef: i64 = e.terms.iter().filter(|&&(q, _)| q == d).map(|&(_, c)| c).sum();
            if coef == 0 {
                continue;
            }
            let rest: i64 = e
                .terms
                .iter()
                .filter(|&&(q, _)| q != d)
                .fold(e.constant, |acc, &(q, c)| acc + c * values[q]);
            if rest % coef != 0 {
                return Vec::new();
            }
            let v = -rest / coef;
            return if (p.lo..=p.hi).contains(&v) { vec![v] } else { Vec::new() };
        }
        (p.lo..=p.hi).collect()
    }

    fn descend(&self, values: &mut Vec<i64>, out: &mut Vec<Vec<i64>>, nodes: &mut u64) {
        *nodes += 1;
        let d = values.len();
        if d == self.t.parameters.len() {
            out.push(values.clone());
            return;
        }
        for v in self.candidates(values, d) {
            values.push(v);
            let mut padded = values.clone();
            padded.resize(self.t.parameters.len(), 0);
            if self.admissible(&padded, d + 1) {
                self.descend(values, out, nodes);
            }
            values.pop();
        }
    }
}

/// A solution of a template search.
#[derive(Debug, Clone)]
pub struct Solution {
    pub values: Vec<i64>,
    pub matrix: IntMatrix,
    pub rank: usize,
    /// Greedy rows with nonzero leading principal minors.
    pub basis_rows: Vec<usize>,
    pub basis_gram: IntMatrix,
    /// Gram matrix of the lattice generated by all rows, in an HNF basis
    /// relative to `basis_rows`.
    pub lattice_gram: IntMatrix,
    pub identified: Option<Identification>,
    /// Solutions share this number iff their generated lattices are
    /// isometric; numbered by first occurrence from 1.
    pub isometry_class: usize,
}

#[derive(Debug, Clone)]
pub struct ClassificationResult {
    pub template: String,
    pub parameters: Vec<String>,
    pub target_rank: usize,
    pub solutions: Vec<Solution>,
    /// Search-tree nodes visited.
    pub nodes: u64,
}

impl ClassificationResult {
    pub fn tuples(&self) -> Vec<Vec<i64>> {
        self.solutions.iter().map(|s| s.values.clone()).collect()
    }
}

/// Every parameter assignment satisfying the constraints and normalizations
/// whose matrix has rank at most the target rank, in lexicographic order.
///
/// Branches are cut when a fully determined `(r+1)`-minor is nonzero, which
/// is necessary for rank `<= r`, so the search stays exhaustive.
pub fn search_template(t: &MatrixTemplate) -> Result<ClassificationResult> {
    search_values(t).and_then(|(values, nodes)| {
        let mut solutions = values
            .into_par_iter()
            .map(|v| solution(t, v))
            .collect::<Result<Vec<_>>>()?;
        assign_isometry_classes(&mut solutions);
        Ok(ClassificationResult {
            template: t.name.clone(),
            parameters: t.parameters.iter().map(|p| p.name.clone()).collect(),
            target_rank: t.target_rank,
            solutions,
            nodes,
        })
    })
}

/// Parameter tuples only, without lattice data.
pub fn search_values(t: &MatrixTemplate) -> Result<(Vec<Vec<i64>>, u64)> {
    let plan = plan(t);
    let search = Search { t, plan: &plan };
    let np = t.parameters.len();
    if !search.admissible(&vec![0; np], 0) {
        return Ok((Vec::new(), 1));
    }
    if np == 0 {
        return Ok((vec![Vec::new()], 1));
    }
    let first = search.candidates(&[], 0);
    let parts: Vec<(Vec<Vec<i64>>, u64)> = first
        .into_par_iter()
        .map(|v| {
            let mut out = Vec::new();
            let mut nodes = 0u64;
            let mut padded = vec![0; np];
            padded[0] = v;
            if search.admissible(&padded, 1) {
                let mut values = vec![v];
                search.descend(&mut values, &mut out, &mut nodes);
            }
            (out, nodes)
        })
        .collect();
    let mut values = Vec::new();
    let mut nodes = 1;
    for (v, n) in parts {
        values.extend(v);
        nodes += n;
    }
    // final exact check
    values.retain(|v| linalg::exact_rank(&t.instantiate(v)) <= t.target_rank);
    Ok((values, nodes))
}

/// Greedy choice of rows whose principal minor stays nonzero.
pub fn greedy_basis(m: &[Vec<i64>]) -> Vec<usize> {
    let target = linalg::exact_rank(m);
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..m.len() {
        if chosen.len() == target {
            break;
        }
        let mut trial = chosen.clone();
        trial.push(i);
        let sub: Vec<Vec<i64>> = trial.iter().map(|&a| trial.iter().map(|&b| m[a][b]).collect()).collect();
        if !linalg::determinant(&sub).is_zero() {
            chosen = trial;
        }
    }
    chosen
}

/// Gram matrix of the lattice spanned by all rows of a Gram-type matrix,
/// in an HNF basis expressed over the greedy basis rows.
pub fn generated_lattice(m: &[Vec<i64>], basis: &[usize]) -> Result<IntMatrix> {
    let r = basis.len();
    if r == 0 {
        return Ok(Vec::new());
    }
    let g: IntMatrix = basis.iter().map(|&a| basis.iter().map(|&b| m[a][b]).collect()).collect();
    let inv = linalg::rational_inverse(&g).ok_or_else(|| Error::Template("singular basis".into()))?;
    let coords: Vec<Vec<BigRational>> = (0..m.len())
        .map(|j| {
            (0..r)
                .map(|a| {
                    (0..r)
                        .map(|b| &inv[a][b] * BigRational::from_integer(BigInt::from(m[basis[b]][j])))
                        .sum()
                })
                .collect()
        })
        .collect();
    let den = coords
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let rows: Vec<Vec<BigInt>> = coords
        .iter()
        .map(|v| v.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect())
        .collect();
    let hnf = linalg::row_hnf(&rows);
    let vecs: Vec<Vec<BigRational>> = hnf.h[..hnf.rank]
        .iter()
        .map(|row| row.iter().map(|c| BigRational::new(c.clone(), den.clone())).collect())
        .collect();
    let mut out = vec![vec![0i64; r]; r];
    for a in 0..r {
        for b in 0..r {
            let mut acc = BigRational::zero();
            for (i, gi) in g.iter().enumerate() {
                for (j, &gij) in gi.iter().enumerate() {
                    acc += &vecs[a][i] * &vecs[b][j] * BigRational::from_integer(BigInt::from(gij));
                }
            }
            if !acc.is_integer() {
                return Err(Error::Template("generated lattice is not integral".into()));
            }
            out[a][b] = acc.to_integer().to_i64().ok_or(Error::Overflow)?;
        }
    }
    Ok(out)
}

fn solution(t: &MatrixTemplate, values: Vec<i64>) -> Result<Solution> {
    let matrix = t.instantiate(&values);
    let rank = linalg::exact_rank(&matrix);
    let basis_rows = greedy_basis(&matrix);
    let basis_gram: IntMatrix = basis_rows
        .iter()
        .map(|&a| basis_rows.iter().map(|&b| matrix[a][b]).collect())
        .collect();
    let lattice_gram = generated_lattice(&matrix, &basis_rows)?;
    let identified = GramLattice::new_even(lattice_gram.clone(), Vec::new())
        .ok()
        .and_then(|l| identify_up_to_overlattice(&l));
    Ok(Solution {
        values,
        matrix,
        rank,
        basis_rows,
        basis_gram,
        lattice_gram,
        identified,
        isometry_class: 0,
    })
}

fn assign_isometry_classes(solutions: &mut [Solution]) {
    let lattices: Vec<Option<GramLattice>> = solutions
        .iter()
        .map(|s| GramLattice::new_even(s.lattice_gram.clone(), Vec::new()).ok())
        .collect();
    let mut reps: Vec<usize> = Vec::new();
    for i in 0..solutions.len() {
        let found = reps.iter().position(|&r| match (&lattices[r], &lattices[i]) {
            (Some(a), Some(b)) => isometry_small(a, b).is_some(),
            (None, None) => solutions[r].lattice_gram == solutions[i].lattice_gram,
            _ => false,
        });
        solutions[i].isometry_class = match found {
            Some(k) => k + 1,
            None => {
                reps.push(i);
                reps.len()
            }
        };
    }
}

/// A catalog name, reached from the given lattice through an even
/// overlattice of the stated index (1 for the lattice itself).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Identification {
    pub name: String,
    pub index: u64,
}

/// Catalog name of a lattice isometric to `g`, checking `(rank, det, SNF,
/// signature)` before searching for an isometry.
pub fn identify_type(g: &GramLattice) -> Option<&'static str> {
    if g.rank() > 4 {
        return None;
    }
    let det = g.determinant();
    let snf = linalg::smith_normal_form(g.gram()).diagonal();
    let sig = g.signature();
    presets::catalog().into_iter().find_map(|p| {
        let l = &p.lattice;
        let same = l.rank() == g.rank()
            && l.determinant() == det
            && l.signature() == sig
            && linalg::smith_normal_form(l.gram()).diagonal() == snf;
        (same && isometry_small(g, l).is_some()).then_some(p.name)
    })
}

/// [`identify_type`] on `g`, then on its even overlattices by increasing
/// index (two steps of adjoining isotropic elements at most).
pub fn identify_up_to_overlattice(g: &GramLattice) -> Option<Identification> {
    if let Some(name) = identify_type(g) {
        return Some(Identification {
            name: name.to_string(),
            index: 1,
        });
    }
    let mut layer: Vec<(GramLattice, u64)> = vec![(g.clone(), 1)];
    for _ in 0..2 {
        let mut next: Vec<(GramLattice, u64)> = Vec::new();
        for (l, index) in &layer {
            let Ok(group) = discriminant_group(l) else { continue };
            for x in group.isotropic_elements() {
                if let Ok((over, _)) = overlattice_from_isotropic(l, &x) {
                    next.push((over, index * x.order as u64));
                }
            }
        }
        next.sort_by_key(|(_, i)| *i);
        for (l, index) in &next {
            if let Some(name) = identify_type(l) {
                return Some(Identification {
                    name: name.to_string(),
                    index: *index,
                });
            }
        }
        layer = next;
    }
    None
}

/// Applies a simultaneous row/column permutation: `out[i][j] = m[p[i]][p[j]]`.
pub fn permute(m: &[Vec<i64>], p: &[usize]) -> IntMatrix {
    p.iter().map(|&i| p.iter().map(|&j| m[i][j]).collect()).collect()
}
