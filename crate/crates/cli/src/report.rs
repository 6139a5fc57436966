//! JSON and text renderings of each command's result.

use std::fmt::Write;

use k3scan_core::classification::ClassificationResult;
use k3scan_core::cone::{chamber_vertices, pair_relations, ChamberDescription};
use k3scan_core::discriminant::{discriminant_group, fraction_string, overlattice_from_isotropic, ElementReport};
use k3scan_core::input::LatticeFile;
use k3scan_core::linalg;
use k3scan_core::series::{minimal_polarization, theta_series, xi_series, SeriesKind, SeriesTable};
use k3scan_core::{presets, CurveSystem, DivisorClass, Result};
use serde_json::{json, Map, Value};

use crate::Loaded;

/// Squares scanned for the minimal polarization.
const POLARIZATION_SCAN: i64 = 100;

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize")
}

/// `3L-4A1-2A2` in the lattice labels.
fn expression(labels: &[String], c: &DivisorClass) -> String {
    let mut s = String::new();
    for (x, l) in c.coords().iter().zip(labels) {
        if *x == 0 {
            continue;
        }
        let sign = if *x < 0 { "-" } else if s.is_empty() { "" } else { "+" };
        let mag = x.abs();
        if mag == 1 {
            let _ = write!(s, "{sign}{l}");
        } else {
            let _ = write!(s, "{sign}{mag}{l}");
        }
    }
    if s.is_empty() {
        "0".into()
    } else {
        s
    }
}

fn matrix_text(m: &[Vec<i64>]) -> String {
    let width = m.iter().flatten().map(|x| x.to_string().len()).max().unwrap_or(1);
    m.iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().map(|x| format!("{x:>width$}")).collect();
            format!("  [{}]", cells.join(" "))
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn header(loaded: &Loaded) -> Value {
    json!({
        "preset": loaded.name,
        "labels": loaded.lattice.labels(),
        "gram": loaded.lattice.gram(),
        "ample": loaded.seed.as_ref().map(|s| s.coords().to_vec()),
    })
}

fn source_line(loaded: &Loaded) -> String {
    match &loaded.name {
        Some(n) => format!("lattice {n}"),
        None => "lattice from file".into(),
    }
}

/// Integer relations `sum x_i C_i = 0` among the curves.
fn linear_relations(cs: &CurveSystem) -> Result<Vec<Vec<i64>>> {
    let rho = cs.lattice().rank();
    let transposed: Vec<Vec<i64>> = (0..rho)
        .map(|j| cs.curves().iter().map(|c| c.coords()[j]).collect())
        .collect();
    let mut rel: Vec<Vec<i64>> = linalg::integer_kernel(&transposed)?
        .into_iter()
        .map(|v| DivisorClass::new(v).sign_normalized().into_coords())
        .collect();
    rel.sort();
    Ok(rel)
}

pub fn curves(loaded: &Loaded, cs: &CurveSystem, json_out: bool) -> Result<String> {
    let labels = loaded.lattice.labels();
    let seed = cs.ample_seed();
    let degrees = cs.curve_degrees();
    let relations = linear_relations(cs)?;
    let pairs = pair_relations(cs, seed);
    let ch = chamber_vertices(cs)?;
    let minimal = minimal_polarization(cs, &ch, POLARIZATION_SCAN)?;
    if json_out {
        let curves: Vec<Value> = cs
            .curves()
            .iter()
            .zip(&degrees)
            .enumerate()
            .map(|(i, (c, k))| json!({"index": i + 1, "class": c.coords(), "degree": k}))
            .collect();
        let pairs: Vec<Value> = pairs
            .iter()
            .map(|&(i, j, m)| json!({"curves": [i + 1, j + 1], "multiple_of_seed": m}))
            .collect();
        let minimal = minimal.map(|(d, classes)| {
            json!({"square": d, "classes": classes.iter().map(|c| c.coords().to_vec()).collect::<Vec<_>>()})
        });
        return Ok(pretty(&json!({
            "lattice": header(loaded),
            "seed_square": cs.seed_square(),
            "sieved_degree": cs.sieved_degree(),
            "curves": curves,
            "gram_of_curves": cs.gram_of_curves(),
            "relations": relations,
            "pair_sums": pairs,
            "minimal_polarization": minimal,
            "minimal_polarization_scan": POLARIZATION_SCAN,
        })));
    }
    let mut s = String::new();
    let _ = writeln!(s, "{}, seed {} of square {}", source_line(loaded), expression(labels, seed), cs.seed_square());
    let _ = writeln!(s, "{} curves (sieved through degree {}):", cs.curves().len(), cs.sieved_degree());
    for (i, (c, k)) in cs.curves().iter().zip(&degrees).enumerate() {
        let _ = writeln!(s, "  C{} = {}  degree {k}", i + 1, expression(labels, c));
    }
    let _ = writeln!(s, "intersection matrix:\n{}", matrix_text(cs.gram_of_curves()));
    for r in &relations {
        let names: Vec<String> = (1..=r.len()).map(|i| format!("C{i}")).collect();
        let _ = writeln!(s, "relation: {} = 0", expression(&names, &DivisorClass::new(r.clone())));
    }
    for (i, j, m) in &pairs {
        let _ = writeln!(s, "C{} + C{} = {m} * seed", i + 1, j + 1);
    }
    match minimal {
        Some((d, classes)) => {
            let list: Vec<String> = classes.iter().map(|c| expression(labels, c)).collect();
            let _ = writeln!(s, "minimal polarization: square {d}: {}", list.join(", "));
        }
        None => {
            let _ = writeln!(s, "no big and nef class of square <= {POLARIZATION_SCAN}");
        }
    }
    Ok(s.trim_end().to_string())
}

fn chamber_value(ch: &ChamberDescription) -> Value {
    let vertices: Vec<Value> = ch
        .vertices
        .iter()
        .map(|v| {
            json!({
                "class": v.class.coords(),
                "square": v.square,
                "degree": v.degree,
                "contracted": v.contracted.iter().map(|i| i + 1).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "vertices": vertices,
        "ell": fraction_string(&ch.ell),
        "dmax": ch.dmax_display,
    })
}

pub fn chamber(loaded: &Loaded, cs: &CurveSystem, json_out: bool) -> Result<String> {
    let ch = chamber_vertices(cs)?;
    if json_out {
        let mut v = json!({"lattice": header(loaded), "curves": cs.curves().len()});
        if let (Value::Object(m), Value::Object(c)) = (&mut v, chamber_value(&ch)) {
            m.extend(c);
        }
        return Ok(pretty(&v));
    }
    let labels = loaded.lattice.labels();
    let mut s = String::new();
    let _ = writeln!(s, "{}, {} curves, {} vertices:", source_line(loaded), cs.curves().len(), ch.vertices.len());
    for v in &ch.vertices {
        let contracted: Vec<String> = v.contracted.iter().map(|i| format!("C{}", i + 1)).collect();
        let _ = writeln!(
            s,
            "  {:<24} square {:>4}  degree {:>4}  contracts {}",
            expression(labels, &v.class),
            v.square,
            v.degree,
            contracted.join(",")
        );
    }
    let _ = write!(s, "ell = {}, dmax = arccosh(sqrt(ell)) = {:.6}", fraction_string(&ch.ell), ch.dmax_display);
    Ok(s)
}

pub fn series_value(t: &SeriesTable) -> Value {
    let coefficients: Map<String, Value> = t
        .coefficients
        .iter()
        .filter(|(_, &c)| c != 0)
        .map(|(d, c)| (d.to_string(), json!(c)))
        .collect();
    json!({
        "kind": t.kind,
        "max_square": t.max_square,
        "coefficients": coefficients,
        "polynomial": t.polynomial(),
        "factored": t.factored(),
    })
}

pub fn series(loaded: &Loaded, cs: &CurveSystem, kind: SeriesKind, max_square: i64, json_out: bool) -> Result<String> {
    let ch = chamber_vertices(cs)?;
    let t = match kind {
        SeriesKind::Theta => theta_series(cs, &ch, max_square)?,
        SeriesKind::Xi => xi_series(cs, &ch, max_square)?,
    };
    if json_out {
        let mut v = json!({"lattice": header(loaded)});
        if let (Value::Object(m), Value::Object(c)) = (&mut v, series_value(&t)) {
            m.extend(c);
        }
        return Ok(pretty(&v));
    }
    let mut s = String::new();
    let _ = writeln!(s, "{}, {kind} through square {max_square}:", source_line(loaded));
    let _ = write!(s, "  {}", t.factored().unwrap_or_else(|| t.polynomial()));
    Ok(s)
}

pub fn disc(loaded: &Loaded, json_out: bool) -> Result<String> {
    let lat = &loaded.lattice;
    let group = discriminant_group(lat)?;
    let mut isotropic = Vec::new();
    for x in group.isotropic_elements() {
        let (over, _) = overlattice_from_isotropic(lat, &x)?;
        let identified = k3scan_core::classification::identify_type(&over);
        isotropic.push((ElementReport::from(&x), over, identified));
    }
    let det = lat.determinant();
    if json_out {
        let generators: Vec<Value> = group
            .generator_lifts
            .iter()
            .zip(&group.q_values)
            .zip(&group.invariant_factors)
            .map(|((lift, q), d)| {
                json!({
                    "order": d,
                    "lift": lift.iter().map(fraction_string).collect::<Vec<_>>(),
                    "q": fraction_string(q),
                })
            })
            .collect();
        let iso: Vec<Value> = isotropic
            .iter()
            .map(|(r, over, id)| {
                json!({
                    "coefficients": r.coefficients,
                    "lift": r.lift,
                    "order": r.order,
                    "q": r.q,
                    "overlattice": {
                        "gram": over.gram(),
                        "determinant": over.determinant().to_string(),
                        "index": r.order,
                        "identified": id,
                    },
                })
            })
            .collect();
        return Ok(pretty(&json!({
            "lattice": header(loaded),
            "determinant": det.to_string(),
            "order": group.order(),
            "invariant_factors": group.invariant_factors,
            "generators": generators,
            "isotropic_elements": iso,
        })));
    }
    let mut s = String::new();
    let _ = writeln!(s, "{}, determinant {det}", source_line(loaded));
    let factors: Vec<String> = group.invariant_factors.iter().map(|d| format!("Z/{d}")).collect();
    let _ = writeln!(
        s,
        "discriminant group: {}",
        if factors.is_empty() { "trivial".to_string() } else { factors.join(" + ") }
    );
    for ((lift, q), d) in group.generator_lifts.iter().zip(&group.q_values).zip(&group.invariant_factors) {
        let lift: Vec<String> = lift.iter().map(fraction_string).collect();
        let _ = writeln!(s, "  generator of order {d}: ({}), q = {}", lift.join(", "), fraction_string(q));
    }
    if isotropic.is_empty() {
        let _ = write!(s, "no nontrivial isotropic elements");
    }
    for (r, over, id) in &isotropic {
        let _ = writeln!(
            s,
            "isotropic ({}) of order {}: overlattice of determinant {}, {}",
            r.lift.join(", "),
            r.order,
            over.determinant(),
            id.map(|n| format!("isometric to {n}")).unwrap_or_else(|| "not in the catalog".into())
        );
        let _ = writeln!(s, "{}", matrix_text(over.gram()));
    }
    Ok(s.trim_end().to_string())
}

pub fn classify(r: &ClassificationResult, expected: Option<&[(Vec<i64>, &str)]>, json_out: bool) -> String {
    let label = |v: &[i64]| -> Option<&str> {
        expected?
            .iter()
            .find(|(t, l)| t.as_slice() == v && !l.is_empty())
            .map(|(_, l)| *l)
    };
    let matches = expected.map(|e| e.iter().map(|(t, _)| t.clone()).collect::<Vec<_>>() == r.tuples());
    if json_out {
        let solutions: Vec<Value> = r
            .solutions
            .iter()
            .map(|s| {
                let values: Map<String, Value> = r
                    .parameters
                    .iter()
                    .zip(&s.values)
                    .map(|(p, v)| (p.clone(), json!(v)))
                    .collect();
                json!({
                    "values": values,
                    "tuple": s.values,
                    "label": label(&s.values),
                    "rank": s.rank,
                    "matrix": s.matrix,
                    "basis_rows": s.basis_rows.iter().map(|i| i + 1).collect::<Vec<_>>(),
                    "basis_gram": s.basis_gram,
                    "lattice_gram": s.lattice_gram,
                    "identified": s.identified.as_ref().map(|i| json!({"name": i.name, "index": i.index})),
                    "isometry_class": s.isometry_class,
                })
            })
            .collect();
        return pretty(&json!({
            "template": r.template,
            "parameters": r.parameters,
            "target_rank": r.target_rank,
            "nodes": r.nodes,
            "solutions": solutions,
            "matches_expected": matches,
        }));
    }
    let mut s = String::new();
    let _ = writeln!(
        s,
        "template {}: {} solution(s) of rank <= {} over ({}), {} nodes",
        r.template,
        r.solutions.len(),
        r.target_rank,
        r.parameters.join(","),
        r.nodes
    );
    for sol in &r.solutions {
        let vals: Vec<String> = sol.values.iter().map(|v| v.to_string()).collect();
        let id = match &sol.identified {
            Some(i) if i.index == 1 => i.name.clone(),
            Some(i) => format!("index {} in {}", i.index, i.name),
            None => "unidentified".into(),
        };
        let tag = label(&sol.values).map(|l| format!("{l} ")).unwrap_or_default();
        let _ = writeln!(
            s,
            "  {tag}({}) rank {} generates {id}, isometry class {}",
            vals.join(","),
            sol.rank,
            sol.isometry_class
        );
        let _ = writeln!(s, "{}", matrix_text(&sol.matrix));
    }
    if let Some(m) = matches {
        let _ = write!(s, "expected solutions {}", if m { "reproduced" } else { "NOT reproduced" });
    }
    s.trim_end().to_string()
}

pub fn presets(json_out: bool) -> String {
    let entries: Vec<(presets::Preset, bool)> = presets::catalog()
        .into_iter()
        .map(|p| {
            let aux = presets::AUXILIARY.contains(&p.name);
            (p, aux)
        })
        .collect();
    if json_out {
        let v: Vec<Value> = entries
            .iter()
            .map(|(p, aux)| {
                json!({
                    "name": p.name,
                    "auxiliary": aux,
                    "determinant": p.lattice.determinant().to_string(),
                    "curves": p.expected_curves,
                    "ell": p.expected_ell.as_ref().map(fraction_string),
                    "lattice": LatticeFile::from(p),
                })
            })
            .collect();
        return pretty(&Value::Array(v));
    }
    let mut s = String::new();
    for (p, aux) in &entries {
        let seed = p
            .seed
            .as_ref()
            .map(|d| expression(p.lattice.labels(), d))
            .unwrap_or_else(|| "-".into());
        let _ = writeln!(
            s,
            "{:<5} rank {} det {:>4}  seed {}{}",
            p.name,
            p.lattice.rank(),
            p.lattice.determinant(),
            seed,
            if *aux { " (reference)" } else { "" }
        );
    }
    s.trim_end().to_string()
}
