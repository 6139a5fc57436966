use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use k3scan_core::classification::*;
use k3scan_core::isometry::isometry_small;
use k3scan_core::GramLattice;
use proptest::prelude::*;

fn eval(e: &AffineExpr, names: &[String], values: &[i64]) -> i64 {
    let at: BTreeMap<&str, i64> = names.iter().map(|s| s.as_str()).zip(values.iter().copied()).collect();
    e.terms.iter().fold(e.constant, |acc, (n, c)| acc + c * at[n.as_str()])
}

fn admissible(t: &MatrixTemplate, values: &[i64]) -> bool {
    let names: Vec<String> = t.parameters.iter().map(|p| p.name.clone()).collect();
    t.constraints
        .iter()
        .chain(&t.normalizations)
        .all(|c| c.relation.holds(eval(&c.expr, &names, values)))
}

/// Every point of the parameter box, lexicographic.
fn all_points(t: &MatrixTemplate) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for p in &t.parameters {
        out = out
            .into_iter()
            .flat_map(|v: Vec<i64>| {
                (p.lo..=p.hi).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

#[test]
fn builtin_searches_find_the_expected_tuples() {
    for (name, b) in builtin_searches() {
        let r = search_template(&b.template).unwrap();
        assert_eq!(r.tuples(), b.expected, "{name}");
        for s in &r.solutions {
            assert!(s.rank <= b.template.target_rank);
            assert_eq!(s.rank, exact_rank(&s.matrix));
        }
    }
}

#[test]
fn searches_agree_with_brute_force() {
    for (name, b) in builtin_searches() {
        let t = &b.template;
        if t.raw_domain_size() > 100_000 {
            continue;
        }
        for tpl in [t.clone(), t.without_normalizations()] {
            let brute: Vec<Vec<i64>> = all_points(&tpl)
                .into_iter()
                .filter(|v| admissible(&tpl, v) && exact_rank(&tpl.instantiate(v)) <= tpl.target_rank)
                .collect();
            assert_eq!(search_values(&tpl).unwrap().0, brute, "{name}");
        }
    }
}

/// Closure of a set of matrices under the template symmetries.
fn orbit(mats: &[Vec<Vec<i64>>], symmetries: &[Vec<usize>]) -> BTreeSet<Vec<Vec<i64>>> {
    let mut seen: BTreeSet<Vec<Vec<i64>>> = mats.iter().cloned().collect();
    let mut todo: Vec<Vec<Vec<i64>>> = mats.to_vec();
    while let Some(m) = todo.pop() {
        for p in symmetries {
            let q = permute(&m, p);
            if seen.insert(q.clone()) {
                todo.push(q);
            }
        }
    }
    seen
}

#[test]
fn normalized_solutions_generate_all_solutions() {
    for (name, b) in builtin_searches() {
        let t = &b.template;
        let normalized: Vec<Vec<Vec<i64>>> = search_values(t).unwrap().0.iter().map(|v| t.instantiate(v)).collect();
        let free = t.without_normalizations();
        let all: BTreeSet<Vec<Vec<i64>>> = search_values(&free).unwrap().0.iter().map(|v| free.instantiate(v)).collect();
        assert_eq!(orbit(&normalized, &t.symmetries), all, "{name}");
    }
}

#[test]
fn identified_types() {
    let ident = |name: &str| -> Vec<String> {
        let r = search_template(&builtin_search(name).unwrap().template).unwrap();
        r.solutions
            .iter()
            .map(|s| s.identified.as_ref().map(|i| i.name.to_string()).unwrap_or_default())
            .collect()
    };
    assert_eq!(ident("S1"), ["S1"]);
    assert_eq!(ident("S2"), ["S2"]);
    assert_eq!(ident("S3"), ["S114", "S3"]);
    assert_eq!(ident("S4"), ["S113", "S4"]);
    assert_eq!(ident("S5"), ["S5"]);
    assert_eq!(ident("S6"), ["S6"]);
    assert_eq!(ident("L24"), ["L24", "L25"]);
}

#[test]
fn l27_isometry_groups() {
    let b = builtin_search("L27").unwrap();
    let r = search_template(&b.template).unwrap();
    let class: BTreeMap<&str, usize> = b.labels.iter().copied().zip(r.solutions.iter().map(|s| s.isometry_class)).collect();
    let lattice = |label: &str| {
        let i = b.labels.iter().position(|l| *l == label).unwrap();
        GramLattice::new(r.solutions[i].lattice_gram.clone(), vec![]).unwrap()
    };
    for group in [["T2", "T3", "T4", "T5"].as_slice(), &["T6", "T7", "T8", "T9", "T10"]] {
        for l in group {
            assert_eq!(class[l], class[group[0]], "{l}");
            assert!(isometry_small(&lattice(group[0]), &lattice(l)).is_some(), "{l}");
        }
    }
    assert_ne!(class["T1"], class["T2"]);
    assert_ne!(class["T2"], class["T6"]);
    assert_ne!(class["T1"], class["T6"]);
    let t1 = r.solutions[b.labels.iter().position(|l| *l == "T1").unwrap()].identified.clone().unwrap();
    assert_eq!(t1.name, "L27");
    assert_eq!(lattice("T2").determinant(), (-52).into());
    assert_eq!(lattice("T6").determinant(), (-4).into());
}

#[test]
fn printed_l27_template_finds_two() {
    let printed = search_values(&l27_template(true)).unwrap().0;
    assert_eq!(printed, vec![vec![0, 0, 4, 0, 1, 0], vec![0, 0, 4, 1, 1, 1]]);
}

fn s2_unnormalized() -> &'static (MatrixTemplate, Vec<Vec<i64>>) {
    static CELL: OnceLock<(MatrixTemplate, Vec<Vec<i64>>)> = OnceLock::new();
    CELL.get_or_init(|| {
        let t = builtin_search("S2").unwrap().template.without_normalizations();
        let all = search_values(&t).unwrap().0;
        (t, all)
    })
}

fn s2_row() -> impl Strategy<Value = Vec<i64>> {
    (0..=16i64, 0..=16i64, 0..=16i64).prop_filter_map("row sum", |(a, b, c)| {
        let d = 16 - a - b - c;
        (0..=16).contains(&d).then(|| vec![a, b, c, d])
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn s2_non_solutions_have_rank_four(r1 in s2_row(), r2 in s2_row(), r3 in s2_row()) {
        let (t, all) = s2_unnormalized();
        let values: Vec<i64> = [r1, r2, r3].concat();
        let rank = exact_rank(&t.instantiate(&values));
        prop_assert_eq!(rank <= 3, all.contains(&values));
    }
}
