//! The shipped templates of curve configurations and their known answers.

use super::MatrixTemplate;

#[derive(Debug, Clone)]
pub struct BuiltinSearch {
    pub template: MatrixTemplate,
    /// Expected parameter tuples, lexicographic.
    pub expected: Vec<Vec<i64>>,
    /// A label for each expected tuple (`M1`, `T3`, ...), empty when unnamed.
    pub labels: Vec<&'static str>,
}

const NAMES: [&str; 8] = ["S1", "S2", "S3", "S4", "S5", "S6", "L24", "L27"];

fn rows(r: &[&[&str]]) -> Vec<Vec<String>> {
    r.iter().map(|row| row.iter().map(|s| s.to_string()).collect()).collect()
}

fn doms(d: &[(&str, i64, i64)]) -> Vec<(String, i64, i64)> {
    d.iter().map(|&(n, lo, hi)| (n.to_string(), lo, hi)).collect()
}

fn strings(s: &[&str]) -> Vec<String> {
    s.iter().map(|x| x.to_string()).collect()
}

fn swap(n: usize, i: usize, j: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.swap(i, j);
    p
}

/// Two conics split in two and a third one cut by a pair of curves, all with
/// pairwise products summing to `s` per block.
fn pair_blocks(name: &str, off: &str, p: &str, s: i64, hi: i64) -> MatrixTemplate {
    let q = format!("{s}-{p}");
    let q = q.as_str();
    MatrixTemplate::new(
        name,
        &rows(&[
            &["-2", off, p, q],
            &[off, "-2", q, p],
            &[p, q, "-2", off],
            &[q, p, off, "-2"],
        ]),
        &doms(&[(p, 0, hi)]),
        &[],
        &strings(&[&format!("{p}<={}", hi / 2)]),
        3,
        vec![swap(4, 2, 3)],
    )
    .expect("builtin template")
}

/// The eight-curve configuration. `printed` keeps the `(4,8)` entry as
/// `2-v` instead of `v`.
pub fn l27_template(printed: bool) -> MatrixTemplate {
    let v48 = if printed { "2-v" } else { "v" };
    MatrixTemplate::new(
        "L27",
        &rows(&[
            &["-2", "6", "a", "4-a", "b", "4-b", "u", "2-u"],
            &["6", "-2", "4-a", "a", "4-b", "b", "2-u", "u"],
            &["a", "4-a", "-2", "6", "c", "4-c", "v", "2-v"],
            &["4-a", "a", "6", "-2", "4-c", "c", "2-v", v48],
            &["b", "4-b", "c", "4-c", "-2", "6", "w", "2-w"],
            &["4-b", "b", "4-c", "c", "6", "-2", "2-w", "w"],
            &["u", "2-u", "v", "2-v", "w", "2-w", "-2", "3"],
            &["2-u", "u", "2-v", v48, "2-w", "w", "3", "-2"],
        ]),
        &doms(&[("a", 0, 4), ("b", 0, 4), ("c", 0, 4), ("u", 0, 2), ("v", 0, 2), ("w", 0, 2)]),
        &[],
        &strings(&["a<=2", "b<=2", "u<=1"]),
        4,
        vec![swap(8, 2, 3), swap(8, 4, 5), swap(8, 6, 7)],
    )
    .expect("builtin template")
}

fn build(name: &str) -> Option<BuiltinSearch> {
    let (template, expected, labels): (MatrixTemplate, Vec<Vec<i64>>, Vec<&'static str>) = match name {
        "S1" => (
            MatrixTemplate::new(
                "S1",
                &rows(&[
                    &["-2", "6", "a", "4-a", "b", "4-b"],
                    &["6", "-2", "4-a", "a", "4-b", "b"],
                    &["a", "4-a", "-2", "6", "c", "4-c"],
                    &["4-a", "a", "6", "-2", "4-c", "c"],
                    &["b", "4-b", "c", "4-c", "-2", "6"],
                    &["4-b", "b", "4-c", "c", "6", "-2"],
                ]),
                &doms(&[("a", 0, 4), ("b", 0, 4), ("c", 0, 4)]),
                &[],
                &strings(&["a<=2", "b<=2"]),
                3,
                vec![swap(6, 2, 3), swap(6, 4, 5)],
            )
            .ok()?,
            vec![vec![0, 0, 4]],
            vec![""],
        ),
        "S2" => {
            let names = ["a1", "b1", "c1", "d1", "a2", "b2", "c2", "d2", "a3", "b3", "c3", "d3"];
            let domains: Vec<(&str, i64, i64)> = names.iter().map(|&n| (n, 0, 16)).collect();
            (
                MatrixTemplate::new(
                    "S2",
                    &rows(&[
                        &["-2", "10", "a1", "b1", "a2", "b2"],
                        &["10", "-2", "c1", "d1", "c2", "d2"],
                        &["a1", "c1", "-2", "10", "a3", "b3"],
                        &["b1", "d1", "10", "-2", "c3", "d3"],
                        &["a2", "c2", "a3", "c3", "-2", "10"],
                        &["b2", "d2", "b3", "d3", "10", "-2"],
                    ]),
                    &doms(&domains),
                    &strings(&["a1+b1+c1+d1==16", "a2+b2+c2+d2==16", "a3+b3+c3+d3==16"]),
                    &strings(&["a1<=b1", "a2<=b2"]),
                    3,
                    vec![swap(6, 2, 3), swap(6, 4, 5)],
                )
                .ok()?,
                vec![vec![1, 7, 7, 1, 1, 7, 7, 1, 7, 1, 1, 7]],
                vec![""],
            )
        }
        "S3" => (pair_blocks("S3", "4", "a", 2, 2), vec![vec![0], vec![1]], vec!["M2", "M1"]),
        "S4" => {
            // the second pair meets with 6, so build it by hand
            let t = MatrixTemplate::new(
                "S4",
                &rows(&[
                    &["-2", "3", "u", "2-u"],
                    &["3", "-2", "2-u", "u"],
                    &["u", "2-u", "-2", "6"],
                    &["2-u", "u", "6", "-2"],
                ]),
                &doms(&[("u", 0, 2)]),
                &[],
                &strings(&["u<=1"]),
                3,
                vec![swap(4, 2, 3)],
            )
            .ok()?;
            (t, vec![vec![0], vec![1]], vec!["M2", "M1"])
        }
        "S5" => (pair_blocks("S5", "3", "u", 1, 1), vec![vec![0]], vec![""]),
        "S6" => (
            MatrixTemplate::new(
                "S6",
                &rows(&[
                    &["-2", "6", "u", "6-u", "6-v", "v"],
                    &["6", "-2", "6-u", "u", "v", "6-v"],
                    &["u", "6-u", "-2", "11", "9-a", "a"],
                    &["6-u", "u", "11", "-2", "a", "9-a"],
                    &["6-v", "v", "9-a", "a", "-2", "11"],
                    &["v", "6-v", "a", "9-a", "11", "-2"],
                ]),
                &doms(&[("u", 0, 6), ("v", 0, 6), ("a", 0, 9)]),
                &[],
                &strings(&["u<=3", "v<=3"]),
                3,
                vec![swap(6, 2, 3), swap(6, 4, 5)],
            )
            .ok()?,
            vec![vec![1, 1, 9]],
            vec![""],
        ),
        "L24" => (
            MatrixTemplate::new(
                "L24",
                &rows(&[
                    &["-2", "3", "p", "1-p", "q", "1-q"],
                    &["3", "-2", "1-p", "p", "1-q", "q"],
                    &["p", "1-p", "-2", "3", "r", "1-r"],
                    &["1-p", "p", "3", "-2", "1-r", "r"],
                    &["q", "1-q", "r", "1-r", "-2", "3"],
                    &["1-q", "q", "1-r", "r", "3", "-2"],
                ]),
                &doms(&[("p", 0, 1), ("q", 0, 1), ("r", 0, 1)]),
                &[],
                &strings(&["p<=0", "q<=0"]),
                4,
                vec![swap(6, 2, 3), swap(6, 4, 5)],
            )
            .ok()?,
            vec![vec![0, 0, 0], vec![0, 0, 1]],
            vec!["M1", "M2"],
        ),
        "L27" => {
            let mut named: Vec<(Vec<i64>, &'static str)> = vec![
                (vec![0, 0, 4, 1, 1, 1], "T1"),
                (vec![0, 0, 4, 0, 1, 0], "T2"),
                (vec![0, 0, 4, 1, 2, 0], "T3"),
                (vec![0, 0, 4, 1, 0, 2], "T4"),
                (vec![0, 0, 4, 0, 0, 1], "T5"),
                (vec![2, 0, 4, 0, 2, 2], "T6"),
                (vec![0, 2, 4, 0, 2, 2], "T7"),
                (vec![0, 0, 2, 0, 2, 2], "T8"),
                (vec![0, 2, 0, 0, 2, 0], "T9"),
                (vec![2, 0, 0, 0, 0, 2], "T10"),
            ];
            named.sort();
            let (expected, labels) = named.into_iter().unzip();
            (l27_template(false), expected, labels)
        }
        _ => return None,
    };
    Some(BuiltinSearch {
        template,
        expected,
        labels,
    })
}

/// The shipped search with this name, case-insensitive.
pub fn builtin_search(name: &str) -> Option<BuiltinSearch> {
    let canonical = NAMES.iter().find(|n| n.eq_ignore_ascii_case(name))?;
    build(canonical)
}

/// All shipped searches in catalog order.
pub fn builtin_searches() -> Vec<(&'static str, BuiltinSearch)> {
    NAMES
        .iter()
        .map(|&n| (n, build(n).expect("builtin templates are valid")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classification::search_values;

    #[test]
    fn small_templates_give_expected() {
        for name in ["S1", "S3", "S4", "S5", "S6", "L24"] {
            let b = builtin_search(name).unwrap();
            let (found, _) = search_values(&b.template).unwrap();
            assert_eq!(found, b.expected, "{name}");
            assert_eq!(b.labels.len(), b.expected.len());
        }
    }

    #[test]
    fn lookup() {
        assert!(builtin_search("l27").is_some());
        assert!(builtin_search("S7").is_none());
        assert_eq!(builtin_searches().len(), 8);
    }
}
