mod common;

use common::{main_preset, permutation_to, printed_curve_gram, sieved};
use k3scan_core::cone::pair_relations;
use k3scan_core::linalg::exact_rank;
use k3scan_core::presets::MAIN;
use k3scan_core::series::minimal_polarization;
use k3scan_core::{vinberg_sieve, DivisorClass};

#[test]
fn curve_counts_and_printed_matrices() {
    for name in MAIN {
        let (p, _) = main_preset(name);
        let (cs, _) = sieved(name);
        assert_eq!(Some(cs.curves().len()), p.expected_curves, "{name}");
        let printed = printed_curve_gram(name);
        assert!(
            permutation_to(cs.gram_of_curves(), &printed).is_some(),
            "{name}: {:?}",
            cs.gram_of_curves()
        );
    }
}

#[test]
fn sieve_does_not_depend_on_the_starting_degree() {
    for name in MAIN {
        let (p, seed) = main_preset(name);
        let base = sieved(name).0;
        for k in [p.default_kmax + 1, 2 * p.default_kmax, 12] {
            let other = vinberg_sieve(&p.lattice, &seed, k).unwrap();
            assert_eq!(other.curves(), base.curves(), "{name} kmax {k}");
        }
    }
}

#[test]
fn curves_are_roots_of_positive_degree() {
    for name in MAIN {
        let (cs, _) = sieved(name);
        for c in cs.curves() {
            assert_eq!(cs.lattice().square(c).unwrap(), -2);
            assert!(cs.degree(c).unwrap() > 0);
        }
        let g = cs.gram_of_curves();
        for (i, row) in g.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                if i != j {
                    assert!(x >= 0, "{name}: distinct curves meet negatively");
                }
            }
        }
    }
}

fn polarization(name: &str) -> (i64, Vec<DivisorClass>) {
    let (cs, ch) = sieved(name);
    minimal_polarization(&cs, &ch, 100).unwrap().unwrap()
}

#[test]
fn minimal_polarizations_are_unique() {
    for (name, square) in [("S1", 2), ("S2", 4), ("S3", 4), ("S4", 2), ("S5", 2), ("S6", 2), ("L24", 2), ("L27", 2)] {
        let (d, classes) = polarization(name);
        assert_eq!(d, square, "{name}");
        assert_eq!(classes.len(), 1, "{name}: {classes:?}");
        let (cs, _) = sieved(name);
        assert!(k3scan_core::is_ample(&cs, &classes[0]).unwrap(), "{name}");
    }
}

/// Multiplicities `m` of the disjoint pairs with `C_i + C_j = m D`.
fn pair_multiples(name: &str) -> Vec<i64> {
    let (cs, _) = sieved(name);
    let (_, d) = polarization(name);
    let mut m: Vec<i64> = pair_relations(&cs, &d[0]).into_iter().map(|(_, _, m)| m).collect();
    m.sort();
    m
}

#[test]
fn linear_relations() {
    assert_eq!(pair_multiples("S1"), vec![2, 2, 2]);
    assert_eq!(pair_multiples("S3"), vec![1, 1]);
    assert_eq!(pair_multiples("S6"), vec![2, 3, 3]);
    assert_eq!(pair_multiples("L24"), vec![1, 1, 1]);
    assert_eq!(pair_multiples("L27"), vec![1, 2, 2, 2]);
    // the pairs use each curve once
    for name in ["S1", "S3", "S6", "L24", "L27"] {
        let (cs, _) = sieved(name);
        let (_, d) = polarization(name);
        let mut used: Vec<usize> = pair_relations(&cs, &d[0]).into_iter().flat_map(|(i, j, _)| [i, j]).collect();
        used.sort();
        used.dedup();
        assert_eq!(used.len(), 2 * pair_relations(&cs, &d[0]).len(), "{name}");
    }
}

#[test]
fn l24_pairs_sum_to_the_seed() {
    let (cs, _) = sieved("L24");
    let seed = cs.ample_seed().clone();
    assert_eq!(pair_relations(&cs, &seed).len(), 3);
}

#[test]
fn curves_span_the_lattice_rationally() {
    for name in MAIN {
        let (cs, _) = sieved(name);
        let rows: Vec<Vec<i64>> = cs.curves().iter().map(|c| c.coords().to_vec()).collect();
        assert_eq!(exact_rank(&rows), cs.lattice().rank(), "{name}");
    }
}
