use k3scan_core::classification::identify_type;
use k3scan_core::discriminant::*;
use k3scan_core::isometry::isometry_small;
use k3scan_core::presets::{catalog, preset};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

fn group(name: &str) -> DiscriminantGroup {
    discriminant_group(&preset(name).unwrap().lattice).unwrap()
}

#[test]
fn isotropic_counts() {
    for name in ["S1", "S3"] {
        assert!(group(name).isotropic_elements().is_empty(), "{name}");
    }
    let g = group("S2");
    let iso = g.isotropic_elements();
    assert_eq!(iso.len(), 1);
    let s2 = preset("S2").unwrap().lattice;
    let (over, _) = overlattice_from_isotropic(&s2, &iso[0]).unwrap();
    assert!(isometry_small(&over, &preset("S5").unwrap().lattice).is_some());
    assert_eq!(identify_type(&over), Some("S5"));
}

#[test]
fn l25_has_an_isotropic_element() {
    // v = (B2 + B3 + B5) / 3 pairs integrally with the lattice and v^2 = 0
    let l25 = preset("L25").unwrap().lattice;
    let g = group("L25");
    assert_eq!(g.invariant_factors, vec![3, 9]);
    let iso = g.isotropic_elements();
    assert_eq!(iso.len(), 1);
    let third = BigRational::new(1.into(), 3.into());
    let v = vec![BigRational::zero(), third.clone(), third.clone(), third];
    assert!(iso[0].lift == v || iso[0].lift == v.iter().map(|c| (c * BigRational::from_integer(2.into())).fract()).collect::<Vec<_>>());
    assert!(quadratic_value(l25.gram(), &v).is_zero());
    let (over, _) = overlattice_from_isotropic(&l25, &iso[0]).unwrap();
    assert_eq!(over.determinant(), BigInt::from(-3));
}

#[test]
fn group_order_is_the_determinant() {
    for p in catalog() {
        let g = discriminant_group(&p.lattice).unwrap();
        let product: i64 = g.invariant_factors.iter().product();
        assert_eq!(product as u64, p.lattice.abs_determinant(), "{}", p.name);
        assert_eq!(g.order() as u64, p.lattice.abs_determinant());
        for w in g.invariant_factors.windows(2) {
            assert_eq!(w[1] % w[0], 0);
        }
        assert_eq!(g.elements().len() as u64, p.lattice.abs_determinant());
    }
}

#[test]
fn q_does_not_depend_on_the_lift() {
    for p in catalog() {
        let g = discriminant_group(&p.lattice).unwrap();
        let gram = p.lattice.gram();
        for x in g.elements().into_iter().take(40) {
            for shift in [[1, 0, 0, 0], [0, -1, 2, 0], [3, 1, -1, 1]] {
                let moved: Vec<BigRational> = x
                    .lift
                    .iter()
                    .zip(shift)
                    .map(|(c, s)| c + BigRational::from_integer(BigInt::from(s)))
                    .collect();
                assert_eq!(q_mod_two(gram, &moved), x.q, "{}", p.name);
            }
            // the lift pairs integrally with the lattice
            for row in gram {
                let pairing: BigRational = row
                    .iter()
                    .zip(&x.lift)
                    .map(|(&g, c)| c * BigRational::from_integer(BigInt::from(g)))
                    .sum();
                assert!(pairing.is_integer());
            }
        }
    }
}

#[test]
fn overlattices_contain_the_lattice() {
    for p in catalog() {
        let g = discriminant_group(&p.lattice).unwrap();
        for x in g.all_isotropic_elements() {
            let (over, basis) = overlattice_from_isotropic(&p.lattice, &x).unwrap();
            assert_eq!(overlattice_index(&p.lattice, &over), Some(x.order as u64), "{}", p.name);
            assert_eq!(over.signature(), p.lattice.signature());
            for (i, row) in over.gram().iter().enumerate() {
                assert_eq!(row[i] % 2, 0);
            }
            // old basis vectors have integral coordinates in the new basis
            let inv = k3scan_core::linalg::rational_inverse(
                &basis
                    .iter()
                    .map(|r| r.iter().map(|c| (c * BigRational::from_integer(BigInt::from(x.order))).to_integer().try_into().unwrap()).collect())
                    .collect::<Vec<Vec<i64>>>(),
            )
            .unwrap();
            for row in inv {
                for c in row {
                    assert!((c * BigRational::from_integer(BigInt::from(x.order))).is_integer());
                }
            }
            assert!(!x.q.is_negative() && x.q.is_zero());
        }
    }
}
