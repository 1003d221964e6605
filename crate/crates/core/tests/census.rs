mod common;

use colmez_core::cmtypes::{census, count_orbits_burnside, count_orbits_exhaustive, equivalent, stabilizer};
use colmez_core::{CmType, Fe, P1Point, Psl2};
use common::{orbit_count_union_find, PUBLISHED_CENSUS};
use num_traits::ToPrimitive;

#[test]
fn published_table() {
    for (q, row) in PUBLISHED_CENSUS {
        let g = Psl2::from_order(q).unwrap();
        let got: Vec<u64> = (1..=7).map(|e| count_orbits_burnside(&g, e).unwrap().to_u64().unwrap()).collect();
        assert_eq!(got, row, "q={q}");
    }
}

#[test]
fn burnside_against_union_find() {
    for q in [3u32, 5, 7, 9, 11] {
        let g = Psl2::from_order(q).unwrap();
        for e in 0..=q + 1 {
            let b = count_orbits_burnside(&g, e).unwrap().to_u64().unwrap();
            assert_eq!(b, orbit_count_union_find(&g, e), "q={q} e={e}");
            assert_eq!(b, count_orbits_exhaustive(&g, e).unwrap().orbits);
        }
    }
}

#[test]
fn census_row_shape() {
    let g = Psl2::from_order(9).unwrap();
    let row = census(&g, 10).unwrap();
    assert_eq!(row.counts.len(), 11);
    assert_eq!(row.counts[0].to_u64(), Some(1));
    assert_eq!(row.counts[10].to_u64(), Some(1));
    for e in 0..=10 {
        assert_eq!(row.counts[e], row.counts[10 - e]);
    }
    assert!(row.exhaustive_checked);
    assert!(row.middle_discrepancy());
    assert_eq!(row.middle_with_rho.unwrap().to_u64(), Some(2));
}

fn special_types(g: &Psl2) -> (CmType, CmType) {
    let f = g.field();
    let q = g.q();
    let base = [P1Point::Affine(Fe::ZERO), P1Point::Infinity];
    let one = P1Point::Affine(Fe::ONE);
    let delta = P1Point::Affine(f.inv(f.fixed_nonsquare()));
    (
        CmType::from_points(q, &[base[0], base[1], one]),
        CmType::from_points(q, &[base[0], base[1], delta]),
    )
}

#[test]
fn order_six_stabilizer() {
    for q in [5u32, 13, 17] {
        let g = Psl2::from_order(q).unwrap();
        let (a, b) = special_types(&g);
        assert_eq!(stabilizer(&g, &a).len(), 6, "q={q}");
        if q > 5 {
            assert!(!equivalent(&g, &a, &b, false), "q={q}");
        }
    }
    for q in [7u32, 11, 19] {
        let g = Psl2::from_order(q).unwrap();
        let (a, b) = special_types(&g);
        assert!(equivalent(&g, &a, &b, false), "q={q}");
    }
}
