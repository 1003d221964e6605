mod common;

use colmez_core::cmtypes::act;
use colmez_core::colmez::{a_phi, ColmezContext, ExtClassFunction, SamplingPolicy};
use colmez_core::cyclotomic::rational;
use colmez_core::{CmType, ConjClassLabel, Psl2};
use common::cm_type_from_mask;

#[test]
fn exhaustive_small_q() {
    for q in [3u32, 5, 7, 9] {
        let ctx = ColmezContext::new(&Psl2::from_order(q).unwrap());
        let report = ctx.verify_theorem61(SamplingPolicy::Exhaustive, 1).unwrap();
        assert_eq!(report.tested, 1 << (q + 1));
        assert!(report.all_passed(), "q={q}: {:?}", report.failures);
        assert!(report.flagged.is_empty(), "{:?}", report.flagged);
    }
}

#[test]
fn sampled_q13_is_seed_deterministic() {
    let ctx = ColmezContext::new(&Psl2::from_order(13).unwrap());
    let policy = SamplingPolicy::Random { samples: 300, seed: 42 };
    let a = ctx.verify_theorem61(policy, 1).unwrap();
    assert!(a.all_passed());
    assert_eq!(policy.cm_types(13).unwrap(), policy.cm_types(13).unwrap());
}

#[test]
fn direct_path_at_q11() {
    let ctx = ColmezContext::new(&Psl2::from_order(11).unwrap());
    for mask in [0u64, 0b1, 0b1011_0000_0110, 0b1111_1111_1111, 0b0101_0101_0101] {
        let phi = cm_type_from_mask(11, mask);
        assert_eq!(ctx.a_phi0(&phi).unwrap(), ctx.a_phi0_direct(&phi).unwrap());
    }
}

#[test]
fn group_ring_mass() {
    // Coefficients of A_Φ sum to |Φ^c|² / [E^c : Q].
    let g = Psl2::from_order(5).unwrap();
    let phi = CmType::from_bit_string(5, "100110").unwrap();
    let a = a_phi(&g, &phi);
    let total: colmez_core::Rational = a.terms().map(|(_, c)| c.clone()).sum();
    assert_eq!(total, rational(60 * 60, 120));
}

#[test]
fn complement_and_translate_invariance() {
    let g = Psl2::from_order(7).unwrap();
    let ctx = ColmezContext::new(&g);
    let x = g.elements()[77];
    for mask in 0u64..256 {
        let phi = cm_type_from_mask(7, mask);
        let v = ctx.a_phi0(&phi).unwrap();
        assert_eq!(v, ctx.a_phi0(&phi.complement()).unwrap());
        assert_eq!(v, ctx.a_phi0(&act(&g, &x, &phi)).unwrap());
    }
}

#[test]
fn closed_form_values_q7() {
    let g = Psl2::from_order(7).unwrap();
    let ctx = ColmezContext::new(&g);
    let rhs = ctx.theorem61_rhs(3).unwrap();
    let id = g.class_index(&ConjClassLabel::Identity).unwrap();
    // c = 15/56, c' = 15/448, eight fixed points on P¹(F_7).
    assert_eq!(rhs.get(id, false), &(rational(1, 2) - rational(15, 56) + rational(120, 448)));
    assert_eq!(rhs.get(id, true), &(rational(15, 56) - rational(120, 448)));
    assert_eq!(
        ctx.theorem61_rhs(0).unwrap(),
        ExtClassFunction::trace_indicator(g.class_count()).scale(&rational(1, 2))
    );
    assert!(ctx.theorem61_rhs(9).is_err());
}

#[test]
fn wrong_length_rejected() {
    let ctx = ColmezContext::new(&Psl2::from_order(5).unwrap());
    assert!(ctx.a_phi0(&CmType::zeros(7)).is_err());
}
