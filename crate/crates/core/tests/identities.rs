use colmez_core::chartable::CharacterTable;
use colmez_core::colmez::{
    class_multiset_of_borel, expected_borel_multiset, lemma_identities, reconstruct_ext, ColmezContext,
};
use colmez_core::{CmType, ConjClassLabel, Psl2};

#[test]
fn suite_through_q17() {
    for q in [3u32, 5, 7, 9, 11, 13, 17] {
        let report = lemma_identities(&Psl2::from_order(q).unwrap());
        assert!(report.all_passed(), "q={q}: {:?}", report.checks);
        assert_eq!(report.checks.len(), 7);
    }
}

#[test]
fn borel_split_classes_hold_two_q() {
    let g = Psl2::from_order(11).unwrap();
    let m = class_multiset_of_borel(&g);
    assert_eq!(m, expected_borel_multiset(&g));
    for (label, n) in &m.counts {
        if matches!(label, ConjClassLabel::Split(_)) {
            assert_eq!(*n, 22);
        }
    }
    assert_eq!(m.get(&ConjClassLabel::TraceZero), 0);
}

#[test]
fn decomposition_reconstructs() {
    for q in [5u32, 9, 11] {
        let g = Psl2::from_order(q).unwrap();
        let table = CharacterTable::new(&g).unwrap();
        let ctx = ColmezContext::new(&g);
        let phi = CmType::from_bit_string(q, &"1".repeat(3).chars().chain("0".repeat(q as usize - 2).chars()).collect::<String>()).unwrap();
        let coeffs = ctx.decompose_a_phi0(&table, &phi).unwrap();
        let (even, odd) = reconstruct_ext(&table, &coeffs);
        let a0 = ctx.a_phi0(&phi).unwrap();
        assert_eq!(even, a0.part(false).to_cyclo());
        assert_eq!(odd, a0.part(true).to_cyclo());
    }
}
