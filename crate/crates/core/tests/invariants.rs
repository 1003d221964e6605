use colmez_core::cmtypes::act;
use colmez_core::colmez::ColmezContext;
use colmez_core::cyclotomic::rational;
use colmez_core::heights::{height_coefficients, Symbol};
use colmez_core::{CmType, CycloNumber, Field, Psl2};
use proptest::prelude::*;

fn orders() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![3u32, 5, 7, 9, 11, 13, 25, 27])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_distributive(q in orders(), a in 0u32..1000, b in 0u32..1000, c in 0u32..1000) {
        let f = Field::from_order(q).unwrap();
        let (a, b, c) = (f.element(a % q).unwrap(), f.element(b % q).unwrap(), f.element(c % q).unwrap());
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a)), colmez_core::Fe::ONE);
        }
    }

    #[test]
    fn cyclotomic_ring_laws(m in prop::sample::select(vec![3u32, 4, 5, 7, 8, 12, 15, 21]), j in -50i64..50, k in -50i64..50) {
        let x = CycloNumber::zeta(m, j) + CycloNumber::from_integer(2);
        let y = CycloNumber::zeta(m, k);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(CycloNumber::zeta(m, j) * CycloNumber::zeta(m, k), CycloNumber::zeta(m, j + k));
        let inv = x.invert().unwrap();
        prop_assert_eq!(&x * &inv, CycloNumber::one());
    }

    #[test]
    fn a_phi0_is_class_invariant(mask in 0u64..256, idx in 0usize..168) {
        let g = Psl2::from_order(7).unwrap();
        let ctx = ColmezContext::new(&g);
        let phi = CmType::new(7, (0..8).map(|i| mask >> i & 1 == 1).collect()).unwrap();
        let x = g.elements()[idx];
        prop_assert_eq!(ctx.a_phi0(&act(&g, &x, &phi)).unwrap(), ctx.a_phi0(&phi).unwrap());
    }

    #[test]
    fn heights_linear(q in orders(), e in 0u32..8, n in 1i64..20, d in 1i64..20) {
        let e = e.min(q + 1);
        let h = height_coefficients(q, e).unwrap();
        let r = rational(n, d);
        let scaled = h.scale(&r);
        for s in Symbol::ALL {
            prop_assert_eq!(scaled.coefficient(s), h.coefficient(s) * &r);
        }
        let doubled = h.add(&h);
        prop_assert!(doubled.same_coefficients(&h.scale(&rational(2, 1))));
        prop_assert_eq!(h, height_coefficients(q, q + 1 - e).unwrap());
    }
}
