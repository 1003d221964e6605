mod common;

use colmez_core::cyclotomic::rational;
use colmez_core::heights::{
    average_height_check, kronecker, l_deriv_at_0, l_value_at_0, z0, z0_zeta_q, QuadraticCharacter, Symbol,
};
use common::{class_number, fundamental_discriminants, kronecker_oracle, l_deriv_numeric, l_series, unit_count};

#[test]
fn class_number_formula() {
    let ds = fundamental_discriminants(-200);
    assert!(ds.contains(&-3) && ds.contains(&-199) && !ds.contains(&-12));
    for d in ds {
        let chi = QuadraticCharacter::new(d).unwrap();
        let l0 = l_value_at_0(&chi).unwrap();
        assert_eq!(l0, rational(2 * class_number(d) as i64, unit_count(d) as i64), "d={d}");
    }
}

#[test]
fn kronecker_matches_oracle() {
    for d in fundamental_discriminants(-120) {
        for a in 1..300 {
            assert_eq!(kronecker(d, a), kronecker_oracle(d, a), "d={d} a={a}");
        }
    }
}

#[test]
fn derivative_two_ways() {
    for d in [-3i64, -4, -7, -8, -11, -15, -20] {
        let chi = QuadraticCharacter::new(d).unwrap();
        let exact = l_deriv_at_0(&chi).unwrap();
        let numeric = l_deriv_numeric(d);
        assert!((exact - numeric).abs() < 1e-8, "d={d}: {exact} vs {numeric}");
        let l0 = l_value_at_0(&chi).unwrap();
        let l0f = colmez_core::heights::rational_to_f64(&l0);
        assert!((l_series(d, 0.0) - l0f).abs() < 1e-12);
        let z = z0(&chi).unwrap();
        assert!((z - (numeric / l0f + 0.5 * (d.abs() as f64).ln())).abs() < 1e-7);
    }
}

#[test]
fn log_two_pi() {
    assert!((z0_zeta_q() - (2.0 * std::f64::consts::PI).ln()).abs() < 1e-12);
}

#[test]
fn averages_through_q31() {
    for q in [3u32, 5, 7, 9, 11, 13, 17, 19, 23, 25, 27, 29, 31] {
        let r = average_height_check(q).unwrap();
        assert_eq!(r.average.coefficient(Symbol::ChiK), rational(0, 1));
        assert_eq!(r.average.coefficient(Symbol::ZetaQ), rational(-1, 4));
        assert_eq!(r.average.coefficient(Symbol::ChiEF), rational(-1, 4 * (q as i64 + 1)));
    }
}
