//! Dirichlet L-values of odd quadratic characters at s = 0, the logarithmic
//! derivative Z(0, χ), and the height expression attached to a CM type of
//! signature ε.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::cyclotomic::{rational, rational_int, Rational};
use crate::error::HeightError;

/// log 2π.
pub const LOG_TWO_PI: f64 = 1.837_877_066_409_345_3;

/// The Kronecker symbol (d / n) for n ≥ 1.
pub fn kronecker(d: i64, n: u64) -> i32 {
    let mut n = n;
    let mut result = 1;
    let twos = n.trailing_zeros();
    n >>= twos;
    if twos > 0 {
        if d % 2 == 0 {
            return 0;
        }
        if twos % 2 == 1 && matches!(d.rem_euclid(8), 3 | 5) {
            result = -result;
        }
    }
    // Jacobi symbol (d / n) for odd n.
    let mut a = d.rem_euclid(n as i64) as u64;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        core::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

fn squarefree(mut n: u64) -> bool {
    let mut p = 2;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        if n % p == 0 {
            n /= p;
        }
        p += 1;
    }
    true
}

/// Whether d is a fundamental discriminant.
pub fn is_fundamental(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => squarefree(d.unsigned_abs()),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}

/// The character a ↦ (d / a) of an imaginary quadratic field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadraticCharacter {
    d: i64,
}

impl QuadraticCharacter {
    pub fn new(d: i64) -> Result<Self, HeightError> {
        if d >= 0 || !is_fundamental(d) {
            return Err(HeightError::NotFundamental(d));
        }
        Ok(QuadraticCharacter { d })
    }

    pub fn discriminant(&self) -> i64 {
        self.d
    }

    pub fn conductor(&self) -> u64 {
        self.d.unsigned_abs()
    }

    pub fn value(&self, a: u64) -> i32 {
        kronecker(self.d, a)
    }

    pub fn is_odd(&self) -> bool {
        self.value(self.conductor() - 1) == -1
    }

    fn require_odd(&self) -> Result<(), HeightError> {
        if self.is_odd() {
            Ok(())
        } else {
            Err(HeightError::EvenCharacter(self.d))
        }
    }
}

/// L(0, χ) = −(1/f) Σ_{a<f} a·χ(a).
pub fn l_value_at_0(chi: &QuadraticCharacter) -> Result<Rational, HeightError> {
    chi.require_odd()?;
    let f = chi.conductor();
    let s: i64 = (1..f).map(|a| a as i64 * chi.value(a) as i64).sum();
    Ok(rational(-s, f as i64))
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// log Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Γ(x)Γ(1−x) = π / sin(πx)
        return libm::log(core::f64::consts::PI / libm::sin(core::f64::consts::PI * x)) - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * libm::log(2.0 * core::f64::consts::PI) + (x + 0.5) * libm::log(t) - t + libm::log(a)
}

/// L′(0, χ) = −log f·L(0, χ) + Σ_{a<f} χ(a)·log Γ(a/f).
pub fn l_deriv_at_0(chi: &QuadraticCharacter) -> Result<f64, HeightError> {
    let l0 = rational_to_f64(&l_value_at_0(chi)?);
    let f = chi.conductor();
    let ff = f as f64;
    let s: f64 = (1..f).map(|a| chi.value(a) as f64 * ln_gamma(a as f64 / ff)).sum();
    Ok(-libm::log(ff) * l0 + s)
}

/// Z(0, χ) = L′(0, χ)/L(0, χ) + ½ log f.
pub fn z0(chi: &QuadraticCharacter) -> Result<f64, HeightError> {
    let l0 = rational_to_f64(&l_value_at_0(chi)?);
    Ok(l_deriv_at_0(chi)? / l0 + 0.5 * libm::log(chi.conductor() as f64))
}

/// Z(0, ζ_Q) = ζ′(0)/ζ(0) = log 2π.
pub fn z0_zeta_q() -> f64 {
    LOG_TWO_PI
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    // Numerators and denominators here stay far below 2^53.
    let n: i64 = r.numer().try_into().unwrap_or(i64::MAX);
    let d: i64 = r.denom().try_into().unwrap_or(i64::MAX);
    n as f64 / d as f64
}

/// The Z-values a height expression is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    /// Z(0, ζ_Q).
    ZetaQ,
    /// Z(0, χ_{k/Q}).
    ChiK,
    /// Z(0, χ_{E/F}), never evaluated.
    ChiEF,
}

impl Symbol {
    pub const ALL: [Symbol; 3] = [Symbol::ZetaQ, Symbol::ChiK, Symbol::ChiEF];

    pub fn name(&self) -> &'static str {
        match self {
            Symbol::ZetaQ => "Z(0,zeta_Q)",
            Symbol::ChiK => "Z(0,chi_k)",
            Symbol::ChiEF => "Z(0,chi_EF)",
        }
    }
}

/// A Q-linear combination of Z-values, optionally with numeric values bound
/// to Z(0, ζ_Q) and Z(0, χ_{k/Q}).
#[derive(Clone, Debug, PartialEq)]
pub struct HeightExpression {
    coefficients: BTreeMap<Symbol, Rational>,
    bound: BTreeMap<Symbol, f64>,
}

impl HeightExpression {
    pub fn new(coefficients: impl IntoIterator<Item = (Symbol, Rational)>) -> Self {
        let mut e = HeightExpression { coefficients: BTreeMap::new(), bound: BTreeMap::new() };
        for (s, c) in coefficients {
            *e.coefficients.entry(s).or_insert_with(Rational::zero) += c;
        }
        e
    }

    pub fn coefficient(&self, s: Symbol) -> Rational {
        self.coefficients.get(&s).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn bind(mut self, s: Symbol, value: f64) -> Self {
        if s != Symbol::ChiEF {
            self.bound.insert(s, value);
        }
        self
    }

    pub fn bound_value(&self, s: Symbol) -> Option<f64> {
        self.bound.get(&s).copied()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Self::new(
            Symbol::ALL.iter().map(|&s| (s, self.coefficient(s) + other.coefficient(s))),
        );
        for (s, v) in self.bound.iter().chain(&other.bound) {
            out.bound.insert(*s, *v);
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::new(Symbol::ALL.iter().map(|&s| (s, self.coefficient(s) * c)));
        out.bound = self.bound.clone();
        out
    }

    /// Σ coefficient·value over the evaluable symbols, when both are bound
    /// (a zero coefficient needs no value).
    pub fn numeric_part(&self) -> Option<f64> {
        let mut total = 0.0;
        for s in [Symbol::ZetaQ, Symbol::ChiK] {
            let c = self.coefficient(s);
            if c.is_zero() {
                continue;
            }
            total += rational_to_f64(&c) * self.bound_value(s)?;
        }
        Some(total)
    }

    /// The coefficient of Z(0, χ_{E/F}), which stays symbolic.
    pub fn symbolic_remainder(&self) -> Rational {
        self.coefficient(Symbol::ChiEF)
    }

    pub fn same_coefficients(&self, other: &Self) -> bool {
        Symbol::ALL.iter().all(|&s| self.coefficient(s) == other.coefficient(s))
    }
}

impl core::fmt::Display for HeightExpression {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let mut first = true;
        for s in Symbol::ALL {
            let c = self.coefficient(s);
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            write!(f, "({})*{}", c.abs(), s.name())?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// −¼ Z(0, ζ_k) + c·Z(0, χ_{k/Q}) − c′·Z(0, χ_{E/F}), with Z(0, ζ_k) expanded
/// as Z(0, ζ_Q) + Z(0, χ_{k/Q}).
pub fn height_coefficients(q: u32, epsilon: u32) -> Result<HeightExpression, HeightError> {
    if epsilon > q + 1 {
        return Err(HeightError::SignatureOutOfRange { epsilon, max: q + 1 });
    }
    let (c, c2) = crate::colmez::closed_form_coefficients(q, epsilon);
    let quarter = rational(1, 4);
    Ok(HeightExpression::new([
        (Symbol::ZetaQ, -quarter.clone()),
        (Symbol::ChiK, c - quarter),
        (Symbol::ChiEF, -c2),
    ]))
}

/// The height expression with Z(0, ζ_Q) and Z(0, χ_d) evaluated.
pub fn theorem72_height(q: u32, epsilon: u32, d: i64) -> Result<HeightExpression, HeightError> {
    let chi = QuadraticCharacter::new(d)?;
    Ok(height_coefficients(q, epsilon)?.bind(Symbol::ZetaQ, z0_zeta_q()).bind(Symbol::ChiK, z0(&chi)?))
}

/// The binomially weighted average over all 2^{q+1} CM types.
#[derive(Clone, Debug, PartialEq)]
pub struct AverageReport {
    pub q: u32,
    pub average: HeightExpression,
    pub expected: HeightExpression,
    /// E[ε(q+1−ε)] from the exact binomial sum.
    pub mean_product: Rational,
}

/// Σ_ε C(q+1, ε)·height(q, ε) / 2^{q+1}, compared with
/// −¼ Z(0, ζ_Q) − 1/(4(q+1)) Z(0, χ_{E/F}).
pub fn average_height_check(q: u32) -> Result<AverageReport, HeightError> {
    let n = q as u64 + 1;
    let mut binom: Vec<Rational> = Vec::with_capacity(n as usize + 1);
    let mut c = rational_int(1);
    for e in 0..=n {
        binom.push(c.clone());
        c = c * rational_int((n - e) as i64) / rational_int(e as i64 + 1);
    }
    let total: Rational = binom.iter().sum();
    let mut average = HeightExpression::new([]);
    let mut mean_product = Rational::zero();
    for (e, b) in binom.iter().enumerate() {
        let w = b / &total;
        average = average.add(&height_coefficients(q, e as u32)?.scale(&w));
        mean_product += &w * rational_int(e as i64 * (n as i64 - e as i64));
    }
    let expected = HeightExpression::new([
        (Symbol::ZetaQ, rational(-1, 4)),
        (Symbol::ChiK, Rational::zero()),
        (Symbol::ChiEF, rational(-1, 4 * n as i64)),
    ]);
    if mean_product != rational(q as i64 * n as i64, 4) {
        return Err(HeightError::ConsistencyFailure(format!("q={q}: E[e(q+1-e)] = {mean_product}")));
    }
    if !average.same_coefficients(&expected) {
        return Err(HeightError::ConsistencyFailure(format!("q={q}: average is {average}, expected {expected}")));
    }
    Ok(AverageReport { q, average, expected, mean_product })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronecker_values() {
        let chi = QuadraticCharacter::new(-4).unwrap();
        assert_eq!((1..4).map(|a| chi.value(a)).collect::<Vec<_>>(), [1, 0, -1]);
        let chi = QuadraticCharacter::new(-7).unwrap();
        assert_eq!((1..7).map(|a| chi.value(a)).collect::<Vec<_>>(), [1, 1, -1, 1, -1, -1]);
        let chi = QuadraticCharacter::new(-8).unwrap();
        assert_eq!((1..8).map(|a| chi.value(a)).collect::<Vec<_>>(), [1, 0, 1, 0, -1, 0, -1]);
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(-7, 2), 1);
    }

    #[test]
    fn fundamental_discriminants() {
        for d in [-3, -4, -7, -8, -11, -15, -20, -24, -163] {
            assert!(QuadraticCharacter::new(d).is_ok(), "{d}");
        }
        for d in [-1, -2, -12, -16, -27, 5, 0] {
            assert_eq!(QuadraticCharacter::new(d), Err(HeightError::NotFundamental(d)));
        }
    }

    #[test]
    fn l_values() {
        let l = |d| l_value_at_0(&QuadraticCharacter::new(d).unwrap()).unwrap();
        assert_eq!(l(-4), rational(1, 2));
        assert_eq!(l(-3), rational(1, 3));
        assert_eq!(l(-7), rational_int(1));
    }

    #[test]
    fn gamma() {
        assert!(ln_gamma(1.0).abs() < 1e-14);
        assert!(ln_gamma(2.0).abs() < 1e-14);
        assert!((ln_gamma(0.5) - 0.5 * libm::log(core::f64::consts::PI)).abs() < 1e-14);
        assert!((ln_gamma(5.0) - libm::log(24.0)).abs() < 1e-13);
        let pi = core::f64::consts::PI;
        let s = ln_gamma(0.25) + ln_gamma(0.75);
        assert!((s - libm::log(pi * core::f64::consts::SQRT_2)).abs() < 1e-13);
    }

    #[test]
    fn derivative_d4() {
        let chi = QuadraticCharacter::new(-4).unwrap();
        let v = l_deriv_at_0(&chi).unwrap();
        let closed = -libm::log(4.0) / 2.0 + ln_gamma(0.25) - ln_gamma(0.75);
        assert!((v - closed).abs() < 1e-14);
        assert!(v > 0.0);
    }

    #[test]
    fn zeta_q() {
        assert_eq!(z0_zeta_q(), 1.8378770664093453);
        assert!((z0_zeta_q() - libm::log(2.0 * core::f64::consts::PI)).abs() < 1e-15);
    }

    #[test]
    fn coefficients() {
        let h = height_coefficients(7, 2).unwrap();
        assert_eq!(h.coefficient(Symbol::ZetaQ), rational(-1, 4));
        assert_eq!(h.coefficient(Symbol::ChiK), rational(-1, 28));
        assert_eq!(h.coefficient(Symbol::ChiEF), rational(-3, 112));
        let h0 = height_coefficients(7, 0).unwrap();
        assert_eq!(h0.coefficient(Symbol::ChiK), rational(-1, 4));
        assert!(h0.symbolic_remainder().is_zero());
        for e in 0..=8 {
            assert_eq!(height_coefficients(7, e).unwrap(), height_coefficients(7, 8 - e).unwrap());
        }
        assert!(height_coefficients(7, 9).is_err());
    }

    #[test]
    fn numeric_part() {
        let h = theorem72_height(7, 0, -4).unwrap();
        let z = z0(&QuadraticCharacter::new(-4).unwrap()).unwrap();
        assert!((h.numeric_part().unwrap() - (-0.25 * LOG_TWO_PI - 0.25 * z)).abs() < 1e-14);
        assert_eq!(height_coefficients(7, 2).unwrap().numeric_part(), None);
    }

    #[test]
    fn averages() {
        let r = average_height_check(7).unwrap();
        assert_eq!(r.average.coefficient(Symbol::ChiEF), rational(-1, 32));
        let r = average_height_check(5).unwrap();
        assert_eq!(r.average.coefficient(Symbol::ChiEF), rational(-1, 24));
        assert!(r.average.coefficient(Symbol::ChiK).is_zero());
    }

    #[test]
    fn display() {
        use alloc::string::ToString;
        assert_eq!(
            height_coefficients(7, 2).unwrap().to_string(),
            "-(1/4)*Z(0,zeta_Q) - (1/28)*Z(0,chi_k) - (3/112)*Z(0,chi_EF)"
        );
    }
}
