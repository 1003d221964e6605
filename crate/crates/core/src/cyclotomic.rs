//! Exact arithmetic in Q(ζ_m).
//!
//! Elements are stored sparsely in the tensor basis Π_i ζ_{n_i}^{j_i},
//! 0 ≤ j_i < φ(n_i), where m = Π n_i is the prime-power factorization. The
//! basis is a Q-basis of Q(ζ_m), so each value has exactly one representation.
//! Reducing a single exponent only touches its own prime-power factor, which
//! keeps products of character values cheap even when φ(m) is in the
//! thousands. A dense power-basis view is available for interchange and is
//! what [`CycloNumber::invert`] works in.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::CycloError;
use crate::field::{prime_factors, Field};

pub type Rational = BigRational;

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rational_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Clone, Debug)]
struct Component {
    n: u32,
    p: u32,
    phi: u32,
    /// n / p
    block: u32,
    /// Mixed-radix weight of this component inside a key.
    stride: u32,
    /// (m / n)⁻¹ mod n, so ζ_m = Π ζ_{n_i}^{crt_i}.
    crt: u32,
    cofactor: u32,
}

/// Factorization data for one conductor.
#[derive(Clone, Debug)]
pub struct Conductor {
    m: u32,
    phi: u32,
    comps: Vec<Component>,
}

impl Conductor {
    pub fn new(m: u32) -> Self {
        assert!(m >= 1, "conductor must be positive");
        let mut comps = Vec::new();
        let mut stride = 1u32;
        let mut phi = 1u32;
        for p in prime_factors(m as u64).into_iter().map(|p| p as u32) {
            let mut n = 1u32;
            while m % (n * p) == 0 {
                n *= p;
            }
            let cofactor = m / n;
            let crt = mod_inverse(cofactor % n, n);
            let c_phi = n / p * (p - 1);
            comps.push(Component { n, p, phi: c_phi, block: n / p, stride, crt, cofactor });
            stride *= n;
            phi *= c_phi;
        }
        Conductor { m, phi, comps }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// φ(m), the dimension of Q(ζ_m).
    pub fn degree(&self) -> u32 {
        self.phi
    }

    fn decode(&self, key: u32, out: &mut Vec<u32>) {
        out.clear();
        out.extend(self.comps.iter().map(|c| key / c.stride % c.n));
    }

    fn exponent_tuple(&self, e: u64, out: &mut Vec<u32>) {
        out.clear();
        out.extend(self.comps.iter().map(|c| ((c.crt as u64 * (e % c.n as u64)) % c.n as u64) as u32));
    }

    /// The exponent e with key ↔ ζ_m^e.
    fn key_exponent(&self, key: u32) -> u32 {
        let mut e = 0u64;
        for c in &self.comps {
            e += (key / c.stride % c.n) as u64 * c.cofactor as u64;
        }
        (e % self.m as u64) as u32
    }

    /// Adds coeff · Π ζ_{n_i}^{tuple_i} into `out`, rewriting each
    /// out-of-basis exponent through ζ^{j} = −Σ_t ζ^{j − φ(n) + t·n/p}.
    fn accumulate(&self, tuple: &[u32], coeff: &Rational, out: &mut BTreeMap<u32, Rational>) {
        self.accumulate_from(0, 0, false, tuple, coeff, out);
    }

    fn accumulate_from(
        &self,
        i: usize,
        key: u32,
        negate: bool,
        tuple: &[u32],
        coeff: &Rational,
        out: &mut BTreeMap<u32, Rational>,
    ) {
        if i == self.comps.len() {
            let slot = out.entry(key).or_insert_with(Rational::zero);
            if negate {
                *slot -= coeff;
            } else {
                *slot += coeff;
            }
            return;
        }
        let c = &self.comps[i];
        let j = tuple[i];
        if j < c.phi {
            self.accumulate_from(i + 1, key + j * c.stride, negate, tuple, coeff, out);
        } else {
            let r = j - c.phi;
            for t in 0..c.p - 1 {
                let jj = r + t * c.block;
                self.accumulate_from(i + 1, key + jj * c.stride, !negate, tuple, coeff, out);
            }
        }
    }
}

fn mod_inverse(a: u32, n: u32) -> u32 {
    if n == 1 {
        return 0;
    }
    let e = (a as i64).extended_gcd(&(n as i64));
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(n as i64) as u32
}

fn lcm(a: u32, b: u32) -> u32 {
    a / a.gcd(&b) * b
}

/// An element of Q(ζ_m).
#[derive(Clone, Debug)]
pub struct CycloNumber {
    m: u32,
    terms: BTreeMap<u32, Rational>,
}

impl CycloNumber {
    pub fn zero() -> Self {
        CycloNumber { m: 1, terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(0, r);
        }
        CycloNumber { m: 1, terms }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(rational_int(n))
    }

    /// ζ_m^k.
    pub fn zeta(m: u32, k: i64) -> Self {
        let cond = Conductor::new(m);
        let e = k.rem_euclid(m as i64) as u64;
        let mut tuple = Vec::new();
        cond.exponent_tuple(e, &mut tuple);
        let mut terms = BTreeMap::new();
        cond.accumulate(&tuple, &Rational::one(), &mut terms);
        Self::from_terms(m, terms)
    }

    fn from_terms(m: u32, mut terms: BTreeMap<u32, Rational>) -> Self {
        terms.retain(|_, c| !c.is_zero());
        CycloNumber { m, terms }
    }

    /// The conductor of the ambient field this value is stored in.
    pub fn conductor(&self) -> u32 {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of nonzero basis coordinates.
    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    /// The value as a rational number, if it is one.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    /// Re-expresses the value in Q(ζ_L) for a multiple L of the conductor,
    /// via ζ_m = ζ_L^{L/m}.
    pub fn lift(&self, l: u32) -> Self {
        assert!(l % self.m == 0, "lift target must be a multiple of the conductor");
        if l == self.m {
            return self.clone();
        }
        let from = Conductor::new(self.m);
        let to = Conductor::new(l);
        let scale = (l / self.m) as u64;
        let mut tuple = Vec::new();
        let mut terms = BTreeMap::new();
        for (&key, c) in &self.terms {
            let e = from.key_exponent(key) as u64 * scale;
            to.exponent_tuple(e, &mut tuple);
            to.accumulate(&tuple, c, &mut terms);
        }
        Self::from_terms(l, terms)
    }

    fn aligned(a: &Self, b: &Self) -> (Self, Self) {
        let l = lcm(a.m, b.m);
        (a.lift(l), b.lift(l))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return CycloNumber { m: self.m, terms: BTreeMap::new() };
        }
        CycloNumber { m: self.m, terms: self.terms.iter().map(|(&k, c)| (k, c * r)).collect() }
    }

    /// The Galois automorphism ζ_m ↦ ζ_m^k, gcd(k, m) = 1.
    pub fn galois(&self, k: i64) -> Self {
        let cond = Conductor::new(self.m);
        let k = k.rem_euclid(self.m as i64) as u64;
        let mut src = Vec::new();
        let mut tuple = Vec::new();
        let mut terms = BTreeMap::new();
        for (&key, c) in &self.terms {
            cond.decode(key, &mut src);
            tuple.clear();
            tuple.extend(src.iter().zip(&cond.comps).map(|(&j, comp)| ((j as u64 * k) % comp.n as u64) as u32));
            cond.accumulate(&tuple, c, &mut terms);
        }
        Self::from_terms(self.m, terms)
    }

    /// Complex conjugation ζ ↦ ζ⁻¹.
    pub fn conjugate(&self) -> Self {
        self.galois(-1)
    }

    /// Multiplicative inverse, by the extended Euclidean algorithm against
    /// Φ_m in the power basis.
    pub fn invert(&self) -> Result<Self, CycloError> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(r.recip()));
        }
        let phi: Vec<Rational> = cyclotomic_polynomial(self.m).into_iter().map(rational_int).collect();
        let a = self.to_power_basis();
        let (g, s) = poly_xgcd(&a, &phi);
        debug_assert_eq!(g.len(), 1, "Φ_m is irreducible");
        let inv_g = g[0].recip();
        let coeffs: Vec<Rational> = s.into_iter().map(|c| c * &inv_g).collect();
        Ok(Self::from_power_basis(self.m, &coeffs))
    }

    /// Coordinates in the power basis 1, ζ_m, …, ζ_m^{φ(m)−1}.
    pub fn to_power_basis(&self) -> Vec<Rational> {
        let cond = Conductor::new(self.m);
        let phi = cyclotomic_polynomial(self.m);
        let d = cond.degree() as usize;
        let mut out = vec![Rational::zero(); d];
        for (&key, c) in &self.terms {
            let e = cond.key_exponent(key) as usize;
            for (slot, v) in out.iter_mut().zip(x_power_mod(e, &phi)) {
                if v != 0 {
                    *slot += c * rational_int(v);
                }
            }
        }
        out
    }

    pub fn from_power_basis(m: u32, coeffs: &[Rational]) -> Self {
        coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(Self::zero().lift(m), |acc, (k, c)| acc + Self::zeta(m, k as i64).scale(c))
    }

    /// Value under ζ_m = exp(2πi/m), as (re, im).
    pub fn to_complex(&self) -> (f64, f64) {
        let cond = Conductor::new(self.m);
        let mut re = 0.0;
        let mut im = 0.0;
        for (&key, c) in &self.terms {
            let e = cond.key_exponent(key) as f64;
            let theta = 2.0 * core::f64::consts::PI * e / self.m as f64;
            let v = c.to_f64().unwrap_or(f64::NAN);
            re += v * libm::cos(theta);
            im += v * libm::sin(theta);
        }
        (re, im)
    }

    /// (exponent e of ζ_m^e, coefficient) pairs in increasing exponent order.
    pub fn terms(&self) -> Vec<(u32, Rational)> {
        let cond = Conductor::new(self.m);
        let mut out: Vec<_> = self.terms.iter().map(|(&k, c)| (cond.key_exponent(k), c.clone())).collect();
        out.sort_by_key(|t| t.0);
        out
    }

    fn mul_same(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return CycloNumber { m: self.m, terms: BTreeMap::new() };
        }
        let cond = Conductor::new(self.m);
        fn decode_all<'a>(cond: &Conductor, x: &'a CycloNumber) -> Vec<(Vec<u32>, &'a Rational)> {
            x.terms
                .iter()
                .map(|(&k, c)| {
                    let mut t = Vec::new();
                    cond.decode(k, &mut t);
                    (t, c)
                })
                .collect()
        }
        let lhs = decode_all(&cond, self);
        let rhs = decode_all(&cond, other);
        let mut tuple = Vec::with_capacity(cond.comps.len());
        let mut terms = BTreeMap::new();
        for (ta, ca) in &lhs {
            for (tb, cb) in &rhs {
                tuple.clear();
                tuple.extend(cond.comps.iter().enumerate().map(|(i, c)| (ta[i] + tb[i]) % c.n));
                let coeff = *ca * *cb;
                cond.accumulate(&tuple, &coeff, &mut terms);
            }
        }
        Self::from_terms(self.m, terms)
    }
}

impl PartialEq for CycloNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.m == other.m {
            return self.terms == other.terms;
        }
        let (a, b) = Self::aligned(self, other);
        a.terms == b.terms
    }
}

impl Eq for CycloNumber {}

impl From<Rational> for CycloNumber {
    fn from(r: Rational) -> Self {
        Self::from_rational(r)
    }
}

impl<'a> Add<&'a CycloNumber> for &'a CycloNumber {
    type Output = CycloNumber;
    fn add(self, rhs: &CycloNumber) -> CycloNumber {
        let (mut a, b) = if self.m == rhs.m { (self.clone(), rhs.clone()) } else { CycloNumber::aligned(self, rhs) };
        for (k, c) in b.terms {
            *a.terms.entry(k).or_insert_with(Rational::zero) += c;
        }
        CycloNumber::from_terms(a.m, a.terms)
    }
}

impl Add for CycloNumber {
    type Output = CycloNumber;
    fn add(self, rhs: CycloNumber) -> CycloNumber {
        &self + &rhs
    }
}

impl AddAssign<&CycloNumber> for CycloNumber {
    fn add_assign(&mut self, rhs: &CycloNumber) {
        if self.m == rhs.m {
            for (k, c) in &rhs.terms {
                *self.terms.entry(*k).or_insert_with(Rational::zero) += c;
            }
            self.terms.retain(|_, c| !c.is_zero());
        } else {
            *self = &*self + rhs;
        }
    }
}

impl Neg for &CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        CycloNumber { m: self.m, terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect() }
    }
}

impl Neg for CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        -&self
    }
}

impl<'a> Sub<&'a CycloNumber> for &'a CycloNumber {
    type Output = CycloNumber;
    fn sub(self, rhs: &CycloNumber) -> CycloNumber {
        self + &(-rhs)
    }
}

impl Sub for CycloNumber {
    type Output = CycloNumber;
    fn sub(self, rhs: CycloNumber) -> CycloNumber {
        &self - &rhs
    }
}

impl<'a> Mul<&'a CycloNumber> for &'a CycloNumber {
    type Output = CycloNumber;
    fn mul(self, rhs: &CycloNumber) -> CycloNumber {
        if let Some(r) = self.as_rational() {
            return rhs.scale(&r);
        }
        if let Some(r) = rhs.as_rational() {
            return self.scale(&r);
        }
        if self.m == rhs.m {
            self.mul_same(rhs)
        } else {
            let (a, b) = CycloNumber::aligned(self, rhs);
            a.mul_same(&b)
        }
    }
}

impl Mul for CycloNumber {
    type Output = CycloNumber;
    fn mul(self, rhs: CycloNumber) -> CycloNumber {
        &self * &rhs
    }
}

impl fmt::Display for CycloNumber {
    /// Rationals as `p/q`, otherwise a sum of `c*z_m^k` terms.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{r}");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            let (sign, abs) = if c.is_negative() { ("-", -c) } else { ("+", c) };
            if first {
                if sign == "-" {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let root = if e == 0 { String::from("1") } else { format!("z_{}^{}", self.m, e) };
            if abs.is_one() {
                f.write_str(&root)?;
            } else if e == 0 {
                write!(f, "{abs}")?;
            } else {
                write!(f, "{abs}*{root}")?;
            }
        }
        Ok(())
    }
}

/// Φ_m with integer coefficients, constant term first.
pub fn cyclotomic_polynomial(m: u32) -> Vec<i64> {
    assert!(m >= 1);
    // x^m − 1
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m % d == 0 {
            num = exact_div_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0i64; num.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (j, &dv) in den.iter().enumerate() {
                rem[i + j] = rem[i + j]
                    .checked_sub(c.checked_mul(dv).expect("cyclotomic coefficient overflow"))
                    .expect("cyclotomic coefficient overflow");
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// x^e mod Φ (Φ monic), as φ(m) integer coefficients.
fn x_power_mod(e: usize, phi: &[i64]) -> Vec<i64> {
    let d = phi.len() - 1;
    let mut v = vec![0i64; d];
    if e < d {
        v[e] = 1;
        return v;
    }
    v[d - 1] = 1;
    for _ in d - 1..e {
        let top = v[d - 1];
        for i in (1..d).rev() {
            v[i] = v[i - 1] - top * phi[i];
        }
        v[0] = -top * phi[0];
    }
    v
}

fn poly_trim(p: &mut Vec<Rational>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = a.to_vec();
    poly_trim(&mut rem);
    let db = b.len() - 1;
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let lead_inv = b[db].recip();
    let mut quot = vec![Rational::zero(); rem.len() - db];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + db] * &lead_inv;
        if !c.is_zero() {
            for (j, bv) in b.iter().enumerate() {
                rem[i + j] -= &c * bv;
            }
        }
        quot[i] = c;
    }
    poly_trim(&mut rem);
    (quot, rem)
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out: Vec<Rational> =
        (0..n).map(|i| a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default()).collect();
    poly_trim(&mut out);
    out
}

/// Returns (g, s) with s·a ≡ g (mod f) and g = gcd(a, f).
fn poly_xgcd(a: &[Rational], f: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut r0 = f.to_vec();
    let mut r1 = a.to_vec();
    poly_trim(&mut r1);
    let mut s0: Vec<Rational> = Vec::new();
    let mut s1: Vec<Rational> = vec![Rational::one()];
    while !r1.is_empty() {
        let (q, r) = poly_divrem(&r0, &r1);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = core::mem::replace(&mut r1, r);
        s0 = core::mem::replace(&mut s1, s2);
    }
    (r0, s0)
}

/// g = Σ_{x ≠ 0} χ₂(x) ζ_p^{Tr x}; g² = χ₂(−1)·q.
pub fn gauss_sum(field: &Field) -> CycloNumber {
    let p = field.characteristic();
    let mut counts = vec![0i64; p as usize];
    for x in field.nonzero_elements() {
        counts[field.trace_to_prime(x) as usize] += field.quadratic_character(x) as i64;
    }
    counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .fold(CycloNumber::zero().lift(p), |acc, (t, &c)| acc + CycloNumber::zeta(p, t as i64).scale(&rational_int(c)))
}

/// The conductor lcm(p, (q−1)/2, (q+1)/2) holding every character value of
/// PSL₂(F_q) together with the Gauss sum.
pub fn table_conductor(field: &Field) -> u32 {
    let q = field.order();
    lcm(lcm(field.characteristic(), (q - 1) / 2), q.div_ceil(2))
}
