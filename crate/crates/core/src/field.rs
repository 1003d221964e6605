//! Arithmetic in F_q for odd prime powers q = p^k, the quadratic extension
//! F_{q²} = F_q(√Δ), and the fixed choices (non-square Δ, representative set A)
//! that the rest of the crate depends on.
//!
//! Elements are stored as their index `Σ c_i p^i` where `c_0, …, c_{k-1}` are the
//! coefficients of the reduced polynomial representative. The index order is the
//! canonical element order: lexicographic on the coefficient sequence read from
//! the highest power down. The prime subfield therefore occupies indices `0..p`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::FieldError;

/// Default upper bound on q accepted by [`Field::new`].
pub const DEFAULT_MAX_ORDER: u32 = 2048;

/// An element of F_q, identified by its index in the canonical element order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fe(u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// `re + √Δ·im` in F_{q²}.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuadExtElement {
    pub re: Fe,
    pub im: Fe,
}

impl QuadExtElement {
    pub const ONE: QuadExtElement = QuadExtElement { re: Fe::ONE, im: Fe::ZERO };

    pub fn new(re: Fe, im: Fe) -> Self {
        QuadExtElement { re, im }
    }
}

/// A set of representatives for F_q*/{±1} containing 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepSetA {
    elements: Vec<Fe>,
    member: Vec<bool>,
}

impl RepSetA {
    /// Validates and wraps a candidate set: exactly one of {x, −x} for every
    /// x ≠ 0, and 1 must be a member.
    pub fn new(field: &Field, mut elements: Vec<Fe>) -> Result<Self, FieldError> {
        let mut member = vec![false; field.order() as usize];
        for &x in &elements {
            if x.is_zero() || x.index() >= field.order() || member[x.index() as usize] {
                return Err(FieldError::InvalidRepresentativeSet);
            }
            member[x.index() as usize] = true;
        }
        let covers = field
            .nonzero_elements()
            .all(|x| member[x.index() as usize] ^ member[field.neg(x).index() as usize]);
        if !covers || !member[1] {
            return Err(FieldError::InvalidRepresentativeSet);
        }
        elements.sort_unstable();
        Ok(RepSetA { elements, member })
    }

    #[inline]
    pub fn contains(&self, x: Fe) -> bool {
        self.member[x.index() as usize]
    }

    pub fn elements(&self) -> &[Fe] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// The finite field F_q together with its lookup tables.
#[derive(Clone, Debug)]
pub struct Field {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    /// `exp[i] = γ^i` for the primitive element γ, `i < q - 1`.
    exp: Vec<Fe>,
    /// Discrete logarithm to base γ; entry 0 unused.
    log: Vec<u32>,
    nonsquare: Fe,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k
    }
}

impl Eq for Field {}

impl Field {
    /// Builds F_{p^k} with the lexicographically first monic irreducible modulus.
    pub fn new(p: u32, k: u32) -> Result<Self, FieldError> {
        Self::with_bound(p, k, DEFAULT_MAX_ORDER)
    }

    pub fn with_bound(p: u32, k: u32, max_order: u32) -> Result<Self, FieldError> {
        if p == 2 {
            return Err(FieldError::EvenCharacteristic);
        }
        if !is_prime(p as u64) {
            return Err(FieldError::NotPrime(p));
        }
        if k == 0 {
            return Err(FieldError::ZeroExponent);
        }
        let q = (p as u64)
            .checked_pow(k)
            .filter(|&q| q <= max_order as u64)
            .ok_or(FieldError::BoundExceeded { p, k, bound: max_order })?
            as u32;

        let modulus = if k == 1 { vec![0, 1] } else { first_irreducible(p, k) };
        let gamma = primitive_poly(p, q, &modulus);

        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut log = vec![0u32; q as usize];
        let mut cur = vec![0u32; k as usize];
        cur[0] = 1;
        for i in 0..q - 1 {
            let idx = poly_index(p, &cur);
            exp.push(Fe(idx));
            log[idx as usize] = i;
            cur = poly_mulmod(p, &cur, &gamma, &modulus);
        }

        let mut field = Field { p, k, q, modulus, exp, log, nonsquare: Fe::ZERO };
        field.nonsquare = field
            .nonzero_elements()
            .find(|&x| field.log[x.index() as usize] % 2 == 1)
            .expect("odd q has non-squares");
        Ok(field)
    }

    /// Builds F_q from the order q, which must be an odd prime power.
    pub fn from_order(q: u32) -> Result<Self, FieldError> {
        let (p, k) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        Self::new(p, k)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Coefficients of the modulus, constant term first (monic).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Coefficient sequence `c_0, …, c_{k-1}` of an element.
    pub fn coeffs(&self, x: Fe) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.k as usize);
        let mut n = x.0;
        for _ in 0..self.k {
            out.push(n % self.p);
            n /= self.p;
        }
        out
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Fe {
        Fe(poly_index(self.p, coeffs))
    }

    pub fn element(&self, index: u32) -> Option<Fe> {
        (index < self.q).then_some(Fe(index))
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> + Clone {
        (0..self.q).map(Fe)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Fe> + Clone {
        (1..self.q).map(Fe)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.k == 1 {
            let s = a.0 + b.0;
            return Fe(if s >= self.p { s - self.p } else { s });
        }
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0, 1);
        while x > 0 || y > 0 {
            let d = (x % self.p + y % self.p) % self.p;
            out += d * place;
            place *= self.p;
            x /= self.p;
            y /= self.p;
        }
        Fe(out)
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        if self.k == 1 {
            return Fe(if a.0 == 0 { 0 } else { self.p - a.0 });
        }
        let (mut x, mut out, mut place) = (a.0, 0, 1);
        while x > 0 {
            let d = x % self.p;
            out += ((self.p - d) % self.p) * place;
            place *= self.p;
            x /= self.p;
        }
        Fe(out)
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        let e = self.log[a.0 as usize] + self.log[b.0 as usize];
        let n = self.q - 1;
        self.exp[(if e >= n { e - n } else { e }) as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn checked_inv(&self, a: Fe) -> Option<Fe> {
        if a.is_zero() {
            return None;
        }
        let l = self.log[a.0 as usize];
        Some(self.exp[((self.q - 1 - l) % (self.q - 1)) as usize])
    }

    /// Multiplicative inverse. Panics on zero.
    #[inline]
    pub fn inv(&self, a: Fe) -> Fe {
        self.checked_inv(a).expect("inverse of zero in F_q")
    }

    #[inline]
    pub fn div(&self, a: Fe, b: Fe) -> Fe {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if a.is_zero() {
            return Fe::ZERO;
        }
        let n = (self.q - 1) as u64;
        let l = (self.log[a.0 as usize] as u64 * (e % n)) % n;
        self.exp[l as usize]
    }

    /// The fixed primitive element γ of F_q*.
    pub fn primitive_element(&self) -> Fe {
        self.exp[1 % (self.q as usize - 1)]
    }

    /// Discrete logarithm base [`Field::primitive_element`].
    pub fn log(&self, a: Fe) -> Option<u32> {
        (!a.is_zero()).then(|| self.log[a.0 as usize])
    }

    pub fn exp(&self, e: u64) -> Fe {
        self.exp[(e % (self.q as u64 - 1)) as usize]
    }

    /// Whether `x` is a nonzero square, i.e. `x^((q-1)/2) = 1`.
    pub fn is_square(&self, x: Fe) -> Result<bool, FieldError> {
        if x.is_zero() {
            return Err(FieldError::ZeroInput);
        }
        Ok(self.log[x.0 as usize] % 2 == 0)
    }

    /// Quadratic character: 0 at zero, ±1 elsewhere.
    pub fn quadratic_character(&self, x: Fe) -> i32 {
        match self.is_square(x) {
            Err(_) => 0,
            Ok(true) => 1,
            Ok(false) => -1,
        }
    }

    /// A square root chosen as `γ^(log x / 2)`, or `None` for non-squares.
    pub fn sqrt(&self, x: Fe) -> Option<Fe> {
        if x.is_zero() {
            return Some(Fe::ZERO);
        }
        let l = self.log[x.0 as usize];
        (l % 2 == 0).then(|| self.exp[(l / 2) as usize])
    }

    /// Δ: the first non-square in element order.
    pub fn fixed_nonsquare(&self) -> Fe {
        self.nonsquare
    }

    /// Whether q ≡ 1 (mod 4).
    pub fn is_one_mod_four(&self) -> bool {
        self.q % 4 == 1
    }

    /// The smaller of {x, −x} in element order.
    pub fn sign_min(&self, x: Fe) -> Fe {
        x.min(self.neg(x))
    }

    /// The canonical set A: the nonzero squares when q ≡ 3 (mod 4), otherwise the
    /// element of each pair {x, −x} that comes first in element order.
    pub fn representative_set_a(&self) -> RepSetA {
        let chosen: Vec<Fe> = if self.q % 4 == 3 {
            self.nonzero_elements().filter(|&x| self.log[x.0 as usize] % 2 == 0).collect()
        } else {
            self.nonzero_elements().filter(|&x| x < self.neg(x)).collect()
        };
        RepSetA::new(self, chosen).expect("canonical representative set is valid")
    }

    /// Absolute trace to F_p, returned as a residue in `0..p`.
    pub fn trace_to_prime(&self, x: Fe) -> u32 {
        let mut acc = Fe::ZERO;
        let mut cur = x;
        for _ in 0..self.k {
            acc = self.add(acc, cur);
            cur = self.pow(cur, self.p as u64);
        }
        debug_assert!(acc.0 < self.p);
        acc.0
    }

    /// Human-readable element: the residue for prime fields, a polynomial in
    /// `a` (a root of the modulus) otherwise.
    pub fn render(&self, x: Fe) -> alloc::string::String {
        use alloc::string::ToString;
        if self.k == 1 {
            return x.0.to_string();
        }
        let coeffs = self.coeffs(x);
        let mut parts = Vec::new();
        for (i, &c) in coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coef = if c == 1 && i > 0 { alloc::string::String::new() } else { c.to_string() };
            parts.push(match i {
                0 => c.to_string(),
                1 => alloc::format!("{coef}a"),
                _ => alloc::format!("{coef}a^{i}"),
            });
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join("+")
        }
    }

    // --- F_{q²} = F_q(√Δ) ---

    pub fn ext_add(&self, a: QuadExtElement, b: QuadExtElement) -> QuadExtElement {
        QuadExtElement::new(self.add(a.re, b.re), self.add(a.im, b.im))
    }

    pub fn ext_neg(&self, a: QuadExtElement) -> QuadExtElement {
        QuadExtElement::new(self.neg(a.re), self.neg(a.im))
    }

    pub fn ext_mul(&self, a: QuadExtElement, b: QuadExtElement) -> QuadExtElement {
        let d = self.nonsquare;
        let re = self.add(self.mul(a.re, b.re), self.mul(d, self.mul(a.im, b.im)));
        let im = self.add(self.mul(a.re, b.im), self.mul(a.im, b.re));
        QuadExtElement::new(re, im)
    }

    /// Galois conjugate `re − √Δ·im`.
    pub fn ext_conj(&self, a: QuadExtElement) -> QuadExtElement {
        QuadExtElement::new(a.re, self.neg(a.im))
    }

    /// `re² − Δ·im²`.
    pub fn ext_norm(&self, a: QuadExtElement) -> Fe {
        let r2 = self.mul(a.re, a.re);
        let i2 = self.mul(a.im, a.im);
        self.sub(r2, self.mul(self.nonsquare, i2))
    }

    pub fn ext_inv(&self, a: QuadExtElement) -> Option<QuadExtElement> {
        let n = self.checked_inv(self.ext_norm(a))?;
        let c = self.ext_conj(a);
        Some(QuadExtElement::new(self.mul(c.re, n), self.mul(c.im, n)))
    }

    pub fn ext_pow(&self, a: QuadExtElement, mut e: u64) -> QuadExtElement {
        let mut base = a;
        let mut acc = QuadExtElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.ext_mul(acc, base);
            }
            base = self.ext_mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// The smaller of {z, −z} in lexicographic (re, im) order.
    pub fn ext_sign_min(&self, z: QuadExtElement) -> QuadExtElement {
        z.min(self.ext_neg(z))
    }

    /// All norm-one elements of F_{q²}* (the full torus of order q + 1).
    pub fn norm_one_elements(&self) -> Vec<QuadExtElement> {
        let mut out = Vec::with_capacity(self.q as usize + 1);
        for im in self.elements() {
            let rhs = self.add(Fe::ONE, self.mul(self.nonsquare, self.mul(im, im)));
            if let Some(r) = self.sqrt(rhs) {
                out.push(QuadExtElement::new(r, im));
                if !r.is_zero() {
                    out.push(QuadExtElement::new(self.neg(r), im));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Canonical representatives of the norm-one torus modulo ±1, sorted.
    pub fn norm_one_subgroup(&self) -> Vec<QuadExtElement> {
        let mut out: Vec<_> = self
            .norm_one_elements()
            .into_iter()
            .filter(|&z| self.ext_sign_min(z) == z)
            .collect();
        out.sort_unstable();
        out
    }

    /// A generator of the cyclic norm-one torus (order q + 1).
    pub fn norm_one_generator(&self) -> QuadExtElement {
        let order = self.q as u64 + 1;
        let primes = prime_factors(order);
        self.norm_one_elements()
            .into_iter()
            .find(|&z| primes.iter().all(|&r| self.ext_pow(z, order / r) != QuadExtElement::ONE))
            .expect("norm-one torus is cyclic")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q)
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors in increasing order.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `(p, k)` with `q = p^k`, or `None` if q is not a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    let ps = prime_factors(q as u64);
    if ps.len() != 1 {
        return None;
    }
    let p = ps[0] as u32;
    let mut k = 0;
    let mut n = q;
    while n > 1 {
        n /= p;
        k += 1;
    }
    Some((p, k))
}

/// Whether q is an odd prime power (the orders this crate supports).
pub fn is_odd_prime_power(q: u32) -> bool {
    q % 2 == 1 && prime_power(q).is_some()
}

// --- F_p[x] helpers used only while building the tables ---

fn poly_index(p: u32, coeffs: &[u32]) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn trim(mut v: Vec<u32>) -> Vec<u32> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

/// Remainder of `a` modulo a monic or general nonzero `m` over F_p.
fn poly_rem(p: u32, a: &[u32], m: &[u32]) -> Vec<u32> {
    let m = trim(m.to_vec());
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let factor = (*r.last().unwrap() as u64 * lead_inv as u64 % p as u64) as u32;
        for (i, &c) in m.iter().enumerate() {
            let t = (c as u64 * factor as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - t) % p;
        }
        r = trim(r);
    }
    r
}

fn poly_mul(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    trim(out.into_iter().map(|c| c as u32).collect())
}

/// Product modulo `m`, padded to length `deg m`.
fn poly_mulmod(p: u32, a: &[u32], b: &[u32], m: &[u32]) -> Vec<u32> {
    let mut r = poly_rem(p, &poly_mul(p, a, b), m);
    r.resize(m.len() - 1, 0);
    r
}

fn poly_powmod(p: u32, base: &[u32], mut e: u64, m: &[u32]) -> Vec<u32> {
    let mut acc = vec![0u32; m.len() - 1];
    acc[0] = 1;
    let mut b = poly_rem(p, base, m);
    b.resize(m.len() - 1, 0);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(p, &acc, &b, m);
        }
        b = poly_mulmod(p, &b, &b, m);
        e >>= 1;
    }
    acc
}

fn poly_gcd(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = poly_rem(p, &x, &y);
        x = y;
        y = r;
    }
    x
}

/// Rabin's irreducibility test for a monic polynomial of degree k over F_p.
fn is_irreducible(p: u32, f: &[u32]) -> bool {
    let k = (f.len() - 1) as u64;
    let x = [0u32, 1];
    let frob = |times: u64| {
        let mut h = x.to_vec();
        for _ in 0..times {
            h = poly_powmod(p, &h, p as u64, f);
        }
        h
    };
    let mut full = frob(k);
    full.resize(f.len() - 1, 0);
    let mut xr = x.to_vec();
    xr.resize(f.len() - 1, 0);
    if full != xr {
        return false;
    }
    prime_factors(k).into_iter().all(|r| {
        let mut h = frob(k / r);
        h.resize(f.len().max(3) - 1, 0);
        // h - x
        h[1] = (h[1] + p - 1) % p;
        poly_gcd(p, &h, f).len() == 1
    })
}

/// Lexicographically first monic irreducible of degree k: lower coefficients
/// scanned in increasing index order.
fn first_irreducible(p: u32, k: u32) -> Vec<u32> {
    let count = (p as u64).pow(k);
    for n in 0..count {
        let mut f = Vec::with_capacity(k as usize + 1);
        let mut m = n;
        for _ in 0..k {
            f.push((m % p as u64) as u32);
            m /= p as u64;
        }
        f.push(1);
        if is_irreducible(p, &f) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// First element (in index order) generating F_q*, as a coefficient vector.
fn primitive_poly(p: u32, q: u32, modulus: &[u32]) -> Vec<u32> {
    let n = (q - 1) as u64;
    let primes = prime_factors(n);
    let k = modulus.len() - 1;
    let mut one = vec![0u32; k];
    one[0] = 1;
    for idx in 1..q {
        let mut g = Vec::with_capacity(k);
        let mut m = idx;
        for _ in 0..k {
            g.push(m % p);
            m /= p;
        }
        if primes.iter().all(|&r| poly_powmod(p, &g, n / r, modulus) != one) {
            return g;
        }
    }
    unreachable!("F_q* is cyclic")
}
