//! Independent oracles shared by the integration tests and the acceptance
//! runner.
#![allow(dead_code)]

use colmez_core::cmtypes::CmType;
use colmez_core::Psl2;

/// Orbit counts for ε = 1..7, as printed.
pub const PUBLISHED_CENSUS: [(u32, [u64; 7]); 11] = [
    (7, [1, 1, 1, 3, 1, 1, 1]),
    (9, [1, 1, 2, 3, 4, 3, 2]),
    (11, [1, 1, 1, 2, 2, 6, 2]),
    (13, [1, 1, 2, 4, 5, 7, 10]),
    (17, [1, 1, 2, 4, 8, 15, 20]),
    (19, [1, 1, 1, 5, 6, 19, 26]),
    (23, [1, 1, 1, 5, 7, 34, 57]),
    (25, [1, 1, 2, 7, 16, 45, 108]),
    (27, [1, 1, 1, 6, 10, 54, 124]),
    (29, [1, 1, 2, 6, 19, 68, 194]),
    (31, [1, 1, 1, 8, 15, 83, 233]),
];

/// h(d) by counting reduced forms ax² + bxy + cy² of discriminant d < 0.
pub fn class_number(d: i64) -> u64 {
    let mut h = 0;
    let mut a = 1i64;
    while 3 * a * a <= -d {
        for b in -a + 1..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            h += 1;
        }
        a += 1;
    }
    h
}

pub fn unit_count(d: i64) -> u64 {
    match d {
        -3 => 6,
        -4 => 4,
        _ => 2,
    }
}

pub fn fundamental_discriminants(lo: i64) -> Vec<i64> {
    (lo..0)
        .filter(|&d| {
            let sf = |n: i64| (2..).take_while(|p| p * p <= n).all(|p| n % (p * p) != 0);
            match d.rem_euclid(4) {
                1 => sf(-d),
                0 => matches!((d / 4).rem_euclid(4), 2 | 3) && sf(-d / 4),
                _ => false,
            }
        })
        .collect()
}

/// χ_d(a) by brute force: multiplicative extension of the Legendre symbols
/// computed by Euler's criterion, with the 2-part from d mod 8.
pub fn kronecker_oracle(d: i64, a: u64) -> i32 {
    let mut n = a;
    let mut r = 1;
    let mut p = 2u64;
    while n > 1 {
        if p * p > n {
            p = n;
        }
        while n % p == 0 {
            n /= p;
            r *= if p == 2 {
                match d.rem_euclid(8) {
                    1 | 7 => 1,
                    3 | 5 => -1,
                    _ => 0,
                }
            } else {
                let m = d.rem_euclid(p as i64) as u64;
                if m == 0 {
                    0
                } else {
                    let mut e = (p - 1) / 2;
                    let mut base = m;
                    let mut acc = 1u64;
                    while e > 0 {
                        if e & 1 == 1 {
                            acc = acc * base % p;
                        }
                        base = base * base % p;
                        e >>= 1;
                    }
                    if acc == 1 {
                        1
                    } else {
                        -1
                    }
                }
            };
        }
        p += 1;
    }
    r
}

const BERNOULLI_2J: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

/// ζ(s, x) for real s near 0 by Euler–Maclaurin with N direct terms.
pub fn hurwitz_zeta(s: f64, x: f64) -> f64 {
    let n = 30usize;
    let mut sum: f64 = (0..n).map(|k| (k as f64 + x).powf(-s)).sum();
    let y = n as f64 + x;
    sum += y.powf(1.0 - s) / (s - 1.0) + 0.5 * y.powf(-s);
    let mut rising = s;
    let mut fact = 2.0;
    for (j, b) in BERNOULLI_2J.iter().enumerate() {
        let k = 2 * (j + 1);
        sum += b / fact * rising * y.powf(-s - k as f64 + 1.0);
        rising *= (s + k as f64 - 1.0) * (s + k as f64);
        fact *= ((k + 1) * (k + 2)) as f64;
    }
    sum
}

/// L(s, χ_d) = f^{−s} Σ χ(a) ζ(s, a/f).
pub fn l_series(d: i64, s: f64) -> f64 {
    let f = d.unsigned_abs();
    let scale = (f as f64).powf(-s);
    scale * (1..f).map(|a| kronecker_oracle(d, a) as f64 * hurwitz_zeta(s, a as f64 / f as f64)).sum::<f64>()
}

/// Central difference of `l_series` at 0 with step 10⁻⁵.
pub fn l_deriv_numeric(d: i64) -> f64 {
    let h = 1e-5;
    (l_series(d, h) - l_series(d, -h)) / (2.0 * h)
}

/// Orbit count of ε-subsets by union-find over generator images, with no
/// canonical forms or cycle indices involved.
pub fn orbit_count_union_find(group: &Psl2, epsilon: u32) -> u64 {
    let n = group.q() as usize + 1;
    let masks: Vec<u32> = (0u32..1 << n).filter(|m| m.count_ones() == epsilon).collect();
    let index: std::collections::HashMap<u32, usize> = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let mut parent: Vec<usize> = (0..masks.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let f = group.field();
    let gens = [group.w(), group.upper_unipotent(colmez_core::Fe::ONE), group.diagonal(f.primitive_element())];
    let perms: Vec<Vec<u32>> = gens.iter().map(|g| group.p1_permutation(g)).collect();
    for (i, &m) in masks.iter().enumerate() {
        for perm in &perms {
            let mut image = 0u32;
            for (s, &t) in perm.iter().enumerate() {
                if m >> s & 1 == 1 {
                    image |= 1 << t;
                }
            }
            let j = index[&image];
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            parent[a] = b;
        }
    }
    (0..masks.len()).filter(|&i| find(&mut parent, i) == i).count() as u64
}

pub fn cm_type_from_mask(q: u32, mask: u64) -> CmType {
    CmType::new(q, (0..=q).map(|i| mask >> i & 1 == 1).collect()).unwrap()
}
