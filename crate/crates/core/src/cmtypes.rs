//! CM types as 0/1 assignments on the q + 1 cosets of B, identified with
//! P¹(F_q) through hB ↦ h·∞. A set bit marks the ρ-twisted slot.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashSet;
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand_core::RngCore;

use crate::error::CmTypeError;
use crate::psl2::{P1Point, ProjectiveMatrix, Psl2};

/// Largest slot count for exhaustive subset enumeration.
pub const EXHAUSTIVE_MAX_SLOTS: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CmType {
    bits: Vec<bool>,
}

impl CmType {
    pub fn new(q: u32, bits: Vec<bool>) -> Result<Self, CmTypeError> {
        let expected = q as usize + 1;
        if bits.len() != expected {
            return Err(CmTypeError::WrongLength { expected, found: bits.len() });
        }
        Ok(CmType { bits })
    }

    pub fn zeros(q: u32) -> Self {
        CmType { bits: vec![false; q as usize + 1] }
    }

    /// Parses a string of `0`/`1` characters in slot order.
    pub fn from_bit_string(q: u32, s: &str) -> Result<Self, CmTypeError> {
        let bits = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(CmTypeError::BadBitString(s.into())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(q, bits)
    }

    /// The type whose set bits are exactly the given points.
    pub fn from_points(q: u32, points: &[P1Point]) -> Self {
        let mut t = Self::zeros(q);
        for p in points {
            t.bits[p.index()] = true;
        }
        t
    }

    /// A uniformly random type of signature ε.
    pub fn random<R: RngCore>(q: u32, epsilon: u32, rng: &mut R) -> Result<Self, CmTypeError> {
        let n = q as usize + 1;
        if epsilon as usize > n {
            return Err(CmTypeError::SignatureOutOfRange { epsilon, max: n as u32 });
        }
        let mut slots: Vec<usize> = (0..n).collect();
        for i in 0..epsilon as usize {
            let j = i + (rng.next_u64() % (n - i) as u64) as usize;
            slots.swap(i, j);
        }
        let mut t = Self::zeros(q);
        for &s in &slots[..epsilon as usize] {
            t.bits[s] = true;
        }
        Ok(t)
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn slots(&self) -> usize {
        self.bits.len()
    }

    pub fn q(&self) -> u32 {
        self.bits.len() as u32 - 1
    }

    pub fn bit(&self, slot: usize) -> bool {
        self.bits[slot]
    }

    pub fn is_set(&self, x: P1Point) -> bool {
        self.bits[x.index()]
    }

    /// ε, the number of set bits over all q + 1 slots.
    pub fn signature(&self) -> u32 {
        self.bits.iter().filter(|&&b| b).count() as u32
    }

    /// The ρ-flip.
    pub fn complement(&self) -> Self {
        CmType { bits: self.bits.iter().map(|b| !b).collect() }
    }

    pub fn to_bit_string(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    /// Slot names in bit-string order, for serialization headers.
    pub fn slot_dictionary(group: &Psl2) -> Vec<String> {
        group.p1_points().map(|x| group.render_point(x)).collect()
    }
}

/// Bit at g·x of the result equals the bit at x of `phi`.
pub fn act(group: &Psl2, g: &ProjectiveMatrix, phi: &CmType) -> CmType {
    let perm = group.p1_permutation(g);
    let mut bits = vec![false; phi.bits.len()];
    for (x, &b) in phi.bits.iter().enumerate() {
        bits[perm[x] as usize] = b;
    }
    CmType { bits }
}

fn act_with(perm: &[u32], phi: &CmType) -> CmType {
    let mut bits = vec![false; phi.bits.len()];
    for (x, &b) in phi.bits.iter().enumerate() {
        bits[perm[x] as usize] = b;
    }
    CmType { bits }
}

/// Whether some g maps Φ₁ to Φ₂ (or, with `include_rho`, to its complement).
pub fn equivalent(group: &Psl2, a: &CmType, b: &CmType, include_rho: bool) -> bool {
    if a.bits.len() != b.bits.len() {
        return false;
    }
    let eps = a.signature();
    let plain = eps == b.signature();
    let flipped = include_rho && eps as usize == b.bits.len() - b.signature() as usize;
    if !plain && !flipped {
        return false;
    }
    let bc = b.complement();
    group.elements().iter().any(|g| {
        let img = act(group, g, a);
        (plain && img == *b) || (flipped && img == bc)
    })
}

/// Lexicographically least bit sequence in the PSL₂-orbit.
pub fn canonical_form(group: &Psl2, phi: &CmType) -> CmType {
    group
        .elements()
        .iter()
        .map(|g| act(group, g, phi))
        .min()
        .expect("group is nonempty")
}

/// All g with g·Φ = Φ.
pub fn stabilizer(group: &Psl2, phi: &CmType) -> Vec<ProjectiveMatrix> {
    group.elements().into_iter().filter(|g| act(group, g, phi) == *phi).collect()
}

/// The distinct images of Φ.
pub fn orbit(group: &Psl2, phi: &CmType) -> Vec<CmType> {
    let mut seen: HashSet<CmType> = HashSet::new();
    let perms: Vec<Vec<u32>> = group.elements().iter().map(|g| group.p1_permutation(g)).collect();
    for p in &perms {
        seen.insert(act_with(p, phi));
    }
    let mut out: Vec<_> = seen.into_iter().collect();
    out.sort_unstable();
    out
}

/// Cycle lengths of g on P¹.
pub fn cycle_type(group: &Psl2, g: &ProjectiveMatrix) -> Vec<u32> {
    let perm = group.p1_permutation(g);
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x] as usize;
            len += 1;
        }
        out.push(len);
    }
    out.sort_unstable();
    out
}

/// Coefficients of Π_ℓ (1 + x^ℓ).
fn cycle_polynomial(cycles: &[u32]) -> Vec<BigUint> {
    let total: u32 = cycles.iter().sum();
    let mut poly = vec![BigUint::zero(); total as usize + 1];
    poly[0] = BigUint::from(1u32);
    let mut deg = 0usize;
    for &l in cycles {
        let l = l as usize;
        for i in (0..=deg).rev() {
            if !poly[i].is_zero() {
                let v = poly[i].clone();
                poly[i + l] += v;
            }
        }
        deg += l;
    }
    poly
}

/// Per-class data for Burnside counting: class size and cycle type.
#[derive(Clone, Debug)]
pub struct CycleIndex {
    group_order: u64,
    slots: u32,
    classes: Vec<(u64, Vec<u32>)>,
}

impl CycleIndex {
    pub fn new(group: &Psl2) -> Self {
        let classes = group
            .classes()
            .iter()
            .map(|c| (c.size, cycle_type(group, &c.representative)))
            .collect();
        CycleIndex { group_order: group.order(), slots: group.q() + 1, classes }
    }

    /// Number of PSL₂-orbits on ε-subsets of P¹.
    pub fn count(&self, epsilon: u32) -> Result<BigUint, CmTypeError> {
        if epsilon > self.slots {
            return Err(CmTypeError::SignatureOutOfRange { epsilon, max: self.slots });
        }
        let mut total = BigUint::zero();
        for (size, cycles) in &self.classes {
            total += cycle_polynomial(cycles)[epsilon as usize].clone() * BigUint::from(*size);
        }
        let (quot, rem) = total.div_rem(&BigUint::from(self.group_order));
        debug_assert!(rem.is_zero(), "Burnside sum must be divisible by |G|");
        Ok(quot)
    }

    /// Orbits of (q+1)/2-subsets under PSL₂ × ⟨ρ⟩, with ρ acting by
    /// complement. An element g·ρ fixes S iff g maps S onto its complement,
    /// which needs every cycle of g to have even length and then has
    /// 2^{#cycles} solutions.
    pub fn count_with_rho_middle(&self) -> Option<BigUint> {
        if self.slots % 2 != 0 {
            return None;
        }
        let eps = self.slots / 2;
        let mut total = BigUint::zero();
        for (size, cycles) in &self.classes {
            let plain = cycle_polynomial(cycles)[eps as usize].clone();
            let twisted = if cycles.iter().all(|l| l % 2 == 0) {
                BigUint::from(1u32) << cycles.len()
            } else {
                BigUint::zero()
            };
            total += (plain + twisted) * BigUint::from(*size);
        }
        let (quot, rem) = total.div_rem(&(BigUint::from(self.group_order) * 2u32));
        debug_assert!(rem.is_zero());
        Some(quot)
    }
}

/// Number of PSL₂-orbits of CM types of signature ε, by Burnside's lemma.
pub fn count_orbits_burnside(group: &Psl2, epsilon: u32) -> Result<BigUint, CmTypeError> {
    CycleIndex::new(group).count(epsilon)
}

/// Slot permutations as bit-position maps on masks whose bit (n − 1 − i)
/// holds slot i, so numeric order on masks is lexicographic order on types.
struct MaskAction {
    n: usize,
    perms: Vec<Vec<u8>>,
}

impl MaskAction {
    fn new(group: &Psl2) -> Result<Self, CmTypeError> {
        let n = group.q() as usize + 1;
        if n > EXHAUSTIVE_MAX_SLOTS {
            return Err(CmTypeError::TooManySlots { slots: n, max: EXHAUSTIVE_MAX_SLOTS });
        }
        let perms = group
            .elements()
            .iter()
            .map(|g| {
                let p = group.p1_permutation(g);
                (0..n).map(|bit| (n - 1 - p[n - 1 - bit] as usize) as u8).collect()
            })
            .collect();
        Ok(MaskAction { n, perms })
    }

    #[inline]
    fn apply(perm: &[u8], mut mask: u32) -> u32 {
        let mut out = 0u32;
        while mask != 0 {
            let bit = mask.trailing_zeros();
            out |= 1 << perm[bit as usize];
            mask &= mask - 1;
        }
        out
    }
}

/// Exhaustive orbit data for one signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExhaustiveCount {
    /// PSL₂-orbits.
    pub orbits: u64,
    /// Orbits under PSL₂ together with ρ (only differs at the middle ε).
    pub orbits_with_rho: u64,
    /// Σ orbit sizes, which must equal C(q+1, ε).
    pub total: u64,
}

/// Counts orbits by visiting every ε-subset.
pub fn count_orbits_exhaustive(group: &Psl2, epsilon: u32) -> Result<ExhaustiveCount, CmTypeError> {
    let action = MaskAction::new(group)?;
    let n = action.n;
    if epsilon as usize > n {
        return Err(CmTypeError::SignatureOutOfRange { epsilon, max: n as u32 });
    }
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut seen: HashSet<u32> = HashSet::new();
    let mut canon_reps: Vec<u32> = Vec::new();
    let mut total = 0u64;
    for mask in subsets_of_size(n, epsilon as usize) {
        if seen.contains(&mask) {
            continue;
        }
        let mut orbit_min = mask;
        let mut size = 0u64;
        for p in &action.perms {
            let img = MaskAction::apply(p, mask);
            if seen.insert(img) {
                size += 1;
                orbit_min = orbit_min.min(img);
            }
        }
        total += size;
        canon_reps.push(orbit_min);
    }
    let orbits = canon_reps.len() as u64;
    let orbits_with_rho = if 2 * epsilon as usize == n {
        let reps: HashSet<u32> = canon_reps.iter().copied().collect();
        let mut merged = 0u64;
        let mut done: HashSet<u32> = HashSet::new();
        for &r in &canon_reps {
            if done.contains(&r) {
                continue;
            }
            done.insert(r);
            let comp = full & !r;
            let comp_min = action.perms.iter().map(|p| MaskAction::apply(p, comp)).min().unwrap_or(comp);
            debug_assert!(reps.contains(&comp_min));
            done.insert(comp_min);
            merged += 1;
        }
        merged
    } else {
        orbits
    };
    Ok(ExhaustiveCount { orbits, orbits_with_rho, total })
}

fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = u32> {
    let limit = 1u64 << n;
    let first = if k == 0 { 0u64 } else { (1u64 << k) - 1 };
    let mut next = Some(first);
    core::iter::from_fn(move || {
        let cur = next?;
        if cur >= limit {
            return None;
        }
        next = if cur == 0 {
            None
        } else {
            // Gosper's hack.
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            Some((((r ^ cur) >> 2) / c) | r)
        };
        Some(cur as u32)
    })
}

/// One row of the orbit census.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusRow {
    pub q: u32,
    /// PSL₂-orbit counts for ε = 0, 1, …, max ε.
    pub counts: Vec<BigUint>,
    /// Count under PSL₂ × ⟨ρ⟩ at ε = (q+1)/2, when that column is present.
    pub middle_with_rho: Option<BigUint>,
    /// Whether the row was confirmed by exhaustive enumeration.
    pub exhaustive_checked: bool,
}

impl CensusRow {
    /// The ε = 1 … max ε entries, as in the published layout.
    pub fn published(&self) -> &[BigUint] {
        &self.counts[1..]
    }

    /// True when the ρ-augmented middle count differs from the PSL₂ count.
    pub fn middle_discrepancy(&self) -> bool {
        match &self.middle_with_rho {
            Some(r) => self.counts.get((self.q as usize).div_ceil(2)).is_some_and(|c| c != r),
            None => false,
        }
    }
}

/// Orbit counts for ε = 0 … max ε. Rows with q ≤ 13 are cross-checked by
/// exhaustive enumeration.
pub fn census(group: &Psl2, max_epsilon: u32) -> Result<CensusRow, CmTypeError> {
    let q = group.q();
    if max_epsilon > q + 1 {
        return Err(CmTypeError::SignatureOutOfRange { epsilon: max_epsilon, max: q + 1 });
    }
    let index = CycleIndex::new(group);
    let counts = (0..=max_epsilon).map(|e| index.count(e)).collect::<Result<Vec<_>, _>>()?;
    let middle = q.div_ceil(2);
    let middle_with_rho = if middle <= max_epsilon { index.count_with_rho_middle() } else { None };
    let exhaustive_checked = q <= 13;
    if exhaustive_checked {
        for (e, c) in counts.iter().enumerate() {
            let ex = count_orbits_exhaustive(group, e as u32)?;
            if c.to_u64() != Some(ex.orbits) {
                return Err(CmTypeError::CensusMismatch { q, epsilon: e as u32 });
            }
            if e as u32 == middle && middle_with_rho.as_ref().and_then(|m| m.to_u64()) != Some(ex.orbits_with_rho) {
                return Err(CmTypeError::CensusMismatch { q, epsilon: e as u32 });
            }
        }
    }
    Ok(CensusRow { q, counts, middle_with_rho, exhaustive_checked })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fe;
    use rand_chacha::ChaCha8Rng;
    use rand_core::SeedableRng;

    fn as_u64(v: &[BigUint]) -> Vec<u64> {
        v.iter().map(|x| x.to_u64().unwrap()).collect()
    }

    #[test]
    fn parsing() {
        assert!(CmType::from_bit_string(7, "10100000").is_ok());
        assert_eq!(
            CmType::from_bit_string(7, "101"),
            Err(CmTypeError::WrongLength { expected: 8, found: 3 })
        );
        assert!(matches!(CmType::from_bit_string(7, "1010000x"), Err(CmTypeError::BadBitString(_))));
        let t = CmType::from_bit_string(7, "10100001").unwrap();
        assert_eq!(t.signature(), 3);
        assert_eq!(t.complement().to_bit_string(), "01011110");
    }

    #[test]
    fn action_axioms() {
        let g = Psl2::from_order(7).unwrap();
        let els = g.elements();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let phi = CmType::random(7, rng.next_u32() % 9, &mut rng).unwrap();
            assert_eq!(act(&g, &g.identity(), &phi), phi);
            let a = els[rng.next_u32() as usize % els.len()];
            let b = els[rng.next_u32() as usize % els.len()];
            assert_eq!(act(&g, &a, &act(&g, &b, &phi)), act(&g, &g.mul(&a, &b), &phi));
            assert_eq!(canonical_form(&g, &act(&g, &a, &phi)), canonical_form(&g, &phi));
            assert!(equivalent(&g, &phi, &act(&g, &a, &phi), false));
        }
    }

    #[test]
    fn translate_example_q7() {
        let g = Psl2::from_order(7).unwrap();
        let f = g.field();
        let zero = P1Point::Affine(Fe::ZERO);
        let one = P1Point::Affine(Fe::ONE);
        let minus_one = P1Point::Affine(f.neg(Fe::ONE));
        let phi = CmType::from_points(7, &[zero, P1Point::Infinity, one]);
        let img = act(&g, &g.n_minus(f.neg(Fe::ONE)), &phi);
        assert_eq!(img, CmType::from_points(7, &[zero, minus_one, P1Point::Infinity]));
    }

    #[test]
    fn signature_one_types_are_equivalent() {
        let g = Psl2::from_order(7).unwrap();
        let base = CmType::from_points(7, &[P1Point::Infinity]);
        for x in g.p1_points() {
            assert!(equivalent(&g, &base, &CmType::from_points(7, &[x]), false));
        }
    }

    #[test]
    fn two_orbits_of_three_sets_q13() {
        let g = Psl2::from_order(13).unwrap();
        let f = g.field();
        let delta = f.fixed_nonsquare();
        let pt = |i: Fe| P1Point::Affine(f.inv(i));
        let a = CmType::from_points(13, &[P1Point::Affine(Fe::ZERO), P1Point::Infinity, pt(Fe::ONE)]);
        let b = CmType::from_points(13, &[P1Point::Affine(Fe::ZERO), P1Point::Infinity, pt(delta)]);
        assert!(!equivalent(&g, &a, &b, false));
        assert_eq!(stabilizer(&g, &a).len(), 6);
    }

    #[test]
    fn orbit_stabilizer_q7() {
        let g = Psl2::from_order(7).unwrap();
        for mask in subsets_of_size(8, 3) {
            let bits = (0..8).map(|i| mask >> i & 1 == 1).collect();
            let phi = CmType::new(7, bits).unwrap();
            assert_eq!(orbit(&g, &phi).len() * stabilizer(&g, &phi).len(), 168);
        }
        let all = stabilizer(&g, &CmType::zeros(7));
        assert_eq!(all.len(), 168);
    }

    #[test]
    fn canonical_forms_q7_eps4() {
        let g = Psl2::from_order(7).unwrap();
        let forms: HashSet<CmType> = subsets_of_size(8, 4)
            .map(|mask| CmType::new(7, (0..8).map(|i| mask >> i & 1 == 1).collect()).unwrap())
            .map(|phi| canonical_form(&g, &phi))
            .collect();
        assert_eq!(forms.len(), 3);
        assert_eq!(canonical_form(&g, &CmType::zeros(7)), CmType::zeros(7));
    }

    #[test]
    fn subset_enumeration() {
        assert_eq!(subsets_of_size(5, 0).count(), 1);
        assert_eq!(subsets_of_size(5, 2).count(), 10);
        assert_eq!(subsets_of_size(5, 5).count(), 1);
        assert!(subsets_of_size(6, 3).all(|m| m.count_ones() == 3));
    }

    #[test]
    fn burnside_examples() {
        let g7 = Psl2::from_order(7).unwrap();
        assert_eq!(count_orbits_burnside(&g7, 4).unwrap(), BigUint::from(3u32));
        let g25 = Psl2::from_order(25).unwrap();
        assert_eq!(count_orbits_burnside(&g25, 5).unwrap(), BigUint::from(16u32));
        assert!(count_orbits_burnside(&g7, 9).is_err());
    }

    #[test]
    fn census_rows() {
        let row = census(&Psl2::from_order(7).unwrap(), 7).unwrap();
        assert_eq!(as_u64(row.published()), [1, 1, 1, 3, 1, 1, 1]);
        assert!(row.exhaustive_checked);
        let row = census(&Psl2::from_order(9).unwrap(), 7).unwrap();
        assert_eq!(as_u64(row.published()), [1, 1, 2, 3, 4, 3, 2]);
    }

    #[test]
    fn burnside_matches_exhaustive() {
        for q in [3u32, 5, 7, 9, 11, 13] {
            let g = Psl2::from_order(q).unwrap();
            let index = CycleIndex::new(&g);
            for e in 0..=q + 1 {
                let ex = count_orbits_exhaustive(&g, e).unwrap();
                assert_eq!(index.count(e).unwrap().to_u64(), Some(ex.orbits), "q={q} e={e}");
                let binom = (0..e as u64).fold(1u64, |acc, i| acc * (q as u64 + 1 - i) / (i + 1));
                assert_eq!(ex.total, binom);
                if 2 * e == q + 1 {
                    assert_eq!(index.count_with_rho_middle().unwrap().to_u64(), Some(ex.orbits_with_rho));
                }
            }
        }
    }

    #[test]
    fn exhaustive_bound() {
        let g = Psl2::from_order(31).unwrap();
        assert!(matches!(count_orbits_exhaustive(&g, 3), Err(CmTypeError::TooManySlots { .. })));
    }
}
