//! The group ring of G = PSL₂(F_q) × Z/2, the extension Φ ↦ Φ^c, the reflex
//! type, the convolution A_Φ and its class-function projection A_Φ⁰, together
//! with the class-multiset and class-function identities behind the closed
//! form of A_Φ⁰.
//!
//! Class functions on G are stored per (conjugacy class, ρ-bit). A group-ring
//! class sum corresponds to the indicator function of its class, so the
//! conjugation average of a group-ring element has value
//! (Σ_{h ∈ C} coefficient of h) / |C| on C.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;
use num_traits::{One, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::chartable::{induce_from_subgroup, CharLabel, CharacterTable, ClassFunctionQ};
use crate::cmtypes::CmType;
use crate::cyclotomic::{rational, rational_int, CycloNumber, Rational};
use crate::error::{CmTypeError, ColmezError};
use crate::field::{Fe, Field, RepSetA};
use crate::psl2::{ConjClassLabel, P1Point, ProjectiveMatrix, Psl2};

/// Slot carrying the w coset (P¹ point 0); its bit is the one normalized to 0
/// before comparing with the closed form.
pub const W_SLOT: usize = 1;

/// Largest slot count accepted for exhaustive sweeps.
pub const SWEEP_MAX_SLOTS: u32 = 20;

/// An element (g, r) of PSL₂(F_q) × Z/2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GalElement {
    pub g: ProjectiveMatrix,
    pub r: bool,
}

impl GalElement {
    pub fn new(g: ProjectiveMatrix, r: bool) -> Self {
        GalElement { g, r }
    }

    pub fn mul(&self, group: &Psl2, other: &GalElement) -> GalElement {
        GalElement { g: group.mul(&self.g, &other.g), r: self.r ^ other.r }
    }

    pub fn inv(&self, group: &Psl2) -> GalElement {
        GalElement { g: group.inv(&self.g), r: self.r }
    }
}

/// A finitely supported Q-combination of elements of G.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupRingElement {
    coeffs: HashMap<GalElement, Rational>,
}

impl GroupRingElement {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn delta(x: GalElement) -> Self {
        let mut e = Self::new();
        e.add_term(x, Rational::one());
        e
    }

    pub fn add_term(&mut self, x: GalElement, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(x).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&x);
        }
    }

    pub fn coefficient(&self, x: &GalElement) -> Rational {
        self.coeffs.get(x).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GalElement, &Rational)> {
        self.coeffs.iter()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::new();
        for (x, v) in &self.coeffs {
            out.add_term(*x, v * c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (x, v) in &other.coeffs {
            out.add_term(*x, v.clone());
        }
        out
    }

    /// Coefficient of x in the result is the coefficient of x⁻¹ here.
    pub fn reflex(&self, group: &Psl2) -> Self {
        GroupRingElement { coeffs: self.coeffs.iter().map(|(x, v)| (x.inv(group), v.clone())).collect() }
    }

    /// The ring product.
    pub fn convolve(&self, other: &Self, group: &Psl2) -> Self {
        let mut acc: HashMap<GalElement, Rational> = HashMap::new();
        for (x, a) in &self.coeffs {
            for (y, b) in &other.coeffs {
                *acc.entry(x.mul(group, y)).or_insert_with(Rational::zero) += a * b;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        GroupRingElement { coeffs: acc }
    }

    /// Conjugation average, as a class function on G.
    pub fn project(&self, group: &Psl2) -> ExtClassFunction {
        let nc = group.class_count();
        let mut sums = vec![Rational::zero(); 2 * nc];
        for (x, v) in &self.coeffs {
            sums[x.r as usize * nc + group.class_of(&x.g)] += v;
        }
        for (i, s) in sums.iter_mut().enumerate() {
            *s /= rational_int(group.classes()[i % nc].size as i64);
        }
        ExtClassFunction { classes: nc, values: sums }
    }
}

/// A Q-valued class function on G, indexed by (class index, ρ-bit).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtClassFunction {
    classes: usize,
    values: Vec<Rational>,
}

impl ExtClassFunction {
    pub fn zero(classes: usize) -> Self {
        ExtClassFunction { classes, values: vec![Rational::zero(); 2 * classes] }
    }

    pub fn from_parts(even: &ClassFunctionQ, odd: &ClassFunctionQ) -> Self {
        let mut values = even.values.clone();
        values.extend(odd.values.iter().cloned());
        ExtClassFunction { classes: even.len(), values }
    }

    /// T(g, r) = [r = 0], the class function of tr_{E^c/k}.
    pub fn trace_indicator(classes: usize) -> Self {
        let mut f = Self::zero(classes);
        for c in 0..classes {
            f.values[c] = Rational::one();
        }
        f
    }

    /// (1 − ρ)·f for a class function f of PSL₂, i.e. (g, r) ↦ (−1)^r f(g).
    pub fn twisted(f: &ClassFunctionQ) -> Self {
        let odd = ClassFunctionQ::new(f.values.iter().map(|v| -v).collect());
        Self::from_parts(f, &odd)
    }

    pub fn class_count(&self) -> usize {
        self.classes
    }

    pub fn get(&self, class: usize, rho: bool) -> &Rational {
        &self.values[rho as usize * self.classes + class]
    }

    pub fn set(&mut self, class: usize, rho: bool, v: Rational) {
        self.values[rho as usize * self.classes + class] = v;
    }

    pub fn part(&self, rho: bool) -> ClassFunctionQ {
        let start = rho as usize * self.classes;
        ClassFunctionQ::new(self.values[start..start + self.classes].to_vec())
    }

    pub fn add(&self, other: &Self) -> Self {
        ExtClassFunction {
            classes: self.classes,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        ExtClassFunction {
            classes: self.classes,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        ExtClassFunction { classes: self.classes, values: self.values.iter().map(|a| a * c).collect() }
    }

    /// The group-ring twist (1 − ρ)·F: (g, r) ↦ F(g, r) − F(g, r ⊕ 1).
    pub fn one_minus_rho(&self) -> Self {
        let mut out = Self::zero(self.classes);
        for c in 0..self.classes {
            for r in [false, true] {
                out.set(c, r, self.get(c, r) - self.get(c, !r));
            }
        }
        out
    }

    /// Σ_{(C, r)} |C|·F(C, r).
    pub fn weighted_total(&self, group: &Psl2) -> Rational {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| v * rational_int(group.classes()[i % self.classes].size as i64))
            .sum()
    }

    /// Entries as (class index, ρ-bit, value), even part first.
    pub fn entries(&self) -> impl Iterator<Item = (usize, bool, &Rational)> {
        self.values.iter().enumerate().map(move |(i, v)| (i % self.classes, i >= self.classes, v))
    }
}

/// Φ^c: every element of the coset g_s·B for each slot s, with ρ-bit equal to
/// the slot's bit.
pub fn extend_cm_type(group: &Psl2, phi: &CmType) -> GroupRingElement {
    let borel = group.borel_elements();
    let mut out = GroupRingElement::new();
    for (slot, rep) in group.slot_reps().iter().enumerate() {
        for b in &borel {
            out.add_term(GalElement::new(group.mul(rep, b), phi.bit(slot)), Rational::one());
        }
    }
    out
}

/// A_Φ = Φ^c·(Φ^c)~ / [E^c : Q], computed literally in the group ring.
pub fn a_phi(group: &Psl2, phi: &CmType) -> GroupRingElement {
    let ext = extend_cm_type(group, phi);
    let n = 2 * group.order() as i64;
    ext.convolve(&ext.reflex(group), group).scale(&rational(1, n))
}

/// ε(q+1−ε) / (q(q+1)) and ε(q+1−ε) / (q(q+1)²).
pub fn closed_form_coefficients(q: u32, epsilon: u32) -> (Rational, Rational) {
    let q = q as i64;
    let e = epsilon as i64;
    let num = e * (q + 1 - e);
    (rational(num, q * (q + 1)), rational(num, q * (q + 1) * (q + 1)))
}

/// How CM types are chosen for a sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SamplingPolicy {
    /// Every one of the 2^{q+1} types, in increasing mask order (bit i of the
    /// mask is slot i).
    Exhaustive,
    /// Uniformly random bit patterns from a ChaCha8 stream.
    Random { samples: u64, seed: u64 },
}

impl SamplingPolicy {
    /// Exhaustive up to q = 11, otherwise 10⁴ seeded samples.
    pub fn default_for(q: u32, seed: u64) -> Self {
        if q <= 11 {
            SamplingPolicy::Exhaustive
        } else {
            SamplingPolicy::Random { samples: 10_000, seed }
        }
    }

    pub fn cm_types(&self, q: u32) -> Result<Vec<CmType>, ColmezError> {
        let slots = q + 1;
        match *self {
            SamplingPolicy::Exhaustive => {
                if slots > SWEEP_MAX_SLOTS {
                    return Err(ColmezError::SweepTooLarge(slots));
                }
                Ok((0..1u64 << slots).map(|mask| mask_type(q, mask)).collect())
            }
            SamplingPolicy::Random { samples, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                Ok((0..samples)
                    .map(|_| {
                        let bits = (0..slots).map(|_| rng.next_u32() & 1 == 1).collect();
                        CmType::new(q, bits).expect("length is q + 1")
                    })
                    .collect())
            }
        }
    }
}

fn mask_type(q: u32, mask: u64) -> CmType {
    CmType::new(q, (0..=q).map(|i| mask >> i & 1 == 1).collect()).expect("length is q + 1")
}

/// Outcome of a closed-form sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub q: u32,
    pub exhaustive: bool,
    pub tested: u64,
    pub passed: u64,
    /// First failures, in sweep order.
    pub failures: Vec<ColmezError>,
    /// Intermediate displays that disagreed with the brute-force value. These
    /// do not count as failures.
    pub flagged: Vec<String>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.passed == self.tested
    }
}

/// Precomputed data for evaluating A_Φ⁰ through coset counts.
///
/// Writing Φ^c = Σ_s (g_s B, e_s), one gets
/// Φ^c·(Φ^c)~ = |B|·Σ_{s,t} Σ_{b ∈ B} (g_s b g_t⁻¹, e_s ⊕ e_t), so A_Φ⁰ only
/// needs M[s][t][C] = #{b ∈ B : g_s b g_t⁻¹ ∈ C}.
#[derive(Clone, Debug)]
pub struct ColmezContext {
    group: Psl2,
    slots: usize,
    borel_len: u64,
    counts: Vec<u32>,
    fixed: Vec<u32>,
}

impl ColmezContext {
    pub fn new(group: &Psl2) -> Self {
        let slots = group.q() as usize + 1;
        let nc = group.class_count();
        let reps = group.slot_reps();
        let inv_reps: Vec<_> = reps.iter().map(|g| group.inv(g)).collect();
        let borel = group.borel_elements();
        let mut counts = vec![0u32; slots * slots * nc];
        for (s, gs) in reps.iter().enumerate() {
            let left: Vec<_> = borel.iter().map(|b| group.mul(gs, b)).collect();
            for (t, gt_inv) in inv_reps.iter().enumerate() {
                let base = (s * slots + t) * nc;
                for x in &left {
                    counts[base + group.class_of(&group.mul(x, gt_inv))] += 1;
                }
            }
        }
        let fixed = group.classes().iter().map(|c| group.fixed_points(&c.representative)).collect();
        ColmezContext { group: group.clone(), slots, borel_len: borel.len() as u64, counts, fixed }
    }

    pub fn group(&self) -> &Psl2 {
        &self.group
    }

    /// Number of fixed points on P¹ for each class (the permutation character
    /// Ind_B(χ₀)).
    pub fn fixed_points(&self) -> &[u32] {
        &self.fixed
    }

    /// The class multiset of g_s·B·g_t⁻¹.
    pub fn coset_product_counts(&self, s: usize, t: usize) -> &[u32] {
        let nc = self.group.class_count();
        let base = (s * self.slots + t) * nc;
        &self.counts[base..base + nc]
    }

    fn check_length(&self, phi: &CmType) -> Result<(), ColmezError> {
        if phi.slots() != self.slots {
            return Err(CmTypeError::WrongLength { expected: self.slots, found: phi.slots() }.into());
        }
        Ok(())
    }

    /// A_Φ⁰ through the coset counts.
    pub fn a_phi0(&self, phi: &CmType) -> Result<ExtClassFunction, ColmezError> {
        self.check_length(phi)?;
        let nc = self.group.class_count();
        let mut acc = vec![0u64; 2 * nc];
        for s in 0..self.slots {
            for t in 0..self.slots {
                let r = (phi.bit(s) ^ phi.bit(t)) as usize;
                let base = (s * self.slots + t) * nc;
                for c in 0..nc {
                    acc[r * nc + c] += self.counts[base + c] as u64;
                }
            }
        }
        let n = 2 * self.group.order();
        let values = acc
            .iter()
            .enumerate()
            .map(|(i, &a)| {
                let size = self.group.classes()[i % nc].size;
                Rational::new((a * self.borel_len).into(), (n * size).into())
            })
            .collect();
        Ok(ExtClassFunction { classes: nc, values })
    }

    /// A_Φ⁰ by projecting the literal group-ring product.
    pub fn a_phi0_direct(&self, phi: &CmType) -> Result<ExtClassFunction, ColmezError> {
        self.check_length(phi)?;
        Ok(a_phi(&self.group, phi).project(&self.group))
    }

    /// ½·T − c·(1−ρ)T + c′·(1−ρ)·Ind_B(χ₀).
    pub fn theorem61_rhs(&self, epsilon: u32) -> Result<ExtClassFunction, ColmezError> {
        let q = self.group.q();
        if epsilon > q + 1 {
            return Err(CmTypeError::SignatureOutOfRange { epsilon, max: q + 1 }.into());
        }
        let nc = self.group.class_count();
        let (c, c2) = closed_form_coefficients(q, epsilon);
        let half = rational(1, 2);
        let mut f = ExtClassFunction::zero(nc);
        for (i, &fix) in self.fixed.iter().enumerate() {
            let ind = &c2 * rational_int(fix as i64);
            f.set(i, false, &half - &c + &ind);
            f.set(i, true, &c - &ind);
        }
        Ok(f)
    }

    fn compare(&self, phi: &CmType, got: &ExtClassFunction, want: &ExtClassFunction) -> Result<(), ColmezError> {
        for (c, r, v) in got.entries() {
            let w = want.get(c, r);
            if v != w {
                return Err(ColmezError::VerificationFailure {
                    cm_type: phi.to_bit_string(),
                    class: self.group.render_label(&self.group.classes()[c].label),
                    rho: r as u8,
                    got: format!("{v}"),
                    expected: format!("{w}"),
                });
            }
        }
        Ok(())
    }

    /// Checks one CM type: after normalizing the w-slot bit to 0 (by taking
    /// the complement if needed), A_Φ⁰ equals the closed form; the
    /// unnormalized type and its complement give the same function.
    pub fn check(&self, phi: &CmType) -> Result<(), ColmezError> {
        let normalized = if phi.bit(W_SLOT) { phi.complement() } else { phi.clone() };
        let got = self.a_phi0(&normalized)?;
        self.compare(&normalized, &got, &self.theorem61_rhs(normalized.signature())?)?;
        let raw = self.a_phi0(phi)?;
        self.compare(phi, &raw, &self.theorem61_rhs(phi.signature())?)?;
        let comp = phi.complement();
        self.compare(&comp, &self.a_phi0(&comp)?, &raw)?;
        Ok(())
    }

    /// Sweeps CM types under `policy`, keeping at most `max_failures`
    /// failures in the report.
    pub fn verify_theorem61(&self, policy: SamplingPolicy, max_failures: usize) -> Result<VerificationReport, ColmezError> {
        let types = policy.cm_types(self.group.q())?;
        let mut report = VerificationReport {
            q: self.group.q(),
            exhaustive: policy == SamplingPolicy::Exhaustive,
            tested: 0,
            passed: 0,
            failures: Vec::new(),
            flagged: Vec::new(),
        };
        for phi in &types {
            report.tested += 1;
            match self.check(phi) {
                Ok(()) => report.passed += 1,
                Err(e) => {
                    if report.failures.len() < max_failures {
                        report.failures.push(e);
                    }
                }
            }
        }
        for eps in 0..=self.group.q() + 1 {
            report.flagged.extend(self.intermediate_flags(eps)?);
        }
        Ok(report)
    }

    /// The simplified ⋆ term before and after rewriting class sums through
    /// induced characters, each compared with A_Φ⁰ − ½T + (ε/(q+1))(1−ρ)T
    /// for a w-normalized type of signature ε. Returns descriptions of
    /// mismatches.
    pub fn intermediate_flags(&self, epsilon: u32) -> Result<Vec<String>, ColmezError> {
        let g = &self.group;
        let q = g.q();
        if epsilon > q {
            return Ok(Vec::new());
        }
        let nc = g.class_count();
        // A w-normalized representative: bits on the first ε non-w slots.
        let mut bits = vec![false; q as usize + 1];
        let mut placed = 0;
        for (slot, b) in bits.iter_mut().enumerate() {
            if slot != W_SLOT && placed < epsilon {
                *b = true;
                placed += 1;
            }
        }
        let phi = CmType::new(q, bits)?;
        let a0 = self.a_phi0(&phi)?;
        let t = ExtClassFunction::trace_indicator(nc);
        let lead = rational(epsilon as i64, q as i64 + 1);
        let star = a0.sub(&t.scale(&rational(1, 2))).add(&t.one_minus_rho().scale(&lead));

        let qi = q as i64;
        let e = epsilon as i64;
        let ind_b = ClassFunctionQ::new(self.fixed.iter().map(|&f| rational_int(f as i64)).collect());
        let trace_q = ClassFunctionQ::new(vec![Rational::one(); nc]);

        let after = ind_b
            .scale(&rational(qi + 1 - e, qi * (qi + 1)))
            .add(&trace_q.scale(&rational(e - 1, qi)));
        let after = ExtClassFunction::twisted(&after).scale(&lead);

        let sums = class_sums(g);
        let fibres = if g.field().is_one_mod_four() {
            sums.split_sum.add(&sums.trace_zero.scale(&rational_int(2)))
        } else {
            sums.split_sum.clone()
        };
        let before = fibres
            .scale(&rational(qi + 1 - e, qi * (qi + 1)))
            .add(&sums.identity.scale(&rational(qi + 1 - e, qi)))
            .add(&sums.unipotent.scale(&rational(qi + 1 - e, qi * (qi + 1))))
            .add(&trace_q.scale(&rational(e - 1, qi)));
        let before = ExtClassFunction::twisted(&before).scale(&lead);

        let mut flags = Vec::new();
        if star != before {
            flags.push(format!("q={q} epsilon={epsilon}: class-sum form of the star term differs from brute force"));
        }
        if star != after {
            flags.push(format!("q={q} epsilon={epsilon}: induced-character form of the star term differs from brute force"));
        }
        Ok(flags)
    }

    /// Coefficients of A_Φ⁰ against the irreducible characters χ ⊗ 1 and
    /// χ ⊗ sgn of G.
    pub fn decompose_a_phi0(
        &self,
        table: &CharacterTable,
        phi: &CmType,
    ) -> Result<Vec<(ExtCharLabel, CycloNumber)>, ColmezError> {
        let a0 = self.a_phi0(phi)?;
        Ok(decompose_ext(table, &a0))
    }
}

/// Irreducible characters of G: a PSL₂ character tensored with the trivial
/// (`odd = false`) or sign (`odd = true`) character of Z/2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExtCharLabel {
    pub chi: CharLabel,
    pub odd: bool,
}

/// ⟨F, χ ⊗ s⟩ over G for every irreducible χ ⊗ s.
pub fn decompose_ext(table: &CharacterTable, f: &ExtClassFunction) -> Vec<(ExtCharLabel, CycloNumber)> {
    let even = f.part(false);
    let odd = f.part(true);
    let half = rational(1, 2);
    let mut out = Vec::new();
    for row in table.rows() {
        for sign in [false, true] {
            let combined = if sign { even.sub(&odd) } else { even.add(&odd) };
            let c = table.inner_product(&combined.to_cyclo(), &row.values).scale(&half);
            out.push((ExtCharLabel { chi: row.label, odd: sign }, c));
        }
    }
    out
}

/// Σ a·(χ ⊗ s), returned as even and odd parts.
pub fn reconstruct_ext(
    table: &CharacterTable,
    coeffs: &[(ExtCharLabel, CycloNumber)],
) -> (crate::chartable::ClassFunctionC, crate::chartable::ClassFunctionC) {
    let nc = table.group().class_count();
    let mut even = crate::chartable::ClassFunction::new(vec![CycloNumber::zero(); nc]);
    let mut odd = even.clone();
    for (label, a) in coeffs {
        if a.is_zero() {
            continue;
        }
        let row = table.row(label.chi).expect("label from this table");
        let term = row.values.scale(a);
        even = even.add(&term);
        odd = odd.add(&if label.odd { term.scale(&CycloNumber::from_integer(-1)) } else { term });
    }
    (even, odd)
}

/// Counts of elements per conjugacy class.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClassMultiset {
    pub counts: BTreeMap<ConjClassLabel, u64>,
}

impl ClassMultiset {
    pub fn of(group: &Psl2, elements: impl IntoIterator<Item = ProjectiveMatrix>) -> Self {
        let mut counts = BTreeMap::new();
        for x in elements {
            *counts.entry(group.classify(&x)).or_insert(0) += 1;
        }
        ClassMultiset { counts }
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn get(&self, label: &ConjClassLabel) -> u64 {
        self.counts.get(label).copied().unwrap_or(0)
    }
}

/// The classes met by n₋(i)·B·n₋(−j).
pub fn class_multiset_of_product(group: &Psl2, i: Fe, j: Fe) -> ClassMultiset {
    let f = group.field();
    let left = group.n_minus(i);
    let right = group.n_minus(f.neg(j));
    ClassMultiset::of(group, group.borel_elements().iter().map(|b| group.mul(&group.mul(&left, b), &right)))
}

pub fn class_multiset_of_borel(group: &Psl2) -> ClassMultiset {
    ClassMultiset::of(group, group.borel_elements())
}

/// The multiset of n₋(i)·B·n₋(−j), i ≠ j: (q−1)/2 in the trace-zero class and
/// in each unipotent class, q − 1 in every other non-identity class.
pub fn expected_product_multiset(group: &Psl2) -> ClassMultiset {
    let h = (group.q() as u64 - 1) / 2;
    let counts = group
        .classes()
        .iter()
        .filter(|c| c.label != ConjClassLabel::Identity)
        .map(|c| {
            let n = match c.label {
                ConjClassLabel::TraceZero | ConjClassLabel::UnipotentSquare | ConjClassLabel::UnipotentNonsquare => h,
                _ => 2 * h,
            };
            (c.label, n)
        })
        .collect();
    ClassMultiset { counts }
}

/// The multiset of B: the identity, (q−1)/2 in each unipotent class, q for
/// each a ∈ F_q*/± (so 2q per split class, as a and a⁻¹ share a class), and q
/// in the trace-zero class when q ≡ 1 (mod 4).
pub fn expected_borel_multiset(group: &Psl2) -> ClassMultiset {
    let q = group.q() as u64;
    let one_mod_four = group.field().is_one_mod_four();
    let mut counts = BTreeMap::new();
    for c in group.classes() {
        let n = match c.label {
            ConjClassLabel::Identity => 1,
            ConjClassLabel::UnipotentSquare | ConjClassLabel::UnipotentNonsquare => (q - 1) / 2,
            ConjClassLabel::Split(_) => 2 * q,
            ConjClassLabel::TraceZero if one_mod_four => q,
            _ => 0,
        };
        if n > 0 {
            counts.insert(c.label, n);
        }
    }
    ClassMultiset { counts }
}

/// Indicator-function sums used by the class-sum identities.
struct ClassSums {
    identity: ClassFunctionQ,
    /// tr□(2) + tr∄(2).
    unipotent: ClassFunctionQ,
    /// Σ over x ∈ A \ {1} (and x ≠ ±√−1) of the class of diag(x, x⁻¹).
    split_sum: ClassFunctionQ,
    trace_zero: ClassFunctionQ,
}

fn class_sums(group: &Psl2) -> ClassSums {
    let nc = group.class_count();
    let f = group.field();
    let idx = |l: ConjClassLabel| group.class_index(&l).expect("class exists");
    let identity = ClassFunctionQ::indicator(nc, idx(ConjClassLabel::Identity));
    let unipotent = ClassFunctionQ::indicator(nc, idx(ConjClassLabel::UnipotentSquare))
        .add(&ClassFunctionQ::indicator(nc, idx(ConjClassLabel::UnipotentNonsquare)));
    let trace_zero = ClassFunctionQ::indicator(nc, idx(ConjClassLabel::TraceZero));
    let minus_one = f.neg(Fe::ONE);
    let mut split_sum = ClassFunctionQ::zero(nc);
    for &x in group.rep_set().elements() {
        if x == Fe::ONE || f.mul(x, x) == minus_one {
            continue;
        }
        split_sum.values[group.class_of(&group.diagonal(x))] += Rational::one();
    }
    ClassSums { identity, unipotent, split_sum, trace_zero }
}

/// One named check in an identity report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: String,
    pub passed: bool,
    /// The first offending class, when the check failed.
    pub class: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub q: u32,
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn into_result(self) -> Result<Self, ColmezError> {
        match self.checks.iter().find(|c| !c.passed) {
            Some(c) => Err(ColmezError::IdentityFailure {
                name: c.name.clone(),
                class: c.class.clone().unwrap_or_default(),
            }),
            None => Ok(self),
        }
    }
}

fn first_difference_q(group: &Psl2, a: &ClassFunctionQ, b: &ClassFunctionQ) -> Option<String> {
    a.values
        .iter()
        .zip(&b.values)
        .position(|(x, y)| x != y)
        .map(|i| group.render_label(&group.classes()[i].label))
}

fn first_difference_ext(group: &Psl2, a: &ExtClassFunction, b: &ExtClassFunction) -> Option<String> {
    a.entries().zip(b.entries()).find(|((_, _, x), (_, _, y))| x != y).map(|((c, r, _), _)| {
        format!("{} rho={}", group.render_label(&group.classes()[c].label), r as u8)
    })
}

fn induce_trivial(group: &Psl2, h: &[ProjectiveMatrix]) -> ClassFunctionQ {
    let ones = vec![CycloNumber::one(); h.len()];
    induce_from_subgroup(group, h, &ones)
        .expect("B and U are subgroups")
        .to_rational()
        .expect("induced trivial character is rational")
}

/// Frobenius induction to G from a subgroup given by its elements, with
/// ψ(g, r) supplied as a function.
pub fn induce_ext(
    group: &Psl2,
    h: &[GalElement],
    psi: impl Fn(&GalElement) -> Rational,
) -> ExtClassFunction {
    let index: HashMap<GalElement, Rational> = h.iter().map(|x| (*x, psi(x))).collect();
    let elements = group.elements();
    let nc = group.class_count();
    let mut out = ExtClassFunction::zero(nc);
    let inv_h = rational(1, h.len() as i64);
    for (c, class) in group.classes().iter().enumerate() {
        for r in [false, true] {
            let g = GalElement::new(class.representative, r);
            let mut acc = Rational::zero();
            for x in &elements {
                for s in [false, true] {
                    let xe = GalElement::new(*x, s);
                    let y = xe.inv(group).mul(group, &g).mul(group, &xe);
                    if let Some(v) = index.get(&y) {
                        acc += v;
                    }
                }
            }
            out.set(c, r, acc * &inv_h);
        }
    }
    out
}

/// Exact checks of the class multisets of n₋(i)Bn₋(−j) and B, the
/// class-sum identities relating indicator functions to Ind_B(χ₀) and
/// Ind_U(χ₀), and the identities on G relating tr_{E^c/k}, (1−ρ)tr_{E^c/k}
/// and (1−ρ)Ind_B(χ₀) to induced characters.
pub fn lemma_identities(group: &Psl2) -> IdentityReport {
    let f = group.field();
    let q = group.q();
    let one_mod_four = f.is_one_mod_four();
    let mut checks = Vec::new();
    let mut push = |name: &str, class: Option<String>| {
        checks.push(IdentityCheck { name: name.into(), passed: class.is_none(), class });
    };

    let expected = expected_product_multiset(group);
    let borel_len = group.borel_elements().len() as u64;
    let mut product_failure = None;
    'pairs: for i in f.elements() {
        for j in f.elements() {
            if i == j {
                continue;
            }
            let got = class_multiset_of_product(group, i, j);
            if got != expected || got.total() != borel_len {
                product_failure = Some(format!("i={} j={}", f.render(i), f.render(j)));
                break 'pairs;
            }
        }
    }
    push("product-coset multiset", product_failure);

    let got = class_multiset_of_borel(group);
    let want = expected_borel_multiset(group);
    let borel_failure = (got != want).then(|| {
        want.counts
            .keys()
            .chain(got.counts.keys())
            .find(|l| got.get(l) != want.get(l))
            .map(|l| group.render_label(l))
            .unwrap_or_default()
    });
    push(if one_mod_four { "borel multiset (q = 1 mod 4)" } else { "borel multiset (q = 3 mod 4)" }, borel_failure);

    let nc = group.class_count();
    let sums = class_sums(group);
    let ind_b = induce_trivial(group, &group.borel_elements());
    let ind_u = induce_trivial(group, &group.unipotent_elements());
    let scaled_u = ind_u.scale(&rational(2, q as i64 - 1));
    let lhs_a = if one_mod_four {
        sums.trace_zero.scale(&rational_int(2)).add(&sums.split_sum)
    } else {
        sums.split_sum.clone()
    };
    let rhs_a = ind_b.sub(&scaled_u);
    let lhs_b = sums.unipotent.add(&sums.identity.scale(&rational_int(q as i64 + 1)));
    let (name_a, name_b) = if one_mod_four {
        ("split class sums with trace zero (q = 1 mod 4)", "unipotent class sums (q = 1 mod 4)")
    } else {
        ("split class sums (q = 3 mod 4)", "unipotent class sums (q = 3 mod 4)")
    };
    push(name_a, first_difference_q(group, &lhs_a, &rhs_a));
    push(name_b, first_difference_q(group, &lhs_b, &scaled_u));

    let psl: Vec<GalElement> = group.elements().into_iter().map(|g| GalElement::new(g, false)).collect();
    let t = ExtClassFunction::trace_indicator(nc);
    let ind_psl = induce_ext(group, &psl, |_| Rational::one());
    push("trace as half the induced trivial character", first_difference_ext(group, &t, &ind_psl.scale(&rational(1, 2))));

    let mut chi_k = ExtClassFunction::zero(nc);
    for c in 0..nc {
        chi_k.set(c, false, Rational::one());
        chi_k.set(c, true, -Rational::one());
    }
    push("twisted trace as the quadratic character of k", first_difference_ext(group, &t.one_minus_rho(), &chi_k));

    let borel_ext: Vec<GalElement> = group
        .borel_elements()
        .into_iter()
        .flat_map(|b| [GalElement::new(b, false), GalElement::new(b, true)])
        .collect();
    let ind_ef = induce_ext(group, &borel_ext, |x| if x.r { -Rational::one() } else { Rational::one() });
    let lhs_c = ExtClassFunction::from_parts(&ind_b, &ClassFunctionQ::zero(nc)).one_minus_rho();
    push("twisted permutation character as an induced quadratic character", first_difference_ext(group, &lhs_c, &ind_ef));

    IdentityReport { q, checks }
}

/// A valid representative set for F_q*/± that differs from the default
/// choice whenever q > 5: the largest non-1 element is replaced by its
/// negative.
pub fn perturbed_rep_set(field: &Field) -> RepSetA {
    let base = field.representative_set_a();
    let mut elements = base.elements().to_vec();
    if let Some(pos) = elements.iter().rposition(|&x| x != Fe::ONE) {
        elements[pos] = field.neg(elements[pos]);
    }
    RepSetA::new(field, elements).expect("negating one representative keeps a valid set")
}

/// The slot of a P¹ point, for building types from explicit cosets.
pub fn slot_of(point: P1Point) -> usize {
    point.index()
}
