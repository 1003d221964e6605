//! The group PSL₂(F_q): sign-canonical matrices, the Borel and unipotent
//! subgroups, the coset representatives {w, n₋(i)}, the Möbius action on
//! P¹(F_q) and the conjugacy classification.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{FieldError, GroupError};
use crate::field::{Fe, Field, QuadExtElement, RepSetA};

/// A PSL₂ element stored as the canonical member of {M, −M}: the first nonzero
/// entry in the scan order (a, b, c, d) lies in the representative set A.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjectiveMatrix {
    pub a: Fe,
    pub b: Fe,
    pub c: Fe,
    pub d: Fe,
}

/// Conjugacy class labels. Split and non-split parameters are canonical under
/// x ↦ −x and x ↦ x⁻¹.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConjClassLabel {
    Identity,
    UnipotentSquare,
    UnipotentNonsquare,
    TraceZero,
    /// Eigenvalue class of a diagonalizable element (trace ≠ 0, ±2).
    Split(Fe),
    /// Eigenvalue class in the norm-one torus (trace ≠ 0, ±2).
    NonSplit(QuadExtElement),
}

/// A point of P¹(F_q).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum P1Point {
    Infinity,
    Affine(Fe),
}

impl P1Point {
    /// Position in the ∞-first slot order: ∞ ↦ 0, x ↦ 1 + index(x).
    #[inline]
    pub fn index(self) -> usize {
        match self {
            P1Point::Infinity => 0,
            P1Point::Affine(x) => 1 + x.index() as usize,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjClass {
    pub label: ConjClassLabel,
    pub size: u64,
    pub representative: ProjectiveMatrix,
}

#[derive(Clone, Debug)]
pub struct Psl2 {
    field: Field,
    rep_set: RepSetA,
    classes: Vec<ConjClass>,
}

impl Psl2 {
    pub fn new(field: Field) -> Self {
        let rep_set = field.representative_set_a();
        Self::with_rep_set(field, rep_set)
    }

    /// Uses a caller-supplied representative set A for sign canonicalization.
    pub fn with_rep_set(field: Field, rep_set: RepSetA) -> Self {
        let mut group = Psl2 { field, rep_set, classes: Vec::new() };
        group.classes = group.build_classes();
        group
    }

    pub fn from_order(q: u32) -> Result<Self, FieldError> {
        Ok(Self::new(Field::from_order(q)?))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.order()
    }

    pub fn rep_set(&self) -> &RepSetA {
        &self.rep_set
    }

    /// |PSL₂(F_q)| = q(q² − 1)/2.
    pub fn order(&self) -> u64 {
        let q = self.q() as u64;
        q * (q * q - 1) / 2
    }

    // --- construction and arithmetic ---

    /// Canonical member of {M, −M}; fails unless ad − bc = 1.
    pub fn canonicalize(&self, a: Fe, b: Fe, c: Fe, d: Fe) -> Result<ProjectiveMatrix, GroupError> {
        let f = &self.field;
        if f.sub(f.mul(a, d), f.mul(b, c)) != Fe::ONE {
            return Err(GroupError::BadDeterminant);
        }
        Ok(self.canon(a, b, c, d))
    }

    #[inline]
    fn canon(&self, a: Fe, b: Fe, c: Fe, d: Fe) -> ProjectiveMatrix {
        let lead = [a, b, c, d].into_iter().find(|x| !x.is_zero()).unwrap_or(Fe::ZERO);
        if self.rep_set.contains(lead) {
            ProjectiveMatrix { a, b, c, d }
        } else {
            let f = &self.field;
            ProjectiveMatrix { a: f.neg(a), b: f.neg(b), c: f.neg(c), d: f.neg(d) }
        }
    }

    /// Checks that a matrix belongs to this group in canonical form.
    pub fn validate(&self, g: &ProjectiveMatrix) -> Result<(), GroupError> {
        let q = self.q();
        if [g.a, g.b, g.c, g.d].iter().any(|x| x.index() >= q) {
            return Err(GroupError::FieldMismatch);
        }
        let c = self.canonicalize(g.a, g.b, g.c, g.d)?;
        if c != *g {
            return Err(GroupError::FieldMismatch);
        }
        Ok(())
    }

    pub fn identity(&self) -> ProjectiveMatrix {
        self.canon(Fe::ONE, Fe::ZERO, Fe::ZERO, Fe::ONE)
    }

    /// w = [[0, 1], [−1, 0]].
    pub fn w(&self) -> ProjectiveMatrix {
        self.canon(Fe::ZERO, Fe::ONE, self.field.neg(Fe::ONE), Fe::ZERO)
    }

    /// n₋(i) = [[1, 0], [i, 1]].
    pub fn n_minus(&self, i: Fe) -> ProjectiveMatrix {
        self.canon(Fe::ONE, Fe::ZERO, i, Fe::ONE)
    }

    /// [[1, b], [0, 1]].
    pub fn upper_unipotent(&self, b: Fe) -> ProjectiveMatrix {
        self.canon(Fe::ONE, b, Fe::ZERO, Fe::ONE)
    }

    /// diag(x, x⁻¹).
    pub fn diagonal(&self, x: Fe) -> ProjectiveMatrix {
        self.canon(x, Fe::ZERO, Fe::ZERO, self.field.inv(x))
    }

    #[inline]
    pub fn mul(&self, g: &ProjectiveMatrix, h: &ProjectiveMatrix) -> ProjectiveMatrix {
        let f = &self.field;
        let a = f.add(f.mul(g.a, h.a), f.mul(g.b, h.c));
        let b = f.add(f.mul(g.a, h.b), f.mul(g.b, h.d));
        let c = f.add(f.mul(g.c, h.a), f.mul(g.d, h.c));
        let d = f.add(f.mul(g.c, h.b), f.mul(g.d, h.d));
        self.canon(a, b, c, d)
    }

    /// Product that first checks both operands belong to this group.
    pub fn multiply(&self, g: &ProjectiveMatrix, h: &ProjectiveMatrix) -> Result<ProjectiveMatrix, GroupError> {
        self.validate(g)?;
        self.validate(h)?;
        Ok(self.mul(g, h))
    }

    #[inline]
    pub fn inv(&self, g: &ProjectiveMatrix) -> ProjectiveMatrix {
        let f = &self.field;
        self.canon(g.d, f.neg(g.b), f.neg(g.c), g.a)
    }

    /// x g x⁻¹.
    pub fn conjugate_by(&self, x: &ProjectiveMatrix, g: &ProjectiveMatrix) -> ProjectiveMatrix {
        self.mul(&self.mul(x, g), &self.inv(x))
    }

    /// Trace of the stored representative (defined up to sign on PSL₂).
    pub fn trace(&self, g: &ProjectiveMatrix) -> Fe {
        self.field.add(g.a, g.d)
    }

    // --- conjugacy classes ---

    fn split_param(&self, x: Fe) -> Fe {
        let f = &self.field;
        let xi = f.inv(x);
        f.sign_min(x).min(f.sign_min(xi))
    }

    fn nonsplit_param(&self, z: QuadExtElement) -> QuadExtElement {
        let f = &self.field;
        QuadExtElement::new(f.sign_min(z.re), f.sign_min(z.im))
    }

    /// Conjugacy class label, by the trace test and the explicit reductions to
    /// upper-unipotent form for trace ±2.
    pub fn classify(&self, g: &ProjectiveMatrix) -> ConjClassLabel {
        let f = &self.field;
        if *g == self.identity() {
            return ConjClassLabel::Identity;
        }
        let t = self.trace(g);
        let two = f.from_int(2);
        let minus_two = f.neg(two);
        if t == two || t == minus_two {
            let delta = if t == two { Fe::ONE } else { f.neg(Fe::ONE) };
            // b = 0: conjugate by w to [δ, −c; 0, δ]; otherwise by a lower
            // unipotent to [δ, b; 0, δ].
            let upper = if g.b.is_zero() { f.neg(g.c) } else { g.b };
            let normalized = f.mul(delta, upper);
            return if f.is_square(normalized).expect("nonidentity unipotent has nonzero corner") {
                ConjClassLabel::UnipotentSquare
            } else {
                ConjClassLabel::UnipotentNonsquare
            };
        }
        if t.is_zero() {
            return ConjClassLabel::TraceZero;
        }
        let disc = f.sub(f.mul(t, t), f.from_int(4));
        let half_t = f.div(t, two);
        match f.sqrt(disc) {
            Some(r) => {
                let lambda = f.add(half_t, f.div(r, two));
                ConjClassLabel::Split(self.split_param(lambda))
            }
            None => {
                let y2 = f.div(disc, f.mul(f.from_int(4), f.fixed_nonsquare()));
                let y = f.sqrt(y2).expect("ratio of non-squares is a square");
                ConjClassLabel::NonSplit(self.nonsplit_param(QuadExtElement::new(half_t, y)))
            }
        }
    }

    fn build_classes(&self) -> Vec<ConjClass> {
        let f = &self.field;
        let q = self.q() as u64;
        let one_mod_four = f.is_one_mod_four();
        let mut classes = alloc::vec![
            ConjClass { label: ConjClassLabel::Identity, size: 1, representative: self.identity() },
            ConjClass {
                label: ConjClassLabel::UnipotentSquare,
                size: (q * q - 1) / 2,
                representative: self.upper_unipotent(Fe::ONE),
            },
            ConjClass {
                label: ConjClassLabel::UnipotentNonsquare,
                size: (q * q - 1) / 2,
                representative: self.upper_unipotent(f.fixed_nonsquare()),
            },
            ConjClass {
                label: ConjClassLabel::TraceZero,
                size: if one_mod_four { q * (q + 1) / 2 } else { q * (q - 1) / 2 },
                representative: self.w(),
            },
        ];

        let minus_one = f.neg(Fe::ONE);
        let mut split: Vec<Fe> = f
            .nonzero_elements()
            .filter(|&x| x != Fe::ONE && x != minus_one && f.mul(x, x) != minus_one)
            .map(|x| self.split_param(x))
            .collect();
        split.sort_unstable();
        split.dedup();
        classes.extend(split.into_iter().map(|x| ConjClass {
            label: ConjClassLabel::Split(x),
            size: q * (q + 1),
            representative: self.diagonal(x),
        }));

        let mut nonsplit: Vec<QuadExtElement> = f
            .norm_one_elements()
            .into_iter()
            .filter(|z| !z.re.is_zero() && !z.im.is_zero())
            .map(|z| self.nonsplit_param(z))
            .collect();
        nonsplit.sort_unstable();
        nonsplit.dedup();
        let delta = f.fixed_nonsquare();
        classes.extend(nonsplit.into_iter().map(|z| ConjClass {
            label: ConjClassLabel::NonSplit(z),
            size: q * (q - 1),
            representative: self.canon(z.re, f.mul(delta, z.im), z.im, z.re),
        }));

        classes.sort_by_key(|c| c.label);
        classes
    }

    /// All conjugacy classes, sorted by label.
    pub fn classes(&self) -> &[ConjClass] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn class_index(&self, label: &ConjClassLabel) -> Option<usize> {
        self.classes.binary_search_by(|c| c.label.cmp(label)).ok()
    }

    /// Index into [`Psl2::classes`] of the class containing `g`.
    pub fn class_of(&self, g: &ProjectiveMatrix) -> usize {
        let label = self.classify(g);
        self.class_index(&label).expect("every element has a listed class")
    }

    // --- enumeration ---

    /// Every element, sorted.
    pub fn elements(&self) -> Vec<ProjectiveMatrix> {
        let f = &self.field;
        let mut out = Vec::with_capacity(self.order() as usize);
        out.extend(self.borel_elements());
        for c in f.nonzero_elements() {
            let c_inv = f.inv(c);
            for a in f.elements() {
                for d in f.elements() {
                    let b = f.mul(f.sub(f.mul(a, d), Fe::ONE), c_inv);
                    let m = ProjectiveMatrix { a, b, c, d };
                    if self.canon(a, b, c, d) == m {
                        out.push(m);
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// B = {[[a, b], [0, a⁻¹]] : a ∈ A, b ∈ F_q}.
    pub fn borel_elements(&self) -> Vec<ProjectiveMatrix> {
        let f = &self.field;
        let mut out = Vec::with_capacity(self.rep_set.len() * self.q() as usize);
        for &a in self.rep_set.elements() {
            for b in f.elements() {
                out.push(self.canon(a, b, Fe::ZERO, f.inv(a)));
            }
        }
        out
    }

    /// U = {[[1, b], [0, 1]]}.
    pub fn unipotent_elements(&self) -> Vec<ProjectiveMatrix> {
        self.field.elements().map(|b| self.upper_unipotent(b)).collect()
    }

    // --- P¹ ---

    pub fn p1_points(&self) -> impl Iterator<Item = P1Point> + '_ {
        core::iter::once(P1Point::Infinity).chain(self.field.elements().map(P1Point::Affine))
    }

    pub fn p1_point(&self, index: usize) -> P1Point {
        if index == 0 {
            P1Point::Infinity
        } else {
            P1Point::Affine(self.field.element(index as u32 - 1).expect("slot index in range"))
        }
    }

    /// z ↦ (az + b)/(cz + d).
    pub fn mobius_act(&self, g: &ProjectiveMatrix, x: P1Point) -> P1Point {
        let f = &self.field;
        match x {
            P1Point::Infinity => {
                if g.c.is_zero() {
                    P1Point::Infinity
                } else {
                    P1Point::Affine(f.div(g.a, g.c))
                }
            }
            P1Point::Affine(z) => {
                let den = f.add(f.mul(g.c, z), g.d);
                if den.is_zero() {
                    P1Point::Infinity
                } else {
                    P1Point::Affine(f.div(f.add(f.mul(g.a, z), g.b), den))
                }
            }
        }
    }

    /// Permutation of the q + 1 slot indices induced by `g`.
    pub fn p1_permutation(&self, g: &ProjectiveMatrix) -> Vec<u32> {
        self.p1_points().map(|x| self.mobius_act(g, x).index() as u32).collect()
    }

    /// Number of points of P¹ fixed by `g`.
    pub fn fixed_points(&self, g: &ProjectiveMatrix) -> u32 {
        self.p1_points().filter(|&x| self.mobius_act(g, x) == x).count() as u32
    }

    /// The coset representatives {1, w, n₋(i)}, each paired with the point
    /// h·∞ of its coset hB: B ↦ ∞, wB ↦ 0, n₋(i)B ↦ 1/i.
    pub fn coset_reps(&self) -> Vec<(P1Point, ProjectiveMatrix)> {
        let f = &self.field;
        let mut out = Vec::with_capacity(self.q() as usize + 1);
        out.push((P1Point::Infinity, self.identity()));
        out.push((P1Point::Affine(Fe::ZERO), self.w()));
        for i in f.nonzero_elements() {
            out.push((P1Point::Affine(f.inv(i)), self.n_minus(i)));
        }
        out
    }

    /// Coset representative for every slot, indexed by [`P1Point::index`].
    pub fn slot_reps(&self) -> Vec<ProjectiveMatrix> {
        let mut reps = alloc::vec![self.identity(); self.q() as usize + 1];
        for (pt, m) in self.coset_reps() {
            reps[pt.index()] = m;
        }
        reps
    }

    // --- display ---

    pub fn render_label(&self, label: &ConjClassLabel) -> String {
        let f = &self.field;
        match label {
            ConjClassLabel::Identity => "Id".into(),
            ConjClassLabel::UnipotentSquare => "unip_sq".into(),
            ConjClassLabel::UnipotentNonsquare => "unip_nsq".into(),
            ConjClassLabel::TraceZero => "tr0".into(),
            ConjClassLabel::Split(x) => format!("split({})", f.render(*x)),
            ConjClassLabel::NonSplit(z) => {
                format!("nonsplit({}+{}*sqrt({}))", f.render(z.re), f.render(z.im), f.render(f.fixed_nonsquare()))
            }
        }
    }

    pub fn render_matrix(&self, g: &ProjectiveMatrix) -> String {
        let f = &self.field;
        format!("[[{}, {}], [{}, {}]]", f.render(g.a), f.render(g.b), f.render(g.c), f.render(g.d))
    }

    pub fn render_point(&self, x: P1Point) -> String {
        match x {
            P1Point::Infinity => "inf".into(),
            P1Point::Affine(z) => self.field.render(z),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::{BTreeMap, BTreeSet};
    use rand_chacha::ChaCha8Rng;
    use rand_core::{RngCore, SeedableRng};

    fn random_element(g: &Psl2, elements: &[ProjectiveMatrix], rng: &mut ChaCha8Rng) -> ProjectiveMatrix {
        let _ = g;
        elements[rng.next_u32() as usize % elements.len()]
    }

    /// Orbit partition under conjugation, by brute force.
    fn brute_classes(g: &Psl2) -> Vec<BTreeSet<ProjectiveMatrix>> {
        let els = g.elements();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for x in &els {
            if seen.contains(x) {
                continue;
            }
            let orbit: BTreeSet<_> = els.iter().map(|y| g.conjugate_by(y, x)).collect();
            seen.extend(orbit.iter().copied());
            out.push(orbit);
        }
        out
    }

    #[test]
    fn canonicalize_basics() {
        let g = Psl2::from_order(7).unwrap();
        let f = g.field();
        let id = g.canonicalize(Fe::ONE, Fe::ZERO, Fe::ZERO, Fe::ONE).unwrap();
        assert_eq!(id, g.identity());
        let m = f.neg(Fe::ONE);
        assert_eq!(g.canonicalize(m, Fe::ZERO, Fe::ZERO, m).unwrap(), g.identity());
        assert_eq!(g.canonicalize(Fe::ONE, Fe::ONE, Fe::ONE, Fe::ONE), Err(GroupError::BadDeterminant));
    }

    #[test]
    fn canonicalize_is_idempotent() {
        let g = Psl2::from_order(11).unwrap();
        let f = g.field();
        let els = g.elements();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let m = random_element(&g, &els, &mut rng);
            let neg = (f.neg(m.a), f.neg(m.b), f.neg(m.c), f.neg(m.d));
            let c1 = g.canonicalize(neg.0, neg.1, neg.2, neg.3).unwrap();
            assert_eq!(c1, m);
            assert_eq!(g.canonicalize(c1.a, c1.b, c1.c, c1.d).unwrap(), c1);
        }
    }

    #[test]
    fn multiplication_rules() {
        let g = Psl2::from_order(7).unwrap();
        let f = g.field();
        assert_eq!(g.mul(&g.w(), &g.w()), g.identity());
        for i in f.elements() {
            for j in f.elements() {
                assert_eq!(g.mul(&g.n_minus(i), &g.n_minus(j)), g.n_minus(f.add(i, j)));
            }
        }
        let els = g.elements();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..1000 {
            let x = random_element(&g, &els, &mut rng);
            assert_eq!(g.mul(&x, &g.inv(&x)), g.identity());
        }
    }

    #[test]
    fn multiply_rejects_foreign_elements() {
        let g = Psl2::from_order(5).unwrap();
        let big = Psl2::from_order(11).unwrap();
        let foreign = big.upper_unipotent(big.field().from_int(9));
        assert_eq!(g.multiply(&g.w(), &foreign), Err(GroupError::FieldMismatch));
        assert!(g.multiply(&g.w(), &g.w()).is_ok());
    }

    #[test]
    fn element_counts() {
        for q in [3, 5, 7, 9, 11, 13, 25] {
            let g = Psl2::from_order(q).unwrap();
            let els = g.elements();
            assert_eq!(els.len() as u64, g.order());
            let set: BTreeSet<_> = els.iter().collect();
            assert_eq!(set.len(), els.len());
            assert_eq!(g.borel_elements().len() as u64, (q * (q - 1) / 2) as u64);
            assert_eq!(g.unipotent_elements().len() as u32, q);
        }
    }

    #[test]
    fn classify_examples() {
        let g = Psl2::from_order(7).unwrap();
        let f = g.field();
        assert_eq!(g.classify(&g.upper_unipotent(Fe::ONE)), ConjClassLabel::UnipotentSquare);
        assert_eq!(g.classify(&g.upper_unipotent(f.from_int(3))), ConjClassLabel::UnipotentNonsquare);
        assert_eq!(g.classify(&g.w()), ConjClassLabel::TraceZero);
    }

    #[test]
    fn class_sizes_q7() {
        let g = Psl2::from_order(7).unwrap();
        let mut sizes: Vec<u64> = g.classes().iter().map(|c| c.size).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, [1, 21, 24, 24, 42, 56]);
    }

    #[test]
    fn classification_matches_brute_force() {
        for q in [3, 5, 7, 9, 11, 13] {
            let g = Psl2::from_order(q).unwrap();
            let brute = brute_classes(&g);
            assert_eq!(brute.len(), g.class_count(), "q={q}");
            assert_eq!(g.class_count() as u32, (q + 5) / 2);
            let total: u64 = g.classes().iter().map(|c| c.size).sum();
            assert_eq!(total, g.order());
            for orbit in &brute {
                let labels: BTreeSet<_> = orbit.iter().map(|x| g.classify(x)).collect();
                assert_eq!(labels.len(), 1, "q={q}: orbit split across labels");
                let label = *labels.iter().next().unwrap();
                let idx = g.class_index(&label).unwrap();
                assert_eq!(g.classes()[idx].size, orbit.len() as u64);
                assert!(orbit.contains(&g.classes()[idx].representative));
            }
        }
    }

    #[test]
    fn classify_is_conjugation_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for q in [5, 7, 9, 11, 13] {
            let g = Psl2::from_order(q).unwrap();
            let els = g.elements();
            for _ in 0..10_000 {
                let x = random_element(&g, &els, &mut rng);
                let h = random_element(&g, &els, &mut rng);
                assert_eq!(g.classify(&g.conjugate_by(&x, &h)), g.classify(&h));
            }
        }
    }

    #[test]
    fn class_count_formula() {
        for q in [7, 11, 13, 17, 19, 23, 25, 27, 29, 31, 49, 81, 121] {
            let g = Psl2::from_order(q).unwrap();
            assert_eq!(g.class_count() as u32, (q + 5) / 2);
            let total: u64 = g.classes().iter().map(|c| c.size).sum();
            assert_eq!(total, g.order());
        }
    }

    #[test]
    fn mobius_action_axioms() {
        let g = Psl2::from_order(7).unwrap();
        assert_eq!(g.mobius_act(&g.w(), P1Point::Infinity), P1Point::Affine(Fe::ZERO));
        let els = g.elements();
        let pts: Vec<_> = g.p1_points().collect();
        assert_eq!(pts.len(), 8);
        for &x in &pts {
            assert_eq!(g.mobius_act(&g.identity(), x), x);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..1000 {
            let a = random_element(&g, &els, &mut rng);
            let b = random_element(&g, &els, &mut rng);
            let x = pts[rng.next_u32() as usize % pts.len()];
            assert_eq!(g.mobius_act(&g.mul(&a, &b), x), g.mobius_act(&a, g.mobius_act(&b, x)));
        }
    }

    #[test]
    fn borel_is_stabilizer_of_infinity() {
        for q in [5, 7, 9] {
            let g = Psl2::from_order(q).unwrap();
            let mut stab: Vec<_> = g
                .elements()
                .into_iter()
                .filter(|x| g.mobius_act(x, P1Point::Infinity) == P1Point::Infinity)
                .collect();
            stab.sort_unstable();
            let mut borel = g.borel_elements();
            borel.sort_unstable();
            assert_eq!(stab, borel);
            let orbit: BTreeSet<_> = borel.iter().map(|b| g.mobius_act(b, P1Point::Affine(Fe::ZERO))).collect();
            assert_eq!(orbit.len() as u32, q);
        }
    }

    #[test]
    fn coset_dictionary_q5() {
        let g = Psl2::from_order(5).unwrap();
        let f = g.field();
        let map: BTreeMap<_, _> = g.coset_reps().into_iter().map(|(p, m)| (m, p)).collect();
        assert_eq!(map[&g.identity()], P1Point::Infinity);
        assert_eq!(map[&g.w()], P1Point::Affine(Fe::ZERO));
        for (i, pt) in [(1, 1), (2, 3), (3, 2), (4, 4)] {
            assert_eq!(map[&g.n_minus(f.from_int(i))], P1Point::Affine(f.from_int(pt)));
        }
        for (pt, m) in g.coset_reps() {
            assert_eq!(g.mobius_act(&m, P1Point::Infinity), pt);
        }
        let pts: BTreeSet<_> = g.coset_reps().into_iter().map(|(p, _)| p).collect();
        assert_eq!(pts.len(), 6);
    }
}
