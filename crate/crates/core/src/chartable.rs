//! The character table of PSL₂(F_q) with exact cyclotomic values, class
//! functions, the character pairing and Frobenius induction.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Index;

use hashbrown::{HashMap, HashSet};
use num_traits::{One, Zero};

use crate::cyclotomic::{gauss_sum, rational, rational_int, table_conductor, CycloNumber, Rational};
use crate::error::TableError;
use crate::field::{Fe, QuadExtElement};
use crate::psl2::{ConjClassLabel, ProjectiveMatrix, Psl2};

/// Irreducible character labels. Principal-series and cuspidal indices j
/// select α_j(γ^k) = ζ_n^{jk} on F_q*/± (n = (q−1)/2) and η_j on the norm-one
/// torus mod ± (n = (q+1)/2), with 1 ≤ j < n − j.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CharLabel {
    Trivial,
    Steinberg,
    PrincipalSeries(u32),
    Cuspidal(u32),
    OscillatorPlus,
    OscillatorMinus,
}

/// A function on conjugacy classes, stored in the order of
/// [`Psl2::classes`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassFunction<T> {
    pub values: Vec<T>,
}

pub type ClassFunctionQ = ClassFunction<Rational>;
pub type ClassFunctionC = ClassFunction<CycloNumber>;

impl<T> ClassFunction<T> {
    pub fn new(values: Vec<T>) -> Self {
        ClassFunction { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn at(&self, group: &Psl2, label: &ConjClassLabel) -> Option<&T> {
        group.class_index(label).map(|i| &self.values[i])
    }
}

impl<T> Index<usize> for ClassFunction<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.values[i]
    }
}

impl ClassFunctionQ {
    pub fn zero(classes: usize) -> Self {
        ClassFunction::new(vec![Rational::zero(); classes])
    }

    /// Indicator function of a single class.
    pub fn indicator(classes: usize, index: usize) -> Self {
        let mut f = Self::zero(classes);
        f.values[index] = Rational::one();
        f
    }

    pub fn to_cyclo(&self) -> ClassFunctionC {
        ClassFunction::new(self.values.iter().cloned().map(CycloNumber::from_rational).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        ClassFunction::new(self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        ClassFunction::new(self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, r: &Rational) -> Self {
        ClassFunction::new(self.values.iter().map(|a| a * r).collect())
    }
}

impl ClassFunctionC {
    /// The rational values, if every value is rational.
    pub fn to_rational(&self) -> Option<ClassFunctionQ> {
        self.values.iter().map(CycloNumber::as_rational).collect::<Option<Vec<_>>>().map(ClassFunction::new)
    }

    pub fn add(&self, other: &Self) -> Self {
        ClassFunction::new(self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, c: &CycloNumber) -> Self {
        ClassFunction::new(self.values.iter().map(|a| a * c).collect())
    }
}

/// ⟨f, g⟩ = (1/|G|) Σ_C |C|·f(C)·conj(g(C)).
pub fn inner_product(group: &Psl2, f: &ClassFunctionC, g: &ClassFunctionC) -> CycloNumber {
    let mut acc = CycloNumber::zero();
    for ((class, a), b) in group.classes().iter().zip(&f.values).zip(&g.values) {
        let term = &(a * &b.conjugate()) * &CycloNumber::from_integer(class.size as i64);
        acc += &term;
    }
    acc.scale(&Rational::new(1.into(), group.order().into()))
}

/// The pairing for rational class functions (no conjugation needed).
pub fn inner_product_q(group: &Psl2, f: &ClassFunctionQ, g: &ClassFunctionQ) -> Rational {
    let total: Rational = group
        .classes()
        .iter()
        .zip(&f.values)
        .zip(&g.values)
        .map(|((c, a), b)| a * b * rational_int(c.size as i64))
        .sum();
    total / rational_int(group.order() as i64)
}

fn check_subgroup(group: &Psl2, h: &[ProjectiveMatrix]) -> Result<HashMap<ProjectiveMatrix, usize>, TableError> {
    let index: HashMap<ProjectiveMatrix, usize> = h.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    if index.len() != h.len() || !index.contains_key(&group.identity()) {
        return Err(TableError::NotSubgroup);
    }
    for x in h {
        for y in h {
            if !index.contains_key(&group.mul(x, y)) {
                return Err(TableError::NotSubgroup);
            }
        }
    }
    Ok(index)
}

/// Ind_H^G(ψ)(g) = (1/|H|) Σ_{x ∈ G, x⁻¹gx ∈ H} ψ(x⁻¹gx), evaluated at one
/// representative per class.
pub fn induce_from_subgroup(
    group: &Psl2,
    h: &[ProjectiveMatrix],
    psi: &[CycloNumber],
) -> Result<ClassFunctionC, TableError> {
    if psi.len() != h.len() {
        return Err(TableError::LengthMismatch);
    }
    let index = check_subgroup(group, h)?;
    let elements = group.elements();
    let inv_h = Rational::new(1.into(), (h.len() as i64).into());
    let values = group
        .classes()
        .iter()
        .map(|class| {
            let g = class.representative;
            let mut acc = CycloNumber::zero();
            for x in &elements {
                let y = group.conjugate_by(&group.inv(x), &g);
                if let Some(&i) = index.get(&y) {
                    acc += &psi[i];
                }
            }
            acc.scale(&inv_h)
        })
        .collect();
    Ok(ClassFunction::new(values))
}

/// Rational-valued induction through the class-sum form
/// Ind(ψ)(C) = |G| / (|H|·|C|) · Σ_{h ∈ H ∩ C} ψ(h).
pub fn induce_rational(
    group: &Psl2,
    h: &[ProjectiveMatrix],
    psi: &[Rational],
) -> Result<ClassFunctionQ, TableError> {
    if psi.len() != h.len() {
        return Err(TableError::LengthMismatch);
    }
    let mut sums = vec![Rational::zero(); group.class_count()];
    for (x, v) in h.iter().zip(psi) {
        sums[group.class_of(x)] += v;
    }
    let g_order = rational_int(group.order() as i64);
    let h_order = rational_int(h.len() as i64);
    let values = sums
        .into_iter()
        .zip(group.classes())
        .map(|(s, c)| s * &g_order / (&h_order * rational_int(c.size as i64)))
        .collect();
    Ok(ClassFunction::new(values))
}

#[derive(Clone, Debug)]
pub struct CharRow {
    pub label: CharLabel,
    pub degree: u64,
    pub values: ClassFunctionC,
    /// Human-readable form of each value, aligned with the classes.
    pub symbolic: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct CharacterTable {
    group: Psl2,
    conductor: u32,
    gauss: CycloNumber,
    rows: Vec<CharRow>,
}

/// Exponent data for characters of F_q*/± and of the norm-one torus mod ±.
struct Logs {
    n_split: u32,
    n_torus: u32,
    torus_log: HashMap<QuadExtElement, u32>,
}

impl Logs {
    fn new(group: &Psl2) -> Self {
        let f = group.field();
        let q = f.order();
        let gen = f.norm_one_generator();
        let mut torus_log = HashMap::new();
        let mut z = QuadExtElement::ONE;
        for k in 0..q + 1 {
            torus_log.insert(z, k % q.div_ceil(2));
            z = f.ext_mul(z, gen);
        }
        Logs { n_split: (q - 1) / 2, n_torus: q.div_ceil(2), torus_log }
    }

    fn split(&self, group: &Psl2, x: Fe) -> u32 {
        group.field().log(x).expect("nonzero") % self.n_split
    }

    fn torus(&self, z: &QuadExtElement) -> u32 {
        self.torus_log[z]
    }
}

/// Admissible indices j for characters of a cyclic group of order n:
/// 1 ≤ j, 2j ≢ 0 (mod n), one of each pair {j, n − j}.
pub fn character_indices(n: u32) -> Vec<u32> {
    (1..n).filter(|&j| 2 * j < n).collect()
}

impl CharacterTable {
    pub fn build(q: u32) -> Result<Self, TableError> {
        let group = Psl2::from_order(q).map_err(|e| TableError::Group(e.into()))?;
        Self::new(&group)
    }

    pub fn new(group: &Psl2) -> Result<Self, TableError> {
        let f = group.field();
        let q = f.order();
        if q < 5 {
            return Err(TableError::UnsupportedQ(q));
        }
        let m = table_conductor(f);
        let gauss = gauss_sum(f).lift(m);
        let logs = Logs::new(group);
        let one_mod_four = f.is_one_mod_four();
        let qi = q as i64;
        let int = |n: i64| CycloNumber::from_integer(n).lift(m);
        let num = |n: i64| (int(n), format!("{n}"));

        // z₀: the norm-one element of trace zero (exists iff q ≡ 3 mod 4).
        let torus_tr0 = (!one_mod_four).then(|| {
            let delta = f.fixed_nonsquare();
            let y = f.sqrt(f.neg(f.inv(delta))).expect("−1/Δ is a square when q ≡ 3 mod 4");
            logs.torus(&QuadExtElement::new(Fe::ZERO, y))
        });

        let mut rows = Vec::new();
        let classes = group.classes();
        let mut push = |label: CharLabel, degree: u64, cell: &dyn Fn(&ConjClassLabel) -> (CycloNumber, String)| {
            let (values, symbolic): (Vec<_>, Vec<_>) = classes.iter().map(|c| cell(&c.label)).unzip();
            rows.push(CharRow { label, degree, values: ClassFunction::new(values), symbolic });
        };

        push(CharLabel::Trivial, 1, &|_| num(1));
        push(CharLabel::Steinberg, q as u64, &|c| match c {
            ConjClassLabel::Identity => num(qi),
            ConjClassLabel::UnipotentSquare | ConjClassLabel::UnipotentNonsquare => num(0),
            ConjClassLabel::Split(_) => num(1),
            ConjClassLabel::NonSplit(_) => num(-1),
            ConjClassLabel::TraceZero => num(if one_mod_four { 1 } else { -1 }),
        });

        let n = logs.n_split;
        let zeta_pair = |n: u32, e: u32, sign: i64| {
            let a = e % n;
            let b = (n - a) % n;
            let v = &(&CycloNumber::zeta(n, a as i64) + &CycloNumber::zeta(n, b as i64)).lift(m)
                * &CycloNumber::from_integer(sign);
            let s = if sign < 0 { format!("-(z_{n}^{a} + z_{n}^{b})") } else { format!("z_{n}^{a} + z_{n}^{b}") };
            (v, s)
        };
        for j in character_indices(n) {
            push(CharLabel::PrincipalSeries(j), q as u64 + 1, &|c| match c {
                ConjClassLabel::Identity => num(qi + 1),
                ConjClassLabel::UnipotentSquare | ConjClassLabel::UnipotentNonsquare => num(1),
                ConjClassLabel::Split(x) => zeta_pair(n, j * logs.split(group, *x), 1),
                ConjClassLabel::NonSplit(_) => num(0),
                // 2α(√−1) with √−1 of order 2 in F_q*/±.
                ConjClassLabel::TraceZero => num(if one_mod_four { 2 * if j % 2 == 0 { 1 } else { -1 } } else { 0 }),
            });
        }

        let nt = logs.n_torus;
        for j in character_indices(nt) {
            push(CharLabel::Cuspidal(j), q as u64 - 1, &|c| match c {
                ConjClassLabel::Identity => num(qi - 1),
                ConjClassLabel::UnipotentSquare | ConjClassLabel::UnipotentNonsquare => num(-1),
                ConjClassLabel::Split(_) => num(0),
                ConjClassLabel::NonSplit(z) => zeta_pair(nt, j * logs.torus(z), -1),
                ConjClassLabel::TraceZero => match torus_tr0 {
                    Some(_) => num(-2 * if j % 2 == 0 { 1 } else { -1 }),
                    None => num(0),
                },
            });
        }

        let gauss_name = if one_mod_four { format!("sqrt({q})") } else { format!("sqrt(-{q})") };
        let half = rational(1, 2);
        let quadratic = |k: u32| if k % 2 == 0 { 1i64 } else { -1 };
        for (label, sign) in [(CharLabel::OscillatorPlus, 1i64), (CharLabel::OscillatorMinus, -1i64)] {
            let degree = if one_mod_four { (q as u64).div_ceil(2) } else { (q as u64 - 1) / 2 };
            let base: i64 = if one_mod_four { 1 } else { -1 };
            let unip = |s: i64| {
                let v = (&int(base) + &gauss.scale(&rational_int(s))).scale(&half);
                let op = if s > 0 { "+" } else { "-" };
                (v, format!("1/2*({base} {op} {gauss_name})"))
            };
            push(label, degree, &|c| match c {
                ConjClassLabel::Identity => num(degree as i64),
                ConjClassLabel::UnipotentSquare => unip(sign),
                ConjClassLabel::UnipotentNonsquare => unip(-sign),
                ConjClassLabel::Split(x) => {
                    if one_mod_four {
                        num(quadratic(logs.split(group, *x)))
                    } else {
                        num(0)
                    }
                }
                ConjClassLabel::NonSplit(z) => {
                    if one_mod_four {
                        num(0)
                    } else {
                        num(-quadratic(logs.torus(z)))
                    }
                }
                ConjClassLabel::TraceZero => match torus_tr0 {
                    Some(k) => num(-quadratic(k)),
                    None => num(quadratic(n / 2)),
                },
            });
        }

        Ok(CharacterTable { group: group.clone(), conductor: m, gauss, rows })
    }

    pub fn group(&self) -> &Psl2 {
        &self.group
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// The Gauss sum standing for √q (q ≡ 1 mod 4) or √−q (q ≡ 3 mod 4).
    pub fn gauss_sum(&self) -> &CycloNumber {
        &self.gauss
    }

    pub fn rows(&self) -> &[CharRow] {
        &self.rows
    }

    pub fn row(&self, label: CharLabel) -> Option<&CharRow> {
        self.rows.iter().find(|r| r.label == label)
    }

    pub fn inner_product(&self, f: &ClassFunctionC, g: &ClassFunctionC) -> CycloNumber {
        inner_product(&self.group, f, g)
    }

    /// Coefficients ⟨f, χ⟩ for every irreducible χ.
    pub fn decompose(&self, f: &ClassFunctionC) -> Vec<(CharLabel, CycloNumber)> {
        self.rows.iter().map(|r| (r.label, self.inner_product(f, &r.values))).collect()
    }

    /// Decomposition of a rational class function; irreducible characters
    /// that are not rational-valued can still carry rational coefficients.
    pub fn decompose_rational(&self, f: &ClassFunctionQ) -> Vec<(CharLabel, CycloNumber)> {
        self.decompose(&f.to_cyclo())
    }

    /// Σ a_χ·χ.
    pub fn reconstruct(&self, coeffs: &[(CharLabel, CycloNumber)]) -> ClassFunctionC {
        let mut out = ClassFunction::new(vec![CycloNumber::zero(); self.group.class_count()]);
        for (label, a) in coeffs {
            if a.is_zero() {
                continue;
            }
            let row = self.row(*label).expect("label from this table");
            out = out.add(&row.values.scale(a));
        }
        out
    }

    /// ⟨χ_i, χ_j⟩ = δ_ij for every pair of rows.
    pub fn check_row_orthogonality(&self) -> bool {
        let conj: Vec<ClassFunctionC> = self
            .rows
            .iter()
            .map(|r| ClassFunction::new(r.values.values.iter().map(CycloNumber::conjugate).collect()))
            .collect();
        let weights: Vec<CycloNumber> =
            self.group.classes().iter().map(|c| CycloNumber::from_integer(c.size as i64)).collect();
        let order = CycloNumber::from_integer(self.group.order() as i64);
        for (i, a) in self.rows.iter().enumerate() {
            for (j, b) in conj.iter().enumerate().skip(i) {
                let mut acc = CycloNumber::zero();
                for ((x, y), w) in a.values.values.iter().zip(&b.values).zip(&weights) {
                    acc += &(&(x * y) * w);
                }
                let expected = if i == j { order.clone() } else { CycloNumber::zero() };
                if acc != expected {
                    return false;
                }
            }
        }
        true
    }

    /// Σ_χ χ(C)·conj(χ(C')) = δ_{CC'}·|G|/|C|.
    pub fn check_column_orthogonality(&self) -> bool {
        let classes = self.group.classes();
        for a in 0..classes.len() {
            for b in a..classes.len() {
                let mut acc = CycloNumber::zero();
                for r in &self.rows {
                    acc += &(&r.values[a] * &r.values[b].conjugate());
                }
                let expected = if a == b {
                    CycloNumber::from_integer((self.group.order() / classes[a].size) as i64)
                } else {
                    CycloNumber::zero()
                };
                if acc != expected {
                    return false;
                }
            }
        }
        true
    }

    pub fn render_label(&self, label: CharLabel) -> String {
        let osc = if self.group.field().is_one_mod_four() { "omega_e" } else { "omega_o" };
        match label {
            CharLabel::Trivial => "chi_0".into(),
            CharLabel::Steinberg => "chi_1".into(),
            CharLabel::PrincipalSeries(j) => format!("chi_alpha{j}"),
            CharLabel::Cuspidal(j) => format!("pi_eta{j}"),
            CharLabel::OscillatorPlus => format!("{osc}+"),
            CharLabel::OscillatorMinus => format!("{osc}-"),
        }
    }

    /// Values of the row for α_j (or η_j) computed directly from an index that
    /// need not be admissible; used to confirm α ~ α⁻¹ gives the same row.
    pub fn family_row(&self, cuspidal: bool, j: u32) -> ClassFunctionC {
        let logs = Logs::new(&self.group);
        let q = self.group.q() as i64;
        let m = self.conductor;
        let int = |n: i64| CycloNumber::from_integer(n).lift(m);
        let n = if cuspidal { logs.n_torus } else { logs.n_split };
        let pair = |e: u32| (&CycloNumber::zeta(n, (e % n) as i64) + &CycloNumber::zeta(n, -((e % n) as i64))).lift(m);
        let one_mod_four = self.group.field().is_one_mod_four();
        let sign = |k: u32| if k % 2 == 0 { 1 } else { -1 };
        let values = self
            .group
            .classes()
            .iter()
            .map(|c| match (cuspidal, c.label) {
                (false, ConjClassLabel::Identity) => int(q + 1),
                (true, ConjClassLabel::Identity) => int(q - 1),
                (false, ConjClassLabel::UnipotentSquare | ConjClassLabel::UnipotentNonsquare) => int(1),
                (true, ConjClassLabel::UnipotentSquare | ConjClassLabel::UnipotentNonsquare) => int(-1),
                (false, ConjClassLabel::Split(x)) => pair(j * logs.split(&self.group, x)),
                (true, ConjClassLabel::Split(_)) | (false, ConjClassLabel::NonSplit(_)) => int(0),
                (true, ConjClassLabel::NonSplit(z)) => -pair(j * logs.torus(&z)),
                (false, ConjClassLabel::TraceZero) => int(if one_mod_four { 2 * sign(j) } else { 0 }),
                (true, ConjClassLabel::TraceZero) => int(if one_mod_four { 0 } else { -2 * sign(j) }),
            })
            .collect();
        ClassFunction::new(values)
    }
}

/// All distinct elements of a subgroup given by generators, by closure.
pub fn generate_subgroup(group: &Psl2, gens: &[ProjectiveMatrix]) -> Vec<ProjectiveMatrix> {
    let mut seen: HashSet<ProjectiveMatrix> = HashSet::new();
    let mut stack = vec![group.identity()];
    seen.insert(group.identity());
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = group.mul(&x, g);
            if seen.insert(y) {
                stack.push(y);
            }
        }
    }
    let mut out: Vec<_> = seen.into_iter().collect();
    out.sort_unstable();
    out
}
