//! Verification suites run by `colmez verify`.

use colmez_core::chartable::{induce_rational, CharLabel, CharacterTable};
use colmez_core::cmtypes::census;
use colmez_core::colmez::{lemma_identities, ColmezContext, SamplingPolicy};
use colmez_core::cyclotomic::rational_int;
use colmez_core::field::is_odd_prime_power;
use colmez_core::heights::average_height_check;
use colmez_core::Psl2;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

/// Largest q accepted on the command line.
pub const MAX_Q: u32 = 127;

/// Orbit counts for ε = 1..7 as they appear in the published census.
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

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Theorem61,
    Identities,
    Census,
    Average,
    Tables,
    All,
}

impl Suite {
    pub fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Census, Suite::Tables, Suite::Identities, Suite::Theorem61, Suite::Average],
            s => vec![s],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Theorem61 => "theorem61",
            Suite::Identities => "identities",
            Suite::Census => "census",
            Suite::Average => "average",
            Suite::Tables => "tables",
            Suite::All => "all",
        }
    }
}

/// One line of a verification report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteItem {
    pub q: u32,
    pub suite: Suite,
    pub name: String,
    pub tested: u64,
    pub passed: u64,
    pub counterexample: Option<String>,
    /// Non-fatal observations.
    pub notes: Vec<String>,
}

impl SuiteItem {
    fn new(q: u32, suite: Suite, name: impl Into<String>) -> Self {
        SuiteItem { q, suite, name: name.into(), tested: 0, passed: 0, counterexample: None, notes: Vec::new() }
    }

    fn single(q: u32, suite: Suite, name: impl Into<String>, failure: Option<String>) -> Self {
        let mut item = Self::new(q, suite, name);
        item.tested = 1;
        item.passed = failure.is_none() as u64;
        item.counterexample = failure;
        item
    }

    pub fn ok(&self) -> bool {
        self.passed == self.tested && self.counterexample.is_none()
    }
}

/// A thread pool sized by COLMEZ_THREADS, or rayon's default when unset.
pub fn thread_pool() -> rayon::ThreadPool {
    let threads = std::env::var("COLMEZ_THREADS").ok().and_then(|v| v.parse::<usize>().ok()).unwrap_or(0);
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool")
}

/// Odd prime powers 3 ≤ q ≤ max_q.
pub fn supported_orders(max_q: u32) -> Vec<u32> {
    (3..=max_q.min(MAX_Q)).filter(|&q| is_odd_prime_power(q)).collect()
}

pub fn run_suite(q: u32, suite: Suite, policy: SamplingPolicy, pool: &rayon::ThreadPool) -> Vec<SuiteItem> {
    let group = match Psl2::from_order(q) {
        Ok(g) => g,
        Err(e) => return vec![SuiteItem::single(q, suite, suite.name(), Some(e.to_string()))],
    };
    match suite {
        Suite::Theorem61 => vec![theorem61(&group, policy, pool)],
        Suite::Identities => identities(&group),
        Suite::Census => vec![census_item(&group)],
        Suite::Average => vec![average(q)],
        Suite::Tables if q >= 5 => vec![tables(&group)],
        Suite::Tables => Vec::new(),
        Suite::All => suite.expand().into_iter().flat_map(|s| run_suite(q, s, policy, pool)).collect(),
    }
}

fn theorem61(group: &Psl2, policy: SamplingPolicy, pool: &rayon::ThreadPool) -> SuiteItem {
    let q = group.q();
    let name = match policy {
        SamplingPolicy::Exhaustive => "closed form (exhaustive)".to_string(),
        SamplingPolicy::Random { samples, seed } => format!("closed form ({samples} samples, seed {seed})"),
    };
    let mut item = SuiteItem::new(q, Suite::Theorem61, name);
    let types = match policy.cm_types(q) {
        Ok(t) => t,
        Err(e) => {
            item.tested = 1;
            item.counterexample = Some(e.to_string());
            return item;
        }
    };
    let ctx = ColmezContext::new(group);
    let results: Vec<Option<String>> =
        pool.install(|| types.par_iter().map(|phi| ctx.check(phi).err().map(|e| e.to_string())).collect());
    item.tested = results.len() as u64;
    item.passed = results.iter().filter(|r| r.is_none()).count() as u64;
    item.counterexample = results.into_iter().flatten().next();
    for eps in 0..=q + 1 {
        match ctx.intermediate_flags(eps) {
            Ok(flags) => item.notes.extend(flags),
            Err(e) => item.notes.push(e.to_string()),
        }
    }
    item
}

fn identities(group: &Psl2) -> Vec<SuiteItem> {
    let q = group.q();
    lemma_identities(group)
        .checks
        .into_iter()
        .map(|c| {
            let failure = (!c.passed).then(|| format!("q={q} class {}", c.class.unwrap_or_default()));
            SuiteItem::single(q, Suite::Identities, c.name, failure)
        })
        .collect()
}

fn census_item(group: &Psl2) -> SuiteItem {
    let q = group.q();
    let row = match census(group, q + 1) {
        Ok(r) => r,
        Err(e) => return SuiteItem::single(q, Suite::Census, "census", Some(e.to_string())),
    };
    let mut failure = None;
    if let Some((_, printed)) = PUBLISHED_CENSUS.iter().find(|(p, _)| *p == q) {
        for (i, &want) in printed.iter().enumerate() {
            if row.counts[i + 1].to_u64() != Some(want) {
                failure = Some(format!("q={q} epsilon={}: {} orbits, printed {want}", i + 1, row.counts[i + 1]));
                break;
            }
        }
    }
    let name = if row.exhaustive_checked { "census (Burnside and exhaustive)" } else { "census (Burnside)" };
    let mut item = SuiteItem::single(q, Suite::Census, name, failure);
    if row.middle_discrepancy() {
        let m = (q as usize).div_ceil(2);
        item.notes.push(format!(
            "epsilon={m}: {} orbits under PSL2, {} with rho",
            row.counts[m],
            row.middle_with_rho.as_ref().map(|v| v.to_string()).unwrap_or_default()
        ));
    }
    item
}

fn average(q: u32) -> SuiteItem {
    SuiteItem::single(q, Suite::Average, "binomial average of heights", average_height_check(q).err().map(|e| e.to_string()))
}

fn tables(group: &Psl2) -> SuiteItem {
    let q = group.q();
    let check = || -> Result<(), String> {
        let t = CharacterTable::new(group).map_err(|e| e.to_string())?;
        let n = (q as usize + 5) / 2;
        if group.class_count() != n || t.rows().len() != n {
            return Err(format!("q={q}: class or character count"));
        }
        if t.rows().iter().map(|r| r.degree * r.degree).sum::<u64>() != group.order() {
            return Err(format!("q={q}: degrees"));
        }
        if !t.check_row_orthogonality() || !t.check_column_orthogonality() {
            return Err(format!("q={q}: orthogonality"));
        }
        let borel = group.borel_elements();
        let ind = induce_rational(group, &borel, &vec![rational_int(1); borel.len()]).map_err(|e| e.to_string())?;
        let trivial = &t.row(CharLabel::Trivial).ok_or("missing trivial row")?.values;
        let steinberg = &t.row(CharLabel::Steinberg).ok_or("missing Steinberg row")?.values;
        if ind.to_cyclo() != trivial.add(steinberg) {
            return Err(format!("q={q}: permutation character"));
        }
        Ok(())
    };
    SuiteItem::single(q, Suite::Tables, "character table", check().err())
}
