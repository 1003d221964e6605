//! Argument parsing and command dispatch.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand};
use colmez_core::chartable::CharacterTable;
use colmez_core::cmtypes::{census, orbit, stabilizer};
use colmez_core::colmez::{ColmezContext, SamplingPolicy};
use colmez_core::field::is_odd_prime_power;
use colmez_core::heights::{height_coefficients, theorem72_height, Symbol};
use colmez_core::{CmType, Psl2};
use serde::Serialize;
use serde_json::Value;

use crate::output::{write_csv, write_json, write_table, Format};
use crate::suites::{run_suite, supported_orders, thread_pool, Suite, SuiteItem, MAX_Q};

const USAGE: &str = "usage: colmez <table|census|aphi|verify|height|stabilizer> [--q Q] [--epsilon E] \
[--cm-type BITS] [--disc D] [--format pretty|csv|json] [--seed S] [--max-q Q] [--suite NAME] [--samples N]";

const HEIGHT_LABEL: &str = "conjectural Faltings height, Colmez normalization";

#[derive(Parser, Debug)]
#[command(name = "colmez", version, about = "CM types over PSL2(F_q): census, A_phi^0 and heights")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value = "pretty")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Character table of PSL2(F_q), q >= 5.
    Table {
        #[arg(long)]
        q: u32,
    },
    /// Number of PSL2-orbits of CM types for each signature.
    Census {
        #[arg(long)]
        q: Option<u32>,
        /// Every odd prime power from 7 up to this bound.
        #[arg(long)]
        max_q: Option<u32>,
        /// Largest signature reported (default 7, capped at q + 1).
        #[arg(long)]
        epsilon: Option<u32>,
    },
    /// The class function A_phi^0 of a CM type.
    Aphi {
        #[arg(long)]
        q: u32,
        /// Bits in P^1 order: inf, 0, then the remaining field elements.
        #[arg(long)]
        cm_type: String,
        /// Also print the decomposition into irreducible characters.
        #[arg(long)]
        decompose: bool,
    },
    /// Run verification suites.
    Verify {
        #[arg(long)]
        q: Option<u32>,
        #[arg(long)]
        max_q: Option<u32>,
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        /// Random CM types instead of the default policy (exhaustive up to q = 11).
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Height expression for signature epsilon.
    Height {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        epsilon: u32,
        /// Fundamental discriminant of k; without it only coefficients are printed.
        #[arg(long, allow_hyphen_values = true)]
        disc: Option<i64>,
    },
    /// Stabilizer of a CM type in PSL2(F_q).
    Stabilizer {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        cm_type: String,
    },
}

enum Failure {
    Usage(String),
    Verification,
    Io(std::io::Error),
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code: 0 on success, 1 on a verification failure, 2 on invalid input.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let _ = write!(err, "{e}");
            return 2;
        }
    };
    let result = match cli.command {
        Command::Table { q } => table(out, cli.format, q),
        Command::Census { q, max_q, epsilon } => census_cmd(out, cli.format, q, max_q, epsilon),
        Command::Aphi { q, cm_type, decompose } => aphi(out, cli.format, q, &cm_type, decompose),
        Command::Verify { q, max_q, suite, samples, seed } => verify(out, cli.format, q, max_q, suite, samples, seed),
        Command::Height { q, epsilon, disc } => height(out, cli.format, q, epsilon, disc),
        Command::Stabilizer { q, cm_type } => stabilizer_cmd(out, cli.format, q, &cm_type),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Verification) => 1,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}\n{USAGE}");
            2
        }
        Err(Failure::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn check_q(q: u32, min: u32) -> Result<Psl2, Failure> {
    if q < min || q > MAX_Q || !is_odd_prime_power(q) {
        return Err(usage(format!("q must be an odd prime power with {min} <= q <= {MAX_Q}, got {q}")));
    }
    Psl2::from_order(q).map_err(|e| usage(e.to_string()))
}

fn parse_type(group: &Psl2, bits: &str) -> Result<CmType, Failure> {
    CmType::from_bit_string(group.q(), bits).map_err(|e| usage(e.to_string()))
}

#[derive(Serialize)]
struct TableJson {
    q: u32,
    conductor: u32,
    classes: Vec<ClassJson>,
    characters: Vec<CharacterJson>,
}

#[derive(Serialize)]
struct ClassJson {
    label: String,
    size: u64,
    representative: String,
}

#[derive(Serialize)]
struct CharacterJson {
    label: String,
    degree: u64,
    values: Vec<String>,
    exact: Vec<String>,
}

fn table(out: &mut dyn Write, format: Format, q: u32) -> Outcome {
    let group = check_q(q, 5)?;
    let t = CharacterTable::new(&group).map_err(|e| usage(e.to_string()))?;
    let labels: Vec<String> = group.classes().iter().map(|c| group.render_label(&c.label)).collect();
    match format {
        Format::Json => {
            let body = TableJson {
                q,
                conductor: t.conductor(),
                classes: group
                    .classes()
                    .iter()
                    .zip(&labels)
                    .map(|(c, l)| ClassJson {
                        label: l.clone(),
                        size: c.size,
                        representative: group.render_matrix(&c.representative),
                    })
                    .collect(),
                characters: t
                    .rows()
                    .iter()
                    .map(|r| CharacterJson {
                        label: t.render_label(r.label),
                        degree: r.degree,
                        values: r.symbolic.clone(),
                        exact: r.values.values.iter().map(|v| v.to_string()).collect(),
                    })
                    .collect(),
            };
            write_json(out, "character_table", &body)?;
        }
        _ => {
            let mut header = vec!["character".to_string(), "degree".to_string()];
            header.extend(labels);
            let mut rows = vec![{
                let mut r = vec!["class size".to_string(), String::new()];
                r.extend(group.classes().iter().map(|c| c.size.to_string()));
                r
            }];
            for row in t.rows() {
                let mut r = vec![t.render_label(row.label), row.degree.to_string()];
                r.extend(row.symbolic.iter().cloned());
                rows.push(r);
            }
            if format == Format::Csv {
                write_csv(out, &header, &rows)?;
            } else {
                writeln!(out, "PSL2(F_{q}), values in Q(zeta_{})", t.conductor())?;
                write_table(out, &header, &rows)?;
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct CensusJson {
    rows: Vec<CensusRowJson>,
}

#[derive(Serialize)]
struct CensusRowJson {
    q: u32,
    /// Orbit counts for ε = 1, 2, …
    counts: Vec<Value>,
    middle_epsilon: Option<u32>,
    middle_with_rho: Option<Value>,
    exhaustive_checked: bool,
}

fn count_value(n: &impl std::fmt::Display) -> Value {
    match n.to_string().parse::<u64>() {
        Ok(v) => Value::from(v),
        Err(_) => Value::from(n.to_string()),
    }
}

fn census_cmd(out: &mut dyn Write, format: Format, q: Option<u32>, max_q: Option<u32>, epsilon: Option<u32>) -> Outcome {
    let orders = match (q, max_q) {
        (Some(q), None) => vec![q],
        (None, Some(m)) => supported_orders(m).into_iter().filter(|&q| q >= 7).collect(),
        _ => return Err(usage("census takes exactly one of --q or --max-q")),
    };
    let mut rows = Vec::new();
    for q in orders {
        let group = check_q(q, 3)?;
        let max_e = epsilon.unwrap_or(7).min(q + 1);
        let row = census(&group, max_e).map_err(|e| usage(e.to_string()))?;
        let middle = q.div_ceil(2);
        rows.push(CensusRowJson {
            q,
            counts: row.published().iter().map(count_value).collect(),
            middle_epsilon: (middle <= max_e).then_some(middle),
            middle_with_rho: row.middle_with_rho.as_ref().map(count_value),
            exhaustive_checked: row.exhaustive_checked,
        });
    }
    let joined = |r: &CensusRowJson| r.counts.iter().map(plain).collect::<Vec<_>>();
    match format {
        Format::Json => write_json(out, "census", &CensusJson { rows })?,
        Format::Csv => {
            let width = rows.iter().map(|r| r.counts.len()).max().unwrap_or(0);
            let mut header = vec!["q".to_string()];
            header.extend((1..=width).map(|e| e.to_string()));
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let mut v = vec![r.q.to_string()];
                    v.extend(joined(r));
                    v
                })
                .collect();
            write_csv(out, &header, &body)?;
        }
        Format::Pretty => {
            for r in &rows {
                writeln!(out, "q={} epsilon=1..{}", r.q, r.counts.len())?;
                writeln!(out, "{}", joined(r).join(","))?;
                if let (Some(m), Some(rho)) = (r.middle_epsilon, &r.middle_with_rho) {
                    let own = plain(&r.counts[m as usize - 1]);
                    if own != plain(rho) {
                        writeln!(out, "epsilon={m}: {own} orbits under PSL2, {} under PSL2 x <rho>", plain(rho))?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[derive(Serialize)]
struct AphiJson {
    q: u32,
    cm_type: String,
    slots: Vec<String>,
    epsilon: u32,
    values: Vec<AphiEntry>,
    matches_closed_form: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    decomposition: Option<Vec<DecompEntry>>,
}

#[derive(Serialize)]
struct AphiEntry {
    class: String,
    size: u64,
    rho: u8,
    value: String,
}

#[derive(Serialize)]
struct DecompEntry {
    character: String,
    rho_sign: i8,
    coefficient: String,
}

fn aphi(out: &mut dyn Write, format: Format, q: u32, bits: &str, decompose: bool) -> Outcome {
    let group = check_q(q, 3)?;
    let phi = parse_type(&group, bits)?;
    let ctx = ColmezContext::new(&group);
    let a0 = ctx.a_phi0(&phi).map_err(|e| usage(e.to_string()))?;
    let rhs = ctx.theorem61_rhs(phi.signature()).map_err(|e| usage(e.to_string()))?;
    let matches = a0 == rhs;
    let decomposition = if decompose {
        let t = CharacterTable::new(&group).map_err(|e| usage(e.to_string()))?;
        let coeffs = ctx.decompose_a_phi0(&t, &phi).map_err(|e| usage(e.to_string()))?;
        Some(
            coeffs
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(l, c)| DecompEntry {
                    character: t.render_label(l.chi),
                    rho_sign: if l.odd { -1 } else { 1 },
                    coefficient: c.to_string(),
                })
                .collect::<Vec<_>>(),
        )
    } else {
        None
    };
    let values: Vec<AphiEntry> = a0
        .entries()
        .map(|(c, r, v)| AphiEntry {
            class: group.render_label(&group.classes()[c].label),
            size: group.classes()[c].size,
            rho: r as u8,
            value: v.to_string(),
        })
        .collect();
    let body = AphiJson {
        q,
        cm_type: phi.to_bit_string(),
        slots: CmType::slot_dictionary(&group),
        epsilon: phi.signature(),
        values,
        matches_closed_form: matches,
        decomposition,
    };
    match format {
        Format::Json => write_json(out, "a_phi0", &body)?,
        Format::Csv => {
            let header = ["class", "size", "rho", "value"].map(String::from);
            let rows: Vec<Vec<String>> = body
                .values
                .iter()
                .map(|e| vec![e.class.clone(), e.size.to_string(), e.rho.to_string(), e.value.clone()])
                .collect();
            write_csv(out, &header, &rows)?;
        }
        Format::Pretty => {
            writeln!(out, "q={q} cm-type={} epsilon={}", body.cm_type, body.epsilon)?;
            writeln!(out, "slots: {}", body.slots.join(","))?;
            let nc = group.class_count();
            let header = ["class", "size", "rho=0", "rho=1"].map(String::from);
            let rows: Vec<Vec<String>> = (0..nc)
                .map(|c| {
                    vec![
                        body.values[c].class.clone(),
                        body.values[c].size.to_string(),
                        body.values[c].value.clone(),
                        body.values[nc + c].value.clone(),
                    ]
                })
                .collect();
            write_table(out, &header, &rows)?;
            writeln!(out, "closed form: {}", if matches { "match" } else { "MISMATCH" })?;
            if let Some(d) = &body.decomposition {
                writeln!(out, "decomposition:")?;
                for e in d {
                    let sign = if e.rho_sign < 0 { "sgn" } else { "1" };
                    writeln!(out, "  {} x {sign}: {}", e.character, e.coefficient)?;
                }
            }
        }
    }
    if matches {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

#[derive(Serialize)]
struct VerifyJson<'a> {
    items: &'a [SuiteItem],
    passed: bool,
}

fn verify(
    out: &mut dyn Write,
    format: Format,
    q: Option<u32>,
    max_q: Option<u32>,
    suite: Suite,
    samples: Option<u64>,
    seed: u64,
) -> Outcome {
    let orders = match (q, max_q) {
        (Some(q), None) => {
            check_q(q, 3)?;
            vec![q]
        }
        (None, Some(m)) => supported_orders(m),
        _ => return Err(usage("verify takes exactly one of --q or --max-q")),
    };
    let pool = thread_pool();
    let mut items = Vec::new();
    for q in orders {
        let policy = match samples {
            Some(n) => SamplingPolicy::Random { samples: n, seed },
            None => SamplingPolicy::default_for(q, seed),
        };
        for s in suite.expand() {
            items.extend(run_suite(q, s, policy, &pool));
        }
    }
    let passed = items.iter().all(SuiteItem::ok);
    match format {
        Format::Json => write_json(out, "verification", &VerifyJson { items: &items, passed })?,
        Format::Csv => {
            let header = ["q", "suite", "check", "passed", "tested", "counterexample"].map(String::from);
            let rows: Vec<Vec<String>> = items
                .iter()
                .map(|i| {
                    vec![
                        i.q.to_string(),
                        i.suite.name().to_string(),
                        i.name.clone(),
                        i.passed.to_string(),
                        i.tested.to_string(),
                        i.counterexample.clone().unwrap_or_default(),
                    ]
                })
                .collect();
            write_csv(out, &header, &rows)?;
        }
        Format::Pretty => {
            for i in &items {
                let status = if i.ok() { "ok" } else { "FAIL" };
                match i.suite {
                    Suite::Theorem61 => writeln!(
                        out,
                        "q={} {}: {}/{} CM types pass [{status}] {}",
                        i.q,
                        i.suite.name(),
                        i.passed,
                        i.tested,
                        i.name
                    )?,
                    _ => writeln!(out, "q={} {}: {} [{status}]", i.q, i.suite.name(), i.name)?,
                }
                if let Some(c) = &i.counterexample {
                    writeln!(out, "  counterexample: {c}")?;
                }
                for n in &i.notes {
                    writeln!(out, "  note: {n}")?;
                }
            }
            let failed = items.iter().filter(|i| !i.ok()).count();
            writeln!(out, "{} checks, {failed} failed", items.len())?;
        }
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

#[derive(Serialize)]
struct HeightJson {
    q: u32,
    epsilon: u32,
    discriminant: Option<i64>,
    coefficients: Coefficients,
    numeric_part: Option<f64>,
    symbolic_remainder: String,
    label: &'static str,
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct Coefficients {
    ZetaQ: String,
    ChiK: String,
    ChiEF: String,
}

fn height(out: &mut dyn Write, format: Format, q: u32, epsilon: u32, disc: Option<i64>) -> Outcome {
    check_q(q, 3)?;
    let expr = match disc {
        Some(d) => theorem72_height(q, epsilon, d),
        None => height_coefficients(q, epsilon),
    }
    .map_err(|e| usage(e.to_string()))?;
    let remainder = expr.symbolic_remainder();
    let body = HeightJson {
        q,
        epsilon,
        discriminant: disc,
        coefficients: Coefficients {
            ZetaQ: expr.coefficient(Symbol::ZetaQ).to_string(),
            ChiK: expr.coefficient(Symbol::ChiK).to_string(),
            ChiEF: remainder.to_string(),
        },
        numeric_part: expr.numeric_part(),
        symbolic_remainder: format!("({remainder})*{}", Symbol::ChiEF.name()),
        label: HEIGHT_LABEL,
    };
    match format {
        Format::Json => write_json(out, "height", &body)?,
        Format::Csv => {
            let header = ["symbol", "coefficient", "value"].map(String::from);
            let rows: Vec<Vec<String>> = Symbol::ALL
                .iter()
                .map(|&s| {
                    vec![
                        s.name().to_string(),
                        expr.coefficient(s).to_string(),
                        expr.bound_value(s).map(|v| v.to_string()).unwrap_or_default(),
                    ]
                })
                .collect();
            write_csv(out, &header, &rows)?;
        }
        Format::Pretty => {
            let d = disc.map(|d| d.to_string()).unwrap_or_else(|| "unset".into());
            writeln!(out, "q={q} epsilon={epsilon} disc={d}")?;
            writeln!(out, "h = {expr}")?;
            if let Some(v) = body.numeric_part {
                writeln!(out, "numeric part: {v}")?;
                writeln!(out, "{HEIGHT_LABEL}: {v} + {}", body.symbolic_remainder)?;
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct StabilizerJson {
    q: u32,
    cm_type: String,
    order: usize,
    orbit_size: usize,
    elements: Vec<String>,
}

fn stabilizer_cmd(out: &mut dyn Write, format: Format, q: u32, bits: &str) -> Outcome {
    let group = check_q(q, 3)?;
    let phi = parse_type(&group, bits)?;
    let stab = stabilizer(&group, &phi);
    let body = StabilizerJson {
        q,
        cm_type: phi.to_bit_string(),
        order: stab.len(),
        orbit_size: orbit(&group, &phi).len(),
        elements: stab.iter().map(|g| group.render_matrix(g)).collect(),
    };
    match format {
        Format::Json => write_json(out, "stabilizer", &body)?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = body.elements.iter().map(|e| vec![e.clone()]).collect();
            write_csv(out, &["element".to_string()], &rows)?;
        }
        Format::Pretty => {
            writeln!(out, "q={q} cm-type={} order={} orbit={}", body.cm_type, body.order, body.orbit_size)?;
            for e in &body.elements {
                writeln!(out, "  {e}")?;
            }
        }
    }
    Ok(())
}
