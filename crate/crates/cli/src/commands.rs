use serde::Serialize;
use serde_json::{json, Value};
use soergel::bimodule::generic_decompose;
use soergel::hecke::{delta_char_bott_samelson, subword_char};
use soergel::soergel::{
    basis_check, end_check_with, localized_split_check, pi1_comparison, ses_rank1, steinberg_basis,
    Pi1Report,
};
use soergel::walls::{fixed_locus, fq_point_count, separation_check};
use soergel::{Error, RootDatum};

use crate::cache::Cache;
use crate::config::{InputError, RunConfig};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub summary: String,
    pub detail: Value,
}

impl Check {
    fn new(
        name: impl Into<String>,
        passed: bool,
        summary: impl Into<String>,
        detail: Value,
    ) -> Self {
        Check {
            name: name.into(),
            passed,
            summary: summary.into(),
            detail,
        }
    }
}

pub enum CommandError {
    Input(String),
    Failed(String),
}

impl From<InputError> for CommandError {
    fn from(e: InputError) -> Self {
        CommandError::Input(e.0)
    }
}

impl From<Error> for CommandError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_)
            | Error::InvalidDatum(_)
            | Error::InvalidField(_)
            | Error::NotAdjoint(_)
            | Error::BadSimpleIndex { .. }
            | Error::NotFiniteType(_)
            | Error::DimensionMismatch(_)
            | Error::NotSublattice(_)
            | Error::WeylCapExceeded(_)
            | Error::EnumerationCap(_) => CommandError::Input(e.to_string()),
            other => CommandError::Failed(other.to_string()),
        }
    }
}

type Checks = Result<Vec<Check>, CommandError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    DatumInfo,
    WallsCheck,
    WallsIntersections,
    BsChar,
    BsDecompose,
    SoergelBasis,
    SoergelEnd,
    SoergelSes,
    SoergelSplit,
    Pi1Report,
    Suite,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::DatumInfo => "datum-info",
            Command::WallsCheck => "walls-check",
            Command::WallsIntersections => "walls-intersections",
            Command::BsChar => "bs-char",
            Command::BsDecompose => "bs-decompose",
            Command::SoergelBasis => "soergel-basis",
            Command::SoergelEnd => "soergel-end",
            Command::SoergelSes => "soergel-ses",
            Command::SoergelSplit => "soergel-split",
            Command::Pi1Report => "pi1-report",
            Command::Suite => "suite",
        }
    }
}

pub fn run(cmd: Command, cfg: &RunConfig, cache: &mut Cache) -> Checks {
    match cmd {
        Command::DatumInfo => datum_info(cfg),
        Command::WallsCheck => walls_check(cfg),
        Command::WallsIntersections => walls_intersections(cfg),
        Command::BsChar => bs_char(cfg, required_word(cfg)?),
        Command::BsDecompose => bs_decompose(cfg, required_word(cfg)?, cache),
        Command::SoergelBasis => soergel_basis(cfg),
        Command::SoergelEnd => soergel_end(cfg, cache),
        Command::SoergelSes => soergel_ses(cfg),
        Command::SoergelSplit => soergel_split(cfg, required_word(cfg)?),
        Command::Pi1Report => pi1(cfg),
        Command::Suite => suite(cfg, cache),
    }
}

fn required_word(cfg: &RunConfig) -> Result<&[usize], CommandError> {
    cfg.word
        .as_deref()
        .ok_or_else(|| CommandError::Input("this command needs --word, e.g. --word 1,2,1".into()))
}

fn word_str(word: &[usize]) -> String {
    format!(
        "[{}]",
        word.iter()
            .map(|s| (s + 1).to_string())
            .collect::<Vec<_>>()
            .join(",")
    )
}

fn coords(v: &[i64]) -> String {
    format!(
        "({})",
        v.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
    )
}

/// `a/b` of a full turn, as a root of unity.
fn phase_point(a: i64, b: i64) -> String {
    match (a, b) {
        (0, _) => "1".into(),
        (1, 2) => "-1".into(),
        _ => format!("exp(2πi·{a}/{b})"),
    }
}

fn datum_info(cfg: &RunConfig) -> Checks {
    let d = &cfg.datum;
    let elements: Vec<Value> = (0..d.order())
        .map(|w| json!({"index": w, "label": d.label(w), "length": d.length(w)}))
        .collect();
    let coroots: Vec<Value> = d
        .positive_coroots()
        .iter()
        .enumerate()
        .map(|(k, c)| {
            json!({
                "wall": k + 1,
                "coroot": c.coroot.to_vec(),
                "root": c.root.to_vec(),
                "reflection": d.label(c.reflection),
            })
        })
        .collect();
    let detail = json!({
        "name": d.name(),
        "rank": d.rank(),
        "lattice_rank": d.lattice_rank(),
        "adjoint": d.is_adjoint(),
        "cartan": d.cartan().to_rows(),
        "weyl_order": d.order(),
        "longest_element": d.label(d.longest_element()),
        "elements": elements,
        "positive_coroots": coroots,
    });
    let summary = format!(
        "{}: rank {}, |W| = {}, {} positive coroots, {}",
        d.name(),
        d.rank(),
        d.order(),
        d.positive_coroots().len(),
        if d.is_adjoint() {
            "adjoint"
        } else {
            "not adjoint"
        }
    );
    Ok(vec![Check::new("datum", true, summary, detail)])
}

fn walls_check(cfg: &RunConfig) -> Checks {
    let d = &cfg.datum;
    let mut out = Vec::new();
    for b in cfg.walls() {
        let rep = separation_check(d, b, cfg.field_spec)?;
        let coroot = &d.positive_coroots()[b].coroot;
        let mut summary = format!(
            "{} surviving pairs, {} violations",
            rep.surviving_pairs().len(),
            rep.violations.len()
        );
        for v in &rep.violations {
            let pts: Vec<String> = v.phases.iter().map(|&(a, q)| phase_point(a, q)).collect();
            summary.push_str(&format!(
                "; witness ({}, {}) at ({})",
                d.label(v.w),
                d.label(v.v),
                pts.join(", ")
            ));
        }
        if !rep.characteristic_flags.is_empty() {
            summary.push_str(&format!(
                "; {} characteristic flags",
                rep.characteristic_flags.len()
            ));
        }
        let detail = serde_json::to_value(&rep).expect("serializable");
        out.push(Check::new(
            format!("separation wall {} {}", b + 1, coords(coroot.as_slice())),
            rep.passed(),
            summary,
            detail,
        ));
    }
    Ok(out)
}

const POINT_COUNT_Q: [u64; 6] = [3, 4, 5, 7, 8, 9];

fn walls_intersections(cfg: &RunConfig) -> Checks {
    let d = &cfg.datum;
    let mut rows = Vec::new();
    let mut ok = true;
    for u in 0..d.order() {
        let fl = fixed_locus(d, u);
        let mut counts = Vec::new();
        for q in POINT_COUNT_Q {
            let pc = fq_point_count(d, u, q)?;
            ok &= pc.formula == pc.brute_force;
            counts.push(json!({"q": q, "formula": pc.formula, "brute_force": pc.brute_force}));
        }
        rows.push(json!({
            "u": d.label(u),
            "free_rank": fl.free_rank(),
            "invariant_factors": fl.invariant_factors(),
            "characteristic_flags": fl.characteristic_flags(cfg.field_spec),
            "counts": counts,
        }));
    }
    let summary = format!(
        "{} elements, q in {:?}: formula {} brute force",
        d.order(),
        POINT_COUNT_Q,
        if ok { "matches" } else { "DIFFERS from" }
    );
    Ok(vec![Check::new(
        "fixed loci",
        ok,
        summary,
        Value::Array(rows),
    )])
}

fn bs_char(cfg: &RunConfig, word: &[usize]) -> Checks {
    let d = &cfg.datum;
    let rec = delta_char_bott_samelson(d, word)?;
    let sub = subword_char(d, word)?;
    let ok = rec == sub && rec.total() == 1 << word.len();
    let summary = format!("{} total {}", rec.describe(d), rec.total());
    let detail = json!({
        "word": word_str(word),
        "recursion": rec.describe(d),
        "subwords": sub.describe(d),
        "total": rec.total(),
    });
    Ok(vec![Check::new(
        format!("character {}", word_str(word)),
        ok,
        summary,
        detail,
    )])
}

fn bs_decompose(cfg: &RunConfig, word: &[usize], cache: &mut Cache) -> Checks {
    let d = &cfg.datum;
    let bs = cache.bott_samelson(d, word, cfg.field_spec)?;
    let expected = subword_char(d, word)?;
    let name = format!("decomposition {}", word_str(word));
    match generic_decompose(&bs) {
        Ok(dec) => {
            let ok = dec == expected.entries();
            let got: Vec<String> = dec
                .iter()
                .map(|&(w, m)| format!("{}: {m}", d.label(w)))
                .collect();
            let summary = format!("rank {}, {{{}}}", bs.rank(), got.join(", "));
            let detail =
                json!({"rank": bs.rank(), "generic": got, "expected": expected.describe(d)});
            Ok(vec![Check::new(name, ok, summary, detail)])
        }
        Err(e @ (Error::NotGraphFiltered(_) | Error::DefectiveFiber(_))) => {
            Ok(vec![Check::new(name, false, e.to_string(), Value::Null)])
        }
        Err(e) => Err(e.into()),
    }
}

fn soergel_basis(cfg: &RunConfig) -> Checks {
    let d = &cfg.datum;
    let basis = match steinberg_basis(d, cfg.field_spec) {
        Ok(b) => b,
        Err(Error::NoSteinbergBasis) => {
            return Ok(vec![Check::new(
                "steinberg basis",
                false,
                "no verifiable basis",
                Value::Null,
            )])
        }
        Err(e) => return Err(e.into()),
    };
    let cert = basis_check(d, &basis.exponents(), cfg.field_spec)?;
    let exps: Vec<String> = basis
        .entries
        .iter()
        .map(|(w, l)| format!("{} ↦ {}", d.label(*w), coords(l.as_slice())))
        .collect();
    let summary = format!(
        "{} exponents ({:?}), {} expansions certified",
        exps.len(),
        basis.source,
        cert.expansions
    );
    let detail = json!({
        "source": basis.source,
        "exponents": exps,
        "independent": cert.independent,
        "expansions": cert.expansions,
        "witness": cert.witness.as_ref().map(ToString::to_string),
    });
    Ok(vec![Check::new(
        "steinberg basis",
        cert.passed(),
        summary,
        detail,
    )])
}

fn soergel_end(cfg: &RunConfig, cache: &mut Cache) -> Checks {
    let big = cache.big(&cfg.datum, cfg.field_spec)?;
    let rep = end_check_with(&big, cfg.box_radius)?;
    let summary = format!(
        "rank {}, fraction rank {}, {} of {} bounded maps in span (box {}), {} walls cross-checked",
        rep.order,
        rep.fraction_rank,
        rep.contained,
        rep.bounded_maps,
        rep.box_radius,
        rep.localized.len()
    );
    let detail = serde_json::to_value(&rep).expect("serializable");
    Ok(vec![Check::new(
        "endomorphisms",
        rep.passed(),
        summary,
        detail,
    )])
}

fn soergel_ses(cfg: &RunConfig) -> Checks {
    let d = &cfg.datum;
    (0..d.rank())
        .map(|s| {
            let rep = ses_rank1(d, s, cfg.field_spec)?.report()?;
            let summary = format!(
                "ι = ({}), π = ({}), ranks {:?}",
                rep.iota.join(", "),
                rep.pi.join(", "),
                rep.generic_ranks
            );
            let detail = serde_json::to_value(&rep).expect("serializable");
            Ok(Check::new(
                format!("sequence s{}", s + 1),
                rep.passed(),
                summary,
                detail,
            ))
        })
        .collect()
}

fn soergel_split(cfg: &RunConfig, word: &[usize]) -> Checks {
    let d = &cfg.datum;
    let point = cfg
        .point
        .as_ref()
        .map(|p| {
            p.iter()
                .map(|x| cfg.field_spec.parse_scalar(x))
                .collect::<Result<Vec<_>, _>>()
        })
        .transpose()?;
    let mut out = Vec::new();
    for b in cfg.walls() {
        let rep = localized_split_check(d, word, b, point.clone(), cfg.field_spec)?;
        let summary = match &rep.point {
            None => rep.note.clone().unwrap_or_default(),
            Some(p) => {
                let blocks: Vec<String> = rep
                    .blocks
                    .iter()
                    .map(|blk| {
                        format!(
                            "{{{}}}:{}+{}",
                            blk.labels.join(","),
                            blk.eigen,
                            blk.nonsplit
                        )
                    })
                    .collect();
                format!("at ({}): {}", p.join(", "), blocks.join(" "))
            }
        };
        let detail = serde_json::to_value(&rep).expect("serializable");
        out.push(Check::new(
            format!("split {} wall {}", word_str(word), b + 1),
            rep.passed(),
            summary,
            detail,
        ));
    }
    Ok(out)
}

fn pi1_summary(d: &RootDatum, rep: &Pi1Report) -> String {
    let parts: Vec<String> = rep
        .pairs
        .iter()
        .filter(|p| p.w == d.identity() && p.v != p.w)
        .map(|p| match p.points {
            Some(k) => format!("(1, {}): {k} pts", d.label(p.v)),
            None => format!("(1, {}): free rank {}", d.label(p.v), p.free_rank),
        })
        .collect();
    parts.join(", ")
}

fn pi1(cfg: &RunConfig) -> Checks {
    let d = &cfg.datum;
    let (plain, modified) = pi1_comparison(d)?;
    let adjoint = d.adjoint_form()?;
    Ok(vec![
        Check::new(
            "graphs on Λ ⊕ Λ",
            true,
            pi1_summary(d, &plain),
            serde_json::to_value(&plain).expect("serializable"),
        ),
        Check::new(
            "graphs on the bimonodromy lattice",
            true,
            pi1_summary(&adjoint, &modified),
            serde_json::to_value(&modified).expect("serializable"),
        ),
    ])
}

fn all_words(rank: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w: &Vec<usize>| {
                (0..rank).map(move |s| {
                    let mut x = w.clone();
                    x.push(s);
                    x
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// Largest Weyl group for which the suite builds `R ⊗_{R^W} R`.
const SUITE_ORDER_LIMIT: usize = 8;
/// The split check runs on the longest element, truncated to this length.
const SUITE_SPLIT_LENGTH: usize = 4;

fn suite(cfg: &RunConfig, cache: &mut Cache) -> Checks {
    let d = &cfg.datum;
    let mut out = datum_info(cfg)?;
    out.extend(walls_check(&RunConfig {
        wall: crate::config::WallSelector::All,
        ..cfg.clone()
    })?);
    out.extend(walls_intersections(cfg)?);
    let max_len = if d.order() <= 6 { 3 } else { 2 };
    if d.is_adjoint() {
        for word in all_words(d.rank(), max_len) {
            out.extend(bs_char(cfg, &word)?);
            out.extend(bs_decompose(cfg, &word, cache)?);
        }
        if d.order() <= SUITE_ORDER_LIMIT {
            out.extend(soergel_basis(cfg)?);
            out.extend(soergel_end(cfg, cache)?);
        } else {
            let why = format!("|W| = {} exceeds {SUITE_ORDER_LIMIT}", d.order());
            out.push(Check::new(
                "steinberg basis",
                true,
                format!("skipped: {why}"),
                Value::Null,
            ));
            out.push(Check::new(
                "endomorphisms",
                true,
                format!("skipped: {why}"),
                Value::Null,
            ));
        }
        out.extend(soergel_ses(cfg)?);
        let w0 = d.element(d.longest_element()).word.clone();
        let w0 = &w0[..w0.len().min(SUITE_SPLIT_LENGTH)];
        out.extend(soergel_split(
            &RunConfig {
                wall: crate::config::WallSelector::All,
                point: None,
                ..cfg.clone()
            },
            w0,
        )?);
    } else {
        for word in all_words(d.rank(), max_len) {
            out.extend(bs_char(cfg, &word)?);
        }
    }
    out.extend(pi1(cfg)?);
    Ok(out)
}
