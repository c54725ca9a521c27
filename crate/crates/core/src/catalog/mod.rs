//! The database of five-dimensional solvable families with their building
//! blocks, witnesses and expected verdicts.
//!
//! Each non-comment line is a record
//! `name | params | domain | constants | flags | witness | witness …`:
//!
//! * `params`: comma-separated parameter names, or `-`;
//! * `domain`: `;`-separated constraints such as `q != 0` or `eps in {-1,0,1}`;
//! * `constants`: the tuple `(de¹,…,deⁿ)`;
//! * `flags`: `;`-separated `key=value` pairs (`label`, `diatta`, `kind`,
//!   `contact`, `hypo`, `nilpotent`, `factors`);
//! * witnesses: `hypo <point> : <coframe>`, `point <point>`, `phi <2-form>`,
//!   `gamma <1-form>`, `vector <vector>`, `avoid <poly>`, `note <text>`.

pub mod notation;

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use thiserror::Error;

use crate::exterior::{Form, KForm, Vector};
use crate::liealg::{LieAlgebra, LieError, LieFamily};
use crate::poly::{Param, ParamPoint, Poly};
use crate::scalar::Scalar;
use crate::su2hypo::{self, Coframe};
use notation::{
    parse_constants, parse_constraint, parse_form, parse_one_forms, parse_point, parse_poly,
    ParseError,
};

pub use notation::print_constants;

/// The catalog shipped with the crate.
pub const SHIPPED: &str = include_str!("../../data/catalog.txt");

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("{record} (line {line}): {source}")]
    Parse {
        record: String,
        line: usize,
        #[source]
        source: ParseError,
    },
    #[error("{record} (line {line}): {source}")]
    Lie {
        record: String,
        line: usize,
        #[source]
        source: LieError,
    },
    #[error("{record}: {message}")]
    Record { record: String, message: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Parses structure constants into a family; the parameters are those that
/// occur in the constants together with `params`.
pub fn parse(name: &str, s: &str, params: &[Param]) -> Result<LieFamily, CatalogError> {
    let de = parse_constants::<Poly>(s).map_err(|source| CatalogError::Parse {
        record: name.to_string(),
        line: 0,
        source,
    })?;
    let mut all: Vec<Param> = params.to_vec();
    for f in &de {
        for (_, c) in f.terms() {
            all.extend(c.params());
        }
    }
    LieFamily::new(name, de, all, Vec::new()).map_err(|source| CatalogError::Lie {
        record: name.to_string(),
        line: 0,
        source,
    })
}

/// Parses and evaluates constants at a point, giving a concrete algebra.
pub fn parse_algebra(s: &str, pt: &ParamPoint) -> Result<LieAlgebra, CatalogError> {
    let fam = parse("input", s, &[])?;
    fam.evaluate(pt).map_err(|source| CatalogError::Lie {
        record: "input".into(),
        line: 0,
        source,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Indecomposable,
    Decomposable,
    /// Lower-dimensional factor used to build decomposable families.
    Block,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Flags {
    pub label: Option<String>,
    pub diatta: Option<String>,
    pub contact: bool,
    pub hypo: bool,
    pub nilpotent: bool,
    pub factors: Vec<String>,
}

/// A hypo witness coframe valid at `point`.
#[derive(Clone, Debug, PartialEq)]
pub struct HypoWitness {
    pub point: ParamPoint,
    pub coframe: Coframe,
}

#[derive(Clone, Debug)]
pub struct FamilyRecord {
    pub name: String,
    pub line: usize,
    pub kind: Kind,
    pub family: LieFamily,
    pub flags: Flags,
    pub witnesses: Vec<HypoWitness>,
    /// Distinguished parameter values expected to be NOT_HYPO.
    pub special_points: Vec<ParamPoint>,
    /// Suggested 2-forms for the vanishing obstruction; may involve parameters.
    pub phis: Vec<Form<Poly>>,
    pub gammas: Vec<KForm>,
    pub vectors: Vec<Vector<Scalar>>,
    /// Polynomials that generic samples keep away from zero.
    pub avoid: Vec<Poly>,
    pub notes: Vec<String>,
}

impl FamilyRecord {
    pub fn dim(&self) -> usize {
        self.family.dim()
    }

    pub fn is_five_dimensional(&self) -> bool {
        self.kind != Kind::Block
    }

    /// Distinguished points, each paired with whether the catalog expects HYPO.
    pub fn distinguished_points(&self) -> Vec<(ParamPoint, bool)> {
        let mut out: Vec<(ParamPoint, bool)> = Vec::new();
        for w in &self.witnesses {
            if !out.iter().any(|(p, _)| *p == w.point) {
                out.push((w.point.clone(), true));
            }
        }
        for p in &self.special_points {
            if !out.iter().any(|(q, _)| q == p) {
                out.push((p.clone(), false));
            }
        }
        if self.family.params().is_empty() && out.is_empty() {
            out.push((ParamPoint::new(), self.flags.hypo));
        }
        out
    }

    /// Generic samples: expected HYPO only for parameter-free hypo families.
    pub fn generic_points(
        &self,
        count: usize,
        seed: u64,
    ) -> Result<Vec<(ParamPoint, bool)>, LieError> {
        if self.family.params().is_empty() {
            return Ok(vec![(ParamPoint::new(), self.flags.hypo)]);
        }
        let base = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ name_hash(&self.name);
        (0..count as u64)
            .map(|k| {
                self.family
                    .sample_generic(&self.avoid, base.wrapping_add(k))
                    .map(|p| (p, false))
            })
            .collect()
    }

    /// Suggested 2-forms evaluated at a point; those that fail to evaluate
    /// are skipped.
    pub fn phis_at(&self, pt: &ParamPoint) -> Vec<KForm> {
        self.phis
            .iter()
            .filter_map(|f| notation::evaluate_form(f, pt).ok())
            .filter(|f| !f.is_zero())
            .collect()
    }
}

fn name_hash(name: &str) -> u64 {
    // FNV-1a, stable across platforms and releases.
    name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

fn parse_bool(v: &str, line: usize) -> Result<bool, CatalogError> {
    match v {
        "yes" => Ok(true),
        "no" => Ok(false),
        _ => Err(CatalogError::Format {
            line,
            message: format!("expected yes/no, found '{v}'"),
        }),
    }
}

fn parse_record(
    text: &str,
    line: usize,
    blocks: &BTreeMap<String, LieFamily>,
) -> Result<FamilyRecord, CatalogError> {
    let fields: Vec<&str> = text.split('|').map(str::trim).collect();
    if fields.len() < 5 {
        return Err(CatalogError::Format {
            line,
            message: format!(
                "expected at least 5 '|'-separated fields, found {}",
                fields.len()
            ),
        });
    }
    let name = fields[0].to_string();
    let perr = |source: ParseError| CatalogError::Parse {
        record: name.clone(),
        line,
        source,
    };
    let lerr = |source: LieError| CatalogError::Lie {
        record: name.clone(),
        line,
        source,
    };
    let rerr = |message: String| CatalogError::Record {
        record: name.clone(),
        message,
    };

    let mut params = Vec::new();
    if fields[1] != "-" {
        for p in fields[1].split(',') {
            params.push(
                Param::from_name(p.trim())
                    .ok_or_else(|| rerr(format!("unknown parameter '{}'", p.trim())))?,
            );
        }
    }
    let mut domain = Vec::new();
    if fields[2] != "-" {
        for c in fields[2].split(';') {
            domain.push(parse_constraint(c).map_err(perr)?);
        }
    }
    let de = parse_constants::<Poly>(fields[3]).map_err(perr)?;
    for f in &de {
        for (_, c) in f.terms() {
            if let Some(p) = c.params().into_iter().find(|p| !params.contains(p)) {
                return Err(rerr(format!("parameter {p} is not declared")));
            }
        }
    }
    let family = LieFamily::new(name.clone(), de, params, domain).map_err(lerr)?;
    let n = family.dim();

    let mut flags = Flags::default();
    let mut kind = None;
    for kv in fields[4]
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
    {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| rerr(format!("malformed flag '{kv}'")))?;
        let v = v.trim();
        match k.trim() {
            "label" => flags.label = Some(v.to_string()),
            "diatta" => flags.diatta = Some(v.to_string()),
            "contact" => flags.contact = parse_bool(v, line)?,
            "hypo" => flags.hypo = parse_bool(v, line)?,
            "nilpotent" => flags.nilpotent = parse_bool(v, line)?,
            "factors" => flags.factors = v.split('+').map(|s| s.trim().to_string()).collect(),
            "kind" => {
                kind = Some(match v {
                    "indecomposable" => Kind::Indecomposable,
                    "decomposable" => Kind::Decomposable,
                    "block" => Kind::Block,
                    _ => return Err(rerr(format!("unknown kind '{v}'"))),
                })
            }
            other => return Err(rerr(format!("unknown flag '{other}'"))),
        }
    }
    let kind = kind.ok_or_else(|| rerr("missing kind flag".into()))?;
    if kind == Kind::Decomposable {
        derive_from_factors(&name, &family, &flags.factors, blocks)?;
    }

    let mut rec = FamilyRecord {
        name: name.clone(),
        line,
        kind,
        family,
        flags,
        witnesses: Vec::new(),
        special_points: Vec::new(),
        phis: Vec::new(),
        gammas: Vec::new(),
        vectors: Vec::new(),
        avoid: Vec::new(),
        notes: Vec::new(),
    };
    for w in fields[5..].iter().filter(|s| !s.is_empty()) {
        let (tag, body) = w.split_once(' ').unwrap_or((w, ""));
        let body = body.trim();
        match tag {
            "hypo" => {
                let (pt, cf) = body
                    .split_once(':')
                    .ok_or_else(|| rerr(format!("hypo witness without coframe: '{body}'")))?;
                let point = parse_point(pt).map_err(perr)?;
                let forms = parse_one_forms::<Scalar>(cf, n).map_err(perr)?;
                let coframe =
                    Coframe::new(forms).map_err(|e| rerr(format!("coframe at {point}: {e}")))?;
                rec.witnesses.push(HypoWitness { point, coframe });
            }
            "point" => rec.special_points.push(parse_point(body).map_err(perr)?),
            "phi" => rec.phis.push(parse_form::<Poly>(body, n).map_err(perr)?),
            "gamma" => rec
                .gammas
                .push(parse_form::<Scalar>(body, n).map_err(perr)?),
            "vector" => {
                let f = parse_form::<Scalar>(body, n).map_err(perr)?;
                rec.vectors.push(Vector::new(f.to_dense()));
            }
            "avoid" => rec.avoid.push(parse_poly(body).map_err(perr)?),
            "note" => rec.notes.push(body.to_string()),
            _ => return Err(rerr(format!("unknown witness tag '{tag}'"))),
        }
    }
    Ok(rec)
}

fn derive_from_factors(
    name: &str,
    family: &LieFamily,
    factors: &[String],
    blocks: &BTreeMap<String, LieFamily>,
) -> Result<(), CatalogError> {
    let rerr = |message: String| CatalogError::Record {
        record: name.to_string(),
        message,
    };
    let mut it = factors.iter();
    let first = it
        .next()
        .ok_or_else(|| rerr("decomposable record without factors".into()))?;
    let lookup = |f: &String| {
        blocks
            .get(f)
            .ok_or_else(|| rerr(format!("unknown factor '{f}'")))
    };
    let mut sum = lookup(first)?.clone();
    for f in it {
        sum = sum
            .direct_sum(name, lookup(f)?)
            .map_err(|source| CatalogError::Lie {
                record: name.to_string(),
                line: 0,
                source,
            })?;
    }
    if sum.differentials() != family.differentials() {
        return Err(rerr(format!(
            "direct sum of {} is {}, not {}",
            factors.join(" + "),
            print_constants(sum.differentials()),
            print_constants(family.differentials())
        )));
    }
    Ok(())
}

/// Parses catalog text; blocks must precede the records that use them.
pub fn parse_catalog(text: &str) -> Result<Vec<FamilyRecord>, CatalogError> {
    let mut records = Vec::new();
    let mut blocks = BTreeMap::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let rec = parse_record(t, line, &blocks)?;
        if records.iter().any(|r: &FamilyRecord| r.name == rec.name) {
            return Err(CatalogError::Record {
                record: rec.name,
                message: "duplicate name".into(),
            });
        }
        if rec.kind == Kind::Block {
            blocks.insert(rec.name.clone(), rec.family.clone());
        }
        records.push(rec);
    }
    Ok(records)
}

pub fn load_catalog(path: &Path) -> Result<Vec<FamilyRecord>, CatalogError> {
    let text = std::fs::read_to_string(path).map_err(|source| CatalogError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_catalog(&text)
}

pub fn shipped_catalog() -> Vec<FamilyRecord> {
    parse_catalog(SHIPPED).expect("shipped catalog parses")
}

/// Bucket counts over the five-dimensional families.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Census {
    pub families: usize,
    pub indecomposable: usize,
    pub decomposable: usize,
    pub contact: usize,
    pub hypo: usize,
    pub nilpotent: usize,
    pub nilpotent_hypo: usize,
    /// (hypo, total) for contact indecomposable, non-contact indecomposable,
    /// contact decomposable, non-contact decomposable.
    pub buckets: [(usize, usize); 4],
}

impl Census {
    pub fn from_flags<'a>(
        rows: impl IntoIterator<Item = (&'a FamilyRecord, bool, bool)>,
    ) -> Census {
        let mut c = Census::default();
        for (rec, contact, hypo) in rows {
            if !rec.is_five_dimensional() {
                continue;
            }
            c.families += 1;
            let dec = rec.kind == Kind::Decomposable;
            if dec {
                c.decomposable += 1;
            } else {
                c.indecomposable += 1;
            }
            c.contact += contact as usize;
            c.hypo += hypo as usize;
            if rec.flags.nilpotent {
                c.nilpotent += 1;
                c.nilpotent_hypo += hypo as usize;
            }
            let b = 2 * dec as usize + (!contact) as usize;
            c.buckets[b].1 += 1;
            c.buckets[b].0 += hypo as usize;
        }
        c
    }
}

impl fmt::Display for Census {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = &self.buckets;
        writeln!(f, "{}/{} families hypo", self.hypo, self.families)?;
        writeln!(f, "                 contact   non-contact")?;
        writeln!(
            f,
            "indecomposable   {:>7}   {:>11}",
            format!("{}/{}", b[0].0, b[0].1),
            format!("{}/{}", b[1].0, b[1].1)
        )?;
        writeln!(
            f,
            "decomposable     {:>7}   {:>11}",
            format!("{}/{}", b[2].0, b[2].1),
            format!("{}/{}", b[3].0, b[3].1)
        )?;
        write!(
            f,
            "nilpotent: {}/{} hypo",
            self.nilpotent_hypo, self.nilpotent
        )
    }
}

#[derive(Clone, Debug, Default)]
pub struct LintReport {
    pub census: Census,
    pub blocks: usize,
    pub errors: Vec<String>,
}

impl LintReport {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }
}

/// Expected catalog totals.
pub const EXPECTED_CENSUS: Census = Census {
    families: 66,
    indecomposable: 39,
    decomposable: 27,
    contact: 35,
    hypo: 21,
    nilpotent: 9,
    nilpotent_hypo: 6,
    buckets: [(7, 24), (9, 15), (1, 11), (4, 16)],
};

/// D_k is A_{5,k+3} for k ≤ 3 and A_{5,k+15} otherwise.
pub fn diatta_label(k: usize) -> String {
    let j = if k <= 3 { k + 3 } else { k + 15 };
    format!("A_{{5,{j}}}")
}

/// Cross-checks records against each other and against the expected totals.
pub fn lint_catalog(records: &[FamilyRecord]) -> LintReport {
    let mut errors = Vec::new();
    let mut blocks = 0;
    for rec in records {
        let n = &rec.name;
        if rec.kind == Kind::Block {
            blocks += 1;
            continue;
        }
        if rec.dim() != 5 {
            errors.push(format!("{n}: dimension {} instead of 5", rec.dim()));
        }
        if let Some(d) = &rec.flags.diatta {
            let k: Option<usize> = d.strip_prefix("D_").and_then(|s| s.parse().ok());
            match k {
                Some(k) if (1..=24).contains(&k) => {
                    if rec.flags.label.as_deref() != Some(diatta_label(k).as_str()) {
                        errors.push(format!("{n}: {d} should carry label {}", diatta_label(k)));
                    }
                    if !rec.flags.contact {
                        errors.push(format!("{n}: Diatta algebras are contact"));
                    }
                }
                _ => errors.push(format!("{n}: malformed Diatta name '{d}'")),
            }
        }
        if rec.flags.hypo && rec.witnesses.is_empty() {
            errors.push(format!("{n}: flagged hypo without a witness coframe"));
        }
        if !rec.flags.hypo && !rec.witnesses.is_empty() {
            errors.push(format!("{n}: witness coframe on a family flagged not hypo"));
        }
        for w in &rec.witnesses {
            match rec.family.evaluate(&w.point) {
                Ok(g) => {
                    if !su2hypo::coframe_is_hypo(&g, &w.coframe) {
                        errors.push(format!("{n}: coframe at {} is not hypo", w.point));
                    }
                }
                Err(e) => errors.push(format!("{n}: witness point {}: {e}", w.point)),
            }
        }
        for p in &rec.special_points {
            if let Err(e) = rec.family.evaluate(p) {
                errors.push(format!("{n}: point {p}: {e}"));
            }
        }
        if rec.flags.nilpotent {
            match rec
                .family
                .sample_generic(&rec.avoid, 0)
                .and_then(|p| rec.family.evaluate(&p))
            {
                Ok(g) if g.is_nilpotent() => {}
                Ok(_) => errors.push(format!("{n}: flagged nilpotent but is not")),
                Err(e) => errors.push(format!("{n}: {e}")),
            }
        }
    }
    let census = Census::from_flags(records.iter().map(|r| (r, r.flags.contact, r.flags.hypo)));
    if census != EXPECTED_CENSUS {
        errors.push(format!(
            "census mismatch:\n{census}\nexpected:\n{EXPECTED_CENSUS}"
        ));
    }
    for k in 1..=24 {
        let d = format!("D_{k}");
        let hits = records
            .iter()
            .filter(|r| r.flags.diatta.as_deref() == Some(d.as_str()))
            .count();
        if hits != 1 {
            errors.push(format!("{d} appears {hits} times"));
        }
    }
    LintReport {
        census,
        blocks,
        errors,
    }
}
