//! Catalog-wide classification: verdicts per family and parameter point,
//! the recomputed census, and its text and machine renderings.

use std::fmt::Write as _;

use hypoforge::catalog::{Census, FamilyRecord};
use hypoforge::liealg::LieError;
use hypoforge::obstructions::{self, Hints, Style, Verdict};
use hypoforge::poly::ParamPoint;
use hypoforge::su2hypo::{self, Coframe};
use rayon::prelude::*;

#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub samples: usize,
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            samples: 3,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PointRow {
    pub point: ParamPoint,
    pub distinguished: bool,
    pub expected_hypo: bool,
    pub verdict: Verdict,
    /// Contact existence, computed at generic samples only.
    pub contact: Option<bool>,
    /// Set when a verified witness coexists with a complete obstruction.
    pub conflict: Option<String>,
}

#[derive(Clone, Debug)]
pub struct FamilyRow<'a> {
    pub record: &'a FamilyRecord,
    pub points: Vec<PointRow>,
}

impl FamilyRow<'_> {
    pub fn hypo(&self) -> bool {
        self.points
            .iter()
            .any(|p| matches!(p.verdict, Verdict::Hypo(_)))
    }

    /// Generically contact: contact at every generic sample.
    pub fn contact(&self) -> bool {
        let mut generic = self.points.iter().filter_map(|p| p.contact).peekable();
        generic.peek().is_some() && generic.all(|c| c)
    }

    /// Verdicts that disagree with the catalog's hypo flags, one message each.
    pub fn contradictions(&self) -> Vec<String> {
        let name = &self.record.name;
        let mut out = Vec::new();
        for p in &self.points {
            let got = p.verdict.label();
            let want = if p.expected_hypo { "HYPO" } else { "NOT_HYPO" };
            if got != want {
                out.push(format!("{name} at {}: expected {want}, got {got}", p.point));
            }
            if let Some(c) = &p.conflict {
                out.push(format!("{name} at {}: {c}", p.point));
            }
        }
        if self.hypo() != self.record.flags.hypo {
            out.push(format!(
                "{name}: hypo flag {} but verdicts say {}",
                self.record.flags.hypo,
                self.hypo()
            ));
        }
        out
    }

    pub fn contact_mismatch(&self) -> Option<String> {
        (self.contact() != self.record.flags.contact).then(|| {
            format!(
                "{}: contact flag {} but generic samples say {}",
                self.record.name,
                self.record.flags.contact,
                self.contact()
            )
        })
    }
}

#[derive(Clone, Debug)]
pub struct Report<'a> {
    /// Sorted by family name.
    pub families: Vec<FamilyRow<'a>>,
}

/// Hints for a record at a point: every stored witness coframe (checks are
/// exact, so a coframe recorded at one parameter value may be tried at any).
pub fn hints_for(record: &FamilyRecord, point: &ParamPoint) -> Hints {
    let mut coframes: Vec<Coframe> = Vec::new();
    let at_point = record.witnesses.iter().filter(|w| w.point == *point);
    let elsewhere = record.witnesses.iter().filter(|w| w.point != *point);
    for w in at_point.chain(elsewhere) {
        if !coframes.contains(&w.coframe) {
            coframes.push(w.coframe.clone());
        }
    }
    Hints {
        coframes,
        phis: record.phis_at(point),
        gammas: record.gammas.clone(),
        vectors: record.vectors.clone(),
    }
}

fn classify_point(
    record: &FamilyRecord,
    point: ParamPoint,
    distinguished: bool,
    expected_hypo: bool,
) -> Result<PointRow, LieError> {
    let g = record.family.evaluate(&point)?;
    let hints = hints_for(record, &point);
    let verdict = obstructions::verdict(&g, &hints);
    let conflict = match &verdict {
        Verdict::Hypo(_) => obstructions::obstruct(&g, &hints)
            .ok()
            .map(|t| format!("verified witness but complete obstruction: {}", t.summary())),
        Verdict::NotHypo(t) => obstructions::replay(&g, t)
            .err()
            .map(|e| format!("trace fails replay: {e}")),
        Verdict::Undecided(_) => None,
    };
    let contact = (!distinguished).then(|| su2hypo::contact_exists(&g).is_some());
    Ok(PointRow {
        point,
        distinguished,
        expected_hypo,
        verdict,
        contact,
        conflict,
    })
}

fn classify_family<'a>(record: &'a FamilyRecord, opts: Options) -> Result<FamilyRow<'a>, LieError> {
    let mut jobs: Vec<(ParamPoint, bool, bool)> = record
        .distinguished_points()
        .into_iter()
        .map(|(p, h)| (p, true, h))
        .collect();
    for (p, h) in record.generic_points(opts.samples, opts.seed)? {
        match jobs.iter_mut().find(|(q, _, _)| *q == p) {
            // A parameter-free family has a single point, both kinds at once.
            Some(job) => job.1 = false,
            None => jobs.push((p, false, h)),
        }
    }
    let points = jobs
        .into_par_iter()
        .map(|(p, d, h)| classify_point(record, p, d, h))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FamilyRow { record, points })
}

/// Runs the verdict pipeline on every five-dimensional record.
pub fn classify(records: &[FamilyRecord], opts: Options) -> Result<Report<'_>, LieError> {
    let mut families = records
        .par_iter()
        .filter(|r| r.is_five_dimensional())
        .map(|r| classify_family(r, opts))
        .collect::<Result<Vec<_>, _>>()?;
    families.sort_by(|a, b| a.record.name.cmp(&b.record.name));
    Ok(Report { families })
}

impl Report<'_> {
    /// Buckets follow the catalog's contact flags; hypo comes from verdicts.
    pub fn census(&self) -> Census {
        Census::from_flags(
            self.families
                .iter()
                .map(|f| (f.record, f.record.flags.contact, f.hypo())),
        )
    }

    /// Families contact at every generic sample.
    pub fn computed_contact(&self) -> usize {
        self.families.iter().filter(|f| f.contact()).count()
    }

    pub fn contradictions(&self) -> Vec<String> {
        self.families
            .iter()
            .flat_map(FamilyRow::contradictions)
            .collect()
    }

    pub fn contact_mismatches(&self) -> Vec<String> {
        self.families
            .iter()
            .filter_map(FamilyRow::contact_mismatch)
            .collect()
    }

    pub fn undecided(&self) -> usize {
        self.families
            .iter()
            .flat_map(|f| &f.points)
            .filter(|p| matches!(p.verdict, Verdict::Undecided(_)))
            .count()
    }

    /// One line per point: `family<TAB>params<TAB>verdict<TAB>trace`.
    pub fn render_machine(&self) -> String {
        let mut out = String::new();
        for f in &self.families {
            for p in &f.points {
                let _ = writeln!(
                    out,
                    "{}\t{}\t{}\t{}",
                    f.record.name,
                    p.point,
                    p.verdict.label(),
                    p.verdict.render(Style::Machine)
                );
            }
        }
        out
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for f in &self.families {
            let label = f
                .record
                .flags
                .label
                .as_deref()
                .map(|l| format!(" ({l})"))
                .unwrap_or_default();
            let _ = writeln!(
                out,
                "{}{label}: {}{}",
                f.record.name,
                if f.hypo() { "hypo" } else { "not hypo" },
                if f.contact() { ", contact" } else { "" }
            );
            for p in &f.points {
                let kind = if p.distinguished {
                    "special"
                } else {
                    "generic"
                };
                let _ = writeln!(out, "  [{kind}] {}  {}", p.point, p.verdict);
            }
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "{}", self.census());
        let _ = writeln!(
            out,
            "contact at generic samples: {}/{}",
            self.computed_contact(),
            self.families.len()
        );
        for m in self.contact_mismatches() {
            let _ = writeln!(out, "  {m}");
        }
        out
    }
}

/// The catalog family whose evaluation at `point` is exactly `g`.
pub fn matching_record<'a>(
    records: &'a [FamilyRecord],
    g: &hypoforge::liealg::LieAlgebra,
    point: &ParamPoint,
) -> Option<&'a FamilyRecord> {
    records
        .iter()
        .filter(|r| r.is_five_dimensional())
        .find(|r| r.family.evaluate(point).is_ok_and(|h| h == *g))
}
