//! Report rows, invariant tallies and their text / JSON-lines renderings.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::verdict::{CheckedSpace, Status, Verdict, Witness};

/// One verdict on one (ring, ideal, property, params) cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Record {
    pub ring: String,
    pub ideal: String,
    pub property: String,
    pub params: String,
    pub status: Status,
    pub witness: Option<Witness>,
    pub space: CheckedSpace,
    /// Wall time; left empty unless timing was requested, so that
    /// repeated runs produce identical output.
    pub millis: Option<u64>,
}

impl Record {
    pub fn from_verdict(
        ring: impl Into<String>,
        ideal: impl Into<String>,
        property: impl Into<String>,
        params: impl Into<String>,
        verdict: &Verdict,
    ) -> Self {
        Self {
            ring: ring.into(),
            ideal: ideal.into(),
            property: property.into(),
            params: params.into(),
            status: verdict.status.clone(),
            witness: verdict.witness.clone(),
            space: verdict.space.clone(),
            millis: None,
        }
    }
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} | {} | {} {} | {}",
            self.ring, self.ideal, self.property, self.params, self.status
        )?;
        if let Some(w) = &self.witness {
            write!(f, " | witness {w}")?;
        }
        write!(
            f,
            " | {} of {} {}",
            self.space.tested, self.space.enumerated, self.space.description
        )?;
        if let Some(ms) = self.millis {
            write!(f, " | {ms} ms")?;
        }
        Ok(())
    }
}

/// A broken implication, with enough context to re-run it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub invariant: String,
    pub ring: String,
    pub ideal: String,
    pub params: String,
    pub detail: String,
    pub witness: Option<Witness>,
}

/// Outcome counts for one invariant.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    /// Instances whose hypotheses held and whose conclusion was tested.
    pub checked: u64,
    /// Instances whose hypotheses did not hold (implication true vacuously).
    pub vacuous: u64,
    pub violations: u64,
    /// Instances not examined, by reason.
    pub skipped: BTreeMap<String, u64>,
}

impl Tally {
    fn merge(&mut self, other: &Tally) {
        self.checked += other.checked;
        self.vacuous += other.vacuous;
        self.violations += other.violations;
        for (k, v) in &other.skipped {
            *self.skipped.entry(k.clone()).or_default() += v;
        }
    }
}

/// A replayed concrete computation with its expected and observed values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoldenRow {
    pub name: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
    /// Set when the observed value disagrees with a printed claim and the
    /// disagreement has been confirmed independently.
    pub flag: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub title: String,
    pub records: Vec<Record>,
    pub tallies: BTreeMap<String, Tally>,
    pub violations: Vec<Violation>,
    pub golden: Vec<GoldenRow>,
    /// Free-form observations worth keeping (construction failures,
    /// comparisons that are recorded but not asserted).
    pub notes: Vec<String>,
    /// Counts that are recorded but not asserted, by description.
    pub observations: BTreeMap<String, u64>,
    /// Set when a budget cut the run short.
    pub incomplete: bool,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            ..Self::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.golden.iter().all(|g| g.pass)
    }

    pub fn violation_count(&self) -> u64 {
        self.violations.len() as u64
    }

    pub fn skipped_count(&self) -> u64 {
        self.tallies.values().flat_map(|t| t.skipped.values()).sum()
    }

    pub fn tally(&mut self, invariant: &str) -> &mut Tally {
        self.tallies.entry(invariant.to_string()).or_default()
    }

    pub fn check(&mut self, invariant: &str, ok: bool, violation: impl FnOnce() -> Violation) {
        self.tally(invariant).checked += 1;
        if !ok {
            self.tally(invariant).violations += 1;
            let mut v = violation();
            v.invariant = invariant.to_string();
            self.violations.push(v);
        }
    }

    pub fn vacuous(&mut self, invariant: &str) {
        self.tally(invariant).vacuous += 1;
    }

    pub fn skip(&mut self, invariant: &str, reason: impl Into<String>) {
        *self
            .tally(invariant)
            .skipped
            .entry(reason.into())
            .or_default() += 1;
    }

    pub fn observe(&mut self, what: impl Into<String>) {
        *self.observations.entry(what.into()).or_default() += 1;
    }

    /// Append `other`, keeping row order.
    pub fn absorb(&mut self, other: Report) {
        self.records.extend(other.records);
        for (k, t) in &other.tallies {
            self.tallies.entry(k.clone()).or_default().merge(t);
        }
        self.violations.extend(other.violations);
        self.golden.extend(other.golden);
        self.notes.extend(other.notes);
        for (k, v) in other.observations {
            *self.observations.entry(k).or_default() += v;
        }
        self.incomplete |= other.incomplete;
    }

    /// One JSON object per line: verdict records, then golden rows,
    /// invariant tallies, violations, notes and a closing summary. Every
    /// line carries a `kind` field.
    pub fn to_json_lines(&self) -> String {
        #[derive(Serialize)]
        struct Tagged<'a, T: Serialize> {
            kind: &'static str,
            #[serde(flatten)]
            row: &'a T,
        }
        #[derive(Serialize)]
        struct Named<'a> {
            invariant: &'a str,
            #[serde(flatten)]
            tally: &'a Tally,
        }
        #[derive(Serialize)]
        struct Note<'a> {
            note: &'a str,
        }
        #[derive(Serialize)]
        struct Observation<'a> {
            observation: &'a str,
            count: u64,
        }
        #[derive(Serialize)]
        struct Summary<'a> {
            title: &'a str,
            passed: bool,
            records: usize,
            violations: u64,
            skipped: u64,
            incomplete: bool,
        }
        fn line<T: Serialize>(out: &mut String, kind: &'static str, row: &T) {
            out.push_str(
                &serde_json::to_string(&Tagged { kind, row }).expect("report rows serialize"),
            );
            out.push('\n');
        }
        let mut out = String::new();
        for r in &self.records {
            line(&mut out, "verdict", r);
        }
        for g in &self.golden {
            line(&mut out, "golden", g);
        }
        for (name, t) in &self.tallies {
            line(
                &mut out,
                "invariant",
                &Named {
                    invariant: name,
                    tally: t,
                },
            );
        }
        for v in &self.violations {
            line(&mut out, "violation", v);
        }
        for (k, &count) in &self.observations {
            line(
                &mut out,
                "observation",
                &Observation {
                    observation: k,
                    count,
                },
            );
        }
        for n in &self.notes {
            line(&mut out, "note", &Note { note: n });
        }
        let summary = Summary {
            title: &self.title,
            passed: self.passed(),
            records: self.records.len(),
            violations: self.violation_count(),
            skipped: self.skipped_count(),
            incomplete: self.incomplete,
        };
        line(&mut out, "summary", &summary);
        out
    }

    /// Human-readable rendering. Verdict records are listed only when
    /// `verbose` is set.
    pub fn to_text(&self, verbose: bool) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "== {}", self.title);
        if verbose {
            for r in &self.records {
                let _ = writeln!(out, "{r}");
            }
        }
        for g in &self.golden {
            let mark = if g.pass { "ok  " } else { "FAIL" };
            let _ = write!(
                out,
                "{mark} {}: expected {}, observed {}",
                g.name, g.expected, g.observed
            );
            if let Some(f) = &g.flag {
                let _ = write!(out, " [flagged: {f}]");
            }
            out.push('\n');
        }
        if !self.tallies.is_empty() {
            let _ = writeln!(
                out,
                "{:<34} {:>9} {:>9} {:>9} {:>5}",
                "invariant", "checked", "vacuous", "skipped", "viol"
            );
            for (name, t) in &self.tallies {
                let skipped: u64 = t.skipped.values().sum();
                let _ = writeln!(
                    out,
                    "{:<34} {:>9} {:>9} {:>9} {:>5}",
                    name, t.checked, t.vacuous, skipped, t.violations
                );
                for (reason, k) in &t.skipped {
                    let _ = writeln!(out, "    skipped {k}: {reason}");
                }
            }
        }
        for v in &self.violations {
            let _ = write!(
                out,
                "VIOLATION {} on {} ideal {} {}: {}",
                v.invariant, v.ring, v.ideal, v.params, v.detail
            );
            if let Some(w) = &v.witness {
                let _ = write!(out, " (witness {w})");
            }
            out.push('\n');
        }
        for (k, count) in &self.observations {
            let _ = writeln!(out, "observed {count:>7}: {k}");
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        let _ = writeln!(
            out,
            "{}: {} records, {} violations, {} skipped{}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.records.len(),
            self.violation_count(),
            self.skipped_count(),
            if self.incomplete { ", incomplete" } else { "" }
        );
        out
    }
}
