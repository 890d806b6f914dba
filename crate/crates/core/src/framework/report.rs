//! Verification reports: per-check verdicts with counterexample witnesses.

use std::cmp::Ordering;
use std::fmt::{self, Write as _};
use std::io::Write;

use crate::error::Result;
use crate::metric::Point;

/// The inequality a witness was tested against, read as `lhs REL rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
}

impl Relation {
    /// Signed slack of `lhs REL rhs`; negative or (for strict relations)
    /// near-zero slack means the inequality is violated.
    pub fn slack(self, lhs: f64, rhs: f64) -> f64 {
        match self {
            Relation::Lt | Relation::Le => rhs - lhs,
            Relation::Gt | Relation::Ge => lhs - rhs,
            Relation::Eq => -(lhs - rhs).abs(),
        }
    }

    /// Strict relations need slack above `eps`; the others tolerate `-eps`.
    pub fn holds_with(self, slack: f64, eps: f64) -> bool {
        match self {
            Relation::Lt | Relation::Gt => slack > eps,
            Relation::Le | Relation::Ge | Relation::Eq => slack >= -eps,
        }
    }

    pub fn holds(self, lhs: f64, rhs: f64, eps: f64) -> bool {
        self.holds_with(self.slack(lhs, rhs), eps)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Gt => ">",
            Relation::Ge => ">=",
            Relation::Eq => "==",
        }
    }
}

/// A sampled input at which a check failed.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub inputs: Vec<(String, Point)>,
    /// Human-readable form of the violated inequality.
    pub inequality: String,
    pub lhs: f64,
    pub relation: Relation,
    pub rhs: f64,
    /// `relation.slack(lhs, rhs)`.
    pub margin: f64,
}

impl Witness {
    pub fn new(
        inputs: Vec<(&str, Point)>,
        inequality: impl Into<String>,
        lhs: f64,
        relation: Relation,
        rhs: f64,
    ) -> Self {
        Self {
            inputs: inputs.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            inequality: inequality.into(),
            lhs,
            relation,
            rhs,
            margin: relation.slack(lhs, rhs),
        }
    }

    /// Scalar input by label.
    pub fn scalar(&self, label: &str) -> Option<f64> {
        self.inputs.iter().find_map(|(k, v)| match v {
            Point::Scalar(x) if k == label => Some(*x),
            _ => None,
        })
    }

    pub fn point(&self, label: &str) -> Option<&Point> {
        self.inputs.iter().find(|(k, _)| k == label).map(|(_, v)| v)
    }

    pub fn fields(&self) -> String {
        self.inputs
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";")
    }

    fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.margin
            .total_cmp(&other.margin)
            .then_with(|| cmp_inputs(&self.inputs, &other.inputs))
            .then_with(|| self.inequality.cmp(&other.inequality))
    }
}

fn cmp_point(a: &Point, b: &Point) -> Ordering {
    match (a, b) {
        (Point::Scalar(x), Point::Scalar(y)) => x.total_cmp(y),
        (Point::Scalar(_), Point::Grid(_)) => Ordering::Less,
        (Point::Grid(_), Point::Scalar(_)) => Ordering::Greater,
        (Point::Grid(x), Point::Grid(y)) => x
            .values()
            .iter()
            .zip(y.values())
            .map(|(p, q)| p.total_cmp(q))
            .find(|o| o.is_ne())
            .unwrap_or_else(|| x.len().cmp(&y.len())),
    }
}

fn cmp_inputs(a: &[(String, Point)], b: &[(String, Point)]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|((ka, pa), (kb, pb))| ka.cmp(kb).then_with(|| cmp_point(pa, pb)))
        .find(|o| o.is_ne())
        .unwrap_or_else(|| a.len().cmp(&b.len()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckKind {
    /// Decided on every supplied sample.
    Pointwise,
    /// A limit statement probed on finite sequences: can refute, never prove.
    Falsification,
}

/// Ordered by severity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    /// A recorded violation that does not count against the overall verdict.
    Caveat,
    /// The check's own precondition failed; nothing was concluded.
    HypothesisUnmet,
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Caveat => "caveat",
            Status::HypothesisUnmet => "hypothesis_unmet",
            Status::Fail => "fail",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub kind: CheckKind,
    pub status: Status,
    pub samples: usize,
    pub witnesses: Vec<Witness>,
    pub note: Option<String>,
}

impl CheckResult {
    /// Builds a result from a witness list: fails iff any witness exists.
    pub fn from_witnesses(
        name: impl Into<String>,
        kind: CheckKind,
        samples: usize,
        mut witnesses: Vec<Witness>,
    ) -> Self {
        witnesses.sort_by(Witness::canonical_cmp);
        Self {
            name: name.into(),
            kind,
            status: if witnesses.is_empty() {
                Status::Pass
            } else {
                Status::Fail
            },
            samples,
            witnesses,
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        matches!(self.status, Status::Pass | Status::Caveat)
    }

    /// Witness with the most negative margin.
    pub fn worst(&self) -> Option<&Witness> {
        self.witnesses.first()
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerificationReport {
    checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, check: CheckResult) {
        self.merge_check(check);
    }

    pub fn with(mut self, check: CheckResult) -> Self {
        self.push(check);
        self
    }

    pub fn checks(&self) -> &[CheckResult] {
        &self.checks
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn status(&self) -> Status {
        self.checks
            .iter()
            .map(|c| c.status)
            .max()
            .unwrap_or(Status::Pass)
    }

    pub fn witnesses(&self) -> impl Iterator<Item = (&str, &Witness)> {
        self.checks
            .iter()
            .flat_map(|c| c.witnesses.iter().map(move |w| (c.name.as_str(), w)))
    }

    pub fn sample_count(&self) -> usize {
        self.checks.iter().map(|c| c.samples).sum()
    }

    /// Combines two reports. Checks with the same name are merged (worst
    /// status, summed samples, witnesses re-sorted canonically), so merging
    /// reports of a partitioned sample gives the report of the whole sample.
    pub fn merge(mut self, other: VerificationReport) -> Self {
        for check in other.checks {
            self.merge_check(check);
        }
        self
    }

    /// Marks a failed check as a caveat, keeping its witnesses.
    pub fn downgrade_to_caveat(&mut self, name: &str, note: &str) {
        if let Some(c) = self.checks.iter_mut().find(|c| c.name == name) {
            if c.status == Status::Fail {
                c.status = Status::Caveat;
                c.note = Some(note.to_string());
            }
        }
    }

    /// Prefixes every check name, e.g. to namespace sub-reports.
    pub fn prefixed(mut self, prefix: &str) -> Self {
        for c in &mut self.checks {
            c.name = format!("{prefix}{}", c.name);
        }
        self
    }

    fn merge_check(&mut self, check: CheckResult) {
        match self.checks.iter_mut().find(|c| c.name == check.name) {
            Some(existing) => {
                existing.status = existing.status.max(check.status);
                existing.samples += check.samples;
                existing.witnesses.extend(check.witnesses);
                existing.witnesses.sort_by(Witness::canonical_cmp);
                if existing.note.is_none() {
                    existing.note = check.note;
                }
            }
            None => self.checks.push(check),
        }
    }

    /// Plain-text rendering; lists up to `max_witnesses` witnesses per check.
    pub fn to_text(&self, max_witnesses: usize) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let kind = match c.kind {
                CheckKind::Pointwise => "pointwise",
                CheckKind::Falsification => "falsification",
            };
            let _ = writeln!(
                out,
                "[{}] {} ({kind}, {} samples, {} witnesses)",
                c.status,
                c.name,
                c.samples,
                c.witnesses.len()
            );
            if let Some(note) = &c.note {
                let _ = writeln!(out, "    note: {note}");
            }
            for w in c.witnesses.iter().take(max_witnesses) {
                let _ = writeln!(
                    out,
                    "    witness {}: {} | {} {} {} | margin {}",
                    w.fields(),
                    w.inequality,
                    w.lhs,
                    w.relation.symbol(),
                    w.rhs,
                    w.margin
                );
            }
        }
        let _ = writeln!(
            out,
            "overall: {} ({} checks, {} samples)",
            if self.passed() { "pass" } else { "fail" },
            self.checks.len(),
            self.sample_count()
        );
        out
    }

    /// One row per check: `check_name,status,witness_fields,margin`, where the
    /// witness columns describe the worst witness (empty when there is none).
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["check_name", "status", "witness_fields", "margin"])?;
        for c in &self.checks {
            let (fields, margin) = c
                .worst()
                .map(|w| (w.fields(), w.margin.to_string()))
                .unwrap_or_default();
            out.write_record([c.name.as_str(), c.status.as_str(), &fields, &margin])?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}
