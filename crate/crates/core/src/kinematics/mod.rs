//! Checkers for the kinematics conditions and the KM postulates.
//!
//! Conditions quantified over every event are checked on a basis of events:
//! all conjunctions of atoms over the relevant variables. Sharp conditions
//! are linear in the event, so the basis settles them; credal inclusions
//! are checked on the same basis, which at desk scale reaches single worlds.

mod conditions;
mod postulates;

use std::fmt;

use crate::credal::CredalSet;
use crate::model::{partial_assignments, Formula, Space};
use crate::rational::format_exact;
use crate::sharp::Pmf;
use crate::Rational;

pub use conditions::{check_cpk, check_ick, check_ik, check_pk};
pub use postulates::check_km;

/// Concrete evidence that a condition fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    /// The quantity compared, e.g. `P(Z=z | X=x_B)`.
    pub subject: String,
    pub expected: String,
    pub found: String,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: expected {}, found {}",
            self.subject, self.expected, self.found
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails(Witness),
    NotApplicable(String),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn fails(&self) -> bool {
        matches!(self, Verdict::Fails(_))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds => f.write_str("holds"),
            Verdict::Fails(w) => write!(f, "FAILS ({w})"),
            Verdict::NotApplicable(why) => write!(f, "not applicable ({why})"),
        }
    }
}

/// Verdicts for a family of conditions, in a fixed order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    family: String,
    conditions: Vec<(String, Verdict)>,
    notes: Vec<String>,
}

pub type KinematicsReport = Report;
pub type PostulateReport = Report;

impl Report {
    pub(crate) fn new(family: &str) -> Self {
        Report {
            family: family.to_string(),
            conditions: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub(crate) fn push(&mut self, id: &str, verdict: Verdict) {
        self.conditions.push((id.to_string(), verdict));
    }

    pub(crate) fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn family(&self) -> &str {
        &self.family
    }

    pub fn conditions(&self) -> &[(String, Verdict)] {
        &self.conditions
    }

    pub fn verdict(&self, id: &str) -> Option<&Verdict> {
        self.conditions
            .iter()
            .find(|(c, _)| c == id)
            .map(|(_, v)| v)
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    /// No condition fails; inapplicable conditions do not count against.
    pub fn all_hold(&self) -> bool {
        !self.conditions.iter().any(|(_, v)| v.fails())
    }

    pub fn failures(&self) -> impl Iterator<Item = (&str, &Witness)> {
        self.conditions.iter().filter_map(|(id, v)| match v {
            Verdict::Fails(w) => Some((id.as_str(), w)),
            _ => None,
        })
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (id, verdict) in &self.conditions {
            writeln!(f, "{id}: {verdict}")?;
        }
        for note in &self.notes {
            writeln!(f, "note: {note}")?;
        }
        Ok(())
    }
}

/// Basis events over every variable not in `exclude`; `Top` when none remain.
pub(crate) fn basis(space: &Space, exclude: &[usize]) -> Vec<Formula> {
    let vars: Vec<usize> = (0..space.variables().len())
        .filter(|v| !exclude.contains(v))
        .collect();
    if vars.is_empty() {
        return vec![Formula::Top];
    }
    partial_assignments(space, &vars)
}

pub(crate) fn subject(space: &Space, target: &Formula, given: Option<&Formula>) -> String {
    match given {
        Some(g) => format!("P({} | {})", target.display(space), g.display(space)),
        None => format!("P({})", target.display(space)),
    }
}

pub(crate) fn interval(bounds: &(Rational, Rational)) -> String {
    format!("[{}, {}]", format_exact(&bounds.0), format_exact(&bounds.1))
}

/// A PMF on one line, listing its support.
pub(crate) fn compact(p: &Pmf) -> String {
    let space = p.space();
    let parts: Vec<String> = p
        .weights()
        .iter()
        .enumerate()
        .filter(|(_, w)| !num_traits::Zero::is_zero(*w))
        .map(|(i, w)| format!("{} {}", space.format_world_index(i), format_exact(w)))
        .collect();
    format!("{{{}}}", parts.join(", "))
}

/// Witness for two credal sets that are not equivalent: an extreme point of
/// one outside the other.
pub(crate) fn difference(what: &str, found: &CredalSet, expected: &CredalSet) -> Witness {
    if let Some(p) = found
        .reduced()
        .extremes()
        .iter()
        .find(|p| !expected.contains(p))
    {
        return Witness {
            subject: format!("{what}: extreme point {}", compact(p)),
            expected: "a member of the reference set".into(),
            found: "a point outside it".into(),
        };
    }
    let p = expected
        .reduced()
        .extremes()
        .iter()
        .find(|p| !found.contains(p))
        .cloned()
        .expect("non-equivalent sets differ in some extreme point");
    Witness {
        subject: format!("{what}: reference extreme point {}", compact(&p)),
        expected: "a member of the adjusted set".into(),
        found: "a point outside it".into(),
    }
}
