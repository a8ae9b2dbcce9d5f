//! Uniform dispatch of the belief-adjustment operators by name.

use std::fmt;
use std::str::FromStr;

use crate::credal::{self, AdamsRanging, CredalEvidence, CredalSet, Statement};
use crate::model::{Formula, Space};
use crate::sharp::{self, ConditionalEvidence, MarginalEvidence, Pmf};
use crate::{Error, Result};

/// Evidence of any supported kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evidence {
    Marginal(MarginalEvidence),
    Conditional(ConditionalEvidence),
    Credal(CredalEvidence),
}

impl Evidence {
    pub fn kind(&self) -> &'static str {
        match self {
            Evidence::Marginal(_) => "marginal",
            Evidence::Conditional(_) => "conditional",
            Evidence::Credal(_) => "credal-marginal",
        }
    }

    /// The evidence as linear statements over the worlds of `space`.
    pub fn statements(&self, space: &Space) -> Result<Vec<Statement>> {
        match self {
            Evidence::Marginal(ev) => credal::marginal_statements(space, ev),
            Evidence::Conditional(ev) => credal::conditional_statements(space, ev),
            Evidence::Credal(ev) => credal::credal_statements(space, ev),
        }
    }

    /// The evidence as sharp marginal evidence, when it is one.
    pub fn as_marginal(&self) -> Option<MarginalEvidence> {
        match self {
            Evidence::Marginal(ev) => Some(ev.clone()),
            Evidence::Credal(ev) => ev.as_sharp(),
            Evidence::Conditional(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Operator {
    Condition,
    Jeffrey,
    Adams,
    Image,
    JeffreyImage,
    AdamsImage,
    CredalJeffreyImage,
}

impl Operator {
    pub const ALL: [Operator; 7] = [
        Operator::Condition,
        Operator::Jeffrey,
        Operator::Adams,
        Operator::Image,
        Operator::JeffreyImage,
        Operator::AdamsImage,
        Operator::CredalJeffreyImage,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Operator::Condition => "condition",
            Operator::Jeffrey => "jeffrey",
            Operator::Adams => "adams",
            Operator::Image => "image",
            Operator::JeffreyImage => "jeffrey-image",
            Operator::AdamsImage => "adams-image",
            Operator::CredalJeffreyImage => "credal-jeffrey-image",
        }
    }

    /// Imaging operators accept evidence contradicting the belief.
    pub fn is_imaging(self) -> bool {
        matches!(
            self,
            Operator::Image
                | Operator::JeffreyImage
                | Operator::AdamsImage
                | Operator::CredalJeffreyImage
        )
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Operator {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Operator::ALL
            .into_iter()
            .find(|op| op.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Operator::ALL.iter().map(|op| op.name()).collect();
                format!(
                    "unknown operator `{s}` (expected one of: {})",
                    names.join(", ")
                )
            })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AdjustOptions {
    /// Credal Adams' imaging ranges the belief and the images jointly.
    pub coupled: bool,
}

impl AdjustOptions {
    pub fn ranging(self) -> AdamsRanging {
        if self.coupled {
            AdamsRanging::Coupled
        } else {
            AdamsRanging::Independent
        }
    }
}

fn mismatch(op: Operator, ev: &Evidence) -> Error {
    Error::OperatorMismatch {
        operator: op.name().to_string(),
        evidence: ev.kind().to_string(),
    }
}

/// The event `X = x` of degenerate evidence, as conditioning and imaging
/// take an event rather than a distribution.
fn degenerate_event(op: Operator, ev: &Evidence, k: &CredalSet) -> Result<Formula> {
    let marginal = ev.as_marginal().ok_or_else(|| mismatch(op, ev))?;
    let value = marginal.degenerate_value().ok_or_else(|| {
        Error::InvalidEvidence(format!(
            "`{op}` needs evidence that is certain of one value of `{}`",
            marginal.variable().name()
        ))
    })?;
    Ok(Formula::Atom {
        variable: k.space().locate(marginal.variable())?,
        value,
    })
}

/// Applies an operator to a credal set.
pub fn adjust(
    k: &CredalSet,
    ev: &Evidence,
    op: Operator,
    opts: AdjustOptions,
) -> Result<CredalSet> {
    match op {
        Operator::Condition => {
            let event = degenerate_event(op, ev, k)?;
            credal::credal_condition(k, &event)
        }
        Operator::Image => {
            let event = degenerate_event(op, ev, k)?;
            credal::credal_image(k, &event)
        }
        Operator::Jeffrey => {
            let m = ev.as_marginal().ok_or_else(|| mismatch(op, ev))?;
            credal::credal_jeffrey_revise(k, &m)
        }
        Operator::JeffreyImage => {
            let m = ev.as_marginal().ok_or_else(|| mismatch(op, ev))?;
            credal::credal_marginal_jeffrey_image(k, &m)
        }
        Operator::Adams => match ev {
            Evidence::Conditional(c) => credal::credal_adams_revise(k, c),
            _ => Err(mismatch(op, ev)),
        },
        Operator::AdamsImage => match ev {
            Evidence::Conditional(c) => credal::credal_adams_image(k, c, opts.ranging()),
            _ => Err(mismatch(op, ev)),
        },
        Operator::CredalJeffreyImage => match ev {
            Evidence::Credal(c) => credal::credal_jeffrey_image(k, c),
            Evidence::Marginal(m) => credal::credal_jeffrey_image(k, &CredalEvidence::sharp(m)),
            Evidence::Conditional(_) => Err(mismatch(op, ev)),
        },
    }
}

/// Applies an operator to a single PMF. Interval evidence is accepted only
/// when it pins down one distribution.
pub fn adjust_pmf(p: &Pmf, ev: &Evidence, op: Operator) -> Result<Pmf> {
    let k = CredalSet::singleton(p.clone());
    match op {
        Operator::Condition | Operator::Image => {
            let event = degenerate_event(op, ev, &k)?;
            if op == Operator::Condition {
                sharp::condition(p, &event)
            } else {
                sharp::image(p, &event)
            }
        }
        Operator::Jeffrey | Operator::JeffreyImage | Operator::CredalJeffreyImage => {
            let m = ev.as_marginal().ok_or_else(|| mismatch(op, ev))?;
            if op == Operator::Jeffrey {
                sharp::jeffrey_revise(p, &m)
            } else {
                sharp::marginal_jeffrey_image(p, &m)
            }
        }
        Operator::Adams | Operator::AdamsImage => match ev {
            Evidence::Conditional(c) if op == Operator::Adams => sharp::adams_revise(p, c),
            Evidence::Conditional(c) => sharp::adams_image(p, c),
            _ => Err(mismatch(op, ev)),
        },
    }
}
