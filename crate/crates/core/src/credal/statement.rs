use num_traits::Zero;

use crate::model::{Formula, Space};
use crate::rational::format_exact;
use crate::sharp::{ConditionalEvidence, MarginalEvidence};
use crate::{CredalEvidence, Rational, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Ge,
    Le,
}

/// A probabilistic statement `P(target [| given]) (= | >= | <=) value`.
///
/// Conditional statements are read linearly, as
/// `P(target & given) - value * P(given)` compared with zero, so a
/// distribution that gives `given` probability zero satisfies them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Statement {
    pub target: Formula,
    pub given: Option<Formula>,
    pub relation: Relation,
    pub value: Rational,
}

impl Statement {
    pub fn new(target: Formula, relation: Relation, value: Rational) -> Self {
        Statement {
            target,
            given: None,
            relation,
            value,
        }
    }

    pub fn conditional(
        target: Formula,
        given: Formula,
        relation: Relation,
        value: Rational,
    ) -> Self {
        Statement {
            target,
            given: Some(given),
            relation,
            value,
        }
    }

    /// Coefficients over worlds and right-hand side of the linear form.
    pub(crate) fn linear(&self, space: &Space) -> (Vec<Rational>, Rational) {
        let one = Rational::from_integer(1.into());
        match &self.given {
            None => {
                let coeffs = (0..space.world_count())
                    .map(|w| {
                        if self.target.holds_at(space, w) {
                            one.clone()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect();
                (coeffs, self.value.clone())
            }
            Some(given) => {
                let coeffs = (0..space.world_count())
                    .map(|w| {
                        if !given.holds_at(space, w) {
                            Rational::zero()
                        } else if self.target.holds_at(space, w) {
                            &one - &self.value
                        } else {
                            -self.value.clone()
                        }
                    })
                    .collect();
                (coeffs, Rational::zero())
            }
        }
    }

    pub(crate) fn holds(&self, space: &Space, weights: &[Rational]) -> bool {
        let (coeffs, rhs) = self.linear(space);
        let lhs = coeffs
            .iter()
            .zip(weights)
            .fold(Rational::zero(), |acc, (c, w)| acc + c * w);
        match self.relation {
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Le => lhs <= rhs,
        }
    }

    pub fn display(&self, space: &Space) -> String {
        let op = match self.relation {
            Relation::Eq => "=",
            Relation::Ge => ">=",
            Relation::Le => "<=",
        };
        let target = self.target.display(space);
        match &self.given {
            Some(g) => format!(
                "P({target} given {}) {op} {}",
                g.display(space),
                format_exact(&self.value)
            ),
            None => format!("P({target}) {op} {}", format_exact(&self.value)),
        }
    }
}

pub fn marginal_statements(space: &Space, ev: &MarginalEvidence) -> Result<Vec<Statement>> {
    let x = space.locate(ev.variable())?;
    Ok(ev
        .probs()
        .iter()
        .enumerate()
        .map(|(value, c)| {
            Statement::new(
                Formula::Atom { variable: x, value },
                Relation::Eq,
                c.clone(),
            )
        })
        .collect())
}

pub fn conditional_statements(space: &Space, ev: &ConditionalEvidence) -> Result<Vec<Statement>> {
    let (x, y, yv) = ev.locate(space)?;
    let given = Formula::Atom {
        variable: y,
        value: yv,
    };
    Ok(ev
        .probs()
        .iter()
        .enumerate()
        .map(|(value, c)| {
            Statement::conditional(
                Formula::Atom { variable: x, value },
                given.clone(),
                Relation::Eq,
                c.clone(),
            )
        })
        .collect())
}

/// Lower and upper bound statements; bounds at 0 and 1 are implied and
/// left out.
pub fn credal_statements(space: &Space, ev: &CredalEvidence) -> Result<Vec<Statement>> {
    let x = space.locate(ev.variable())?;
    let mut out = Vec::new();
    for (value, (lo, hi)) in ev.bounds().iter().enumerate() {
        let atom = Formula::Atom { variable: x, value };
        if lo == hi {
            out.push(Statement::new(atom, Relation::Eq, lo.clone()));
            continue;
        }
        if !lo.is_zero() {
            out.push(Statement::new(atom.clone(), Relation::Ge, lo.clone()));
        }
        if *hi != Rational::from_integer(1.into()) {
            out.push(Statement::new(atom, Relation::Le, hi.clone()));
        }
    }
    Ok(out)
}
