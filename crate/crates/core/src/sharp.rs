//! Probability mass functions and the operators that adjust a single PMF.
//!
//! Revision operators (`condition`, `jeffrey_revise`, `adams_revise`) keep
//! zero-probability events at zero and therefore fail on evidence that puts
//! mass on them. Imaging operators (`image`, `jeffrey_image`,
//! `marginal_jeffrey_image`, `adams_image`) never fail on such evidence:
//! they move each world's mass to its closest world satisfying the evidence.

use std::fmt;
use std::ops::Not;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::model::{closest_map, Formula, Space, Variable, World};
use crate::rational::{format_exact, sum};
use crate::{Error, Rational, Result};

/// A probability mass function over the worlds of a space.
///
/// Weights are exact, non-negative and sum to exactly one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pmf {
    space: Arc<Space>,
    weights: Vec<Rational>,
}

impl Pmf {
    pub fn new(space: Arc<Space>, weights: Vec<Rational>) -> Result<Pmf> {
        if weights.len() != space.world_count() {
            return Err(Error::InvalidDistribution(format!(
                "expected {} weights, got {}",
                space.world_count(),
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().position(|w| w.is_negative()) {
            return Err(Error::InvalidDistribution(format!(
                "negative weight at {}",
                space.format_world_index(w)
            )));
        }
        let total = sum(&weights);
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!(
                "weights sum to {}",
                format_exact(&total)
            )));
        }
        Ok(Pmf { space, weights })
    }

    /// Weights from `(world, weight)` pairs; unlisted worlds get zero.
    pub fn from_worlds(
        space: Arc<Space>,
        entries: impl IntoIterator<Item = (World, Rational)>,
    ) -> Result<Pmf> {
        let mut weights = vec![Rational::zero(); space.world_count()];
        for (world, weight) in entries {
            let i = space.world_index(&world);
            weights[i] += weight;
        }
        Pmf::new(space, weights)
    }

    pub fn point_mass(space: Arc<Space>, world: &World) -> Pmf {
        let mut weights = vec![Rational::zero(); space.world_count()];
        weights[space.world_index(world)] = Rational::one();
        Pmf { space, weights }
    }

    pub fn uniform(space: Arc<Space>) -> Pmf {
        let n = space.world_count();
        let w = Rational::new(1.into(), (n as i64).into());
        Pmf {
            weights: vec![w; n],
            space,
        }
    }

    /// Builds a PMF from weights already known to be normalized.
    pub(crate) fn from_normalized(space: Arc<Space>, weights: Vec<Rational>) -> Pmf {
        debug_assert_eq!(weights.len(), space.world_count());
        debug_assert!(sum(&weights).is_one(), "weights must sum to one");
        Pmf { space, weights }
    }

    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn weight(&self, world: &World) -> &Rational {
        &self.weights[self.space.world_index(world)]
    }

    /// Probability of `formula`: the total weight of its extension.
    pub fn prob(&self, formula: &Formula) -> Rational {
        self.weights
            .iter()
            .enumerate()
            .filter(|(w, _)| formula.holds_at(&self.space, *w))
            .fold(Rational::zero(), |acc, (_, p)| acc + p)
    }

    /// `P(target | given)`, or `None` when `P(given) = 0`.
    pub fn conditional(&self, target: &Formula, given: &Formula) -> Option<Rational> {
        let denom = self.prob(given);
        if denom.is_zero() {
            return None;
        }
        Some(self.prob(&target.clone().and(given.clone())) / denom)
    }

    /// Marginal of one variable, in domain order.
    pub fn marginal(&self, variable: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.space.variable(variable).size()];
        for (w, p) in self.weights.iter().enumerate() {
            out[self.space.value_at(w, variable)] += p;
        }
        out
    }

    /// Marginal over a subset of variables, as a PMF on the subspace.
    pub fn marginalize(&self, variables: &[usize]) -> Result<Pmf> {
        let mut vars = variables.to_vec();
        vars.sort_unstable();
        vars.dedup();
        let sub = Arc::new(self.space.subspace(&vars)?);
        let mut weights = vec![Rational::zero(); sub.world_count()];
        for (w, p) in self.weights.iter().enumerate() {
            weights[self.space.project(w, &vars, &sub)] += p;
        }
        Ok(Pmf::from_normalized(sub, weights))
    }

    /// `lambda * self + (1 - lambda) * other`.
    pub fn mix(&self, other: &Pmf, lambda: &Rational) -> Result<Pmf> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        if lambda.is_negative() || *lambda > Rational::one() {
            return Err(Error::InvalidDistribution(
                "mixing weight outside [0, 1]".into(),
            ));
        }
        let rest = Rational::one() - lambda;
        let weights = self
            .weights
            .iter()
            .zip(&other.weights)
            .map(|(a, b)| lambda * a + &rest * b)
            .collect();
        Ok(Pmf::from_normalized(self.space.clone(), weights))
    }

    /// Worlds with positive weight, in canonical order.
    pub fn support(&self) -> Vec<World> {
        (0..self.weights.len())
            .filter(|&w| self.weights[w].is_positive())
            .map(|w| self.space.world(w))
            .collect()
    }
}

impl fmt::Display for Pmf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (w, p) in self.weights.iter().enumerate() {
            writeln!(
                f,
                "{} {}",
                self.space.format_world_index(w),
                format_exact(p)
            )?;
        }
        Ok(())
    }
}

fn check_probability_vector(what: &str, variable: &Variable, probs: &[Rational]) -> Result<()> {
    if probs.len() != variable.size() {
        return Err(Error::InvalidEvidence(format!(
            "{what} on `{}` needs {} entries, got {}",
            variable.name(),
            variable.size(),
            probs.len()
        )));
    }
    if probs
        .iter()
        .any(|p| p.is_negative() || *p > Rational::one())
    {
        return Err(Error::InvalidEvidence(format!(
            "{what} on `{}` has an entry outside [0, 1]",
            variable.name()
        )));
    }
    if !sum(probs).is_one() {
        return Err(Error::InvalidEvidence(format!(
            "{what} on `{}` does not sum to one",
            variable.name()
        )));
    }
    Ok(())
}

fn probs_from_pairs(variable: &Variable, pairs: &[(&str, Rational)]) -> Result<Vec<Rational>> {
    let mut probs = vec![Rational::zero(); variable.size()];
    for (value, p) in pairs {
        probs[variable.value_index(value)?] = p.clone();
    }
    Ok(probs)
}

/// Sharp evidence on one variable: the new marginal `P'(X)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MarginalEvidence {
    variable: Variable,
    probs: Vec<Rational>,
}

impl MarginalEvidence {
    pub fn new(variable: Variable, probs: Vec<Rational>) -> Result<Self> {
        check_probability_vector("marginal evidence", &variable, &probs)?;
        Ok(MarginalEvidence { variable, probs })
    }

    /// Evidence from `(value, probability)` pairs; unlisted values get zero.
    pub fn from_pairs(variable: Variable, pairs: &[(&str, Rational)]) -> Result<Self> {
        let probs = probs_from_pairs(&variable, pairs)?;
        Self::new(variable, probs)
    }

    /// Certainty that `variable` takes `value`.
    pub fn degenerate(variable: Variable, value: &str) -> Result<Self> {
        Self::from_pairs(variable, &[(value, Rational::one())])
    }

    pub fn variable(&self) -> &Variable {
        &self.variable
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    /// The value carrying all the mass, if any.
    pub fn degenerate_value(&self) -> Option<usize> {
        self.probs.iter().position(|p| p.is_one())
    }
}

/// Sharp conditional evidence `P'(X | Y = y)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConditionalEvidence {
    variable: Variable,
    given: Variable,
    given_value: usize,
    probs: Vec<Rational>,
}

impl ConditionalEvidence {
    pub fn new(
        variable: Variable,
        given: Variable,
        given_value: &str,
        probs: Vec<Rational>,
    ) -> Result<Self> {
        if variable.name() == given.name() {
            return Err(Error::InvalidEvidence(format!(
                "conditional evidence on `{}` cannot be given the same variable",
                variable.name()
            )));
        }
        let given_value = given.value_index(given_value)?;
        check_probability_vector("conditional evidence", &variable, &probs)?;
        Ok(ConditionalEvidence {
            variable,
            given,
            given_value,
            probs,
        })
    }

    pub fn from_pairs(
        variable: Variable,
        given: Variable,
        given_value: &str,
        pairs: &[(&str, Rational)],
    ) -> Result<Self> {
        let probs = probs_from_pairs(&variable, pairs)?;
        Self::new(variable, given, given_value, probs)
    }

    pub fn variable(&self) -> &Variable {
        &self.variable
    }

    pub fn given(&self) -> &Variable {
        &self.given
    }

    pub fn given_value(&self) -> usize {
        self.given_value
    }

    pub fn given_value_name(&self) -> &str {
        &self.given.domain()[self.given_value]
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    pub fn degenerate_value(&self) -> Option<usize> {
        self.probs.iter().position(|p| p.is_one())
    }

    /// The evidence viewed as unconditional evidence on its variable.
    pub fn as_marginal(&self) -> MarginalEvidence {
        MarginalEvidence {
            variable: self.variable.clone(),
            probs: self.probs.clone(),
        }
    }

    /// Resolves `(X, Y, y)` against a space.
    pub(crate) fn locate(&self, space: &Space) -> Result<(usize, usize, usize)> {
        Ok((
            space.locate(&self.variable)?,
            space.locate(&self.given)?,
            self.given_value,
        ))
    }
}

fn atom(variable: usize, value: usize) -> Formula {
    Formula::Atom { variable, value }
}

fn describe(space: &Space, formula: &Formula) -> String {
    formula.display(space).to_string()
}

/// Standard conditioning on an event of positive probability.
pub fn condition(p: &Pmf, event: &Formula) -> Result<Pmf> {
    event.check_space(&p.space)?;
    let mass = p.prob(event);
    if mass.is_zero() {
        return Err(Error::ConditioningUndefined(describe(&p.space, event)));
    }
    let weights = p
        .weights
        .iter()
        .enumerate()
        .map(|(w, pw)| {
            if event.holds_at(&p.space, w) {
                pw / &mass
            } else {
                Rational::zero()
            }
        })
        .collect();
    Ok(Pmf::from_normalized(p.space.clone(), weights))
}

/// Jeffrey's rule: rescales each `X = x` slice so the `X` marginal becomes
/// the evidence, keeping every conditional given `X = x`.
pub fn jeffrey_revise(p: &Pmf, ev: &MarginalEvidence) -> Result<Pmf> {
    let x = p.space.locate(&ev.variable)?;
    let marginal = p.marginal(x);
    for (value, (c, px)) in ev.probs.iter().zip(&marginal).enumerate() {
        if c.is_positive() && px.is_zero() {
            return Err(Error::PartialityViolation {
                event: describe(&p.space, &atom(x, value)),
            });
        }
    }
    let weights = p
        .weights
        .iter()
        .enumerate()
        .map(|(w, pw)| {
            let value = p.space.value_at(w, x);
            if marginal[value].is_zero() {
                Rational::zero()
            } else {
                pw * &ev.probs[value] / &marginal[value]
            }
        })
        .collect();
    Ok(Pmf::from_normalized(p.space.clone(), weights))
}

/// Adams' conditioning: imposes `P'(X | y)` while keeping `P(Y)`, every
/// conditional given `(x, y)` and everything outside `Y = y`.
pub fn adams_revise(p: &Pmf, ev: &ConditionalEvidence) -> Result<Pmf> {
    let (x, y, yv) = ev.locate(&p.space)?;
    let given = atom(y, yv);
    let py = p.prob(&given);
    if py.is_zero() {
        return Err(Error::ConditioningUndefined(describe(&p.space, &given)));
    }
    let mut joint_xy = vec![Rational::zero(); p.space.variable(x).size()];
    for (w, pw) in p.weights.iter().enumerate() {
        if p.space.value_at(w, y) == yv {
            joint_xy[p.space.value_at(w, x)] += pw;
        }
    }
    for (value, (c, pxy)) in ev.probs.iter().zip(&joint_xy).enumerate() {
        if c.is_positive() && pxy.is_zero() {
            let event = atom(x, value).and(given.clone());
            return Err(Error::PartialityViolation {
                event: describe(&p.space, &event),
            });
        }
    }
    let weights = p
        .weights
        .iter()
        .enumerate()
        .map(|(w, pw)| {
            if p.space.value_at(w, y) != yv {
                return pw.clone();
            }
            let value = p.space.value_at(w, x);
            if joint_xy[value].is_zero() {
                Rational::zero()
            } else {
                // P(w) * c_x / P(x | y), with P(x | y) = P(x, y) / P(y).
                pw * &ev.probs[value] * &py / &joint_xy[value]
            }
        })
        .collect();
    Ok(Pmf::from_normalized(p.space.clone(), weights))
}

/// Imaging: every world's mass moves to its closest world satisfying
/// `formula`.
pub fn image(p: &Pmf, formula: &Formula) -> Result<Pmf> {
    formula.check_space(&p.space)?;
    let map = closest_map(&p.space, formula)?;
    let mut weights = vec![Rational::zero(); p.weights.len()];
    for (w, pw) in p.weights.iter().enumerate() {
        weights[map[w]] += pw;
    }
    Ok(Pmf::from_normalized(p.space.clone(), weights))
}

fn scaled_sum(space: &Arc<Space>, terms: &[(Rational, Pmf)]) -> Pmf {
    let mut weights = vec![Rational::zero(); space.world_count()];
    for (c, q) in terms {
        for (acc, w) in weights.iter_mut().zip(&q.weights) {
            *acc += c * w;
        }
    }
    Pmf::from_normalized(space.clone(), weights)
}

/// Jeffrey's imaging on `{formula = c}`: the image on `formula` weighted by
/// `c` plus the image on its negation weighted by `1 - c`.
pub fn jeffrey_image(p: &Pmf, formula: &Formula, c: &Rational) -> Result<Pmf> {
    if c.is_negative() || *c > Rational::one() {
        return Err(Error::InvalidEvidence(format!(
            "probability {} outside [0, 1]",
            format_exact(c)
        )));
    }
    let mut terms = Vec::with_capacity(2);
    if c.is_positive() {
        terms.push((c.clone(), image(p, formula)?));
    }
    let rest = Rational::one() - c;
    if rest.is_positive() {
        terms.push((rest, image(p, &formula.clone().not())?));
    }
    Ok(scaled_sum(&p.space, &terms))
}

/// Jeffrey's imaging on a marginal: `sum_x P'(x) * image(P, X = x)`.
///
/// Defined for every evidence, including evidence on values `P` rules out.
pub fn marginal_jeffrey_image(p: &Pmf, ev: &MarginalEvidence) -> Result<Pmf> {
    let x = p.space.locate(&ev.variable)?;
    let terms = ev
        .probs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.is_positive())
        .map(|(value, c)| Ok((c.clone(), image(p, &atom(x, value))?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(scaled_sum(&p.space, &terms))
}

/// Adams' imaging of a single PMF:
/// `P(a, not y) + sum_x image(P, X = x)(a, y) * P'(x | y)`.
pub fn adams_image(p: &Pmf, ev: &ConditionalEvidence) -> Result<Pmf> {
    let (x, y, yv) = ev.locate(&p.space)?;
    let given = atom(y, yv);
    if p.prob(&given).is_zero() {
        return Err(Error::ConditioningUndefined(describe(&p.space, &given)));
    }
    let mut weights: Vec<Rational> = p
        .weights
        .iter()
        .enumerate()
        .map(|(w, pw)| {
            if p.space.value_at(w, y) == yv {
                Rational::zero()
            } else {
                pw.clone()
            }
        })
        .collect();
    for (value, c) in ev.probs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let img = image(p, &atom(x, value))?;
        for (w, iw) in img.weights.iter().enumerate() {
            if p.space.value_at(w, y) == yv {
                weights[w] += c * iw;
            }
        }
    }
    Ok(Pmf::from_normalized(p.space.clone(), weights))
}
