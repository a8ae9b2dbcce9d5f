//! Credal sets: closed convex sets of PMFs given by finitely many points.
//!
//! Every operator here works point-wise on the generators of its input and
//! returns the reduced set, i.e. only the extreme points of the convex hull
//! of the results. That is exact because each operator is linear (imaging)
//! or multilinear (Jeffrey and Adams imaging, jointly in the belief and the
//! evidence) in its arguments.

mod intervals;
mod statement;

pub use intervals::{CredalEvidence, IntervalSpec, MAX_FREE_COORDINATES};
pub use statement::{
    conditional_statements, credal_statements, marginal_statements, Relation, Statement,
};

pub(crate) use intervals::interval_vertices;

use std::ops::Not;
use std::sync::Arc;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lp;
use crate::model::{Formula, Space};
use crate::rational::to_f64;
use crate::sharp::{self, ConditionalEvidence, MarginalEvidence, Pmf};
use crate::{Error, Rational, Result};

/// How the belief and the per-value images range in credal Adams' imaging.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AdamsRanging {
    /// The belief outside `Y = y` and each image on `X = x` come from
    /// independently chosen points of the set.
    #[default]
    Independent,
    /// All parts come from the same point of the set.
    Coupled,
}

/// Acceptance of a set of statements by a credal set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Acceptance {
    /// Every member satisfies the statements.
    Accepted,
    /// No member satisfies them.
    Rejected,
    /// Some members do, some do not.
    Neutral,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CredalSet {
    space: Arc<Space>,
    points: Vec<Pmf>,
    reduced: bool,
}

impl CredalSet {
    /// The convex hull of `points`, keeping only its extreme points.
    pub fn reduce(points: Vec<Pmf>) -> Result<CredalSet> {
        let space = common_space(&points)?;
        let raw = points.into_iter().map(|p| p.weights().to_vec()).collect();
        let points = extreme_points(raw)
            .into_iter()
            .map(|w| Pmf::from_normalized(space.clone(), w))
            .collect();
        Ok(CredalSet {
            space,
            points,
            reduced: true,
        })
    }

    /// The convex hull of `points`, keeping the points as given.
    pub fn from_generators(points: Vec<Pmf>) -> Result<CredalSet> {
        let space = common_space(&points)?;
        Ok(CredalSet {
            space,
            points,
            reduced: false,
        })
    }

    pub fn singleton(p: Pmf) -> CredalSet {
        CredalSet {
            space: p.space().clone(),
            points: vec![p],
            reduced: true,
        }
    }

    /// The polytope `{p : lower <= p <= upper, sum p = 1}` of an interval
    /// specification, by exact vertex enumeration.
    pub fn from_intervals(spec: &IntervalSpec) -> Result<CredalSet> {
        let space = spec.space().clone();
        // Every enumerated point is a vertex, so no further reduction.
        let points = interval_vertices(spec.bounds())?
            .into_iter()
            .map(|w| Pmf::from_normalized(space.clone(), w))
            .collect();
        Ok(CredalSet {
            space,
            points,
            reduced: true,
        })
    }

    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    /// Generating points; these are exactly the extreme points when the set
    /// is reduced.
    pub fn extremes(&self) -> &[Pmf] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn reduced(&self) -> CredalSet {
        if self.reduced {
            return self.clone();
        }
        CredalSet::reduce(self.points.clone()).expect("generators share a space")
    }

    /// Whether the set holds a single PMF.
    pub fn is_sharp(&self) -> bool {
        self.reduced().len() == 1
    }

    pub fn contains(&self, p: &Pmf) -> bool {
        if p.space() != &self.space {
            return false;
        }
        let gens: Vec<&[Rational]> = self.points.iter().map(|q| q.weights()).collect();
        lp::in_convex_hull(p.weights(), &gens)
    }

    /// Whether `other` is a subset of this set.
    pub fn includes(&self, other: &CredalSet) -> Result<bool> {
        if other.space != self.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(other.points.iter().all(|p| self.contains(p)))
    }
}

fn common_space(points: &[Pmf]) -> Result<Arc<Space>> {
    let first = points.first().ok_or_else(|| {
        Error::InvalidDistribution("a credal set needs at least one point".into())
    })?;
    if points.iter().any(|p| p.space() != first.space()) {
        return Err(Error::SpaceMismatch);
    }
    Ok(first.space().clone())
}

/// Extreme points of the convex hull of `points`, sorted.
///
/// A point that is the unique maximizer or minimizer of some linear
/// functional is extreme; a few coordinate and pseudo-random directions
/// settle most points that way, evaluated in floating point with a margin
/// far above the rounding error of vectors with entries in [0, 1]. The rest
/// are decided exactly by a convex-hull membership program against the
/// other points.
pub(crate) fn extreme_points(mut points: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    points.sort();
    points.dedup();
    let n = points.len();
    if n <= 2 {
        return points;
    }
    let dim = points[0].len();
    let approx: Vec<Vec<f64>> = points
        .iter()
        .map(|p| p.iter().map(to_f64).collect())
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(0x51_6d_70_6c_65);
    let mut directions: Vec<Vec<f64>> = (0..dim)
        .map(|d| (0..dim).map(|e| if e == d { 1.0 } else { 0.0 }).collect())
        .collect();
    for _ in 0..2 * dim {
        directions.push(
            (0..dim)
                .map(|_| f64::from(rng.random_range(-8i8..=8)))
                .collect(),
        );
    }

    let mut certain = vec![false; n];
    for dir in &directions {
        let values: Vec<f64> = approx
            .iter()
            .map(|p| p.iter().zip(dir).map(|(a, b)| a * b).sum())
            .collect();
        let scale: f64 = dir.iter().map(|d| d.abs()).sum::<f64>() + 1.0;
        let margin = 1e-9 * scale;
        for extreme in [true, false] {
            let mut best = 0;
            for i in 1..n {
                if (extreme && values[i] > values[best]) || (!extreme && values[i] < values[best]) {
                    best = i;
                }
            }
            let unique = (0..n).all(|i| i == best || (values[i] - values[best]).abs() > margin);
            if unique {
                certain[best] = true;
            }
        }
    }

    let mut alive = vec![true; n];
    for i in 0..n {
        if certain[i] {
            continue;
        }
        let others: Vec<&[Rational]> = (0..n)
            .filter(|&j| j != i && alive[j])
            .map(|j| points[j].as_slice())
            .collect();
        if lp::in_convex_hull(&points[i], &others) {
            alive[i] = false;
        }
    }
    points
        .into_iter()
        .zip(alive)
        .filter_map(|(p, a)| a.then_some(p))
        .collect()
}

pub fn reduce(points: Vec<Pmf>) -> Result<CredalSet> {
    CredalSet::reduce(points)
}

pub fn from_intervals(spec: &IntervalSpec) -> Result<CredalSet> {
    CredalSet::from_intervals(spec)
}

/// Minimum and maximum of `P(formula)` over the set. Probability is linear
/// in `P`, so the generators suffice.
pub fn envelope(k: &CredalSet, formula: &Formula) -> (Rational, Rational) {
    let mut values = k.points.iter().map(|p| p.prob(formula));
    let first = values.next().expect("credal sets are non-empty");
    values.fold((first.clone(), first), |(lo, hi), v| {
        (lo.min(v.clone()), hi.max(v))
    })
}

pub fn lower_envelope(k: &CredalSet, formula: &Formula) -> Rational {
    envelope(k, formula).0
}

pub fn upper_envelope(k: &CredalSet, formula: &Formula) -> Rational {
    envelope(k, formula).1
}

/// Minimum and maximum of `P(target | given)` over members with
/// `P(given) > 0`.
///
/// Generators with `P(given) = 0` are skipped: mixing them into a member
/// scales numerator and denominator alike, so the extremes are attained at
/// generators with positive `P(given)`.
pub fn conditional_envelopes(
    k: &CredalSet,
    target: &Formula,
    given: &Formula,
) -> Result<(Rational, Rational)> {
    let mut values = k.points.iter().filter_map(|p| p.conditional(target, given));
    let first = values
        .next()
        .ok_or_else(|| Error::ConditioningUndefined(given.display(&k.space).to_string()))?;
    Ok(values.fold((first.clone(), first), |(lo, hi), v| {
        (lo.min(v.clone()), hi.max(v))
    }))
}

/// Imaging applied to every member.
pub fn credal_image(k: &CredalSet, formula: &Formula) -> Result<CredalSet> {
    let images = k
        .points
        .iter()
        .map(|p| sharp::image(p, formula))
        .collect::<Result<Vec<_>>>()?;
    CredalSet::reduce(images)
}

/// Jeffrey's imaging of every member on sharp evidence. Accepts evidence on
/// values the set rules out.
pub fn credal_marginal_jeffrey_image(k: &CredalSet, ev: &MarginalEvidence) -> Result<CredalSet> {
    let images = k
        .points
        .iter()
        .map(|p| sharp::marginal_jeffrey_image(p, ev))
        .collect::<Result<Vec<_>>>()?;
    CredalSet::reduce(images)
}

/// Adams' imaging of a credal set on sharp conditional evidence
/// `P'(X | Y = y)`; requires the lower probability of `Y = y` to be positive.
///
/// With [`AdamsRanging::Coupled`] each member is imaged on its own. With
/// [`AdamsRanging::Independent`] the part outside `Y = y` comes from one
/// member `P` and, for each `x`, the conditional image given `y` comes from
/// any member, rescaled to `P(y)`:
/// `P(a, not y) + P(y) * sum_x P'(x | y) * Q_x(a | y)` with
/// `Q_x = image(P_x, X = x)`. When all members agree on `P(y)` this is the
/// plain cross product of the member and the per-value images.
pub fn credal_adams_image(
    k: &CredalSet,
    ev: &ConditionalEvidence,
    ranging: AdamsRanging,
) -> Result<CredalSet> {
    let space = k.space.clone();
    let (x, y, yv) = ev.locate(&space)?;
    let given = Formula::Atom {
        variable: y,
        value: yv,
    };
    if lower_envelope(k, &given).is_zero() {
        return Err(Error::Precondition(format!(
            "lower probability of `{}` is zero",
            given.display(&space)
        )));
    }
    if ranging == AdamsRanging::Coupled {
        let images = k
            .points
            .iter()
            .map(|p| sharp::adams_image(p, ev))
            .collect::<Result<Vec<_>>>()?;
        return CredalSet::reduce(images);
    }

    // Per value x with positive evidence: extreme conditional images given y.
    let mut blocks = Vec::new();
    for (value, c) in ev.probs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let atom = Formula::Atom { variable: x, value };
        let mut conds = Vec::with_capacity(k.len());
        for p in &k.points {
            let img = sharp::image(p, &atom)?;
            conds.push(scaled_slice(&img, &given, &(c / p.prob(&given))));
        }
        blocks.push(extreme_points(conds));
    }
    let bases = outside_bases(k, &given);
    CredalSet::reduce(cross_sums(&space, &bases, &blocks))
}

/// `scale * P(w)` on the worlds satisfying `event`, zero elsewhere.
fn scaled_slice(p: &Pmf, event: &Formula, scale: &Rational) -> Vec<Rational> {
    let space = p.space();
    p.weights()
        .iter()
        .enumerate()
        .map(|(w, pw)| {
            if event.holds_at(space, w) {
                pw * scale
            } else {
                Rational::zero()
            }
        })
        .collect()
}

/// For each generator, its mass outside `given` and the probability of `given`.
fn outside_bases(k: &CredalSet, given: &Formula) -> Vec<(Vec<Rational>, Rational)> {
    let outside = given.clone().not();
    k.points
        .iter()
        .map(|p| (scaled_slice(p, &outside, &Rational::one()), p.prob(given)))
        .collect()
}

/// Every `base + scale * (b_1 + ... + b_m)` with one `b_i` from each block.
/// The blocks must sum to a unit mass, so each result is a PMF.
fn cross_sums(
    space: &Arc<Space>,
    bases: &[(Vec<Rational>, Rational)],
    blocks: &[Vec<Vec<Rational>>],
) -> Vec<Pmf> {
    let choices: Vec<Vec<&Vec<Rational>>> = blocks
        .iter()
        .map(|b| b.iter())
        .multi_cartesian_product()
        .collect();
    let mut out = Vec::with_capacity(bases.len() * choices.len());
    for (base, scale) in bases {
        for choice in &choices {
            let mut weights = base.clone();
            for part in choice {
                for (acc, v) in weights.iter_mut().zip(part.iter()) {
                    if !v.is_zero() {
                        *acc += scale * v;
                    }
                }
            }
            out.push(Pmf::from_normalized(space.clone(), weights));
        }
    }
    out
}

/// Extreme points of `c * P(. | event)` over generators with `P(event) > 0`.
fn conditional_block(k: &CredalSet, event: &Formula, c: &Rational) -> Vec<Vec<Rational>> {
    let conds = k
        .points
        .iter()
        .filter_map(|p| {
            let mass = p.prob(event);
            (!mass.is_zero()).then(|| scaled_slice(p, event, &(c / mass)))
        })
        .collect();
    extreme_points(conds)
}

/// Conditioning of every member with positive probability for `event`.
pub fn credal_condition(k: &CredalSet, event: &Formula) -> Result<CredalSet> {
    event.check_space(&k.space)?;
    let block = conditional_block(k, event, &Rational::one());
    if block.is_empty() {
        return Err(Error::ConditioningUndefined(
            event.display(&k.space).to_string(),
        ));
    }
    Ok(CredalSet {
        space: k.space.clone(),
        points: block
            .into_iter()
            .map(|w| Pmf::from_normalized(k.space.clone(), w))
            .collect(),
        reduced: true,
    })
}

/// Jeffrey's rule on a credal set: `sum_x P'(x) * P_x(. | x)`, with each
/// conditional taken from any member giving `x` positive probability.
pub fn credal_jeffrey_revise(k: &CredalSet, ev: &MarginalEvidence) -> Result<CredalSet> {
    let x = k.space.locate(ev.variable())?;
    let mut blocks = Vec::new();
    for (value, c) in ev.probs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let atom = Formula::Atom { variable: x, value };
        let block = conditional_block(k, &atom, c);
        if block.is_empty() {
            return Err(Error::PartialityViolation {
                event: atom.display(&k.space).to_string(),
            });
        }
        blocks.push(block);
    }
    let base = vec![(
        vec![Rational::zero(); k.space.world_count()],
        Rational::one(),
    )];
    CredalSet::reduce(cross_sums(&k.space, &base, &blocks))
}

/// Adams' conditioning on a credal set:
/// `P(a, not y) + P(y) * sum_x P'(x | y) * P_x(a | x, y)`, with `P` any
/// member and each conditional taken from any member where `(x, y)` has
/// positive probability. Every member must give `Y = y` positive probability.
pub fn credal_adams_revise(k: &CredalSet, ev: &ConditionalEvidence) -> Result<CredalSet> {
    let (x, y, yv) = ev.locate(&k.space)?;
    let given = Formula::Atom {
        variable: y,
        value: yv,
    };
    if lower_envelope(k, &given).is_zero() {
        return Err(Error::ConditioningUndefined(
            given.display(&k.space).to_string(),
        ));
    }
    let mut blocks = Vec::new();
    for (value, c) in ev.probs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let event = Formula::Atom { variable: x, value }.and(given.clone());
        let block = conditional_block(k, &event, c);
        if block.is_empty() {
            return Err(Error::PartialityViolation {
                event: event.display(&k.space).to_string(),
            });
        }
        blocks.push(block);
    }
    let bases = outside_bases(k, &given);
    CredalSet::reduce(cross_sums(&k.space, &bases, &blocks))
}

/// Jeffrey's imaging of every member on every extreme point of interval
/// evidence. Both arguments enter bilinearly, so extreme points suffice.
pub fn credal_jeffrey_image(k: &CredalSet, ev: &CredalEvidence) -> Result<CredalSet> {
    let evidence = ev.extremes()?;
    let mut out = Vec::with_capacity(k.len() * evidence.len());
    for p in &k.points {
        for e in &evidence {
            out.push(sharp::marginal_jeffrey_image(p, e)?);
        }
    }
    CredalSet::reduce(out)
}

/// Equivalence: equal sets of extreme points.
pub fn cs_equivalent(a: &CredalSet, b: &CredalSet) -> Result<bool> {
    if a.space != b.space {
        return Err(Error::SpaceMismatch);
    }
    Ok(a.reduced().points == b.reduced().points)
}

/// Marginal credal set over the given variables (indices into the space).
pub fn marginal_cs(k: &CredalSet, variables: &[usize]) -> Result<CredalSet> {
    if variables.is_empty() {
        return Err(Error::InvalidVariable(
            "marginalization needs at least one variable".into(),
        ));
    }
    if variables.iter().any(|&v| v >= k.space.variables().len()) {
        return Err(Error::SpaceMismatch);
    }
    let marginals = k
        .points
        .iter()
        .map(|p| p.marginalize(variables))
        .collect::<Result<Vec<_>>>()?;
    CredalSet::reduce(marginals)
}

/// The set of conditionals `P(. | given)` of members with `P(given) > 0`,
/// on the full space.
pub fn conditional_cs(k: &CredalSet, given: &Formula) -> Result<CredalSet> {
    let conds: Vec<Pmf> = k
        .points
        .iter()
        .filter(|p| !p.prob(given).is_zero())
        .map(|p| sharp::condition(p, given))
        .collect::<Result<_>>()?;
    if conds.is_empty() {
        return Err(Error::ConditioningUndefined(
            given.display(&k.space).to_string(),
        ));
    }
    CredalSet::reduce(conds)
}

/// Linear system in the mixture weights of the generators (plus one slack
/// per inequality) whose non-negative solutions are the members satisfying
/// `statements`.
fn mixture_system(k: &CredalSet, statements: &[Statement]) -> (Vec<Vec<Rational>>, Vec<Rational>) {
    let gens = k.points.len();
    let slacks = statements
        .iter()
        .filter(|s| s.relation != Relation::Eq)
        .count();
    let width = gens + slacks;
    let one = Rational::from_integer(1.into());
    let mut a = Vec::with_capacity(statements.len() + 1);
    let mut b = Vec::with_capacity(statements.len() + 1);
    let mut slack = gens;
    for s in statements {
        let (coeffs, rhs) = s.linear(&k.space);
        let mut row = vec![Rational::zero(); width];
        for (j, p) in k.points.iter().enumerate() {
            row[j] = coeffs
                .iter()
                .zip(p.weights())
                .fold(Rational::zero(), |acc, (c, w)| acc + c * w);
        }
        match s.relation {
            Relation::Eq => {}
            Relation::Ge => {
                row[slack] = -one.clone();
                slack += 1;
            }
            Relation::Le => {
                row[slack] = one.clone();
                slack += 1;
            }
        }
        a.push(row);
        b.push(rhs);
    }
    let mut convex = vec![Rational::zero(); width];
    for v in convex.iter_mut().take(gens) {
        *v = one.clone();
    }
    a.push(convex);
    b.push(one);
    (a, b)
}

/// Accepted when every member satisfies `statements`, rejected when none
/// does, neutral otherwise.
pub fn satisfies_evidence(k: &CredalSet, statements: &[Statement]) -> Result<Acceptance> {
    for s in statements {
        s.target.check_space(&k.space)?;
        if let Some(g) = &s.given {
            g.check_space(&k.space)?;
        }
    }
    // The statements cut out a convex region, so checking generators decides
    // whether the whole hull lies inside it.
    if k.points
        .iter()
        .all(|p| statements.iter().all(|s| s.holds(&k.space, p.weights())))
    {
        return Ok(Acceptance::Accepted);
    }
    let (a, b) = mixture_system(k, statements);
    Ok(if lp::feasible(&a, &b).is_some() {
        Acceptance::Neutral
    } else {
        Acceptance::Rejected
    })
}

/// The members satisfying `statements`, or `None` when there are none.
pub fn restrict(k: &CredalSet, statements: &[Statement]) -> Result<Option<CredalSet>> {
    let (a, b) = mixture_system(k, statements);
    let gens = k.points.len();
    let solutions = lp::basic_feasible_solutions(&a, &b);
    if solutions.is_empty() {
        return Ok(None);
    }
    let points = solutions
        .into_iter()
        .map(|sol| {
            let mut weights = vec![Rational::zero(); k.space.world_count()];
            for (lambda, p) in sol[..gens].iter().zip(&k.points) {
                if lambda.is_positive() {
                    for (acc, w) in weights.iter_mut().zip(p.weights()) {
                        *acc += lambda * w;
                    }
                }
            }
            Pmf::from_normalized(k.space.clone(), weights)
        })
        .collect();
    CredalSet::reduce(points).map(Some)
}

#[cfg(test)]
mod tests;
