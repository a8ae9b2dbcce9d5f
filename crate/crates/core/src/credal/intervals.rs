use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::model::{Space, Variable, World};
use crate::rational::{format_exact, sum};
use crate::sharp::MarginalEvidence;
use crate::{Error, Rational, Result};

/// Largest number of coordinates with `lower < upper` accepted by vertex
/// enumeration.
pub const MAX_FREE_COORDINATES: usize = 16;

pub(crate) type Bounds = (Rational, Rational);

fn check_bounds(bounds: &[Bounds], label: impl Fn(usize) -> String) -> Result<()> {
    for (i, (lo, hi)) in bounds.iter().enumerate() {
        if lo.is_negative() || hi > &Rational::one() || lo > hi {
            return Err(Error::InfeasibleSpec(format!(
                "bounds [{}, {}] for {} are not an interval within [0, 1]",
                format_exact(lo),
                format_exact(hi),
                label(i)
            )));
        }
    }
    let lower = sum(bounds.iter().map(|b| &b.0));
    let upper = sum(bounds.iter().map(|b| &b.1));
    if lower > Rational::one() {
        return Err(Error::InfeasibleSpec(format!(
            "lower bounds sum to {}",
            format_exact(&lower)
        )));
    }
    if upper < Rational::one() {
        return Err(Error::InfeasibleSpec(format!(
            "upper bounds sum to {}",
            format_exact(&upper)
        )));
    }
    Ok(())
}

/// Vertices of `{p : lower <= p <= upper, sum p = 1}`.
///
/// At a vertex every coordinate but at most one sits at a bound, so the
/// enumeration picks the coordinate left free, puts every other one at its
/// lower or upper bound, and keeps the choices where the free coordinate
/// lands inside its own bounds. Coordinates with `lower == upper` never
/// branch.
pub(crate) fn interval_vertices(bounds: &[Bounds]) -> Result<Vec<Vec<Rational>>> {
    check_bounds(bounds, |i| format!("coordinate {i}"))?;
    let free: Vec<usize> = (0..bounds.len())
        .filter(|&i| bounds[i].0 < bounds[i].1)
        .collect();
    if free.len() > MAX_FREE_COORDINATES {
        return Err(Error::TooLarge {
            free: free.len(),
            limit: MAX_FREE_COORDINATES,
        });
    }
    let base: Vec<Rational> = bounds.iter().map(|b| b.0.clone()).collect();
    if free.is_empty() {
        return Ok(vec![base]);
    }
    let fixed_mass = Rational::one() - sum(bounds.iter().filter(|b| b.0 == b.1).map(|b| &b.0));

    let mut out = Vec::new();
    for (slot, &k) in free.iter().enumerate() {
        let others: Vec<usize> = free
            .iter()
            .enumerate()
            .filter(|&(s, _)| s != slot)
            .map(|(_, &i)| i)
            .collect();
        // Suffix sums of lower/upper bounds for pruning.
        let mut min_rest = vec![Rational::zero(); others.len() + 1];
        let mut max_rest = vec![Rational::zero(); others.len() + 1];
        for j in (0..others.len()).rev() {
            min_rest[j] = &min_rest[j + 1] + &bounds[others[j]].0;
            max_rest[j] = &max_rest[j + 1] + &bounds[others[j]].1;
        }
        let mut point = base.clone();
        descend(
            bounds,
            &others,
            0,
            Rational::zero(),
            &fixed_mass,
            k,
            &min_rest,
            &max_rest,
            &mut point,
            &mut out,
        );
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn descend(
    bounds: &[Bounds],
    others: &[usize],
    depth: usize,
    used: Rational,
    fixed_mass: &Rational,
    free: usize,
    min_rest: &[Rational],
    max_rest: &[Rational],
    point: &mut Vec<Rational>,
    out: &mut Vec<Vec<Rational>>,
) {
    // The free coordinate receives fixed_mass - used - rest, which must land
    // in its bounds for some completion of the remaining choices.
    let (lo, hi) = &bounds[free];
    let remaining = fixed_mass - &used;
    if &remaining - &max_rest[depth] > *hi || &remaining - &min_rest[depth] < *lo {
        return;
    }
    if depth == others.len() {
        point[free] = remaining;
        out.push(point.clone());
        return;
    }
    let i = others[depth];
    for bound in [&bounds[i].0, &bounds[i].1] {
        point[i] = bound.clone();
        descend(
            bounds,
            others,
            depth + 1,
            &used + bound,
            fixed_mass,
            free,
            min_rest,
            max_rest,
            point,
            out,
        );
    }
    point[i] = bounds[i].0.clone();
}

/// The tightest bounds with the same feasible set:
/// `max(l_i, 1 - sum_{j != i} u_j)` and `min(u_i, 1 - sum_{j != i} l_j)`.
pub(crate) fn tighten(bounds: &[Bounds]) -> Vec<Bounds> {
    let lower = sum(bounds.iter().map(|b| &b.0));
    let upper = sum(bounds.iter().map(|b| &b.1));
    bounds
        .iter()
        .map(|(lo, hi)| {
            let reach_lo = Rational::one() - (&upper - hi);
            let reach_hi = Rational::one() - (&lower - lo);
            (lo.clone().max(reach_lo), hi.clone().min(reach_hi))
        })
        .collect()
}

/// Per-world probability intervals on a joint space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalSpec {
    space: Arc<Space>,
    bounds: Vec<Bounds>,
}

impl IntervalSpec {
    pub fn new(space: Arc<Space>, bounds: Vec<Bounds>) -> Result<Self> {
        if bounds.len() != space.world_count() {
            return Err(Error::InfeasibleSpec(format!(
                "expected {} intervals, got {}",
                space.world_count(),
                bounds.len()
            )));
        }
        check_bounds(&bounds, |i| space.format_world_index(i))?;
        Ok(IntervalSpec { space, bounds })
    }

    /// Intervals from `(world, lower, upper)` entries; unlisted worlds are
    /// pinned to zero.
    pub fn from_worlds(
        space: Arc<Space>,
        entries: impl IntoIterator<Item = (World, Rational, Rational)>,
    ) -> Result<Self> {
        let mut bounds = vec![(Rational::zero(), Rational::zero()); space.world_count()];
        for (world, lo, hi) in entries {
            bounds[space.world_index(&world)] = (lo, hi);
        }
        Self::new(space, bounds)
    }

    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    pub fn bounds(&self) -> &[Bounds] {
        &self.bounds
    }

    /// Bounds actually attained by some distribution in the polytope.
    pub fn tightened(&self) -> IntervalSpec {
        IntervalSpec {
            space: self.space.clone(),
            bounds: tighten(&self.bounds),
        }
    }
}

/// Interval-valued evidence on one variable: the credal set of marginals
/// `{P'(X) : lower(x) <= P'(x) <= upper(x)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CredalEvidence {
    variable: Variable,
    bounds: Vec<Bounds>,
}

impl CredalEvidence {
    pub fn new(variable: Variable, bounds: Vec<Bounds>) -> Result<Self> {
        if bounds.len() != variable.size() {
            return Err(Error::InvalidEvidence(format!(
                "credal evidence on `{}` needs {} intervals, got {}",
                variable.name(),
                variable.size(),
                bounds.len()
            )));
        }
        check_bounds(&bounds, |i| {
            format!("{}={}", variable.name(), variable.domain()[i])
        })
        .map_err(|e| Error::InvalidEvidence(e.to_string()))?;
        Ok(CredalEvidence { variable, bounds })
    }

    pub fn from_pairs(variable: Variable, pairs: &[(&str, Rational, Rational)]) -> Result<Self> {
        let mut bounds = vec![(Rational::zero(), Rational::zero()); variable.size()];
        for (value, lo, hi) in pairs {
            bounds[variable.value_index(value)?] = (lo.clone(), hi.clone());
        }
        Self::new(variable, bounds)
    }

    /// Sharp evidence as degenerate intervals.
    pub fn sharp(ev: &MarginalEvidence) -> Self {
        CredalEvidence {
            variable: ev.variable().clone(),
            bounds: ev.probs().iter().map(|p| (p.clone(), p.clone())).collect(),
        }
    }

    pub fn variable(&self) -> &Variable {
        &self.variable
    }

    pub fn bounds(&self) -> &[Bounds] {
        &self.bounds
    }

    pub fn is_sharp(&self) -> bool {
        self.bounds.iter().all(|(lo, hi)| lo == hi)
    }

    /// The single evidence PMF when the intervals are degenerate.
    pub fn as_sharp(&self) -> Option<MarginalEvidence> {
        let tight = tighten(&self.bounds);
        if tight.iter().all(|(lo, hi)| lo == hi) {
            MarginalEvidence::new(
                self.variable.clone(),
                tight.into_iter().map(|b| b.0).collect(),
            )
            .ok()
        } else {
            None
        }
    }

    /// The value whose probability is forced to one, if any.
    pub fn degenerate_value(&self) -> Option<usize> {
        tighten(&self.bounds).iter().position(|(lo, _)| lo.is_one())
    }

    pub fn tightened(&self) -> CredalEvidence {
        CredalEvidence {
            variable: self.variable.clone(),
            bounds: tighten(&self.bounds),
        }
    }

    /// Extreme points of the evidence set, each as sharp evidence.
    pub fn extremes(&self) -> Result<Vec<MarginalEvidence>> {
        interval_vertices(&self.bounds)?
            .into_iter()
            .map(|p| MarginalEvidence::new(self.variable.clone(), p))
            .collect()
    }
}
