#![allow(dead_code)]

use std::ops::Not;
use std::path::PathBuf;
use std::sync::Arc;

use credal_imaging::credal::CredalEvidence;
use credal_imaging::rational::ratio;
use credal_imaging::{
    ConditionalEvidence, CredalSet, Formula, MarginalEvidence, Pmf, Rational, Space, Variable,
};
use num_traits::Zero;
use proptest::prelude::*;
use rand::seq::IndexedRandom;
use rand::Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("fixtures")
        .join(name)
}

pub fn q(text: &str) -> Rational {
    credal_imaging::rational::parse_rational(text).unwrap()
}

const NAMES: [&str; 3] = ["A", "B", "C"];

pub fn space_from_sizes(sizes: &[usize]) -> Arc<Space> {
    let vars = sizes
        .iter()
        .zip(NAMES)
        .map(|(&n, name)| {
            Variable::new(name, (0..n).map(|i| format!("{}{i}", name.to_lowercase()))).unwrap()
        })
        .collect();
    Arc::new(Space::new(vars).unwrap())
}

/// A space of 2 or 3 variables with 2 or 3 values each.
pub fn random_space(rng: &mut impl Rng) -> Arc<Space> {
    let n = rng.random_range(2..=3);
    let sizes: Vec<usize> = (0..n).map(|_| rng.random_range(2..=3)).collect();
    space_from_sizes(&sizes)
}

/// Normalized vector from small integer weights; `zeros` is the chance of
/// each entry being zero. At least one entry is positive.
pub fn random_simplex(rng: &mut impl Rng, n: usize, zeros: f64) -> Vec<Rational> {
    loop {
        let raw: Vec<i64> = (0..n)
            .map(|_| {
                if rng.random_bool(zeros) {
                    0
                } else {
                    rng.random_range(1..=9)
                }
            })
            .collect();
        let total: i64 = raw.iter().sum();
        if total > 0 {
            return raw.into_iter().map(|r| ratio(r, total)).collect();
        }
    }
}

pub fn random_pmf(rng: &mut impl Rng, space: &Arc<Space>, zeros: f64) -> Pmf {
    Pmf::new(
        space.clone(),
        random_simplex(rng, space.world_count(), zeros),
    )
    .unwrap()
}

pub fn random_credal(
    rng: &mut impl Rng,
    space: &Arc<Space>,
    max_points: usize,
    zeros: f64,
) -> CredalSet {
    let n = rng.random_range(1..=max_points);
    CredalSet::reduce((0..n).map(|_| random_pmf(rng, space, zeros)).collect()).unwrap()
}

pub fn random_marginal(rng: &mut impl Rng, variable: &Variable, zeros: f64) -> MarginalEvidence {
    MarginalEvidence::new(
        variable.clone(),
        random_simplex(rng, variable.size(), zeros),
    )
    .unwrap()
}

/// Interval evidence around a random point, so it is never empty.
pub fn random_interval_evidence(rng: &mut impl Rng, variable: &Variable) -> CredalEvidence {
    let centre = random_simplex(rng, variable.size(), 0.2);
    let bounds = centre
        .into_iter()
        .map(|c| {
            let down = ratio(rng.random_range(0..=3), 10);
            let up = ratio(rng.random_range(0..=3), 10);
            let lo = if c > down {
                &c - &down
            } else {
                Rational::zero()
            };
            let hi = (&c + &up).min(ratio(1, 1));
            (lo, hi)
        })
        .collect();
    CredalEvidence::new(variable.clone(), bounds).unwrap()
}

/// Conditional evidence on `X = var(x)` given `Y = var(y)` at a random value.
pub fn random_conditional(
    rng: &mut impl Rng,
    space: &Space,
    x: usize,
    y: usize,
    zeros: f64,
) -> ConditionalEvidence {
    let yv = rng.random_range(0..space.variable(y).size());
    let probs = random_simplex(rng, space.variable(x).size(), zeros);
    ConditionalEvidence::new(
        space.variable(x).clone(),
        space.variable(y).clone(),
        &space.variable(y).domain()[yv],
        probs,
    )
    .unwrap()
}

pub fn two_distinct(rng: &mut impl Rng, n: usize) -> (usize, usize) {
    let a = rng.random_range(0..n);
    let mut b = rng.random_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    (a, b)
}

/// A random formula built from atoms with negation, conjunction and
/// disjunction.
pub fn random_formula(rng: &mut impl Rng, space: &Space, depth: u32) -> Formula {
    let nvars = space.variables().len();
    if depth == 0 || rng.random_bool(0.3) {
        let v = rng.random_range(0..nvars);
        return Formula::Atom {
            variable: v,
            value: rng.random_range(0..space.variable(v).size()),
        };
    }
    let ops = [0, 1, 2];
    match ops.choose(rng).unwrap() {
        0 => random_formula(rng, space, depth - 1).not(),
        1 => random_formula(rng, space, depth - 1).and(random_formula(rng, space, depth - 1)),
        _ => random_formula(rng, space, depth - 1).or(random_formula(rng, space, depth - 1)),
    }
}

/// Proptest strategy for a space of 1 to 3 variables with 2 or 3 values.
pub fn arb_sizes() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(2usize..=3, 1..=3)
}

/// Proptest strategy for integer weights on `n` worlds with a positive sum.
pub fn arb_weights(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(prop_oneof![1 => Just(0i64), 3 => 1i64..=9], n)
        .prop_filter("some weight positive", |w| w.iter().any(|&x| x > 0))
        .prop_map(|w| {
            let total: i64 = w.iter().sum();
            w.into_iter().map(|x| ratio(x, total)).collect()
        })
}

pub fn arb_pmf() -> impl Strategy<Value = Pmf> {
    arb_sizes().prop_flat_map(|sizes| {
        let space = space_from_sizes(&sizes);
        arb_weights(space.world_count()).prop_map(move |w| Pmf::new(space.clone(), w).unwrap())
    })
}
