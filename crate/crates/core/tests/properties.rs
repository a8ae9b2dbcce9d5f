mod common;

use credal_imaging::credal::{self, CredalEvidence};
use credal_imaging::model::extension;
use credal_imaging::rational::ratio;
use credal_imaging::sharp;
use credal_imaging::{CredalSet, Formula, MarginalEvidence, Pmf, Rational};
use num_traits::{One, Zero};
use proptest::prelude::*;
use std::ops::Not;

use common::*;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 64,
        ..ProptestConfig::default()
    }
}

fn arb_formula(pmf: &Pmf) -> impl Strategy<Value = Formula> {
    let space = pmf.space().clone();
    any::<u64>().prop_map(move |seed| {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        random_formula(&mut rng, &space, 3)
    })
}

fn arb_pmf_and_formula() -> impl Strategy<Value = (Pmf, Formula)> {
    arb_pmf().prop_flat_map(|p| {
        let f = arb_formula(&p);
        (Just(p), f)
    })
}

/// A credal set of 1 to 4 random generators on one space.
fn arb_credal() -> impl Strategy<Value = CredalSet> {
    arb_sizes().prop_flat_map(|sizes| {
        let space = space_from_sizes(&sizes);
        let n = space.world_count();
        prop::collection::vec(arb_weights(n), 1..=4).prop_map(move |ws| {
            CredalSet::reduce(
                ws.into_iter()
                    .map(|w| Pmf::new(space.clone(), w).unwrap())
                    .collect(),
            )
            .unwrap()
        })
    })
}

fn satisfiable(p: &Pmf, f: &Formula) -> bool {
    !extension(f, p.space()).is_empty()
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn image_is_a_distribution_on_the_event((p, f) in arb_pmf_and_formula()) {
        prop_assume!(satisfiable(&p, &f));
        let img = sharp::image(&p, &f).unwrap();
        prop_assert!(img.prob(&f).is_one());
        let total: Rational = img.weights().iter().sum();
        prop_assert!(total.is_one());
    }

    #[test]
    fn imaging_fixes_distributions_already_on_the_event((p, f) in arb_pmf_and_formula()) {
        prop_assume!(p.prob(&f).is_one());
        prop_assert_eq!(sharp::image(&p, &f).unwrap(), p);
    }

    #[test]
    fn imaging_is_idempotent((p, f) in arb_pmf_and_formula()) {
        prop_assume!(satisfiable(&p, &f));
        let once = sharp::image(&p, &f).unwrap();
        prop_assert_eq!(sharp::image(&once, &f).unwrap(), once);
    }

    #[test]
    fn conditioning_agrees_with_bayes((p, f) in arb_pmf_and_formula()) {
        prop_assume!(!p.prob(&f).is_zero());
        let c = sharp::condition(&p, &f).unwrap();
        let inside = extension(&f, p.space());
        for (i, w) in c.weights().iter().enumerate() {
            let expected = if inside.contains(&p.space().world(i)) { &p.weights()[i] / p.prob(&f) } else { Rational::zero() };
            prop_assert_eq!(w, &expected);
        }
    }

    #[test]
    fn jeffrey_revision_matches_the_evidence(p in arb_pmf(), seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let space = p.space().clone();
        let x = rng.random_range(0..space.variables().len());
        let ev = random_marginal(&mut rng, space.variable(x), 0.3);
        match sharp::jeffrey_revise(&p, &ev) {
            Ok(after) => prop_assert_eq!(&after.marginal(x), ev.probs()),
            Err(e) => prop_assert!(e.is_operator_precondition()),
        }
        let img = sharp::marginal_jeffrey_image(&p, &ev).unwrap();
        prop_assert_eq!(&img.marginal(x), ev.probs());
    }

    #[test]
    fn imaging_preserves_the_other_marginals(p in arb_pmf(), seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let space = p.space().clone();
        prop_assume!(space.variables().len() > 1);
        let x = rng.random_range(0..space.variables().len());
        let ev = random_marginal(&mut rng, space.variable(x), 0.3);
        let img = sharp::marginal_jeffrey_image(&p, &ev).unwrap();
        let others: Vec<usize> = (0..space.variables().len()).filter(|&v| v != x).collect();
        prop_assert_eq!(img.marginalize(&others).unwrap(), p.marginalize(&others).unwrap());
    }

    #[test]
    fn envelopes_are_ordered_and_conjugate(k in arb_credal(), seed in any::<u64>()) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let f = random_formula(&mut rng, k.space(), 3);
        let (lo, hi) = credal::envelope(&k, &f);
        prop_assert!(lo <= hi);
        prop_assert!(lo >= Rational::zero() && hi <= Rational::one());
        let (nlo, nhi) = credal::envelope(&k, &f.clone().not());
        prop_assert_eq!(lo, Rational::one() - nhi);
        prop_assert_eq!(hi, Rational::one() - nlo);
    }

    #[test]
    fn reduction_is_idempotent_and_order_free(k in arb_credal()) {
        let again = CredalSet::reduce(k.extremes().to_vec()).unwrap();
        prop_assert_eq!(again.extremes(), k.extremes());
        let mut reversed = k.extremes().to_vec();
        reversed.reverse();
        let again = CredalSet::reduce(reversed).unwrap();
        prop_assert_eq!(again.extremes(), k.extremes());
    }

    #[test]
    fn reduction_drops_interior_mixtures(k in arb_credal(), a in 1i64..8) {
        let gens = k.extremes();
        let mut padded = gens.to_vec();
        padded.push(gens[0].mix(&gens[gens.len() - 1], &ratio(a, 8)).unwrap());
        let reduced = CredalSet::reduce(padded).unwrap();
        prop_assert_eq!(reduced.extremes(), gens);
    }

    #[test]
    fn credal_image_contains_each_member_image(k in arb_credal(), seed in any::<u64>()) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let f = random_formula(&mut rng, k.space(), 2);
        prop_assume!(satisfiable(&k.extremes()[0], &f));
        let img = credal::credal_image(&k, &f).unwrap();
        for p in k.extremes() {
            prop_assert!(img.contains(&sharp::image(p, &f).unwrap()));
        }
        prop_assert!(img.len() <= k.len());
    }

    #[test]
    fn sharp_intervals_behave_like_sharp_evidence(k in arb_credal(), seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let space = k.space().clone();
        let x = rng.random_range(0..space.variables().len());
        let ev = random_marginal(&mut rng, space.variable(x), 0.3);
        let a = credal::credal_marginal_jeffrey_image(&k, &ev).unwrap();
        let b = credal::credal_jeffrey_image(&k, &CredalEvidence::sharp(&ev)).unwrap();
        prop_assert!(credal::cs_equivalent(&a, &b).unwrap());
    }

    #[test]
    fn degenerate_evidence_round_trips(p in arb_pmf(), seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let space = p.space().clone();
        let x = rng.random_range(0..space.variables().len());
        let v = rng.random_range(0..space.variable(x).size());
        let ev = MarginalEvidence::degenerate(space.variable(x).clone(), &space.variable(x).domain()[v]).unwrap();
        let event = Formula::Atom { variable: x, value: v };
        prop_assert_eq!(sharp::marginal_jeffrey_image(&p, &ev).unwrap(), sharp::image(&p, &event).unwrap());
    }

    #[test]
    fn mixtures_of_extremes_stay_inside_the_adjusted_set(
        k in arb_credal(),
        seed in any::<u64>(),
        mix in prop::collection::vec(1i64..=5, 4),
    ) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let space = k.space().clone();
        let x = rng.random_range(0..space.variables().len());
        let ev = random_marginal(&mut rng, space.variable(x), 0.3);
        let total: i64 = mix.iter().take(k.len()).sum();
        let mut weights = vec![Rational::zero(); space.world_count()];
        for (p, &m) in k.extremes().iter().zip(&mix) {
            for (w, v) in weights.iter_mut().zip(p.weights()) {
                *w += ratio(m, total) * v;
            }
        }
        let inner = Pmf::new(space.clone(), weights).unwrap();
        let after = credal::credal_marginal_jeffrey_image(&k, &ev).unwrap();
        let moved = sharp::marginal_jeffrey_image(&inner, &ev).unwrap();
        prop_assert!(after.contains(&moved));
        let f = random_formula(&mut rng, &space, 2);
        let (lo, hi) = credal::envelope(&after, &f);
        let v = moved.prob(&f);
        prop_assert!(lo <= v && v <= hi);
        let vertex_values: Vec<Rational> = k
            .extremes()
            .iter()
            .map(|p| sharp::marginal_jeffrey_image(p, &ev).unwrap().prob(&f))
            .collect();
        prop_assert_eq!(&lo, vertex_values.iter().min().unwrap());
        prop_assert_eq!(&hi, vertex_values.iter().max().unwrap());
    }

    #[test]
    fn jeffrey_imaging_factorizes(p in arb_pmf(), seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let space = p.space().clone();
        prop_assume!(space.variables().len() > 1);
        let x = rng.random_range(0..space.variables().len());
        let ev = random_marginal(&mut rng, space.variable(x), 0.3);
        let img = sharp::marginal_jeffrey_image(&p, &ev).unwrap();
        let others: Vec<usize> = (0..space.variables().len()).filter(|&v| v != x).collect();
        let rest = p.marginalize(&others).unwrap();
        for i in 0..space.world_count() {
            let world = space.world(i);
            let j = (0..rest.space().world_count())
                .find(|&j| {
                    let w = rest.space().world(j);
                    others.iter().enumerate().all(|(k, &v)| w.value(k) == world.value(v))
                })
                .unwrap();
            prop_assert_eq!(&img.weights()[i], &(&ev.probs()[world.value(x)] * &rest.weights()[j]));
        }
    }
}
