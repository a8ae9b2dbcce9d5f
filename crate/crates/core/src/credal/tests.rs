use super::*;
use crate::model::{Space, Variable};
use crate::rational::{parse_rational as q, ratio};

fn xy() -> Arc<Space> {
    let x = Variable::new("X", ["x1", "x2", "x3"]).unwrap();
    let y = Variable::new("Y", ["y1", "y2"]).unwrap();
    Arc::new(Space::new(vec![x, y]).unwrap())
}

fn example3() -> CredalSet {
    let bounds = [
        ("0", "0"),
        ("0", "0"),
        ("0.15", "0.35"),
        ("0.25", "0.49"),
        ("0", "0.45"),
        ("0.03", "0.5"),
    ]
    .iter()
    .map(|(lo, hi)| (q(lo).unwrap(), q(hi).unwrap()))
    .collect();
    CredalSet::from_intervals(&IntervalSpec::new(xy(), bounds).unwrap()).unwrap()
}

fn pmf(space: &Arc<Space>, w: &[(i64, i64)]) -> Pmf {
    Pmf::new(space.clone(), w.iter().map(|&(n, d)| ratio(n, d)).collect()).unwrap()
}

fn atom(space: &Space, var: &str, val: &str) -> Formula {
    Formula::atom(space, var, val).unwrap()
}

#[test]
fn example3_envelopes() {
    let k = example3();
    let s = k.space().clone();
    assert_eq!(
        envelope(&k, &atom(&s, "X", "x1")),
        (ratio(0, 1), ratio(0, 1))
    );
    assert_eq!(
        envelope(&k, &atom(&s, "Y", "y1")),
        (q("0.15").unwrap(), q("0.72").unwrap())
    );
    for p in k.extremes() {
        assert!(p.weights()[2] >= q("0.15").unwrap() && p.weights()[2] <= q("0.35").unwrap());
    }
}

#[test]
fn example3_image_on_x1() {
    let k = example3();
    let s = k.space().clone();
    let img = credal_image(&k, &atom(&s, "X", "x1")).unwrap();
    assert_eq!(upper_envelope(&img, &atom(&s, "X", "x2")), ratio(0, 1));
    assert_eq!(upper_envelope(&img, &atom(&s, "X", "x3")), ratio(0, 1));
    for y in ["y1", "y2"] {
        let a = atom(&s, "Y", y);
        assert_eq!(envelope(&img, &a), envelope(&k, &a));
    }
}

#[test]
fn example4_jeffrey_image_is_product_with_prior_y() {
    let k = example3();
    let s = k.space().clone();
    let ev = MarginalEvidence::new(
        s.variable(0).clone(),
        vec![q("0.3").unwrap(), ratio(0, 1), q("0.7").unwrap()],
    )
    .unwrap();
    let out = credal_marginal_jeffrey_image(&k, &ev).unwrap();
    let products: Vec<Pmf> = k
        .extremes()
        .iter()
        .map(|p| {
            let py = p.marginal(1);
            let w = (0..s.world_count())
                .map(|i| &ev.probs()[s.value_at(i, 0)] * &py[s.value_at(i, 1)])
                .collect();
            Pmf::new(s.clone(), w).unwrap()
        })
        .collect();
    assert!(cs_equivalent(&out, &CredalSet::reduce(products).unwrap()).unwrap());
    assert!(cs_equivalent(
        &marginal_cs(&out, &[1]).unwrap(),
        &marginal_cs(&k, &[1]).unwrap()
    )
    .unwrap());
    let sharp = credal_jeffrey_image(&k, &CredalEvidence::sharp(&ev)).unwrap();
    assert!(cs_equivalent(&out, &sharp).unwrap());
}

#[test]
fn reduce_drops_interior_and_duplicates() {
    let s = xy();
    let a = pmf(&s, &[(1, 1), (0, 1), (0, 1), (0, 1), (0, 1), (0, 1)]);
    let b = pmf(&s, &[(0, 1), (1, 1), (0, 1), (0, 1), (0, 1), (0, 1)]);
    let c = pmf(&s, &[(0, 1), (0, 1), (1, 1), (0, 1), (0, 1), (0, 1)]);
    let mid = a
        .mix(&b, &ratio(1, 3))
        .unwrap()
        .mix(&c, &ratio(1, 2))
        .unwrap();
    let k = CredalSet::reduce(vec![
        mid.clone(),
        c.clone(),
        a.clone(),
        b.clone(),
        a.clone(),
    ])
    .unwrap();
    assert_eq!(k.len(), 3);
    assert!(k.contains(&mid));
    assert!(!k.contains(&pmf(&s, &[(0, 1), (0, 1), (0, 1), (1, 1), (0, 1), (0, 1)])));
    let again = CredalSet::reduce(vec![b, c, a]).unwrap();
    assert_eq!(k, again);
}

#[test]
fn collinear_points_reduce_to_endpoints() {
    let s = xy();
    let a = pmf(&s, &[(1, 2), (1, 2), (0, 1), (0, 1), (0, 1), (0, 1)]);
    let b = pmf(&s, &[(0, 1), (0, 1), (1, 2), (1, 2), (0, 1), (0, 1)]);
    let pts: Vec<Pmf> = (0..=4).map(|i| a.mix(&b, &ratio(i, 4)).unwrap()).collect();
    let k = CredalSet::reduce(pts).unwrap();
    assert_eq!(k.len(), 2);
}

#[test]
fn conditional_envelopes_skip_zero_denominators() {
    let s = xy();
    let a = pmf(&s, &[(0, 1), (0, 1), (1, 2), (1, 2), (0, 1), (0, 1)]);
    let b = pmf(&s, &[(1, 4), (3, 4), (0, 1), (0, 1), (0, 1), (0, 1)]);
    let k = CredalSet::reduce(vec![a, b]).unwrap();
    let env = conditional_envelopes(&k, &atom(&s, "Y", "y1"), &atom(&s, "X", "x1")).unwrap();
    assert_eq!(env, (ratio(1, 4), ratio(1, 4)));
    let err = conditional_envelopes(&k, &atom(&s, "Y", "y1"), &atom(&s, "X", "x3")).unwrap_err();
    assert!(matches!(err, Error::ConditioningUndefined(_)));
}

#[test]
fn adams_image_requires_positive_lower_probability() {
    let s = xy();
    let a = pmf(&s, &[(0, 1), (1, 2), (0, 1), (1, 2), (0, 1), (0, 1)]);
    let b = pmf(&s, &[(1, 4), (1, 4), (1, 4), (1, 4), (0, 1), (0, 1)]);
    let k = CredalSet::reduce(vec![a, b]).unwrap();
    let ev = ConditionalEvidence::new(
        s.variable(0).clone(),
        s.variable(1).clone(),
        "y1",
        vec![ratio(1, 2), ratio(1, 2), ratio(0, 1)],
    )
    .unwrap();
    assert!(matches!(
        credal_adams_image(&k, &ev, AdamsRanging::Independent),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn adams_image_ranging_variants_agree_on_singletons() {
    let s = xy();
    let p = pmf(&s, &[(1, 10), (1, 10), (2, 10), (1, 10), (0, 1), (5, 10)]);
    let ev = ConditionalEvidence::new(
        s.variable(0).clone(),
        s.variable(1).clone(),
        "y2",
        vec![ratio(1, 5), ratio(0, 1), ratio(4, 5)],
    )
    .unwrap();
    let k = CredalSet::singleton(p.clone());
    let expected = sharp::adams_image(&p, &ev).unwrap();
    for ranging in [AdamsRanging::Independent, AdamsRanging::Coupled] {
        assert_eq!(
            credal_adams_image(&k, &ev, ranging).unwrap().extremes(),
            std::slice::from_ref(&expected)
        );
    }
}

#[test]
fn independent_ranging_contains_coupled() {
    let s = xy();
    let a = pmf(&s, &[(1, 10), (2, 10), (1, 10), (2, 10), (2, 10), (2, 10)]);
    let b = pmf(&s, &[(3, 10), (0, 1), (1, 10), (1, 10), (4, 10), (1, 10)]);
    let k = CredalSet::reduce(vec![a, b]).unwrap();
    let ev = ConditionalEvidence::new(
        s.variable(0).clone(),
        s.variable(1).clone(),
        "y1",
        vec![ratio(1, 3), ratio(1, 3), ratio(1, 3)],
    )
    .unwrap();
    let ind = credal_adams_image(&k, &ev, AdamsRanging::Independent).unwrap();
    let cpl = credal_adams_image(&k, &ev, AdamsRanging::Coupled).unwrap();
    assert!(ind.includes(&cpl).unwrap());
    assert!(cs_equivalent(
        &marginal_cs(&ind, &[1]).unwrap(),
        &marginal_cs(&k, &[1]).unwrap()
    )
    .unwrap());
}

#[test]
fn acceptance_of_evidence() {
    let k = example3();
    let s = k.space().clone();
    let x = s.variable(0).clone();
    let x1 = Statement::new(atom(&s, "X", "x1"), Relation::Ge, q("0.1").unwrap());
    assert_eq!(
        satisfies_evidence(&k, std::slice::from_ref(&x1)).unwrap(),
        Acceptance::Rejected
    );
    assert!(restrict(&k, &[x1]).unwrap().is_none());

    let none = CredalEvidence::new(
        x.clone(),
        vec![
            (ratio(0, 1), ratio(0, 1)),
            (ratio(0, 1), ratio(1, 1)),
            (ratio(0, 1), ratio(1, 1)),
        ],
    )
    .unwrap();
    assert_eq!(
        satisfies_evidence(&k, &credal_statements(&s, &none).unwrap()).unwrap(),
        Acceptance::Accepted
    );

    let half = Statement::new(atom(&s, "X", "x2"), Relation::Ge, ratio(1, 2));
    assert_eq!(
        satisfies_evidence(&k, std::slice::from_ref(&half)).unwrap(),
        Acceptance::Neutral
    );
    let sub = restrict(&k, &[half]).unwrap().unwrap();
    assert!(k.includes(&sub).unwrap());
    assert_eq!(lower_envelope(&sub, &atom(&s, "X", "x2")), ratio(1, 2));
    assert_eq!(
        upper_envelope(&sub, &atom(&s, "X", "x2")),
        upper_envelope(&k, &atom(&s, "X", "x2"))
    );
}

#[test]
fn restrict_on_accepted_evidence_is_identity() {
    let k = example3();
    let s = k.space().clone();
    let st = Statement::new(atom(&s, "X", "x2"), Relation::Ge, q("0.4").unwrap());
    let sub = restrict(&k, &[st]).unwrap().unwrap();
    assert!(cs_equivalent(&sub, &k).unwrap());
}

#[test]
fn conditional_statements_hold_linearly() {
    let s = xy();
    let p = pmf(&s, &[(1, 10), (1, 10), (2, 10), (2, 10), (2, 10), (2, 10)]);
    let ev = ConditionalEvidence::new(
        s.variable(0).clone(),
        s.variable(1).clone(),
        "y1",
        vec![ratio(1, 5), ratio(2, 5), ratio(2, 5)],
    )
    .unwrap();
    let st = conditional_statements(&s, &ev).unwrap();
    assert!(st.iter().all(|t| t.holds(&s, p.weights())));
    let k = CredalSet::singleton(p);
    assert_eq!(satisfies_evidence(&k, &st).unwrap(), Acceptance::Accepted);
}

#[test]
fn cs_equivalent_rejects_mixed_spaces() {
    let k = example3();
    let other = Arc::new(Space::new(vec![Variable::new("Z", ["a", "b"]).unwrap()]).unwrap());
    let j = CredalSet::singleton(Pmf::uniform(other));
    assert_eq!(cs_equivalent(&k, &j), Err(Error::SpaceMismatch));
}

#[test]
fn revision_of_singletons_matches_sharp_rules() {
    let s = xy();
    let p = pmf(&s, &[(1, 10), (1, 10), (2, 10), (1, 10), (0, 1), (5, 10)]);
    let k = CredalSet::singleton(p.clone());
    let ev = MarginalEvidence::new(
        s.variable(0).clone(),
        vec![ratio(1, 2), ratio(1, 2), ratio(0, 1)],
    )
    .unwrap();
    assert_eq!(
        credal_jeffrey_revise(&k, &ev).unwrap().extremes(),
        &[sharp::jeffrey_revise(&p, &ev).unwrap()]
    );
    let cev = ConditionalEvidence::new(
        s.variable(0).clone(),
        s.variable(1).clone(),
        "y2",
        vec![ratio(1, 5), ratio(1, 5), ratio(3, 5)],
    )
    .unwrap();
    assert_eq!(
        credal_adams_revise(&k, &cev).unwrap().extremes(),
        &[sharp::adams_revise(&p, &cev).unwrap()]
    );
    let x1 = atom(&s, "X", "x1");
    assert_eq!(
        credal_condition(&k, &x1).unwrap().extremes(),
        &[sharp::condition(&p, &x1).unwrap()]
    );
}

#[test]
fn credal_revision_partiality() {
    let k = example3();
    let s = k.space().clone();
    let ev = MarginalEvidence::degenerate(s.variable(0).clone(), "x1").unwrap();
    assert!(matches!(
        credal_jeffrey_revise(&k, &ev),
        Err(Error::PartialityViolation { .. })
    ));
    assert!(matches!(
        credal_condition(&k, &atom(&s, "X", "x1")),
        Err(Error::ConditioningUndefined(_))
    ));
}

#[test]
fn credal_jeffrey_revise_is_representation_invariant() {
    let k = example3();
    let s = k.space().clone();
    let ev = MarginalEvidence::new(
        s.variable(0).clone(),
        vec![ratio(0, 1), ratio(1, 4), ratio(3, 4)],
    )
    .unwrap();
    let a = credal_jeffrey_revise(&k, &ev).unwrap();
    let mut gens = k.extremes().to_vec();
    gens.push(gens[0].mix(&gens[1], &ratio(1, 3)).unwrap());
    gens.push(gens[1].mix(&gens[2], &ratio(2, 7)).unwrap());
    let b = credal_jeffrey_revise(&CredalSet::from_generators(gens).unwrap(), &ev).unwrap();
    assert!(cs_equivalent(&a, &b).unwrap());
    let m = marginal_cs(&a, &[0]).unwrap();
    assert_eq!(m.len(), 1);
}
