use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{compact, difference, Report, Verdict, Witness};
use crate::adjust::{adjust, AdjustOptions, Evidence, Operator};
use crate::credal::{
    cs_equivalent, restrict, satisfies_evidence, Acceptance, CredalEvidence, CredalSet, Statement,
};
use crate::model::Space;
use crate::{Error, Rational, Result};

const SEED: u64 = 0x6b6d_2d72_6570;

fn violated(space: &Space, k: &CredalSet, statements: &[Statement]) -> Witness {
    for p in k.extremes() {
        if let Some(s) = statements.iter().find(|s| !s.holds(space, p.weights())) {
            return Witness {
                subject: format!("{} at {}", s.display(space), compact(p)),
                expected: "satisfied".into(),
                found: "violated".into(),
            };
        }
    }
    Witness {
        subject: "evidence".into(),
        expected: "satisfied by every member".into(),
        found: "violated inside the hull".into(),
    }
}

/// The same polytope given differently: generators shuffled and padded with
/// interior mixtures.
fn re_present(k: &CredalSet, rng: &mut ChaCha8Rng) -> Result<CredalSet> {
    let mut gens = k.extremes().to_vec();
    let n = gens.len();
    for _ in 0..2 {
        let a = gens[rng.random_range(0..n)].clone();
        let b = gens[rng.random_range(0..n)].clone();
        let lambda = Rational::from(Ratio::new(rng.random_range(1..8i64).into(), 8.into()));
        gens.push(a.mix(&b, &lambda)?);
    }
    gens.shuffle(rng);
    CredalSet::from_generators(gens)
}

/// Equivalent evidence in another form: interval evidence with its bounds
/// tightened, and sharp marginal evidence as degenerate intervals.
fn re_state(ev: &Evidence) -> Evidence {
    match ev {
        Evidence::Marginal(m) => Evidence::Credal(CredalEvidence::sharp(m)),
        Evidence::Credal(c) => Evidence::Credal(c.tightened()),
        Evidence::Conditional(_) => ev.clone(),
    }
}

/// The conjunction of two pieces of evidence, when it is again evidence.
/// `Ok(None)` means the conjunction is unsatisfiable.
fn conjunction(a: &Evidence, b: &Evidence) -> std::result::Result<Option<Evidence>, String> {
    let as_intervals = |e: &Evidence| match e {
        Evidence::Marginal(m) => Some(CredalEvidence::sharp(m)),
        Evidence::Credal(c) => Some(c.clone()),
        Evidence::Conditional(_) => None,
    };
    match (a, b) {
        (Evidence::Conditional(x), Evidence::Conditional(y)) => {
            if x.variable() != y.variable()
                || x.given() != y.given()
                || x.given_value() != y.given_value()
            {
                Err("conditional evidence on different conditionals cannot be conjoined".into())
            } else if x == y {
                Ok(Some(a.clone()))
            } else {
                Ok(None)
            }
        }
        _ => {
            let (Some(x), Some(y)) = (as_intervals(a), as_intervals(b)) else {
                return Err("conditional and marginal evidence cannot be conjoined".into());
            };
            if x.variable() != y.variable() {
                return Err("evidence on different variables cannot be conjoined".into());
            }
            let bounds = x
                .bounds()
                .iter()
                .zip(y.bounds())
                .map(|((l1, h1), (l2, h2))| (l1.max(l2).clone(), h1.min(h2).clone()))
                .collect();
            match CredalEvidence::new(x.variable().clone(), bounds) {
                Ok(c) => Ok(Some(match c.as_sharp() {
                    Some(m) => Evidence::Marginal(m),
                    None => Evidence::Credal(c),
                })),
                Err(_) => Ok(None),
            }
        }
    }
}

/// Checks the KM postulates for `op` adjusting `k` by `ev`.
///
/// - KM1: the result satisfies the evidence.
/// - KM2: when the evidence is consistent with `k`, the result equals the
///   members of `k` satisfying it.
/// - KM3: satisfiable evidence yields a non-empty result.
/// - KM4: an equivalent presentation of `k` and of the evidence yields an
///   equivalent result.
/// - KM5, KM6: with auxiliary evidence `aux` on the same variable,
///   `(k * ev) & aux` is included in `k * (ev & aux)` and, when the former is
///   non-empty, conversely.
pub fn check_km(
    k: &CredalSet,
    ev: &Evidence,
    op: Operator,
    opts: AdjustOptions,
    aux: Option<&Evidence>,
) -> Result<Report> {
    let space = k.space().clone();
    let statements = ev.statements(&space)?;
    let mut report = Report::new("KM");
    let result = match adjust(k, ev, op, opts) {
        Ok(r) => r,
        Err(e) if e.is_operator_precondition() && !op.is_imaging() => {
            let why = format!("`{op}` is undefined here");
            report.push("KM1", Verdict::NotApplicable(why.clone()));
            report.push("KM2", Verdict::NotApplicable(why.clone()));
            report.push(
                "KM3",
                Verdict::Fails(Witness {
                    subject: format!("`{op}` on satisfiable {} evidence", ev.kind()),
                    expected: "a non-empty result".into(),
                    found: e.to_string(),
                }),
            );
            for id in ["KM4", "KM5", "KM6"] {
                report.push(id, Verdict::NotApplicable(why.clone()));
            }
            return Ok(report);
        }
        Err(e) => return Err(e),
    };

    report.push(
        "KM1",
        match satisfies_evidence(&result, &statements)? {
            Acceptance::Accepted => Verdict::Holds,
            _ => Verdict::Fails(violated(&space, &result, &statements)),
        },
    );

    report.push(
        "KM2",
        match restrict(k, &statements)? {
            None => Verdict::NotApplicable("evidence is inconsistent with every member".into()),
            Some(expansion) if cs_equivalent(&result, &expansion)? => Verdict::Holds,
            Some(expansion) => Verdict::Fails(difference(
                "members satisfying the evidence",
                &result,
                &expansion,
            )),
        },
    );

    report.push(
        "KM3",
        if result.is_empty() {
            Verdict::Fails(Witness {
                subject: "result".into(),
                expected: "non-empty".into(),
                found: "empty".into(),
            })
        } else {
            Verdict::Holds
        },
    );

    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let k2 = re_present(k, &mut rng)?;
    let ev2 = re_state(ev);
    report.push(
        "KM4",
        match adjust(&k2, &ev2, op, opts) {
            Ok(r2) if cs_equivalent(&r2, &result)? => Verdict::Holds,
            Ok(r2) => Verdict::Fails(difference(
                "result for an equivalent presentation",
                &r2,
                &result,
            )),
            Err(e) => Verdict::Fails(Witness {
                subject: "result for an equivalent presentation".into(),
                expected: "defined".into(),
                found: e.to_string(),
            }),
        },
    );

    let (km5, km6) = match aux {
        None => {
            let why = "no auxiliary evidence given";
            (
                Verdict::NotApplicable(why.into()),
                Verdict::NotApplicable(why.into()),
            )
        }
        Some(aux) => conjunction_postulates(k, &result, ev, aux, op, opts)?,
    };
    report.push("KM5", km5);
    report.push("KM6", km6);
    if aux.is_some() {
        report.note(
            "KM5 and KM6 read the conjunction of evidence as the intersection of the evidence sets",
        );
    }
    Ok(report)
}

fn conjunction_postulates(
    k: &CredalSet,
    result: &CredalSet,
    ev: &Evidence,
    aux: &Evidence,
    op: Operator,
    opts: AdjustOptions,
) -> Result<(Verdict, Verdict)> {
    let na = |why: String| {
        Ok((
            Verdict::NotApplicable(why.clone()),
            Verdict::NotApplicable(why),
        ))
    };
    let both = match conjunction(ev, aux) {
        Err(why) => return na(why),
        Ok(None) => return na("the conjoined evidence is unsatisfiable".into()),
        Ok(Some(both)) => both,
    };
    let conjoined = match adjust(k, &both, op, opts) {
        Ok(r) => r,
        Err(Error::OperatorMismatch { .. }) => {
            return na(format!(
                "`{op}` does not accept the conjoined {} evidence",
                both.kind()
            ))
        }
        Err(e) => return Err(e),
    };
    let Some(restricted) = restrict(result, &aux.statements(k.space())?)? else {
        let why = "the result is inconsistent with the auxiliary evidence".to_string();
        return Ok((Verdict::Holds, Verdict::NotApplicable(why)));
    };
    let km5 = if conjoined.includes(&restricted)? {
        Verdict::Holds
    } else {
        Verdict::Fails(difference(
            "result restricted to the auxiliary evidence",
            &restricted,
            &conjoined,
        ))
    };
    let km6 = if restricted.includes(&conjoined)? {
        Verdict::Holds
    } else {
        Verdict::Fails(difference(
            "result for the conjoined evidence",
            &conjoined,
            &restricted,
        ))
    };
    Ok((km5, km6))
}
