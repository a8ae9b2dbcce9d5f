use num_traits::Zero;

use super::{basis, difference, interval, subject, Report, Verdict, Witness};
use crate::credal::{
    conditional_cs, conditional_envelopes, credal_image, cs_equivalent, envelope, marginal_cs,
    upper_envelope, CredalEvidence, CredalSet,
};
use crate::model::{Formula, Space};
use crate::rational::format_exact;
use crate::sharp::{ConditionalEvidence, MarginalEvidence, Pmf};
use crate::{Error, Rational, Result};

fn atom(variable: usize, value: usize) -> Formula {
    Formula::Atom { variable, value }
}

fn same_space(a: &Space, b: &Space) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::SpaceMismatch)
    }
}

/// First basis event whose conditional probability differs between `before`
/// and `after`, given `given`.
fn conditional_mismatch(
    before: &Pmf,
    after: &Pmf,
    given: &Formula,
    events: &[Formula],
) -> Option<Witness> {
    let space = before.space();
    for alpha in events {
        let expected = before.conditional(alpha, given);
        let found = after.conditional(alpha, given);
        if expected != found {
            let show = |v: Option<Rational>| {
                v.map_or_else(|| "undefined".to_string(), |v| format_exact(&v))
            };
            return Some(Witness {
                subject: subject(space, alpha, Some(given)),
                expected: show(expected),
                found: show(found),
            });
        }
    }
    None
}

fn marginal_mismatch(after: &Pmf, variable: usize, expected: &[Rational]) -> Option<Witness> {
    let found = after.marginal(variable);
    let space = after.space();
    found
        .iter()
        .zip(expected)
        .enumerate()
        .find(|(_, (f, e))| f != e)
        .map(|(value, (f, e))| Witness {
            subject: subject(space, &atom(variable, value), None),
            expected: format_exact(e),
            found: format_exact(f),
        })
}

fn verdict(w: Option<Witness>) -> Verdict {
    w.map_or(Verdict::Holds, Verdict::Fails)
}

/// Probability kinematics: conditionals given each `X = x` are kept (PK1)
/// and the `X` marginal equals the evidence (PK2).
pub fn check_pk(p: &Pmf, after: &Pmf, ev: &MarginalEvidence) -> Result<Report> {
    same_space(p.space(), after.space())?;
    let space = p.space();
    let x = space.locate(ev.variable())?;
    let events = basis(space, &[x]);
    let mut report = Report::new("PK");

    let mut pk1 = None;
    let mut checked = 0;
    for value in 0..space.variable(x).size() {
        let given = atom(x, value);
        if p.prob(&given).is_zero() || after.prob(&given).is_zero() {
            continue;
        }
        checked += 1;
        if let Some(w) = conditional_mismatch(p, after, &given, &events) {
            pk1 = Some(w);
            break;
        }
    }
    report.push(
        "PK1",
        if checked == 0 {
            Verdict::NotApplicable("no value has positive probability before and after".into())
        } else {
            verdict(pk1)
        },
    );
    report.push("PK2", verdict(marginal_mismatch(after, x, ev.probs())));
    Ok(report)
}

/// Conditional probability kinematics for evidence `P'(X | Y = y)`.
pub fn check_cpk(p: &Pmf, after: &Pmf, ev: &ConditionalEvidence) -> Result<Report> {
    same_space(p.space(), after.space())?;
    let space = p.space();
    let (x, y, yv) = ev.locate(space)?;
    let given_y = atom(y, yv);
    let mut report = Report::new("CPK");
    if p.prob(&given_y).is_zero() {
        let why = format!("{} is zero", subject(space, &given_y, None));
        for id in ["CPK1", "CPK2", "CPK3", "CPK4"] {
            report.push(id, Verdict::NotApplicable(why.clone()));
        }
        return Ok(report);
    }

    let events = basis(space, &[x, y]);
    let mut cpk1 = None;
    for value in 0..space.variable(x).size() {
        let given = atom(x, value).and(given_y.clone());
        if p.prob(&given).is_zero() || after.prob(&given).is_zero() {
            continue;
        }
        if let Some(w) = conditional_mismatch(p, after, &given, &events) {
            cpk1 = Some(w);
            break;
        }
    }
    report.push("CPK1", verdict(cpk1));

    let events = basis(space, &[y]);
    let mut cpk2 = None;
    for other in (0..space.variable(y).size()).filter(|&v| v != yv) {
        let given = atom(y, other);
        if p.prob(&given).is_zero() {
            continue;
        }
        if let Some(w) = conditional_mismatch(p, after, &given, &events) {
            cpk2 = Some(w);
            break;
        }
    }
    report.push("CPK2", verdict(cpk2));
    report.push("CPK3", verdict(marginal_mismatch(after, y, &p.marginal(y))));

    let mut cpk4 = None;
    for (value, c) in ev.probs().iter().enumerate() {
        let found = after.conditional(&atom(x, value), &given_y);
        if found.as_ref() != Some(c) {
            cpk4 = Some(Witness {
                subject: subject(space, &atom(x, value), Some(&given_y)),
                expected: format_exact(c),
                found: found.map_or_else(|| "undefined".into(), |v| format_exact(&v)),
            });
            break;
        }
    }
    report.push("CPK4", verdict(cpk4));
    Ok(report)
}

/// Compares the envelope of the adjusted conditional with the reference one:
/// the adjusted interval must contain it, or equal it when `strict`.
fn envelope_mismatch(
    space: &Space,
    alpha: &Formula,
    given: &Formula,
    adjusted: (Rational, Rational),
    reference: (Rational, Rational),
    strict: bool,
) -> Option<Witness> {
    let ok = if strict {
        adjusted == reference
    } else {
        adjusted.0 <= reference.0 && reference.1 <= adjusted.1
    };
    (!ok).then(|| Witness {
        subject: format!("envelope of {}", subject(space, alpha, Some(given))),
        expected: if strict {
            interval(&reference)
        } else {
            format!("an interval containing {}", interval(&reference))
        },
        found: interval(&adjusted),
    })
}

/// Imaginary kinematics for interval evidence on `X`.
///
/// IK1 compares, for every `x` the adjusted set can condition on, the
/// envelope of `K'(a | x)` with that of the image `K_x(a)`. IK2 requires
/// the adjusted `X` marginal to be exactly the evidence set: every member
/// satisfies the bounds and every extreme point of the evidence is attained.
/// IK3 applies to evidence certain of one value and requires the adjusted
/// set to equal the image on that value.
pub fn check_ik(
    k: &CredalSet,
    after: &CredalSet,
    ev: &CredalEvidence,
    strict: bool,
) -> Result<Report> {
    same_space(k.space(), after.space())?;
    let space = k.space().clone();
    let x = space.locate(ev.variable())?;
    let mut report = Report::new("IK");

    let events = basis(&space, &[x]);
    let mut ik1 = None;
    'values: for value in 0..space.variable(x).size() {
        let given = atom(x, value);
        if upper_envelope(after, &given).is_zero() {
            continue;
        }
        let image = credal_image(k, &given)?;
        for alpha in &events {
            let adjusted = conditional_envelopes(after, alpha, &given)?;
            if let Some(w) = envelope_mismatch(
                &space,
                alpha,
                &given,
                adjusted,
                envelope(&image, alpha),
                strict,
            ) {
                ik1 = Some(w);
                break 'values;
            }
        }
    }
    report.push("IK1", verdict(ik1));

    let marginal = marginal_cs(after, &[x])?;
    let mut ik2 = None;
    'members: for p in marginal.extremes() {
        for (value, (lo, hi)) in ev.bounds().iter().enumerate() {
            let v = &p.weights()[value];
            if v < lo || v > hi {
                ik2 = Some(Witness {
                    subject: subject(&space, &atom(x, value), None),
                    expected: format!("a value in {}", interval(&(lo.clone(), hi.clone()))),
                    found: format_exact(v),
                });
                break 'members;
            }
        }
    }
    if ik2.is_none() {
        for e in ev.extremes()? {
            let q = Pmf::new(marginal.space().clone(), e.probs().to_vec())?;
            if !marginal.contains(&q) {
                ik2 = Some(Witness {
                    subject: format!("evidence point {}", super::compact(&q)),
                    expected: "attained by the adjusted marginal".into(),
                    found: "outside it".into(),
                });
                break;
            }
        }
    }
    report.push("IK2", verdict(ik2));

    let ik3 = match ev.degenerate_value() {
        None => Verdict::NotApplicable("evidence is not certain of any value".into()),
        Some(value) => {
            let given = atom(x, value);
            let image = credal_image(k, &given)?;
            if cs_equivalent(after, &image)? {
                Verdict::Holds
            } else {
                Verdict::Fails(difference(
                    &format!("image on {}", given.display(&space)),
                    after,
                    &image,
                ))
            }
        }
    };
    report.push("IK3", ik3);
    Ok(report)
}

/// Imaginary conditional kinematics for sharp evidence `P'(X | Y = y)`;
/// requires the lower probability of `Y = y` to be positive.
pub fn check_ick(
    k: &CredalSet,
    after: &CredalSet,
    ev: &ConditionalEvidence,
    strict: bool,
) -> Result<Report> {
    same_space(k.space(), after.space())?;
    let space = k.space().clone();
    let (x, y, yv) = ev.locate(&space)?;
    let given_y = atom(y, yv);
    if crate::credal::lower_envelope(k, &given_y).is_zero() {
        return Err(Error::Precondition(format!(
            "lower probability of `{}` is zero",
            given_y.display(&space)
        )));
    }
    let mut report = Report::new("ICK");

    let events = basis(&space, &[x, y]);
    let mut ick1 = None;
    'values: for (value, c) in ev.probs().iter().enumerate() {
        let given = atom(x, value).and(given_y.clone());
        if c.is_zero() || upper_envelope(after, &given).is_zero() {
            continue;
        }
        let image = credal_image(k, &atom(x, value))?;
        for alpha in &events {
            let adjusted = conditional_envelopes(after, alpha, &given)?;
            let reference = conditional_envelopes(&image, alpha, &given_y)?;
            if let Some(w) = envelope_mismatch(&space, alpha, &given, adjusted, reference, strict) {
                ick1 = Some(w);
                break 'values;
            }
        }
    }
    report.push("ICK1", verdict(ick1));

    let mut ick2 = Verdict::Holds;
    for other in (0..space.variable(y).size()).filter(|&v| v != yv) {
        let given = atom(y, other);
        if upper_envelope(k, &given).is_zero() {
            continue;
        }
        let what = format!("conditional set given {}", given.display(&space));
        let before = conditional_cs(k, &given)?;
        match conditional_cs(after, &given) {
            Ok(adjusted) if cs_equivalent(&adjusted, &before)? => {}
            Ok(adjusted) => {
                ick2 = Verdict::Fails(difference(&what, &adjusted, &before));
                break;
            }
            Err(_) => {
                ick2 = Verdict::Fails(Witness {
                    subject: what,
                    expected: "defined".into(),
                    found: format!("{} is zero in the adjusted set", given.display(&space)),
                });
                break;
            }
        }
    }
    report.push("ICK2", ick2);

    let before_y = marginal_cs(k, &[y])?;
    let after_y = marginal_cs(after, &[y])?;
    report.push(
        "ICK3",
        if cs_equivalent(&after_y, &before_y)? {
            Verdict::Holds
        } else {
            Verdict::Fails(difference(
                &format!("marginal on {}", space.variable(y).name()),
                &after_y,
                &before_y,
            ))
        },
    );

    let mut ick4 = None;
    let mut defined = false;
    'extremes: for p in after.extremes() {
        if p.prob(&given_y).is_zero() {
            continue;
        }
        defined = true;
        for (value, c) in ev.probs().iter().enumerate() {
            let found = p
                .conditional(&atom(x, value), &given_y)
                .expect("positive probability");
            if &found != c {
                ick4 = Some(Witness {
                    subject: format!(
                        "{} in {}",
                        subject(&space, &atom(x, value), Some(&given_y)),
                        super::compact(p)
                    ),
                    expected: format_exact(c),
                    found: format_exact(&found),
                });
                break 'extremes;
            }
        }
    }
    if !defined {
        ick4 = Some(Witness {
            subject: subject(&space, &given_y, None),
            expected: "positive in some member".into(),
            found: "zero throughout".into(),
        });
    }
    report.push("ICK4", verdict(ick4));

    let ick5 = match ev.degenerate_value() {
        None => Verdict::NotApplicable("evidence is not certain of any value".into()),
        Some(value) => {
            let image = marginal_cs(&credal_image(k, &atom(x, value))?, &[x])?;
            let adjusted = marginal_cs(&conditional_cs(after, &given_y)?, &[x])?;
            if cs_equivalent(&adjusted, &image)? {
                Verdict::Holds
            } else {
                let what = format!(
                    "{} given {}",
                    space.variable(x).name(),
                    given_y.display(&space)
                );
                Verdict::Fails(difference(&what, &adjusted, &image))
            }
        }
    };
    report.push("ICK5", ick5);
    Ok(report)
}
