//! TOML model and evidence files.
//!
//! A model file declares its variables and exactly one representation of
//! the belief:
//!
//! ```toml
//! # a joint PMF; unlisted worlds get zero
//! joint = [
//!   { world = ["x1", "y1"], p = 0.25 },
//!   { world = ["x2", "y2"], p = "3/4" },
//! ]
//!
//! [[variables]]
//! name = "X"
//! values = ["x1", "x2"]
//!
//! [[variables]]
//! name = "Y"
//! values = ["y1", "y2"]
//! ```
//!
//! Top-level keys such as `joint` must come before the first
//! `[[variables]]` table, as TOML assigns later keys to that table.
//!
//! The alternatives are `factors` (a product of conditional tables, each
//! variable given previously declared factors), `intervals` (per-world
//! bounds) and `extremes` (a list of joint PMFs). Numbers are TOML numbers
//! or strings holding fractions or decimals, and are read exactly.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::CliError;
use crate::adjust::Evidence;
use crate::credal::{CredalEvidence, CredalSet, IntervalSpec};
use crate::model::{Space, Variable, World};
use crate::rational::{format_exact, from_f64_literal, parse_rational};
use crate::sharp::{ConditionalEvidence, MarginalEvidence, Pmf};
use crate::{Error, Rational};

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(untagged)]
pub enum Number {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Number {
    pub fn value(&self) -> Result<Rational, Error> {
        match self {
            Number::Int(n) => Ok(Rational::from_integer((*n).into())),
            Number::Float(f) => from_f64_literal(*f),
            Number::Text(s) => parse_rational(s),
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct VariableDecl {
    pub name: String,
    pub values: Vec<String>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct WorldWeight {
    pub world: Vec<String>,
    pub p: Number,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorldBounds {
    pub world: Vec<String>,
    pub bounds: [Number; 2],
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorRow {
    /// Values of the conditioning variables, in the order of `given`.
    pub when: Vec<String>,
    pub probs: BTreeMap<String, Number>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Factor {
    pub variable: String,
    #[serde(default)]
    pub given: Vec<String>,
    /// Table of an unconditional factor.
    pub probs: Option<BTreeMap<String, Number>>,
    /// Rows of a conditional factor.
    #[serde(default)]
    pub rows: Vec<FactorRow>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ExtremePoint {
    pub joint: Vec<WorldWeight>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub variables: Vec<VariableDecl>,
    pub joint: Option<Vec<WorldWeight>>,
    pub factors: Option<Vec<Factor>>,
    pub intervals: Option<Vec<WorldBounds>>,
    pub extremes: Option<Vec<ExtremePoint>>,
}

#[derive(Debug, Clone, Serialize)]
struct ModelOut {
    variables: Vec<VariableDecl>,
    extremes: Vec<ExtremePoint>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GivenDecl {
    pub variable: String,
    pub value: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvidenceFile {
    pub kind: String,
    pub variable: String,
    pub given: Option<GivenDecl>,
    pub probs: Option<BTreeMap<String, Number>>,
    pub bounds: Option<BTreeMap<String, [Number; 2]>>,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn parse<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    toml::from_str(&read(path)?).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn world(space: &Space, names: &[String]) -> Result<World, Error> {
    space.world_from_names(names)
}

fn table(variable: &Variable, probs: &BTreeMap<String, Number>) -> Result<Vec<Rational>, Error> {
    let mut out = vec![Rational::zero(); variable.size()];
    for (value, p) in probs {
        out[variable.value_index(value)?] = p.value()?;
    }
    Ok(out)
}

fn joint(space: &Arc<Space>, entries: &[WorldWeight]) -> Result<Pmf, Error> {
    let pairs = entries
        .iter()
        .map(|e| Ok((world(space, &e.world)?, e.p.value()?)))
        .collect::<Result<Vec<_>, Error>>()?;
    Pmf::from_worlds(space.clone(), pairs)
}

/// Parents of a variable and its table indexed by parent values.
type Table = (Vec<usize>, BTreeMap<Vec<usize>, Vec<Rational>>);

/// Product of the factor tables, each variable conditioned on factors
/// declared before it.
fn factor_product(space: &Arc<Space>, factors: &[Factor]) -> Result<Pmf, Error> {
    let n = space.variables().len();
    let mut tables: Vec<Option<Table>> = vec![None; n];
    for f in factors {
        let v = space.variable_index(&f.variable)?;
        if tables[v].is_some() {
            return Err(Error::InvalidDistribution(format!(
                "variable `{}` has two factors",
                f.variable
            )));
        }
        let mut parents = Vec::new();
        for g in &f.given {
            let p = space.variable_index(g)?;
            if tables[p].is_none() {
                return Err(Error::InvalidDistribution(format!(
                    "factor for `{}` is given `{g}`, which has no earlier factor",
                    f.variable
                )));
            }
            parents.push(p);
        }
        let variable = space.variable(v);
        let mut rows = BTreeMap::new();
        if let Some(probs) = &f.probs {
            if !parents.is_empty() || !f.rows.is_empty() {
                return Err(Error::InvalidDistribution(format!(
                    "factor for `{}` mixes `probs` with `given` or `rows`",
                    f.variable
                )));
            }
            rows.insert(Vec::new(), table(variable, probs)?);
        }
        for row in &f.rows {
            if row.when.len() != parents.len() {
                return Err(Error::InvalidDistribution(format!(
                    "row of factor `{}` lists {} values for {} conditioning variables",
                    f.variable,
                    row.when.len(),
                    parents.len()
                )));
            }
            let key = row
                .when
                .iter()
                .zip(&parents)
                .map(|(value, &p)| space.variable(p).value_index(value))
                .collect::<Result<Vec<_>, _>>()?;
            let probs = table(variable, &row.probs)?;
            MarginalEvidence::new(variable.clone(), probs.clone())
                .map_err(|e| Error::InvalidDistribution(format!("factor `{}`: {e}", f.variable)))?;
            rows.insert(key, probs);
        }
        tables[v] = Some((parents, rows));
    }
    if let Some(missing) = tables.iter().position(Option::is_none) {
        return Err(Error::InvalidDistribution(format!(
            "variable `{}` has no factor",
            space.variable(missing).name()
        )));
    }
    let mut weights = Vec::with_capacity(space.world_count());
    for w in 0..space.world_count() {
        let mut weight = Rational::from_integer(1.into());
        for (v, t) in tables.iter().enumerate() {
            let (parents, rows) = t.as_ref().expect("checked above");
            let key: Vec<usize> = parents.iter().map(|&p| space.value_at(w, p)).collect();
            let row = rows.get(&key).ok_or_else(|| {
                let names: Vec<&str> = parents
                    .iter()
                    .zip(&key)
                    .map(|(&p, &k)| space.variable(p).domain()[k].as_str())
                    .collect();
                Error::InvalidDistribution(format!(
                    "factor `{}` has no row for ({})",
                    space.variable(v).name(),
                    names.join(", ")
                ))
            })?;
            weight *= &row[space.value_at(w, v)];
        }
        weights.push(weight);
    }
    Pmf::new(space.clone(), weights)
}

/// Loads a model file as a credal set (a singleton for sharp beliefs).
pub fn load_model(path: &Path) -> Result<CredalSet, CliError> {
    let file: ModelFile = parse(path)?;
    model_from_file(&file).map_err(CliError::from)
}

pub fn model_from_file(file: &ModelFile) -> Result<CredalSet, Error> {
    let variables = file
        .variables
        .iter()
        .map(|d| Variable::new(d.name.clone(), d.values.clone()))
        .collect::<Result<Vec<_>, _>>()?;
    let space = Arc::new(Space::new(variables)?);
    let given = [
        file.joint.is_some(),
        file.factors.is_some(),
        file.intervals.is_some(),
        file.extremes.is_some(),
    ];
    if given.iter().filter(|&&b| b).count() != 1 {
        return Err(Error::InvalidDistribution(
            "a model needs exactly one of `joint`, `factors`, `intervals` or `extremes`".into(),
        ));
    }
    if let Some(entries) = &file.joint {
        return Ok(CredalSet::singleton(joint(&space, entries)?));
    }
    if let Some(factors) = &file.factors {
        return Ok(CredalSet::singleton(factor_product(&space, factors)?));
    }
    if let Some(entries) = &file.intervals {
        let bounds = entries
            .iter()
            .map(|e| {
                Ok((
                    world(&space, &e.world)?,
                    e.bounds[0].value()?,
                    e.bounds[1].value()?,
                ))
            })
            .collect::<Result<Vec<_>, Error>>()?;
        return CredalSet::from_intervals(&IntervalSpec::from_worlds(space, bounds)?);
    }
    let points = file
        .extremes
        .as_ref()
        .expect("one representation is present")
        .iter()
        .map(|e| joint(&space, &e.joint))
        .collect::<Result<Vec<_>, _>>()?;
    CredalSet::reduce(points)
}

/// The extremes representation of a credal set, with exact numbers.
pub fn model_to_toml(k: &CredalSet) -> String {
    let space = k.space();
    let variables = space
        .variables()
        .iter()
        .map(|v| VariableDecl {
            name: v.name().to_string(),
            values: v.domain().to_vec(),
        })
        .collect();
    let extremes = k
        .reduced()
        .extremes()
        .iter()
        .map(|p| ExtremePoint {
            joint: p
                .weights()
                .iter()
                .enumerate()
                .filter(|(_, w)| !w.is_zero())
                .map(|(i, w)| WorldWeight {
                    world: space
                        .world(i)
                        .values()
                        .iter()
                        .enumerate()
                        .map(|(v, &value)| space.variable(v).domain()[value].clone())
                        .collect(),
                    p: Number::Text(format_exact(w)),
                })
                .collect(),
        })
        .collect();
    toml::to_string(&ModelOut {
        variables,
        extremes,
    })
    .expect("model serializes")
}

pub fn load_evidence(path: &Path, space: &Space) -> Result<Evidence, CliError> {
    let file: EvidenceFile = parse(path)?;
    evidence_from_file(&file, space).map_err(CliError::from)
}

pub fn evidence_from_file(file: &EvidenceFile, space: &Space) -> Result<Evidence, Error> {
    let variable = space
        .variable(space.variable_index(&file.variable)?)
        .clone();
    let need_probs = || {
        file.probs
            .as_ref()
            .ok_or_else(|| Error::InvalidEvidence(format!("{} evidence needs `probs`", file.kind)))
    };
    let unexpected = |field: &str| {
        Error::InvalidEvidence(format!("{} evidence does not take `{field}`", file.kind))
    };
    match file.kind.as_str() {
        "marginal" => {
            if file.given.is_some() {
                return Err(unexpected("given"));
            }
            if file.bounds.is_some() {
                return Err(unexpected("bounds"));
            }
            let probs = table(&variable, need_probs()?)?;
            Ok(Evidence::Marginal(MarginalEvidence::new(variable, probs)?))
        }
        "conditional" => {
            if file.bounds.is_some() {
                return Err(unexpected("bounds"));
            }
            let given = file.given.as_ref().ok_or_else(|| {
                Error::InvalidEvidence("conditional evidence needs `given`".into())
            })?;
            let given_var = space
                .variable(space.variable_index(&given.variable)?)
                .clone();
            let probs = table(&variable, need_probs()?)?;
            Ok(Evidence::Conditional(ConditionalEvidence::new(
                variable,
                given_var,
                &given.value,
                probs,
            )?))
        }
        "credal-marginal" => {
            if file.given.is_some() {
                return Err(unexpected("given"));
            }
            if file.probs.is_some() {
                return Err(unexpected("probs"));
            }
            let entries = file.bounds.as_ref().ok_or_else(|| {
                Error::InvalidEvidence("credal-marginal evidence needs `bounds`".into())
            })?;
            let mut bounds = vec![(Rational::zero(), Rational::zero()); variable.size()];
            for (value, [lo, hi]) in entries {
                bounds[variable.value_index(value)?] = (lo.value()?, hi.value()?);
            }
            Ok(Evidence::Credal(CredalEvidence::new(variable, bounds)?))
        }
        other => Err(Error::InvalidEvidence(format!(
            "unknown evidence kind `{other}` (expected marginal, conditional or credal-marginal)"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    const CELESTE: &str = r#"
        [[variables]]
        name = "Y"
        values = ["y", "not_y"]
        [[variables]]
        name = "X"
        values = ["x_W", "x_G", "x_B"]
        [[variables]]
        name = "Z"
        values = ["z", "not_z"]

        [[factors]]
        variable = "Y"
        probs = { y = 0.7, not_y = 0.3 }

        [[factors]]
        variable = "X"
        given = ["Y"]
        rows = [
          { when = ["y"], probs = { x_W = 0.8, x_G = 0.2, x_B = 0 } },
          { when = ["not_y"], probs = { x_W = 0.5, x_G = 0.3, x_B = 0.2 } },
        ]

        [[factors]]
        variable = "Z"
        given = ["Y"]
        rows = [
          { when = ["y"], probs = { z = 0.95, not_z = 0.05 } },
          { when = ["not_y"], probs = { z = "1/5", not_z = "4/5" } },
        ]
    "#;

    #[test]
    fn factors_multiply() {
        let file: ModelFile = toml::from_str(CELESTE).unwrap();
        let k = model_from_file(&file).unwrap();
        let p = &k.extremes()[0];
        let w = k.space().world_from_names(&["y", "x_W", "z"]).unwrap();
        assert_eq!(p.weight(&w), &ratio(532, 1000));
    }

    #[test]
    fn factor_order_is_enforced() {
        let text = CELESTE.replace(
            "variable = \"Y\"\n        probs",
            "variable = \"Y\"\n        given = [\"Z\"]\n        probs",
        );
        let file: ModelFile = toml::from_str(&text).unwrap();
        assert!(model_from_file(&file).is_err());
    }

    #[test]
    fn round_trip_through_extremes() {
        let file: ModelFile = toml::from_str(CELESTE).unwrap();
        let k = model_from_file(&file).unwrap();
        let text = model_to_toml(&k);
        let back: ModelFile = toml::from_str(&text).unwrap();
        assert_eq!(model_from_file(&back).unwrap(), k);
    }

    #[test]
    fn two_representations_are_rejected() {
        let text = format!("{CELESTE}\njoint = []\n");
        assert!(
            toml::from_str::<ModelFile>(&text).is_err()
                || model_from_file(&toml::from_str(&text).unwrap()).is_err()
        );
    }

    #[test]
    fn evidence_kinds() {
        let file: ModelFile = toml::from_str(CELESTE).unwrap();
        let k = model_from_file(&file).unwrap();
        let ev: EvidenceFile = toml::from_str(
            r#"
            kind = "conditional"
            variable = "X"
            given = { variable = "Y", value = "y" }
            probs = { x_W = 0.8, x_G = 0.1, x_B = 0.1 }
            "#,
        )
        .unwrap();
        assert!(matches!(
            evidence_from_file(&ev, k.space()).unwrap(),
            Evidence::Conditional(_)
        ));
        let bad: EvidenceFile =
            toml::from_str("kind = \"marginal\"\nvariable = \"X\"\nprobs = { x_W = 0.5 }").unwrap();
        assert!(matches!(
            evidence_from_file(&bad, k.space()),
            Err(Error::InvalidEvidence(_))
        ));
        let cred: EvidenceFile =
            toml::from_str("kind = \"credal-marginal\"\nvariable = \"X\"\nbounds = { x_W = [0.2, \"2/5\"], x_B = [0.5, 1] }")
                .unwrap();
        assert!(matches!(
            evidence_from_file(&cred, k.space()).unwrap(),
            Evidence::Credal(_)
        ));
    }
}
