//! Discrete variables, their joint world space, and the propositional
//! formula language used for events and evidence.
//!
//! Worlds are enumerated lexicographically: the first declared variable is
//! the most significant coordinate and values follow declaration order.
//! That order is the canonical order used for tie-breaking everywhere.

mod formula;

pub(crate) use formula::{closest_map, partial_assignments};
pub use formula::{closest_world, extension, parse_formula, parse_query, satisfies, Formula};

use std::fmt;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Variable {
    name: String,
    domain: Vec<String>,
}

impl Variable {
    pub fn new<S: Into<String>>(
        name: impl Into<String>,
        domain: impl IntoIterator<Item = S>,
    ) -> Result<Self> {
        let name = name.into();
        let domain: Vec<String> = domain.into_iter().map(Into::into).collect();
        if name.is_empty() {
            return Err(Error::InvalidVariable("empty variable name".into()));
        }
        if domain.is_empty() {
            return Err(Error::InvalidVariable(format!(
                "variable `{name}` has an empty domain"
            )));
        }
        for (i, v) in domain.iter().enumerate() {
            if domain[..i].contains(v) {
                return Err(Error::InvalidVariable(format!(
                    "variable `{name}` repeats value `{v}`"
                )));
            }
        }
        Ok(Variable { name, domain })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &[String] {
        &self.domain
    }

    pub fn size(&self) -> usize {
        self.domain.len()
    }

    pub fn value_index(&self, value: &str) -> Result<usize> {
        self.domain
            .iter()
            .position(|v| v == value)
            .ok_or_else(|| Error::UnknownValue {
                variable: self.name.clone(),
                value: value.to_string(),
            })
    }
}

/// Joint possibility space of an ordered list of variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Space {
    variables: Vec<Variable>,
    strides: Vec<usize>,
    world_count: usize,
}

impl Space {
    pub fn new(variables: Vec<Variable>) -> Result<Self> {
        if variables.is_empty() {
            return Err(Error::InvalidVariable(
                "a space needs at least one variable".into(),
            ));
        }
        for (i, v) in variables.iter().enumerate() {
            if variables[..i].iter().any(|u| u.name == v.name) {
                return Err(Error::InvalidVariable(format!(
                    "duplicate variable `{}`",
                    v.name
                )));
            }
        }
        let mut strides = vec![1; variables.len()];
        for i in (0..variables.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * variables[i + 1].size();
        }
        let world_count = strides[0] * variables[0].size();
        Ok(Space {
            variables,
            strides,
            world_count,
        })
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable(&self, index: usize) -> &Variable {
        &self.variables[index]
    }

    pub fn variable_index(&self, name: &str) -> Result<usize> {
        self.variables
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// Index of `variable` in this space, requiring an identical domain.
    pub fn locate(&self, variable: &Variable) -> Result<usize> {
        let index = self.variable_index(&variable.name)?;
        if self.variables[index] != *variable {
            return Err(Error::InvalidVariable(format!(
                "variable `{}` has a different domain in this space",
                variable.name
            )));
        }
        Ok(index)
    }

    pub fn world_count(&self) -> usize {
        self.world_count
    }

    pub fn worlds(&self) -> impl Iterator<Item = World> + '_ {
        (0..self.world_count).map(|i| self.world(i))
    }

    pub fn world(&self, index: usize) -> World {
        World {
            values: (0..self.variables.len())
                .map(|v| self.value_at(index, v))
                .collect(),
        }
    }

    pub fn world_index(&self, world: &World) -> usize {
        world
            .values
            .iter()
            .zip(&self.strides)
            .map(|(v, s)| v * s)
            .sum()
    }

    /// Builds a world from one value name per variable, in declaration order.
    pub fn world_from_names<S: AsRef<str>>(&self, names: &[S]) -> Result<World> {
        if names.len() != self.variables.len() {
            return Err(Error::InvalidVariable(format!(
                "a world needs {} values, got {}",
                self.variables.len(),
                names.len()
            )));
        }
        let values = self
            .variables
            .iter()
            .zip(names)
            .map(|(var, name)| var.value_index(name.as_ref()))
            .collect::<Result<_>>()?;
        Ok(World { values })
    }

    pub(crate) fn value_at(&self, world: usize, variable: usize) -> usize {
        (world / self.strides[variable]) % self.variables[variable].size()
    }

    pub(crate) fn with_value(&self, world: usize, variable: usize, value: usize) -> usize {
        let current = self.value_at(world, variable);
        world - current * self.strides[variable] + value * self.strides[variable]
    }

    /// Space over the given variables, kept in this space's order.
    pub fn subspace(&self, variables: &[usize]) -> Result<Space> {
        let mut sorted = variables.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        Space::new(sorted.iter().map(|&i| self.variables[i].clone()).collect())
    }

    /// Index in `subspace(variables)` of the restriction of `world`.
    pub(crate) fn project(&self, world: usize, variables: &[usize], sub: &Space) -> usize {
        variables
            .iter()
            .enumerate()
            .map(|(j, &v)| self.value_at(world, v) * sub.strides[j])
            .sum()
    }

    pub fn format_world(&self, world: &World) -> String {
        let parts: Vec<&str> = world
            .values
            .iter()
            .zip(&self.variables)
            .map(|(&v, var)| var.domain[v].as_str())
            .collect();
        format!("({})", parts.join(", "))
    }

    pub(crate) fn format_world_index(&self, world: usize) -> String {
        self.format_world(&self.world(world))
    }
}

/// A total assignment, one value index per variable of its space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct World {
    values: Vec<usize>,
}

impl World {
    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn value(&self, variable: usize) -> usize {
        self.values[variable]
    }

    /// Number of variables on which two worlds differ.
    pub fn hamming(&self, other: &World) -> usize {
        self.values
            .iter()
            .zip(&other.values)
            .filter(|(a, b)| a != b)
            .count()
    }
}

impl fmt::Display for World {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.values)
    }
}
