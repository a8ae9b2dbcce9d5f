//! Belief adjustment over discrete probability models.
//!
//! Beliefs are either a single probability mass function ([`Pmf`]) or a
//! credal set ([`CredalSet`]) given by its extreme points. Evidence comes as
//! a marginal distribution on one variable, a conditional distribution of
//! one variable given a value of another, or probability intervals on one
//! variable.
//!
//! The operators split into two groups:
//!
//! - revision rules ([`sharp::condition`], [`sharp::jeffrey_revise`],
//!   [`sharp::adams_revise`]), which refuse evidence that contradicts a
//!   zero-probability event, and
//! - imaging rules ([`sharp::image`], [`sharp::marginal_jeffrey_image`],
//!   [`sharp::adams_image`] and their credal counterparts in [`credal`]),
//!   which move probability mass to the closest worlds satisfying the
//!   evidence and so accept inconsistent evidence.
//!
//! The [`kinematics`] module checks adjusted beliefs against the probability
//! kinematics conditions (PK, CPK), their imaging analogues (IK, ICK) and the
//! Katsuno-Mendelzon postulates.
//!
//! All arithmetic is exact ([`Rational`]).

pub mod adjust;
pub mod cli;
pub mod credal;
mod error;
pub mod kinematics;
pub(crate) mod lp;
pub mod model;
pub mod rational;
pub mod sharp;

pub use adjust::{adjust, adjust_pmf, AdjustOptions, Evidence, Operator};
pub use credal::{CredalEvidence, CredalSet, IntervalSpec};
pub use error::{Error, Result};
pub use model::{Formula, Space, Variable, World};
pub use rational::Rational;
pub use sharp::{ConditionalEvidence, MarginalEvidence, Pmf};
