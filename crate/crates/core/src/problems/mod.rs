//! Problem definitions and the benchmark catalog.
//!
//! A [`ProblemDef`] always evaluates in *minimization* form. Problems that the
//! literature states as maximization carry [`Sense::Maximize`]; their objective
//! is negated internally and [`ProblemDef::reported`] undoes the negation so
//! that printed results use the literature's sign.

mod catalog;
mod config;

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

pub use catalog::{benchmark_catalog, builtin, BUILTIN_IDS, EQUALITY_EPSILON};
pub use config::{load_problem_file, parse_problem_file, ProblemSpec};

use crate::error::{Error, Result};

pub type ScalarFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub lower: f64,
    pub upper: f64,
}

impl Bounds {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite() && lower < upper) {
            return Err(Error::argument(format!(
                "bounds must satisfy lower < upper, got [{lower}, {upper}]"
            )));
        }
        Ok(Self { lower, upper })
    }

    pub fn span(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lower <= v && v <= self.upper
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapMode {
    /// `|F - F*| <= tolerance * |F*|`, falling back to `absolute_fallback`
    /// when `F* = 0`.
    Relative,
    Absolute,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuccessCriterion {
    pub mode: GapMode,
    pub tolerance: f64,
    pub require_feasible: bool,
    pub absolute_fallback: f64,
}

impl SuccessCriterion {
    /// Final result within 2% of the known optimum.
    pub fn within_two_percent(require_feasible: bool) -> Self {
        Self {
            mode: GapMode::Relative,
            tolerance: 0.02,
            require_feasible,
            absolute_fallback: 1e-3,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !positive(self.tolerance) || !positive(self.absolute_fallback) {
            return Err(Error::config("success tolerance must be positive"));
        }
        Ok(())
    }
}

/// Builds an inequality `g(x) = |h(x)| - eps_h` from an equality `h(x) = 0`.
pub fn convert_equality(h: ScalarFn, eps_h: f64) -> Result<ScalarFn> {
    if !positive(eps_h) {
        return Err(Error::argument(format!(
            "equality tolerance must be positive, got {eps_h}"
        )));
    }
    Ok(Arc::new(move |x: &[f64]| h(x).abs() - eps_h))
}

/// An optimization problem: box bounds, an objective and inequality
/// constraints `g_j(x) <= 0`.
pub struct ProblemDef {
    name: String,
    bounds: Vec<Bounds>,
    objective: ScalarFn,
    sense: Sense,
    constraints: Vec<ScalarFn>,
    known_best: Option<f64>,
    optimizer: Option<Vec<f64>>,
    criterion: SuccessCriterion,
    evaluations: AtomicU64,
}

impl ProblemDef {
    /// Unconstrained minimization problem over a box.
    pub fn new(name: impl Into<String>, bounds: Vec<Bounds>, objective: ScalarFn) -> Result<Self> {
        if bounds.is_empty() {
            return Err(Error::argument("a problem needs at least one dimension"));
        }
        Ok(Self {
            name: name.into(),
            bounds,
            objective,
            sense: Sense::Minimize,
            constraints: Vec::new(),
            known_best: None,
            optimizer: None,
            criterion: SuccessCriterion::within_two_percent(false),
            evaluations: AtomicU64::new(0),
        })
    }

    pub fn with_sense(mut self, sense: Sense) -> Self {
        self.sense = sense;
        self
    }

    /// Adds an inequality constraint `g(x) <= 0`. Constrained problems require
    /// a feasible final point to count as solved.
    pub fn with_constraint(mut self, g: ScalarFn) -> Self {
        self.constraints.push(g);
        self.criterion.require_feasible = true;
        self
    }

    /// Adds `|h(x)| - eps_h <= 0` for the equality `h(x) = 0`.
    pub fn with_equality(self, h: ScalarFn, eps_h: f64) -> Result<Self> {
        Ok(self.with_constraint(convert_equality(h, eps_h)?))
    }

    /// Best known objective, in the literature's sign.
    pub fn with_known_best(mut self, value: f64) -> Self {
        self.known_best = Some(value);
        self
    }

    /// A published optimizer point, used by regression tests.
    pub fn with_optimizer(mut self, x: Vec<f64>) -> Self {
        self.optimizer = Some(x);
        self
    }

    pub fn with_criterion(mut self, criterion: SuccessCriterion) -> Self {
        self.criterion = criterion;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[Bounds] {
        &self.bounds
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn constraint_count(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_constrained(&self) -> bool {
        !self.constraints.is_empty()
    }

    pub fn known_best(&self) -> Option<f64> {
        self.known_best
    }

    pub fn optimizer(&self) -> Option<&[f64]> {
        self.optimizer.as_deref()
    }

    pub fn criterion(&self) -> &SuccessCriterion {
        &self.criterion
    }

    /// Number of `evaluate_raw` calls made on this instance.
    pub fn evaluations(&self) -> u64 {
        self.evaluations.load(Ordering::Relaxed)
    }

    /// Converts an internal (minimization-form) objective to the literature sign.
    pub fn reported(&self, f_internal: f64) -> f64 {
        match self.sense {
            Sense::Minimize => f_internal,
            Sense::Maximize => -f_internal,
        }
    }

    /// Evaluates the objective (minimization form) and every constraint at
    /// `x` exactly as given. Writes constraint values into `g`.
    pub fn evaluate_into(&self, x: &[f64], g: &mut Vec<f64>) -> Result<f64> {
        if x.len() != self.dimension() {
            return Err(Error::argument(format!(
                "{} expects dimension {}, got {}",
                self.name,
                self.dimension(),
                x.len()
            )));
        }
        self.evaluations.fetch_add(1, Ordering::Relaxed);
        let f = self.reported((self.objective)(x));
        g.clear();
        g.extend(self.constraints.iter().map(|c| c(x)));
        if !f.is_finite() || g.iter().any(|v| !v.is_finite()) {
            return Err(Error::Evaluation {
                problem: self.name.clone(),
                x: x.to_vec(),
            });
        }
        Ok(f)
    }

    /// Objective (minimization form) and constraint values at `x`.
    pub fn evaluate_raw(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        let mut g = Vec::with_capacity(self.constraints.len());
        let f = self.evaluate_into(x, &mut g)?;
        Ok((f, g))
    }

    /// Copy of this problem with its evaluation counter reset to zero.
    pub fn fresh(&self) -> Self {
        Self {
            name: self.name.clone(),
            bounds: self.bounds.clone(),
            objective: Arc::clone(&self.objective),
            sense: self.sense,
            constraints: self.constraints.clone(),
            known_best: self.known_best,
            optimizer: self.optimizer.clone(),
            criterion: self.criterion,
            evaluations: AtomicU64::new(0),
        }
    }
}

/// Clones start with a zeroed evaluation counter.
impl Clone for ProblemDef {
    fn clone(&self) -> Self {
        self.fresh()
    }
}

impl fmt::Debug for ProblemDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemDef")
            .field("name", &self.name)
            .field("dimension", &self.dimension())
            .field("sense", &self.sense)
            .field("constraints", &self.constraints.len())
            .field("known_best", &self.known_best)
            .field("evaluations", &self.evaluations())
            .finish()
    }
}

/// False for NaN as well as non-positive values.
fn positive(v: f64) -> bool {
    v.partial_cmp(&0.0) == Some(std::cmp::Ordering::Greater)
}
