//! Problem files: user-defined problems in TOML, without recompiling.
//!
//! ```toml
//! [[problem]]
//! builtin = "G1"
//!
//! [[problem]]
//! name = "ring"
//! dimension = 2
//! lower = -3.0
//! upper = 3.0
//! objective = "(x1 - 1)^2 + (x2 + 0.5)^2"
//! inequalities = ["x1^2 + x2^2 - 4.0"]
//! equalities = ["x1 - 2.0 * x2"]
//! epsilon_h = 1e-4
//! known_best = 0.0
//! ```
//!
//! Expressions use `x1`..`xD` for the coordinates and evalexpr syntax
//! (`^` for powers, `math::sin`, `math::exp`, ...). Integer literals divide as
//! integers, so write `1.0 / 3` rather than `1 / 3`.

use std::path::Path;
use std::sync::Arc;

use evalexpr::{
    build_operator_tree, ContextWithMutableVariables, DefaultNumericTypes, HashMapContext, Node,
    Value,
};
use serde::Deserialize;

use super::{builtin, Bounds, ProblemDef, ScalarFn, Sense, EQUALITY_EPSILON};
use crate::error::{Error, Result};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemFile {
    #[serde(default)]
    problem: Vec<ProblemSpec>,
}

/// One `[[problem]]` table.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub builtin: Option<String>,
    pub name: Option<String>,
    pub dimension: Option<usize>,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub bounds: Option<Vec<[f64; 2]>>,
    pub objective: Option<String>,
    pub sense: Option<String>,
    #[serde(default)]
    pub inequalities: Vec<String>,
    #[serde(default)]
    pub equalities: Vec<String>,
    pub epsilon_h: Option<f64>,
    pub known_best: Option<f64>,
}

impl ProblemSpec {
    pub fn into_problem(self) -> Result<ProblemDef> {
        if let Some(id) = &self.builtin {
            let mut p = builtin(id)?;
            if let Some(best) = self.known_best {
                p = p.with_known_best(best);
            }
            return Ok(p);
        }
        let name = self
            .name
            .clone()
            .ok_or_else(|| Error::config("problem needs either `builtin` or `name`"))?;
        let bounds = self.resolve_bounds(&name)?;
        let dim = bounds.len();
        let objective = self
            .objective
            .as_deref()
            .ok_or_else(|| Error::config(format!("problem `{name}` has no objective")))?;
        let mut p = ProblemDef::new(name.clone(), bounds, compile(objective, dim)?)?;
        p = match self.sense.as_deref().map(str::to_ascii_lowercase).as_deref() {
            None | Some("min") | Some("minimize") => p,
            Some("max") | Some("maximize") => p.with_sense(Sense::Maximize),
            Some(other) => return Err(Error::config(format!("unknown sense `{other}`"))),
        };
        for g in &self.inequalities {
            p = p.with_constraint(compile(g, dim)?);
        }
        let eps_h = self.epsilon_h.unwrap_or(EQUALITY_EPSILON);
        for h in &self.equalities {
            p = p.with_equality(compile(h, dim)?, eps_h)?;
        }
        if let Some(best) = self.known_best {
            p = p.with_known_best(best);
        }
        // catch unknown variables and type errors before a run starts
        let center: Vec<f64> = p
            .bounds()
            .iter()
            .map(|b| 0.5 * (b.lower + b.upper))
            .collect();
        p.fresh().evaluate_raw(&center).map_err(|e| {
            Error::config(format!("problem `{name}` cannot be evaluated at the box center: {e}"))
        })?;
        Ok(p)
    }

    fn resolve_bounds(&self, name: &str) -> Result<Vec<Bounds>> {
        match (&self.bounds, self.dimension, self.lower, self.upper) {
            (Some(list), dim, None, None) => {
                if let Some(d) = dim {
                    if d != list.len() {
                        return Err(Error::config(format!(
                            "problem `{name}`: dimension {d} but {} bounds",
                            list.len()
                        )));
                    }
                }
                list.iter().map(|[l, u]| Bounds::new(*l, *u)).collect()
            }
            (None, Some(d), Some(l), Some(u)) if d > 0 => Ok(vec![Bounds::new(l, u)?; d]),
            _ => Err(Error::config(format!(
                "problem `{name}`: give either `bounds` or `dimension` with `lower` and `upper`"
            ))),
        }
    }
}

/// Parses a problem file's contents.
pub fn parse_problem_file(text: &str) -> Result<Vec<ProblemDef>> {
    let file: ProblemFile =
        toml::from_str(text).map_err(|e| Error::config(format!("problem file: {e}")))?;
    file.problem.into_iter().map(ProblemSpec::into_problem).collect()
}

pub fn load_problem_file(path: impl AsRef<Path>) -> Result<Vec<ProblemDef>> {
    parse_problem_file(&std::fs::read_to_string(path)?)
}

fn compile(expr: &str, dim: usize) -> Result<ScalarFn> {
    let tree: Node<DefaultNumericTypes> = build_operator_tree(expr)
        .map_err(|e| Error::config(format!("cannot parse `{expr}`: {e}")))?;
    let names: Vec<String> = (1..=dim).map(|d| format!("x{d}")).collect();
    Ok(Arc::new(move |x: &[f64]| {
        let mut ctx = HashMapContext::<DefaultNumericTypes>::new();
        for (name, &v) in names.iter().zip(x) {
            if ctx.set_value(name.clone(), Value::Float(v)).is_err() {
                return f64::NAN;
            }
        }
        tree.eval_number_with_context(&ctx).unwrap_or(f64::NAN)
    }))
}
