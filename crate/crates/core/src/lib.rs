//! Swarm algorithm framework for numerical optimization.
//!
//! A swarm of agents shares a blackboard of published personal bests. Each
//! cycle every agent runs one generate-and-test rule (constricted particle
//! swarm or differential evolution), evaluates the new point through the
//! problem-formulation rules (periodic boundary mapping, feasibility-first
//! comparison, adaptive constraint relaxing) and publishes its best. Rules are
//! chosen per cycle by a fixed choice, the alternating DEPS combination, a
//! weighted random draw, or a per-agent network with extremal dynamics.
//!
//! ```
//! use swaf::{builtin, run, RuleStrategy, SwarmConfig};
//!
//! let problem = builtin("G8").unwrap();
//! let strategy: RuleStrategy = "deps:CR=0.9".parse().unwrap();
//! let result = run(&problem, SwarmConfig::new(20, 200, strategy).with_seed(1)).unwrap();
//! assert!(result.is_feasible());
//! assert!((result.objective - 0.095825).abs() < 1e-4);
//! ```

pub mod bench;
pub mod deployer;
pub mod engine;
pub mod error;
pub mod formulation;
pub mod goodness;
pub mod problems;
pub mod random;
pub mod rules;

pub use deployer::{DeployerNetwork, DeployerParams};
pub use engine::{best_of, run, Blackboard, CycleRecord, FormulationSpec, RunResult, Swarm, SwarmConfig};
pub use error::{Error, Result};
pub use formulation::{AcrParams, AcrState, Comparator};
pub use goodness::{GoodnessPair, KnowledgePoint, Preference};
pub use problems::{benchmark_catalog, builtin, Bounds, ProblemDef, Sense, SuccessCriterion};
pub use random::{RngStream, UniformSource};
pub use rules::{DeParams, PsParams, Rule, RuleId, RuleStrategy};
