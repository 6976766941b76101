//! The swarm: agents, the shared blackboard and the learning-cycle loop.
//!
//! Agents act one after another within a cycle and publish immediately, so
//! later agents in the same cycle already see earlier agents' new bests and
//! the updated incumbent.

use std::cmp::Ordering;

use crate::deployer::DeployerNetwork;
use crate::error::{Error, Result};
use crate::formulation::{acr_update, goodness_with, pbh_map, AcrParams, AcrState, Comparator};
use crate::goodness::{GoodnessPair, KnowledgePoint};
use crate::problems::ProblemDef;
use crate::random::{RngStream, UniformSource};
use crate::rules::{
    de_generate, deps_select, ps_generate, rc_select, test_update, PsMemory, Rule, RuleId,
    RuleStrategy,
};

/// Comparison rule used by a run. Periodic boundary mapping always applies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FormulationSpec {
    /// Plain feasibility-first comparison.
    Basic,
    /// Adaptive constraint relaxing; `None` uses the defaults for the run's
    /// horizon.
    Relaxed(Option<AcrParams>),
}

impl FormulationSpec {
    pub fn label(&self) -> &'static str {
        match self {
            FormulationSpec::Basic => "bch",
            FormulationSpec::Relaxed(_) => "acr",
        }
    }
}

impl std::str::FromStr for FormulationSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bch" | "basic" => Ok(FormulationSpec::Basic),
            "acr" | "relaxed" => Ok(FormulationSpec::Relaxed(None)),
            other => Err(Error::config(format!("unknown formulation `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwarmConfig {
    pub n_agents: usize,
    pub max_cycles: usize,
    pub strategy: RuleStrategy,
    pub formulation: FormulationSpec,
    pub seed: u64,
}

impl SwarmConfig {
    pub fn new(n_agents: usize, max_cycles: usize, strategy: RuleStrategy) -> Self {
        Self {
            n_agents,
            max_cycles,
            strategy,
            formulation: FormulationSpec::Basic,
            seed: 0,
        }
    }

    pub fn with_formulation(mut self, formulation: FormulationSpec) -> Self {
        self.formulation = formulation;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn acr_params(&self) -> Option<AcrParams> {
        match self.formulation {
            FormulationSpec::Basic => None,
            FormulationSpec::Relaxed(p) => {
                Some(p.unwrap_or_else(|| AcrParams::for_horizon(self.max_cycles)))
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_agents < 2 {
            return Err(Error::config(format!(
                "a swarm needs at least 2 agents, got {}",
                self.n_agents
            )));
        }
        self.strategy.validate()?;
        if let Some(p) = self.acr_params() {
            p.validate(self.max_cycles)?;
        }
        Ok(())
    }
}

/// Index of the best point under `comparator`; ties go to the lowest index.
pub fn best_of(published: &[KnowledgePoint], comparator: &Comparator) -> Result<usize> {
    let (first, rest) = published
        .split_first()
        .ok_or_else(|| Error::state("cannot pick the best of an empty set"))?;
    let mut best = 0;
    let mut best_gp = &first.goodness;
    for (k, p) in rest.iter().enumerate() {
        if comparator.strictly_better(&p.goodness, best_gp) {
            best = k + 1;
            best_gp = &p.goodness;
        }
    }
    Ok(best)
}

/// Shared repository: every agent's published personal best, the incumbent
/// and the relaxing controller state.
#[derive(Debug, Clone, PartialEq)]
pub struct Blackboard {
    published: Vec<KnowledgePoint>,
    incumbent: usize,
    acr: Option<AcrState>,
}

impl Blackboard {
    fn new(published: Vec<KnowledgePoint>, relaxed: bool) -> Result<Self> {
        let acr = if relaxed {
            let goodness: Vec<GoodnessPair> = published.iter().map(|p| p.goodness).collect();
            Some(AcrState::initial(&goodness)?)
        } else {
            None
        };
        let mut board = Self {
            published,
            incumbent: 0,
            acr,
        };
        board.refresh_incumbent()?;
        Ok(board)
    }

    pub fn published(&self) -> &[KnowledgePoint] {
        &self.published
    }

    pub fn incumbent(&self) -> &KnowledgePoint {
        &self.published[self.incumbent]
    }

    pub fn incumbent_index(&self) -> usize {
        self.incumbent
    }

    pub fn acr(&self) -> Option<&AcrState> {
        self.acr.as_ref()
    }

    /// The comparison rule in force: relaxed when a controller is present.
    pub fn comparator(&self) -> Comparator {
        self.acr
            .as_ref()
            .map_or(Comparator::BASIC, AcrState::comparator)
    }

    fn refresh_incumbent(&mut self) -> Result<()> {
        self.incumbent = best_of(&self.published, &self.comparator())?;
        Ok(())
    }

    fn goodness(&self) -> Vec<GoodnessPair> {
        self.published.iter().map(|p| p.goodness).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AgentState {
    pub id: usize,
    pub memory: PsMemory,
    pub deployer: Option<DeployerNetwork>,
    pub active_rule: RuleId,
}

/// Snapshot taken after every cycle (cycle 0 is the initial population).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleRecord {
    pub cycle: usize,
    /// Incumbent under the comparator in force during that cycle.
    pub incumbent: GoodnessPair,
    /// Best published point under plain feasibility-first comparison.
    pub best: GoodnessPair,
    /// Relaxing threshold after the cycle (0 without relaxing).
    pub epsilon_r: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    /// Final solution mapped into the search box.
    pub solution: Vec<f64>,
    /// Its goodness (objective in minimization form).
    pub goodness: GoodnessPair,
    /// Its objective in the problem's literature sign.
    pub objective: f64,
    /// Evaluations spent in learning cycles, `N * T`.
    pub evaluations: u64,
    /// Evaluations spent on the initial population.
    pub initial_evaluations: u64,
    pub history: Vec<CycleRecord>,
    pub n_agents: usize,
    pub seed: u64,
}

impl RunResult {
    pub fn is_feasible(&self) -> bool {
        self.goodness.is_feasible()
    }
}

/// A running swarm over one problem.
pub struct Swarm<'p> {
    problem: &'p ProblemDef,
    config: SwarmConfig,
    rules: Vec<Rule>,
    acr_params: Option<AcrParams>,
    agents: Vec<AgentState>,
    blackboard: Blackboard,
    rng: RngStream,
    cycle: usize,
    cycle_evaluations: u64,
    initial_evaluations: u64,
    history: Vec<CycleRecord>,
    scratch: Vec<f64>,
}

impl<'p> Swarm<'p> {
    /// Samples every agent uniformly in the box, evaluates it and publishes it.
    pub fn init(problem: &'p ProblemDef, config: SwarmConfig) -> Result<Self> {
        config.validate()?;
        let mut rng = RngStream::new(config.seed);
        let mut scratch = Vec::with_capacity(problem.constraint_count());
        let mut points = Vec::with_capacity(config.n_agents);
        for _ in 0..config.n_agents {
            let x: Vec<f64> = problem
                .bounds()
                .iter()
                .map(|b| b.lower + rng.uniform_real() * b.span())
                .collect();
            let gp = goodness_with(problem, &x, &mut scratch)?;
            points.push(KnowledgePoint::new(x, gp));
        }
        let acr_params = config.acr_params();
        let blackboard = Blackboard::new(points, acr_params.is_some())?;
        let rules = config.strategy.rules();
        let mut agents = Vec::with_capacity(config.n_agents);
        for (id, p) in blackboard.published.iter().enumerate() {
            let deployer = match &config.strategy {
                RuleStrategy::Adaptive { params, .. } => {
                    Some(DeployerNetwork::new(params, &mut rng)?)
                }
                _ => None,
            };
            let active_rule = deployer
                .as_ref()
                .and_then(DeployerNetwork::active_rule)
                .unwrap_or(RuleId(0));
            agents.push(AgentState {
                id,
                memory: PsMemory::new(p.clone()),
                deployer,
                active_rule,
            });
        }
        let mut swarm = Self {
            problem,
            initial_evaluations: config.n_agents as u64,
            config,
            rules,
            acr_params,
            agents,
            blackboard,
            rng,
            cycle: 0,
            cycle_evaluations: 0,
            history: Vec::new(),
            scratch,
        };
        swarm.record()?;
        Ok(swarm)
    }

    pub fn agents(&self) -> &[AgentState] {
        &self.agents
    }

    pub fn blackboard(&self) -> &Blackboard {
        &self.blackboard
    }

    pub fn config(&self) -> &SwarmConfig {
        &self.config
    }

    /// Cycles completed so far.
    pub fn cycle(&self) -> usize {
        self.cycle
    }

    /// Evaluations spent in learning cycles (initial population excluded).
    pub fn cycle_evaluations(&self) -> u64 {
        self.cycle_evaluations
    }

    pub fn initial_evaluations(&self) -> u64 {
        self.initial_evaluations
    }

    pub fn history(&self) -> &[CycleRecord] {
        &self.history
    }

    /// Rank of every agent's published best as a fraction of N (0 = best);
    /// ties rank by agent index.
    fn rank_fractions(&self) -> Vec<f64> {
        let cmp = self.blackboard.comparator();
        let published = &self.blackboard.published;
        let mut order: Vec<usize> = (0..published.len()).collect();
        order.sort_by(|&a, &b| {
            let (ga, gb) = (&published[a].goodness, &published[b].goodness);
            if cmp.strictly_better(ga, gb) {
                Ordering::Less
            } else if cmp.strictly_better(gb, ga) {
                Ordering::Greater
            } else {
                a.cmp(&b)
            }
        });
        let n = order.len() as f64;
        let mut fractions = vec![0.0; order.len()];
        for (rank, &agent) in order.iter().enumerate() {
            fractions[agent] = rank as f64 / n;
        }
        fractions
    }

    fn select_rule(&mut self, agent: usize, ranks: Option<&[f64]>) -> Result<RuleId> {
        let t = self.cycle;
        Ok(match &self.config.strategy {
            RuleStrategy::Fixed(_) => RuleId(0),
            RuleStrategy::Deps { .. } => deps_select(t),
            RuleStrategy::Random { weights, .. } => rc_select(weights, &mut self.rng)?,
            RuleStrategy::Adaptive { params, .. } => {
                let rank = ranks.map_or(0.0, |r| r[agent]);
                self.agents[agent]
                    .deployer
                    .as_mut()
                    .ok_or_else(|| Error::state("adaptive agent without a network"))?
                    .deploy_step(params, rank, &mut self.rng)?
            }
        })
    }

    /// Runs one learning cycle: every agent, in index order, generates and
    /// tests exactly one point; the relaxing threshold is updated afterwards.
    pub fn step_cycle(&mut self) -> Result<&CycleRecord> {
        self.cycle += 1;
        let needs_ranks = self
            .agents
            .iter()
            .any(|a| a.deployer.as_ref().is_some_and(DeployerNetwork::at_boundary));
        let ranks = needs_ranks.then(|| self.rank_fractions());
        for i in 0..self.agents.len() {
            let rule_id = self.select_rule(i, ranks.as_deref())?;
            self.agents[i].active_rule = rule_id;
            let rule = self.rules[rule_id.0];
            let x_new = {
                let g = self.blackboard.incumbent();
                let mem = &self.agents[i].memory;
                match &rule {
                    Rule::Ps(p) => ps_generate(mem, g, p, &mut self.rng),
                    Rule::De(d) => {
                        de_generate(&mem.p, g, &self.blackboard.published, d, &mut self.rng)?
                    }
                }
            };
            let gp = goodness_with(self.problem, &x_new, &mut self.scratch)?;
            self.cycle_evaluations += 1;
            let cmp = self.blackboard.comparator();
            test_update(
                &mut self.agents[i].memory,
                rule.kind(),
                KnowledgePoint::new(x_new, gp),
                &cmp,
                &mut self.blackboard.published[i],
            );
            self.blackboard.refresh_incumbent()?;
        }
        if let (Some(state), Some(params)) = (self.blackboard.acr, self.acr_params) {
            let next = acr_update(&state, &params, self.cycle, &self.blackboard.goodness())?;
            self.blackboard.acr = Some(next);
            self.blackboard.refresh_incumbent()?;
        }
        self.record()?;
        Ok(self.history.last().expect("just recorded"))
    }

    fn record(&mut self) -> Result<()> {
        let best = best_of(&self.blackboard.published, &Comparator::BASIC)?;
        self.history.push(CycleRecord {
            cycle: self.cycle,
            incumbent: self.blackboard.incumbent().goodness,
            best: self.blackboard.published[best].goodness,
            epsilon_r: self.blackboard.comparator().epsilon_r(),
        });
        Ok(())
    }

    /// Final result: the best published point under plain feasibility-first
    /// comparison, mapped into the box.
    pub fn finish(self) -> Result<RunResult> {
        let best = &self.blackboard.published[best_of(&self.blackboard.published, &Comparator::BASIC)?];
        Ok(RunResult {
            solution: pbh_map(&best.x, self.problem.bounds()),
            goodness: best.goodness,
            objective: self.problem.reported(best.goodness.f_obj),
            evaluations: self.cycle_evaluations,
            initial_evaluations: self.initial_evaluations,
            history: self.history,
            n_agents: self.config.n_agents,
            seed: self.config.seed,
        })
    }
}

/// Initializes a swarm and runs it for `config.max_cycles` cycles.
pub fn run(problem: &ProblemDef, config: SwarmConfig) -> Result<RunResult> {
    let cycles = config.max_cycles;
    let mut swarm = Swarm::init(problem, config)?;
    for _ in 0..cycles {
        swarm.step_cycle()?;
    }
    swarm.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::builtin;
    use crate::rules::{DeParams, PsParams};

    fn kp(f_obj: f64, f_con: f64) -> KnowledgePoint {
        KnowledgePoint::new(vec![f_obj], GoodnessPair::new(f_obj, f_con))
    }

    #[test]
    fn best_of_cases() {
        let c = Comparator::BASIC;
        assert_eq!(best_of(&[kp(3.0, 0.0)], &c).unwrap(), 0);
        assert_eq!(best_of(&[kp(1.0, 0.5), kp(9.0, 0.0), kp(0.0, 0.1)], &c).unwrap(), 1);
        assert_eq!(best_of(&[kp(2.0, 0.0), kp(2.0, 0.0), kp(2.0, 0.0)], &c).unwrap(), 0);
        assert!(matches!(best_of(&[], &c), Err(Error::State(_))));
    }

    fn deps() -> RuleStrategy {
        RuleStrategy::Deps {
            de: DeParams::with_cr(0.9).unwrap(),
            ps: PsParams::default(),
        }
    }

    #[test]
    fn initial_population_inside_box() {
        let p = builtin("G1").unwrap();
        let swarm = Swarm::init(&p, SwarmConfig::new(30, 10, deps()).with_seed(4)).unwrap();
        for point in swarm.blackboard().published() {
            for (v, b) in point.x.iter().zip(p.bounds()) {
                assert!(b.contains(*v));
            }
        }
        let inc = swarm.blackboard().incumbent().goodness;
        for point in swarm.blackboard().published() {
            assert!(Comparator::BASIC.better_or_equal(&inc, &point.goodness));
        }
    }

    #[test]
    fn too_few_agents_rejected() {
        let p = builtin("GP").unwrap();
        let r = Swarm::init(&p, SwarmConfig::new(1, 10, deps()));
        assert!(matches!(r, Err(Error::Config(_))));
    }

    #[test]
    fn zero_cycles_returns_best_initial_point() {
        let p = builtin("BR").unwrap();
        let config = SwarmConfig::new(8, 0, deps()).with_seed(2);
        let swarm = Swarm::init(&p, config.clone()).unwrap();
        let best = swarm.blackboard().incumbent().clone();
        let r = run(&p.fresh(), config).unwrap();
        assert_eq!(r.evaluations, 0);
        assert_eq!(r.solution, best.x);
        assert_eq!(r.history.len(), 1);
    }

    #[test]
    fn deps_runs_de_then_ps() {
        let p = builtin("GP").unwrap();
        let mut swarm = Swarm::init(&p, SwarmConfig::new(5, 4, deps())).unwrap();
        swarm.step_cycle().unwrap();
        assert!(swarm.agents().iter().all(|a| a.active_rule == RuleId(0)));
        swarm.step_cycle().unwrap();
        assert!(swarm.agents().iter().all(|a| a.active_rule == RuleId(1)));
    }

    #[test]
    fn relaxed_run_starts_at_max_violation() {
        let p = builtin("G11").unwrap();
        let config = SwarmConfig::new(10, 20, deps()).with_formulation(FormulationSpec::Relaxed(None));
        let swarm = Swarm::init(&p, config).unwrap();
        let max = swarm
            .blackboard()
            .published()
            .iter()
            .map(|k| k.goodness.f_con)
            .fold(0.0, f64::max);
        assert_eq!(swarm.blackboard().acr().unwrap().epsilon_r, max);
    }

    #[test]
    fn formulation_parsing() {
        assert_eq!("acr".parse::<FormulationSpec>().unwrap(), FormulationSpec::Relaxed(None));
        assert_eq!("BCH".parse::<FormulationSpec>().unwrap(), FormulationSpec::Basic);
        assert!("pbh".parse::<FormulationSpec>().is_err());
    }
}
