//! Subsymbolic rule deployment: a two-layer network whose winner-take-all
//! firing picks an agent's rule, with long-term depression of the active
//! path when the agent falls into the worst-ranked fraction of the swarm.

use crate::error::{Error, Result};
use crate::random::UniformSource;
use crate::rules::RuleId;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeployerParams {
    /// Input neurons. They carry no information; one is picked at random per
    /// firing.
    pub n_i: usize,
    pub n_j: usize,
    /// Output neurons, one per candidate rule.
    pub n_k: usize,
    /// Cycles a selected rule stays active.
    pub t_l: usize,
    /// Worst fraction of agents whose active path gets depressed.
    pub r_w: f64,
}

impl DeployerParams {
    /// Defaults (3 inputs, 20 hidden, 100-cycle interval, worst 20%) for
    /// `n_k` rules.
    pub fn for_rules(n_k: usize) -> Self {
        Self {
            n_i: 3,
            n_j: 20,
            n_k,
            t_l: 100,
            r_w: 0.2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_i == 0 || self.n_j == 0 || self.n_k == 0 {
            return Err(Error::config("network layers must be nonempty"));
        }
        if self.t_l == 0 {
            return Err(Error::config("redeploy interval must be at least one cycle"));
        }
        if !(self.r_w > 0.0 && self.r_w < 1.0) {
            return Err(Error::config(format!("worse ratio must lie in (0, 1), got {}", self.r_w)));
        }
        Ok(())
    }
}

/// The firing chain input -> hidden -> output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ActivePath {
    pub input: usize,
    pub hidden: usize,
    pub output: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeployerNetwork {
    /// `w1[j][i]`: input `i` to hidden `j`.
    pub w1: Vec<Vec<f64>>,
    /// `w2[k][j]`: hidden `j` to output `k`.
    pub w2: Vec<Vec<f64>>,
    active_path: Option<ActivePath>,
    cycles_remaining: usize,
    t_l: usize,
}

impl DeployerNetwork {
    /// Random weights in `[0, 1)`, then an initial firing.
    pub fn new(params: &DeployerParams, rng: &mut impl UniformSource) -> Result<Self> {
        params.validate()?;
        let w1 = (0..params.n_j)
            .map(|_| (0..params.n_i).map(|_| rng.uniform_real()).collect())
            .collect();
        let w2 = (0..params.n_k)
            .map(|_| (0..params.n_j).map(|_| rng.uniform_real()).collect())
            .collect();
        let mut net = Self::from_weights(w1, w2, params.t_l)?;
        net.fire(rng)?;
        Ok(net)
    }

    /// Network with explicit weights and no active path yet.
    pub fn from_weights(w1: Vec<Vec<f64>>, w2: Vec<Vec<f64>>, t_l: usize) -> Result<Self> {
        let n_j = w1.len();
        let n_i = w1.first().map_or(0, Vec::len);
        if n_j == 0 || n_i == 0 || w1.iter().any(|r| r.len() != n_i) {
            return Err(Error::argument("w1 must be a nonempty N_J x N_I matrix"));
        }
        if w2.is_empty() || w2.iter().any(|r| r.len() != n_j) {
            return Err(Error::argument("w2 must be a nonempty N_K x N_J matrix"));
        }
        Ok(Self {
            w1,
            w2,
            active_path: None,
            cycles_remaining: 0,
            t_l: t_l.max(1),
        })
    }

    pub fn active_path(&self) -> Option<ActivePath> {
        self.active_path
    }

    pub fn active_rule(&self) -> Option<RuleId> {
        self.active_path.map(|p| RuleId(p.output))
    }

    pub fn cycles_remaining(&self) -> usize {
        self.cycles_remaining
    }

    /// True when the next [`deploy_step`](Self::deploy_step) starts a new interval.
    pub fn at_boundary(&self) -> bool {
        self.cycles_remaining == 0
    }

    /// Picks a random input, then follows the strongest synapse through each
    /// layer. Ties go to the lowest index.
    pub fn fire(&mut self, rng: &mut impl UniformSource) -> Result<RuleId> {
        let input = rng.uniform_index(self.w1[0].len())?;
        let hidden = argmax(self.w1.iter().map(|row| row[input]));
        let output = argmax(self.w2.iter().map(|row| row[hidden]));
        self.active_path = Some(ActivePath {
            input,
            hidden,
            output,
        });
        self.cycles_remaining = self.t_l;
        Ok(RuleId(output))
    }

    /// Weakens both synapses of the active path by `xi`. Weights may go
    /// negative.
    pub fn depress(&mut self, xi: f64) -> Result<()> {
        let path = self
            .active_path
            .ok_or_else(|| Error::state("no active path to depress"))?;
        self.w1[path.hidden][path.input] -= xi;
        self.w2[path.output][path.hidden] -= xi;
        Ok(())
    }

    /// Rule for the coming cycle. At an interval boundary an agent ranked in
    /// the worst `r_w` fraction (`rank_fraction` is `rank / N`, 0 = best) has
    /// its path depressed by one uniform draw, then the network refires.
    pub fn deploy_step(
        &mut self,
        params: &DeployerParams,
        rank_fraction: f64,
        rng: &mut impl UniformSource,
    ) -> Result<RuleId> {
        if self.active_path.is_none() {
            self.fire(rng)?;
        } else if self.at_boundary() {
            if rank_fraction >= 1.0 - params.r_w {
                let xi = rng.uniform_real();
                self.depress(xi)?;
            }
            self.fire(rng)?;
        }
        self.cycles_remaining -= 1;
        Ok(self.active_rule().expect("fired above"))
    }
}

fn argmax(values: impl Iterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_v = f64::NEG_INFINITY;
    for (k, v) in values.enumerate() {
        if v > best_v {
            best = k;
            best_v = v;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::testing::ScriptedSource;
    use crate::random::RngStream;

    fn net(w1: Vec<Vec<f64>>, w2: Vec<Vec<f64>>, t_l: usize) -> DeployerNetwork {
        DeployerNetwork::from_weights(w1, w2, t_l).unwrap()
    }

    #[test]
    fn fire_follows_strongest_synapses() {
        let mut n = net(vec![vec![0.9], vec![0.1]], vec![vec![0.2, 0.8], vec![0.7, 0.1]], 5);
        let mut src = ScriptedSource::default();
        assert_eq!(n.fire(&mut src).unwrap(), RuleId(1));
        assert_eq!(
            n.active_path(),
            Some(ActivePath {
                input: 0,
                hidden: 0,
                output: 1
            })
        );
        assert_eq!(n.cycles_remaining(), 5);
    }

    #[test]
    fn ties_go_to_lowest_index() {
        let mut n = net(vec![vec![0.5]; 4], vec![vec![0.5; 4]; 3], 1);
        assert_eq!(n.fire(&mut ScriptedSource::default()).unwrap(), RuleId(0));
        assert_eq!(n.active_path().unwrap().hidden, 0);
    }

    #[test]
    fn fire_reads_only_the_traversed_columns() {
        let w1 = vec![vec![0.9], vec![0.1]];
        let mut w2 = vec![vec![0.2, 0.8], vec![0.7, 0.1]];
        let mut a = net(w1.clone(), w2.clone(), 1);
        // poison the column of the hidden neuron that does not fire
        w2[0][1] = f64::NAN;
        w2[1][1] = 1e9;
        let mut b = net(w1, w2, 1);
        let mut src = ScriptedSource::default();
        assert_eq!(a.fire(&mut src).unwrap(), b.fire(&mut src).unwrap());
    }

    #[test]
    fn depression_subtracts_from_both_edges() {
        let mut n = net(vec![vec![0.5], vec![0.1]], vec![vec![0.5, 0.3], vec![0.1, 0.3]], 1);
        n.fire(&mut ScriptedSource::default()).unwrap();
        let before = n.clone();
        n.depress(0.0).unwrap();
        assert_eq!(n, before);
        n.depress(0.3).unwrap();
        assert!((n.w1[0][0] - 0.2).abs() < 1e-15);
        assert!((n.w2[0][0] - 0.2).abs() < 1e-15);
        assert_eq!(n.w1[1][0], 0.1);
    }

    #[test]
    fn depress_without_path_is_a_state_error() {
        let mut n = net(vec![vec![0.5]], vec![vec![0.5]], 1);
        assert!(matches!(n.depress(0.1), Err(Error::State(_))));
    }

    #[test]
    fn repeated_depression_abandons_the_path() {
        let mut n = net(vec![vec![0.9], vec![0.4]], vec![vec![0.8, 0.1], vec![0.3, 0.6]], 1);
        let mut src = ScriptedSource::default();
        assert_eq!(n.fire(&mut src).unwrap(), RuleId(0));
        let first = n.active_path().unwrap();
        let mut steps = 0;
        while n.fire(&mut src).unwrap() == RuleId(0) && n.active_path() == Some(first) {
            n.depress(0.1).unwrap();
            steps += 1;
            assert!(steps < 100);
        }
        assert_ne!(n.active_path(), Some(first));
        // hidden 0 drops below hidden 1 after six depressions, so the output
        // now follows hidden 1's strongest synapse
        assert_eq!(n.active_path().unwrap().hidden, 1);
        assert_eq!(n.active_rule(), Some(RuleId(1)));
    }

    #[test]
    fn rule_is_constant_within_interval() {
        let params = DeployerParams {
            n_i: 3,
            n_j: 6,
            n_k: 4,
            t_l: 7,
            r_w: 0.2,
        };
        let mut rng = RngStream::new(3);
        let mut n = DeployerNetwork::new(&params, &mut rng).unwrap();
        let mut rules = Vec::new();
        for _ in 0..70 {
            rules.push(n.deploy_step(&params, 0.95, &mut rng).unwrap());
        }
        for chunk in rules.chunks(7) {
            assert!(chunk.iter().all(|r| *r == chunk[0]));
        }
    }

    #[test]
    fn successful_agent_keeps_weights_and_rule() {
        let params = DeployerParams {
            n_i: 1,
            n_j: 5,
            n_k: 3,
            t_l: 4,
            r_w: 0.2,
        };
        let mut rng = RngStream::new(21);
        let mut n = DeployerNetwork::new(&params, &mut rng).unwrap();
        let weights = (n.w1.clone(), n.w2.clone());
        let first = n.deploy_step(&params, 0.0, &mut rng).unwrap();
        for _ in 0..40 {
            assert_eq!(n.deploy_step(&params, 0.5, &mut rng).unwrap(), first);
        }
        assert_eq!((n.w1.clone(), n.w2.clone()), weights);
    }

    #[test]
    fn worst_agent_is_depressed_at_boundary() {
        let params = DeployerParams {
            n_i: 1,
            n_j: 2,
            n_k: 2,
            t_l: 2,
            r_w: 0.2,
        };
        let mut n = net(vec![vec![0.9], vec![0.1]], vec![vec![0.2, 0.8], vec![0.7, 0.1]], 2);
        let mut src = ScriptedSource::constant(0.5);
        n.fire(&mut src).unwrap();
        n.deploy_step(&params, 0.9, &mut src).unwrap();
        n.deploy_step(&params, 0.9, &mut src).unwrap();
        assert_eq!(n.w1[0][0], 0.9);
        n.deploy_step(&params, 0.9, &mut src).unwrap();
        // path was input 0 -> hidden 0 -> output 1
        assert!((n.w1[0][0] - 0.4).abs() < 1e-15);
        assert!((n.w2[1][0] - 0.2).abs() < 1e-15);
        assert_eq!(n.w2[0][0], 0.2);
    }

    #[test]
    fn rule_sequence_is_seed_deterministic() {
        let params = DeployerParams::for_rules(11);
        let run = |seed| {
            let mut rng = RngStream::new(seed);
            let mut n = DeployerNetwork::new(&params, &mut rng).unwrap();
            (0..1000)
                .map(|t| n.deploy_step(&params, (t % 10) as f64 / 10.0, &mut rng).unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(run(5), run(5));
    }

    #[test]
    fn invalid_params() {
        let mut p = DeployerParams::for_rules(3);
        p.r_w = 1.0;
        assert!(p.validate().is_err());
        let mut p = DeployerParams::for_rules(3);
        p.t_l = 0;
        assert!(p.validate().is_err());
        assert!(DeployerParams::for_rules(0).validate().is_err());
    }
}
