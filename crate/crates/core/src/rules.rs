//! Generate-and-test rules (particle swarm and differential evolution), the
//! shared test step, and the symbolic macro combinators that pick a rule per
//! cycle.

use std::fmt;
use std::str::FromStr;

use crate::deployer::DeployerParams;
use crate::error::{Error, Result};
use crate::formulation::Comparator;
use crate::goodness::KnowledgePoint;
use crate::random::UniformSource;

/// Particle swarm coefficients with the derived constriction factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsParams {
    c1: f64,
    c2: f64,
    cf: f64,
}

impl PsParams {
    pub fn new(c1: f64, c2: f64) -> Result<Self> {
        let phi = c1 + c2;
        if !(c1 >= 0.0 && c2 >= 0.0 && phi > 4.0) {
            return Err(Error::config(format!(
                "particle swarm needs c1 + c2 > 4, got {c1} + {c2}"
            )));
        }
        Ok(Self {
            c1,
            c2,
            cf: constriction_factor(phi),
        })
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    pub fn cf(&self) -> f64 {
        self.cf
    }
}

impl Default for PsParams {
    fn default() -> Self {
        Self::new(2.05, 2.05).expect("default coefficients are valid")
    }
}

/// `2 / (sqrt(phi (phi - 4)) + phi - 2)`.
pub fn constriction_factor(phi: f64) -> f64 {
    2.0 / ((phi * (phi - 4.0)).sqrt() + phi - 2.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeParams {
    pub cr: f64,
    pub sf: f64,
    pub n_v: usize,
}

impl DeParams {
    /// Crossover rate `cr` with the default two difference vectors and
    /// scale factor `1 / n_v`.
    pub fn with_cr(cr: f64) -> Result<Self> {
        Self::new(cr, 0.5, 2)
    }

    pub fn new(cr: f64, sf: f64, n_v: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&cr) {
            return Err(Error::config(format!("CR must lie in [0, 1], got {cr}")));
        }
        if !(sf > 0.0 && sf < 1.2) {
            return Err(Error::config(format!("SF must lie in (0, 1.2), got {sf}")));
        }
        if n_v == 0 {
            return Err(Error::config("NV must be positive"));
        }
        Ok(Self { cr, sf, n_v })
    }
}

/// Declarative memory of one agent: the particle's previous and current
/// positions and its personal best (the public part).
#[derive(Debug, Clone, PartialEq)]
pub struct PsMemory {
    pub o_ps: Vec<f64>,
    pub x_ps: Vec<f64>,
    pub p: KnowledgePoint,
}

impl PsMemory {
    /// Memory for a freshly sampled point; the previous position equals the
    /// current one, so the initial velocity is zero.
    pub fn new(p: KnowledgePoint) -> Self {
        Self {
            o_ps: p.x.clone(),
            x_ps: p.x.clone(),
            p,
        }
    }
}

/// Constricted particle swarm step:
/// `x' = x + cf * (v + c1 * U * (p - x) + c2 * U * (g - x))`, `v = x - o`,
/// with fresh draws per dimension and per term.
pub fn ps_generate(
    mem: &PsMemory,
    g: &KnowledgePoint,
    params: &PsParams,
    rng: &mut impl UniformSource,
) -> Vec<f64> {
    mem.x_ps
        .iter()
        .zip(&mem.o_ps)
        .zip(mem.p.x.iter().zip(&g.x))
        .map(|((&x, &o), (&p, &gd))| {
            let v = x - o;
            let r1 = rng.uniform_real();
            let r2 = rng.uniform_real();
            x + params.cf * (v + params.c1 * r1 * (p - x) + params.c2 * r2 * (gd - x))
        })
        .collect()
}

/// Differential evolution step around the incumbent; see
/// [`de_generate_traced`].
pub fn de_generate(
    p_self: &KnowledgePoint,
    g: &KnowledgePoint,
    pool: &[KnowledgePoint],
    params: &DeParams,
    rng: &mut impl UniformSource,
) -> Result<Vec<f64>> {
    de_generate_traced(p_self, g, pool, params, rng).map(|(x, _)| x)
}

/// Starts from `p_self` and, for each dimension picked by crossover (and
/// always the forced dimension), assigns `g_d + sf * delta_d` where `delta`
/// sums `n_v` differences of randomly chosen pool members. Also returns which
/// dimensions were assigned.
pub fn de_generate_traced(
    p_self: &KnowledgePoint,
    g: &KnowledgePoint,
    pool: &[KnowledgePoint],
    params: &DeParams,
    rng: &mut impl UniformSource,
) -> Result<(Vec<f64>, Vec<bool>)> {
    if pool.len() < 2 {
        return Err(Error::config(format!(
            "differential evolution needs at least 2 published points, got {}",
            pool.len()
        )));
    }
    let dim = p_self.x.len();
    let mut delta = vec![0.0; dim];
    for _ in 0..params.n_v {
        let a = &pool[rng.uniform_index(pool.len())?].x;
        let b = &pool[rng.uniform_index(pool.len())?].x;
        for ((dd, ad), bd) in delta.iter_mut().zip(a).zip(b) {
            *dd += ad - bd;
        }
    }
    let forced = rng.uniform_index(dim)?;
    let mut x = p_self.x.clone();
    let mut assigned = vec![false; dim];
    for d in 0..dim {
        if rng.uniform_real() < params.cr || d == forced {
            x[d] = g.x[d] + params.sf * delta[d];
            assigned[d] = true;
        }
    }
    Ok((x, assigned))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind {
    ParticleSwarm,
    DifferentialEvolution,
}

/// The test step shared by both rules. A particle swarm step always shifts
/// the positional memory; the personal best is replaced when the candidate is
/// at least as good. The (possibly new) personal best is written to
/// `published`. Returns whether the personal best changed.
pub fn test_update(
    mem: &mut PsMemory,
    kind: RuleKind,
    candidate: KnowledgePoint,
    comparator: &Comparator,
    published: &mut KnowledgePoint,
) -> bool {
    let improved = comparator.better_or_equal(&candidate.goodness, &mem.p.goodness);
    match kind {
        RuleKind::ParticleSwarm => {
            std::mem::swap(&mut mem.o_ps, &mut mem.x_ps);
            mem.x_ps.clear();
            mem.x_ps.extend_from_slice(&candidate.x);
        }
        RuleKind::DifferentialEvolution => {}
    }
    if improved {
        mem.p = candidate;
        published.clone_from(&mem.p);
    }
    improved
}

/// A concrete generate-and-test rule with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Rule {
    Ps(PsParams),
    De(DeParams),
}

impl Rule {
    pub fn kind(&self) -> RuleKind {
        match self {
            Rule::Ps(_) => RuleKind::ParticleSwarm,
            Rule::De(_) => RuleKind::DifferentialEvolution,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Ps(p) if *p == PsParams::default() => write!(f, "ps"),
            Rule::Ps(p) => write!(f, "ps:C1={};C2={}", p.c1, p.c2),
            Rule::De(d) if d.sf == 0.5 && d.n_v == 2 => write!(f, "de:CR={}", d.cr),
            Rule::De(d) => write!(f, "de:CR={};SF={};NV={}", d.cr, d.sf, d.n_v),
        }
    }
}

/// Index of a rule within a strategy's rule list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RuleId(pub usize);

/// How an agent picks its rule each cycle.
#[derive(Debug, Clone, PartialEq)]
pub enum RuleStrategy {
    Fixed(Rule),
    /// Differential evolution on odd cycles, particle swarm on even ones,
    /// sharing one personal best.
    Deps { de: DeParams, ps: PsParams },
    /// Independent weighted draw every cycle.
    Random { rules: Vec<Rule>, weights: Vec<f64> },
    /// Per-agent network with extremal-dynamics selection.
    Adaptive { rules: Vec<Rule>, params: DeployerParams },
}

impl RuleStrategy {
    /// The rules addressable by [`RuleId`] under this strategy.
    pub fn rules(&self) -> Vec<Rule> {
        match self {
            RuleStrategy::Fixed(r) => vec![*r],
            RuleStrategy::Deps { de, ps } => vec![Rule::De(*de), Rule::Ps(*ps)],
            RuleStrategy::Random { rules, .. } | RuleStrategy::Adaptive { rules, .. } => {
                rules.clone()
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            RuleStrategy::Random { rules, weights } => {
                if rules.is_empty() || rules.len() != weights.len() {
                    return Err(Error::config("random combination needs one weight per rule"));
                }
                check_weights(weights)
            }
            RuleStrategy::Adaptive { rules, params } => {
                if rules.len() != params.n_k {
                    return Err(Error::config(format!(
                        "network has {} output neurons for {} rules",
                        params.n_k,
                        rules.len()
                    )));
                }
                params.validate()
            }
            _ => Ok(()),
        }
    }

    /// The eleven differential evolution rules with CR = 0.0, 0.1, ..., 1.0.
    pub fn cr_sweep() -> Vec<Rule> {
        (0..=10)
            .map(|k| Rule::De(DeParams::with_cr(k as f64 / 10.0).expect("CR in range")))
            .collect()
    }
}

/// DE on odd cycles, PS on even cycles (`t` counts from 1).
pub fn deps_select(t: usize) -> RuleId {
    if t % 2 == 1 {
        RuleId(0)
    } else {
        RuleId(1)
    }
}

fn check_weights(weights: &[f64]) -> Result<()> {
    if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
        return Err(Error::argument("rule weights must be finite and nonnegative"));
    }
    if weights.iter().sum::<f64>().partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::argument("rule weights must not all be zero"));
    }
    Ok(())
}

/// Picks rule `k` with probability `weights[k] / sum(weights)`.
pub fn rc_select(weights: &[f64], rng: &mut impl UniformSource) -> Result<RuleId> {
    check_weights(weights)?;
    let total: f64 = weights.iter().sum();
    let target = rng.uniform_real() * total;
    let mut acc = 0.0;
    let mut last = 0;
    for (k, &w) in weights.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        acc += w;
        last = k;
        if target < acc {
            return Ok(RuleId(k));
        }
    }
    Ok(RuleId(last))
}

impl fmt::Display for RuleStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(f: &mut fmt::Formatter<'_>, rules: &[Rule], weights: Option<&[f64]>) -> fmt::Result {
            if rules == RuleStrategy::cr_sweep().as_slice()
                && weights.is_none_or(|w| w.iter().all(|&v| v == w[0]))
            {
                return write!(f, "[de:CR=*]");
            }
            write!(f, "[")?;
            for (k, r) in rules.iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{r}")?;
                if let Some(w) = weights {
                    if w.iter().any(|&v| v != w[0]) {
                        write!(f, "@{}", w[k])?;
                    }
                }
            }
            write!(f, "]")
        }
        match self {
            RuleStrategy::Fixed(r) => write!(f, "{r}"),
            RuleStrategy::Deps { de, ps } => {
                write!(f, "deps:CR={}", de.cr)?;
                if de.sf != 0.5 || de.n_v != 2 {
                    write!(f, ";SF={};NV={}", de.sf, de.n_v)?;
                }
                if *ps != PsParams::default() {
                    write!(f, ";C1={};C2={}", ps.c1, ps.c2)?;
                }
                Ok(())
            }
            RuleStrategy::Random { rules, weights } => {
                write!(f, "rc:")?;
                list(f, rules, Some(weights))
            }
            RuleStrategy::Adaptive { rules, params } => {
                write!(f, "nn:")?;
                list(f, rules, None)?;
                let d = DeployerParams::for_rules(rules.len());
                if params != &d {
                    write!(
                        f,
                        ";NI={};NJ={};TL={};RW={}",
                        params.n_i, params.n_j, params.t_l, params.r_w
                    )?;
                }
                Ok(())
            }
        }
    }
}

fn parse_params(text: &str) -> Result<Vec<(String, f64)>> {
    text.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|kv| {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::config(format!("expected KEY=VALUE, got `{kv}`")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::config(format!("bad number in `{kv}`")))?;
            Ok((k.trim().to_ascii_uppercase(), v))
        })
        .collect()
}

fn take(params: &mut Vec<(String, f64)>, key: &str) -> Option<f64> {
    let pos = params.iter().position(|(k, _)| k == key)?;
    Some(params.remove(pos).1)
}

fn reject_leftovers(params: &[(String, f64)], what: &str) -> Result<()> {
    match params.first() {
        Some((k, _)) => Err(Error::config(format!("unknown parameter `{k}` for {what}"))),
        None => Ok(()),
    }
}

fn de_from(params: &mut Vec<(String, f64)>, default_cr: Option<f64>) -> Result<DeParams> {
    let cr = take(params, "CR")
        .or(default_cr)
        .ok_or_else(|| Error::config("differential evolution needs CR"))?;
    let n_v = take(params, "NV").unwrap_or(2.0);
    if n_v < 1.0 || n_v.fract() != 0.0 {
        return Err(Error::config(format!("NV must be a positive integer, got {n_v}")));
    }
    let sf = take(params, "SF").unwrap_or(1.0 / n_v);
    DeParams::new(cr, sf, n_v as usize)
}

fn ps_from(params: &mut Vec<(String, f64)>) -> Result<PsParams> {
    let c1 = take(params, "C1").unwrap_or(2.05);
    let c2 = take(params, "C2").unwrap_or(2.05);
    PsParams::new(c1, c2)
}

/// Parses one rule item; `de:CR=*` expands to the CR sweep.
fn parse_rule_items(item: &str) -> Result<Vec<Rule>> {
    let (head, rest) = item.split_once(':').unwrap_or((item, ""));
    match head.trim().to_ascii_lowercase().as_str() {
        "ps" => {
            let mut p = parse_params(rest)?;
            let r = ps_from(&mut p)?;
            reject_leftovers(&p, "ps")?;
            Ok(vec![Rule::Ps(r)])
        }
        "de" if rest.trim().eq_ignore_ascii_case("CR=*") => Ok(RuleStrategy::cr_sweep()),
        "de" => {
            let mut p = parse_params(rest)?;
            let r = de_from(&mut p, None)?;
            reject_leftovers(&p, "de")?;
            Ok(vec![Rule::De(r)])
        }
        other => Err(Error::config(format!("unknown rule `{other}`"))),
    }
}

/// Splits `[a,b,...]rest` into items and the text following `]`.
fn split_list(text: &str) -> Result<(Vec<&str>, &str)> {
    let text = text.trim();
    if text.is_empty() {
        return Ok((vec!["de:CR=*"], ""));
    }
    let inner = text
        .strip_prefix('[')
        .ok_or_else(|| Error::config(format!("expected `[rule,...]`, got `{text}`")))?;
    let close = inner
        .find(']')
        .ok_or_else(|| Error::config("unterminated rule list"))?;
    let items = inner[..close]
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect::<Vec<_>>();
    if items.is_empty() {
        return Err(Error::config("empty rule list"));
    }
    Ok((items, &inner[close + 1..]))
}

impl FromStr for RuleStrategy {
    type Err = Error;

    /// Accepted forms: `ps`, `ps:C1=..;C2=..`, `de:CR=0.9[;SF=..;NV=..]`,
    /// `deps:CR=0.1`, `rc:[rule@weight,...]`, `nn:[rule,...][;NI=..;NJ=..;TL=..;RW=..]`.
    /// `de:CR=*` inside a list stands for the eleven-rule CR sweep; a bare
    /// `rc` or `nn` uses that sweep.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, rest) = s.split_once(':').unwrap_or((s, ""));
        match head.to_ascii_lowercase().as_str() {
            "ps" | "de" => {
                let rules = parse_rule_items(s)?;
                match rules.as_slice() {
                    [r] => Ok(RuleStrategy::Fixed(*r)),
                    _ => Err(Error::config("`de:CR=*` is only valid inside rc/nn lists")),
                }
            }
            "deps" => {
                let mut p = parse_params(rest)?;
                let de = de_from(&mut p, None)?;
                let ps = ps_from(&mut p)?;
                reject_leftovers(&p, "deps")?;
                Ok(RuleStrategy::Deps { de, ps })
            }
            "rc" => {
                let (items, tail) = split_list(rest)?;
                if !tail.trim().is_empty() {
                    return Err(Error::config(format!("unexpected `{tail}` after rc list")));
                }
                let mut rules = Vec::new();
                let mut weights = Vec::new();
                for item in items {
                    let (rule, w) = match item.rsplit_once('@') {
                        Some((r, w)) => (
                            r,
                            w.trim()
                                .parse::<f64>()
                                .map_err(|_| Error::config(format!("bad weight in `{item}`")))?,
                        ),
                        None => (item, 1.0),
                    };
                    for r in parse_rule_items(rule)? {
                        rules.push(r);
                        weights.push(w);
                    }
                }
                let strategy = RuleStrategy::Random { rules, weights };
                strategy.validate()?;
                Ok(strategy)
            }
            "nn" => {
                let (items, tail) = split_list(rest)?;
                let mut rules = Vec::new();
                for item in items {
                    rules.extend(parse_rule_items(item)?);
                }
                let mut p = parse_params(tail)?;
                let mut params = DeployerParams::for_rules(rules.len());
                if let Some(v) = take(&mut p, "NI") {
                    params.n_i = v as usize;
                }
                if let Some(v) = take(&mut p, "NJ") {
                    params.n_j = v as usize;
                }
                if let Some(v) = take(&mut p, "TL") {
                    params.t_l = v as usize;
                }
                if let Some(v) = take(&mut p, "RW") {
                    params.r_w = v;
                }
                reject_leftovers(&p, "nn")?;
                let strategy = RuleStrategy::Adaptive { rules, params };
                strategy.validate()?;
                Ok(strategy)
            }
            other => Err(Error::config(format!("unknown rule strategy `{other}`"))),
        }
    }
}
