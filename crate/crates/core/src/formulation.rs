//! Problem-formulation rules: periodic boundary mapping, goodness
//! construction, feasibility-first comparison and adaptive constraint
//! relaxing.

use crate::error::{Error, Result};
use crate::goodness::{GoodnessPair, Preference};
use crate::problems::{Bounds, ProblemDef};

/// Maps `x` into the box by periodic wrapping. Coordinates already inside
/// their bounds are returned unchanged.
pub fn pbh_map(x: &[f64], bounds: &[Bounds]) -> Vec<f64> {
    x.iter().zip(bounds).map(|(&v, b)| wrap(v, b)).collect()
}

fn wrap(v: f64, b: &Bounds) -> f64 {
    let s = b.span();
    let z = if v < b.lower {
        b.upper - (b.lower - v).rem_euclid(s)
    } else if v > b.upper {
        b.lower + (v - b.upper).rem_euclid(s)
    } else {
        return v;
    };
    // rem_euclid can round up to `s` itself
    z.clamp(b.lower, b.upper)
}

/// Evaluates `x` at its in-box image: objective plus the sum of positive
/// constraint parts (all weights 1). One raw evaluation.
pub fn goodness(problem: &ProblemDef, x: &[f64]) -> Result<GoodnessPair> {
    let mut scratch = Vec::with_capacity(problem.constraint_count());
    goodness_with(problem, x, &mut scratch)
}

pub(crate) fn goodness_with(
    problem: &ProblemDef,
    x: &[f64],
    scratch: &mut Vec<f64>,
) -> Result<GoodnessPair> {
    let z = pbh_map(x, problem.bounds());
    let f_obj = problem.evaluate_into(&z, scratch)?;
    Ok(GoodnessPair::new(f_obj, violation(scratch)))
}

/// `sum_j max(0, g_j)`.
pub fn violation(g: &[f64]) -> f64 {
    g.iter().fold(0.0, |acc, &v| acc + v.max(0.0))
}

/// Feasibility-first lexicographic comparison.
pub fn bch_compare(a: &GoodnessPair, b: &GoodnessPair) -> Preference {
    if a.f_con < b.f_con || (a.f_con == b.f_con && a.f_obj <= b.f_obj) {
        Preference::FirstBetterOrEqual
    } else {
        Preference::SecondBetter
    }
}

/// Clamps the violation from below at `epsilon_r`: every point with
/// `f_con <= epsilon_r` is treated as equally feasible.
pub fn acr_apply(gp: &GoodnessPair, epsilon_r: f64) -> GoodnessPair {
    GoodnessPair {
        f_obj: gp.f_obj,
        f_con: gp.f_con.max(epsilon_r),
    }
}

/// The active comparison rule. `epsilon_r = 0` is plain feasibility-first
/// comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparator {
    epsilon_r: f64,
}

impl Comparator {
    pub const BASIC: Comparator = Comparator { epsilon_r: 0.0 };

    pub fn relaxed(epsilon_r: f64) -> Self {
        debug_assert!(epsilon_r >= 0.0);
        Self { epsilon_r }
    }

    pub fn epsilon_r(&self) -> f64 {
        self.epsilon_r
    }

    pub fn compare(&self, a: &GoodnessPair, b: &GoodnessPair) -> Preference {
        if self.epsilon_r == 0.0 {
            bch_compare(a, b)
        } else {
            bch_compare(&acr_apply(a, self.epsilon_r), &acr_apply(b, self.epsilon_r))
        }
    }

    /// `a` is at least as good as `b`.
    pub fn better_or_equal(&self, a: &GoodnessPair, b: &GoodnessPair) -> bool {
        self.compare(a, b).first_wins()
    }

    /// `a` is strictly better than `b`.
    pub fn strictly_better(&self, a: &GoodnessPair, b: &GoodnessPair) -> bool {
        !self.better_or_equal(b, a)
    }
}

/// Parameters of the relaxing threshold controller.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AcrParams {
    pub r_l: f64,
    pub r_u: f64,
    pub beta_l: f64,
    pub beta_u: f64,
    pub beta_f: f64,
    /// First cycle at which the forcing sub-rule may fire.
    pub t_th: usize,
}

impl AcrParams {
    /// Defaults for a run of `max_cycles` cycles (`t_th = T / 2`).
    pub fn for_horizon(max_cycles: usize) -> Self {
        Self {
            r_l: 0.25,
            r_u: 0.75,
            beta_l: 0.618,
            beta_u: 1.382,
            beta_f: 0.618,
            t_th: max_cycles / 2,
        }
    }

    pub fn validate(&self, max_cycles: usize) -> Result<()> {
        let ok = 0.0 <= self.r_l
            && self.r_l < self.r_u
            && self.r_u <= 1.0
            && 0.0 < self.beta_l
            && self.beta_l < 1.0
            && 1.0 < self.beta_u
            && self.beta_u < 1.0 / self.beta_l
            && 0.0 < self.beta_f
            && self.beta_f < 1.0
            && self.t_th <= max_cycles;
        if ok {
            Ok(())
        } else {
            Err(Error::config(format!("invalid relaxing parameters {self:?}")))
        }
    }
}

/// Which controller branch fired on the last update.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AcrBranch {
    Initial,
    Forcing,
    Tighten,
    Loosen,
    Hold,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AcrState {
    /// Current relaxing threshold.
    pub epsilon_r: f64,
    /// Published points with violation above `epsilon_r`.
    pub n_eps: usize,
    pub eps_min: f64,
    pub eps_max: f64,
    pub last_branch: AcrBranch,
}

impl AcrState {
    /// Initial state: the threshold starts at the largest published violation.
    pub fn initial(published: &[GoodnessPair]) -> Result<Self> {
        let (eps_min, eps_max) = violation_range(published)?;
        Ok(Self {
            epsilon_r: eps_max,
            n_eps: 0,
            eps_min,
            eps_max,
            last_branch: AcrBranch::Initial,
        })
    }

    pub fn comparator(&self) -> Comparator {
        Comparator::relaxed(self.epsilon_r)
    }
}

fn violation_range(published: &[GoodnessPair]) -> Result<(f64, f64)> {
    if published.is_empty() {
        return Err(Error::state("relaxing update needs a nonempty published set"));
    }
    Ok(published.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), gp| {
        (lo.min(gp.f_con), hi.max(gp.f_con))
    }))
}

/// One controller step after cycle `t`. Sub-rules are tried in order: forcing,
/// then tighten (ratio at or below `r_l`), then loosen (ratio at or above
/// `r_u`); otherwise the threshold is kept.
pub fn acr_update(
    state: &AcrState,
    params: &AcrParams,
    t: usize,
    published: &[GoodnessPair],
) -> Result<AcrState> {
    let (eps_min, eps_max) = violation_range(published)?;
    let n_eps = published
        .iter()
        .filter(|gp| gp.f_con > state.epsilon_r)
        .count();
    let ratio = n_eps as f64 / published.len() as f64;
    let (factor, branch) = if t >= params.t_th && eps_min > 0.0 {
        (params.beta_f, AcrBranch::Forcing)
    } else if ratio <= params.r_l {
        (params.beta_l, AcrBranch::Tighten)
    } else if ratio >= params.r_u {
        (params.beta_u, AcrBranch::Loosen)
    } else {
        (1.0, AcrBranch::Hold)
    };
    Ok(AcrState {
        epsilon_r: factor * state.epsilon_r,
        n_eps,
        eps_min,
        eps_max,
        last_branch: branch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::ScalarFn;
    use std::sync::Arc;

    fn gp(f_obj: f64, f_con: f64) -> GoodnessPair {
        GoodnessPair::new(f_obj, f_con)
    }

    fn box5(d: usize) -> Vec<Bounds> {
        vec![Bounds::new(-5.0, 5.0).unwrap(); d]
    }

    #[test]
    fn wrap_above_upper() {
        assert_eq!(pbh_map(&[7.0], &box5(1)), vec![-3.0]);
    }

    #[test]
    fn wrap_below_lower() {
        assert_eq!(pbh_map(&[-6.0], &box5(1)), vec![4.0]);
    }

    #[test]
    fn identity_inside_box() {
        let x = vec![-5.0, 0.3, 5.0];
        assert_eq!(pbh_map(&x, &box5(3)), x);
    }

    #[test]
    fn three_constraint_violation_sum() {
        let g: Vec<ScalarFn> = vec![
            Arc::new(|_: &[f64]| 0.2),
            Arc::new(|_: &[f64]| 0.3),
            Arc::new(|_: &[f64]| -1.0),
        ];
        let p = g.into_iter().fold(
            ProblemDef::new("v", box5(1), Arc::new(|x: &[f64]| x[0])).unwrap(),
            ProblemDef::with_constraint,
        );
        let gp = goodness(&p, &[9.0]).unwrap();
        assert_eq!(gp.f_con, 0.5);
        // evaluated at the wrapped point 9 -> -1
        assert_eq!(gp.f_obj, -1.0);
        assert_eq!(p.evaluations(), 1);
    }

    #[test]
    fn unconstrained_goodness_is_feasible() {
        let p = ProblemDef::new("u", box5(2), Arc::new(|x: &[f64]| x[0] * x[1])).unwrap();
        assert!(goodness(&p, &[3.0, 40.0]).unwrap().is_feasible());
    }

    #[test]
    fn feasibility_dominates_objective() {
        assert_eq!(bch_compare(&gp(100.0, 0.0), &gp(1.0, 0.1)), Preference::FirstBetterOrEqual);
        assert_eq!(bch_compare(&gp(1.0, 0.1), &gp(100.0, 0.0)), Preference::SecondBetter);
    }

    #[test]
    fn objective_breaks_equal_violation() {
        assert_eq!(bch_compare(&gp(1.0, 0.0), &gp(2.0, 0.0)), Preference::FirstBetterOrEqual);
        assert_eq!(bch_compare(&gp(2.0, 0.0), &gp(1.0, 0.0)), Preference::SecondBetter);
        let a = gp(3.0, 0.25);
        assert_eq!(bch_compare(&a, &a), Preference::FirstBetterOrEqual);
    }

    #[test]
    fn relaxing_clamp() {
        assert_eq!(acr_apply(&gp(1.0, 0.4), 0.0), gp(1.0, 0.4));
        assert_eq!(acr_apply(&gp(1.0, 0.001), 0.01).f_con, 0.01);
        // both inside the quasi-feasible region: objective decides
        let c = Comparator::relaxed(0.01);
        assert!(c.better_or_equal(&gp(1.0, 0.009), &gp(2.0, 0.0)));
        assert!(!Comparator::BASIC.better_or_equal(&gp(1.0, 0.009), &gp(2.0, 0.0)));
    }

    fn published(n: usize, violating: usize, level: f64) -> Vec<GoodnessPair> {
        (0..n)
            .map(|i| gp(0.0, if i < violating { level } else { 0.0 }))
            .collect()
    }

    fn state(eps: f64) -> AcrState {
        AcrState {
            epsilon_r: eps,
            n_eps: 0,
            eps_min: 0.0,
            eps_max: eps,
            last_branch: AcrBranch::Initial,
        }
    }

    #[test]
    fn tighten_when_few_points_exceed() {
        let params = AcrParams::for_horizon(100);
        let next = acr_update(&state(1.0), &params, 10, &published(10, 2, 2.0)).unwrap();
        assert_eq!(next.n_eps, 2);
        assert_eq!(next.epsilon_r, 0.618);
        assert_eq!(next.last_branch, AcrBranch::Tighten);
    }

    #[test]
    fn loosen_when_most_points_exceed() {
        let params = AcrParams::for_horizon(100);
        let next = acr_update(&state(1.0), &params, 10, &published(10, 8, 2.0)).unwrap();
        assert_eq!(next.epsilon_r, 1.382);
        assert_eq!(next.last_branch, AcrBranch::Loosen);
    }

    #[test]
    fn hold_between_ratios() {
        let params = AcrParams::for_horizon(100);
        let next = acr_update(&state(1.0), &params, 10, &published(10, 5, 2.0)).unwrap();
        assert_eq!(next.epsilon_r, 1.0);
        assert_eq!(next.last_branch, AcrBranch::Hold);
    }

    #[test]
    fn ratio_boundaries_are_inclusive() {
        let params = AcrParams::for_horizon(100);
        // 1/4 and 3/4 exactly
        let lo = acr_update(&state(1.0), &params, 1, &published(4, 1, 2.0)).unwrap();
        assert_eq!(lo.last_branch, AcrBranch::Tighten);
        let hi = acr_update(&state(1.0), &params, 1, &published(4, 3, 2.0)).unwrap();
        assert_eq!(hi.last_branch, AcrBranch::Loosen);
    }

    #[test]
    fn forcing_overrides_ratio() {
        let params = AcrParams::for_horizon(100);
        let all_bad: Vec<_> = (0..10).map(|_| gp(0.0, 3.0)).collect();
        let next = acr_update(&state(1.0), &params, 50, &all_bad).unwrap();
        assert_eq!(next.last_branch, AcrBranch::Forcing);
        assert_eq!(next.epsilon_r, 0.618);
        // a single feasible point disables forcing
        let next = acr_update(&state(1.0), &params, 50, &published(10, 9, 3.0)).unwrap();
        assert_eq!(next.last_branch, AcrBranch::Loosen);
    }

    #[test]
    fn initial_threshold_is_max_violation() {
        let s = AcrState::initial(&[gp(0.0, 0.5), gp(1.0, 2.5), gp(2.0, 0.0)]).unwrap();
        assert_eq!(s.epsilon_r, 2.5);
        assert_eq!(s.eps_min, 0.0);
    }

    #[test]
    fn empty_published_set_is_a_state_error() {
        let params = AcrParams::for_horizon(10);
        assert!(matches!(AcrState::initial(&[]), Err(Error::State(_))));
        assert!(matches!(acr_update(&state(1.0), &params, 1, &[]), Err(Error::State(_))));
    }

    #[test]
    fn parameter_validation() {
        assert!(AcrParams::for_horizon(100).validate(100).is_ok());
        let mut p = AcrParams::for_horizon(100);
        p.beta_u = 2.0; // > 1 / 0.618
        assert!(p.validate(100).is_err());
        let mut p = AcrParams::for_horizon(100);
        p.t_th = 101;
        assert!(p.validate(100).is_err());
    }
}
