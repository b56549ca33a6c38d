//! Brute-force reference implementations used to cross-check the fast
//! paths: a naive robustness recursion, shift-enumeration temporal
//! robustness, finite-horizon value iteration on the explicit tau-MDP, and
//! exact robust-probability computation by outcome-tree enumeration.
//!
//! These are compiled into the library so the `oracle-check` command can
//! reach them on small instances, but the shipped training and evaluation
//! paths never call them.

use crate::env::{tau_init, tau_shift, ExplicitTauMdp, GridWorld, TauState, ACTIONS};
use crate::learn::{Policy, TabularPolicy};
use crate::stl::{temporal_robustness, Cmp, Error as StlError, Formula, Signal, TaskSpec};
use std::collections::HashMap;

/// Leaf-count guard for exact outcome enumeration.
pub const MAX_ENUM_LEAVES: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("outcome enumeration would exceed {limit} leaves ({estimate} estimated)")]
    EnumerationGuard { limit: usize, estimate: f64 },
    #[error(transparent)]
    Stl(#[from] StlError),
}

fn padded<'a>(s: &'a Signal, t: i64) -> &'a [f64] {
    // same padding rule as Signal::at, spelled out for independence
    if t < 0 {
        s.samples().first().unwrap()
    } else if t as usize >= s.len() {
        s.samples().last().unwrap()
    } else {
        &s.samples()[t as usize]
    }
}

/// Direct transcription of the robustness recursion, kept free of the main
/// monitor's helpers so the two can be compared exactly.
pub fn naive_robustness(f: &Formula, s: &Signal, t: i64) -> Result<f64, StlError> {
    match f {
        Formula::True => Ok(crate::stl::TRUE_ROBUSTNESS),
        Formula::Pred { var, cmp, value } => {
            let point = padded(s, t);
            if *var >= point.len() {
                return Err(StlError::CoordinateOutOfRange {
                    var: *var,
                    dim: s.dim(),
                });
            }
            Ok(match cmp {
                Cmp::Lt => value - point[*var],
                Cmp::Gt => point[*var] - value,
            })
        }
        Formula::InRegion { name, region } => {
            let r = region
                .as_ref()
                .ok_or_else(|| StlError::UnresolvedRegion(name.clone()))?;
            let point = padded(s, t);
            if point.len() < 2 {
                return Err(StlError::CoordinateOutOfRange {
                    var: 1,
                    dim: s.dim(),
                });
            }
            let mut margin = point[0] - r.lo[0];
            for candidate in [r.hi[0] - point[0], point[1] - r.lo[1], r.hi[1] - point[1]] {
                if candidate < margin {
                    margin = candidate;
                }
            }
            Ok(margin)
        }
        Formula::Not(sub) => Ok(-naive_robustness(sub, s, t)?),
        Formula::And(a, b) => {
            let (ra, rb) = (naive_robustness(a, s, t)?, naive_robustness(b, s, t)?);
            Ok(if ra < rb { ra } else { rb })
        }
        Formula::Or(a, b) => {
            let (ra, rb) = (naive_robustness(a, s, t)?, naive_robustness(b, s, t)?);
            Ok(if ra > rb { ra } else { rb })
        }
        Formula::Eventually { interval, sub } => {
            let mut values = Vec::new();
            for tp in t + interval.lo() as i64..t + interval.hi() as i64 {
                values.push(naive_robustness(sub, s, tp)?);
            }
            Ok(values.into_iter().fold(f64::NEG_INFINITY, f64::max))
        }
        Formula::Always { interval, sub } => {
            let mut values = Vec::new();
            for tp in t + interval.lo() as i64..t + interval.hi() as i64 {
                values.push(naive_robustness(sub, s, tp)?);
            }
            Ok(values.into_iter().fold(f64::INFINITY, f64::min))
        }
        Formula::Until { interval, lhs, rhs } => {
            let mut best = f64::NEG_INFINITY;
            for tp in t + interval.lo() as i64..t + interval.hi() as i64 {
                let mut v = naive_robustness(rhs, s, tp)?;
                if v > crate::stl::TRUE_ROBUSTNESS {
                    v = crate::stl::TRUE_ROBUSTNESS;
                }
                for tpp in t..tp {
                    let guard = naive_robustness(lhs, s, tpp)?;
                    if guard < v {
                        v = guard;
                    }
                }
                if v > best {
                    best = v;
                }
            }
            Ok(best)
        }
    }
}

pub fn naive_sat(f: &Formula, s: &Signal, t: i64) -> Result<bool, StlError> {
    Ok(naive_robustness(f, s, t)? > 0.0)
}

/// Materializes the right-shifted, left-padded copy of `s`. The shift
/// prepends `d` copies of the initial sample and keeps the whole content,
/// so the result has `len + d` samples.
fn shifted_signal(s: &Signal, d: usize) -> Signal {
    let samples: Vec<Vec<f64>> = (0..s.len() + d)
        .map(|i| padded(s, i as i64 - d as i64).to_vec())
        .collect();
    Signal::new(samples).expect("shift preserves nonemptiness")
}

/// Temporal robustness by literal shift enumeration: builds every shifted
/// signal and finds the maximal prefix of consistent verdicts.
pub fn naive_theta(f: &Formula, s: &Signal, d_max: usize) -> Result<i64, StlError> {
    let verdict = naive_sat(f, s, 0)?;
    let mut d = 0usize;
    while d < d_max {
        let shifted = shifted_signal(s, d + 1);
        if naive_sat(f, &shifted, 0)? != verdict {
            break;
        }
        d += 1;
    }
    Ok(if verdict { d as i64 } else { -(d as i64) })
}

/// Result of finite-horizon backward induction on an explicit tau-MDP.
#[derive(Debug, Clone)]
pub struct ViResult {
    /// Optimal expected discounted reward from the initial state over the
    /// full horizon.
    pub optimal_value: f64,
    /// Value-to-go of each state at the first time it can be visited.
    pub values: HashMap<TauState, f64>,
    /// Stationary projection of the time-indexed optimal policy: each
    /// state's action at its first visit time.
    pub policy: TabularPolicy,
}

fn action_value(m: &ExplicitTauMdp, state: usize, action: usize, gamma: f64, tail: &[f64]) -> f64 {
    m.transitions[state][action]
        .iter()
        .map(|&(next, p)| p * (m.rewards[next] + gamma * tail[next]))
        .sum()
}

/// Finite-horizon value iteration (backward induction over `horizon`
/// transitions) with on-arrival rewards.
pub fn value_iteration(m: &ExplicitTauMdp, gamma: f64, horizon: usize) -> ViResult {
    let n = m.num_states();
    // depth of the first possible visit, for the stationary projection
    let mut depth = vec![usize::MAX; n];
    depth[m.init] = 0;
    let mut queue = std::collections::VecDeque::from([m.init]);
    while let Some(s) = queue.pop_front() {
        for rows in &m.transitions[s] {
            for &(next, _) in rows {
                if depth[next] == usize::MAX {
                    depth[next] = depth[s] + 1;
                    queue.push_back(next);
                }
            }
        }
    }

    let mut tail = vec![0.0f64; n];
    // values_by_steps[k][s] = optimal value-to-go with k steps remaining
    let mut best_actions: Vec<Vec<usize>> = Vec::with_capacity(horizon);
    let mut values_by_steps: Vec<Vec<f64>> = vec![tail.clone()];
    for _ in 1..=horizon {
        let mut next_values = vec![0.0f64; n];
        let mut actions = vec![0usize; n];
        for s in 0..n {
            let mut best = f64::NEG_INFINITY;
            let mut best_a = 0usize;
            for a in 0..ACTIONS.len() {
                let v = action_value(m, s, a, gamma, &tail);
                if v > best {
                    best = v;
                    best_a = a;
                }
            }
            next_values[s] = best;
            actions[s] = best_a;
        }
        tail = next_values.clone();
        values_by_steps.push(next_values);
        best_actions.push(actions);
    }

    let mut values = HashMap::with_capacity(n);
    let mut map = HashMap::with_capacity(n);
    for s in 0..n {
        let steps_left = horizon.saturating_sub(depth[s].min(horizon));
        values.insert(m.states[s].clone(), values_by_steps[steps_left][s]);
        if steps_left > 0 {
            map.insert(m.states[s].clone(), ACTIONS[best_actions[steps_left - 1][s]]);
        }
    }
    ViResult {
        optimal_value: values_by_steps[horizon][m.init],
        values,
        policy: TabularPolicy {
            map,
            fallback: ACTIONS[0],
        },
    }
}

/// Exact finite-horizon value of a stationary policy from the initial
/// state, computed by the same backward induction as [`value_iteration`].
pub fn policy_value(m: &ExplicitTauMdp, policy: &impl Policy, gamma: f64, horizon: usize) -> f64 {
    let n = m.num_states();
    let chosen: Vec<usize> = m.states.iter().map(|s| policy.action(s).index()).collect();
    let mut tail = vec![0.0f64; n];
    for _ in 1..=horizon {
        let mut next = vec![0.0f64; n];
        for s in 0..n {
            next[s] = action_value(m, s, chosen[s], gamma, &tail);
        }
        tail = next;
    }
    tail[m.init]
}

/// One synchronous Bellman-optimality sweep; returns the sup-norm residual.
pub fn bellman_sweep(m: &ExplicitTauMdp, gamma: f64, values: &mut [f64]) -> f64 {
    let n = m.num_states();
    let mut next = vec![0.0f64; n];
    for s in 0..n {
        let mut best = f64::NEG_INFINITY;
        for a in 0..ACTIONS.len() {
            best = best.max(action_value(m, s, a, gamma, values));
        }
        next[s] = best;
    }
    let residual = next
        .iter()
        .zip(values.iter())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    values.copy_from_slice(&next);
    residual
}

/// Probability that the fixed policy generates a trajectory with temporal
/// robustness at least `delta`, by exhaustive outcome-tree enumeration.
pub fn exact_robust_probability(
    grid: &GridWorld,
    task: &TaskSpec,
    policy: &impl Policy,
    max_leaves: usize,
) -> Result<f64, OracleError> {
    // each transition has at most five distinct outcomes
    let branches: f64 = if grid.p_slip() > 0.0 { 5.0 } else { 1.0 };
    let estimate = branches.powi(task.last_index as i32);
    if estimate > max_leaves as f64 {
        return Err(OracleError::EnumerationGuard {
            limit: max_leaves,
            estimate,
        });
    }

    let full = task.full_formula();
    let d_max = task.horizon_samples() + 1;
    let mut total = 0.0;

    struct Frame {
        window: TauState,
        prob: f64,
    }
    fn recurse(
        grid: &GridWorld,
        task: &TaskSpec,
        policy: &impl Policy,
        full: &Formula,
        d_max: usize,
        frame: Frame,
        samples: &mut Vec<Vec<f64>>,
        total: &mut f64,
    ) -> Result<(), OracleError> {
        if samples.len() == task.horizon_samples() {
            let signal = Signal::new(samples.clone()).expect("nonempty");
            let theta = temporal_robustness(full, &signal, 0, d_max)?;
            if theta >= task.delta as i64 {
                *total += frame.prob;
            }
            return Ok(());
        }
        let action = policy.action(&frame.window);
        for (next_cell, p) in grid.kernel(frame.window.last(), action) {
            let window = tau_shift(&frame.window, next_cell).expect("kernel outcome adjacent");
            samples.push(next_cell.center());
            recurse(
                grid,
                task,
                policy,
                full,
                d_max,
                Frame {
                    window,
                    prob: frame.prob * p,
                },
                samples,
                total,
            )?;
            samples.pop();
        }
        Ok(())
    }

    let mut samples = vec![grid.start().center()];
    recurse(
        grid,
        task,
        policy,
        full,
        d_max,
        Frame {
            window: tau_init(grid.start(), task.tau),
            prob: 1.0,
        },
        &mut samples,
        &mut total,
    )?;
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::{build_explicit_tau_mdp, Action, Cell};
    use crate::learn::{RewardShaper, RewardSpec, Variant};
    use crate::stl::{parse_formula, spatial_robustness, Region};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeMap;

    #[test]
    fn naive_predicate_case() {
        let f = parse_formula("x < 3").unwrap();
        let s = Signal::new(vec![vec![1.0]]).unwrap();
        assert_eq!(naive_robustness(&f, &s, 0).unwrap(), 2.0);
    }

    #[test]
    fn double_negation_is_identity() {
        let f = parse_formula("F[0,3) x < 1").unwrap();
        let g = parse_formula("!!(F[0,3) x < 1)").unwrap();
        let s = Signal::new(vec![vec![5.0], vec![0.0], vec![2.0]]).unwrap();
        for t in -2..4 {
            assert_eq!(
                naive_robustness(&f, &s, t).unwrap(),
                naive_robustness(&g, &s, t).unwrap()
            );
        }
    }

    #[test]
    fn naive_agrees_with_the_monitor_on_spot_checks() {
        let formulas = [
            "F[0,3) x < 1",
            "G[0,2) (x < 3 & y > 0.5)",
            "x < 2 U[1,4) y < 1",
            "!(x > 1 | G[0,2) y < 2)",
            "true U[0,2) x > 0",
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for text in formulas {
            let f = parse_formula(text).unwrap();
            for _ in 0..50 {
                let len = rng.random_range(1..8);
                let samples: Vec<Vec<f64>> = (0..len)
                    .map(|_| vec![rng.random_range(-2.0..4.0), rng.random_range(-2.0..4.0)])
                    .collect();
                let s = Signal::new(samples).unwrap();
                let t = rng.random_range(-3..6);
                assert_eq!(
                    naive_robustness(&f, &s, t).unwrap(),
                    spatial_robustness(&f, &s, t).unwrap(),
                    "formula {text} at t={t}"
                );
            }
        }
    }

    #[test]
    fn naive_theta_matches_the_monitor_example() {
        let f = parse_formula("F[0,3) x < 1").unwrap();
        let s = Signal::new(vec![vec![5.0], vec![0.0], vec![5.0], vec![5.0]]).unwrap();
        assert_eq!(naive_theta(&f, &s, 5).unwrap(), 1);
        assert_eq!(temporal_robustness(&f, &s, 0, 5).unwrap(), 1);
    }

    #[test]
    fn naive_theta_saturates() {
        let f = parse_formula("x < 3").unwrap();
        let sat = Signal::new(vec![vec![1.0]; 3]).unwrap();
        let viol = Signal::new(vec![vec![9.0]; 3]).unwrap();
        assert_eq!(naive_theta(&f, &sat, 7).unwrap(), 7);
        assert_eq!(naive_theta(&f, &viol, 7).unwrap(), -7);
    }

    #[test]
    fn single_state_value_is_horizon_times_reward() {
        let grid = GridWorld::new(1, BTreeMap::new(), 0.0, Cell::new(0, 0)).unwrap();
        let m = build_explicit_tau_mdp(&grid, 1, |_| 2.5).unwrap();
        assert_eq!(m.num_states(), 1);
        let result = value_iteration(&m, 1.0, 6);
        assert_eq!(result.optimal_value, 15.0);
    }

    #[test]
    fn zero_rewards_give_zero_values() {
        let grid = GridWorld::new(3, BTreeMap::new(), 0.1, Cell::new(0, 0)).unwrap();
        let m = build_explicit_tau_mdp(&grid, 2, |_| 0.0).unwrap();
        let result = value_iteration(&m, 0.9, 5);
        assert_eq!(result.optimal_value, 0.0);
        assert!(result.values.values().all(|&v| v == 0.0));
    }

    fn tiny_instance(p_slip: f64) -> (GridWorld, TaskSpec, RewardSpec) {
        let mut regions = BTreeMap::new();
        regions.insert("Goal".to_string(), Region::new([1.0, 1.0], [2.0, 2.0]));
        let grid = GridWorld::new(3, regions, p_slip, Cell::new(0, 0)).unwrap();
        let formula = parse_formula("F[0,5) in(Goal)")
            .unwrap()
            .resolve(grid.regions())
            .unwrap();
        let task = TaskSpec::new(&formula, 1).unwrap();
        let reward = RewardSpec::from_task(&task, Variant::Prob, 50.0, 1.0);
        (grid, task, reward)
    }

    #[test]
    fn vi_matches_exhaustive_action_sequences() {
        let (grid, task, reward) = tiny_instance(0.0);
        let mut shaper = RewardShaper::new(reward, 700.0);
        let m = build_explicit_tau_mdp(&grid, task.tau, |w| {
            shaper.step_reward(w).expect("windows have length tau")
        })
        .unwrap();
        let horizon = task.horizon_samples();
        let gamma = 0.9999;
        let vi = value_iteration(&m, gamma, horizon);

        // deterministic grid: enumerate all open-loop action sequences
        let mut best = f64::NEG_INFINITY;
        let count = ACTIONS.len().pow(horizon as u32);
        for code in 0..count {
            let mut rest = code;
            let mut state = 0usize;
            let mut value = 0.0;
            let mut discount = 1.0;
            for _ in 0..horizon {
                let a = rest % ACTIONS.len();
                rest /= ACTIONS.len();
                let &(next, _) = &m.transitions[state][a][0];
                value += discount * m.rewards[next];
                discount *= gamma;
                state = next;
            }
            best = best.max(value);
        }
        let scale = best.abs().max(1.0);
        assert!(
            (vi.optimal_value - best).abs() / scale < 1e-9,
            "vi {} vs exhaustive {best}",
            vi.optimal_value
        );
    }

    #[test]
    fn sweeps_contract_geometrically() {
        let (grid, task, reward) = tiny_instance(0.2);
        let mut shaper = RewardShaper::new(reward, 700.0);
        let m = build_explicit_tau_mdp(&grid, task.tau, |w| shaper.step_reward(w).unwrap())
            .unwrap();
        let gamma = 0.9;
        let mut values = vec![0.0; m.num_states()];
        let mut prev = f64::INFINITY;
        for sweep in 0..40 {
            let residual = bellman_sweep(&m, gamma, &mut values);
            if sweep > 0 {
                assert!(
                    residual <= gamma * prev * (1.0 + 1e-12),
                    "sweep {sweep}: {residual} > gamma * {prev}"
                );
            }
            prev = residual;
        }
    }

    #[test]
    fn deterministic_enumeration_is_a_point_mass() {
        let (grid, task, _) = tiny_instance(0.0);
        struct GoRight;
        impl Policy for GoRight {
            fn action(&self, _: &TauState) -> Action {
                Action::Right
            }
        }
        let p = exact_robust_probability(&grid, &task, &GoRight, MAX_ENUM_LEAVES).unwrap();
        assert!(p == 0.0 || p == 1.0);
        assert_eq!(p, 0.0, "a right-only policy never reaches (1,1)");
    }

    #[test]
    fn never_reaching_policies_have_zero_probability() {
        let (grid, task, _) = tiny_instance(0.0);
        struct Stay;
        impl Policy for Stay {
            fn action(&self, _: &TauState) -> Action {
                Action::Stay
            }
        }
        let p = exact_robust_probability(&grid, &task, &Stay, MAX_ENUM_LEAVES).unwrap();
        assert_eq!(p, 0.0);
    }

    #[test]
    fn enumeration_matches_monte_carlo_on_a_noisy_tiny_grid() {
        let mut regions = BTreeMap::new();
        regions.insert("Goal".to_string(), Region::new([1.0, 1.0], [2.0, 2.0]));
        let grid = GridWorld::new(2, regions, 0.5, Cell::new(0, 0)).unwrap();
        let formula = parse_formula("F[0,3) in(Goal)")
            .unwrap()
            .resolve(grid.regions())
            .unwrap();
        let task = TaskSpec::new(&formula, 0).unwrap();
        assert_eq!(task.last_index, 2);
        struct GoRight;
        impl Policy for GoRight {
            fn action(&self, _: &TauState) -> Action {
                Action::Right
            }
        }
        let exact = exact_robust_probability(&grid, &task, &GoRight, MAX_ENUM_LEAVES).unwrap();

        let mut rng = ChaCha8Rng::seed_from_u64(123);
        let trials = 1_000_000usize;
        let mut hits = 0usize;
        let d_max = task.horizon_samples() + 1;
        for _ in 0..trials {
            let signal = crate::eval::rollout(&grid, &GoRight, &task, &mut rng);
            if temporal_robustness(task.full_formula(), &signal, 0, d_max).unwrap()
                >= task.delta as i64
            {
                hits += 1;
            }
        }
        let mc = hits as f64 / trials as f64;
        assert!((mc - exact).abs() < 0.003, "mc {mc} vs exact {exact}");
    }

    #[test]
    fn guard_rejects_oversized_instances() {
        let (grid, _, _) = tiny_instance(0.1);
        let formula = parse_formula("F[0,20) x < 1").unwrap();
        let task = TaskSpec::new(&formula, 0).unwrap();
        struct Stay;
        impl Policy for Stay {
            fn action(&self, _: &TauState) -> Action {
                Action::Stay
            }
        }
        assert!(matches!(
            exact_robust_probability(&grid, &task, &Stay, 1000),
            Err(OracleError::EnumerationGuard { .. })
        ));
    }
}
