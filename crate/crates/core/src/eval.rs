//! Policy evaluation: rollouts, trajectory metrics, and empirical
//! estimators of the three synthesis objectives.

use crate::env::{tau_init, tau_shift, GridWorld};
use crate::learn::{exp_safe, Policy, RewardShaper, RewardSpec, Schedule};
use crate::stl::{
    self, boolean_sat, delayed_robustness, spatial_robustness, temporal_robustness, OuterOp,
    Signal, TaskSpec,
};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Metrics of a single rolled-out trajectory.
#[derive(Debug, Clone, Serialize)]
pub struct TrajectoryRecord {
    pub signal: Vec<Vec<f64>>,
    pub sat: bool,
    pub theta: i64,
    pub robust_ok: bool,
    pub rho: f64,
    pub rho_delta: f64,
    pub episodic_reward: f64,
}

/// Aggregated policy metrics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub n_traj: usize,
    pub sat_rate: f64,
    pub robust_rate: f64,
    pub mean_rho: f64,
    pub mean_theta: f64,
    pub q_entries: usize,
}

/// Rolls the policy out for `T` transitions, returning the `T + 1` visited
/// cell centers as a signal.
pub fn rollout(
    grid: &GridWorld,
    policy: &impl Policy,
    task: &TaskSpec,
    rng: &mut impl Rng,
) -> Signal {
    let mut w = tau_init(grid.start(), task.tau);
    let mut samples = vec![grid.start().center()];
    for _ in 0..task.last_index {
        let a = policy.action(&w);
        let next = grid.step(w.last(), a, rng);
        w = tau_shift(&w, next).expect("kernel outcomes are one-step reachable");
        samples.push(next.center());
    }
    Signal::new(samples).expect("rollout produces at least the start sample")
}

/// Runs `n` rollouts and aggregates the four trajectory metrics.
///
/// Per trajectory: Boolean satisfaction at time 0, temporal robustness with
/// `d_max = horizon + 1`, the indicator `theta >= delta`, the spatial
/// robustness, and the worst shifted robustness.
pub fn evaluate(
    grid: &GridWorld,
    policy: &impl Policy,
    task: &TaskSpec,
    reward: &RewardSpec,
    exp_clamp: f64,
    n: usize,
    rng: &mut impl Rng,
    q_entries: usize,
) -> Result<(EvalReport, Vec<TrajectoryRecord>), stl::Error> {
    let full = task.full_formula();
    let d_max = task.horizon_samples() + 1;
    let mut records = Vec::with_capacity(n);
    let mut sat_count = 0usize;
    let mut robust_count = 0usize;
    let mut rho_sum = 0.0;
    let mut theta_sum = 0.0;
    for _ in 0..n {
        let signal = rollout(grid, policy, task, rng);
        let sat = boolean_sat(full, &signal, 0)?;
        let theta = temporal_robustness(full, &signal, 0, d_max)?;
        let robust_ok = theta >= task.delta as i64;
        let rho = spatial_robustness(full, &signal, 0)?;
        let rho_delta = task.trajectory_worst_robustness(&signal)?;
        let episodic_reward = trajectory_reward(&signal, task, reward, exp_clamp)?;
        sat_count += sat as usize;
        robust_count += robust_ok as usize;
        rho_sum += rho;
        theta_sum += theta as f64;
        records.push(TrajectoryRecord {
            signal: signal.samples().to_vec(),
            sat,
            theta,
            robust_ok,
            rho,
            rho_delta,
            episodic_reward,
        });
    }
    let report = EvalReport {
        n_traj: n,
        sat_rate: sat_count as f64 / n as f64,
        robust_rate: robust_count as f64 / n as f64,
        mean_rho: rho_sum / n as f64,
        mean_theta: theta_sum / n as f64,
        q_entries,
    };
    Ok((report, records))
}

/// Sum of shaped step rewards over the trajectory's post-transition windows.
fn trajectory_reward(
    signal: &Signal,
    task: &TaskSpec,
    reward: &RewardSpec,
    exp_clamp: f64,
) -> Result<f64, stl::Error> {
    let mut shaper = RewardShaper::new(reward.clone(), exp_clamp);
    let mut total = 0.0;
    for window in trajectory_windows(signal, task.tau).into_iter().skip(1) {
        total += shaper.step_reward_signal(&window)?;
    }
    Ok(total)
}

/// The tau-windows `w_0 .. w_T` of a trajectory, with initial padding.
fn trajectory_windows(signal: &Signal, tau: usize) -> Vec<Signal> {
    (0..signal.len() as i64)
        .map(|t| {
            let samples: Vec<Vec<f64>> = (t - tau as i64 + 1..=t)
                .map(|i| signal.at(i).to_vec())
                .collect();
            Signal::new(samples).expect("windows are nonempty")
        })
        .collect()
}

/// Empirical means of the three objectives over a trajectory batch.
///
/// Per trajectory, with `rho(t, d)` the delayed robustness of window `w_t`:
/// the exact objective takes min over delays of the max (for F) or min
/// (for G) over time; the `J1` form swaps the time aggregation for a sum of
/// exponentials before the delay min; the `J2` form moves the delay min
/// inside the sum, which is the per-step reward actually learned from.
pub fn estimate_objectives(
    trajectories: &[Signal],
    task: &TaskSpec,
    beta: f64,
    exp_clamp: f64,
) -> Result<(f64, f64, f64), stl::Error> {
    let mut j0_sum = 0.0;
    let mut j1_sum = 0.0;
    let mut j2_sum = 0.0;
    for signal in trajectories {
        let (j0, j1, j2) = objective_terms(signal, task, beta, exp_clamp)?;
        j0_sum += j0;
        j1_sum += j1;
        j2_sum += j2;
    }
    let n = trajectories.len() as f64;
    Ok((j0_sum / n, j1_sum / n, j2_sum / n))
}

/// Per-trajectory objective terms `(J0, J1, J2)`.
pub fn objective_terms(
    signal: &Signal,
    task: &TaskSpec,
    beta: f64,
    exp_clamp: f64,
) -> Result<(f64, f64, f64), stl::Error> {
    if signal.len() != task.horizon_samples() {
        return Err(stl::Error::SignalLength {
            expected: task.horizon_samples(),
            got: signal.len(),
        });
    }
    let windows = trajectory_windows(signal, task.tau);
    // rho[d][t]
    let mut rho = vec![vec![0.0f64; windows.len()]; task.delta as usize + 1];
    for (t, window) in windows.iter().enumerate() {
        for d in 0..=task.delta {
            rho[d as usize][t] = delayed_robustness(&task.inner, window, d)?;
        }
    }
    let eventually = task.outer == OuterOp::Eventually;
    let mut j0 = f64::INFINITY;
    let mut j1 = f64::INFINITY;
    for row in &rho {
        let agg = if eventually {
            row.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        } else {
            row.iter().cloned().fold(f64::INFINITY, f64::min)
        };
        j0 = j0.min(agg);
        let sum: f64 = if eventually {
            row.iter().map(|&r| exp_safe(beta * r, exp_clamp)).sum()
        } else {
            row.iter().map(|&r| -exp_safe(-beta * r, exp_clamp)).sum()
        };
        j1 = j1.min(sum);
    }
    let mut j2 = 0.0;
    for t in 0..windows.len() {
        let worst = (0..=task.delta as usize)
            .map(|d| rho[d][t])
            .fold(f64::INFINITY, f64::min);
        j2 += if eventually {
            exp_safe(beta * worst, exp_clamp)
        } else {
            -exp_safe(-beta * worst, exp_clamp)
        };
    }
    Ok((j0, j1, j2))
}

/// CSV rows `episode,reward,reward_ma100,alpha,epsilon` for a learning
/// curve, where `reward_ma100` is the moving average over the last 100
/// episodes.
pub fn learning_curve_csv(curve: &[f64], alpha: &Schedule, epsilon: &Schedule) -> String {
    let mut out = String::from("episode,reward,reward_ma100,alpha,epsilon\n");
    let mut window_sum = 0.0;
    for (i, &r) in curve.iter().enumerate() {
        window_sum += r;
        if i >= 100 {
            window_sum -= curve[i - 100];
        }
        let ma = window_sum / (i.min(99) + 1) as f64;
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            i,
            r,
            ma,
            alpha.value(i),
            epsilon.value(i)
        ));
    }
    out
}
