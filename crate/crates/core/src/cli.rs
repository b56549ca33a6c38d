//! Command implementations behind the `robustl` binary.
//!
//! Exit codes: 0 success, 1 tolerance failure, 2 input error, 3 runtime
//! failure. Every command funnels its outcome through [`CliError`] so the
//! binary can map errors onto those codes uniformly.

use crate::config::{load_config, RunRecord};
use crate::env::build_explicit_tau_mdp;
use crate::eval::{evaluate, learning_curve_csv, rollout};
use crate::learn::{greedy_policy, train, QTable, RewardShaper};
use crate::oracle::{exact_robust_probability, policy_value, value_iteration, MAX_ENUM_LEAVES};
use crate::stl::{
    boolean_sat, parse_formula, spatial_robustness, temporal_robustness, worst_shift_robustness,
    Signal,
};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fs;
use std::io::BufReader;
use std::path::Path;

/// Deterministic tolerance on the learned-versus-optimal value gap for
/// noise-free oracle checks.
pub const ORACLE_VALUE_TOLERANCE: f64 = 1e-6;
/// Tolerance on Monte-Carlo versus exact robust probability for stochastic
/// oracle checks.
pub const ORACLE_PROBABILITY_TOLERANCE: f64 = 0.02;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Tolerance(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Tolerance(_) => 1,
            CliError::Input(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }
}

fn input<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

fn runtime<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Runtime(e.to_string())
}

/// Trains a policy and writes `qtable.txt`, `curve.csv`, and `run.json`.
pub fn cmd_train(config_path: &Path, out_dir: &Path, seed: Option<u64>) -> Result<(), CliError> {
    let mut config = load_config(config_path).map_err(input)?;
    if let Some(seed) = seed {
        config.seed = seed;
    }
    let run = config.resolve().map_err(input)?;
    let result = train(&run.grid, &run.task, &run.reward, &run.hyper, run.seed).map_err(runtime)?;

    fs::create_dir_all(out_dir).map_err(runtime)?;
    let mut qtable = Vec::new();
    result
        .q
        .save(&mut qtable, run.grid.n(), run.task.tau, &run.formula)
        .map_err(runtime)?;
    fs::write(out_dir.join("qtable.txt"), qtable).map_err(runtime)?;
    fs::write(
        out_dir.join("curve.csv"),
        learning_curve_csv(&result.curve, &run.hyper.alpha, &run.hyper.epsilon),
    )
    .map_err(runtime)?;
    let record = RunRecord {
        config,
        tau: run.task.tau,
        horizon: run.task.horizon_samples(),
        formula: run.formula.clone(),
        q_entries: result.q.entries(),
        clamp_events: result.clamp_events,
    };
    let json = serde_json::to_string_pretty(&record).map_err(runtime)?;
    fs::write(out_dir.join("run.json"), json).map_err(runtime)?;
    Ok(())
}

/// Evaluates a stored Q-table and writes or prints the report JSON.
pub fn cmd_eval(
    qtable_path: &Path,
    config_path: &Path,
    n: usize,
    out: Option<&Path>,
    traces: Option<&Path>,
) -> Result<(), CliError> {
    if n == 0 {
        return Err(CliError::Input("--n must be at least 1".into()));
    }
    let config = load_config(config_path).map_err(input)?;
    let run = config.resolve().map_err(input)?;
    let file = fs::File::open(qtable_path).map_err(input)?;
    let (q, meta) = QTable::load(BufReader::new(file), run.grid.n()).map_err(input)?;
    if meta.tau != run.task.tau || meta.formula != run.formula {
        return Err(CliError::Input(format!(
            "Q-table header (tau={}, formula=`{}`) does not match the config (tau={}, formula=`{}`)",
            meta.tau, meta.formula, run.task.tau, run.formula
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(run.seed);
    rng.set_stream(1);
    let policy = greedy_policy(&q);
    let (report, records) = evaluate(
        &run.grid,
        &policy,
        &run.task,
        &run.reward,
        run.hyper.exp_clamp,
        n,
        &mut rng,
        q.entries(),
    )
    .map_err(runtime)?;

    let json = serde_json::to_string_pretty(&report).map_err(runtime)?;
    match out {
        Some(path) => fs::write(path, json).map_err(runtime)?,
        None => println!("{json}"),
    }
    if let Some(path) = traces {
        let mut lines = String::new();
        for record in &records {
            lines.push_str(&serde_json::to_string(record).map_err(runtime)?);
            lines.push('\n');
        }
        fs::write(path, lines).map_err(runtime)?;
    }
    Ok(())
}

/// Monitors a signal file against a formula at time zero and prints the
/// robustness verdict JSON.
pub fn cmd_monitor(
    formula_text: &str,
    signal_path: &Path,
    delta: u32,
    config_path: Option<&Path>,
) -> Result<(), CliError> {
    let mut formula = parse_formula(formula_text).map_err(input)?;
    if let Some(path) = config_path {
        let config = load_config(path).map_err(input)?;
        let run = config.resolve().map_err(input)?;
        formula = formula.resolve(run.grid.regions()).map_err(input)?;
    }
    let text = fs::read_to_string(signal_path).map_err(input)?;
    let signal = Signal::from_csv(&text).map_err(input)?;

    let rho = spatial_robustness(&formula, &signal, 0).map_err(input)?;
    let sat = boolean_sat(&formula, &signal, 0).map_err(input)?;
    let d_max = formula.horizon_len() + 1;
    let theta = temporal_robustness(&formula, &signal, 0, d_max).map_err(input)?;
    let robust_ok = theta >= delta as i64;
    let rho_delta = worst_shift_robustness(&formula, &signal, delta).map_err(input)?;
    let out = serde_json::json!({
        "rho": rho,
        "sat": sat,
        "theta": theta,
        "robust_ok": robust_ok,
        "rho_delta": rho_delta,
    });
    println!("{out}");
    Ok(())
}

/// Trains a fresh policy on a small instance and compares it against the
/// exact solvers; exits nonzero when outside the documented tolerances.
pub fn cmd_oracle_check(config_path: &Path, n_rollouts: usize) -> Result<(), CliError> {
    let config = load_config(config_path).map_err(input)?;
    let run = config.resolve().map_err(input)?;

    // Guard both oracles before doing any work.
    let mut shaper = RewardShaper::new(run.reward.clone(), run.hyper.exp_clamp);
    let model = build_explicit_tau_mdp(&run.grid, run.task.tau, |w| {
        shaper
            .step_reward(w)
            .expect("enumerated windows have length tau")
    })
    .map_err(input)?;
    let branch_estimate = if run.grid.p_slip() > 0.0 {
        5f64.powi(run.task.last_index as i32)
    } else {
        1.0
    };
    if branch_estimate > MAX_ENUM_LEAVES as f64 {
        return Err(CliError::Input(format!(
            "instance exceeds the outcome enumeration guard ({branch_estimate:.3e} > {MAX_ENUM_LEAVES} leaves)"
        )));
    }

    let result = train(&run.grid, &run.task, &run.reward, &run.hyper, run.seed).map_err(runtime)?;
    let policy = greedy_policy(&result.q);
    let horizon = run.task.horizon_samples();
    let vi = value_iteration(&model, run.hyper.gamma, horizon);
    let learned_value = policy_value(&model, &policy, run.hyper.gamma, horizon);
    let value_gap = (learned_value - vi.optimal_value).abs();
    println!("states              : {}", model.num_states());
    println!("optimal value       : {:.6e}", vi.optimal_value);
    println!("learned policy value: {learned_value:.6e}");
    println!("value gap           : {value_gap:.3e}");

    let exact =
        exact_robust_probability(&run.grid, &run.task, &policy, MAX_ENUM_LEAVES).map_err(input)?;
    let mut rng = ChaCha8Rng::seed_from_u64(run.seed);
    rng.set_stream(2);
    let d_max = horizon + 1;
    let mut hits = 0usize;
    for _ in 0..n_rollouts {
        let signal = rollout(&run.grid, &policy, &run.task, &mut rng);
        let theta =
            temporal_robustness(run.task.full_formula(), &signal, 0, d_max).map_err(runtime)?;
        if theta >= run.task.delta as i64 {
            hits += 1;
        }
    }
    let mc = hits as f64 / n_rollouts as f64;
    println!("exact robust prob   : {exact:.6}");
    println!("monte carlo estimate: {mc:.6} ({n_rollouts} rollouts)");

    if run.grid.p_slip() == 0.0 {
        if value_gap > ORACLE_VALUE_TOLERANCE {
            return Err(CliError::Tolerance(format!(
                "value gap {value_gap:.3e} exceeds {ORACLE_VALUE_TOLERANCE:.1e}"
            )));
        }
    } else if (mc - exact).abs() > ORACLE_PROBABILITY_TOLERANCE {
        return Err(CliError::Tolerance(format!(
            "|monte carlo - exact| = {:.4} exceeds {ORACLE_PROBABILITY_TOLERANCE}",
            (mc - exact).abs()
        )));
    }
    println!("oracle check passed");
    Ok(())
}
