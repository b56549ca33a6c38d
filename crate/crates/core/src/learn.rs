//! Reward shaping and tabular Q-learning over tau-states.
//!
//! Two reward variants are supported. The `prob` variant pays
//! `exp(beta * rb)` (negated and inverted for always-tasks) where `rb` is the
//! window's delay-robust satisfaction indicator; the `strob` variant replaces
//! the indicator with the worst spatial robustness over delays. Both turn the
//! smooth-maximum decomposition of the synthesis objectives into per-step
//! rewards that standard Q-learning can optimize.

use crate::env::{tau_init, tau_shift, window_to_signal, Action, GridWorld, TauState, ACTIONS};
use crate::stl::{self, rb, window_worst_robustness, Formula, OuterOp, Signal, TaskSpec};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::io::{self, BufRead, Write};

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("i/o error reading Q-table: {0}")]
    Io(#[from] io::Error),
    #[error("malformed Q-table line {0}: {1}")]
    Malformed(usize, String),
    #[error("missing Q-table header line `{0}`")]
    MissingHeader(&'static str),
}

/// Exponentially decaying schedule with a floor: `max(init * decay^i, floor)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub init: f64,
    pub decay: f64,
    pub floor: f64,
}

impl Schedule {
    pub fn value(&self, episode: usize) -> f64 {
        (self.init * self.decay.powi(episode as i32)).max(self.floor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyperparams {
    pub beta: f64,
    pub gamma: f64,
    pub episodes: usize,
    pub alpha: Schedule,
    pub epsilon: Schedule,
    pub exp_clamp: f64,
    pub rho_scale: f64,
}

/// Which of the two shaped objectives the reward realizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Probability of delta-robust satisfaction (indicator reward).
    Prob,
    /// Expected worst-case spatio-temporal robustness (margin reward).
    Strob,
}

/// Everything needed to score one window.
#[derive(Debug, Clone)]
pub struct RewardSpec {
    pub variant: Variant,
    pub outer: OuterOp,
    pub phi: Formula,
    pub delta: u32,
    pub beta: f64,
    pub rho_scale: f64,
}

impl RewardSpec {
    pub fn from_task(task: &TaskSpec, variant: Variant, beta: f64, rho_scale: f64) -> Self {
        RewardSpec {
            variant,
            outer: task.outer,
            phi: task.inner.clone(),
            delta: task.delta,
            beta,
            rho_scale,
        }
    }
}

/// Exponential with the argument clamped to `[-clamp, clamp]`.
pub fn exp_safe(x: f64, clamp: f64) -> f64 {
    x.clamp(-clamp, clamp).exp()
}

/// Numerically stable `(1/beta) * ln(sum_i exp(beta * x_i))`.
pub fn log_sum_exp(xs: &[f64], beta: f64) -> f64 {
    let m = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = xs.iter().map(|&x| ((x - m) * beta).exp()).sum();
    m + sum.ln() / beta
}

/// Stateful reward evaluator that counts exponent clamping events.
#[derive(Debug, Clone)]
pub struct RewardShaper {
    pub spec: RewardSpec,
    pub exp_clamp: f64,
    pub clamp_events: u64,
}

impl RewardShaper {
    pub fn new(spec: RewardSpec, exp_clamp: f64) -> Self {
        RewardShaper {
            spec,
            exp_clamp,
            clamp_events: 0,
        }
    }

    fn exp_counted(&mut self, x: f64) -> f64 {
        if x.abs() > self.exp_clamp {
            self.clamp_events += 1;
        }
        exp_safe(x, self.exp_clamp)
    }

    /// Step reward of the window reached after a transition.
    pub fn step_reward(&mut self, w: &TauState) -> Result<f64, stl::Error> {
        self.step_reward_signal(&window_to_signal(w))
    }

    /// Step reward of a window given directly in workspace coordinates.
    pub fn step_reward_signal(&mut self, window: &Signal) -> Result<f64, stl::Error> {
        let beta = self.spec.beta;
        let value = match self.spec.variant {
            Variant::Prob => f64::from(rb(&self.spec.phi, window, self.spec.delta)?),
            Variant::Strob => {
                self.spec.rho_scale
                    * window_worst_robustness(&self.spec.phi, window, self.spec.delta)?
            }
        };
        Ok(match self.spec.outer {
            OuterOp::Eventually => self.exp_counted(beta * value),
            OuterOp::Always => -self.exp_counted(-beta * value),
        })
    }
}

/// Lazily populated action-value table; absent entries read as zero.
///
/// Entries materialize one state row (all five action slots) at a time, on
/// the first update of the state; the reported entry count is the number of
/// materialized `(state, action)` cells.
#[derive(Debug, Clone, Default)]
pub struct QTable {
    rows: HashMap<TauState, [f64; 5]>,
}

impl QTable {
    pub fn new() -> Self {
        QTable::default()
    }

    pub fn get(&self, w: &TauState, a: Action) -> f64 {
        self.rows.get(w).map(|row| row[a.index()]).unwrap_or(0.0)
    }

    pub fn set(&mut self, w: &TauState, a: Action, value: f64) {
        self.rows.entry(w.clone()).or_default()[a.index()] = value;
    }

    /// Greedy bootstrap value: max over all actions with absent entries
    /// defaulting to zero.
    pub fn best_value(&self, w: &TauState) -> f64 {
        match self.rows.get(w) {
            Some(row) => row.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
            None => 0.0,
        }
    }

    /// Argmax action with ties broken by the fixed action order.
    pub fn greedy_action(&self, w: &TauState) -> Action {
        let mut best = ACTIONS[0];
        let mut best_value = self.get(w, best);
        for &a in &ACTIONS[1..] {
            let v = self.get(w, a);
            if v > best_value {
                best = a;
                best_value = v;
            }
        }
        best
    }

    /// Number of `(state, action)` entries created so far.
    pub fn entries(&self) -> usize {
        self.rows.len() * ACTIONS.len()
    }

    /// Copy with every stored value multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> QTable {
        let mut rows = self.rows.clone();
        for row in rows.values_mut() {
            for v in row.iter_mut() {
                *v *= factor;
            }
        }
        QTable { rows }
    }

    pub fn states(&self) -> impl Iterator<Item = &TauState> {
        self.rows.keys()
    }

    /// Serializes the table in the text format:
    /// `#tau=`, `#formula=`, `#entries=` header lines, then one
    /// `cellindex,...|action|value` line per entry, sorted, with cells as
    /// row-major indices of an `n x n` grid and values at 17 significant
    /// digits.
    pub fn save(
        &self,
        out: &mut impl Write,
        n: u16,
        tau: usize,
        formula: &str,
    ) -> io::Result<()> {
        writeln!(out, "#tau={tau}")?;
        writeln!(out, "#formula={formula}")?;
        writeln!(out, "#entries={}", self.entries())?;
        let mut entries: Vec<(Vec<usize>, &[f64; 5])> = self
            .rows
            .iter()
            .map(|(state, row)| {
                let indices: Vec<usize> = state.cells().iter().map(|c| c.index(n)).collect();
                (indices, row)
            })
            .collect();
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        for (indices, row) in entries {
            let cells: Vec<String> = indices.iter().map(usize::to_string).collect();
            for a in ACTIONS {
                writeln!(
                    out,
                    "{}|{}|{:.16e}",
                    cells.join(","),
                    a.name(),
                    row[a.index()]
                )?;
            }
        }
        Ok(())
    }

    pub fn load(reader: impl BufRead, n: u16) -> Result<(QTable, QTableMeta), LoadError> {
        use crate::env::Cell;
        let mut tau = None;
        let mut formula = None;
        let mut entries_declared = None;
        let mut q = QTable::new();
        let mut count = 0usize;
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let line = line.trim_end();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: &str| LoadError::Malformed(lineno + 1, msg.to_string());
            if let Some(rest) = line.strip_prefix('#') {
                let (key, value) = rest
                    .split_once('=')
                    .ok_or_else(|| bad("header without `=`"))?;
                match key {
                    "tau" => tau = Some(value.parse().map_err(|_| bad("bad tau"))?),
                    "formula" => formula = Some(value.to_string()),
                    "entries" => {
                        entries_declared = Some(value.parse().map_err(|_| bad("bad entries"))?)
                    }
                    _ => return Err(bad("unknown header key")),
                }
                continue;
            }
            let mut parts = line.split('|');
            let cells = parts.next().ok_or_else(|| bad("missing cells"))?;
            let action = parts.next().ok_or_else(|| bad("missing action"))?;
            let value = parts.next().ok_or_else(|| bad("missing value"))?;
            if parts.next().is_some() {
                return Err(bad("too many fields"));
            }
            let cells: Vec<Cell> = cells
                .split(',')
                .map(|c| c.parse::<usize>().map(|i| Cell::from_index(i, n)))
                .collect::<Result<_, _>>()
                .map_err(|_| bad("bad cell index"))?;
            let action = Action::from_name(action).ok_or_else(|| bad("unknown action"))?;
            let value: f64 = value.parse().map_err(|_| bad("bad value"))?;
            let state = TauState::from_cells(cells).map_err(|e| bad(&e.to_string()))?;
            q.set(&state, action, value);
            count += 1;
        }
        let meta = QTableMeta {
            tau: tau.ok_or(LoadError::MissingHeader("#tau"))?,
            formula: formula.ok_or(LoadError::MissingHeader("#formula"))?,
            entries: entries_declared.unwrap_or(count),
        };
        Ok((q, meta))
    }
}

/// Q-table header metadata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QTableMeta {
    pub tau: usize,
    pub formula: String,
    pub entries: usize,
}

/// One Bellman update on `(w, a)` with reward `r` and successor `w_next`.
pub fn q_update(
    q: &mut QTable,
    w: &TauState,
    a: Action,
    r: f64,
    w_next: &TauState,
    alpha: f64,
    gamma: f64,
    terminal: bool,
) {
    let bootstrap = if terminal { 0.0 } else { q.best_value(w_next) };
    let old = q.get(w, a);
    q.set(w, a, (1.0 - alpha) * old + alpha * (r + gamma * bootstrap));
}

/// Epsilon-greedy action selection with the fixed tie order.
pub fn select_action(q: &QTable, w: &TauState, epsilon: f64, rng: &mut impl Rng) -> Action {
    if rng.random::<f64>() < epsilon {
        ACTIONS[rng.random_range(0..ACTIONS.len())]
    } else {
        q.greedy_action(w)
    }
}

/// Deterministic mapping from tau-states to actions.
pub trait Policy {
    fn action(&self, w: &TauState) -> Action;
}

/// Greedy readout of a Q-table; unseen states fall back to the first action
/// in the tie order.
pub struct GreedyPolicy<'a> {
    q: &'a QTable,
}

impl Policy for GreedyPolicy<'_> {
    fn action(&self, w: &TauState) -> Action {
        self.q.greedy_action(w)
    }
}

pub fn greedy_policy(q: &QTable) -> GreedyPolicy<'_> {
    GreedyPolicy { q }
}

/// Explicit state-to-action map with a fallback, mainly used to export
/// value-iteration policies.
#[derive(Debug, Clone)]
pub struct TabularPolicy {
    pub map: HashMap<TauState, Action>,
    pub fallback: Action,
}

impl Policy for TabularPolicy {
    fn action(&self, w: &TauState) -> Action {
        self.map.get(w).copied().unwrap_or(self.fallback)
    }
}

/// Output of a training run.
#[derive(Debug, Clone)]
pub struct TrainResult {
    pub q: QTable,
    /// Per-episode summed reward.
    pub curve: Vec<f64>,
    pub clamp_events: u64,
}

/// Episodic Q-learning on the tau-MDP induced by `grid` and `task`.
///
/// Each episode runs `T + 1` transitions from the padded initial window;
/// the reward is evaluated on the post-transition window and the final
/// update bootstraps with zero. Fully deterministic given `seed`.
pub fn train(
    grid: &GridWorld,
    task: &TaskSpec,
    spec: &RewardSpec,
    h: &Hyperparams,
    seed: u64,
) -> Result<TrainResult, stl::Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut shaper = RewardShaper::new(spec.clone(), h.exp_clamp);
    let mut q = QTable::new();
    let mut curve = Vec::with_capacity(h.episodes);
    for episode in 0..h.episodes {
        let alpha = h.alpha.value(episode);
        let epsilon = h.epsilon.value(episode);
        let mut w = tau_init(grid.start(), task.tau);
        let mut total = 0.0;
        for t in 0..=task.last_index {
            let a = select_action(&q, &w, epsilon, &mut rng);
            let next = grid.step(w.last(), a, &mut rng);
            let w_next = tau_shift(&w, next).expect("kernel outcomes are one-step reachable");
            let r = shaper.step_reward(&w_next)?;
            q_update(
                &mut q,
                &w,
                a,
                r,
                &w_next,
                alpha,
                h.gamma,
                t == task.last_index,
            );
            total += r;
            w = w_next;
        }
        curve.push(total);
    }
    Ok(TrainResult {
        q,
        curve,
        clamp_events: shaper.clamp_events,
    })
}
