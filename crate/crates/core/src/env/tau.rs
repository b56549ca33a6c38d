//! Sliding-window (tau) states and the explicit tau-MDP.
//!
//! A tau-state keeps the last `tau` visited cells, oldest first. The
//! associated tau-MDP shifts the window on every transition: the successor
//! window drops the oldest cell and appends the new one, so its transition
//! probability equals the underlying kernel on the newest cells.

use super::{Cell, Error, GridWorld, ACTIONS};
use crate::stl::Signal;
use std::collections::HashMap;

/// Enumeration guard for explicit tau-MDP construction.
pub const MAX_EXPLICIT_STATES: usize = 1_000_000;

/// Window of the last `tau` visited cells, oldest first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TauState(Vec<Cell>);

impl TauState {
    pub fn cells(&self) -> &[Cell] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Newest cell, i.e. the current grid position.
    pub fn last(&self) -> Cell {
        *self.0.last().expect("tau-state is never empty")
    }

    /// Builds a window from recorded cells, validating that consecutive
    /// cells are one step apart (equal cells are allowed, which also covers
    /// padded initial windows).
    pub fn from_cells(cells: Vec<Cell>) -> Result<Self, Error> {
        if cells.is_empty() {
            return Err(Error::EmptyGrid);
        }
        for pair in cells.windows(2) {
            if !pair[0].adjacent_or_equal(pair[1]) {
                return Err(Error::UnreachableShift(
                    pair[1].x, pair[1].y, pair[0].x, pair[0].y,
                ));
            }
        }
        Ok(TauState(cells))
    }
}

/// Initial window: `tau` copies of the start cell.
pub fn tau_init(s0: Cell, tau: usize) -> TauState {
    assert!(tau >= 1, "window length must be at least 1");
    TauState(vec![s0; tau])
}

/// Drops the oldest cell and appends `next`. Fails when `next` is not
/// reachable from the newest cell in one grid step.
pub fn tau_shift(w: &TauState, next: Cell) -> Result<TauState, Error> {
    let last = w.last();
    if !last.adjacent_or_equal(next) {
        return Err(Error::UnreachableShift(next.x, next.y, last.x, last.y));
    }
    let mut cells = Vec::with_capacity(w.len());
    cells.extend_from_slice(&w.0[1..]);
    cells.push(next);
    Ok(TauState(cells))
}

/// Maps each cell to its center point, producing the window's signal view.
pub fn window_to_signal(w: &TauState) -> Signal {
    Signal::new(w.0.iter().map(|c| c.center()).collect())
        .expect("tau-state windows are nonempty")
}

/// Explicitly enumerated tau-MDP over the windows reachable from the
/// initial padded state.
#[derive(Debug, Clone)]
pub struct ExplicitTauMdp {
    pub states: Vec<TauState>,
    pub index: HashMap<TauState, usize>,
    pub init: usize,
    /// `transitions[s][a]` lists `(successor, probability)` pairs.
    pub transitions: Vec<[Vec<(usize, f64)>; 5]>,
    /// On-arrival reward of each state.
    pub rewards: Vec<f64>,
}

impl ExplicitTauMdp {
    pub fn num_states(&self) -> usize {
        self.states.len()
    }
}

/// Breadth-first closure of the reachable window set, with transition rows
/// induced by the grid kernel and rewards supplied by `reward`.
pub fn build_explicit_tau_mdp(
    grid: &GridWorld,
    tau: usize,
    mut reward: impl FnMut(&TauState) -> f64,
) -> Result<ExplicitTauMdp, Error> {
    let init = tau_init(grid.start(), tau);
    let mut states = vec![init.clone()];
    let mut index: HashMap<TauState, usize> = HashMap::new();
    index.insert(init, 0);
    let mut transitions: Vec<[Vec<(usize, f64)>; 5]> = Vec::new();

    let mut frontier = 0usize;
    while frontier < states.len() {
        let state = states[frontier].clone();
        let mut rows: [Vec<(usize, f64)>; 5] = Default::default();
        for action in ACTIONS {
            for (next_cell, p) in grid.kernel(state.last(), action) {
                let next = tau_shift(&state, next_cell)?;
                let next_idx = match index.get(&next) {
                    Some(&i) => i,
                    None => {
                        let i = states.len();
                        if i >= MAX_EXPLICIT_STATES {
                            return Err(Error::StateGuardExceeded(MAX_EXPLICIT_STATES));
                        }
                        states.push(next.clone());
                        index.insert(next, i);
                        i
                    }
                };
                rows[action.index()].push((next_idx, p));
            }
        }
        transitions.push(rows);
        frontier += 1;
    }

    let rewards = states.iter().map(|s| reward(s)).collect();
    Ok(ExplicitTauMdp {
        states,
        index,
        init: 0,
        transitions,
        rewards,
    })
}
