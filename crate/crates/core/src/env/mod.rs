//! Stochastic grid-world environment and its sliding-window state.
//!
//! The agent occupies one cell of an `n x n` grid and chooses among five
//! actions; moving into the boundary leaves the state unchanged. With
//! probability `p_slip` the commanded action is replaced by a uniformly
//! random move (stay is never drawn as a slip outcome).

mod tau;

pub use tau::{
    build_explicit_tau_mdp, tau_init, tau_shift, window_to_signal, ExplicitTauMdp, TauState,
    MAX_EXPLICIT_STATES,
};

use crate::stl::Region;
use rand::Rng;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("region `{name}` must be a nonempty box inside [0,{n}]^2")]
    RegionOutOfBounds { name: String, n: u16 },
    #[error("p_slip {0} is outside [0,1]")]
    SlipOutOfRange(f64),
    #[error("start cell ({0},{1}) is outside the grid")]
    StartOutOfGrid(u16, u16),
    #[error("grid side length must be positive")]
    EmptyGrid,
    #[error("cell ({0},{1}) is not reachable in one step from ({2},{3})")]
    UnreachableShift(u16, u16, u16, u16),
    #[error("explicit tau-MDP enumeration exceeded {0} states")]
    StateGuardExceeded(usize),
}

/// Grid cell, column `x` and row `y`, both in `[0, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub x: u16,
    pub y: u16,
}

impl Cell {
    pub fn new(x: u16, y: u16) -> Self {
        Cell { x, y }
    }

    /// Row-major index within an `n x n` grid.
    pub fn index(self, n: u16) -> usize {
        self.y as usize * n as usize + self.x as usize
    }

    pub fn from_index(idx: usize, n: u16) -> Self {
        Cell {
            x: (idx % n as usize) as u16,
            y: (idx / n as usize) as u16,
        }
    }

    /// Center point in workspace units.
    pub fn center(self) -> Vec<f64> {
        vec![self.x as f64 + 0.5, self.y as f64 + 0.5]
    }

    fn adjacent_or_equal(self, other: Cell) -> bool {
        let dx = (self.x as i32 - other.x as i32).abs();
        let dy = (self.y as i32 - other.y as i32).abs();
        dx + dy <= 1
    }
}

/// The five grid actions in their fixed tie-break order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Action {
    Up,
    Down,
    Left,
    Right,
    Stay,
}

pub const ACTIONS: [Action; 5] = [
    Action::Up,
    Action::Down,
    Action::Left,
    Action::Right,
    Action::Stay,
];

const MOVES: [Action; 4] = [Action::Up, Action::Down, Action::Left, Action::Right];

impl Action {
    pub fn index(self) -> usize {
        match self {
            Action::Up => 0,
            Action::Down => 1,
            Action::Left => 2,
            Action::Right => 3,
            Action::Stay => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Action::Up => "up",
            Action::Down => "down",
            Action::Left => "left",
            Action::Right => "right",
            Action::Stay => "stay",
        }
    }

    pub fn from_name(name: &str) -> Option<Action> {
        ACTIONS.iter().copied().find(|a| a.name() == name)
    }
}

#[derive(Debug, Clone)]
pub struct GridWorld {
    n: u16,
    regions: BTreeMap<String, Region>,
    p_slip: f64,
    start: Cell,
}

impl GridWorld {
    pub fn new(
        n: u16,
        regions: BTreeMap<String, Region>,
        p_slip: f64,
        start: Cell,
    ) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::EmptyGrid);
        }
        if !(0.0..=1.0).contains(&p_slip) {
            return Err(Error::SlipOutOfRange(p_slip));
        }
        if start.x >= n || start.y >= n {
            return Err(Error::StartOutOfGrid(start.x, start.y));
        }
        for (name, r) in &regions {
            let inside = r.lo[0] >= 0.0
                && r.lo[1] >= 0.0
                && r.hi[0] <= n as f64
                && r.hi[1] <= n as f64
                && r.lo[0] < r.hi[0]
                && r.lo[1] < r.hi[1];
            if !inside {
                return Err(Error::RegionOutOfBounds {
                    name: name.clone(),
                    n,
                });
            }
        }
        Ok(GridWorld {
            n,
            regions,
            p_slip,
            start,
        })
    }

    pub fn n(&self) -> u16 {
        self.n
    }

    pub fn p_slip(&self) -> f64 {
        self.p_slip
    }

    pub fn start(&self) -> Cell {
        self.start
    }

    pub fn regions(&self) -> &BTreeMap<String, Region> {
        &self.regions
    }

    /// Deterministic move with boundary clamping.
    pub fn apply_move(&self, c: Cell, a: Action) -> Cell {
        let (dx, dy): (i32, i32) = match a {
            Action::Up => (0, -1),
            Action::Down => (0, 1),
            Action::Left => (-1, 0),
            Action::Right => (1, 0),
            Action::Stay => (0, 0),
        };
        let x = c.x as i32 + dx;
        let y = c.y as i32 + dy;
        if x < 0 || y < 0 || x >= self.n as i32 || y >= self.n as i32 {
            c
        } else {
            Cell::new(x as u16, y as u16)
        }
    }

    /// One environment step under the slip kernel.
    pub fn step(&self, c: Cell, a: Action, rng: &mut impl Rng) -> Cell {
        let applied = if rng.random::<f64>() < self.p_slip {
            MOVES[rng.random_range(0..MOVES.len())]
        } else {
            a
        };
        self.apply_move(c, applied)
    }

    /// Closed-form transition kernel row for `(c, a)`, duplicates merged,
    /// in deterministic cell order.
    pub fn kernel(&self, c: Cell, a: Action) -> Vec<(Cell, f64)> {
        let mut probs: BTreeMap<Cell, f64> = BTreeMap::new();
        *probs.entry(self.apply_move(c, a)).or_insert(0.0) += 1.0 - self.p_slip;
        for m in MOVES {
            *probs.entry(self.apply_move(c, m)).or_insert(0.0) += self.p_slip / 4.0;
        }
        probs.into_iter().filter(|(_, p)| *p > 0.0).collect()
    }
}
