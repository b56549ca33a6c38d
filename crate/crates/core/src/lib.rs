//! Signal temporal logic (STL) monitoring and temporally-robust policy
//! synthesis for tabular Markov decision processes.
//!
//! The crate is organized around five subsystems:
//!
//! * [`stl`] — formula ASTs, a text parser, and the quantitative semantics:
//!   spatial robustness, Boolean satisfaction, right temporal robustness,
//!   and the window-level delayed-satisfaction machinery.
//! * [`env`] — the stochastic grid world, the sliding-window (tau) state,
//!   and an explicit tau-MDP enumeration for exact solving.
//! * [`learn`] — reward shaping for the two synthesis objectives, tabular
//!   Q-learning with decaying schedules, and greedy policy extraction.
//! * [`eval`] — policy rollouts, trajectory metrics, and empirical
//!   objective estimators.
//! * [`oracle`] — independent brute-force implementations (naive monitors,
//!   finite-horizon value iteration, exact outcome enumeration) used to
//!   cross-check the fast paths.

pub mod cli;
pub mod config;
pub mod env;
pub mod eval;
pub mod learn;
pub mod oracle;
pub mod stl;
