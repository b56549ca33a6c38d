//! STL formulas over discrete-time real-valued signals.
//!
//! Formulas follow the bounded fragment `true | pred | in(R) | !phi |
//! phi & phi | phi "|" phi | phi U[a,b) phi | F[a,b) phi | G[a,b) phi`
//! with half-open integer intervals `[a, b)`, `a < b`. Signals are finite
//! sequences of points; indexing outside the sampled range clamps to the
//! first or last sample, which realizes the padding rule used by the
//! time-shift semantics.

mod parse;
mod robustness;
mod window;

pub use parse::parse_formula;
pub use robustness::{
    boolean_sat, characteristic, spatial_robustness, temporal_robustness, TRUE_ROBUSTNESS,
};
pub use window::{
    delayed_robustness, delayed_sat, rb, window_worst_robustness, worst_shift_robustness,
};

use std::collections::BTreeMap;
use std::fmt;

/// Errors produced by parsing, resolution, and monitor evaluation.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("parse error at line {line}, column {col}: {message}")]
    Parse {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("empty interval [{lo},{hi}): bounds must satisfy lo < hi")]
    EmptyInterval { lo: u32, hi: u32 },
    #[error("region `{0}` is unresolved; resolve the formula against a region table first")]
    UnresolvedRegion(String),
    #[error("unknown region `{0}`")]
    UnknownRegion(String),
    #[error("signal must contain at least one sample")]
    EmptySignal,
    #[error("signal samples have mixed dimensions ({0} vs {1})")]
    MixedDimensions(usize, usize),
    #[error("formula reads coordinate {var} but the signal has dimension {dim}")]
    CoordinateOutOfRange { var: usize, dim: usize },
    #[error("window of length {len} cannot hold horizon {horizon} plus delay budget {delta}")]
    WindowLength {
        len: usize,
        horizon: usize,
        delta: u32,
    },
    #[error("delay {d} exceeds the window delay budget {delta}")]
    DelayTooLarge { d: u32, delta: u32 },
    #[error("expected a signal of {expected} samples, got {got}")]
    SignalLength { expected: usize, got: usize },
    #[error("task formula must have the shape F[0,H)phi or G[0,H)phi")]
    NotTaskFragment,
}

/// Comparison operator of an atomic predicate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Lt,
    Gt,
}

/// Axis-aligned box in workspace units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub lo: [f64; 2],
    pub hi: [f64; 2],
}

impl Region {
    pub fn new(lo: [f64; 2], hi: [f64; 2]) -> Self {
        Region { lo, hi }
    }

    /// Signed infinity-norm margin of `p` to the box boundary: positive
    /// inside, negative outside, zero on the boundary.
    pub fn margin(&self, p: &[f64]) -> f64 {
        let mut m = f64::INFINITY;
        for axis in 0..2 {
            m = m.min(p[axis] - self.lo[axis]).min(self.hi[axis] - p[axis]);
        }
        m
    }
}

/// Half-open time interval `[lo, hi)` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Interval {
    lo: u32,
    hi: u32,
}

impl Interval {
    pub fn new(lo: u32, hi: u32) -> Result<Self, Error> {
        if lo >= hi {
            return Err(Error::EmptyInterval { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    pub fn lo(&self) -> u32 {
        self.lo
    }

    pub fn hi(&self) -> u32 {
        self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{})", self.lo, self.hi)
    }
}

/// Abstract syntax tree of an STL formula.
#[derive(Debug, Clone, PartialEq)]
pub enum Formula {
    True,
    /// `x < c` or `x > c` on one workspace coordinate.
    Pred { var: usize, cmp: Cmp, value: f64 },
    /// Membership in a named region; `region` is filled in by [`Formula::resolve`].
    InRegion {
        name: String,
        region: Option<Region>,
    },
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Until {
        interval: Interval,
        lhs: Box<Formula>,
        rhs: Box<Formula>,
    },
    Eventually {
        interval: Interval,
        sub: Box<Formula>,
    },
    Always {
        interval: Interval,
        sub: Box<Formula>,
    },
}

impl Formula {
    /// Number of samples needed to evaluate the formula at a time point.
    pub fn horizon_len(&self) -> usize {
        self.lookahead() + 1
    }

    /// Largest sample offset the evaluation at time `t` can read.
    fn lookahead(&self) -> usize {
        match self {
            Formula::True | Formula::Pred { .. } | Formula::InRegion { .. } => 0,
            Formula::Not(sub) => sub.lookahead(),
            Formula::And(a, b) | Formula::Or(a, b) => a.lookahead().max(b.lookahead()),
            Formula::Until { interval, lhs, rhs } => {
                (interval.hi as usize - 1) + lhs.lookahead().max(rhs.lookahead())
            }
            Formula::Eventually { interval, sub } | Formula::Always { interval, sub } => {
                (interval.hi as usize - 1) + sub.lookahead()
            }
        }
    }

    /// Attaches region boxes to every `in(...)` atom.
    pub fn resolve(&self, regions: &BTreeMap<String, Region>) -> Result<Formula, Error> {
        Ok(match self {
            Formula::InRegion { name, .. } => {
                let region = *regions
                    .get(name)
                    .ok_or_else(|| Error::UnknownRegion(name.clone()))?;
                Formula::InRegion {
                    name: name.clone(),
                    region: Some(region),
                }
            }
            Formula::Not(sub) => Formula::Not(Box::new(sub.resolve(regions)?)),
            Formula::And(a, b) => {
                Formula::And(Box::new(a.resolve(regions)?), Box::new(b.resolve(regions)?))
            }
            Formula::Or(a, b) => {
                Formula::Or(Box::new(a.resolve(regions)?), Box::new(b.resolve(regions)?))
            }
            Formula::Until { interval, lhs, rhs } => Formula::Until {
                interval: *interval,
                lhs: Box::new(lhs.resolve(regions)?),
                rhs: Box::new(rhs.resolve(regions)?),
            },
            Formula::Eventually { interval, sub } => Formula::Eventually {
                interval: *interval,
                sub: Box::new(sub.resolve(regions)?),
            },
            Formula::Always { interval, sub } => Formula::Always {
                interval: *interval,
                sub: Box::new(sub.resolve(regions)?),
            },
            other => other.clone(),
        })
    }

    /// Rewrites derived operators to their defining forms:
    /// `F[a,b)p => true U[a,b) p`, `G[a,b)p => !F[a,b)!p`,
    /// `p | q => !(!p & !q)`. Used for differential semantics checks.
    pub fn expand_derived(&self) -> Formula {
        match self {
            Formula::True | Formula::Pred { .. } | Formula::InRegion { .. } => self.clone(),
            Formula::Not(sub) => Formula::Not(Box::new(sub.expand_derived())),
            Formula::And(a, b) => Formula::And(
                Box::new(a.expand_derived()),
                Box::new(b.expand_derived()),
            ),
            Formula::Or(a, b) => Formula::Not(Box::new(Formula::And(
                Box::new(Formula::Not(Box::new(a.expand_derived()))),
                Box::new(Formula::Not(Box::new(b.expand_derived()))),
            ))),
            Formula::Until { interval, lhs, rhs } => Formula::Until {
                interval: *interval,
                lhs: Box::new(lhs.expand_derived()),
                rhs: Box::new(rhs.expand_derived()),
            },
            Formula::Eventually { interval, sub } => Formula::Until {
                interval: *interval,
                lhs: Box::new(Formula::True),
                rhs: Box::new(sub.expand_derived()),
            },
            Formula::Always { interval, sub } => {
                let inner = Formula::Until {
                    interval: *interval,
                    lhs: Box::new(Formula::True),
                    rhs: Box::new(Formula::Not(Box::new(sub.expand_derived()))),
                };
                Formula::Not(Box::new(inner))
            }
        }
    }
}

// Precedence levels for the printer: `|` < `&` < `U` < unary < atom.
const PREC_OR: u8 = 0;
const PREC_AND: u8 = 1;
const PREC_UNTIL: u8 = 2;
const PREC_UNARY: u8 = 3;
const PREC_ATOM: u8 = 4;

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Or(..) => PREC_OR,
        Formula::And(..) => PREC_AND,
        Formula::Until { .. } => PREC_UNTIL,
        Formula::Not(..) | Formula::Eventually { .. } | Formula::Always { .. } => PREC_UNARY,
        Formula::True | Formula::Pred { .. } | Formula::InRegion { .. } => PREC_ATOM,
    }
}

fn write_at(f: &Formula, min_prec: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let prec = precedence(f);
    if prec < min_prec {
        write!(out, "(")?;
        write_at(f, 0, out)?;
        return write!(out, ")");
    }
    match f {
        Formula::True => write!(out, "true"),
        Formula::Pred { var, cmp, value } => {
            let name = if *var == 0 { "x" } else { "y" };
            let op = match cmp {
                Cmp::Lt => "<",
                Cmp::Gt => ">",
            };
            write!(out, "{name} {op} {value}")
        }
        Formula::InRegion { name, .. } => write!(out, "in({name})"),
        Formula::Not(sub) => {
            write!(out, "!")?;
            write_at(sub, PREC_UNARY, out)
        }
        Formula::And(a, b) => {
            write_at(a, PREC_AND, out)?;
            write!(out, " & ")?;
            write_at(b, PREC_UNTIL, out)
        }
        Formula::Or(a, b) => {
            write_at(a, PREC_OR, out)?;
            write!(out, " | ")?;
            write_at(b, PREC_AND, out)
        }
        Formula::Until { interval, lhs, rhs } => {
            write_at(lhs, PREC_UNARY, out)?;
            write!(out, " U{interval} ")?;
            write_at(rhs, PREC_UNTIL, out)
        }
        Formula::Eventually { interval, sub } => {
            write!(out, "F{interval} ")?;
            write_at(sub, PREC_UNARY, out)
        }
        Formula::Always { interval, sub } => {
            write!(out, "G{interval} ")?;
            write_at(sub, PREC_UNARY, out)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_at(self, 0, f)
    }
}

/// Finite sequence of equally-spaced workspace points.
///
/// Indexing through [`Signal::at`] clamps: negative times return the first
/// sample and times past the end return the last sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    samples: Vec<Vec<f64>>,
    dim: usize,
}

impl Signal {
    pub fn new(samples: Vec<Vec<f64>>) -> Result<Self, Error> {
        let dim = samples.first().ok_or(Error::EmptySignal)?.len();
        for s in &samples {
            if s.len() != dim {
                return Err(Error::MixedDimensions(dim, s.len()));
            }
        }
        Ok(Signal { samples, dim })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn at(&self, t: i64) -> &[f64] {
        let idx = t.clamp(0, self.samples.len() as i64 - 1) as usize;
        &self.samples[idx]
    }

    pub fn samples(&self) -> &[Vec<f64>] {
        &self.samples
    }

    /// Copy of the sample range `[lo, hi)`.
    pub fn slice(&self, lo: usize, hi: usize) -> Signal {
        Signal {
            samples: self.samples[lo..hi].to_vec(),
            dim: self.dim,
        }
    }

    /// Parses a CSV signal file: one row per time step, one column per
    /// dimension. An optional header row is detected by non-numeric fields;
    /// if the header starts with `t`, the first data column is treated as a
    /// time index and dropped.
    pub fn from_csv(text: &str) -> Result<Self, Error> {
        let mut rows: Vec<Vec<f64>> = Vec::new();
        let mut drop_first = false;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let parsed: Result<Vec<f64>, _> = fields.iter().map(|f| f.parse::<f64>()).collect();
            match parsed {
                Ok(vals) => {
                    let vals = if drop_first { vals[1..].to_vec() } else { vals };
                    rows.push(vals);
                }
                Err(_) if i == 0 && rows.is_empty() => {
                    drop_first = fields.first().map(|f| f.eq_ignore_ascii_case("t")) == Some(true);
                }
                Err(_) => {
                    return Err(Error::Parse {
                        line: i + 1,
                        col: 1,
                        message: format!("non-numeric field in signal row: `{line}`"),
                    })
                }
            }
        }
        Signal::new(rows)
    }
}

/// Outer temporal operator of a task formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum OuterOp {
    Eventually,
    Always,
}

/// A synthesis task `Phi = F[0,H)phi` or `Phi = G[0,H)phi` together with the
/// delay budget `delta` and the derived window and horizon sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskSpec {
    pub outer: OuterOp,
    pub window_bound: u32,
    pub inner: Formula,
    pub delta: u32,
    full: Formula,
    /// Window length `tau = horizon_len(inner) + delta`.
    pub tau: usize,
    /// Last trajectory index `T`, with `T + 1 = horizon_len(full)`.
    pub last_index: usize,
}

impl TaskSpec {
    pub fn new(formula: &Formula, delta: u32) -> Result<Self, Error> {
        let (outer, interval, inner) = match formula {
            Formula::Eventually { interval, sub } => (OuterOp::Eventually, interval, sub),
            Formula::Always { interval, sub } => (OuterOp::Always, interval, sub),
            _ => return Err(Error::NotTaskFragment),
        };
        if interval.lo() != 0 {
            return Err(Error::NotTaskFragment);
        }
        let tau = inner.horizon_len() + delta as usize;
        let last_index = formula.horizon_len() - 1;
        Ok(TaskSpec {
            outer,
            window_bound: interval.hi(),
            inner: (**inner).clone(),
            delta,
            full: formula.clone(),
            tau,
            last_index,
        })
    }

    pub fn full_formula(&self) -> &Formula {
        &self.full
    }

    /// Trajectory length `T + 1`.
    pub fn horizon_samples(&self) -> usize {
        self.last_index + 1
    }

    /// Worst spatial robustness of the whole task formula over right shifts
    /// `d <= delta` of the trajectory, padding shifted-in samples with the
    /// initial value.
    pub fn trajectory_worst_robustness(&self, s: &Signal) -> Result<f64, Error> {
        if s.len() != self.horizon_samples() {
            return Err(Error::SignalLength {
                expected: self.horizon_samples(),
                got: s.len(),
            });
        }
        worst_shift_robustness(&self.full, s, self.delta)
    }
}
