//! Quantitative and Boolean semantics of STL formulas.

use super::{Cmp, Error, Formula, Signal};

/// Robustness assigned to the `true` literal. A large finite constant is
/// used instead of IEEE infinity so that downstream min/max arithmetic and
/// exponentiation never produce NaN.
pub const TRUE_ROBUSTNESS: f64 = 1e9;

/// Spatial robustness of `f` with respect to `s` at time `t`.
///
/// Sample accesses outside `[0, len)` clamp to the first or last sample,
/// so `t` may be negative; this realizes right time shifts as left-padded
/// evaluation.
pub fn spatial_robustness(f: &Formula, s: &Signal, t: i64) -> Result<f64, Error> {
    Ok(match f {
        Formula::True => TRUE_ROBUSTNESS,
        Formula::Pred { var, cmp, value } => {
            let point = s.at(t);
            let x = *point.get(*var).ok_or(Error::CoordinateOutOfRange {
                var: *var,
                dim: s.dim(),
            })?;
            match cmp {
                Cmp::Lt => value - x,
                Cmp::Gt => x - value,
            }
        }
        Formula::InRegion { name, region } => {
            let region = region
                .as_ref()
                .ok_or_else(|| Error::UnresolvedRegion(name.clone()))?;
            let point = s.at(t);
            if point.len() < 2 {
                return Err(Error::CoordinateOutOfRange {
                    var: 1,
                    dim: s.dim(),
                });
            }
            region.margin(point)
        }
        Formula::Not(sub) => -spatial_robustness(sub, s, t)?,
        Formula::And(a, b) => spatial_robustness(a, s, t)?.min(spatial_robustness(b, s, t)?),
        Formula::Or(a, b) => spatial_robustness(a, s, t)?.max(spatial_robustness(b, s, t)?),
        Formula::Eventually { interval, sub } => {
            let mut best = f64::NEG_INFINITY;
            for tp in t + interval.lo() as i64..t + interval.hi() as i64 {
                best = best.max(spatial_robustness(sub, s, tp)?);
            }
            best
        }
        Formula::Always { interval, sub } => {
            let mut worst = f64::INFINITY;
            for tp in t + interval.lo() as i64..t + interval.hi() as i64 {
                worst = worst.min(spatial_robustness(sub, s, tp)?);
            }
            worst
        }
        Formula::Until { interval, lhs, rhs } => {
            let mut best = f64::NEG_INFINITY;
            for tp in t + interval.lo() as i64..t + interval.hi() as i64 {
                // min over the empty prefix range is the top element
                let mut v = spatial_robustness(rhs, s, tp)?.min(TRUE_ROBUSTNESS);
                for tpp in t..tp {
                    v = v.min(spatial_robustness(lhs, s, tpp)?);
                }
                best = best.max(v);
            }
            best
        }
    })
}

/// Boolean satisfaction: robustness strictly greater than zero.
pub fn boolean_sat(f: &Formula, s: &Signal, t: i64) -> Result<bool, Error> {
    Ok(spatial_robustness(f, s, t)? > 0.0)
}

/// Characteristic function: `+1` when satisfied, `-1` otherwise.
pub fn characteristic(f: &Formula, s: &Signal, t: i64) -> Result<i32, Error> {
    Ok(if boolean_sat(f, s, t)? { 1 } else { -1 })
}

/// Right temporal robustness at `t`, capped at `d_max`.
///
/// Returns `chi * d` where `chi` is the characteristic at `t` and `d` is the
/// largest shift `<= d_max` such that the verdict at every `t - d'`,
/// `d' in [0, d]`, equals the verdict at `t`. Shifted evaluations read
/// negative indices, which clamp to the initial sample.
pub fn temporal_robustness(f: &Formula, s: &Signal, t: i64, d_max: usize) -> Result<i64, Error> {
    let verdict = characteristic(f, s, t)?;
    let mut d = 0usize;
    while d < d_max && characteristic(f, s, t - (d as i64 + 1))? == verdict {
        d += 1;
    }
    Ok(verdict as i64 * d as i64)
}
