//! Delayed satisfaction and robustness of sliding windows.
//!
//! A window of length `tau = horizon_len(phi) + delta` holds the last `tau`
//! trajectory samples, newest last. Delay `d` selects the slice
//! `[tau - h - d, tau - d)` — the `h` samples that ended `d` steps ago —
//! which is the right-shifted trace the delay semantics evaluates.

use super::robustness::{boolean_sat, spatial_robustness};
use super::{Error, Formula, Signal};

fn delay_slice(phi: &Formula, window: &Signal, d: u32) -> Result<Signal, Error> {
    let h = phi.horizon_len();
    let tau = window.len();
    let delta = tau
        .checked_sub(h)
        .ok_or(Error::WindowLength {
            len: tau,
            horizon: h,
            delta: 0,
        })? as u32;
    if d > delta {
        return Err(Error::DelayTooLarge { d, delta });
    }
    let hi = tau - d as usize;
    Ok(window.slice(hi - h, hi))
}

/// Satisfaction of the window delayed by `d` steps.
pub fn delayed_sat(phi: &Formula, window: &Signal, d: u32) -> Result<bool, Error> {
    boolean_sat(phi, &delay_slice(phi, window, d)?, 0)
}

/// Spatial robustness of the window delayed by `d` steps.
pub fn delayed_robustness(phi: &Formula, window: &Signal, d: u32) -> Result<f64, Error> {
    spatial_robustness(phi, &delay_slice(phi, window, d)?, 0)
}

/// Indicator that the window satisfies `phi` under every delay `d <= delta`.
///
/// The window length must be exactly `horizon_len(phi) + delta`.
pub fn rb(phi: &Formula, window: &Signal, delta: u32) -> Result<u8, Error> {
    let expected = phi.horizon_len() + delta as usize;
    if window.len() != expected {
        return Err(Error::WindowLength {
            len: window.len(),
            horizon: phi.horizon_len(),
            delta,
        });
    }
    for d in 0..=delta {
        if !delayed_sat(phi, window, d)? {
            return Ok(0);
        }
    }
    Ok(1)
}

/// Worst spatial robustness of the window over all delays `d <= delta`.
pub fn window_worst_robustness(phi: &Formula, window: &Signal, delta: u32) -> Result<f64, Error> {
    let expected = phi.horizon_len() + delta as usize;
    if window.len() != expected {
        return Err(Error::WindowLength {
            len: window.len(),
            horizon: phi.horizon_len(),
            delta,
        });
    }
    let mut worst = f64::INFINITY;
    for d in 0..=delta {
        worst = worst.min(delayed_robustness(phi, window, d)?);
    }
    Ok(worst)
}

/// Worst spatial robustness of a whole signal over right shifts `d <= delta`.
///
/// A right shift by `d` evaluates the formula at time `-d`; index clamping
/// pads the shifted-in prefix with the initial sample.
pub fn worst_shift_robustness(f: &Formula, s: &Signal, delta: u32) -> Result<f64, Error> {
    let mut worst = f64::INFINITY;
    for d in 0..=delta {
        worst = worst.min(spatial_robustness(f, s, -(d as i64))?);
    }
    Ok(worst)
}
