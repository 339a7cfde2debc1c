//! Thomson lamp on intrinsic and extrinsic time scales, plus the
//! finite-resolution detector that operationalizes brightness.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::summability::geometric_exposure_fractions;

#[derive(Debug, Error)]
pub enum SupertaskError {
    #[error("extrinsic time {tau} has no finite intrinsic preimage (domain [0, 2))")]
    OutOfDomain { tau: f64 },
    #[error("window ({open}, {close}) outside the lamp record [0, 2]")]
    WindowOutsideTrace { open: f64, close: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LampState {
    On,
    Off,
}

impl LampState {
    pub fn flip(self) -> Self {
        match self {
            LampState::On => LampState::Off,
            LampState::Off => LampState::On,
        }
    }
}

/// One maximal constant-state interval of extrinsic time, half-open [start, end).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub start: f64,
    pub end: f64,
    pub state: LampState,
}

/// The classical supertask record: contiguous alternating intervals with
/// geometrically shrinking extrinsic lengths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LampTrace {
    pub initial: LampState,
    pub intervals: Vec<Interval>,
}

/// Light collected by the detector while its shutter is open.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Exposure {
    pub on_time: f64,
    pub window: (f64, f64),
}

/// Extrinsic (squeezed) time of intrinsic step t: tau_t = 2 (1 - 2^{-t}).
pub fn extrinsic_time(t: u64) -> f64 {
    2.0 * (1.0 - (-(t as f64)).exp2())
}

/// Largest t with extrinsic_time(t) <= tau.  Exact round-trip at grid points.
pub fn intrinsic_from_extrinsic(tau: f64) -> Result<u64, SupertaskError> {
    if !(0.0..2.0).contains(&tau) {
        return Err(SupertaskError::OutOfDomain { tau });
    }
    let mut t = 0;
    // tau < 2 strictly and extrinsic_time rounds to 2.0 from t = 54 on,
    // so the scan terminates quickly.
    while extrinsic_time(t + 1) <= tau {
        t += 1;
    }
    Ok(t)
}

/// Lamp state after t switches: the initial state for even t, flipped for odd.
pub fn lamp_state_at(t: u64, initial: LampState) -> LampState {
    if t % 2 == 0 {
        initial
    } else {
        initial.flip()
    }
}

/// Record of the first t_max switching intervals on the extrinsic clock.
pub fn simulate_trace(t_max: u64, initial: LampState) -> LampTrace {
    assert!(t_max >= 1, "t_max must be at least 1");
    let intervals = (0..t_max)
        .map(|n| Interval {
            start: extrinsic_time(n),
            end: extrinsic_time(n + 1),
            state: lamp_state_at(n, initial),
        })
        .collect();
    LampTrace { initial, intervals }
}

impl LampTrace {
    pub fn last_boundary(&self) -> f64 {
        self.intervals.last().map_or(0.0, |iv| iv.end)
    }

    /// State of the continuation at the trace's last boundary.
    pub fn state_at_cutoff(&self) -> LampState {
        lamp_state_at(self.intervals.len() as u64, self.initial)
    }
}

/// Total "on" time inside the window [open, close].  Beyond the trace's last
/// recorded boundary the uncovered tail is apportioned by the exact geometric
/// exposure fractions of the state at the cutoff.
pub fn detector_exposure(trace: &LampTrace, open: f64, close: f64) -> Result<Exposure, SupertaskError> {
    if !(0.0 <= open && open < close && close <= 2.0) {
        return Err(SupertaskError::WindowOutsideTrace { open, close });
    }
    let mut on_time = 0.0;
    for iv in &trace.intervals {
        if iv.state == LampState::On {
            let lo = iv.start.max(open);
            let hi = iv.end.min(close);
            if hi > lo {
                on_time += hi - lo;
            }
        }
    }
    let last = trace.last_boundary();
    if close > last {
        let tail = close - last.max(open);
        let fractions = geometric_exposure_fractions(trace.state_at_cutoff());
        on_time += tail * fractions.on_fraction;
    }
    Ok(Exposure { on_time, window: (open, close) })
}
