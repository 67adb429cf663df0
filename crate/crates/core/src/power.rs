//! Base-station and network power accounting.
//!
//! Uses the affine load-dependent consumption model: an active station draws
//! its operational circuit power plus an amplifier term proportional to load
//! and transmit power, a sleeping station draws its sleep power. The macro
//! station never sleeps.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PowerError {
    #[error("load factor must lie in [0, 1], got {0}")]
    LoadOutOfRange(f64),
    #[error("expected {expected} entries, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid power profile: {0}")]
    InvalidProfile(String),
}

/// Base-station hardware class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BsKind {
    Macro,
    Rrh,
    Micro,
    Pico,
    Femto,
}

impl BsKind {
    pub const ALL: [BsKind; 5] = [BsKind::Macro, BsKind::Rrh, BsKind::Micro, BsKind::Pico, BsKind::Femto];

    pub fn name(self) -> &'static str {
        match self {
            BsKind::Macro => "macro",
            BsKind::Rrh => "rrh",
            BsKind::Micro => "micro",
            BsKind::Pico => "pico",
            BsKind::Femto => "femto",
        }
    }
}

/// Per-type power profile: amplifier efficiency, transmit, operational and
/// sleep power.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaseStationProfile {
    pub kind: BsKind,
    /// Power-amplifier efficiency multiplier on the load-dependent term.
    pub eta: f64,
    /// Transmit power, W.
    pub p_t_w: f64,
    /// Operational circuit power while active, W.
    pub p_o_w: f64,
    /// Sleep-mode circuit power, W.
    pub p_s_w: f64,
}

impl BaseStationProfile {
    /// Built-in profile table (measured figures per hardware class).
    pub fn table(kind: BsKind) -> Self {
        let (eta, p_t_w, p_o_w, p_s_w) = match kind {
            BsKind::Macro => (4.7, 20.0, 130.0, 75.0),
            BsKind::Rrh => (2.8, 20.0, 84.0, 56.0),
            BsKind::Micro => (2.6, 6.3, 56.0, 39.0),
            BsKind::Pico => (4.0, 0.13, 6.8, 4.3),
            BsKind::Femto => (8.0, 0.05, 4.8, 2.9),
        };
        Self { kind, eta, p_t_w, p_o_w, p_s_w }
    }

    pub fn validate(&self) -> Result<(), PowerError> {
        if !(self.p_o_w > self.p_s_w && self.p_s_w > 0.0) {
            return Err(PowerError::InvalidProfile(format!(
                "need p_o > p_s > 0, got p_o = {}, p_s = {}",
                self.p_o_w, self.p_s_w
            )));
        }
        if !(self.eta > 0.0 && self.p_t_w > 0.0) {
            return Err(PowerError::InvalidProfile(format!(
                "need eta > 0 and p_t > 0, got eta = {}, p_t = {}",
                self.eta, self.p_t_w
            )));
        }
        Ok(())
    }
}

/// Power drawn by one station at the given load.
pub fn bs_power_w(
    profile: &BaseStationProfile,
    load: f64,
    active: bool,
) -> Result<f64, PowerError> {
    if !(0.0..=1.0).contains(&load) {
        return Err(PowerError::LoadOutOfRange(load));
    }
    if active {
        Ok(profile.p_o_w + profile.eta * load * profile.p_t_w)
    } else {
        Ok(profile.p_s_w)
    }
}

/// Post-offload macro load: the base load plus every sleeping cell's load
/// scaled by its capacity ratio.
pub fn mbs_load(
    active: &[bool],
    mbs_base_load: f64,
    sbs_loads: &[f64],
    capacity_ratios: &[f64],
) -> Result<f64, PowerError> {
    if sbs_loads.len() != active.len() || capacity_ratios.len() != active.len() {
        return Err(PowerError::DimensionMismatch {
            expected: active.len(),
            got: sbs_loads.len().min(capacity_ratios.len()),
        });
    }
    if !(0.0..=1.0).contains(&mbs_base_load) {
        return Err(PowerError::LoadOutOfRange(mbs_base_load));
    }
    let offloaded: f64 = active
        .iter()
        .zip(sbs_loads)
        .zip(capacity_ratios)
        .filter(|((on, _), _)| !**on)
        .map(|((_, load), ratio)| load * ratio)
        .sum();
    Ok(mbs_base_load + offloaded)
}

/// Total instantaneous network power: the always-active macro station plus
/// every small cell in its current state.
///
/// `mbs_load` must already account for the offloaded traffic (see
/// [`mbs_load`]); this function does no load folding of its own.
pub fn network_power_w(
    active: &[bool],
    sbs_loads: &[f64],
    sbs_profiles: &[BaseStationProfile],
    mbs_profile: &BaseStationProfile,
    mbs_load: f64,
) -> Result<f64, PowerError> {
    if sbs_loads.len() != active.len() || sbs_profiles.len() != active.len() {
        return Err(PowerError::DimensionMismatch {
            expected: active.len(),
            got: sbs_loads.len().min(sbs_profiles.len()),
        });
    }
    let mut total = bs_power_w(mbs_profile, mbs_load, true)?;
    for ((on, load), profile) in active.iter().zip(sbs_loads).zip(sbs_profiles) {
        total += bs_power_w(profile, *load, *on)?;
    }
    Ok(total)
}
