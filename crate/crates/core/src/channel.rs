//! Urban radio channel model.
//!
//! Implements the 3GPP-style urban macro path-loss laws (distance-dependent
//! LoS probability, dual-slope LoS law with a breakpoint, NLoS law under the
//! max rule), log-normal shadow fading, Rayleigh small-scale fading vectors,
//! and the received-power helpers used by the switching optimizer.
//!
//! All operations are pure given explicit random draws; nothing here holds
//! mutable state.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::units::{db_to_linear, mw_to_dbm};

#[derive(Debug, Error, PartialEq)]
pub enum ChannelError {
    #[error("distance must be non-negative, got {0} m")]
    NegativeDistance(f64),
    #[error("antenna heights must satisfy h_b > h_u > 0, got h_b = {h_b} m, h_u = {h_u} m")]
    InvalidHeights { h_b: f64, h_u: f64 },
    #[error("height {height} m does not clear the environment height {h_e} m")]
    HeightBelowEnvironment { height: f64, h_e: f64 },
    #[error("2D distance {0} m exceeds the 5 km validity range of the path-loss model")]
    DistanceOutOfRange(f64),
    #[error("at least one supported user is required")]
    ZeroUsers,
    #[error("linear path loss must be positive, got {0}")]
    NonPositivePathLoss(f64),
    #[error("at least one antenna is required")]
    ZeroAntennas,
}

// ============================================================================
// Domain types
// ============================================================================

/// Physical constants of the radio link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelConstants {
    /// Carrier frequency in GHz.
    pub f_c_ghz: f64,
    /// Speed of light in m/s.
    pub c_mps: f64,
    /// Shadow-fading standard deviation on LoS links, dB.
    pub sigma_los_db: f64,
    /// Shadow-fading standard deviation on NLoS links, dB.
    pub sigma_nlos_db: f64,
}

impl Default for ChannelConstants {
    fn default() -> Self {
        Self {
            f_c_ghz: 2.5,
            c_mps: 299_792_458.0,
            sigma_los_db: 4.0,
            sigma_nlos_db: 6.0,
        }
    }
}

/// Geometry of one BS-to-user link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkGeometry {
    /// Horizontal (ground-plane) distance, m.
    pub d2d_m: f64,
    /// Straight-line 3D distance, m. Always `sqrt(d2d² + (h_b − h_u)²)`.
    pub d3d_m: f64,
    /// BS antenna height, m.
    pub h_b_m: f64,
    /// User height, m.
    pub h_u_m: f64,
    /// Effective environment height, m.
    pub h_e_m: f64,
}

impl LinkGeometry {
    pub fn new(d2d_m: f64, h_b_m: f64, h_u_m: f64, h_e_m: f64) -> Result<Self, ChannelError> {
        if !(d2d_m >= 0.0) {
            return Err(ChannelError::NegativeDistance(d2d_m));
        }
        if !(h_b_m > h_u_m && h_u_m > 0.0) {
            return Err(ChannelError::InvalidHeights { h_b: h_b_m, h_u: h_u_m });
        }
        let dh = h_b_m - h_u_m;
        Ok(Self {
            d2d_m,
            d3d_m: (d2d_m * d2d_m + dh * dh).sqrt(),
            h_b_m,
            h_u_m,
            h_e_m,
        })
    }

    /// Clamp the horizontal distance up to the 10 m validity floor of the
    /// path-loss laws; distances beyond 5 km are rejected.
    pub fn clamped_for_pathloss(&self) -> Result<Self, ChannelError> {
        if self.d2d_m > 5_000.0 {
            return Err(ChannelError::DistanceOutOfRange(self.d2d_m));
        }
        if self.d2d_m < 10.0 {
            Self::new(10.0, self.h_b_m, self.h_u_m, self.h_e_m)
        } else {
            Ok(*self)
        }
    }
}

/// Log-normal shadow-fading draws for one link, one per propagation state.
///
/// Drawn once per (BS, user) link per time step and reused by every method
/// evaluated in that step, so method comparisons share channel realizations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShadowFading {
    pub los_db: f64,
    pub nlos_db: f64,
}

impl ShadowFading {
    pub const ZERO: Self = Self { los_db: 0.0, nlos_db: 0.0 };

    /// Draw independent LoS/NLoS shadow terms with the configured sigmas.
    pub fn sample<R: Rng + ?Sized>(consts: &ChannelConstants, rng: &mut R) -> Self {
        let los = Normal::new(0.0, consts.sigma_los_db).expect("sigma must be non-negative");
        let nlos = Normal::new(0.0, consts.sigma_nlos_db).expect("sigma must be non-negative");
        Self {
            los_db: los.sample(rng),
            nlos_db: nlos.sample(rng),
        }
    }
}

/// How the LoS and NLoS components combine into one link loss.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MixingMode {
    /// Probability-weighted dB combination (the default).
    Expected,
    /// Bernoulli draw of the propagation state; one component is used as-is.
    Sampled,
}

/// Full path-loss decomposition of one link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkBudget {
    pub geometry: LinkGeometry,
    /// LoS probability for this horizontal distance, in [0, 1].
    pub p_los: f64,
    pub pl_los_db: f64,
    pub pl_nlos_db: f64,
    /// Combined loss actually applied to the link.
    pub pl_db: f64,
    pub shadow_los_db: f64,
    pub shadow_nlos_db: f64,
}

/// Small-scale Rayleigh fading coefficients, one per MBS antenna.
#[derive(Debug, Clone, PartialEq)]
pub struct FadingVector {
    pub coefficients: Vec<Complex64>,
}

impl FadingVector {
    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Inner product `self · other*`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.coefficients
            .iter()
            .zip(&other.coefficients)
            .map(|(a, b)| a * b.conj())
            .sum()
    }

    /// `|self · other*| / N`, the normalized cross-correlation magnitude.
    pub fn normalized_inner_magnitude(&self, other: &Self) -> f64 {
        self.inner(other).norm() / self.len() as f64
    }

    /// Mean per-antenna power `Σ|f|² / N`.
    pub fn mean_power(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum::<f64>() / self.len() as f64
    }
}

// ============================================================================
// Path-loss laws
// ============================================================================

/// LoS probability as a function of horizontal distance.
///
/// 1 within 18 m, then `18/d + exp(−d/63)·(1 − 18/d)` clamped to [0, 1].
pub fn los_probability(d2d_m: f64) -> Result<f64, ChannelError> {
    if !(d2d_m >= 0.0) {
        return Err(ChannelError::NegativeDistance(d2d_m));
    }
    if d2d_m <= 18.0 {
        return Ok(1.0);
    }
    let near = 18.0 / d2d_m;
    Ok((near + (-d2d_m / 63.0).exp() * (1.0 - near)).clamp(0.0, 1.0))
}

/// Breakpoint distance `4·(h_b − h_e)·(h_u − h_e)·f_c·1e9 / c` in m.
pub fn breakpoint_distance_m(
    h_b_m: f64,
    h_u_m: f64,
    h_e_m: f64,
    f_c_ghz: f64,
    c_mps: f64,
) -> Result<f64, ChannelError> {
    if !(h_b_m > h_e_m) {
        return Err(ChannelError::HeightBelowEnvironment { height: h_b_m, h_e: h_e_m });
    }
    if !(h_u_m > h_e_m) {
        return Err(ChannelError::HeightBelowEnvironment { height: h_u_m, h_e: h_e_m });
    }
    Ok(4.0 * (h_b_m - h_e_m) * (h_u_m - h_e_m) * f_c_ghz * 1e9 / c_mps)
}

/// LoS law below the breakpoint: `28 + 22·log10(d3D) + 20·log10(f_c) + X`.
pub fn los_pathloss_near_db(d3d_m: f64, f_c_ghz: f64, shadow_db: f64) -> f64 {
    28.0 + 22.0 * d3d_m.log10() + 20.0 * f_c_ghz.log10() + shadow_db
}

/// LoS law beyond the breakpoint:
/// `28 + 40·log10(d3D) + 20·log10(f_c) − 9·log10(d_b² + (h_b − h_u)²) + X`.
pub fn los_pathloss_far_db(
    d3d_m: f64,
    f_c_ghz: f64,
    breakpoint_m: f64,
    h_b_m: f64,
    h_u_m: f64,
    shadow_db: f64,
) -> f64 {
    let dh = h_b_m - h_u_m;
    28.0 + 40.0 * d3d_m.log10() + 20.0 * f_c_ghz.log10()
        - 9.0 * (breakpoint_m * breakpoint_m + dh * dh).log10()
        + shadow_db
}

/// NLoS law before the max rule:
/// `13.54 + 39.08·log10(d3D) + 20·log10(f_c) − 0.6·(h_u − 1.5) + X`.
pub fn nlos_pathloss_raw_db(d3d_m: f64, f_c_ghz: f64, h_u_m: f64, shadow_db: f64) -> f64 {
    13.54 + 39.08 * d3d_m.log10() + 20.0 * f_c_ghz.log10() - 0.6 * (h_u_m - 1.5) + shadow_db
}

/// LoS path loss for a link, picking the near/far law at the breakpoint.
pub fn pathloss_los_db(
    geom: &LinkGeometry,
    consts: &ChannelConstants,
    shadow_db: f64,
) -> Result<f64, ChannelError> {
    let g = geom.clamped_for_pathloss()?;
    let d_b = breakpoint_distance_m(g.h_b_m, g.h_u_m, g.h_e_m, consts.f_c_ghz, consts.c_mps)?;
    if g.d2d_m <= d_b {
        Ok(los_pathloss_near_db(g.d3d_m, consts.f_c_ghz, shadow_db))
    } else {
        Ok(los_pathloss_far_db(g.d3d_m, consts.f_c_ghz, d_b, g.h_b_m, g.h_u_m, shadow_db))
    }
}

/// NLoS path loss: the raw NLoS law floored by the zero-shadow LoS loss.
pub fn pathloss_nlos_db(
    geom: &LinkGeometry,
    consts: &ChannelConstants,
    shadow_db: f64,
) -> Result<f64, ChannelError> {
    let g = geom.clamped_for_pathloss()?;
    let los_floor = pathloss_los_db(&g, consts, 0.0)?;
    let raw = nlos_pathloss_raw_db(g.d3d_m, consts.f_c_ghz, g.h_u_m, 0.0);
    Ok(los_floor.max(raw) + shadow_db)
}

/// Build the full link budget from geometry, shadow draws and the mixing mode.
///
/// `link_state_u` is a uniform [0, 1) draw consumed only in [`MixingMode::Sampled`]
/// (compared against the LoS probability); passing it explicitly keeps the
/// function pure so one realization can be replayed across methods.
pub fn link_budget(
    geom: &LinkGeometry,
    consts: &ChannelConstants,
    shadow: ShadowFading,
    mode: MixingMode,
    link_state_u: f64,
) -> Result<LinkBudget, ChannelError> {
    let g = geom.clamped_for_pathloss()?;
    let p_los = los_probability(geom.d2d_m)?;
    let pl_los_db = pathloss_los_db(&g, consts, shadow.los_db)?;
    let pl_nlos_db = pathloss_nlos_db(&g, consts, shadow.nlos_db)?;
    let pl_db = match mode {
        MixingMode::Expected => p_los * pl_los_db + (1.0 - p_los) * pl_nlos_db,
        MixingMode::Sampled => {
            if link_state_u < p_los {
                pl_los_db
            } else {
                pl_nlos_db
            }
        }
    };
    Ok(LinkBudget {
        geometry: g,
        p_los,
        pl_los_db,
        pl_nlos_db,
        pl_db,
        shadow_los_db: shadow.los_db,
        shadow_nlos_db: shadow.nlos_db,
    })
}

/// Draw shadow fading and link state, then build the budget.
pub fn draw_link_budget<R: Rng + ?Sized>(
    geom: &LinkGeometry,
    consts: &ChannelConstants,
    mode: MixingMode,
    rng: &mut R,
) -> Result<LinkBudget, ChannelError> {
    let shadow = ShadowFading::sample(consts, rng);
    let u: f64 = rng.gen();
    link_budget(geom, consts, shadow, mode, u)
}

// ============================================================================
// Received power
// ============================================================================

/// Classic link-budget received power: `P_t + G_t + G_r − PL`, all in dB units.
pub fn received_power_dbm(p_t_dbm: f64, g_t_dbi: f64, g_r_dbi: f64, pl_db: f64) -> f64 {
    p_t_dbm + g_t_dbi + g_r_dbi - pl_db
}

/// Per-user received power from the macro cell under equal power sharing,
/// `P_T / (U · PL)`, in mW. `pl_linear` is the linear (not dB) path loss.
pub fn mbs_offload_rx_power_mw(
    p_t_mbs_w: f64,
    u_m: u32,
    pl_linear: f64,
) -> Result<f64, ChannelError> {
    if u_m == 0 {
        return Err(ChannelError::ZeroUsers);
    }
    if !(pl_linear > 0.0) {
        return Err(ChannelError::NonPositivePathLoss(pl_linear));
    }
    Ok(p_t_mbs_w * 1000.0 / (u_m as f64 * pl_linear))
}

/// [`mbs_offload_rx_power_mw`] converted to dBm for threshold comparisons.
pub fn mbs_offload_rx_power_dbm(
    p_t_mbs_w: f64,
    u_m: u32,
    pl_linear: f64,
) -> Result<f64, ChannelError> {
    Ok(mw_to_dbm(mbs_offload_rx_power_mw(p_t_mbs_w, u_m, pl_linear)?))
}

/// Per-user received power under matched-filter precoding from an `n_a`-antenna
/// macro array: `n_a · P_T / (U · PL)`, in dBm.
///
/// Coherent combining across the array multiplies the per-user share of the
/// transmit power by the array size; this is the quantity compared against the
/// QoS threshold when deciding whether a small cell's users can be offloaded.
pub fn offload_rx_power_dbm(
    p_t_mbs_w: f64,
    u_m: u32,
    n_a: u32,
    pl_db: f64,
) -> Result<f64, ChannelError> {
    if n_a == 0 {
        return Err(ChannelError::ZeroAntennas);
    }
    let per_user_mw = mbs_offload_rx_power_mw(p_t_mbs_w, u_m, db_to_linear(pl_db))?;
    Ok(mw_to_dbm(n_a as f64 * per_user_mw))
}

// ============================================================================
// Small-scale fading
// ============================================================================

/// Draw a length-`n_a` circularly-symmetric complex Gaussian fading vector
/// with unit variance per coefficient.
pub fn sample_fading<R: Rng + ?Sized>(n_a: u32, rng: &mut R) -> Result<FadingVector, ChannelError> {
    if n_a == 0 {
        return Err(ChannelError::ZeroAntennas);
    }
    let scale = 0.5f64.sqrt();
    let coefficients = (0..n_a)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex64::new(re * scale, im * scale)
        })
        .collect();
    Ok(FadingVector { coefficients })
}
