//! World construction: topology, user placement, traffic field and per-step
//! channel realizations.
//!
//! A [`Scenario`] is immutable once built and fully determined by its config
//! and seed. Channel randomness is drawn per time step into a
//! [`ChannelSnapshot`] that every switching method shares, so method
//! comparisons always see identical realizations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::{
    link_budget, offload_rx_power_dbm, ChannelConstants, ChannelError, LinkGeometry, MixingMode,
    ShadowFading,
};
use crate::power::{BaseStationProfile, BsKind, PowerError};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("traffic scale must lie in (0, 1], got {0}")]
    InvalidAlpha(f64),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Power(#[from] PowerError),
}

// ============================================================================
// Geometry and traffic
// ============================================================================

/// A point in the simulation plane, metres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x_m: f64,
    pub y_m: f64,
}

impl Point {
    pub fn distance_to(&self, other: &Point) -> f64 {
        ((self.x_m - other.x_m).powi(2) + (self.y_m - other.y_m).powi(2)).sqrt()
    }
}

/// 2D Gaussian traffic intensity field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrafficField {
    pub mean: Point,
    pub sigma_x_m: f64,
    pub sigma_y_m: f64,
    /// Peak load scale in (0, 1].
    pub alpha: f64,
}

/// Load factor assigned to a position by the traffic field, clipped to [0, 1].
pub fn gaussian_load(position: &Point, field: &TrafficField) -> f64 {
    let dx = position.x_m - field.mean.x_m;
    let dy = position.y_m - field.mean.y_m;
    let exponent = dx * dx / (2.0 * field.sigma_x_m * field.sigma_x_m)
        + dy * dy / (2.0 * field.sigma_y_m * field.sigma_y_m);
    (field.alpha * (-exponent).exp()).clamp(0.0, 1.0)
}

// ============================================================================
// Network elements
// ============================================================================

/// One small cell: position, hardware class, coverage radius and its assigned
/// share of the traffic field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmallCell {
    pub id: usize,
    pub position: Point,
    pub kind: BsKind,
    pub profile: BaseStationProfile,
    pub radius_m: f64,
    pub capacity: f64,
    /// Aggregate load factor of this cell, in [0, 1].
    pub load: f64,
}

/// The always-on macro cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MacroCell {
    pub position: Point,
    pub profile: BaseStationProfile,
    pub antenna_gain_dbi: f64,
    pub capacity: f64,
    pub height_m: f64,
}

/// One user, tied to its home small cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct User {
    pub position: Point,
    pub sbs_id: usize,
    /// This user's share of its home cell's aggregate load.
    pub load_share: f64,
}

// ============================================================================
// Configuration
// ============================================================================

fn default_area() -> f64 { 2000.0 }
fn default_grid() -> usize { 7 }
fn default_sbs_radius() -> f64 { 50.0 }
fn default_sbs_capacity() -> f64 { 5.0 }
fn default_mbs_capacity() -> f64 { 20.0 }
fn default_users_per_sbs() -> usize { 3 }
fn default_alpha() -> f64 { 0.5 }
fn default_p_min() -> f64 { -70.0 }
fn default_mbs_antennas() -> u32 { 65_536 }
fn default_mbs_max_users() -> u32 { 20 }
fn default_mbs_base_load() -> f64 { 0.2 }
fn default_traffic_sigma() -> f64 { 600.0 }
fn default_mbs_gain() -> f64 { 8.0 }
fn default_mbs_height() -> f64 { 25.0 }
fn default_sbs_height() -> f64 { 10.0 }
fn default_user_height() -> f64 { 1.5 }
fn default_env_height() -> f64 { 1.0 }
fn default_mixing() -> MixingMode { MixingMode::Expected }
fn default_seed() -> u64 { 0 }

/// Everything needed to build a [`Scenario`]; JSON-serializable with
/// per-field defaults so partial config files work.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Square area side length, m.
    #[serde(default = "default_area")]
    pub area_m: f64,
    /// Small cells are laid out on a `sbs_grid` × `sbs_grid` grid.
    #[serde(default = "default_grid")]
    pub sbs_grid: usize,
    #[serde(default = "default_sbs_radius")]
    pub sbs_radius_m: f64,
    #[serde(default = "default_sbs_capacity")]
    pub sbs_capacity: f64,
    #[serde(default = "default_mbs_capacity")]
    pub mbs_capacity: f64,
    #[serde(default = "default_users_per_sbs")]
    pub users_per_sbs: usize,
    /// Traffic scale in (0, 1].
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    /// QoS threshold on offloaded users' received power, dBm.
    #[serde(default = "default_p_min")]
    pub p_min_dbm: f64,
    /// Macro array size used by the matched-filter received-power figure.
    #[serde(default = "default_mbs_antennas")]
    pub mbs_antennas: u32,
    /// User count the macro cell's transmit power is shared across.
    #[serde(default = "default_mbs_max_users")]
    pub mbs_max_users: u32,
    /// Macro load before any offloading, in [0, 1].
    #[serde(default = "default_mbs_base_load")]
    pub mbs_base_load: f64,
    #[serde(default = "default_traffic_sigma")]
    pub traffic_sigma_m: f64,
    #[serde(default = "default_mbs_gain")]
    pub mbs_antenna_gain_dbi: f64,
    #[serde(default = "default_mbs_height")]
    pub mbs_height_m: f64,
    #[serde(default = "default_sbs_height")]
    pub sbs_height_m: f64,
    #[serde(default = "default_user_height")]
    pub user_height_m: f64,
    #[serde(default = "default_env_height")]
    pub env_height_m: f64,
    #[serde(default)]
    pub channel: ChannelDefaults,
    #[serde(default = "default_mixing")]
    pub los_mixing: MixingMode,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Optional power-profile overrides, matched by hardware class.
    #[serde(default)]
    pub profile_overrides: Vec<BaseStationProfile>,
}

/// Carrier and shadow-fading constants with their usual urban defaults.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelDefaults {
    pub f_c_ghz: f64,
    pub c_mps: f64,
    pub sigma_los_db: f64,
    pub sigma_nlos_db: f64,
}

impl Default for ChannelDefaults {
    fn default() -> Self {
        let c = ChannelConstants::default();
        Self {
            f_c_ghz: c.f_c_ghz,
            c_mps: c.c_mps,
            sigma_los_db: c.sigma_los_db,
            sigma_nlos_db: c.sigma_nlos_db,
        }
    }
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all fields have defaults")
    }
}

impl ScenarioConfig {
    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_p_min(mut self, p_min_dbm: f64) -> Self {
        self.p_min_dbm = p_min_dbm;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

// ============================================================================
// Scenario
// ============================================================================

/// Immutable world state for one traffic snapshot.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scenario {
    pub area_m: f64,
    pub mbs: MacroCell,
    pub sbs: Vec<SmallCell>,
    pub users: Vec<User>,
    pub consts: ChannelConstants,
    pub traffic: TrafficField,
    pub p_min_dbm: f64,
    pub mbs_antennas: u32,
    pub mbs_max_users: u32,
    pub mbs_base_load: f64,
    pub user_height_m: f64,
    pub env_height_m: f64,
    pub los_mixing: MixingMode,
    pub seed: u64,
}

impl Scenario {
    pub fn sbs_count(&self) -> usize {
        self.sbs.len()
    }

    pub fn sbs_loads(&self) -> Vec<f64> {
        self.sbs.iter().map(|s| s.load).collect()
    }

    pub fn sbs_profiles(&self) -> Vec<BaseStationProfile> {
        self.sbs.iter().map(|s| s.profile).collect()
    }

    /// Per-cell capacity relative to the macro cell.
    pub fn capacity_ratios(&self) -> Vec<f64> {
        self.sbs.iter().map(|s| s.capacity / self.mbs.capacity).collect()
    }

    /// Indices into `users` grouped by home cell.
    pub fn users_by_sbs(&self) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); self.sbs.len()];
        for (i, u) in self.users.iter().enumerate() {
            groups[u.sbs_id].push(i);
        }
        groups
    }

    /// Traffic on offer: the macro cell's own base traffic plus every cell's
    /// capacity-weighted load. Accumulated in the same order as the served
    /// metric so a zero-outage decision serves the offered amount bit-exactly.
    pub fn offered_traffic(&self) -> f64 {
        let mut total = self.mbs.capacity * self.mbs_base_load;
        for cell in &self.sbs {
            total += cell.capacity * cell.load;
        }
        total
    }
}

/// Sample a point uniformly inside a disc by rejection from its bounding box.
fn sample_in_disc<R: Rng + ?Sized>(center: &Point, radius_m: f64, rng: &mut R) -> Point {
    loop {
        let dx = rng.gen_range(-radius_m..=radius_m);
        let dy = rng.gen_range(-radius_m..=radius_m);
        if dx * dx + dy * dy <= radius_m * radius_m {
            return Point { x_m: center.x_m + dx, y_m: center.y_m + dy };
        }
    }
}

/// Place `users_per_sbs` users uniformly inside each cell's coverage disc;
/// each carries an equal share of its cell's load.
pub fn place_users<R: Rng + ?Sized>(
    sbs: &[SmallCell],
    users_per_sbs: usize,
    rng: &mut R,
) -> Vec<User> {
    let mut users = Vec::with_capacity(sbs.len() * users_per_sbs);
    for cell in sbs {
        for _ in 0..users_per_sbs {
            users.push(User {
                position: sample_in_disc(&cell.position, cell.radius_m, rng),
                sbs_id: cell.id,
                load_share: cell.load / users_per_sbs as f64,
            });
        }
    }
    users
}

fn profile_for(kind: BsKind, overrides: &[BaseStationProfile]) -> BaseStationProfile {
    overrides
        .iter()
        .find(|p| p.kind == kind)
        .copied()
        .unwrap_or_else(|| BaseStationProfile::table(kind))
}

/// Build a scenario from its configuration. Deterministic in (config, seed).
pub fn build_scenario(config: &ScenarioConfig) -> Result<Scenario, ScenarioError> {
    if !(config.alpha > 0.0 && config.alpha <= 1.0) {
        return Err(ScenarioError::InvalidAlpha(config.alpha));
    }
    if config.sbs_grid == 0 {
        return Err(ScenarioError::InvalidConfig("sbs_grid must be positive".into()));
    }
    if config.users_per_sbs == 0 {
        return Err(ScenarioError::InvalidConfig("users_per_sbs must be positive".into()));
    }
    if !(0.0..=1.0).contains(&config.mbs_base_load) {
        return Err(ScenarioError::InvalidConfig(format!(
            "mbs_base_load must lie in [0, 1], got {}",
            config.mbs_base_load
        )));
    }
    for p in &config.profile_overrides {
        p.validate()?;
    }

    let consts = ChannelConstants {
        f_c_ghz: config.channel.f_c_ghz,
        c_mps: config.channel.c_mps,
        sigma_los_db: config.channel.sigma_los_db,
        sigma_nlos_db: config.channel.sigma_nlos_db,
    };
    let center = Point { x_m: config.area_m / 2.0, y_m: config.area_m / 2.0 };
    let traffic = TrafficField {
        mean: center,
        sigma_x_m: config.traffic_sigma_m,
        sigma_y_m: config.traffic_sigma_m,
        alpha: config.alpha,
    };

    // Hardware classes cycle across the grid; with 49 cells this yields the
    // 13 micro / 12 rrh / 12 pico / 12 femto mix.
    let cycle = [BsKind::Micro, BsKind::Rrh, BsKind::Pico, BsKind::Femto];
    let spacing = config.area_m / config.sbs_grid as f64;
    let mut sbs = Vec::with_capacity(config.sbs_grid * config.sbs_grid);
    for row in 0..config.sbs_grid {
        for col in 0..config.sbs_grid {
            let id = row * config.sbs_grid + col;
            let position = Point {
                x_m: (col as f64 + 0.5) * spacing,
                y_m: (row as f64 + 0.5) * spacing,
            };
            let kind = cycle[id % cycle.len()];
            sbs.push(SmallCell {
                id,
                position,
                kind,
                profile: profile_for(kind, &config.profile_overrides),
                radius_m: config.sbs_radius_m,
                capacity: config.sbs_capacity,
                load: gaussian_load(&position, &traffic),
            });
        }
    }

    // Stream 0 of the seed drives placement; channel steps use streams 1+t.
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let users = place_users(&sbs, config.users_per_sbs, &mut rng);

    Ok(Scenario {
        area_m: config.area_m,
        mbs: MacroCell {
            position: center,
            profile: profile_for(BsKind::Macro, &config.profile_overrides),
            antenna_gain_dbi: config.mbs_antenna_gain_dbi,
            capacity: config.mbs_capacity,
            height_m: config.mbs_height_m,
        },
        sbs,
        users,
        consts,
        traffic,
        p_min_dbm: config.p_min_dbm,
        mbs_antennas: config.mbs_antennas,
        mbs_max_users: config.mbs_max_users,
        mbs_base_load: config.mbs_base_load,
        user_height_m: config.user_height_m,
        env_height_m: config.env_height_m,
        los_mixing: config.los_mixing,
        seed: config.seed,
    })
}

/// Default world with the standard parameter set.
pub fn build_default_scenario(
    alpha: f64,
    p_min_dbm: f64,
    seed: u64,
) -> Result<Scenario, ScenarioError> {
    build_scenario(
        &ScenarioConfig::default()
            .with_alpha(alpha)
            .with_p_min(p_min_dbm)
            .with_seed(seed),
    )
}

// ============================================================================
// Channel snapshot
// ============================================================================

/// One time step's channel realization: each user's macro-cell link and the
/// received power it would see when offloaded.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSnapshot {
    pub step: u64,
    /// Macro-link path loss per user, aligned with `Scenario::users`.
    pub pl_db: Vec<f64>,
    /// Offload received power per user, dBm, aligned with `Scenario::users`.
    pub rx_dbm: Vec<f64>,
}

impl ChannelSnapshot {
    /// Draw the step's shadow fading and link states. Deterministic in
    /// (scenario seed, step); independent of which methods later consume it.
    pub fn draw(scenario: &Scenario, step: u64) -> Result<Self, ScenarioError> {
        let mut rng = ChaCha8Rng::seed_from_u64(scenario.seed);
        rng.set_stream(1 + step);

        let mut pl_db = Vec::with_capacity(scenario.users.len());
        let mut rx_dbm = Vec::with_capacity(scenario.users.len());
        for user in &scenario.users {
            let d2d = user.position.distance_to(&scenario.mbs.position);
            let geom = LinkGeometry::new(
                d2d,
                scenario.mbs.height_m,
                scenario.user_height_m,
                scenario.env_height_m,
            )?;
            let shadow = ShadowFading::sample(&scenario.consts, &mut rng);
            let u: f64 = rng.gen();
            let budget = link_budget(&geom, &scenario.consts, shadow, scenario.los_mixing, u)?;
            let rx = offload_rx_power_dbm(
                scenario.mbs.profile.p_t_w,
                scenario.mbs_max_users,
                scenario.mbs_antennas,
                budget.pl_db,
            )?;
            pl_db.push(budget.pl_db);
            rx_dbm.push(rx);
        }
        Ok(Self { step, pl_db, rx_dbm })
    }

    /// Worst (lowest) offload received power among a cell's users.
    pub fn worst_rx_dbm(&self, scenario: &Scenario, sbs_id: usize) -> f64 {
        scenario
            .users
            .iter()
            .enumerate()
            .filter(|(_, u)| u.sbs_id == sbs_id)
            .map(|(i, _)| self.rx_dbm[i])
            .fold(f64::INFINITY, f64::min)
    }
}
