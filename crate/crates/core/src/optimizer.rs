//! Exact cell-switching optimizer.
//!
//! Switching a small cell off removes its active draw (operational plus
//! load-proportional amplifier power), adds its sleep draw back, and hands its
//! load to the macro cell, whose amplifier term grows by
//! `eta_M · P_T,M · load · capacity_ratio`. Total network power therefore
//! decomposes as
//!
//! ```text
//! P(active set) = P_all_on − Σ_{j off} saving_j
//! saving_j      = (P_O,j + eta_j·load_j·P_T,j − P_S,j)
//!                 − eta_M·P_T,M·load_j·ratio_j
//! ```
//!
//! and the macro-capacity constraint `mbs_load ≤ 1` becomes
//! `Σ_{j off} load_j·ratio_j ≤ 1 − mbs_base_load`. Cells whose offloaded
//! users would drop below the received-power threshold are pinned on. What
//! remains is a 0/1 knapsack — pick the set of cells to switch off that
//! maximizes total saving within the residual macro capacity — which this
//! module solves exactly with best-first branch and bound under the
//! fractional-knapsack bound, plus a brute-force enumerator and a
//! discretized DP used as independent oracles in tests.

use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap};

use thiserror::Error;

use crate::scenario::{ChannelSnapshot, Scenario};

#[derive(Debug, Error, PartialEq)]
pub enum SolveError {
    #[error("macro base load exceeds 1 (residual capacity {0}); instance infeasible")]
    Infeasible(f64),
    #[error("brute force limited to {max} cells, got {got}")]
    TooLarge { got: usize, max: usize },
    #[error("branch and bound limited to {max} candidate cells, got {got}")]
    TooManyCandidates { got: usize, max: usize },
    #[error("channel snapshot covers {got} users but the scenario has {expected}")]
    MissingChannelData { expected: usize, got: usize },
    #[error("item {index} has invalid {field}: {value}")]
    InvalidItem { index: usize, field: &'static str, value: f64 },
}

/// Per-cell reduction data for the switching knapsack.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwitchItem {
    /// Net power saved by switching this cell off, W.
    pub saving_w: f64,
    /// Macro load added when this cell's traffic is offloaded.
    pub weight: f64,
    /// Pinned on because some user would fall below the QoS threshold.
    pub forced_on: bool,
}

/// The reduced optimization instance.
#[derive(Debug, Clone, PartialEq)]
pub struct SwitchInstance {
    pub items: Vec<SwitchItem>,
    /// Residual macro capacity, `1 − mbs_base_load`.
    pub capacity: f64,
    /// Network power with every cell active, W.
    pub base_power_w: f64,
}

impl SwitchInstance {
    fn validate(&self) -> Result<(), SolveError> {
        for (index, item) in self.items.iter().enumerate() {
            if !item.weight.is_finite() || item.weight < 0.0 {
                return Err(SolveError::InvalidItem { index, field: "weight", value: item.weight });
            }
            if !item.saving_w.is_finite() {
                return Err(SolveError::InvalidItem { index, field: "saving", value: item.saving_w });
            }
        }
        if self.capacity < 0.0 {
            return Err(SolveError::Infeasible(self.capacity));
        }
        Ok(())
    }

    /// The same instance with every QoS pin removed.
    pub fn without_forcing(&self) -> Self {
        let mut relaxed = self.clone();
        for item in &mut relaxed.items {
            item.forced_on = false;
        }
        relaxed
    }

    pub fn mbs_base_load(&self) -> f64 {
        1.0 - self.capacity
    }
}

/// A switching decision: which cells stay active and what it costs.
#[derive(Debug, Clone, PartialEq)]
pub struct SwitchDecision {
    /// `true` = cell stays on.
    pub active: Vec<bool>,
    pub total_power_w: f64,
    /// Macro load after offloading.
    pub lambda_m: f64,
    /// Cells switched off although some user misses the QoS threshold.
    /// Non-empty only for methods that ignore QoS.
    pub outage_sbs: BTreeSet<usize>,
}

impl SwitchDecision {
    pub fn off_count(&self) -> usize {
        self.active.iter().filter(|on| !**on).count()
    }
}

// ============================================================================
// Instance construction
// ============================================================================

/// Reduce a scenario plus one channel realization to a [`SwitchInstance`].
pub fn build_instance(
    scenario: &Scenario,
    snapshot: &ChannelSnapshot,
) -> Result<SwitchInstance, SolveError> {
    if snapshot.rx_dbm.len() != scenario.users.len() {
        return Err(SolveError::MissingChannelData {
            expected: scenario.users.len(),
            got: snapshot.rx_dbm.len(),
        });
    }
    let mbs = &scenario.mbs.profile;
    let mut worst_rx = vec![f64::INFINITY; scenario.sbs.len()];
    for (user, rx) in scenario.users.iter().zip(&snapshot.rx_dbm) {
        worst_rx[user.sbs_id] = worst_rx[user.sbs_id].min(*rx);
    }

    let items = scenario
        .sbs
        .iter()
        .map(|cell| {
            let ratio = cell.capacity / scenario.mbs.capacity;
            let own_draw_delta =
                cell.profile.p_o_w + cell.profile.eta * cell.load * cell.profile.p_t_w
                    - cell.profile.p_s_w;
            let coupling = mbs.eta * mbs.p_t_w * cell.load * ratio;
            SwitchItem {
                saving_w: own_draw_delta - coupling,
                weight: cell.load * ratio,
                forced_on: worst_rx[cell.id] < scenario.p_min_dbm,
            }
        })
        .collect();

    let base_power_w = all_on_power_w(scenario);
    Ok(SwitchInstance {
        items,
        capacity: 1.0 - scenario.mbs_base_load,
        base_power_w,
    })
}

/// Network power with every cell active and no offloading.
pub fn all_on_power_w(scenario: &Scenario) -> f64 {
    let mbs = &scenario.mbs.profile;
    let mut total = mbs.p_o_w + mbs.eta * scenario.mbs_base_load * mbs.p_t_w;
    for cell in &scenario.sbs {
        total += cell.profile.p_o_w + cell.profile.eta * cell.load * cell.profile.p_t_w;
    }
    total
}

/// Cells switched off whose worst user misses the QoS threshold.
pub fn outage_set(
    scenario: &Scenario,
    snapshot: &ChannelSnapshot,
    active: &[bool],
) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    for (user, rx) in scenario.users.iter().zip(&snapshot.rx_dbm) {
        if !active[user.sbs_id] && *rx < scenario.p_min_dbm {
            out.insert(user.sbs_id);
        }
    }
    out
}

/// Assemble the decision for a chosen off-set. The objective is always the
/// base power minus the savings summed in ascending cell order, so every
/// solver producing the same set produces the bit-identical objective.
fn decision_from_off_set(instance: &SwitchInstance, off: &[usize]) -> SwitchDecision {
    let mut active = vec![true; instance.items.len()];
    let mut saving = 0.0;
    let mut offloaded = 0.0;
    for &j in off {
        active[j] = false;
        saving += instance.items[j].saving_w;
        offloaded += instance.items[j].weight;
    }
    SwitchDecision {
        active,
        total_power_w: instance.base_power_w - saving,
        lambda_m: instance.mbs_base_load() + offloaded,
        outage_sbs: BTreeSet::new(),
    }
}

/// Order two equal-value solutions: fewer cells off first, then the
/// lexicographically smallest activation pattern (off at the lowest index).
fn tie_break(a_off: &[usize], b_off: &[usize]) -> Ordering {
    a_off.len().cmp(&b_off.len()).then_with(|| {
        // Smaller first-off index wins; identical prefixes fall through.
        for (x, y) in a_off.iter().zip(b_off.iter()) {
            match x.cmp(y) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    })
}

// ============================================================================
// Brute-force oracle
// ============================================================================

const BRUTEFORCE_MAX: usize = 20;

/// Exhaustively enumerate every feasible switch-off set (test oracle).
///
/// Ties go to fewer cells off, then to the lexicographically smallest
/// activation pattern.
pub fn solve_bruteforce(instance: &SwitchInstance) -> Result<SwitchDecision, SolveError> {
    instance.validate()?;
    let n = instance.items.len();
    if n > BRUTEFORCE_MAX {
        return Err(SolveError::TooLarge { got: n, max: BRUTEFORCE_MAX });
    }
    let candidates: Vec<usize> =
        (0..n).filter(|&j| !instance.items[j].forced_on).collect();
    let m = candidates.len();

    let mut best_off: Vec<usize> = Vec::new();
    let mut best_value = 0.0;
    for mask in 0u64..(1u64 << m) {
        let mut weight = 0.0;
        let mut value = 0.0;
        for (bit, &j) in candidates.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                weight += instance.items[j].weight;
                value += instance.items[j].saving_w;
            }
        }
        if weight > instance.capacity {
            continue;
        }
        if value > best_value {
            best_value = value;
            best_off = candidates
                .iter()
                .enumerate()
                .filter(|(bit, _)| mask >> bit & 1 == 1)
                .map(|(_, &j)| j)
                .collect();
        } else if value == best_value {
            let off: Vec<usize> = candidates
                .iter()
                .enumerate()
                .filter(|(bit, _)| mask >> bit & 1 == 1)
                .map(|(_, &j)| j)
                .collect();
            if tie_break(&off, &best_off) == Ordering::Less {
                best_off = off;
            }
        }
    }
    Ok(decision_from_off_set(instance, &best_off))
}

// ============================================================================
// Branch and bound
// ============================================================================

const BRANCH_AND_BOUND_MAX: usize = 128;

#[derive(Debug)]
struct Node {
    bound: f64,
    seq: u64,
    level: usize,
    value: f64,
    weight: f64,
    taken: u128,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.bound == other.bound && self.seq == other.seq
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        // Max-heap on bound; FIFO among equal bounds for determinism.
        self.bound
            .total_cmp(&other.bound)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Fractional-knapsack upper bound on the value attainable from `level` on.
fn fractional_bound(items: &[(usize, f64, f64)], level: usize, capacity_left: f64) -> f64 {
    let mut bound = 0.0;
    let mut cap = capacity_left;
    for &(_, saving, weight) in &items[level..] {
        if weight <= cap {
            bound += saving;
            cap -= weight;
        } else {
            if cap > 0.0 {
                bound += saving * cap / weight;
            }
            break;
        }
    }
    bound
}

/// Exact switch-off optimizer: best-first branch and bound over the knapsack
/// reduction. Cells with non-positive saving are never switched off.
pub fn solve_exact(instance: &SwitchInstance) -> Result<SwitchDecision, SolveError> {
    instance.validate()?;

    // Zero-load cells save power for free: switch them off unconditionally.
    let mut always_off: Vec<usize> = Vec::new();
    // Positive-weight, positive-saving cells enter the search.
    let mut searched: Vec<(usize, f64, f64)> = Vec::new();
    for (j, item) in instance.items.iter().enumerate() {
        if item.forced_on || item.saving_w <= 0.0 {
            continue;
        }
        if item.weight == 0.0 {
            always_off.push(j);
        } else if item.weight <= instance.capacity {
            searched.push((j, item.saving_w, item.weight));
        }
    }
    if searched.len() > BRANCH_AND_BOUND_MAX {
        return Err(SolveError::TooManyCandidates {
            got: searched.len(),
            max: BRANCH_AND_BOUND_MAX,
        });
    }
    // Density order for the greedy incumbent and the LP bound; index breaks
    // exact density ties so the traversal is deterministic.
    searched.sort_by(|a, b| {
        (b.1 / b.2).total_cmp(&(a.1 / a.2)).then_with(|| a.0.cmp(&b.0))
    });
    let n = searched.len();

    // Greedy incumbent.
    let mut incumbent_mask: u128 = 0;
    let mut incumbent_value = 0.0;
    let mut cap = instance.capacity;
    for (pos, &(_, saving, weight)) in searched.iter().enumerate() {
        if weight <= cap {
            incumbent_mask |= 1 << pos;
            incumbent_value += saving;
            cap -= weight;
        }
    }

    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    let root_bound = fractional_bound(&searched, 0, instance.capacity);
    heap.push(Node { bound: root_bound, seq, level: 0, value: 0.0, weight: 0.0, taken: 0 });

    while let Some(node) = heap.pop() {
        if node.bound <= incumbent_value {
            // Best-first: every remaining node is bounded at least as tightly.
            break;
        }
        if node.level == n {
            if node.value > incumbent_value {
                incumbent_value = node.value;
                incumbent_mask = node.taken;
            }
            continue;
        }
        let (_, saving, weight) = searched[node.level];

        // Child taking the current cell off.
        if node.weight + weight <= instance.capacity {
            let value = node.value + saving;
            let bound = value
                + fractional_bound(
                    &searched,
                    node.level + 1,
                    instance.capacity - node.weight - weight,
                );
            if bound > incumbent_value {
                seq += 1;
                heap.push(Node {
                    bound,
                    seq,
                    level: node.level + 1,
                    value,
                    weight: node.weight + weight,
                    taken: node.taken | 1 << node.level,
                });
            }
        }
        // Child keeping it on.
        let bound = node.value
            + fractional_bound(&searched, node.level + 1, instance.capacity - node.weight);
        if bound > incumbent_value {
            seq += 1;
            heap.push(Node {
                bound,
                seq,
                level: node.level + 1,
                value: node.value,
                weight: node.weight,
                taken: node.taken,
            });
        }
    }

    let mut off: Vec<usize> = always_off;
    for (pos, &(j, _, _)) in searched.iter().enumerate() {
        if incumbent_mask >> pos & 1 == 1 {
            off.push(j);
        }
    }
    off.sort_unstable();
    Ok(decision_from_off_set(instance, &off))
}

// ============================================================================
// Discretized DP backend
// ============================================================================

/// Knapsack DP over weights rounded up to multiples of `weight_unit`.
///
/// Exact whenever every weight and the capacity sit on the grid; otherwise
/// conservative (never selects an infeasible set, may miss the optimum by the
/// rounding). Kept as an independent cross-check backend.
pub fn solve_dp(instance: &SwitchInstance, weight_unit: f64) -> Result<SwitchDecision, SolveError> {
    instance.validate()?;
    assert!(weight_unit > 0.0, "weight_unit must be positive");
    let cap_units = (instance.capacity / weight_unit + 1e-9).floor() as usize;
    let scaled: Vec<(usize, usize, f64)> = instance
        .items
        .iter()
        .enumerate()
        .filter(|(_, it)| !it.forced_on && it.saving_w > 0.0)
        .map(|(j, it)| (j, (it.weight / weight_unit - 1e-9).ceil().max(0.0) as usize, it.saving_w))
        .collect();

    let mut value = vec![0.0f64; cap_units + 1];
    let mut chosen = vec![0u128; cap_units + 1];
    for (pos, &(_, w, saving)) in scaled.iter().enumerate() {
        if w > cap_units {
            continue;
        }
        for c in (w..=cap_units).rev() {
            let candidate = value[c - w] + saving;
            if candidate > value[c] {
                value[c] = candidate;
                chosen[c] = chosen[c - w] | 1 << pos;
            }
        }
    }
    let best_c = (0..=cap_units)
        .max_by(|&a, &b| value[a].total_cmp(&value[b]).then(b.cmp(&a)))
        .unwrap_or(0);
    let mut off: Vec<usize> = scaled
        .iter()
        .enumerate()
        .filter(|(pos, _)| chosen[best_c] >> pos & 1 == 1)
        .map(|(_, &(j, _, _))| j)
        .collect();
    off.sort_unstable();
    Ok(decision_from_off_set(instance, &off))
}

// ============================================================================
// Proposed method
// ============================================================================

/// QoS-aware optimal cell switching: pin every cell whose users cannot be
/// offloaded within the received-power threshold, then switch off the exact
/// power-optimal set of the rest.
pub fn proposed_cs(
    scenario: &Scenario,
    snapshot: &ChannelSnapshot,
) -> Result<SwitchDecision, SolveError> {
    let instance = build_instance(scenario, snapshot)?;
    let mut decision = solve_exact(&instance)?;
    decision.outage_sbs = outage_set(scenario, snapshot, &decision.active);
    Ok(decision)
}
