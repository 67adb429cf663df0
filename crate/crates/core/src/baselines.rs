//! Reference switching policies the optimizer is compared against.

use crate::optimizer::{
    all_on_power_w, build_instance, outage_set, solve_exact, SolveError, SwitchDecision,
};
use crate::scenario::{ChannelSnapshot, Scenario};
use std::collections::BTreeSet;

/// Keep every cell active. The power-consumption ceiling; no QoS exposure.
pub fn all_on(scenario: &Scenario) -> SwitchDecision {
    SwitchDecision {
        active: vec![true; scenario.sbs_count()],
        total_power_w: all_on_power_w(scenario),
        lambda_m: scenario.mbs_base_load,
        outage_sbs: BTreeSet::new(),
    }
}

/// Load-ranked switching: walk the cells from least to most loaded (ties by
/// index) and switch them off until the next one would overflow the macro
/// cell. Ignores both QoS and the cells' power profiles, so offloaded users
/// may end up in outage; kept deliberately naive as a baseline.
pub fn sorting_cs(scenario: &Scenario, snapshot: &ChannelSnapshot) -> SwitchDecision {
    let mut order: Vec<usize> = (0..scenario.sbs_count()).collect();
    order.sort_by(|&a, &b| {
        scenario.sbs[a]
            .load
            .total_cmp(&scenario.sbs[b].load)
            .then(a.cmp(&b))
    });

    let ratios = scenario.capacity_ratios();
    let mut active = vec![true; scenario.sbs_count()];
    let mut lambda_m = scenario.mbs_base_load;
    for j in order {
        let added = scenario.sbs[j].load * ratios[j];
        if lambda_m + added > 1.0 {
            break;
        }
        lambda_m += added;
        active[j] = false;
    }

    let loads = scenario.sbs_loads();
    let profiles = scenario.sbs_profiles();
    let total_power_w = crate::power::network_power_w(
        &active,
        &loads,
        &profiles,
        &scenario.mbs.profile,
        lambda_m,
    )
    .expect("loads and lambda_m are in range by construction");

    SwitchDecision {
        outage_sbs: outage_set(scenario, snapshot, &active),
        active,
        total_power_w,
        lambda_m,
    }
}

/// The exact optimizer with the QoS constraint removed: minimizes power
/// subject only to the macro capacity. The aggressive lower envelope.
pub fn cs_no_qos(
    scenario: &Scenario,
    snapshot: &ChannelSnapshot,
) -> Result<SwitchDecision, SolveError> {
    let instance = build_instance(scenario, snapshot)?.without_forcing();
    let mut decision = solve_exact(&instance)?;
    decision.outage_sbs = outage_set(scenario, snapshot, &decision.active);
    Ok(decision)
}
