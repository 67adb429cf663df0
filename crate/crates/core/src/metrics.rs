//! Evaluation quantities derived from a switching decision.

use serde::{Deserialize, Serialize};

use crate::optimizer::SwitchDecision;
use crate::scenario::Scenario;

/// One decision's scorecard.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub total_power_w: f64,
    /// Traffic actually delivered within the QoS threshold.
    pub served_traffic_qos: f64,
    pub offered_traffic: f64,
    /// Power saved relative to the all-on reference, percent.
    pub savings_vs_all_on_pct: f64,
    /// Cells switched off despite a user below the threshold.
    pub outage_count: usize,
    pub lambda_m: f64,
}

/// Traffic served while meeting QoS.
///
/// An active cell serves its own capacity-weighted load. A sleeping cell's
/// load is carried by the macro cell and counts as served unless one of its
/// users misses the threshold, in which case the whole group is in outage and
/// serves nothing (its load still occupies macro capacity). The macro cell's
/// own base traffic is always served. Each unit of traffic is counted exactly
/// once: a successfully offloaded group's contribution equals the
/// capacity-scaled load the macro picks up for it.
pub fn served_traffic_qos(scenario: &Scenario, decision: &SwitchDecision) -> f64 {
    let mut served = scenario.mbs.capacity * scenario.mbs_base_load;
    for cell in &scenario.sbs {
        let in_outage = !decision.active[cell.id] && decision.outage_sbs.contains(&cell.id);
        if !in_outage {
            served += cell.capacity * cell.load;
        }
    }
    served
}

/// Percent power saved against the all-on reference.
pub fn savings_pct(power_w: f64, all_on_power_w: f64) -> f64 {
    100.0 * (1.0 - power_w / all_on_power_w)
}

/// Assemble the full scorecard for one decision.
pub fn evaluate(scenario: &Scenario, decision: &SwitchDecision, all_on_power_w: f64) -> EvalReport {
    EvalReport {
        total_power_w: decision.total_power_w,
        served_traffic_qos: served_traffic_qos(scenario, decision),
        offered_traffic: scenario.offered_traffic(),
        savings_vs_all_on_pct: savings_pct(decision.total_power_w, all_on_power_w),
        outage_count: decision.outage_sbs.len(),
        lambda_m: decision.lambda_m,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baselines::{all_on, cs_no_qos};
    use crate::optimizer::proposed_cs;
    use crate::scenario::{build_default_scenario, ChannelSnapshot};
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::collections::BTreeSet;

    #[test]
    fn all_on_serves_everything() {
        let s = build_default_scenario(0.6, -70.0, 2).unwrap();
        let d = all_on(&s);
        let expected: f64 = s.sbs.iter().map(|c| c.capacity * c.load).sum::<f64>()
            + s.mbs.capacity * s.mbs_base_load;
        assert_relative_eq!(served_traffic_qos(&s, &d), expected, max_relative = 1e-12);
        assert_relative_eq!(served_traffic_qos(&s, &d), s.offered_traffic(), max_relative = 1e-12);
    }

    #[test]
    fn proposed_conserves_offered_traffic() {
        for seed in 0..10u64 {
            let s = build_default_scenario(0.3, -70.0, seed).unwrap();
            let snap = ChannelSnapshot::draw(&s, 0).unwrap();
            let d = proposed_cs(&s, &snap).unwrap();
            assert_relative_eq!(
                served_traffic_qos(&s, &d),
                s.offered_traffic(),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn outage_cell_serves_nothing() {
        let s = build_default_scenario(0.5, -70.0, 8).unwrap();
        let d_all_on = all_on(&s);
        let full = served_traffic_qos(&s, &d_all_on);

        // Knock one cell into outage by hand: its capacity-weighted load
        // drops out of the served total.
        let victim = 0;
        let mut active = vec![true; s.sbs_count()];
        active[victim] = false;
        let mut outage = BTreeSet::new();
        outage.insert(victim);
        let d = SwitchDecision {
            active,
            total_power_w: d_all_on.total_power_w,
            lambda_m: s.mbs_base_load + s.sbs[victim].load * s.sbs[victim].capacity / s.mbs.capacity,
            outage_sbs: outage,
        };
        let lost = s.sbs[victim].capacity * s.sbs[victim].load;
        assert_relative_eq!(served_traffic_qos(&s, &d), full - lost, max_relative = 1e-12);
    }

    #[test]
    fn worst_user_consistency_for_no_qos() {
        // Served traffic drops exactly by the outage cells' load.
        for seed in 0..6u64 {
            let s = build_default_scenario(0.2, -70.0, seed).unwrap();
            let snap = ChannelSnapshot::draw(&s, 0).unwrap();
            let d = cs_no_qos(&s, &snap).unwrap();
            let lost: f64 = d
                .outage_sbs
                .iter()
                .map(|&j| s.sbs[j].capacity * s.sbs[j].load)
                .sum();
            assert_relative_eq!(
                served_traffic_qos(&s, &d),
                s.offered_traffic() - lost,
                max_relative = 1e-12
            );
            for &j in &d.outage_sbs {
                assert!(!d.active[j], "outage flagged on an active cell");
            }
        }
    }

    #[test]
    fn savings_pct_examples() {
        assert_abs_diff_eq!(savings_pct(2000.0, 2000.0), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(savings_pct(1400.0, 2000.0), 30.0, epsilon = 1e-12);
        assert!(savings_pct(2500.0, 2000.0) < 0.0);
    }

    #[test]
    fn evaluate_is_consistent() {
        let s = build_default_scenario(0.4, -70.0, 1).unwrap();
        let snap = ChannelSnapshot::draw(&s, 0).unwrap();
        let reference = all_on(&s).total_power_w;
        let d = proposed_cs(&s, &snap).unwrap();
        let r = evaluate(&s, &d, reference);
        assert_eq!(r.outage_count, 0);
        assert!(r.served_traffic_qos <= r.offered_traffic + 1e-12);
        assert!(r.savings_vs_all_on_pct >= 0.0);
        assert_relative_eq!(r.lambda_m, d.lambda_m, max_relative = 1e-15);
    }
}
