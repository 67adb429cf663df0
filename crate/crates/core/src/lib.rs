//! HetNet cell-switching simulator.
//!
//! Models a dense urban heterogeneous network (one always-on macro base
//! station plus a field of small cells), decides which small cells to put to
//! sleep to minimize total network power, and guarantees a minimum received
//! power for every user offloaded to the macro cell. Ships the exact
//! optimizer, three reference switching policies, the evaluation metrics and
//! a reproducible sweep harness.

// Negated comparisons in validation code double as NaN rejection.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod channel;
pub mod experiments;
pub mod metrics;
pub mod optimizer;
pub mod power;
pub mod scenario;
pub mod units;

pub use baselines::{all_on, cs_no_qos, sorting_cs};
pub use channel::{ChannelConstants, LinkBudget, LinkGeometry, MixingMode, ShadowFading};
pub use experiments::{Method, SweepSpec, SweepTable, SweepVariable};
pub use metrics::EvalReport;
pub use optimizer::{proposed_cs, solve_bruteforce, solve_exact, SwitchDecision, SwitchInstance};
pub use power::{BaseStationProfile, BsKind};
pub use scenario::{ChannelSnapshot, Scenario, ScenarioConfig};
