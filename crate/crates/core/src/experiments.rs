//! Sweep harness: runs the switching methods over parameter grids with
//! paired channel realizations and emits plot-ready CSV.
//!
//! Within one (grid value, seed) cell every method sees the same scenario and
//! the same channel snapshot, so method comparisons are paired. Cells are
//! independent and run in parallel; row order in the output is fixed by
//! (value, method, seed) regardless of execution order.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::baselines::{all_on, cs_no_qos, sorting_cs};
use crate::metrics::{evaluate, EvalReport};
use crate::optimizer::{proposed_cs, solve_bruteforce, solve_exact, SolveError, SwitchDecision};
use crate::scenario::{build_scenario, ChannelSnapshot, Scenario, ScenarioConfig, ScenarioError};

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("invalid sweep spec: {0}")]
    InvalidSpec(String),
    #[error("sweep cell failed at {variable}={value}, method={method}, seed={seed}: {message}")]
    Cell { variable: SweepVariable, value: f64, method: Method, seed: u64, message: String },
    #[error("scenario construction failed at {variable}={value}, seed={seed}: {message}")]
    CellScenario { variable: SweepVariable, value: f64, seed: u64, message: String },
    #[error("CSV parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

// ============================================================================
// Methods and sweep axes
// ============================================================================

/// The switching policies under comparison, in canonical output order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    AllOn,
    Sorting,
    NoQos,
    Proposed,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::AllOn, Method::Sorting, Method::NoQos, Method::Proposed];

    pub fn name(self) -> &'static str {
        match self {
            Method::AllOn => "all-on",
            Method::Sorting => "sorting",
            Method::NoQos => "no-qos",
            Method::Proposed => "proposed",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "all-on" => Ok(Method::AllOn),
            "sorting" => Ok(Method::Sorting),
            "no-qos" => Ok(Method::NoQos),
            "proposed" => Ok(Method::Proposed),
            other => Err(format!(
                "unknown method '{other}' (expected all-on, sorting, no-qos or proposed)"
            )),
        }
    }
}

/// Which scenario parameter the sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    Alpha,
    PMin,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::Alpha => "alpha",
            SweepVariable::PMin => "pmin",
        }
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepVariable {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "alpha" => Ok(SweepVariable::Alpha),
            "pmin" => Ok(SweepVariable::PMin),
            other => Err(format!("unknown sweep variable '{other}' (expected alpha or pmin)")),
        }
    }
}

/// Run one method on a prepared scenario and channel snapshot.
pub fn run_method(
    method: Method,
    scenario: &Scenario,
    snapshot: &ChannelSnapshot,
) -> Result<SwitchDecision, SolveError> {
    match method {
        Method::AllOn => Ok(all_on(scenario)),
        Method::Sorting => Ok(sorting_cs(scenario, snapshot)),
        Method::NoQos => cs_no_qos(scenario, snapshot),
        Method::Proposed => proposed_cs(scenario, snapshot),
    }
}

// ============================================================================
// Sweep specification and results
// ============================================================================

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    /// Strictly increasing, non-empty grid of parameter values.
    pub grid: Vec<f64>,
    pub methods: Vec<Method>,
    pub seeds: Vec<u64>,
    /// Remaining scenario parameters.
    pub base: ScenarioConfig,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), SweepError> {
        if self.grid.is_empty() {
            return Err(SweepError::InvalidSpec("grid must be non-empty".into()));
        }
        if !self.grid.windows(2).all(|w| w[0] < w[1]) {
            return Err(SweepError::InvalidSpec("grid must be strictly increasing".into()));
        }
        if self.methods.is_empty() {
            return Err(SweepError::InvalidSpec("at least one method is required".into()));
        }
        if self.seeds.is_empty() {
            return Err(SweepError::InvalidSpec("at least one seed is required".into()));
        }
        Ok(())
    }
}

/// One output row; `seed` is `None` for the per-(value, method) mean row.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub variable: SweepVariable,
    pub value: f64,
    pub method: Method,
    pub seed: Option<u64>,
    pub total_power_w: f64,
    pub served_traffic_qos: f64,
    pub offered_traffic: f64,
    pub savings_pct: f64,
    pub outage_count: f64,
    pub lambda_m: f64,
}

impl SweepRow {
    fn from_report(
        variable: SweepVariable,
        value: f64,
        method: Method,
        seed: u64,
        report: &EvalReport,
    ) -> Self {
        Self {
            variable,
            value,
            method,
            seed: Some(seed),
            total_power_w: report.total_power_w,
            served_traffic_qos: report.served_traffic_qos,
            offered_traffic: report.offered_traffic,
            savings_pct: report.savings_vs_all_on_pct,
            outage_count: report.outage_count as f64,
            lambda_m: report.lambda_m,
        }
    }
}

/// Sweep output: per-seed rows plus one mean row per (value, method), in
/// (value, method, seed) order with the mean row closing each group.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    /// Per-seed rows of one (value, method) group.
    pub fn seed_rows(&self, value: f64, method: Method) -> Vec<&SweepRow> {
        self.rows
            .iter()
            .filter(|r| r.value == value && r.method == method && r.seed.is_some())
            .collect()
    }

    /// The aggregate row of one (value, method) group.
    pub fn mean_row(&self, value: f64, method: Method) -> Option<&SweepRow> {
        self.rows
            .iter()
            .find(|r| r.value == value && r.method == method && r.seed.is_none())
    }
}

/// Execute the sweep. Within a cell all methods share one channel snapshot.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable, SweepError> {
    spec.validate()?;

    let mut methods = spec.methods.clone();
    methods.sort_unstable();
    methods.dedup();

    let cells: Vec<(f64, u64)> = spec
        .grid
        .iter()
        .flat_map(|&value| spec.seeds.iter().map(move |&seed| (value, seed)))
        .collect();

    let per_cell: Vec<Vec<(Method, EvalReport)>> = cells
        .par_iter()
        .map(|&(value, seed)| run_cell(spec, value, seed, &methods))
        .collect::<Result<_, _>>()?;

    let mut rows = Vec::new();
    for &value in &spec.grid {
        for &method in &methods {
            let mut sum = SweepRow {
                variable: spec.variable,
                value,
                method,
                seed: None,
                total_power_w: 0.0,
                served_traffic_qos: 0.0,
                offered_traffic: 0.0,
                savings_pct: 0.0,
                outage_count: 0.0,
                lambda_m: 0.0,
            };
            for (si, &seed) in spec.seeds.iter().enumerate() {
                let cell_index = spec.grid.iter().position(|&v| v == value).unwrap()
                    * spec.seeds.len()
                    + si;
                let report = per_cell[cell_index]
                    .iter()
                    .find(|(m, _)| *m == method)
                    .map(|(_, r)| r)
                    .expect("every requested method is evaluated per cell");
                let row = SweepRow::from_report(spec.variable, value, method, seed, report);
                sum.total_power_w += row.total_power_w;
                sum.served_traffic_qos += row.served_traffic_qos;
                sum.offered_traffic += row.offered_traffic;
                sum.savings_pct += row.savings_pct;
                sum.outage_count += row.outage_count;
                sum.lambda_m += row.lambda_m;
                rows.push(row);
            }
            let n = spec.seeds.len() as f64;
            sum.total_power_w /= n;
            sum.served_traffic_qos /= n;
            sum.offered_traffic /= n;
            sum.savings_pct /= n;
            sum.outage_count /= n;
            sum.lambda_m /= n;
            rows.push(sum);
        }
    }
    Ok(SweepTable { rows })
}

fn run_cell(
    spec: &SweepSpec,
    value: f64,
    seed: u64,
    methods: &[Method],
) -> Result<Vec<(Method, EvalReport)>, SweepError> {
    let mut cfg = spec.base.clone();
    cfg.seed = seed;
    match spec.variable {
        SweepVariable::Alpha => cfg.alpha = value,
        SweepVariable::PMin => cfg.p_min_dbm = value,
    }
    let scenario = build_scenario(&cfg).map_err(|e| scenario_err(spec, value, seed, &e))?;
    let snapshot =
        ChannelSnapshot::draw(&scenario, 0).map_err(|e| scenario_err(spec, value, seed, &e))?;
    let reference = all_on(&scenario).total_power_w;

    methods
        .iter()
        .map(|&method| {
            let decision = run_method(method, &scenario, &snapshot).map_err(|e| SweepError::Cell {
                variable: spec.variable,
                value,
                method,
                seed,
                message: e.to_string(),
            })?;
            Ok((method, evaluate(&scenario, &decision, reference)))
        })
        .collect()
}

fn scenario_err(spec: &SweepSpec, value: f64, seed: u64, e: &ScenarioError) -> SweepError {
    SweepError::CellScenario {
        variable: spec.variable,
        value,
        seed,
        message: e.to_string(),
    }
}

// ============================================================================
// CSV emission and parsing
// ============================================================================

pub const CSV_HEADER: &str = "variable,value,method,seed,total_power_w,served_traffic_qos,\
offered_traffic,savings_pct,outage_count,lambda_m";

/// Format with at most `sig` significant digits, trimming trailing zeros
/// (like printf `%g`).
pub fn fmt_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if exp < -4 || exp >= sig as i32 {
        let s = format!("{:.*e}", sig - 1, x);
        match s.find('e') {
            Some(pos) => {
                let (mantissa, suffix) = s.split_at(pos);
                let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
                format!("{mantissa}{suffix}")
            }
            None => s,
        }
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        let s = format!("{:.*}", decimals, x);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    }
}

fn row_to_csv(row: &SweepRow) -> String {
    let seed = match row.seed {
        Some(s) => s.to_string(),
        None => "mean".to_string(),
    };
    format!(
        "{},{},{},{},{},{},{},{},{},{}",
        row.variable,
        fmt_sig(row.value, 6),
        row.method,
        seed,
        fmt_sig(row.total_power_w, 6),
        fmt_sig(row.served_traffic_qos, 6),
        fmt_sig(row.offered_traffic, 6),
        fmt_sig(row.savings_pct, 6),
        fmt_sig(row.outage_count, 6),
        fmt_sig(row.lambda_m, 6),
    )
}

/// Render the whole table, header first. Byte-deterministic for a given table.
pub fn to_csv_string(table: &SweepTable) -> String {
    let mut out = String::with_capacity(64 * (table.rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in &table.rows {
        out.push_str(&row_to_csv(row));
        out.push('\n');
    }
    out
}

/// Write the table as CSV.
pub fn emit_csv(table: &SweepTable, path: &Path) -> Result<(), SweepError> {
    std::fs::write(path, to_csv_string(table))?;
    Ok(())
}

/// Parse CSV produced by [`to_csv_string`] back into a table.
pub fn parse_csv(text: &str) -> Result<SweepTable, SweepError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == CSV_HEADER => {}
        Some((_, header)) => {
            return Err(SweepError::Parse {
                line: 1,
                message: format!("unexpected header: {header}"),
            })
        }
        None => return Err(SweepError::Parse { line: 1, message: "empty input".into() }),
    }

    let mut rows = Vec::new();
    for (i, line) in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 10 {
            return Err(SweepError::Parse {
                line: i + 1,
                message: format!("expected 10 fields, got {}", fields.len()),
            });
        }
        let parse_f = |s: &str, what: &str| {
            s.parse::<f64>().map_err(|e| SweepError::Parse {
                line: i + 1,
                message: format!("bad {what} '{s}': {e}"),
            })
        };
        let variable = fields[0].parse::<SweepVariable>().map_err(|message| {
            SweepError::Parse { line: i + 1, message }
        })?;
        let method = fields[2]
            .parse::<Method>()
            .map_err(|message| SweepError::Parse { line: i + 1, message })?;
        let seed = if fields[3] == "mean" {
            None
        } else {
            Some(fields[3].parse::<u64>().map_err(|e| SweepError::Parse {
                line: i + 1,
                message: format!("bad seed '{}': {e}", fields[3]),
            })?)
        };
        rows.push(SweepRow {
            variable,
            value: parse_f(fields[1], "value")?,
            method,
            seed,
            total_power_w: parse_f(fields[4], "total_power_w")?,
            served_traffic_qos: parse_f(fields[5], "served_traffic_qos")?,
            offered_traffic: parse_f(fields[6], "offered_traffic")?,
            savings_pct: parse_f(fields[7], "savings_pct")?,
            outage_count: parse_f(fields[8], "outage_count")?,
            lambda_m: parse_f(fields[9], "lambda_m")?,
        });
    }
    Ok(SweepTable { rows })
}

// ============================================================================
// Verification suite
// ============================================================================

/// One verification check's outcome.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn record(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(Check { name: name.to_string(), passed, detail });
    }
}

/// Run the solver-vs-oracle and invariant suites. Used by the CLI `verify`
/// command; each check is also covered by the test suite.
pub fn run_verification() -> VerificationReport {
    use crate::channel::{link_budget, los_probability, MixingMode, ShadowFading};
    use crate::channel::{pathloss_los_db, pathloss_nlos_db, LinkGeometry};
    use crate::optimizer::{SwitchInstance, SwitchItem};
    use crate::scenario::build_default_scenario;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    let mut report = VerificationReport::default();

    // Exact solver vs exhaustive oracle on random instances.
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    for seed in 0..300u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=14usize);
        let items = (0..n)
            .map(|_| SwitchItem {
                saving_w: rng.gen_range(-5.0..50.0),
                weight: rng.gen_range(0.0..0.3),
                forced_on: rng.gen_bool(0.2),
            })
            .collect();
        let inst = SwitchInstance { items, capacity: rng.gen_range(0.0..1.0), base_power_w: 2000.0 };
        let exact = solve_exact(&inst).expect("random instance is solvable");
        let oracle = solve_bruteforce(&inst).expect("random instance is enumerable");
        let gap = (exact.total_power_w - oracle.total_power_w).abs();
        worst = worst.max(gap);
        if gap > 1e-9 {
            failures += 1;
        }
    }
    report.record(
        "solver-vs-oracle",
        failures == 0,
        format!("300 random instances, worst objective gap {worst:.3e} W"),
    );

    // Channel invariants over a metre-step distance scan.
    let consts = crate::channel::ChannelConstants::default();
    let mut monotone = true;
    let mut dominance = true;
    let mut prob_ok = true;
    let mut prev = f64::NEG_INFINITY;
    let mut prev_p = 1.0;
    for d in 10..=5000 {
        let geom = LinkGeometry::new(d as f64, 25.0, 1.5, 1.0).expect("valid geometry");
        let budget = link_budget(&geom, &consts, ShadowFading::ZERO, MixingMode::Expected, 0.0)
            .expect("valid link");
        if budget.pl_db < prev {
            monotone = false;
        }
        prev = budget.pl_db;
        let los = pathloss_los_db(&geom, &consts, 0.0).expect("valid geometry");
        let nlos = pathloss_nlos_db(&geom, &consts, 0.0).expect("valid geometry");
        if nlos < los {
            dominance = false;
        }
        let p = los_probability(d as f64).expect("non-negative distance");
        if !(0.0..=1.0).contains(&p) || (d > 18 && p >= prev_p) {
            prob_ok = false;
        }
        prev_p = p;
    }
    report.record("pathloss-monotone", monotone, "expected loss non-decreasing 10 m..5 km".into());
    report.record("nlos-dominates-los", dominance, "max rule holds on the scan".into());
    report.record("los-probability-range", prob_ok, "within [0,1], decreasing past 18 m".into());

    // Method ordering and feasibility on the default world.
    let mut ordering_ok = true;
    let mut feasibility_ok = true;
    let mut detail = String::new();
    'outer: for seed in 0..5u64 {
        for alpha in [0.1, 0.5, 0.9] {
            let scenario = match build_default_scenario(alpha, -70.0, seed) {
                Ok(s) => s,
                Err(e) => {
                    detail = e.to_string();
                    ordering_ok = false;
                    break 'outer;
                }
            };
            let snapshot = match ChannelSnapshot::draw(&scenario, 0) {
                Ok(s) => s,
                Err(e) => {
                    detail = e.to_string();
                    ordering_ok = false;
                    break 'outer;
                }
            };
            let mut powers = std::collections::HashMap::new();
            for method in Method::ALL {
                match run_method(method, &scenario, &snapshot) {
                    Ok(d) => {
                        if d.lambda_m > 1.0 + 1e-12 {
                            feasibility_ok = false;
                        }
                        if method == Method::Proposed && !d.outage_sbs.is_empty() {
                            feasibility_ok = false;
                        }
                        powers.insert(method, d.total_power_w);
                    }
                    Err(e) => {
                        detail = e.to_string();
                        ordering_ok = false;
                        break 'outer;
                    }
                }
            }
            let eps = 1e-9;
            if !(powers[&Method::NoQos] <= powers[&Method::Proposed] + eps
                && powers[&Method::Proposed] <= powers[&Method::AllOn] + eps
                && powers[&Method::NoQos] <= powers[&Method::Sorting] + eps)
            {
                ordering_ok = false;
                detail = format!("ordering violated at alpha={alpha}, seed={seed}");
                break 'outer;
            }
        }
    }
    report.record(
        "method-ordering",
        ordering_ok,
        if detail.is_empty() { "no-qos <= proposed <= all-on; no-qos <= sorting".into() } else { detail.clone() },
    );
    report.record(
        "feasibility",
        feasibility_ok,
        "lambda_m <= 1 for all methods; proposed outage-free".into(),
    );

    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn small_spec() -> SweepSpec {
        SweepSpec {
            variable: SweepVariable::Alpha,
            grid: vec![0.2, 0.6],
            methods: vec![Method::AllOn, Method::Proposed],
            seeds: vec![0, 1],
            base: ScenarioConfig::default(),
        }
    }

    #[test]
    fn fmt_sig_behaves_like_percent_g() {
        assert_eq!(fmt_sig(0.0, 6), "0");
        assert_eq!(fmt_sig(2005.2, 6), "2005.2");
        assert_eq!(fmt_sig(0.300000000004, 6), "0.3");
        assert_eq!(fmt_sig(-70.0, 6), "-70");
        assert_eq!(fmt_sig(1234567.0, 6), "1.23457e6");
        assert_eq!(fmt_sig(0.00001234, 6), "1.234e-5");
        assert_eq!(fmt_sig(123.456789, 6), "123.457");
    }

    #[test]
    fn spec_validation() {
        let mut spec = small_spec();
        spec.grid = vec![];
        assert!(matches!(run_sweep(&spec), Err(SweepError::InvalidSpec(_))));
        let mut spec = small_spec();
        spec.grid = vec![0.5, 0.5];
        assert!(matches!(run_sweep(&spec), Err(SweepError::InvalidSpec(_))));
        let mut spec = small_spec();
        spec.seeds = vec![];
        assert!(matches!(run_sweep(&spec), Err(SweepError::InvalidSpec(_))));
    }

    #[test]
    fn row_count_matches_grid_methods_seeds() {
        let table = run_sweep(&small_spec()).unwrap();
        // 2 values × 2 methods × (2 seeds + 1 mean row).
        assert_eq!(table.rows.len(), 2 * 2 * 3);
        for value in [0.2, 0.6] {
            for method in [Method::AllOn, Method::Proposed] {
                assert_eq!(table.seed_rows(value, method).len(), 2);
                assert!(table.mean_row(value, method).is_some());
            }
        }
    }

    #[test]
    fn mean_row_is_the_seed_average() {
        let table = run_sweep(&small_spec()).unwrap();
        let rows = table.seed_rows(0.2, Method::Proposed);
        let mean = table.mean_row(0.2, Method::Proposed).unwrap();
        let avg: f64 =
            rows.iter().map(|r| r.total_power_w).sum::<f64>() / rows.len() as f64;
        assert_relative_eq!(mean.total_power_w, avg, max_relative = 1e-12);
    }

    #[test]
    fn single_point_sweep_equals_direct_call() {
        let spec = SweepSpec {
            variable: SweepVariable::Alpha,
            grid: vec![0.4],
            methods: vec![Method::Proposed],
            seeds: vec![9],
            base: ScenarioConfig::default(),
        };
        let table = run_sweep(&spec).unwrap();
        let row = &table.seed_rows(0.4, Method::Proposed)[0];

        let cfg = ScenarioConfig::default().with_alpha(0.4).with_seed(9);
        let scenario = build_scenario(&cfg).unwrap();
        let snapshot = ChannelSnapshot::draw(&scenario, 0).unwrap();
        let decision = run_method(Method::Proposed, &scenario, &snapshot).unwrap();
        assert_eq!(row.total_power_w, decision.total_power_w);
        assert_eq!(row.lambda_m, decision.lambda_m);
    }

    #[test]
    fn method_order_permutation_is_invisible() {
        let mut spec = small_spec();
        spec.methods = vec![Method::Proposed, Method::AllOn];
        let a = run_sweep(&spec).unwrap();
        spec.methods = vec![Method::AllOn, Method::Proposed];
        let b = run_sweep(&spec).unwrap();
        assert_eq!(a, b);
        assert_eq!(to_csv_string(&a), to_csv_string(&b));
    }

    #[test]
    fn csv_is_reproducible_and_round_trips() {
        let spec = small_spec();
        let a = to_csv_string(&run_sweep(&spec).unwrap());
        let b = to_csv_string(&run_sweep(&spec).unwrap());
        assert_eq!(a, b);

        // Emit → parse → emit is a fixpoint.
        let parsed = parse_csv(&a).unwrap();
        assert_eq!(to_csv_string(&parsed), a);
    }

    #[test]
    fn empty_table_emits_header_only() {
        let table = SweepTable::default();
        assert_eq!(to_csv_string(&table), format!("{CSV_HEADER}\n"));
        let parsed = parse_csv(&to_csv_string(&table)).unwrap();
        assert!(parsed.rows.is_empty());
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_csv("nonsense\n").is_err());
        let bad_row = format!("{CSV_HEADER}\nalpha,0.1,warp-drive,0,1,2,3,4,5,6\n");
        assert!(parse_csv(&bad_row).is_err());
        let short_row = format!("{CSV_HEADER}\nalpha,0.1,proposed,0,1,2\n");
        assert!(parse_csv(&short_row).is_err());
    }

    #[test]
    fn verification_suite_passes() {
        let report = run_verification();
        for check in &report.checks {
            assert!(check.passed, "{}: {}", check.name, check.detail);
        }
    }
}
