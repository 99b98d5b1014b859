//! Single-point channel analysis and deterministic `(|α|, p)` grid sweeps.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::Serialize;

use crate::broadcast::{concurrence, outputs, x_state, CloneParams, Pair, Scenario};
use crate::entanglement::concurrence_general;
use crate::error::{Error, Result};
use crate::exec::{map_indexed, Parallelism};
use crate::format::num;
use crate::numeric::linspace;
use crate::states::PureTwoQubit;
use crate::teleport::{f_max_from_n, n_function, theorem_report};

/// Agreement required between independent routes to the same quantity.
pub const ROUTE_TOL: f64 = 1e-10;

pub const CSV_HEADER: &str = "alpha,p,scenario,pair,concurrence,n_value,f_max,inseparable,useful";

pub const JSON_SCHEMA: u32 = 1;

/// Everything reported by the `channel` command for one broadcast output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointAnalysis {
    pub alpha: f64,
    pub p: f64,
    pub scenario: Scenario,
    pub pair: Pair,
    pub concurrence_closed_form: f64,
    pub concurrence_wootters: f64,
    pub n_value: f64,
    pub f_max_svd: f64,
    /// `2/3 + C/3` when the fidelity-concurrence relation applies.
    pub f_max_theorem: Option<f64>,
    /// Why the relation does not apply (error code and message).
    pub theorem_status: String,
    pub inseparable: bool,
    pub useful: bool,
}

impl PointAnalysis {
    /// Description of the first disagreement between routes, if any.
    pub fn route_mismatch(&self) -> Option<String> {
        let dc = (self.concurrence_closed_form - self.concurrence_wootters).abs();
        if dc.is_nan() || dc > ROUTE_TOL {
            return Some(format!(
                "concurrence closed form {} vs Wootters {} (|diff| = {dc:e})",
                num(self.concurrence_closed_form),
                num(self.concurrence_wootters)
            ));
        }
        if let Some(ft) = self.f_max_theorem {
            let df = (ft - self.f_max_svd).abs();
            if df.is_nan() || df > ROUTE_TOL {
                return Some(format!(
                    "F_max theorem route {} vs SVD route {} (|diff| = {df:e})",
                    num(ft),
                    num(self.f_max_svd)
                ));
            }
        }
        None
    }

    pub fn to_text(&self) -> String {
        let theorem = match self.f_max_theorem {
            Some(f) => num(f),
            None => format!("n/a ({})", self.theorem_status),
        };
        let useful = if self.useful {
            "yes (N > 1)"
        } else {
            "no (N <= 1)"
        };
        [
            ("scenario", self.scenario.to_string()),
            ("pair", self.pair.to_string()),
            ("alpha", num(self.alpha)),
            ("p", num(self.p)),
            ("concurrence (closed)", num(self.concurrence_closed_form)),
            ("concurrence (Wootters)", num(self.concurrence_wootters)),
            ("N", num(self.n_value)),
            ("F_max (SVD)", num(self.f_max_svd)),
            ("F_max (2/3 + C/3)", theorem),
            ("inseparable", self.inseparable.to_string()),
            ("useful", useful.to_string()),
        ]
        .iter()
        .map(|(k, v)| format!("{k:<24}{v}\n"))
        .collect()
    }
}

/// Full analysis of one output pair, computing every quantity by two routes.
pub fn analyze_point(
    scenario: Scenario,
    pair: Pair,
    psi: &PureTwoQubit,
    cp: CloneParams,
) -> Result<PointAnalysis> {
    let out = outputs(scenario, psi, cp)?;
    let rho = out.pair(pair);
    let closed = concurrence(scenario, pair, psi, cp);
    let wootters = concurrence_general(rho)?.value;
    let n_value = n_function(rho);
    let (f_max_theorem, theorem_status) = match theorem_report(&x_state(scenario, pair, psi, cp)) {
        Ok(r) => (
            Some(2.0 / 3.0 + r.concurrence / 3.0),
            "applicable".to_string(),
        ),
        Err(e) => (None, e.to_string()),
    };
    Ok(PointAnalysis {
        alpha: psi.alpha().norm(),
        p: cp.p(),
        scenario,
        pair,
        concurrence_closed_form: closed,
        concurrence_wootters: wootters,
        n_value,
        f_max_svd: f_max_from_n(n_value),
        f_max_theorem,
        theorem_status,
        inseparable: closed > 0.0,
        useful: n_value > 1.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioSelection {
    Local,
    Nonlocal,
    Both,
}

impl ScenarioSelection {
    pub fn scenarios(self) -> Vec<Scenario> {
        match self {
            ScenarioSelection::Local => vec![Scenario::Local],
            ScenarioSelection::Nonlocal => vec![Scenario::Nonlocal],
            ScenarioSelection::Both => Scenario::ALL.to_vec(),
        }
    }
}

impl FromStr for ScenarioSelection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "both" => Ok(ScenarioSelection::Both),
            other => Ok(match other.parse::<Scenario>()? {
                Scenario::Local => ScenarioSelection::Local,
                Scenario::Nonlocal => ScenarioSelection::Nonlocal,
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::InvalidArgs(format!("unknown format '{s}'"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub scenario: ScenarioSelection,
    /// Restrict to one pair; both pairs when `None`.
    pub pair: Option<Pair>,
    pub alpha_steps: usize,
    pub p_steps: usize,
    pub alpha_range: (f64, f64),
    pub p_range: (f64, f64),
    pub seed: u64,
    pub samples: usize,
    pub format: OutputFormat,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            scenario: ScenarioSelection::Both,
            pair: None,
            alpha_steps: 201,
            p_steps: 201,
            alpha_range: (0.0, 1.0),
            p_range: (0.0, 1.0),
            seed: 0,
            samples: 100_000,
            format: OutputFormat::Csv,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.alpha_steps < 2 || self.p_steps < 2 {
            return Err(Error::InvalidArgs("grid steps must be at least 2".into()));
        }
        for (name, (lo, hi)) in [("alpha", self.alpha_range), ("p", self.p_range)] {
            if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
                return Err(Error::InvalidArgs(format!(
                    "{name} range must satisfy 0 <= lo <= hi <= 1, got {lo},{hi}"
                )));
            }
        }
        Ok(())
    }

    pub fn pairs(&self) -> Vec<Pair> {
        match self.pair {
            Some(p) => vec![p],
            None => Pair::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRecord {
    pub alpha: f64,
    pub p: f64,
    pub scenario: Scenario,
    pub pair: Pair,
    pub concurrence: f64,
    pub n_value: f64,
    pub f_max: f64,
    pub inseparable: bool,
    pub useful: bool,
}

impl SweepRecord {
    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            num(self.alpha),
            num(self.p),
            self.scenario,
            self.pair,
            num(self.concurrence),
            num(self.n_value),
            num(self.f_max),
            self.inseparable,
            self.useful
        )
    }
}

/// Record for one output pair: closed-form concurrence and `N` by SVD.
pub fn sweep_record(
    scenario: Scenario,
    pair: Pair,
    alpha: f64,
    cp: CloneParams,
) -> Result<SweepRecord> {
    let psi = crate::broadcast::real_input(alpha)?;
    let rho = x_state(scenario, pair, &psi, cp).to_density()?;
    let c = concurrence(scenario, pair, &psi, cp);
    let n_value = n_function(&rho);
    Ok(SweepRecord {
        alpha,
        p: cp.p(),
        scenario,
        pair,
        concurrence: c,
        n_value,
        f_max: f_max_from_n(n_value),
        inseparable: c > 0.0,
        useful: n_value > 1.0,
    })
}

/// All records in grid order: scenario, then `|α|`, then `p`, then pair.
pub fn run_sweep(config: &SweepConfig, mode: Parallelism) -> Result<Vec<SweepRecord>> {
    config.validate()?;
    let alphas = linspace(
        config.alpha_range.0,
        config.alpha_range.1,
        config.alpha_steps,
    );
    let ps = linspace(config.p_range.0, config.p_range.1, config.p_steps);
    let scenarios = config.scenario.scenarios();
    let pairs = config.pairs();
    let per_scenario = alphas.len() * ps.len();

    let rows = map_indexed(scenarios.len() * per_scenario, mode, |idx| {
        let scenario = scenarios[idx / per_scenario];
        let rest = idx % per_scenario;
        let alpha = alphas[rest / ps.len()];
        let cp = CloneParams::new(ps[rest % ps.len()])?;
        pairs
            .iter()
            .map(|&pair| sweep_record(scenario, pair, alpha, cp))
            .collect::<Result<Vec<_>>>()
    });
    let mut records = Vec::with_capacity(rows.len() * pairs.len());
    for row in rows {
        records.extend(row?);
    }
    Ok(records)
}

pub fn write_csv<W: Write>(records: &[SweepRecord], mut out: W) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(out, "{}", r.to_csv_row())?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct JsonConfig<'a> {
    scenarios: Vec<&'a str>,
    pairs: Vec<&'a str>,
    alpha_steps: usize,
    p_steps: usize,
    alpha_range: [f64; 2],
    p_range: [f64; 2],
    seed: u64,
    samples: usize,
}

#[derive(Serialize)]
struct JsonSweep<'a> {
    schema: u32,
    config: JsonConfig<'a>,
    records: &'a [SweepRecord],
}

pub fn write_json<W: Write>(
    config: &SweepConfig,
    records: &[SweepRecord],
    mut out: W,
) -> Result<()> {
    let doc = JsonSweep {
        schema: JSON_SCHEMA,
        config: JsonConfig {
            scenarios: config
                .scenario
                .scenarios()
                .iter()
                .map(|s| s.as_str())
                .collect(),
            pairs: config.pairs().iter().map(|p| p.as_str()).collect(),
            alpha_steps: config.alpha_steps,
            p_steps: config.p_steps,
            alpha_range: [config.alpha_range.0, config.alpha_range.1],
            p_range: [config.p_range.0, config.p_range.1],
            seed: config.seed,
            samples: config.samples,
        },
        records,
    };
    serde_json::to_writer_pretty(&mut out, &doc).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

pub fn write_records<W: Write>(
    config: &SweepConfig,
    records: &[SweepRecord],
    out: W,
) -> Result<()> {
    match config.format {
        OutputFormat::Csv => write_csv(records, out),
        OutputFormat::Json => write_json(config, records, out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::broadcast::real_input;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn small(scenario: ScenarioSelection) -> SweepConfig {
        SweepConfig {
            scenario,
            alpha_steps: 5,
            p_steps: 3,
            ..Default::default()
        }
    }

    #[test]
    fn analysis_at_symmetric_nonlocal_point() {
        let psi = real_input(FRAC_1_SQRT_2).unwrap();
        let a = analyze_point(
            Scenario::Nonlocal,
            Pair::A1B1,
            &psi,
            CloneParams::symmetric(),
        )
        .unwrap();
        assert!((a.concurrence_closed_form - 0.4).abs() < 1e-12);
        assert!((a.f_max_svd - 0.8).abs() < 1e-12);
        assert!((a.f_max_theorem.unwrap() - 0.8).abs() < 1e-12);
        assert!(a.useful && a.inseparable);
        assert!(a.route_mismatch().is_none());
    }

    #[test]
    fn analysis_of_product_input() {
        let psi = real_input(1.0).unwrap();
        let a = analyze_point(Scenario::Local, Pair::A1B1, &psi, CloneParams::symmetric()).unwrap();
        assert_eq!(a.concurrence_closed_form, 0.0);
        assert!(a.f_max_theorem.is_none());
        assert!(a.theorem_status.starts_with("separable-channel"));
        assert!(!a.useful);
        assert!(a.route_mismatch().is_none());
    }

    #[test]
    fn disagreeing_routes_are_reported() {
        let psi = real_input(FRAC_1_SQRT_2).unwrap();
        let mut a =
            analyze_point(Scenario::Local, Pair::A1B1, &psi, CloneParams::symmetric()).unwrap();
        a.concurrence_wootters += 1e-9;
        assert!(a.route_mismatch().unwrap().starts_with("concurrence"));
        a.concurrence_wootters = a.concurrence_closed_form;
        a.f_max_theorem = Some(f64::NAN);
        assert!(a.route_mismatch().unwrap().starts_with("F_max"));
    }

    #[test]
    fn grid_order_and_count() {
        let cfg = small(ScenarioSelection::Both);
        let recs = run_sweep(&cfg, Parallelism::Sequential).unwrap();
        assert_eq!(recs.len(), 2 * 5 * 3 * 2);
        assert_eq!(
            (recs[0].alpha, recs[0].p, recs[0].pair),
            (0.0, 0.0, Pair::A1B1)
        );
        assert_eq!(recs[1].pair, Pair::A2B2);
        assert_eq!(recs[2].p, 0.5);
        assert_eq!(recs[5 * 3 * 2].scenario, Scenario::Nonlocal);
        assert_eq!(recs.last().unwrap().alpha, 1.0);
        assert_eq!(recs.last().unwrap().p, 1.0);
    }

    #[test]
    fn parallel_matches_sequential() {
        let cfg = small(ScenarioSelection::Both);
        assert_eq!(
            run_sweep(&cfg, Parallelism::Sequential).unwrap(),
            run_sweep(&cfg, Parallelism::Parallel).unwrap()
        );
    }

    #[test]
    fn csv_header_and_rows() {
        let cfg = SweepConfig {
            scenario: ScenarioSelection::Nonlocal,
            pair: Some(Pair::A1B1),
            alpha_steps: 2,
            p_steps: 2,
            ..Default::default()
        };
        let recs = run_sweep(&cfg, Parallelism::Sequential).unwrap();
        let mut buf = Vec::new();
        write_csv(&recs, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.split('\n').collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 6);
        assert_eq!(lines[5], "");
        assert!(!text.contains('\r'));
        assert_eq!(lines[1], "0,0,nonlocal,a1b1,0,0,0.5,false,false");
    }

    #[test]
    fn json_has_schema() {
        let cfg = small(ScenarioSelection::Local);
        let recs = run_sweep(&cfg, Parallelism::Sequential).unwrap();
        let mut buf = Vec::new();
        write_json(&cfg, &recs, &mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["records"].as_array().unwrap().len(), recs.len());
        assert_eq!(v["records"][0]["scenario"], "local");
    }

    #[test]
    fn config_validation() {
        let mut cfg = SweepConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.alpha_steps = 1;
        assert!(cfg.validate().is_err());
        cfg.alpha_steps = 3;
        cfg.p_range = (0.5, 1.2);
        assert!(cfg
            .validate()
            .unwrap_err()
            .to_string()
            .starts_with("invalid-args"));
        cfg.p_range = (0.7, 0.2);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn late_p_local_a2b2_never_inseparable() {
        let cfg = SweepConfig {
            scenario: ScenarioSelection::Local,
            pair: Some(Pair::A2B2),
            alpha_steps: 21,
            p_steps: 11,
            p_range: (0.9, 1.0),
            ..Default::default()
        };
        let recs = run_sweep(&cfg, Parallelism::Parallel).unwrap();
        assert!(recs.iter().all(|r| !r.inseparable));
    }
}
