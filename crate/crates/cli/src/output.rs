//! Report files. Numbers in CSV files use 17 significant digits and every
//! table is written in a fixed row and column order.

use std::fs::{self, File};
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use seedstable::data::format_f64;
use seedstable::stability::{empirical_delta, log_grid, stability_ratio, StabilityReport, StabilityTarget};

use crate::config::{Sim1Config, Sim2Config};
use crate::experiments::{Sim1Output, Sim2Output};
use crate::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Bounds and resolution of the epsilon grid for the phase curves.
pub const CURVE_EPS_MIN: f64 = 1e-4;
pub const CURVE_EPS_MAX: f64 = 1.0;
pub const CURVE_POINTS: usize = 50;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub epsilon: f64,
    pub delta_hat: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodReport {
    pub method: String,
    pub estimates: usize,
    pub failures: usize,
    /// `None` when fewer than two estimates succeeded.
    pub stability: Option<StabilityReport>,
    pub curve: Vec<CurvePoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub median_v_dagger: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub converged: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub total_elapsed_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sim1Report<'a> {
    pub version: &'static str,
    pub command: &'static str,
    pub config: &'a Sim1Config,
    pub test_point: &'a [f64],
    pub test_probability: f64,
    pub methods: Vec<MethodReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sim2Report<'a> {
    pub version: &'static str,
    pub command: &'static str,
    pub config: &'a Sim2Config,
    pub methods: Vec<MethodReport>,
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |e| CliError::io(format!("writing {}", path.display()), e)
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(io_err(path))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n").map_err(io_err(path))?;
    w.flush().map_err(io_err(path))
}

fn opt_cell<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

pub fn curve(estimates: &[f64], delta: f64) -> Result<Vec<CurvePoint>, CliError> {
    if estimates.len() < 2 {
        return Ok(Vec::new());
    }
    log_grid(CURVE_EPS_MIN, CURVE_EPS_MAX, CURVE_POINTS)
        .into_iter()
        .map(|epsilon| {
            let delta_hat = empirical_delta(estimates, epsilon)?;
            Ok(CurvePoint {
                epsilon,
                delta_hat,
                ratio: stability_ratio(delta_hat, delta),
            })
        })
        .collect()
}

pub fn method_report(
    method: &str,
    estimates: &[f64],
    failures: usize,
    target: StabilityTarget,
) -> Result<MethodReport, CliError> {
    let stability = if estimates.len() >= 2 {
        Some(StabilityReport::from_estimates(estimates, target)?)
    } else {
        None
    };
    Ok(MethodReport {
        method: method.to_string(),
        estimates: estimates.len(),
        failures,
        stability,
        curve: curve(estimates, target.delta)?,
        median_v_dagger: None,
        converged: None,
        total_elapsed_ms: None,
    })
}

fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let k = values.len();
    Some(if k % 2 == 1 {
        values[k / 2]
    } else {
        0.5 * (values[k / 2 - 1] + values[k / 2])
    })
}

fn write_curve_csv(path: &Path, methods: &[MethodReport]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(["epsilon", "method", "delta_hat", "ratio"])?;
    for m in methods {
        for p in &m.curve {
            w.write_record([format_f64(p.epsilon), m.method.clone(), format_f64(p.delta_hat), format_f64(p.ratio)])?;
        }
    }
    w.flush().map_err(io_err(path))
}

/// Writes `sim1_estimates.csv`, `sim1_report.json`, `sim1_curve.csv` and
/// `sim1_data.csv` into `dir`.
pub fn write_sim1<'a>(dir: &Path, out: &'a Sim1Output) -> Result<Sim1Report<'a>, CliError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let path = dir.join("sim1_estimates.csv");
    let mut w = csv::Writer::from_writer(create(&path)?);
    w.write_record(["seed", "unbagged", "subbagged"])?;
    for r in &out.rows {
        w.write_record([r.seed.to_string(), format_f64(r.unbagged), format_f64(r.subbagged)])?;
    }
    w.flush().map_err(io_err(&path))?;

    let target = StabilityTarget::new(out.config.epsilon, out.config.delta)?;
    let unbagged: Vec<f64> = out.rows.iter().map(|r| r.unbagged).collect();
    let subbagged: Vec<f64> = out.rows.iter().map(|r| r.subbagged).collect();
    let report = Sim1Report {
        version: VERSION,
        command: "sim1",
        config: &out.config,
        test_point: &out.test_point,
        test_probability: out.test_probability,
        methods: vec![
            method_report("unbagged", &unbagged, 0, target)?,
            method_report("subbagged", &subbagged, 0, target)?,
        ],
    };
    write_json(&dir.join("sim1_report.json"), &report)?;
    write_curve_csv(&dir.join("sim1_curve.csv"), &report.methods)?;
    out.data.write_csv(dir.join("sim1_data.csv"))?;
    Ok(report)
}

/// Writes `sim2_estimates.csv`, `sim2_report.json`, `sim2_curve.csv` and
/// `sim2_data.csv` into `dir`.
pub fn write_sim2<'a>(dir: &Path, out: &'a Sim2Output) -> Result<Sim2Report<'a>, CliError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let path = dir.join("sim2_estimates.csv");
    let mut w = csv::Writer::from_writer(create(&path)?);
    w.write_record(["seed", "method", "estimate", "elapsed_ms", "v_dagger", "converged", "error"])?;
    for r in &out.records {
        w.write_record([
            r.seed.to_string(),
            r.method.clone(),
            r.estimate.map(format_f64).unwrap_or_default(),
            r.elapsed_ms.map(format_f64).unwrap_or_default(),
            opt_cell(r.v_dagger),
            opt_cell(r.converged),
            r.error.clone().unwrap_or_default(),
        ])?;
    }
    w.flush().map_err(io_err(&path))?;

    let target = StabilityTarget::new(out.config.epsilon, out.config.delta)?;
    let mut methods = Vec::new();
    for name in &out.methods {
        let records: Vec<_> = out.records.iter().filter(|r| &r.method == name).collect();
        let estimates: Vec<f64> = records.iter().filter_map(|r| r.estimate).collect();
        let failures = records.len() - estimates.len();
        let mut report = method_report(name, &estimates, failures, target)?;
        let mut bags: Vec<f64> = records.iter().filter_map(|r| r.v_dagger.map(|v| v as f64)).collect();
        report.median_v_dagger = median(&mut bags);
        if report.median_v_dagger.is_some() {
            report.converged = Some(records.iter().filter(|r| r.converged == Some(true)).count());
        }
        if out.config.timing {
            report.total_elapsed_ms = Some(records.iter().filter_map(|r| r.elapsed_ms).sum());
        }
        methods.push(report);
    }
    let report = Sim2Report {
        version: VERSION,
        command: "sim2",
        config: &out.config,
        methods,
    };
    write_json(&dir.join("sim2_report.json"), &report)?;
    write_curve_csv(&dir.join("sim2_curve.csv"), &report.methods)?;
    out.data.write_csv(dir.join("sim2_data.csv"))?;
    Ok(report)
}

/// Per-method estimates read back from an estimates CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateTable {
    pub methods: Vec<(String, Vec<f64>, usize)>,
}

/// Reads either layout the experiments write: long (`method` and `estimate`
/// columns, empty estimate for a failed run) or wide (one column per method
/// next to `seed`).
pub fn read_estimates<R: Read>(reader: R) -> Result<EstimateTable, CliError> {
    let mut rdr = csv::Reader::from_reader(reader);
    let headers = rdr.headers()?.clone();
    let position = |name: &str| headers.iter().position(|h| h == name);
    let parse = |cell: &str, column: &str| -> Result<f64, CliError> {
        cell.trim().parse::<f64>().map_err(|_| {
            CliError::Core(seedstable::Error::Schema {
                column: column.to_string(),
                reason: format!("cannot parse {cell:?} as a number"),
            })
        })
    };
    let mut methods: Vec<(String, Vec<f64>, usize)> = Vec::new();
    if let (Some(mi), Some(ei)) = (position("method"), position("estimate")) {
        for record in rdr.records() {
            let record = record?;
            let name = &record[mi];
            let idx = match methods.iter().position(|(m, _, _)| m == name) {
                Some(i) => i,
                None => {
                    methods.push((name.to_string(), Vec::new(), 0));
                    methods.len() - 1
                }
            };
            let cell = &record[ei];
            if cell.trim().is_empty() {
                methods[idx].2 += 1;
            } else {
                methods[idx].1.push(parse(cell, "estimate")?);
            }
        }
    } else {
        let columns: Vec<(usize, String)> = headers
            .iter()
            .enumerate()
            .filter(|(_, h)| *h != "seed")
            .map(|(i, h)| (i, h.to_string()))
            .collect();
        if columns.is_empty() {
            return Err(CliError::Core(seedstable::Error::Schema {
                column: "estimate".into(),
                reason: "no estimate columns".into(),
            }));
        }
        methods = columns.iter().map(|(_, h)| (h.clone(), Vec::new(), 0)).collect();
        for record in rdr.records() {
            let record = record?;
            for (k, (i, h)) in columns.iter().enumerate() {
                let cell = &record[*i];
                if cell.trim().is_empty() {
                    methods[k].2 += 1;
                } else {
                    methods[k].1.push(parse(cell, h)?);
                }
            }
        }
    }
    Ok(EstimateTable { methods })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilitySummary {
    pub version: &'static str,
    pub command: &'static str,
    pub target: StabilityTarget,
    pub methods: Vec<MethodReport>,
}

pub fn stability_summary(table: &EstimateTable, target: StabilityTarget) -> Result<StabilitySummary, CliError> {
    let methods = table
        .methods
        .iter()
        .map(|(name, est, failures)| method_report(name, est, *failures, target))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(StabilitySummary {
        version: VERSION,
        command: "stability",
        target,
        methods,
    })
}

pub fn write_stability(dir: &Path, summary: &StabilitySummary) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    write_json(&dir.join("stability_report.json"), summary)?;
    write_curve_csv(&dir.join("stability_curve.csv"), &summary.methods)
}

pub fn write_estimate<T: Serialize>(dir: &Path, result: &T) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    write_json(&dir.join("estimate_result.json"), result)
}
