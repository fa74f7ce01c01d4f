//! Benchmark reports: per-circuit records, per-policy aggregates against
//! the baseline, and table/csv/json rendering.
//!
//! The JSON rendering is canonical and deterministic: records are sorted,
//! maps are ordered, and measured wall times are only present when the run
//! asked for them, so identical inputs produce byte-identical reports.
//! Fidelity ratios are model-relative (the fidelity coefficients are
//! configuration, not calibration), so only comparisons between policies
//! carry meaning.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::placement::TrapTopology;
use crate::sim::FidelityModel;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitRecord {
    pub name: String,
    /// Policy label with its parameters, e.g. `step[n=10]`.
    pub policy: String,
    pub qubits: u32,
    /// 2-qubit gate count.
    pub gates: u32,
    pub depth: u32,
    /// 0 = symmetric, 1 = asymmetric.
    pub symmetry: u32,
    /// Hop-weighted shuttle count.
    pub shuttles: u64,
    /// Move-weighted shuttle count.
    pub moves: u64,
    pub program_fidelity: f64,
    pub exec_time: f64,
    /// Measured weighting+placement wall time; present only when the run
    /// recorded timings (timed reports are not byte-reproducible).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub compile_time_s: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolicyAggregate {
    pub policy: String,
    pub circuits: u32,
    /// Circuits with strictly fewer shuttles than the baseline.
    pub improved: u32,
    pub worsened: u32,
    pub ties: u32,
    /// Mean reduction over improved circuits only.
    pub avg_reduction_improved: f64,
    /// Mean increase over worsened circuits only.
    pub avg_increase_worsened: f64,
    /// Unconditional mean of (baseline - candidate).
    pub mean_delta: f64,
    /// Sum of (baseline - candidate) over all circuits.
    pub net_reduction: i64,
    /// Net reduction as a percentage of total baseline shuttles.
    pub net_pct_reduction: f64,
    pub total_baseline_shuttles: u64,
    pub total_shuttles: u64,
    /// Mean of per-circuit fidelity ratios (candidate / baseline).
    pub avg_fidelity_ratio: f64,
    pub max_fidelity_ratio: f64,
    /// Circuits whose baseline fidelity was zero with a nonzero candidate
    /// fidelity; excluded from the ratio statistics.
    pub undefined_ratios: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_compile_time_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub baseline_mean_compile_time_s: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunFailure {
    pub name: String,
    pub policy: String,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub suite: String,
    pub baseline: String,
    pub topology: TrapTopology,
    pub fidelity: FidelityModel,
    pub lookahead: usize,
    pub records: Vec<CircuitRecord>,
    pub aggregates: Vec<PolicyAggregate>,
    pub failures: Vec<RunFailure>,
}

impl BenchReport {
    pub fn to_json_pretty(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Compute per-policy aggregates from the records. Baseline records must be
/// present for every circuit that has a candidate record.
pub fn compute_aggregates(
    records: &[CircuitRecord],
    baseline: &str,
    policy_order: &[String],
) -> Result<Vec<PolicyAggregate>> {
    let base: std::collections::BTreeMap<&str, &CircuitRecord> = records
        .iter()
        .filter(|r| r.policy == baseline)
        .map(|r| (r.name.as_str(), r))
        .collect();

    let mut aggregates = Vec::new();
    for policy in policy_order {
        if policy == baseline {
            continue;
        }
        let candidates: Vec<&CircuitRecord> =
            records.iter().filter(|r| &r.policy == policy).collect();
        if candidates.is_empty() {
            continue;
        }

        let mut improved = 0u32;
        let mut worsened = 0u32;
        let mut ties = 0u32;
        let mut reduction_sum = 0i64;
        let mut increase_sum = 0i64;
        let mut net: i64 = 0;
        let mut total_base = 0u64;
        let mut total_cand = 0u64;
        let mut ratio_sum = 0.0;
        let mut ratio_count = 0u32;
        let mut max_ratio = f64::MIN;
        let mut undefined = 0u32;
        let mut compile_sum = 0.0;
        let mut compile_n = 0u32;
        let mut base_compile_sum = 0.0;
        let mut base_compile_n = 0u32;

        for cand in &candidates {
            let b = base.get(cand.name.as_str()).ok_or_else(|| {
                Error::Config(format!("no baseline record for circuit '{}'", cand.name))
            })?;
            let delta = b.shuttles as i64 - cand.shuttles as i64;
            net += delta;
            total_base += b.shuttles;
            total_cand += cand.shuttles;
            match delta.cmp(&0) {
                std::cmp::Ordering::Greater => {
                    improved += 1;
                    reduction_sum += delta;
                }
                std::cmp::Ordering::Less => {
                    worsened += 1;
                    increase_sum += -delta;
                }
                std::cmp::Ordering::Equal => ties += 1,
            }

            if b.program_fidelity > 0.0 {
                let ratio = cand.program_fidelity / b.program_fidelity;
                ratio_sum += ratio;
                ratio_count += 1;
                max_ratio = max_ratio.max(ratio);
            } else if cand.program_fidelity == 0.0 {
                ratio_sum += 1.0;
                ratio_count += 1;
                max_ratio = max_ratio.max(1.0);
            } else {
                undefined += 1;
            }

            if let Some(t) = cand.compile_time_s {
                compile_sum += t;
                compile_n += 1;
            }
            if let Some(t) = b.compile_time_s {
                base_compile_sum += t;
                base_compile_n += 1;
            }
        }

        let n = candidates.len() as u32;
        aggregates.push(PolicyAggregate {
            policy: policy.clone(),
            circuits: n,
            improved,
            worsened,
            ties,
            avg_reduction_improved: if improved > 0 {
                reduction_sum as f64 / improved as f64
            } else {
                0.0
            },
            avg_increase_worsened: if worsened > 0 {
                increase_sum as f64 / worsened as f64
            } else {
                0.0
            },
            mean_delta: net as f64 / n as f64,
            net_reduction: net,
            net_pct_reduction: if total_base > 0 {
                100.0 * net as f64 / total_base as f64
            } else {
                0.0
            },
            total_baseline_shuttles: total_base,
            total_shuttles: total_cand,
            avg_fidelity_ratio: if ratio_count > 0 { ratio_sum / ratio_count as f64 } else { 0.0 },
            max_fidelity_ratio: if ratio_count > 0 { max_ratio } else { 0.0 },
            undefined_ratios: undefined,
            mean_compile_time_s: (compile_n == n).then(|| compile_sum / compile_n as f64),
            baseline_mean_compile_time_s: (base_compile_n == n)
                .then(|| base_compile_sum / base_compile_n as f64),
        });
    }
    Ok(aggregates)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportFormat {
    TableText,
    Csv,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "table" | "table-text" | "text" => Ok(ReportFormat::TableText),
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::Config(format!("unknown report format '{other}'"))),
        }
    }
}

pub fn render(report: &BenchReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => report.to_json_pretty(),
        ReportFormat::Csv => records_to_csv(&report.records),
        ReportFormat::TableText => render_table(report),
    }
}

const CSV_HEADER: &str =
    "name,policy,qubits,gates,depth,symmetry,shuttles,moves,program_fidelity,exec_time,compile_time_s";

pub fn records_to_csv(records: &[CircuitRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let compile = r.compile_time_s.map_or(String::new(), |t| format!("{t}"));
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            r.name,
            r.policy,
            r.qubits,
            r.gates,
            r.depth,
            r.symmetry,
            r.shuttles,
            r.moves,
            r.program_fidelity,
            r.exec_time,
            compile
        ));
    }
    out
}

pub fn records_from_csv(text: &str) -> Result<Vec<CircuitRecord>> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Config("empty csv".into()))?;
    if header.trim() != CSV_HEADER {
        return Err(Error::Config(format!("unexpected csv header '{header}'")));
    }
    let mut records = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 11 {
            return Err(Error::Config(format!("csv line {} has {} fields", i + 2, fields.len())));
        }
        let parse_err = |what: &str| Error::Config(format!("csv line {}: bad {what}", i + 2));
        records.push(CircuitRecord {
            name: fields[0].to_string(),
            policy: fields[1].to_string(),
            qubits: fields[2].parse().map_err(|_| parse_err("qubits"))?,
            gates: fields[3].parse().map_err(|_| parse_err("gates"))?,
            depth: fields[4].parse().map_err(|_| parse_err("depth"))?,
            symmetry: fields[5].parse().map_err(|_| parse_err("symmetry"))?,
            shuttles: fields[6].parse().map_err(|_| parse_err("shuttles"))?,
            moves: fields[7].parse().map_err(|_| parse_err("moves"))?,
            program_fidelity: fields[8].parse().map_err(|_| parse_err("program_fidelity"))?,
            exec_time: fields[9].parse().map_err(|_| parse_err("exec_time"))?,
            compile_time_s: if fields[10].is_empty() {
                None
            } else {
                Some(fields[10].parse().map_err(|_| parse_err("compile_time_s"))?)
            },
        });
    }
    Ok(records)
}

fn render_table(report: &BenchReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "suite: {}  circuits: {}  baseline: {}\n",
        report.suite,
        report.records.iter().filter(|r| r.policy == report.baseline).count(),
        report.baseline
    ));
    out.push_str(&format!(
        "topology: {} traps x capacity {} (load {})  lookahead: {}\n\n",
        report.topology.num_traps,
        report.topology.trap_capacity,
        report.topology.initial_load,
        report.lookahead
    ));

    out.push_str(&format!(
        "{:<16} {:>6} {:>6} {:>5} {:>9} {:>9} {:>8} {:>7} {:>8} {:>8}\n",
        "policy", "fewer", "more", "ties", "avg red", "avg inc", "net red", "net %", "avg fidX", "max fidX"
    ));
    out.push_str(&"-".repeat(92));
    out.push('\n');
    for a in &report.aggregates {
        out.push_str(&format!(
            "{:<16} {:>6} {:>6} {:>5} {:>9.2} {:>9.2} {:>8} {:>6.2}% {:>8.3} {:>8.3}\n",
            a.policy,
            a.improved,
            a.worsened,
            a.ties,
            a.avg_reduction_improved,
            a.avg_increase_worsened,
            a.net_reduction,
            a.net_pct_reduction,
            a.avg_fidelity_ratio,
            a.max_fidelity_ratio
        ));
        if let (Some(c), Some(b)) = (a.mean_compile_time_s, a.baseline_mean_compile_time_s) {
            out.push_str(&format!(
                "{:<16} mean compile {:.6}s vs baseline {:.6}s (delta {:+.6}s)\n",
                "", c, b, c - b
            ));
        }
    }
    if !report.failures.is_empty() {
        out.push_str(&format!("\nfailures: {}\n", report.failures.len()));
        for f in &report.failures {
            out.push_str(&format!("  {} [{}]: {}\n", f.name, f.policy, f.error));
        }
    }
    out
}
