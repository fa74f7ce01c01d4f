//! Request/response types of the HTTP API, shared by the service and the
//! client so both sides agree on the wire format.

use serde::{Deserialize, Serialize};

use crate::analysis::CircuitStats;
use crate::benchgen::SuiteManifest;
use crate::circuit::{parse_circuit, Circuit, CircuitFormat};
use crate::config::TopologySection;
use crate::error::Result;
use crate::harness::RunConfig;
use crate::placement::TrapTopology;
use crate::sim::{FidelityModel, SimOptions, SimResult};
use crate::weighting::{PolicyParams, WeightPolicy};

pub const API_VERSION: &str = "v1";

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CircuitPayload {
    pub text: String,
    /// `ms-text` (default) or `qasm2`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl CircuitPayload {
    pub fn ms_text(name: &str, text: String) -> Self {
        CircuitPayload { text, format: None, name: Some(name.to_string()) }
    }

    pub fn parse(&self, fallback_name: &str) -> Result<Circuit> {
        let format: CircuitFormat = match &self.format {
            Some(f) => f.parse()?,
            None => CircuitFormat::MsText,
        };
        let name = self.name.as_deref().unwrap_or(fallback_name);
        parse_circuit(&self.text, format, name)
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct PolicySpec {
    pub kind: String,
    pub step_blocks: Option<u32>,
    pub a_linear: Option<f64>,
    pub a_exp: Option<f64>,
}

impl PolicySpec {
    pub fn named(kind: &str) -> Self {
        PolicySpec { kind: kind.to_string(), ..Default::default() }
    }

    pub fn to_policy(&self) -> Result<WeightPolicy> {
        let defaults = PolicyParams::default();
        let policy = WeightPolicy {
            kind: self.kind.parse()?,
            params: PolicyParams {
                step_blocks: self.step_blocks.unwrap_or(defaults.step_blocks),
                a_linear: self.a_linear.unwrap_or(defaults.a_linear),
                a_exp: self.a_exp.unwrap_or(defaults.a_exp),
            },
        };
        policy.validate()?;
        Ok(policy)
    }
}

impl From<&WeightPolicy> for PolicySpec {
    fn from(p: &WeightPolicy) -> Self {
        PolicySpec {
            kind: p.kind.to_string(),
            step_blocks: Some(p.params.step_blocks),
            a_linear: Some(p.params.a_linear),
            a_exp: Some(p.params.a_exp),
        }
    }
}

pub fn resolve_topology(spec: &Option<TopologySection>) -> Result<TrapTopology> {
    spec.unwrap_or_default().resolve()
}

// -- /health ----------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HealthResponse {
    pub status: String,
    pub service: String,
    pub version: String,
}

// -- /v1/parse ---------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ParseRequest {
    pub circuit: CircuitPayload,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ParseResponse {
    pub name: String,
    pub qubits: u32,
    pub total_gates: u32,
    pub two_qubit_gates: u32,
    pub stats: CircuitStats,
}

// -- /v1/map -----------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MapRequest {
    pub circuit: CircuitPayload,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub policy: Option<PolicySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub topology: Option<TopologySection>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EdgeWeight {
    pub a: u32,
    pub b: u32,
    pub weight: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MapResponse {
    pub name: String,
    pub policy: String,
    pub stats: CircuitStats,
    /// Edges in placement order (descending weight).
    pub weights: Vec<EdgeWeight>,
    /// Per-trap ion chains.
    pub mapping: Vec<Vec<u32>>,
    pub compile_time_s: f64,
}

// -- /v1/sim -----------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimRequest {
    pub circuit: CircuitPayload,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub policy: Option<PolicySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub topology: Option<TopologySection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fidelity: Option<FidelityModel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lookahead: Option<usize>,
    /// Keep the full shuttle event trace in the response.
    #[serde(default)]
    pub include_trace: bool,
}

impl SimRequest {
    pub fn sim_options(&self) -> SimOptions {
        SimOptions { lookahead: self.lookahead.unwrap_or(SimOptions::default().lookahead) }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimResponse {
    pub name: String,
    pub policy: String,
    pub stats: CircuitStats,
    pub mapping: Vec<Vec<u32>>,
    pub result: SimResult,
}

// -- /v1/bench/gen -----------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BenchGenRequest {
    /// `random120` or `table1`.
    pub suite: String,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NamedCircuitText {
    pub name: String,
    pub text: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BenchGenResponse {
    pub manifest: SuiteManifest,
    pub circuits: Vec<NamedCircuitText>,
}

// -- /v1/bench/run -----------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BenchRunRequest {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suite: Option<String>,
    pub circuits: Vec<CircuitPayload>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub policies: Option<Vec<PolicySpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub baseline: Option<PolicySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub topology: Option<TopologySection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fidelity: Option<FidelityModel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lookahead: Option<usize>,
    #[serde(default)]
    pub include_timings: bool,
}

impl BenchRunRequest {
    pub fn run_config(&self) -> Result<RunConfig> {
        let defaults = RunConfig::default();
        let policies = match &self.policies {
            Some(specs) => specs.iter().map(|s| s.to_policy()).collect::<Result<Vec<_>>>()?,
            None => defaults.policies,
        };
        let baseline = match &self.baseline {
            Some(s) => s.to_policy()?,
            None => defaults.baseline,
        };
        Ok(RunConfig {
            suite: self.suite.clone().unwrap_or_else(|| "adhoc".into()),
            topology: resolve_topology(&self.topology)?,
            fidelity: self.fidelity.unwrap_or_default(),
            sim: SimOptions { lookahead: self.lookahead.unwrap_or(defaults.sim.lookahead) },
            policies,
            baseline,
            include_timings: self.include_timings,
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ErrorResponse {
    pub error: String,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weighting::PolicyKind;

    #[test]
    fn policy_spec_round_trip() {
        let spec = PolicySpec { kind: "step".into(), step_blocks: Some(2), ..Default::default() };
        let policy = spec.to_policy().unwrap();
        assert_eq!(policy.kind, PolicyKind::Step);
        assert_eq!(policy.params.step_blocks, 2);
        assert_eq!(policy.params.a_linear, 0.1);

        let back = PolicySpec::from(&policy);
        assert_eq!(back.to_policy().unwrap(), policy);
    }

    #[test]
    fn payload_parses_with_format_default() {
        let payload = CircuitPayload::ms_text("t", "qubits 2\nMS q[0], q[1]\n".into());
        let circuit = payload.parse("fallback").unwrap();
        assert_eq!(circuit.name, "t");
        assert_eq!(circuit.two_qubit_gate_count(), 1);
    }

    #[test]
    fn bench_request_defaults() {
        let req = BenchRunRequest {
            suite: None,
            circuits: vec![],
            policies: None,
            baseline: None,
            topology: None,
            fidelity: None,
            lookahead: None,
            include_timings: false,
        };
        let cfg = req.run_config().unwrap();
        assert_eq!(cfg.baseline.kind, PolicyKind::Greedy);
        assert_eq!(cfg.policies.len(), 3);
        assert_eq!(cfg.topology, TrapTopology::default());
    }
}
