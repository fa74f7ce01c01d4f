//! TOML configuration file support.
//!
//! ```toml
//! [topology]
//! traps = 6
//! capacity = 17
//! load = 15
//!
//! [fidelity]
//! gamma = 1e-5
//! tau = 1.0
//! A = 5e-4
//! heat_per_shuttle = 0.002
//! n0 = 0.0
//! shuttle_time = 1.0
//!
//! [policy]
//! default = "penalized"
//! step_blocks = 10
//! a_linear = 0.1
//! a_exp = 2.0
//!
//! [sim]
//! lookahead = 20
//!
//! [bench]
//! policies = ["penalized", "linear", "exp"]
//! baseline = "greedy"
//! ```
//!
//! Every section and key is optional; anything absent falls back to the
//! defaults above. Command-line flags override file values.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::placement::TrapTopology;
use crate::sim::{FidelityModel, SimOptions};
use crate::weighting::{PolicyKind, PolicyParams, WeightPolicy};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct TopologySection {
    pub traps: Option<u32>,
    pub capacity: Option<u32>,
    pub load: Option<u32>,
}

impl TopologySection {
    pub fn resolve(&self) -> Result<TrapTopology> {
        let d = TrapTopology::default();
        TrapTopology::new(
            self.traps.unwrap_or(d.num_traps),
            self.capacity.unwrap_or(d.trap_capacity),
            self.load.unwrap_or(d.initial_load),
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PolicySection {
    /// Default policy kind for `map`/`sim`.
    pub default: Option<String>,
    pub step_blocks: Option<u32>,
    pub a_linear: Option<f64>,
    pub a_exp: Option<f64>,
}

impl PolicySection {
    pub fn params(&self) -> PolicyParams {
        let d = PolicyParams::default();
        PolicyParams {
            step_blocks: self.step_blocks.unwrap_or(d.step_blocks),
            a_linear: self.a_linear.unwrap_or(d.a_linear),
            a_exp: self.a_exp.unwrap_or(d.a_exp),
        }
    }

    pub fn policy(&self, kind: PolicyKind) -> WeightPolicy {
        WeightPolicy { kind, params: self.params() }
    }

    pub fn default_policy(&self) -> Result<WeightPolicy> {
        let kind = match &self.default {
            Some(s) => s.parse()?,
            None => PolicyKind::Penalized,
        };
        Ok(self.policy(kind))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BenchSection {
    pub policies: Option<Vec<String>>,
    pub baseline: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FileConfig {
    pub topology: TopologySection,
    pub fidelity: FidelityModel,
    pub policy: PolicySection,
    pub sim: SimOptions,
    pub bench: BenchSection,
}

impl FileConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("config parse error: {e}")))
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml(&text)
    }

    /// Candidate policies for `bench run`, with the file's parameter
    /// overrides applied.
    pub fn bench_policies(&self) -> Result<Vec<WeightPolicy>> {
        let names = self.bench.policies.clone().unwrap_or_else(|| {
            vec!["penalized".into(), "linear".into(), "exp".into()]
        });
        names
            .iter()
            .map(|n| Ok(self.policy.policy(n.parse()?)))
            .collect()
    }

    pub fn bench_baseline(&self) -> Result<WeightPolicy> {
        let kind = match &self.bench.baseline {
            Some(s) => s.parse()?,
            None => PolicyKind::Greedy,
        };
        Ok(self.policy.policy(kind))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_gives_defaults() {
        let cfg = FileConfig::from_toml("").unwrap();
        let topo = cfg.topology.resolve().unwrap();
        assert_eq!(topo, TrapTopology::default());
        assert_eq!(cfg.fidelity, FidelityModel::default());
        assert_eq!(cfg.sim.lookahead, 20);
        assert_eq!(cfg.bench_baseline().unwrap().kind, PolicyKind::Greedy);
        assert_eq!(cfg.bench_policies().unwrap().len(), 3);
    }

    #[test]
    fn partial_sections_overlay_defaults() {
        let text = r#"
[topology]
traps = 4
load = 10
capacity = 12

[fidelity]
A = 0.01

[policy]
default = "step"
step_blocks = 5

[bench]
policies = ["penalized"]
"#;
        let cfg = FileConfig::from_toml(text).unwrap();
        let topo = cfg.topology.resolve().unwrap();
        assert_eq!((topo.num_traps, topo.trap_capacity, topo.initial_load), (4, 12, 10));
        assert_eq!(cfg.fidelity.a_coeff, 0.01);
        assert_eq!(cfg.fidelity.gamma, FidelityModel::default().gamma);
        let policy = cfg.policy.default_policy().unwrap();
        assert_eq!(policy.kind, PolicyKind::Step);
        assert_eq!(policy.params.step_blocks, 5);
        assert_eq!(cfg.bench_policies().unwrap().len(), 1);
    }

    #[test]
    fn invalid_topology_rejected_at_resolve() {
        let cfg = FileConfig::from_toml("[topology]\nload = 17\ncapacity = 17\n").unwrap();
        assert!(cfg.topology.resolve().is_err());
    }

    #[test]
    fn unknown_policy_name_rejected() {
        let cfg = FileConfig::from_toml("[bench]\npolicies = [\"quantum\"]\n").unwrap();
        assert!(cfg.bench_policies().is_err());
    }
}
