//! Policy-comparison harness: run every circuit through
//! stats -> weights -> placement -> simulation for the baseline and each
//! candidate policy, and assemble a [`BenchReport`].
//!
//! Circuits are processed in parallel on the rayon pool; records are sorted
//! by (circuit, policy order) before aggregation so the output does not
//! depend on scheduling. Compile time covers the weighting and placement
//! passes only — circuit statistics are a property of the circuit (they are
//! reported per record regardless of policy) and simulation is excluded.

use std::time::Instant;

use rayon::prelude::*;

use crate::analysis::{circuit_stats, CircuitStats};
use crate::circuit::Circuit;
use crate::error::Result;
use crate::placement::{place, Mapping, TrapTopology};
use crate::report::{compute_aggregates, BenchReport, CircuitRecord, RunFailure};
use crate::sim::{simulate, FidelityModel, SimOptions};
use crate::weighting::{interaction_graph, PolicyKind, WeightPolicy};

#[derive(Clone, Debug)]
pub struct RunConfig {
    /// Label echoed into the report.
    pub suite: String,
    pub topology: TrapTopology,
    pub fidelity: FidelityModel,
    pub sim: SimOptions,
    /// Candidate policies compared against the baseline.
    pub policies: Vec<WeightPolicy>,
    pub baseline: WeightPolicy,
    /// Measure and include per-record compile times. Timed reports are not
    /// byte-reproducible across runs.
    pub include_timings: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            suite: "adhoc".into(),
            topology: TrapTopology::default(),
            fidelity: FidelityModel::default(),
            sim: SimOptions::default(),
            policies: vec![
                WeightPolicy::new(PolicyKind::Penalized),
                WeightPolicy::new(PolicyKind::Linear),
                WeightPolicy::new(PolicyKind::Exp),
            ],
            baseline: WeightPolicy::greedy(),
            include_timings: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.topology.validate()?;
        self.fidelity.validate()?;
        self.baseline.validate()?;
        for p in &self.policies {
            p.validate()?;
        }
        let labels = self.policy_labels();
        let mut unique = labels.clone();
        unique.sort();
        unique.dedup();
        if unique.len() != labels.len() {
            return Err(crate::error::Error::Config(
                "duplicate policy labels in run configuration".into(),
            ));
        }
        Ok(())
    }

    /// Baseline first, then candidates in declaration order.
    pub fn policy_labels(&self) -> Vec<String> {
        std::iter::once(self.baseline.label())
            .chain(self.policies.iter().map(|p| p.label()))
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct CircuitInput {
    pub name: String,
    pub circuit: Circuit,
}

/// One policy pass over one circuit: weights, placement, simulation.
pub fn run_single(
    circuit: &Circuit,
    stats: &CircuitStats,
    policy: &WeightPolicy,
    cfg: &RunConfig,
) -> Result<(CircuitRecord, Mapping)> {
    let start = Instant::now();
    let graph = interaction_graph(circuit, policy, stats)?;
    let mapping = place(&graph, &cfg.topology)?;
    let compile_time = start.elapsed().as_secs_f64();

    let sim = simulate(circuit, &mapping, &cfg.topology, &cfg.fidelity, &cfg.sim)?;
    let record = CircuitRecord {
        name: circuit.name.clone(),
        policy: policy.label(),
        qubits: stats.q,
        gates: stats.g,
        depth: stats.d,
        symmetry: stats.s,
        shuttles: sim.shuttles,
        moves: sim.moves,
        program_fidelity: sim.program_fidelity,
        exec_time: sim.exec_time,
        compile_time_s: cfg.include_timings.then_some(compile_time),
    };
    Ok((record, mapping))
}

/// Minimum weighting+placement wall time over `reps` repetitions.
pub fn measure_compile_time(
    circuit: &Circuit,
    stats: &CircuitStats,
    policy: &WeightPolicy,
    topo: &TrapTopology,
    reps: u32,
) -> Result<f64> {
    let mut best = f64::INFINITY;
    for _ in 0..reps.max(1) {
        let start = Instant::now();
        let graph = interaction_graph(circuit, policy, stats)?;
        let mapping = place(&graph, topo)?;
        let elapsed = start.elapsed().as_secs_f64();
        std::hint::black_box(&mapping);
        best = best.min(elapsed);
    }
    Ok(best)
}

pub fn run_compare(cfg: &RunConfig, circuits: &[CircuitInput]) -> Result<BenchReport> {
    cfg.validate()?;

    let per_circuit: Vec<(Vec<CircuitRecord>, Vec<RunFailure>)> = circuits
        .par_iter()
        .map(|input| {
            let mut records = Vec::new();
            let mut failures = Vec::new();
            let mut circuit = input.circuit.clone();
            circuit.name = input.name.clone();

            if let Err(e) = circuit.validate() {
                failures.push(RunFailure {
                    name: input.name.clone(),
                    policy: "-".into(),
                    error: e.to_string(),
                });
                return (records, failures);
            }
            let stats = circuit_stats(&circuit);

            // a failed baseline invalidates the whole circuit
            match run_single(&circuit, &stats, &cfg.baseline, cfg) {
                Ok((record, _)) => records.push(record),
                Err(e) => {
                    failures.push(RunFailure {
                        name: input.name.clone(),
                        policy: cfg.baseline.label(),
                        error: e.to_string(),
                    });
                    return (records, failures);
                }
            }
            for policy in &cfg.policies {
                match run_single(&circuit, &stats, policy, cfg) {
                    Ok((record, _)) => records.push(record),
                    Err(e) => failures.push(RunFailure {
                        name: input.name.clone(),
                        policy: policy.label(),
                        error: e.to_string(),
                    }),
                }
            }
            (records, failures)
        })
        .collect();

    let mut records = Vec::new();
    let mut failures = Vec::new();
    for (r, f) in per_circuit {
        records.extend(r);
        failures.extend(f);
    }

    let order = cfg.policy_labels();
    let rank = |label: &str| order.iter().position(|l| l == label).unwrap_or(usize::MAX);
    records.sort_by(|a, b| a.name.cmp(&b.name).then_with(|| rank(&a.policy).cmp(&rank(&b.policy))));
    failures.sort_by(|a, b| a.name.cmp(&b.name).then_with(|| a.policy.cmp(&b.policy)));

    let aggregates = compute_aggregates(&records, &cfg.baseline.label(), &order)?;
    Ok(BenchReport {
        suite: cfg.suite.clone(),
        baseline: cfg.baseline.label(),
        topology: cfg.topology,
        fidelity: cfg.fidelity,
        lookahead: cfg.sim.lookahead,
        records,
        aggregates,
        failures,
    })
}
