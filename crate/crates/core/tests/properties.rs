//! Cross-module invariants checked over randomized inputs.

use proptest::prelude::*;

use shuttlemap_core::analysis::{build_dag, circuit_stats, classify_symmetry};
use shuttlemap_core::circuit::{parse_ms_text, Circuit, Gate, Operands, QubitPair};
use shuttlemap_core::placement::{place, TrapTopology};
use shuttlemap_core::sim::{simulate, FidelityModel, SimOptions};
use shuttlemap_core::weighting::{
    decay_weights, exp_f, greedy_weights, linear_f, penalized_f, step_f, InteractionGraph,
    PolicyKind, WeightPolicy,
};

const ONE_QUBIT_KINDS: [&str; 3] = ["GPI", "GPI2", "GZ"];

/// Random mixed circuit: 2-qubit MS gates plus occasional 1-qubit gates.
fn arb_circuit(max_qubits: u32, max_gates: usize) -> impl Strategy<Value = Circuit> {
    (2..=max_qubits)
        .prop_flat_map(move |q| {
            let gate = prop_oneof![
                4 => (0..q, 0..q).prop_filter_map("distinct", |(a, b)| {
                    (a != b).then(|| Gate::ms(a, b))
                }),
                1 => (0..q, 0..3usize).prop_map(|(t, k)| Gate::single(ONE_QUBIT_KINDS[k], t)),
            ];
            (Just(q), prop::collection::vec(gate, 0..=max_gates))
        })
        .prop_map(|(q, gates)| Circuit::new("prop", q, gates))
}

/// Random all-MS circuit.
fn arb_ms_circuit(max_qubits: u32, max_gates: usize) -> impl Strategy<Value = Circuit> {
    (2..=max_qubits)
        .prop_flat_map(move |q| {
            let gate = (0..q, 0..q)
                .prop_filter_map("distinct", |(a, b)| (a != b).then(|| Gate::ms(a, b)));
            (Just(q), prop::collection::vec(gate, 1..=max_gates))
        })
        .prop_map(|(q, gates)| Circuit::new("prop", q, gates))
}

fn relabel(circuit: &Circuit, perm: &[u32]) -> Circuit {
    let gates = circuit
        .gates
        .iter()
        .map(|g| Gate {
            kind: g.kind.clone(),
            operands: match g.operands {
                Operands::Single(q) => Operands::Single(perm[q as usize]),
                Operands::Pair(a, b) => Operands::Pair(perm[a as usize], perm[b as usize]),
            },
        })
        .collect();
    Circuit::new(circuit.name.clone(), circuit.num_qubits, gates)
}

proptest! {
    #[test]
    fn parse_serialize_roundtrip(circuit in arb_circuit(12, 40)) {
        let text = circuit.to_ms_text();
        let parsed = parse_ms_text(&text, "prop").unwrap();
        prop_assert_eq!(&parsed.gates, &circuit.gates);
        prop_assert_eq!(parsed.num_qubits, circuit.num_qubits);
        // serialization is a fixed point
        prop_assert_eq!(parsed.to_ms_text(), text);
    }

    #[test]
    fn layering_is_valid(circuit in arb_circuit(10, 60)) {
        let dag = build_dag(&circuit);
        // every gate in exactly one layer
        let total: usize = dag.layers.iter().map(|l| l.len()).sum();
        prop_assert_eq!(total, circuit.gates.len());
        prop_assert!(dag.layers.iter().all(|l| !l.is_empty()));

        let layer_of: std::collections::HashMap<u32, u32> = dag
            .layers
            .iter()
            .enumerate()
            .flat_map(|(l, gates)| gates.iter().map(move |&g| (g, l as u32)))
            .collect();
        for (j, gj) in circuit.gates.iter().enumerate() {
            // no shared qubit within a layer; earlier sharing gates strictly below
            for (i, gi) in circuit.gates.iter().enumerate().take(j) {
                let shares = gi.qubits().any(|q| gj.qubits().any(|p| p == q));
                if shares {
                    prop_assert!(layer_of[&(i as u32)] < layer_of[&(j as u32)]);
                }
            }
        }
    }

    #[test]
    fn depth_lower_bound(circuit in arb_ms_circuit(10, 60)) {
        let stats = circuit_stats(&circuit);
        let parallel = (stats.q / 2).max(1);
        prop_assert!(stats.d >= stats.g.div_ceil(parallel));
    }

    #[test]
    fn symmetry_invariant_under_relabeling(
        circuit in arb_ms_circuit(8, 40),
        seed in any::<u64>(),
    ) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut perm: Vec<u32> = (0..circuit.num_qubits).collect();
        perm.shuffle(&mut rng);
        prop_assert_eq!(classify_symmetry(&circuit), classify_symmetry(&relabel(&circuit, &perm)));
    }

    #[test]
    fn policy_functions_monotone(g in 2u32..5000, n in 1u32..50) {
        let stats = shuttlemap_core::analysis::CircuitStats { g, q: 64, d: g / 2 + 1, s: 1 };
        let mut prev_step = f64::INFINITY;
        let mut prev_linear = f64::INFINITY;
        let mut prev_exp = f64::INFINITY;
        let mut prev_pen = f64::INFINITY;
        for cnt in 0..g.min(800) {
            let s = step_f(cnt, g, n);
            let l = linear_f(cnt, g, 0.1);
            let e = exp_f(cnt, g, 2.0);
            let p = penalized_f(cnt, &stats);
            prop_assert!(s <= prev_step);
            prop_assert!(l < prev_linear);
            prop_assert!(e < prev_exp && e > 0.0);
            prop_assert!(p < prev_pen);
            prev_step = s;
            prev_linear = l;
            prev_exp = e;
            prev_pen = p;
        }
    }

    /// Independent fold over the gate stream must reproduce decay_weights:
    /// cnt advances on every 2-qubit gate and ends at G.
    #[test]
    fn decay_weights_match_reference_fold(circuit in arb_ms_circuit(8, 50)) {
        let stats = circuit_stats(&circuit);
        if stats.g == 0 {
            return Ok(());
        }
        let policy = WeightPolicy::new(PolicyKind::Linear);
        let got = decay_weights(&circuit, &policy).unwrap();

        let mut reference: std::collections::BTreeMap<QubitPair, f64> = Default::default();
        let mut cnt = 0u32;
        let mut contributions = 0u32;
        for pair in circuit.pair_sequence() {
            match reference.get_mut(&pair) {
                Some(w) => *w += linear_f(cnt, stats.g, 0.1),
                None => {
                    reference.insert(pair, stats.g as f64);
                }
            }
            cnt += 1;
            contributions += 1;
        }
        prop_assert_eq!(cnt, stats.g);
        prop_assert_eq!(contributions, stats.g);
        prop_assert_eq!(&got.edges, &reference);
    }

    /// Symmetric programs: the penalized weights are exactly G times the
    /// greedy weights, so placement is identical.
    #[test]
    fn symmetric_penalized_equals_greedy_placement(
        edge_seed in any::<u64>(),
        repeats in 1u32..5,
    ) {
        use rand::seq::SliceRandom;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(edge_seed);
        let q = rng.random_range(6u32..12);
        let mut all: Vec<(u32, u32)> = (0..q)
            .flat_map(|a| ((a + 1)..q).map(move |b| (a, b)))
            .collect();
        all.shuffle(&mut rng);
        let edge_count = rng.random_range(3..=all.len().min(12));
        // every selected pair occurs exactly `repeats` times
        let mut gates = Vec::new();
        for _ in 0..repeats {
            for &(a, b) in &all[..edge_count] {
                gates.push(Gate::ms(a, b));
            }
        }
        gates.shuffle(&mut rng);
        let circuit = Circuit::new("sym", q, gates);
        let stats = circuit_stats(&circuit);
        prop_assert_eq!(stats.s, 0);

        let greedy = greedy_weights(&circuit);
        let penalized = decay_weights(&circuit, &WeightPolicy::new(PolicyKind::Penalized)).unwrap();
        for (pair, w) in &greedy.edges {
            prop_assert_eq!(penalized.edges[pair], stats.g as f64 * w);
        }

        let topo = TrapTopology::new(4, 5, 3).unwrap();
        prop_assert_eq!(place(&greedy, &topo).unwrap(), place(&penalized, &topo).unwrap());
    }

    #[test]
    fn placement_scale_invariant(circuit in arb_ms_circuit(10, 40), factor in 0.01f64..1000.0) {
        let graph = greedy_weights(&circuit);
        let topo = TrapTopology::new(4, 4, 3).unwrap();
        let base = place(&graph, &topo).unwrap();
        let mut scaled = graph.clone();
        for w in scaled.edges.values_mut() {
            *w *= factor;
        }
        prop_assert_eq!(place(&scaled, &topo).unwrap(), base);
    }

    /// Conservation and capacity hold at every point of the shuttle trace.
    #[test]
    fn sim_conserves_ions_and_capacity(circuit in arb_ms_circuit(8, 30)) {
        let topo = TrapTopology::new(3, 4, 3).unwrap();
        let graph = greedy_weights(&circuit);
        let m0 = place(&graph, &topo).unwrap();
        let fm = FidelityModel::default();
        let result = simulate(&circuit, &m0, &topo, &fm, &SimOptions::default()).unwrap();

        let mut counts: Vec<usize> = m0.chains().iter().map(|c| c.len()).collect();
        let total: usize = counts.iter().sum();
        let mut energy = vec![fm.n0; topo.num_traps as usize];
        for event in &result.trace.events {
            counts[event.from as usize] -= 1;
            counts[event.to as usize] += 1;
            energy[event.to as usize] += fm.heat_per_shuttle * event.hops as f64;
            prop_assert_eq!(counts.iter().sum::<usize>(), total);
            prop_assert!(counts.iter().all(|&c| c <= topo.trap_capacity as usize));
            prop_assert_eq!(event.hops, event.from.abs_diff(event.to));
        }
        prop_assert_eq!(energy, result.chain_energy);
        prop_assert_eq!(result.trace.gate_fidelities.len(), circuit.two_qubit_gate_count() as usize);
    }
}

/// Deterministic battery: relabeling qubits commutes with placement on
/// graphs with all-distinct weights. Qubits without edges are excluded:
/// they fill leftover slots in index order, which is label-dependent by
/// definition.
#[test]
fn placement_permutation_equivariance_battery() {
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};

    let topo = TrapTopology::new(4, 5, 3).unwrap();
    for seed in 0..200u64 {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let q = rng.random_range(6u32..12);
        let mut all: Vec<(u32, u32)> = (0..q)
            .flat_map(|a| ((a + 1)..q).map(move |b| (a, b)))
            .collect();
        all.shuffle(&mut rng);
        let edge_count = rng.random_range(4..=all.len().min(14));

        let mut edges = std::collections::BTreeMap::new();
        for (i, &(a, b)) in all[..edge_count].iter().enumerate() {
            // distinct, irregular weights
            edges.insert(QubitPair::new(a, b), 10.0 + 3.7 * i as f64);
        }
        let graph = InteractionGraph { num_qubits: q, edges };

        let mut perm: Vec<u32> = (0..q).collect();
        perm.shuffle(&mut rng);
        let mut relabeled_edges = std::collections::BTreeMap::new();
        for (pair, w) in &graph.edges {
            relabeled_edges.insert(
                QubitPair::new(perm[pair.a() as usize], perm[pair.b() as usize]),
                *w,
            );
        }
        let relabeled = InteractionGraph { num_qubits: q, edges: relabeled_edges };

        let base = place(&graph, &topo).unwrap();
        let mapped = place(&relabeled, &topo).unwrap();
        // compare trap partitions through the permutation
        for qubit in 0..q {
            let incident = graph.edges.keys().any(|p| p.contains(qubit));
            if incident {
                assert_eq!(
                    base.trap_of(qubit),
                    mapped.trap_of(perm[qubit as usize]),
                    "seed {seed}, qubit {qubit}"
                );
            } else {
                assert!(mapped.trap_of(perm[qubit as usize]).is_some());
            }
        }
    }
}
