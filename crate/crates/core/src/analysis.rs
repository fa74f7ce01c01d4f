//! Dependency layering, depth, and symmetry classification.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, QubitPair};

/// As-soon-as-possible layering of a circuit. Gates within a layer share no
/// qubit; a gate sits one layer above the deepest earlier gate it shares a
/// qubit with. 1-qubit gates occupy a slot on their qubit's timeline even
/// though they never contribute interaction edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DependencyDag {
    /// Gate indices (positions in `Circuit::gates`) per layer.
    pub layers: Vec<Vec<u32>>,
}

impl DependencyDag {
    pub fn depth(&self) -> u32 {
        self.layers.len() as u32
    }

    /// Layer index of a gate, if present.
    pub fn layer_of(&self, gate_index: u32) -> Option<u32> {
        self.layers
            .iter()
            .position(|layer| layer.contains(&gate_index))
            .map(|l| l as u32)
    }
}

pub fn build_dag(circuit: &Circuit) -> DependencyDag {
    let mut last_layer: Vec<Option<u32>> = vec![None; circuit.num_qubits as usize];
    let mut layers: Vec<Vec<u32>> = Vec::new();

    for (idx, gate) in circuit.gates.iter().enumerate() {
        let layer = gate
            .qubits()
            .filter_map(|q| last_layer[q as usize])
            .max()
            .map_or(0, |l| l + 1);
        if layer as usize == layers.len() {
            layers.push(Vec::new());
        }
        layers[layer as usize].push(idx as u32);
        for q in gate.qubits() {
            last_layer[q as usize] = Some(layer);
        }
    }

    DependencyDag { layers }
}

/// Occurrence count per distinct interaction pair.
pub fn edge_counts(circuit: &Circuit) -> BTreeMap<QubitPair, u32> {
    let mut counts = BTreeMap::new();
    for (_, pair) in circuit.two_qubit_gates() {
        *counts.entry(pair).or_insert(0) += 1;
    }
    counts
}

/// A program is symmetric when every distinct qubit pair interacts the same
/// number of times. Programs with no 2-qubit gates are vacuously symmetric.
pub fn classify_symmetry(circuit: &Circuit) -> bool {
    let counts = edge_counts(circuit);
    let mut values = counts.values();
    match values.next() {
        None => true,
        Some(first) => values.all(|c| c == first),
    }
}

/// The program statistics consumed by the penalized weighting policy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitStats {
    /// Number of 2-qubit gates.
    pub g: u32,
    /// Number of qubits.
    pub q: u32,
    /// Dependency depth (layer count).
    pub d: u32,
    /// Symmetry factor: 0 for symmetric programs, 1 otherwise.
    pub s: u32,
}

pub fn circuit_stats(circuit: &Circuit) -> CircuitStats {
    CircuitStats {
        g: circuit.two_qubit_gate_count(),
        q: circuit.num_qubits,
        d: build_dag(circuit).depth(),
        s: if classify_symmetry(circuit) { 0 } else { 1 },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{layered_sample_program, sample_program, Circuit, Gate};

    #[test]
    fn sample_program_depth_is_six() {
        assert_eq!(build_dag(&sample_program()).depth(), 6);
        assert_eq!(build_dag(&layered_sample_program()).depth(), 6);
    }

    #[test]
    fn layered_sample_second_layer_holds_g5_g6() {
        // In the layered ordering the 5th and 6th gates touch disjoint
        // qubit sets and directly extend the 1st and 3rd gates.
        let c = layered_sample_program();
        let dag = build_dag(&c);
        assert_eq!(dag.layer_of(4), Some(1));
        assert_eq!(dag.layer_of(5), Some(1));
        let g5 = c.gates[4].pair().unwrap();
        let g6 = c.gates[5].pair().unwrap();
        assert_eq!(g5, c.gates[0].pair().unwrap()); // shares both qubits with g1
        let g3 = c.gates[2].pair().unwrap();
        assert!(g6.contains(g3.a()) || g6.contains(g3.b()));
        // independence inside the layer
        assert!(!g5.contains(g6.a()) && !g5.contains(g6.b()));
    }

    #[test]
    fn single_gate_depth_one() {
        let c = Circuit::new("one", 2, vec![Gate::ms(0, 1)]);
        assert_eq!(build_dag(&c).depth(), 1);
    }

    #[test]
    fn empty_circuit_depth_zero() {
        let c = Circuit::new("empty", 4, vec![]);
        let stats = circuit_stats(&c);
        assert_eq!(stats, CircuitStats { g: 0, q: 4, d: 0, s: 0 });
    }

    #[test]
    fn one_qubit_gates_occupy_layer_slots() {
        let c = Circuit::new(
            "mixed",
            2,
            vec![Gate::single("GPI", 0), Gate::ms(0, 1), Gate::single("GPI", 1)],
        );
        let dag = build_dag(&c);
        assert_eq!(dag.depth(), 3);
        // but they are excluded from G
        assert_eq!(circuit_stats(&c).g, 1);
    }

    #[test]
    fn sample_program_is_asymmetric() {
        // edge counts 4,2,1,1,1,1
        let counts = edge_counts(&sample_program());
        let mut values: Vec<u32> = counts.values().copied().collect();
        values.sort_unstable();
        assert_eq!(values, vec![1, 1, 1, 1, 2, 4]);
        assert!(!classify_symmetry(&sample_program()));
        assert_eq!(circuit_stats(&sample_program()), CircuitStats { g: 10, q: 6, d: 6, s: 1 });
    }

    #[test]
    fn equal_count_programs_are_symmetric() {
        // every pair appears exactly twice
        let mut gates = Vec::new();
        for _ in 0..2 {
            gates.push(Gate::ms(0, 1));
            gates.push(Gate::ms(1, 2));
            gates.push(Gate::ms(0, 2));
        }
        let c = Circuit::new("qaoaish", 3, gates);
        assert!(classify_symmetry(&c));
        assert_eq!(circuit_stats(&c).s, 0);
    }

    #[test]
    fn layering_respects_dependencies() {
        let c = sample_program();
        let dag = build_dag(&c);
        let layer = |i: u32| dag.layer_of(i).unwrap();
        for (i, gi) in c.gates.iter().enumerate() {
            for (j, gj) in c.gates.iter().enumerate().skip(i + 1) {
                let shares = gi.qubits().any(|q| gj.qubits().any(|p| p == q));
                if shares {
                    assert!(layer(j as u32) > layer(i as u32), "gate {j} must follow gate {i}");
                }
            }
        }
    }
}
