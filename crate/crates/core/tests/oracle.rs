//! Small-instance shuttle oracles for the 2-trap case.
//!
//! Two independent references check the simulator:
//!
//! * an exhaustive search over all shuttle schedules (which ion moves at
//!   each cross-trap gate, and which bystander is evicted when the
//!   destination is full) establishes the true minimum hop count — the
//!   simulator may never beat it;
//! * a direct re-implementation of the documented decision rule replays
//!   each circuit and must reproduce the simulator's event trace exactly.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use shuttlemap_core::circuit::{Circuit, Gate, QubitPair};
use shuttlemap_core::placement::{place, Mapping, TrapTopology};
use shuttlemap_core::sim::{simulate, FidelityModel, SimOptions};
use shuttlemap_core::weighting::greedy_weights;

/// Exhaustive minimum hop count over every legal shuttle schedule on two
/// traps. State: which trap each qubit occupies.
fn optimal_hops(
    pairs: &[QubitPair],
    traps: &mut Vec<u8>,
    capacity: usize,
    idx: usize,
    memo: &mut HashMap<(usize, Vec<u8>), u64>,
) -> u64 {
    if idx == pairs.len() {
        return 0;
    }
    if let Some(&hit) = memo.get(&(idx, traps.clone())) {
        return hit;
    }

    let pair = pairs[idx];
    let (a, b) = (pair.a() as usize, pair.b() as usize);
    let best = if traps[a] == traps[b] {
        optimal_hops(pairs, traps, capacity, idx + 1, memo)
    } else {
        let mut best = u64::MAX;
        // either gate ion may move
        for (mover, stay) in [(a, b), (b, a)] {
            let dest = traps[stay];
            let dest_count = traps.iter().filter(|&&t| t == dest).count();
            if dest_count < capacity {
                let src = traps[mover];
                traps[mover] = dest;
                best = best.min(1 + optimal_hops(pairs, traps, capacity, idx + 1, memo));
                traps[mover] = src;
            } else {
                // destination full: any bystander may be evicted first
                let victims: Vec<usize> = (0..traps.len())
                    .filter(|&v| traps[v] == dest && v != stay)
                    .collect();
                for victim in victims {
                    let src = traps[mover];
                    traps[victim] = src; // only other trap on a 2-trap machine
                    traps[mover] = dest;
                    best = best.min(2 + optimal_hops(pairs, traps, capacity, idx + 1, memo));
                    traps[mover] = src;
                    traps[victim] = dest;
                }
            }
        }
        best
    };
    memo.insert((idx, traps.clone()), best);
    best
}

#[derive(Debug, PartialEq, Eq, Clone, Copy)]
struct OracleEvent {
    gate: u32,
    ion: u32,
    from: u32,
    to: u32,
    eviction: bool,
}

/// Straight-line replay of the documented scheduling rule, independent of
/// the simulator's internals. Trap membership is all that matters on two
/// traps with unit hops.
fn greedy_rule_events(
    pairs: &[QubitPair],
    initial: &Mapping,
    capacity: usize,
    lookahead: usize,
) -> Vec<OracleEvent> {
    let num_traps = initial.num_traps();
    let mut trap_of: Vec<u32> = (0..initial.num_qubits())
        .map(|q| initial.trap_of(q).expect("complete mapping"))
        .collect();
    let count = |trap_of: &[u32], t: u32| trap_of.iter().filter(|&&x| x == t).count();

    let mut events = Vec::new();
    for (k, pair) in pairs.iter().enumerate() {
        let window = &pairs[(k + 1).min(pairs.len())..(k + 1 + lookahead).min(pairs.len())];
        let (q1, q2) = (pair.a(), pair.b());
        let (t1, t2) = (trap_of[q1 as usize], trap_of[q2 as usize]);
        if t1 == t2 {
            continue;
        }

        let busy = |q: u32| {
            window
                .iter()
                .filter(|p| {
                    p.contains(q)
                        && trap_of[p.other(q) as usize] == trap_of[q as usize]
                })
                .count()
        };
        let free1 = capacity - count(&trap_of, t1);
        let free2 = capacity - count(&trap_of, t2);
        let mover = if free2 == 0 && free1 > 0 {
            q2
        } else if free1 == 0 && free2 > 0 {
            q1
        } else {
            match busy(q1).cmp(&busy(q2)) {
                std::cmp::Ordering::Less => q1,
                std::cmp::Ordering::Greater => q2,
                std::cmp::Ordering::Equal => q1.min(q2),
            }
        };
        let stay = if mover == q1 { q2 } else { q1 };
        let dest = trap_of[stay as usize];

        if capacity - count(&trap_of, dest) == 0 {
            let victim = (0..trap_of.len() as u32)
                .filter(|&v| trap_of[v as usize] == dest && v != stay)
                .min_by_key(|&v| (window.iter().filter(|p| p.contains(v)).count(), v))
                .expect("occupied chain");
            let target = (0..num_traps)
                .filter(|&t| t != dest && capacity - count(&trap_of, t) > 0)
                .min_by_key(|&t| (t.abs_diff(dest), t))
                .expect("some trap has space");
            trap_of[victim as usize] = target;
            events.push(OracleEvent { gate: k as u32, ion: victim, from: dest, to: target, eviction: true });
        }
        let src = trap_of[mover as usize];
        trap_of[mover as usize] = dest;
        events.push(OracleEvent { gate: k as u32, ion: mover, from: src, to: dest, eviction: false });
    }
    events
}

fn check_circuit(circuit: &Circuit, m0: &Mapping, topo: &TrapTopology) {
    let pairs = circuit.pair_sequence();
    let opts = SimOptions::default();
    let result = simulate(circuit, m0, topo, &FidelityModel::default(), &opts)
        .unwrap_or_else(|e| panic!("simulate failed on {}: {e}", circuit.to_ms_text()));

    // replay the trace: conservation and capacity at every step
    let mut counts: Vec<usize> = m0.chains().iter().map(|c| c.len()).collect();
    let total: usize = counts.iter().sum();
    for event in &result.trace.events {
        counts[event.from as usize] -= 1;
        counts[event.to as usize] += 1;
        assert_eq!(counts.iter().sum::<usize>(), total, "conservation violated");
        assert!(
            counts.iter().all(|&c| c <= topo.trap_capacity as usize),
            "capacity violated on {}",
            circuit.to_ms_text()
        );
    }

    // the greedy schedule never beats the true optimum
    let mut traps: Vec<u8> = (0..circuit.num_qubits)
        .map(|q| m0.trap_of(q).unwrap() as u8)
        .collect();
    let mut memo = HashMap::new();
    let optimum = optimal_hops(&pairs, &mut traps, topo.trap_capacity as usize, 0, &mut memo);
    assert!(
        result.shuttles >= optimum,
        "simulator reported {} hops, below the optimum {} for {}",
        result.shuttles,
        optimum,
        circuit.to_ms_text()
    );

    // and must match the rule oracle exactly
    let expected = greedy_rule_events(&pairs, m0, topo.trap_capacity as usize, opts.lookahead);
    let got: Vec<OracleEvent> = result
        .trace
        .events
        .iter()
        .map(|e| OracleEvent { gate: e.gate, ion: e.ion, from: e.from, to: e.to, eviction: e.eviction })
        .collect();
    assert_eq!(got, expected, "trace mismatch for {}", circuit.to_ms_text());
}

fn split_mapping(q: u32, topo: &TrapTopology) -> Mapping {
    let half = q.div_ceil(2);
    let chains = vec![(0..half).collect(), (half..q).collect()];
    Mapping::from_chains(chains, q, topo).unwrap()
}

/// Every 4-qubit circuit with up to five 2-qubit gates, exhaustively.
#[test]
fn oracle_exhaustive_four_qubits() {
    let q = 4u32;
    let topo = TrapTopology::new(2, 3, 2).unwrap();
    let pairs: Vec<(u32, u32)> = (0..q)
        .flat_map(|a| ((a + 1)..q).map(move |b| (a, b)))
        .collect();

    let mut checked = 0u64;
    for len in 1..=5usize {
        let mut indices = vec![0usize; len];
        loop {
            let gates: Vec<Gate> = indices.iter().map(|&i| Gate::ms(pairs[i].0, pairs[i].1)).collect();
            let circuit = Circuit::new("exh", q, gates);

            let placed = place(&greedy_weights(&circuit), &topo).unwrap();
            check_circuit(&circuit, &placed, &topo);
            check_circuit(&circuit, &split_mapping(q, &topo), &topo);
            checked += 1;

            // odometer over pair indices
            let mut pos = 0;
            loop {
                if pos == len {
                    break;
                }
                indices[pos] += 1;
                if indices[pos] < pairs.len() {
                    break;
                }
                indices[pos] = 0;
                pos += 1;
            }
            if pos == len {
                break;
            }
        }
    }
    assert_eq!(checked, (1..=5u64).map(|l| 6u64.pow(l as u32)).sum::<u64>());
}

/// Seeded random circuits across 5..=8 qubits and up to 6 gates.
#[test]
fn oracle_random_small_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    for q in 5u32..=8 {
        let load = q.div_ceil(2);
        let topo = TrapTopology::new(2, load + 1, load).unwrap();
        for _ in 0..400 {
            let len = rng.random_range(1..=6usize);
            let gates: Vec<Gate> = (0..len)
                .map(|_| {
                    let a = rng.random_range(0..q);
                    let b = loop {
                        let x = rng.random_range(0..q);
                        if x != a {
                            break x;
                        }
                    };
                    Gate::ms(a, b)
                })
                .collect();
            let circuit = Circuit::new("rnd", q, gates);

            let placed = place(&greedy_weights(&circuit), &topo).unwrap();
            check_circuit(&circuit, &placed, &topo);
            check_circuit(&circuit, &split_mapping(q, &topo), &topo);
        }
    }
}
