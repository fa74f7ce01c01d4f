//! Shuttle-counting QCCD simulator.
//!
//! Gates execute one at a time in program order. A 2-qubit gate whose ions
//! sit in different traps first triggers a shuttle: one ion is split from
//! its chain, moved trap-by-trap along the linear array, and merged into
//! the destination chain. Every merge heats the destination chain, and the
//! per-gate fidelity `F = 1 - gamma*tau - A*(2*n + 1)` is evaluated on the
//! executing chain's current vibrational energy `n`, so shuttles degrade
//! every later gate on that chain.
//!
//! Shuttles are counted per inter-trap segment: a move across `k` segments
//! counts `k` (the `shuttles` counter); the number of move operations is
//! tracked separately (`moves`) since the literature is not consistent
//! about the unit.

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Qubit, QubitPair};
use crate::error::{Error, Result};
use crate::placement::{Mapping, TrapTopology};

/// Parameters of the per-gate fidelity model and shuttle cost model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FidelityModel {
    /// Trap heating rate (quanta per unit time).
    pub gamma: f64,
    /// 2-qubit gate time.
    pub tau: f64,
    /// Motional-coupling coefficient.
    #[serde(rename = "A")]
    pub a_coeff: f64,
    /// Quanta added to the destination chain per merge, per hop.
    pub heat_per_shuttle: f64,
    /// Initial vibrational energy of every chain.
    pub n0: f64,
    /// Time cost of one inter-trap hop (for the execution-time metric).
    pub shuttle_time: f64,
}

impl Default for FidelityModel {
    /// Defaults keep per-gate fidelity close to 1 so that the product over
    /// a thousand-gate program stays inside (0, 1) and policy-to-policy
    /// ratios remain O(1). The coefficients are configuration, not
    /// hardware calibration.
    fn default() -> Self {
        FidelityModel {
            gamma: 1e-5,
            tau: 1.0,
            a_coeff: 5e-4,
            heat_per_shuttle: 0.002,
            n0: 0.0,
            shuttle_time: 1.0,
        }
    }
}

impl FidelityModel {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("gamma", self.gamma),
            ("tau", self.tau),
            ("A", self.a_coeff),
            ("heat_per_shuttle", self.heat_per_shuttle),
            ("n0", self.n0),
            ("shuttle_time", self.shuttle_time),
        ];
        for (name, v) in fields {
            if v < 0.0 || !v.is_finite() {
                return Err(Error::Config(format!("fidelity parameter {name} must be >= 0")));
            }
        }
        Ok(())
    }

    /// Per-gate fidelity on a chain with vibrational energy `n`, clamped
    /// to [0, 1].
    pub fn gate_fidelity(&self, n: f64) -> f64 {
        (1.0 - self.gamma * self.tau - self.a_coeff * (2.0 * n + 1.0)).clamp(0.0, 1.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShuttleEvent {
    /// Index (in the full gate list) of the gate that forced the move.
    pub gate: u32,
    pub ion: Qubit,
    pub from: u32,
    pub to: u32,
    /// Inter-trap segments traversed: `|from - to|` on the linear array.
    pub hops: u32,
    /// True when the move evicted a bystander to make room.
    pub eviction: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ShuttleTrace {
    pub events: Vec<ShuttleEvent>,
    /// One entry per executed 2-qubit gate, in program order.
    pub gate_fidelities: Vec<f64>,
}

impl ShuttleTrace {
    /// One JSON object per line, one line per shuttle event.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for event in &self.events {
            out.push_str(&serde_json::to_string(event).expect("event serializes"));
            out.push('\n');
        }
        out
    }
}

/// Product of the clamped per-gate fidelities.
pub fn program_fidelity(trace: &ShuttleTrace) -> f64 {
    trace.gate_fidelities.iter().map(|f| f.clamp(0.0, 1.0)).product()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    /// Hop-weighted shuttle count.
    pub shuttles: u64,
    /// Number of move operations (each may span several hops).
    pub moves: u64,
    pub program_fidelity: f64,
    /// Modeled execution time: `G * tau + shuttles * shuttle_time`.
    pub exec_time: f64,
    /// Final per-trap vibrational energy.
    pub chain_energy: Vec<f64>,
    pub trace: ShuttleTrace,
}

/// Mutable machine state during one simulation.
#[derive(Clone, Debug)]
pub struct MachineState {
    pub mapping: Mapping,
    pub chain_energy: Vec<f64>,
    pub shuttle_count: u64,
    pub move_count: u64,
    pub trace: ShuttleTrace,
}

impl MachineState {
    pub fn new(mapping: Mapping, fm: &FidelityModel) -> Self {
        let traps = mapping.num_traps() as usize;
        MachineState {
            mapping,
            chain_energy: vec![fm.n0; traps],
            shuttle_count: 0,
            move_count: 0,
            trace: ShuttleTrace::default(),
        }
    }

    fn total_ions(&self) -> usize {
        self.mapping.chains().iter().map(|c| c.len()).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimOptions {
    /// Number of upcoming 2-qubit gates consulted when choosing which ion
    /// moves (and which bystander to evict).
    pub lookahead: usize,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions { lookahead: 20 }
    }
}

pub fn simulate(
    circuit: &Circuit,
    initial: &Mapping,
    topo: &TrapTopology,
    fm: &FidelityModel,
    opts: &SimOptions,
) -> Result<SimResult> {
    topo.validate()?;
    fm.validate()?;
    if initial.num_traps() != topo.num_traps {
        return Err(Error::InvalidTopology(format!(
            "mapping has {} traps, topology {}",
            initial.num_traps(),
            topo.num_traps
        )));
    }
    for gate in &circuit.gates {
        for q in gate.qubits() {
            if initial.trap_of(q).is_none() {
                return Err(Error::Unmapped(q));
            }
        }
    }
    for (t, chain) in initial.chains().iter().enumerate() {
        if chain.len() > topo.trap_capacity as usize {
            return Err(Error::InvalidTopology(format!(
                "initial chain {t} exceeds trap capacity {}",
                topo.trap_capacity
            )));
        }
    }

    let gates: Vec<(u32, QubitPair)> = circuit
        .two_qubit_gates()
        .map(|(i, p)| (i as u32, p))
        .collect();
    let pairs: Vec<QubitPair> = gates.iter().map(|(_, p)| *p).collect();

    let mut state = MachineState::new(initial.clone(), fm);
    let ions_before = state.total_ions();

    for (k, &(gate_idx, pair)) in gates.iter().enumerate() {
        let window_end = (k + 1 + opts.lookahead).min(pairs.len());
        let window = &pairs[k + 1..window_end];

        let (t1, t2) = (
            state.mapping.trap_of(pair.a()).expect("mapped"),
            state.mapping.trap_of(pair.b()).expect("mapped"),
        );
        if t1 != t2 {
            resolve_shuttle(&mut state, gate_idx, pair.a(), pair.b(), topo, fm, window)?;
        }

        let trap = state.mapping.trap_of(pair.a()).expect("mapped");
        debug_assert_eq!(trap, state.mapping.trap_of(pair.b()).expect("mapped"));
        let fidelity = fm.gate_fidelity(state.chain_energy[trap as usize]);
        state.trace.gate_fidelities.push(fidelity);

        debug_assert_eq!(state.total_ions(), ions_before);
        debug_assert!(state
            .mapping
            .chains()
            .iter()
            .all(|c| c.len() <= topo.trap_capacity as usize));
    }

    let g = pairs.len() as f64;
    Ok(SimResult {
        shuttles: state.shuttle_count,
        moves: state.move_count,
        program_fidelity: program_fidelity(&state.trace),
        exec_time: g * fm.tau + state.shuttle_count as f64 * fm.shuttle_time,
        chain_energy: state.chain_energy,
        trace: state.trace,
    })
}

/// Gates in `window` that keep `ion` busy inside its current trap: the
/// fewer it has, the cheaper it is to move it away.
fn own_trap_gate_count(ion: Qubit, window: &[QubitPair], mapping: &Mapping) -> usize {
    let home = mapping.trap_of(ion);
    window
        .iter()
        .filter(|p| p.contains(ion) && mapping.trap_of(p.other(ion)) == home)
        .count()
}

/// Any appearance of `ion` in the window (used for eviction).
fn window_use_count(ion: Qubit, window: &[QubitPair]) -> usize {
    window.iter().filter(|p| p.contains(ion)).count()
}

/// Bring the ions of a cross-trap gate together. Exactly one of the two
/// gate ions moves, selected as follows: a full trap never receives the
/// other ion unless a bystander is evicted first, so when exactly one of
/// the two traps has free capacity the ion moves into it; otherwise the
/// ion with fewer upcoming gates partnered in its own trap moves (ties:
/// lower qubit index). When the destination chain is full, its ion with
/// the fewest upcoming gates is evicted to the nearest trap with free
/// space (ties: leftward).
pub fn resolve_shuttle(
    state: &mut MachineState,
    gate_idx: u32,
    q1: Qubit,
    q2: Qubit,
    topo: &TrapTopology,
    fm: &FidelityModel,
    window: &[QubitPair],
) -> Result<()> {
    let t1 = state.mapping.trap_of(q1).ok_or(Error::Unmapped(q1))?;
    let t2 = state.mapping.trap_of(q2).ok_or(Error::Unmapped(q2))?;
    debug_assert_ne!(t1, t2);

    let free = |state: &MachineState, t: u32| {
        topo.trap_capacity as usize - state.mapping.chain(t).len()
    };

    let (free1, free2) = (free(state, t1), free(state, t2));
    let mover = if free2 == 0 && free1 > 0 {
        q2
    } else if free1 == 0 && free2 > 0 {
        q1
    } else {
        let busy1 = own_trap_gate_count(q1, window, &state.mapping);
        let busy2 = own_trap_gate_count(q2, window, &state.mapping);
        match busy1.cmp(&busy2) {
            std::cmp::Ordering::Less => q1,
            std::cmp::Ordering::Greater => q2,
            std::cmp::Ordering::Equal => q1.min(q2),
        }
    };
    let stationary = if mover == q1 { q2 } else { q1 };
    let dest = state.mapping.trap_of(stationary).expect("mapped");

    if free(state, dest) == 0 {
        let victim = state
            .mapping
            .chain(dest)
            .iter()
            .copied()
            .filter(|&ion| ion != stationary)
            .min_by_key(|&ion| (window_use_count(ion, window), ion))
            .expect("chain holds more than the gate ion");
        let target = (0..topo.num_traps)
            .filter(|&t| t != dest && free(state, t) > 0)
            .min_by_key(|&t| (t.abs_diff(dest), t))
            .ok_or(Error::Deadlock { gate: gate_idx as usize, ion: mover })?;
        move_ion(state, gate_idx, victim, dest, target, fm, true);
    }

    let src = state.mapping.trap_of(mover).expect("mapped");
    move_ion(state, gate_idx, mover, src, dest, fm, false);
    Ok(())
}

/// Split an ion from its chain and merge it into the destination, heating
/// the destination chain by `heat_per_shuttle` per hop. The ion joins the
/// chain end nearest to where it came from.
fn move_ion(
    state: &mut MachineState,
    gate_idx: u32,
    ion: Qubit,
    from: u32,
    to: u32,
    fm: &FidelityModel,
    eviction: bool,
) {
    let hops = from.abs_diff(to);
    state.mapping.remove(ion);
    if from < to {
        state.mapping.push_front(to, ion);
    } else {
        state.mapping.push_back(to, ion);
    }
    state.chain_energy[to as usize] += fm.heat_per_shuttle * hops as f64;
    state.shuttle_count += hops as u64;
    state.move_count += 1;
    state.trace.events.push(ShuttleEvent { gate: gate_idx, ion, from, to, hops, eviction });
}
