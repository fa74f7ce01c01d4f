//! Initial placement of program qubits onto a linear trap array.
//!
//! Edges are processed in descending weight order. The first edge seeds the
//! emptiest trap; afterwards each edge with exactly one mapped endpoint
//! places the unmapped qubit into the free load slot minimizing the total
//! distance to its already-mapped neighbors. Edges whose endpoints are both
//! unmapped are deferred to a second pass that seeds disconnected
//! components the same way; leftover isolated qubits fill the remaining
//! load slots left to right.
//!
//! Only the initial-load slots are used here; the communication capacity
//! (trap capacity minus initial load) stays reserved for runtime shuttles.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::circuit::Qubit;
use crate::error::{Error, Result};
use crate::weighting::InteractionGraph;

/// A row of `num_traps` traps connected linearly (trap `t` neighbors
/// `t - 1` and `t + 1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrapTopology {
    pub num_traps: u32,
    /// Maximum chain length per trap.
    pub trap_capacity: u32,
    /// Ions loaded per trap at placement time. The difference
    /// `trap_capacity - initial_load` is the communication capacity.
    pub initial_load: u32,
}

impl Default for TrapTopology {
    /// The L6 evaluation topology: six traps, 15 ions loaded, two
    /// communication slots per trap.
    fn default() -> Self {
        TrapTopology { num_traps: 6, trap_capacity: 17, initial_load: 15 }
    }
}

impl TrapTopology {
    pub fn new(num_traps: u32, trap_capacity: u32, initial_load: u32) -> Result<Self> {
        let topo = TrapTopology { num_traps, trap_capacity, initial_load };
        topo.validate()?;
        Ok(topo)
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_traps == 0 {
            return Err(Error::InvalidTopology("need at least one trap".into()));
        }
        if self.initial_load == 0 {
            return Err(Error::InvalidTopology("initial_load must be >= 1".into()));
        }
        if self.initial_load >= self.trap_capacity {
            return Err(Error::InvalidTopology(format!(
                "communication capacity is {} - {} < 1",
                self.trap_capacity, self.initial_load
            )));
        }
        Ok(())
    }

    pub fn communication_capacity(&self) -> u32 {
        self.trap_capacity - self.initial_load
    }

    pub fn total_load_slots(&self) -> u32 {
        self.num_traps * self.initial_load
    }
}

/// Assignment of qubits to ordered positions in trap chains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mapping {
    chains: Vec<VecDeque<Qubit>>,
    trap_of: Vec<Option<u32>>,
}

impl Mapping {
    pub fn empty(num_traps: u32, num_qubits: u32) -> Self {
        Mapping {
            chains: vec![VecDeque::new(); num_traps as usize],
            trap_of: vec![None; num_qubits as usize],
        }
    }

    /// Build from explicit per-trap chains; every qubit must appear at most
    /// once and chain lengths must respect the trap capacity.
    pub fn from_chains(chains: Vec<Vec<Qubit>>, num_qubits: u32, topo: &TrapTopology) -> Result<Self> {
        if chains.len() != topo.num_traps as usize {
            return Err(Error::InvalidTopology(format!(
                "expected {} chains, got {}",
                topo.num_traps,
                chains.len()
            )));
        }
        let mut mapping = Mapping::empty(topo.num_traps, num_qubits);
        for (t, chain) in chains.into_iter().enumerate() {
            if chain.len() > topo.trap_capacity as usize {
                return Err(Error::InvalidTopology(format!(
                    "chain {t} exceeds trap capacity {}",
                    topo.trap_capacity
                )));
            }
            for q in chain {
                if q >= num_qubits {
                    return Err(Error::InvalidCircuit(format!("qubit {q} out of range")));
                }
                if mapping.trap_of[q as usize].is_some() {
                    return Err(Error::InvalidCircuit(format!("qubit {q} mapped twice")));
                }
                mapping.trap_of[q as usize] = Some(t as u32);
                mapping.chains[t].push_back(q);
            }
        }
        Ok(mapping)
    }

    pub fn trap_of(&self, q: Qubit) -> Option<u32> {
        self.trap_of.get(q as usize).copied().flatten()
    }

    /// Position of a qubit within its chain.
    pub fn position_of(&self, q: Qubit) -> Option<(u32, usize)> {
        let trap = self.trap_of(q)?;
        let pos = self.chains[trap as usize].iter().position(|&x| x == q)?;
        Some((trap, pos))
    }

    pub fn chain(&self, trap: u32) -> &VecDeque<Qubit> {
        &self.chains[trap as usize]
    }

    pub fn chains(&self) -> &[VecDeque<Qubit>] {
        &self.chains
    }

    pub fn num_traps(&self) -> u32 {
        self.chains.len() as u32
    }

    pub fn num_qubits(&self) -> u32 {
        self.trap_of.len() as u32
    }

    pub fn mapped_count(&self) -> usize {
        self.trap_of.iter().filter(|t| t.is_some()).count()
    }

    pub fn is_complete(&self) -> bool {
        self.mapped_count() == self.trap_of.len()
    }

    pub fn push_back(&mut self, trap: u32, q: Qubit) {
        debug_assert!(self.trap_of[q as usize].is_none());
        self.chains[trap as usize].push_back(q);
        self.trap_of[q as usize] = Some(trap);
    }

    pub fn push_front(&mut self, trap: u32, q: Qubit) {
        debug_assert!(self.trap_of[q as usize].is_none());
        self.chains[trap as usize].push_front(q);
        self.trap_of[q as usize] = Some(trap);
    }

    /// Detach a qubit from its chain (used when an ion shuttles out).
    pub fn remove(&mut self, q: Qubit) -> Option<u32> {
        let trap = self.trap_of(q)?;
        let chain = &mut self.chains[trap as usize];
        let pos = chain.iter().position(|&x| x == q)?;
        chain.remove(pos);
        self.trap_of[q as usize] = None;
        Some(trap)
    }

    pub fn to_vecs(&self) -> Vec<Vec<Qubit>> {
        self.chains.iter().map(|c| c.iter().copied().collect()).collect()
    }
}

/// Distance between two mapped qubits: co-trapped qubits are separated by
/// their position difference, qubits in different traps by the trap
/// distance scaled by the trap capacity, so an inter-trap hop always
/// dominates any intra-trap offset.
pub fn distance(mapping: &Mapping, q1: Qubit, q2: Qubit, topo: &TrapTopology) -> Result<u64> {
    let (t1, p1) = mapping.position_of(q1).ok_or(Error::Unmapped(q1))?;
    let (t2, p2) = mapping.position_of(q2).ok_or(Error::Unmapped(q2))?;
    if t1 == t2 {
        Ok(p1.abs_diff(p2) as u64)
    } else {
        Ok(t1.abs_diff(t2) as u64 * topo.trap_capacity as u64)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum End {
    Back,
    Front,
}

/// Greedy placement of an interaction graph onto the topology.
pub fn place(graph: &InteractionGraph, topo: &TrapTopology) -> Result<Mapping> {
    topo.validate()?;
    let num_qubits = graph.num_qubits;
    if num_qubits > topo.total_load_slots() {
        return Err(Error::CapacityInfeasible {
            qubits: num_qubits,
            traps: topo.num_traps,
            load: topo.initial_load,
        });
    }

    let edges = graph.sorted_edges();
    let neighbors = graph.neighbors();
    let mut mapping = Mapping::empty(topo.num_traps, num_qubits);
    let mut deferred = Vec::new();

    let mut first = true;
    for (pair, _) in &edges {
        let (a, b) = (pair.a(), pair.b());
        match (mapping.trap_of(a).is_some(), mapping.trap_of(b).is_some()) {
            (true, true) => {}
            (true, false) => place_qubit(&mut mapping, b, &neighbors[b as usize], topo),
            (false, true) => place_qubit(&mut mapping, a, &neighbors[a as usize], topo),
            (false, false) if first => seed_edge(&mut mapping, a, b, &neighbors, topo),
            (false, false) => deferred.push(*pair),
        }
        first = false;
    }

    // disconnected components, still in weight order
    for pair in deferred {
        let (a, b) = (pair.a(), pair.b());
        match (mapping.trap_of(a).is_some(), mapping.trap_of(b).is_some()) {
            (true, true) => {}
            (true, false) => place_qubit(&mut mapping, b, &neighbors[b as usize], topo),
            (false, true) => place_qubit(&mut mapping, a, &neighbors[a as usize], topo),
            (false, false) => seed_edge(&mut mapping, a, b, &neighbors, topo),
        }
    }

    // isolated qubits fill remaining load slots left to right
    for q in 0..num_qubits {
        if mapping.trap_of(q).is_none() {
            let trap = (0..topo.num_traps)
                .find(|&t| mapping.chain(t).len() < topo.initial_load as usize)
                .expect("total load capacity checked above");
            mapping.push_back(trap, q);
        }
    }

    debug_assert!(mapping.is_complete());
    Ok(mapping)
}

/// Seed a component: both endpoints go adjacently into the trap with the
/// most free load capacity (leftmost on ties). If that trap has only one
/// free slot left, the second endpoint falls back to distance-minimizing
/// placement.
fn seed_edge(
    mapping: &mut Mapping,
    a: Qubit,
    b: Qubit,
    neighbors: &[Vec<Qubit>],
    topo: &TrapTopology,
) {
    let trap = (0..topo.num_traps)
        .max_by_key(|&t| {
            let free = topo.initial_load as usize - mapping.chain(t).len();
            (free, std::cmp::Reverse(t))
        })
        .expect("at least one trap");
    mapping.push_back(trap, a);
    if mapping.chain(trap).len() < topo.initial_load as usize {
        mapping.push_back(trap, b);
    } else {
        place_qubit(mapping, b, &neighbors[b as usize], topo);
    }
}

/// Place one qubit into the free load slot minimizing the total distance
/// to its mapped neighbors. Both chain ends of every trap with a free load
/// slot are candidates; ties prefer the lower trap index, then the back of
/// the chain.
fn place_qubit(mapping: &mut Mapping, q: Qubit, neighbors: &[Qubit], topo: &TrapTopology) {
    let mapped_neighbors: Vec<(u32, usize)> = neighbors
        .iter()
        .filter_map(|&v| mapping.position_of(v))
        .collect();

    let mut best: Option<(u64, u32, End)> = None;
    for t in 0..topo.num_traps {
        let len = mapping.chain(t).len();
        if len >= topo.initial_load as usize {
            continue;
        }
        for end in [End::Back, End::Front] {
            let mut total: u64 = 0;
            for &(vt, vp) in &mapped_neighbors {
                total += if vt == t {
                    match end {
                        End::Back => (len - vp) as u64,
                        // inserting at the front shifts the chain right
                        End::Front => (vp + 1) as u64,
                    }
                } else {
                    vt.abs_diff(t) as u64 * topo.trap_capacity as u64
                };
            }
            let candidate = (total, t, end);
            let better = match best {
                None => true,
                Some((bt, btrap, _)) => {
                    total < bt || (total == bt && t < btrap)
                    // Back precedes Front in the candidate loop, so equal
                    // (total, trap) keeps Back.
                }
            };
            if better {
                best = Some(candidate);
            }
        }
    }

    let (_, trap, end) = best.expect("capacity checked before placement");
    match end {
        End::Back => mapping.push_back(trap, q),
        End::Front => mapping.push_front(trap, q),
    }
}
