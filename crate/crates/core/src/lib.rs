//! Shuttle-aware qubit mapping for multi-trap trapped-ion machines.
//!
//! Multi-trap trapped-ion hardware executes a 2-qubit gate only when both
//! ions sit in the same trap; otherwise one ion has to be shuttled between
//! traps, which heats the destination chain and degrades every later gate
//! on it. The initial assignment of program qubits to traps therefore
//! decides how many shuttles a program pays for.
//!
//! This crate provides the full mapping pipeline:
//!
//! * [`circuit`] — gate-list IR, `ms-text` and OpenQASM-2 subset parsers;
//! * [`analysis`] — dependency layering, depth, and symmetry classification;
//! * [`weighting`] — interaction-graph edge weights under the greedy
//!   baseline and four position-aware decay policies (step, linear,
//!   exponential, penalized);
//! * [`placement`] — greedy placement of qubits onto a linear trap array;
//! * [`sim`] — a shuttle-counting QCCD simulator with a vibrational-energy
//!   fidelity model;
//! * [`benchgen`] — seeded benchmark circuit generators and suite manifests;
//! * [`harness`] / [`report`] — policy-comparison runs and report rendering;
//! * [`api`] — request/response types shared by the HTTP service and client.

pub mod analysis;
pub mod api;
pub mod benchgen;
pub mod circuit;
pub mod config;
pub mod error;
pub mod harness;
pub mod placement;
pub mod report;
pub mod sim;
pub mod weighting;

pub use circuit::{Circuit, CircuitFormat, Gate, Operands, Qubit, QubitPair};
pub use error::{Error, Result};
