//! Hardware-agnostic programming, compilation, and execution of hybrid
//! quantum-classical programs.
//!
//! The crate is organized as a stack of layers:
//!
//! * [`het`] — the heterogeneous key/value map used for options, buffer
//!   metadata, and handles to live framework objects.
//! * [`ir`] — the polymorphic intermediate representation: instructions,
//!   n-ary composites with free variables, restricted symbolic parameters,
//!   a qubit-dependency graph view, visitors, and a JSON codec.
//! * [`catalog`] — the digital gate and annealing instruction catalog with
//!   exact unitaries.
//! * [`frontend`] — kernel-source compilers for the XASM, Quil, and
//!   OpenQASM-2 dialects, plus translation back out of the IR.
//! * [`circuits`] — dynamic circuit generators (`range`, `qft`,
//!   `exp_i_theta`) and IR-to-IR transformations such as swap routing.
//! * [`observable`] — spin and fermionic operator algebra, the
//!   Jordan-Wigner transform, and measurement-basis circuit generation.
//! * [`backend`] — quantum buffers, the accelerator contract, the local
//!   statevector simulator, the exhaustive annealing solver, and readout
//!   error mitigation.
//! * [`optimize`] / [`algorithm`] — classical optimizers, the
//!   parameter-shift rule, and the VQE and DDCL hybrid algorithms.
//! * [`registry`] — the service registry mapping `(kind, name)` pairs to
//!   factories for every pluggable contract above.
//!
//! Everything here is `no_std`-compatible (with `alloc`); IO, the global
//! framework lifecycle, remote execution, and the CLI live in the `qframe`
//! companion crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod algorithm;
pub mod backend;
pub mod catalog;
pub mod circuits;
pub mod frontend;
pub mod het;
pub mod ir;
mod math;
pub mod observable;
pub mod optimize;
pub mod registry;

pub use het::{HetMap, HetValue};
pub use ir::{Composite, Instruction, InstrParam, IrContainer};
pub use backend::QuantumBuffer;
