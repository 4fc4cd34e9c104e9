// Copyright 2026 windctl contributors
// SPDX-License-Identifier: Apache-2.0

//! Counterdiabatic "wind" control for driven qubit-cavity systems.

// `!(x > 0.0)` is deliberate: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod density;
pub mod energetics;
pub mod error;
pub mod hilbert;
pub mod linalg;
pub mod models;
pub mod propagator;
pub mod redfield;
pub mod tomography;
pub mod table;
pub mod wind;

pub use error::{Error, Result};
pub use hilbert::{CompositeSpace, Operator, PauliLabel, QuantumState, Qubit};
pub use models::{DriveProtocol, Envelope, Hamiltonian, ModelKind, ModelParams, Profile};
