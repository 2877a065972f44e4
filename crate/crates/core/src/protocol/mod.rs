//! The two-party blind protocol. Alice holds Θ, Φ and R; Bob's engine sees
//! only [`WireMessage`]s and drives the quantum state through
//! [`QuantumBackend`].

mod alice;
mod backend;
pub mod blindness;
mod bob;
mod pattern;
mod session;
mod wire;

pub use alice::{Alice, AliceSecrets};
pub use backend::{QuantumBackend, QubitSource, StatevectorBackend};
pub use bob::Bob;
pub use pattern::{adapt_angle, blind_angle, EntanglementPlan, MeasurementPattern};
pub use session::{
    run_direct_mbqc, run_protocol, run_protocol_trials, run_session, seeded_session, OutcomeDistribution,
    OutcomeHistogram, SessionRecord, DIRECT_QUBIT_LIMIT,
};
pub use wire::{QubitHandle, Transcript, WireMessage};
