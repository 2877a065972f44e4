//! Exact small-system arithmetic: discrete angles, Paulis, dense
//! statevectors and density matrices. Everything else in the crate uses
//! these as its reference implementation.

mod angle;
mod density;
mod pauli;
pub mod statevector;

pub use angle::{angle_add, Angle8};
pub use density::{average_density, DensityMatrix};
pub use pauli::PauliOp;
pub use statevector::{
    build_rotated_graph_state, build_rotated_graph_state_ordered, rotated_bra, rotated_ket, OperatorOrder, StateVector,
    Unnormalized, DEFAULT_QUBIT_CAP,
};
