//! Depolarizing noise on the decorated lattice: closed-form first-order
//! rates, a Pauli-frame sampler that checks them, the chain oracle, magic
//! state distillation recursions and the loss model.
//!
//! Frames record each error on the qubit it hits, without pushing X
//! components through later CZs. This is the counting the rate formulas use.

mod chain;
mod distill;
mod frame;
mod loss;
mod params;
mod sampler;
mod validate;

pub use chain::{
    chain_flip_oracle, chain_flip_probability, noisy_chain_trial, propagate_chain, theta_independence,
    ThetaIndependenceReport, KS_C_ALPHA_01, X_PATTERN_FLIPPING,
};
pub use distill::{
    distill_recursion, distill_step, fixed_point_residual, threshold, DistillKind, DistillParams, DistillTrace,
};
pub use frame::PauliFrame;
pub use loss::{chain_loss_exact, loss_model, simulate_chain_loss, LossModel};
pub use params::{closed_form_rates, ErrorRates, NoiseParams, CZ_ZZ_FRACTION, CZ_Z_FRACTION, SINGLE_Z_FRACTION};
pub use sampler::{
    correlated_pairs, sample_effective_errors, sample_errors, ErrorEvent, EventKind, NoiseCircuit, SampledErrors,
};
pub use validate::{validate_rates, RateCheck, SECOND_ORDER_C};
