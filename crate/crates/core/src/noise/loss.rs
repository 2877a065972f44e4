use rand::Rng;
use serde::Serialize;

use super::params::check_probability;
use crate::error::NoiseError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LossModel {
    pub ploss: f64,
    pub distance: usize,
    /// A chain is discarded when any of its three qubits is lost.
    pub effective_loss: f64,
    /// Post-selection success probability `(1 − 3p_loss)^{d³}`.
    pub postselect_overhead: f64,
}

pub fn loss_model(ploss: f64, distance: usize) -> Result<LossModel, NoiseError> {
    check_probability("ploss", ploss)?;
    if 3.0 * ploss > 1.0 {
        return Err(NoiseError::LossTooLarge(ploss));
    }
    let effective_loss = 3.0 * ploss;
    Ok(LossModel {
        ploss,
        distance,
        effective_loss,
        postselect_overhead: (1.0 - effective_loss).powi((distance as i32).pow(3)),
    })
}

/// Exact probability that a 3-qubit chain loses at least one qubit.
pub fn chain_loss_exact(ploss: f64) -> f64 {
    1.0 - (1.0 - ploss).powi(3)
}

/// Fraction of simulated chains with at least one lost qubit.
pub fn simulate_chain_loss<R: Rng + ?Sized>(ploss: f64, trials: u64, rng: &mut R) -> Result<f64, NoiseError> {
    check_probability("ploss", ploss)?;
    let lost = (0..trials)
        .filter(|_| (0..3).map(|_| rng.random::<f64>() < ploss).fold(false, |a, b| a | b))
        .count();
    Ok(lost as f64 / trials as f64)
}
