//! Which chain errors flip the effective outcome of an X-pattern chain, and
//! the blind-frame invariance of the resulting error rate.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::params::NoiseParams;
use super::sampler::SampledErrors;
use crate::error::NoiseError;
use crate::graph::Graph;
use crate::lattice::Lattice;
use crate::math::{rotated_bra, rotated_ket, Angle8, PauliOp, StateVector, Unnormalized};
use crate::protocol::{adapt_angle, blind_angle};
use crate::seed::rng_for;

/// Chain positions whose Z component flips the effective X outcome.
/// Confirmed by [`chain_flip_oracle`].
pub const X_PATTERN_FLIPPING: [bool; 3] = [true, false, true];

/// Effective Z-error bit per lattice site for X-pattern chains: parity of the
/// Z components on chain positions 1 and 3, from creation and measurement.
pub fn propagate_chain(errors: &SampledErrors, lattice: &Lattice) -> Vec<bool> {
    (0..lattice.sites().len())
        .map(|s| {
            (0..3).filter(|&c| X_PATTERN_FLIPPING[c]).fold(false, |acc, c| {
                let q = 3 * s + c;
                acc ^ errors.creation.z(q) ^ errors.measurement.z(q)
            })
        })
        .collect()
}

/// Adaptive X-pattern measurement of an isolated 3-qubit chain with Paulis
/// inserted just before measurement; returns `P(effective outcome = 1)`.
/// Without errors the effective outcome is deterministically 0.
pub fn chain_flip_probability(errors: [PauliOp; 3]) -> Result<f64, NoiseError> {
    let mut state = crate::math::build_rotated_graph_state(&Graph::path(3), &[Angle8::ZERO; 3])?;
    for (q, p) in errors.iter().enumerate() {
        state.apply_pauli(q, *p)?;
    }
    let mut total = 0.0;
    for s1 in 0..2u8 {
        for s2 in 0..2u8 {
            let a = Unnormalized::from(state.clone()).contract(0, rotated_bra(Angle8::ZERO, s1))?;
            let b = a.contract(0, rotated_bra(adapt_angle(Angle8::ZERO, s1, 0), s2))?;
            let c = b.contract(0, rotated_bra(adapt_angle(Angle8::ZERO, s2, s1), 1))?;
            total += c.norm_sqr_total();
        }
    }
    Ok(total)
}

/// `table[position][pauli]`: does a single Pauli at that position flip the outcome.
pub fn chain_flip_oracle() -> Result<[[bool; 4]; 3], NoiseError> {
    let mut table = [[false; 4]; 3];
    for (pos, row) in table.iter_mut().enumerate() {
        for (k, cell) in row.iter_mut().enumerate() {
            let mut errs = [PauliOp::I; 3];
            errs[pos] = PauliOp::from_index(k);
            let p = chain_flip_probability(errs)?;
            debug_assert!(
                !(1e-12..=1.0 - 1e-12).contains(&p),
                "single Pauli gives a deterministic flip"
            );
            *cell = p > 0.5;
        }
    }
    Ok(table)
}

fn depolarize_one<R: Rng + ?Sized>(s: &mut StateVector, q: usize, p: f64, rng: &mut R) -> Result<(), NoiseError> {
    if p > 0.0 && rng.random::<f64>() < p {
        s.apply_pauli(q, PauliOp::from_index(rng.random_range(1..4)))?;
    }
    Ok(())
}

fn depolarize_two<R: Rng + ?Sized>(
    s: &mut StateVector,
    a: usize,
    b: usize,
    p: f64,
    rng: &mut R,
) -> Result<(), NoiseError> {
    if p > 0.0 && rng.random::<f64>() < p {
        let k = rng.random_range(1..16usize);
        s.apply_pauli(a, PauliOp::from_index(k / 4))?;
        s.apply_pauli(b, PauliOp::from_index(k % 4))?;
    }
    Ok(())
}

/// One noisy blind run of an isolated X-pattern chain. With `blind` false,
/// Θ = 0 and R = 0. Returns the corrected effective outcome (1 = flipped).
pub fn noisy_chain_trial<R: Rng + ?Sized>(params: &NoiseParams, blind: bool, rng: &mut R) -> Result<u8, NoiseError> {
    let (theta, r): (Vec<Angle8>, Vec<u8>) = if blind {
        (0..3)
            .map(|_| (Angle8::new(rng.random_range(0..8u8)), u8::from(rng.random::<bool>())))
            .unzip()
    } else {
        (vec![Angle8::ZERO; 3], vec![0; 3])
    };
    let kets: Vec<_> = theta.iter().map(|&t| rotated_ket(t)).collect();
    let mut state = StateVector::product(&kets)?;
    for q in 0..3 {
        depolarize_one(&mut state, q, params.p_prep, rng)?;
    }
    for (a, b) in [(0, 1), (1, 2)] {
        state.apply_cz(a, b)?;
        depolarize_two(&mut state, a, b, params.p2, rng)?;
    }
    let mut corrected = [0u8; 3];
    for j in 0..3 {
        depolarize_one(&mut state, j, params.p_meas, rng)?;
        let sx = if j >= 1 { corrected[j - 1] } else { 0 };
        let sz = if j >= 2 { corrected[j - 2] } else { 0 };
        let delta = blind_angle(adapt_angle(Angle8::ZERO, sx, sz), theta[j], r[j]);
        let (raw, post) = state.measure_rotated(j, delta, rng)?;
        state = post;
        corrected[j] = raw ^ r[j];
    }
    Ok(corrected[2])
}

/// Two-sample KS critical coefficient `c(α)` at α = 0.01.
pub const KS_C_ALPHA_01: f64 = 1.628;

#[derive(Clone, Debug, Serialize)]
pub struct ThetaIndependenceReport {
    pub trials: u64,
    pub rate_unrotated: f64,
    pub rate_blind: f64,
    /// For binary samples the KS statistic is the difference of the rates.
    pub ks_statistic: f64,
    pub ks_critical: f64,
}

impl ThetaIndependenceReport {
    pub fn passes(&self) -> bool {
        self.ks_statistic <= self.ks_critical
    }
}

/// Compares the effective flip rate of Θ = 0 runs against blind runs.
pub fn theta_independence(params: &NoiseParams, trials: u64, seed: u64) -> Result<ThetaIndependenceReport, NoiseError> {
    params.validate()?;
    let count = |blind: bool| -> Result<u64, NoiseError> {
        (0..trials)
            .into_par_iter()
            .map(|t| noisy_chain_trial(params, blind, &mut rng_for(seed, &[t, u64::from(blind)])).map(u64::from))
            .try_reduce(|| 0, |a, b| Ok(a + b))
    };
    let n = trials as f64;
    let rate_unrotated = count(false)? as f64 / n;
    let rate_blind = count(true)? as f64 / n;
    Ok(ThetaIndependenceReport {
        trials,
        rate_unrotated,
        rate_blind,
        ks_statistic: (rate_unrotated - rate_blind).abs(),
        ks_critical: KS_C_ALPHA_01 * (2.0 / n).sqrt(),
    })
}
