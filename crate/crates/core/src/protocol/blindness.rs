//! Blindness audits: what Bob's view reveals about Φ and R.
//!
//! The classical audit is statistical (repeated sessions, chi-square against
//! the prior). The quantum audit and the pad check are exact.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::pattern::{blind_angle, EntanglementPlan, MeasurementPattern};
use super::session::seeded_session;
use super::wire::WireMessage;
use crate::error::ProtocolError;
use crate::math::{average_density, Angle8, DensityMatrix};
use crate::seed::rng_for;

pub const MIN_AUDIT_TRIALS: u64 = 10_000;
pub const CHI_SQUARE_ALPHA: f64 = 0.01;
pub const R_BALANCE_SIGMAS: f64 = 5.0;

/// Prior over the 8 computational angles, i.i.d. per qubit.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnglePrior {
    weights: [f64; 8],
}

impl AnglePrior {
    pub fn uniform() -> Self {
        AnglePrior { weights: [0.125; 8] }
    }

    pub fn point(a: Angle8) -> Self {
        let mut weights = [0.0; 8];
        weights[a.k() as usize] = 1.0;
        AnglePrior { weights }
    }

    pub fn from_weights(weights: [f64; 8]) -> Result<Self, ProtocolError> {
        let sum: f64 = weights.iter().sum();
        if weights.iter().any(|&w| w.is_nan() || w < 0.0) || (sum - 1.0).abs() > 1e-12 {
            return Err(ProtocolError::InvalidPattern(format!(
                "prior weights must be nonnegative and sum to 1, got {sum}"
            )));
        }
        Ok(AnglePrior { weights })
    }

    pub fn weights(&self) -> &[f64; 8] {
        &self.weights
    }

    pub fn support(&self) -> usize {
        self.weights.iter().filter(|&&w| w > 0.0).count()
    }
}

#[derive(Clone, Debug)]
struct Tally {
    /// `joint[q][δ][φ]`
    joint: Vec<[[u64; 8]; 8]>,
    /// `r_cells[q][δ][s] = (n, #r=1)`
    r_cells: Vec<[[(u64, u64); 2]; 8]>,
}

impl Tally {
    fn new(n: usize) -> Self {
        Tally {
            joint: vec![[[0; 8]; 8]; n],
            r_cells: vec![[[(0, 0); 2]; 8]; n],
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (a, b) in self.joint.iter_mut().zip(&other.joint) {
            for (ra, rb) in a.iter_mut().zip(b) {
                for (x, y) in ra.iter_mut().zip(rb) {
                    *x += y;
                }
            }
        }
        for (a, b) in self.r_cells.iter_mut().zip(&other.r_cells) {
            for (ra, rb) in a.iter_mut().zip(b) {
                for (x, y) in ra.iter_mut().zip(rb) {
                    x.0 += y.0;
                    x.1 += y.1;
                }
            }
        }
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct QubitAudit {
    pub qubit: usize,
    /// Chi-square of `P(Φ | Δ)` against the prior.
    pub chi_square: f64,
    pub dof: u64,
    pub p_value: f64,
    /// Chi-square of the δ marginal against uniform.
    pub delta_chi_square: f64,
    pub delta_p_value: f64,
    /// Largest |z| of `P(R=1 | δ) − 1/2`.
    pub max_r_z: f64,
    /// Largest |z| of `P(R=1 | δ, s) − 1/2`. Only expected to be balanced
    /// under a uniform prior: a known φ makes the output bit, hence `s ⊕ r`, biased.
    pub max_r_z_view: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassicalAuditReport {
    pub trials: u64,
    pub qubits: Vec<QubitAudit>,
    pub min_p_value: f64,
    pub min_delta_p_value: f64,
    pub max_r_z: f64,
    pub max_r_z_view: f64,
}

impl ClassicalAuditReport {
    pub fn passes(&self) -> bool {
        self.min_p_value > CHI_SQUARE_ALPHA
            && self.min_delta_p_value > CHI_SQUARE_ALPHA
            && self.max_r_z <= R_BALANCE_SIGMAS
    }
}

fn chi_square_sf(stat: f64, dof: u64) -> f64 {
    if dof == 0 {
        return if stat == 0.0 { 1.0 } else { 0.0 };
    }
    if !stat.is_finite() {
        return 0.0;
    }
    ChiSquared::new(dof as f64).expect("dof is positive").sf(stat)
}

fn audit_qubit(q: usize, prior: &AnglePrior, joint: &[[u64; 8]; 8], cells: &[[(u64, u64); 2]; 8]) -> QubitAudit {
    let support = prior.support() as u64;
    let (mut chi, mut rows) = (0.0, 0u64);
    let mut delta_counts = [0u64; 8];
    for (d, row) in joint.iter().enumerate() {
        let n: u64 = row.iter().sum();
        delta_counts[d] = n;
        if n == 0 {
            continue;
        }
        rows += 1;
        for (phi, &o) in row.iter().enumerate() {
            let e = n as f64 * prior.weights[phi];
            if e > 0.0 {
                chi += (o as f64 - e).powi(2) / e;
            } else if o > 0 {
                chi = f64::INFINITY;
            }
        }
    }
    let dof = rows * support.saturating_sub(1);
    let total: u64 = delta_counts.iter().sum();
    let e = total as f64 / 8.0;
    let delta_chi: f64 = delta_counts.iter().map(|&o| (o as f64 - e).powi(2) / e).sum();
    let z = |(n, ones): (u64, u64)| {
        if n == 0 {
            0.0
        } else {
            ((ones as f64 - n as f64 / 2.0) / (n as f64 / 4.0).sqrt()).abs()
        }
    };
    let max_r_z_view = cells.iter().flatten().map(|&c| z(c)).fold(0.0, f64::max);
    let max_r_z = cells.iter().map(|[a, b]| z((a.0 + b.0, a.1 + b.1))).fold(0.0, f64::max);
    QubitAudit {
        qubit: q,
        chi_square: chi,
        dof,
        p_value: chi_square_sf(chi, dof),
        delta_chi_square: delta_chi,
        delta_p_value: chi_square_sf(delta_chi, 7),
        max_r_z,
        max_r_z_view,
    }
}

/// Repeats the blind protocol with Φ drawn i.i.d. from `prior` and audits
/// Bob's view (δ and raw bits) against Φ and R.
pub fn blindness_audit_classical(
    pattern: &MeasurementPattern,
    prior: &AnglePrior,
    trials: u64,
    seed: u64,
) -> Result<ClassicalAuditReport, ProtocolError> {
    if trials < MIN_AUDIT_TRIALS {
        return Err(ProtocolError::InsufficientSamples {
            needed: MIN_AUDIT_TRIALS as usize,
            got: trials as usize,
        });
    }
    pattern.validate()?;
    let n = pattern.qubits();
    let plan = EntanglementPlan::from_graph(&pattern.graph);
    let sampler = WeightedIndex::new(prior.weights).map_err(|e| ProtocolError::InvalidPattern(e.to_string()))?;

    let tally = (0..trials)
        .into_par_iter()
        .try_fold(
            || Tally::new(n),
            |mut acc, t| -> Result<Tally, ProtocolError> {
                let mut rng = rng_for(seed, &[t, 2]);
                let phi: Vec<Angle8> = (0..n).map(|_| Angle8::new(sampler.sample(&mut rng) as u8)).collect();
                let rec = seeded_session(&pattern.with_phi(phi.clone())?, &plan, seed, t)?;
                let mut delta = vec![Angle8::ZERO; n];
                for m in &rec.transcript.messages {
                    match *m {
                        WireMessage::MeasureInstruction { j, delta_k } => delta[j] = delta_k,
                        WireMessage::MeasureResult { j, s } => {
                            let d = delta[j].k() as usize;
                            acc.joint[j][d][phi[j].k() as usize] += 1;
                            let cell = &mut acc.r_cells[j][d][s as usize];
                            cell.0 += 1;
                            cell.1 += u64::from(rec.r[j]);
                        }
                        _ => {}
                    }
                }
                Ok(acc)
            },
        )
        .try_reduce(|| Tally::new(n), |a, b| Ok(a.merge(b)))?;

    let qubits: Vec<QubitAudit> = (0..n)
        .map(|q| audit_qubit(q, prior, &tally.joint[q], &tally.r_cells[q]))
        .collect();
    Ok(ClassicalAuditReport {
        trials,
        min_p_value: qubits.iter().map(|a| a.p_value).fold(1.0, f64::min),
        min_delta_p_value: qubits.iter().map(|a| a.delta_p_value).fold(1.0, f64::min),
        max_r_z: qubits.iter().map(|a| a.max_r_z).fold(0.0, f64::max),
        max_r_z_view: qubits.iter().map(|a| a.max_r_z_view).fold(0.0, f64::max),
        qubits,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct QuantumAuditReport {
    pub pairs: usize,
    pub max_deviation: f64,
}

impl QuantumAuditReport {
    pub fn passes(&self) -> bool {
        self.max_deviation <= 1e-12
    }
}

/// For every `(δ, φ)`, the r-average of `|δ−φ−rπ⟩⟨δ−φ−rπ|` against `I/2`.
pub fn blindness_audit_quantum() -> QuantumAuditReport {
    let half = DensityMatrix::maximally_mixed(1);
    let mut max_deviation = 0.0f64;
    let mut pairs = 0;
    for delta in Angle8::all() {
        for phi in Angle8::all() {
            let a = delta - phi;
            let rho = average_density(&[(a, 0.5), (a - Angle8::PI, 0.5)]).expect("weights sum to 1");
            max_deviation = max_deviation.max(rho.max_deviation(&half));
            pairs += 1;
        }
    }
    QuantumAuditReport { pairs, max_deviation }
}

#[derive(Clone, Debug, Serialize)]
pub struct PadReport {
    /// `counts[φ′][δ]` over the 16 `(θ, r)` pairs.
    pub counts: [[u8; 8]; 8],
}

impl PadReport {
    /// Every δ appears exactly twice for every φ′.
    pub fn is_uniform(&self) -> bool {
        self.counts.iter().flatten().all(|&c| c == 2)
    }
}

pub fn pad_check() -> PadReport {
    let mut counts = [[0u8; 8]; 8];
    for phi_prime in Angle8::all() {
        for theta in Angle8::all() {
            for r in 0..2u8 {
                counts[phi_prime.k() as usize][blind_angle(phi_prime, theta, r).k() as usize] += 1;
            }
        }
    }
    PadReport { counts }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pad_is_perfect() {
        assert!(pad_check().is_uniform());
    }

    #[test]
    fn quantum_audit_exact() {
        let r = blindness_audit_quantum();
        assert_eq!(r.pairs, 64);
        assert!(r.passes(), "{}", r.max_deviation);
    }

    #[test]
    fn uniform_prior_balances_full_view() {
        let p = MeasurementPattern::linear_chain(&[Angle8::ZERO; 3]);
        let r = blindness_audit_classical(&p, &AnglePrior::uniform(), 10_000, 8).unwrap();
        assert!(r.passes(), "{r:?}");
        assert!(r.max_r_z_view <= R_BALANCE_SIGMAS);
        assert!(r.qubits.iter().all(|q| q.dof == 8 * 7));
    }

    #[test]
    fn needs_enough_trials() {
        let p = MeasurementPattern::linear_chain(&[Angle8::ZERO; 2]);
        assert_eq!(
            blindness_audit_classical(&p, &AnglePrior::uniform(), 100, 0).unwrap_err(),
            ProtocolError::InsufficientSamples {
                needed: 10_000,
                got: 100
            }
        );
    }

    #[test]
    fn point_prior_still_gives_uniform_delta() {
        let p = MeasurementPattern::linear_chain(&[Angle8::ZERO; 2]);
        let r = blindness_audit_classical(&p, &AnglePrior::point(Angle8::PI_4), 10_000, 4).unwrap();
        assert!(r.passes(), "{r:?}");
        assert!(r.qubits.iter().all(|q| q.dof == 0));
    }

    #[test]
    fn prior_validation() {
        assert!(AnglePrior::from_weights([0.5; 8]).is_err());
        assert_eq!(AnglePrior::uniform().support(), 8);
    }

    #[test]
    fn chi_square_tail() {
        assert!((chi_square_sf(7.0, 7) - 0.4288).abs() < 1e-3);
        assert_eq!(chi_square_sf(0.0, 0), 1.0);
    }
}
