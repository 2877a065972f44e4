use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::alice::Alice;
use super::backend::{QuantumBackend, QubitSource, StatevectorBackend};
use super::bob::Bob;
use super::pattern::{adapt_angle, EntanglementPlan, MeasurementPattern};
use super::wire::{Transcript, WireMessage};
use crate::error::ProtocolError;
use crate::math::{build_rotated_graph_state, rotated_bra, Angle8, Unnormalized};
use crate::seed::{derive_seed, rng_for};

/// Largest pattern [`run_direct_mbqc`] will enumerate exhaustively.
pub const DIRECT_QUBIT_LIMIT: usize = 16;

/// One blind session: Alice and Bob exchange messages until every qubit of
/// the pattern has been measured.
pub fn run_protocol<B, R>(
    pattern: &MeasurementPattern,
    plan: &EntanglementPlan,
    backend: &mut B,
    rng: &mut R,
) -> Result<Transcript, ProtocolError>
where
    B: QuantumBackend + QubitSource,
    R: Rng + ?Sized,
{
    Ok(run_session(pattern, plan, backend, rng)?.transcript)
}

/// A session together with the pads Alice used, for auditing.
#[derive(Clone, Debug)]
pub struct SessionRecord {
    pub transcript: Transcript,
    pub theta: Vec<Angle8>,
    pub r: Vec<u8>,
}

pub fn run_session<B, R>(
    pattern: &MeasurementPattern,
    plan: &EntanglementPlan,
    backend: &mut B,
    rng: &mut R,
) -> Result<SessionRecord, ProtocolError>
where
    B: QuantumBackend + QubitSource,
    R: Rng + ?Sized,
{
    if plan.qubits != pattern.qubits() {
        return Err(ProtocolError::InvalidPattern(format!(
            "pattern has {} qubits, entanglement plan {}",
            pattern.qubits(),
            plan.qubits
        )));
    }
    let (mut alice, batch) = Alice::prepare(pattern.clone(), backend, rng)?;
    let mut messages = vec![batch.clone()];
    let mut bob = Bob::new(backend, plan.clone());
    bob.handle(&batch)?;
    for &j in &pattern.order {
        let instruction = alice.next_instruction(j)?;
        let reply = bob.handle(&instruction)?;
        messages.push(instruction);
        match reply {
            Some(WireMessage::MeasureResult { j: rj, s }) if rj == j => {
                alice.interpret(j, s);
                messages.push(WireMessage::MeasureResult { j, s });
            }
            other => {
                return Err(ProtocolError::UnexpectedMessage(format!(
                    "expected result for qubit {j}, got {other:?}"
                )))
            }
        }
    }
    bob.handle(&WireMessage::Done)?;
    messages.push(WireMessage::Done);
    let results = alice.results().expect("every qubit is in the order");
    let secrets = alice.secrets();
    Ok(SessionRecord {
        transcript: Transcript { messages, results },
        theta: secrets.theta.clone(),
        r: secrets.r.clone(),
    })
}

/// Seeded session on a fresh statevector backend. Alice and the backend
/// draw from independent streams derived from `(seed, trial)`.
pub fn seeded_session(
    pattern: &MeasurementPattern,
    plan: &EntanglementPlan,
    seed: u64,
    trial: u64,
) -> Result<SessionRecord, ProtocolError> {
    let mut alice_rng = rng_for(seed, &[trial, 0]);
    let mut backend = StatevectorBackend::new(derive_seed(seed, &[trial, 1]));
    run_session(pattern, plan, &mut backend, &mut alice_rng)
}

/// Runs `trials` independent sessions in parallel; output order is by trial.
pub fn run_protocol_trials(
    pattern: &MeasurementPattern,
    plan: &EntanglementPlan,
    trials: u64,
    seed: u64,
) -> Result<Vec<Transcript>, ProtocolError> {
    (0..trials)
        .into_par_iter()
        .map(|t| seeded_session(pattern, plan, seed, t).map(|r| r.transcript))
        .collect()
}

fn outcome_key(outputs: &[usize], results: &[u8]) -> String {
    outputs
        .iter()
        .map(|&q| if results[q] == 1 { '1' } else { '0' })
        .collect()
}

/// Exact distribution of the corrected output bits; keys list the output
/// qubits' bits in order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OutcomeDistribution {
    pub outputs: Vec<usize>,
    pub probabilities: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OutcomeHistogram {
    pub outputs: Vec<usize>,
    pub counts: BTreeMap<String, u64>,
    pub total: u64,
}

impl OutcomeHistogram {
    pub fn from_transcripts(outputs: &[usize], transcripts: &[Transcript]) -> Self {
        let mut counts = BTreeMap::new();
        for t in transcripts {
            *counts.entry(outcome_key(outputs, &t.results)).or_insert(0) += 1;
        }
        OutcomeHistogram {
            outputs: outputs.to_vec(),
            counts,
            total: transcripts.len() as u64,
        }
    }

    /// Total variation distance to an exact distribution.
    pub fn tv_distance(&self, dist: &OutcomeDistribution) -> f64 {
        let n = self.total as f64;
        let mut keys: Vec<&String> = self.counts.keys().chain(dist.probabilities.keys()).collect();
        keys.sort();
        keys.dedup();
        0.5 * keys
            .into_iter()
            .map(|k| {
                let emp = self.counts.get(k).copied().unwrap_or(0) as f64 / n;
                (emp - dist.probabilities.get(k).copied().unwrap_or(0.0)).abs()
            })
            .sum::<f64>()
    }

    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<(), csv::Error> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["outcome", "count", "frequency"])?;
        for (k, c) in &self.counts {
            out.write_record([
                k.clone(),
                c.to_string(),
                format!("{:.6}", *c as f64 / self.total as f64),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Non-blind reference: the unrotated graph state measured directly at
/// `φ′ⱼ`, with every branch enumerated exactly.
pub fn run_direct_mbqc(pattern: &MeasurementPattern) -> Result<OutcomeDistribution, ProtocolError> {
    pattern.validate()?;
    let n = pattern.qubits();
    if n > DIRECT_QUBIT_LIMIT {
        return Err(ProtocolError::InvalidPattern(format!(
            "{n} qubits exceed the exact enumeration limit {DIRECT_QUBIT_LIMIT}"
        )));
    }
    let state = build_rotated_graph_state(&pattern.graph, &vec![Angle8::ZERO; n])?;
    let outputs = pattern.output_qubits();
    let mut probabilities = BTreeMap::new();
    let mut results = vec![0u8; n];
    branch(
        pattern,
        &outputs,
        0,
        Unnormalized::from(state),
        0,
        &mut results,
        &mut probabilities,
    )?;
    Ok(OutcomeDistribution { outputs, probabilities })
}

fn branch(
    pattern: &MeasurementPattern,
    outputs: &[usize],
    step: usize,
    state: Unnormalized,
    removed: u64,
    results: &mut Vec<u8>,
    acc: &mut BTreeMap<String, f64>,
) -> Result<(), ProtocolError> {
    let weight = state.norm_sqr_total();
    if weight < 1e-14 {
        return Ok(());
    }
    let Some(&q) = pattern.order.get(step) else {
        *acc.entry(outcome_key(outputs, results)).or_insert(0.0) += weight;
        return Ok(());
    };
    let parity = |deps: &[usize]| deps.iter().fold(0u8, |a, &d| a ^ results[d]);
    let angle = adapt_angle(pattern.phi[q], parity(&pattern.dep_x[q]), parity(&pattern.dep_z[q]));
    let pos = q - (removed & ((1u64 << q) - 1)).count_ones() as usize;
    for s in 0..2u8 {
        let next = state.contract(pos, rotated_bra(angle, s))?;
        results[q] = s;
        branch(pattern, outputs, step + 1, next, removed | (1 << q), results, acc)?;
    }
    results[q] = 0;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn chain_plan(p: &MeasurementPattern) -> EntanglementPlan {
        EntanglementPlan::from_graph(&p.graph)
    }

    #[test]
    fn single_qubit_is_deterministic_after_unpadding() {
        let p = MeasurementPattern::linear_chain(&[Angle8::ZERO]);
        let plan = chain_plan(&p);
        let mut raw_ones = 0;
        for t in 0..2000 {
            let rec = seeded_session(&p, &plan, 1, t).unwrap();
            assert_eq!(rec.transcript.results, vec![0]);
            raw_ones += rec.transcript.bob_view()[0].2 as u32;
        }
        // Bob's raw bit is the pad r, hence a fair coin
        assert!((raw_ones as f64 - 1000.0).abs() < 5.0 * 500f64.sqrt());
        let d = run_direct_mbqc(&p).unwrap();
        assert!((d.probabilities["0"] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn chain_matches_direct_reference() {
        let p = MeasurementPattern::linear_chain(&[Angle8::ZERO; 3]);
        let plan = chain_plan(&p);
        let ts = run_protocol_trials(&p, &plan, 10_000, 3).unwrap();
        let h = OutcomeHistogram::from_transcripts(&p.output_qubits(), &ts);
        let d = run_direct_mbqc(&p).unwrap();
        assert!((d.probabilities.values().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(h.tv_distance(&d) < 0.02, "tv {}", h.tv_distance(&d));
    }

    #[test]
    fn transcripts_replay_identically() {
        let p = MeasurementPattern::linear_chain(&[Angle8::new(1), Angle8::new(6), Angle8::new(3)]);
        let plan = chain_plan(&p);
        let a = seeded_session(&p, &plan, 9, 4).unwrap().transcript.to_jsonl();
        let b = seeded_session(&p, &plan, 9, 4).unwrap().transcript.to_jsonl();
        assert_eq!(a, b);
        assert_ne!(a, seeded_session(&p, &plan, 9, 5).unwrap().transcript.to_jsonl());
    }

    #[test]
    fn transcript_shape() {
        let p = MeasurementPattern::linear_chain(&[Angle8::ZERO; 4]);
        let t = seeded_session(&p, &chain_plan(&p), 0, 0).unwrap().transcript;
        assert_eq!(t.messages.len(), 1 + 2 * 4 + 1);
        assert!(matches!(t.messages[0], WireMessage::QubitBatch { count: 4, .. }));
        assert_eq!(t.messages.last(), Some(&WireMessage::Done));
    }

    #[test]
    fn plan_must_match_pattern() {
        let p = MeasurementPattern::linear_chain(&[Angle8::ZERO; 3]);
        let plan = EntanglementPlan::from_graph(&Graph::path(2));
        assert!(matches!(
            seeded_session(&p, &plan, 0, 0),
            Err(ProtocolError::InvalidPattern(_))
        ));
    }

    #[test]
    fn direct_rejects_large_patterns() {
        let p = MeasurementPattern::linear_chain(&[Angle8::ZERO; 17]);
        assert!(run_direct_mbqc(&p).is_err());
    }
}
