use rand::Rng;

use super::backend::QubitSource;
use super::pattern::{adapt_angle, blind_angle, MeasurementPattern};
use super::wire::WireMessage;
use crate::error::ProtocolError;
use crate::math::Angle8;

/// Alice's private state. Nothing here is ever put on the wire.
#[derive(Clone, Debug)]
pub struct AliceSecrets {
    pub theta: Vec<Angle8>,
    pub r: Vec<u8>,
    pub pattern: MeasurementPattern,
    pub results: Vec<Option<u8>>,
}

#[derive(Clone, Debug)]
pub struct Alice {
    secrets: AliceSecrets,
}

impl Alice {
    /// Samples Θ and R uniformly and ships the rotated qubits through `source`.
    pub fn prepare<S, R>(
        pattern: MeasurementPattern,
        source: &mut S,
        rng: &mut R,
    ) -> Result<(Alice, WireMessage), ProtocolError>
    where
        S: QubitSource + ?Sized,
        R: Rng + ?Sized,
    {
        pattern.validate()?;
        let n = pattern.qubits();
        if n == 0 {
            return Err(ProtocolError::InvalidPattern("pattern has no qubits".into()));
        }
        let theta: Vec<Angle8> = (0..n).map(|_| Angle8::new(rng.random_range(0..8u8))).collect();
        let r: Vec<u8> = (0..n).map(|_| u8::from(rng.random::<bool>())).collect();
        let handles = theta.iter().map(|&t| source.emit(t)).collect();
        let batch = WireMessage::QubitBatch { count: n, handles };
        Ok((
            Alice {
                secrets: AliceSecrets {
                    theta,
                    r,
                    pattern,
                    results: vec![None; n],
                },
            },
            batch,
        ))
    }

    pub fn secrets(&self) -> &AliceSecrets {
        &self.secrets
    }

    fn parity(&self, j: usize, deps: &[usize]) -> Result<u8, ProtocolError> {
        deps.iter().try_fold(0u8, |acc, &d| {
            self.secrets.results[d]
                .map(|b| acc ^ b)
                .ok_or(ProtocolError::MissingDependency { qubit: j, missing: d })
        })
    }

    /// `φ′ⱼ` from the corrected results of earlier qubits.
    pub fn adapted_angle(&self, j: usize) -> Result<Angle8, ProtocolError> {
        let p = &self.secrets.pattern;
        let sx = self.parity(j, &p.dep_x[j])?;
        let sz = self.parity(j, &p.dep_z[j])?;
        Ok(adapt_angle(p.phi[j], sx, sz))
    }

    pub fn next_instruction(&self, j: usize) -> Result<WireMessage, ProtocolError> {
        if j >= self.secrets.theta.len() {
            return Err(ProtocolError::InvalidPattern(format!("qubit {j} out of range")));
        }
        let delta = blind_angle(self.adapted_angle(j)?, self.secrets.theta[j], self.secrets.r[j]);
        Ok(WireMessage::MeasureInstruction { j, delta_k: delta })
    }

    /// Removes the `rⱼ` pad from Bob's raw bit and records it.
    pub fn interpret(&mut self, j: usize, raw: u8) -> u8 {
        let corrected = (raw ^ self.secrets.r[j]) & 1;
        self.secrets.results[j] = Some(corrected);
        corrected
    }

    /// Corrected results once every qubit has been measured.
    pub fn results(&self) -> Option<Vec<u8>> {
        self.secrets.results.iter().copied().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::wire::QubitHandle;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    struct Counter(u64);
    impl QubitSource for Counter {
        fn emit(&mut self, _: Angle8) -> QubitHandle {
            self.0 += 1;
            QubitHandle(self.0)
        }
    }

    fn alice(n: usize, seed: u64) -> Alice {
        let p = MeasurementPattern::linear_chain(&vec![Angle8::PI_4; n]);
        Alice::prepare(p, &mut Counter(0), &mut ChaCha8Rng::seed_from_u64(seed))
            .unwrap()
            .0
    }

    #[test]
    fn theta_is_uniform() {
        let a = alice(100_000, 1);
        let n = 100_000f64;
        let sigma = (n * 0.125 * 0.875).sqrt();
        for k in 0..8u8 {
            let c = a.secrets().theta.iter().filter(|t| t.k() == k).count() as f64;
            assert!((c - n / 8.0).abs() < 5.0 * sigma, "k={k} count {c}");
        }
        let ones = a.secrets().r.iter().filter(|&&r| r == 1).count() as f64;
        assert!((ones - n / 2.0).abs() < 5.0 * (n / 4.0).sqrt());
    }

    #[test]
    fn reproducible_and_single() {
        assert_eq!(alice(20, 4).secrets().theta, alice(20, 4).secrets().theta);
        assert_eq!(alice(20, 4).secrets().r, alice(20, 4).secrets().r);
        let a = alice(1, 0);
        assert_eq!(a.secrets().theta.len(), 1);
    }

    #[test]
    fn interpret_unpads() {
        let mut a = alice(3, 2);
        a.secrets.r = vec![1, 1, 0];
        assert_eq!(a.interpret(0, 0), 1);
        assert_eq!(a.interpret(1, 1), 0);
        assert_eq!(a.interpret(2, 1), 1);
    }

    #[test]
    fn dependencies_must_be_known() {
        let a = alice(3, 3);
        assert_eq!(
            a.next_instruction(1),
            Err(ProtocolError::MissingDependency { qubit: 1, missing: 0 })
        );
        assert!(a.next_instruction(0).is_ok());
    }

    #[test]
    fn instruction_uses_corrected_results() {
        let mut a = alice(3, 5);
        a.secrets.theta = vec![Angle8::ZERO; 3];
        a.secrets.r = vec![1, 0, 0];
        a.interpret(0, 0); // corrected 1
        a.interpret(1, 0);
        // φ=π/4, s^X = 0 (qubit 1), s^Z = 1 (qubit 0) → 5π/4
        assert_eq!(
            a.next_instruction(2).unwrap(),
            WireMessage::MeasureInstruction {
                j: 2,
                delta_k: Angle8::new(5)
            }
        );
    }
}
