use std::collections::hash_map::{Entry, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::pattern::EntanglementPlan;
use super::wire::QubitHandle;
use crate::error::BackendError;
use crate::math::{rotated_ket, Angle8, StateVector};

/// Alice's preparation device: turns an angle into a qubit the channel can carry.
pub trait QubitSource {
    fn emit(&mut self, theta: Angle8) -> QubitHandle;
}

/// The only interface Bob's engine has to the quantum state.
pub trait QuantumBackend {
    fn load(&mut self, handles: &[QubitHandle], qubits: usize) -> Result<(), BackendError>;
    fn entangle(&mut self, plan: &EntanglementPlan) -> Result<(), BackendError>;
    fn measure(&mut self, j: usize, delta: Angle8) -> Result<u8, BackendError>;
}

/// Dense statevector realisation of both the channel and Bob's device.
#[derive(Debug)]
pub struct StatevectorBackend {
    rng: ChaCha8Rng,
    in_flight: HashMap<QubitHandle, Angle8>,
    state: Option<StateVector>,
    measured: Vec<bool>,
}

impl StatevectorBackend {
    pub fn new(seed: u64) -> Self {
        Self::from_rng(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn from_rng(rng: ChaCha8Rng) -> Self {
        StatevectorBackend {
            rng,
            in_flight: HashMap::new(),
            state: None,
            measured: Vec::new(),
        }
    }

    /// Current joint state, for oracle comparisons in tests.
    pub fn state(&self) -> Option<&StateVector> {
        self.state.as_ref()
    }
}

impl QubitSource for StatevectorBackend {
    fn emit(&mut self, theta: Angle8) -> QubitHandle {
        loop {
            let h = QubitHandle(self.rng.random());
            if let Entry::Vacant(slot) = self.in_flight.entry(h) {
                slot.insert(theta);
                return h;
            }
        }
    }
}

impl QuantumBackend for StatevectorBackend {
    fn load(&mut self, handles: &[QubitHandle], qubits: usize) -> Result<(), BackendError> {
        if handles.len() != qubits {
            return Err(BackendError::SizeMismatch {
                expected: qubits,
                got: handles.len(),
            });
        }
        let mut kets = Vec::with_capacity(handles.len());
        for h in handles {
            let theta = self.in_flight.remove(h).ok_or(BackendError::UnknownHandle)?;
            kets.push(rotated_ket(theta));
        }
        self.state = Some(StateVector::product(&kets)?);
        self.measured = vec![false; qubits];
        Ok(())
    }

    fn entangle(&mut self, plan: &EntanglementPlan) -> Result<(), BackendError> {
        let state = self.state.as_mut().ok_or(BackendError::NotLoaded)?;
        if plan.qubits != state.qubits() {
            return Err(BackendError::SizeMismatch {
                expected: plan.qubits,
                got: state.qubits(),
            });
        }
        for round in &plan.rounds {
            for &(a, b) in round {
                state.apply_cz(a, b)?;
            }
        }
        Ok(())
    }

    fn measure(&mut self, j: usize, delta: Angle8) -> Result<u8, BackendError> {
        let state = self.state.as_ref().ok_or(BackendError::NotLoaded)?;
        if *self
            .measured
            .get(j)
            .ok_or(BackendError::Math(crate::error::MathError::QubitIndex {
                qubit: j,
                qubits: self.measured.len(),
            }))?
        {
            return Err(BackendError::AlreadyMeasured(j));
        }
        let (s, post) = state.measure_rotated(j, delta, &mut self.rng)?;
        self.state = Some(post);
        self.measured[j] = true;
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::math::build_rotated_graph_state;

    #[test]
    fn loads_rotated_graph_state() {
        let mut b = StatevectorBackend::new(1);
        let thetas = [Angle8::new(3), Angle8::new(6), Angle8::new(1)];
        let handles: Vec<_> = thetas.iter().map(|&t| b.emit(t)).collect();
        let g = Graph::path(3);
        b.load(&handles, 3).unwrap();
        b.entangle(&EntanglementPlan::from_graph(&g)).unwrap();
        let want = build_rotated_graph_state(&g, &thetas).unwrap();
        assert!(b.state().unwrap().approx_eq_up_to_phase(&want));
    }

    #[test]
    fn misuse_is_rejected() {
        let mut b = StatevectorBackend::new(2);
        assert_eq!(b.measure(0, Angle8::ZERO), Err(BackendError::NotLoaded));
        let h = b.emit(Angle8::ZERO);
        assert!(matches!(b.load(&[h], 2), Err(BackendError::SizeMismatch { .. })));
        b.load(&[h], 1).unwrap();
        // handles are consumed by loading
        assert_eq!(b.load(&[h], 1), Err(BackendError::UnknownHandle));
        b.measure(0, Angle8::ZERO).unwrap();
        assert_eq!(b.measure(0, Angle8::ZERO), Err(BackendError::AlreadyMeasured(0)));
    }

    #[test]
    fn empty_register() {
        let mut b = StatevectorBackend::new(3);
        b.load(&[], 0).unwrap();
        b.entangle(&EntanglementPlan::from_graph(&Graph::empty(0))).unwrap();
        assert_eq!(b.state().unwrap().qubits(), 0);
    }
}
