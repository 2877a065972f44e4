use super::backend::QuantumBackend;
use super::pattern::EntanglementPlan;
use super::wire::WireMessage;
use crate::error::ProtocolError;

/// Bob's engine. It holds only the public entanglement plan and a backend it
/// can load, entangle and measure through.
pub struct Bob<'a, B: QuantumBackend + ?Sized> {
    backend: &'a mut B,
    plan: EntanglementPlan,
    ready: bool,
}

impl<'a, B: QuantumBackend + ?Sized> Bob<'a, B> {
    pub fn new(backend: &'a mut B, plan: EntanglementPlan) -> Self {
        Bob {
            backend,
            plan,
            ready: false,
        }
    }

    /// Reacts to one message from Alice, possibly replying.
    pub fn handle(&mut self, msg: &WireMessage) -> Result<Option<WireMessage>, ProtocolError> {
        match msg {
            WireMessage::QubitBatch { count, handles } => {
                if *count != handles.len() {
                    return Err(ProtocolError::UnexpectedMessage(format!(
                        "batch declares {count} qubits, carries {}",
                        handles.len()
                    )));
                }
                self.backend.load(handles, self.plan.qubits)?;
                self.backend.entangle(&self.plan)?;
                self.ready = true;
                Ok(None)
            }
            WireMessage::MeasureInstruction { j, delta_k } => {
                if !self.ready {
                    return Err(ProtocolError::UnexpectedMessage(
                        "measurement before qubits arrived".into(),
                    ));
                }
                let s = self.backend.measure(*j, *delta_k)?;
                Ok(Some(WireMessage::MeasureResult { j: *j, s }))
            }
            WireMessage::Done => Ok(None),
            WireMessage::MeasureResult { .. } => {
                Err(ProtocolError::UnexpectedMessage("Bob does not accept results".into()))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::BackendError;
    use crate::graph::Graph;
    use crate::math::{build_rotated_graph_state, Angle8};
    use crate::protocol::backend::{QubitSource, StatevectorBackend};

    #[test]
    fn entangles_cluster_on_batch() {
        let mut backend = StatevectorBackend::new(7);
        let handles: Vec<_> = (0..3).map(|_| backend.emit(Angle8::ZERO)).collect();
        let g = Graph::path(3);
        let mut bob = Bob::new(&mut backend, EntanglementPlan::from_graph(&g));
        assert_eq!(
            bob.handle(&WireMessage::QubitBatch { count: 3, handles }).unwrap(),
            None
        );
        let want = build_rotated_graph_state(&g, &[Angle8::ZERO; 3]).unwrap();
        assert!(backend.state().unwrap().approx_eq_up_to_phase(&want));
    }

    #[test]
    fn size_mismatch_and_order() {
        let mut backend = StatevectorBackend::new(8);
        let handles: Vec<_> = (0..2).map(|_| backend.emit(Angle8::ZERO)).collect();
        let mut bob = Bob::new(&mut backend, EntanglementPlan::from_graph(&Graph::path(3)));
        let m = WireMessage::MeasureInstruction {
            j: 0,
            delta_k: Angle8::ZERO,
        };
        assert!(matches!(bob.handle(&m), Err(ProtocolError::UnexpectedMessage(_))));
        assert_eq!(
            bob.handle(&WireMessage::QubitBatch { count: 2, handles }),
            Err(ProtocolError::Backend(BackendError::SizeMismatch {
                expected: 3,
                got: 2
            }))
        );
    }
}
