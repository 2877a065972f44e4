use serde::{Deserialize, Serialize};

use crate::error::ProtocolError;
use crate::graph::Graph;
use crate::lattice::{CzSchedule, Lattice};
use crate::math::Angle8;

/// Measurement pattern on a graph state: order, computational angles and
/// explicit feed-forward dependencies. Qubits are graph indices; on a
/// decorated lattice they map to chain positions through [`Lattice::qubit_id`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementPattern {
    pub graph: Graph,
    pub order: Vec<usize>,
    pub phi: Vec<Angle8>,
    pub dep_x: Vec<Vec<usize>>,
    pub dep_z: Vec<Vec<usize>>,
    /// Qubits whose corrected outcomes form the computation's output.
    /// Empty means every qubit.
    #[serde(default)]
    pub outputs: Vec<usize>,
}

impl MeasurementPattern {
    pub fn new(
        graph: Graph,
        order: Vec<usize>,
        phi: Vec<Angle8>,
        dep_x: Vec<Vec<usize>>,
        dep_z: Vec<Vec<usize>>,
    ) -> Result<Self, ProtocolError> {
        let p = MeasurementPattern {
            graph,
            order,
            phi,
            dep_x,
            dep_z,
            outputs: Vec::new(),
        };
        p.validate()?;
        Ok(p)
    }

    /// Linear cluster measured left to right with the standard one-way flow
    /// `dep_x(j) = {j-1}`, `dep_z(j) = {j-2}`.
    pub fn linear_chain(phi: &[Angle8]) -> Self {
        let n = phi.len();
        MeasurementPattern {
            graph: Graph::path(n),
            order: (0..n).collect(),
            phi: phi.to_vec(),
            dep_x: (0..n).map(|j| if j >= 1 { vec![j - 1] } else { vec![] }).collect(),
            dep_z: (0..n).map(|j| if j >= 2 { vec![j - 2] } else { vec![] }).collect(),
            outputs: Vec::new(),
        }
    }

    /// Every qubit of a decorated lattice in index order, no feed-forward.
    pub fn for_lattice(lattice: &Lattice, phi: Vec<Angle8>) -> Result<Self, ProtocolError> {
        Self::new(
            lattice.to_graph(),
            (0..lattice.qubit_count()).collect(),
            phi,
            vec![Vec::new(); lattice.qubit_count()],
            vec![Vec::new(); lattice.qubit_count()],
        )
    }

    pub fn with_outputs(mut self, outputs: Vec<usize>) -> Result<Self, ProtocolError> {
        self.outputs = outputs;
        self.validate()?;
        Ok(self)
    }

    pub fn with_phi(&self, phi: Vec<Angle8>) -> Result<Self, ProtocolError> {
        let mut p = self.clone();
        p.phi = phi;
        p.validate()?;
        Ok(p)
    }

    pub fn qubits(&self) -> usize {
        self.graph.qubits()
    }

    pub fn output_qubits(&self) -> Vec<usize> {
        if self.outputs.is_empty() {
            (0..self.qubits()).collect()
        } else {
            self.outputs.clone()
        }
    }

    /// Order must be a permutation of all qubits and every dependency must
    /// refer to a strictly earlier qubit.
    pub fn validate(&self) -> Result<(), ProtocolError> {
        let n = self.qubits();
        let bad = |m: String| Err(ProtocolError::InvalidPattern(m));
        if self.phi.len() != n || self.dep_x.len() != n || self.dep_z.len() != n {
            return bad(format!("phi/dep lengths must equal qubit count {n}"));
        }
        let mut position = vec![usize::MAX; n];
        for (i, &q) in self.order.iter().enumerate() {
            if q >= n || position[q] != usize::MAX {
                return bad(format!("order entry {q} is out of range or repeated"));
            }
            position[q] = i;
        }
        if self.order.len() != n {
            return bad(format!("order covers {} of {n} qubits", self.order.len()));
        }
        for q in 0..n {
            for &d in self.dep_x[q].iter().chain(&self.dep_z[q]) {
                if d >= n || position[d] >= position[q] {
                    return bad(format!("qubit {q} depends on {d}, which is not measured earlier"));
                }
            }
        }
        if let Some(&o) = self.outputs.iter().find(|&&o| o >= n) {
            return bad(format!("output qubit {o} out of range"));
        }
        Ok(())
    }
}

/// `(−1)^{s_X} φ + π s_Z`.
pub fn adapt_angle(phi: Angle8, s_x: u8, s_z: u8) -> Angle8 {
    phi.signed(s_x) + Angle8::pi_times(s_z)
}

/// `δ = φ′ + θ + rπ`.
pub fn blind_angle(phi_prime: Angle8, theta: Angle8, r: u8) -> Angle8 {
    phi_prime + theta + Angle8::pi_times(r)
}

/// Ordered CZ rounds Bob applies; public information.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntanglementPlan {
    pub qubits: usize,
    pub rounds: Vec<Vec<(usize, usize)>>,
}

impl EntanglementPlan {
    pub fn from_graph(graph: &Graph) -> Self {
        EntanglementPlan {
            qubits: graph.qubits(),
            rounds: vec![graph.edges().to_vec()],
        }
    }

    pub fn from_schedule(lattice: &Lattice, schedule: &CzSchedule) -> Self {
        EntanglementPlan {
            qubits: lattice.qubit_count(),
            rounds: schedule
                .rounds()
                .iter()
                .map(|r| r.edges.iter().map(|e| (e.a, e.b)).collect())
                .collect(),
        }
    }
}
