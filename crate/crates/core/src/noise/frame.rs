use std::ops::BitXorAssign;

use serde::{Deserialize, Serialize};

use crate::math::PauliOp;

/// Per-qubit `(x, z)` error bits. Y sets both.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PauliFrame {
    x: Vec<bool>,
    z: Vec<bool>,
}

impl PauliFrame {
    pub fn new(qubits: usize) -> Self {
        PauliFrame {
            x: vec![false; qubits],
            z: vec![false; qubits],
        }
    }

    pub fn qubits(&self) -> usize {
        self.x.len()
    }

    pub fn apply(&mut self, q: usize, p: PauliOp) {
        self.x[q] ^= p.x_bit();
        self.z[q] ^= p.z_bit();
    }

    pub fn get(&self, q: usize) -> PauliOp {
        PauliOp::from_bits(self.x[q], self.z[q])
    }

    pub fn x(&self, q: usize) -> bool {
        self.x[q]
    }

    pub fn z(&self, q: usize) -> bool {
        self.z[q]
    }

    pub fn is_clean(&self) -> bool {
        !self.x.iter().chain(&self.z).any(|&b| b)
    }

    pub fn weight(&self) -> usize {
        self.x.iter().zip(&self.z).filter(|(x, z)| **x || **z).count()
    }
}

impl BitXorAssign<&PauliFrame> for PauliFrame {
    fn bitxor_assign(&mut self, rhs: &PauliFrame) {
        assert_eq!(self.qubits(), rhs.qubits(), "frames over different registers");
        for (a, b) in self.x.iter_mut().zip(&rhs.x) {
            *a ^= b;
        }
        for (a, b) in self.z.iter_mut().zip(&rhs.z) {
            *a ^= b;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn y_is_x_and_z() {
        let mut f = PauliFrame::new(2);
        f.apply(0, PauliOp::X);
        f.apply(0, PauliOp::Z);
        assert_eq!(f.get(0), PauliOp::Y);
        f.apply(0, PauliOp::Y);
        assert!(f.is_clean());
    }

    proptest! {
        #[test]
        fn xor_is_pauli_product(a in prop::collection::vec(0usize..4, 5), b in prop::collection::vec(0usize..4, 5)) {
            let (mut fa, mut fb) = (PauliFrame::new(5), PauliFrame::new(5));
            for q in 0..5 {
                fa.apply(q, PauliOp::from_index(a[q]));
                fb.apply(q, PauliOp::from_index(b[q]));
            }
            let mut c = fa.clone();
            c ^= &fb;
            for q in 0..5 {
                prop_assert_eq!(c.get(q), PauliOp::from_index(a[q]) * PauliOp::from_index(b[q]));
            }
            c ^= &fb;
            prop_assert_eq!(c, fa);
        }
    }
}
