use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Single-qubit Pauli operator modulo global phase.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum PauliOp {
    #[default]
    I,
    X,
    Y,
    Z,
}

impl PauliOp {
    pub const ALL: [PauliOp; 4] = [PauliOp::I, PauliOp::X, PauliOp::Y, PauliOp::Z];
    pub const NONTRIVIAL: [PauliOp; 3] = [PauliOp::X, PauliOp::Y, PauliOp::Z];

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => PauliOp::I,
            (true, false) => PauliOp::X,
            (true, true) => PauliOp::Y,
            (false, true) => PauliOp::Z,
        }
    }

    /// Index in the `I, X, Y, Z` ordering.
    pub fn from_index(i: usize) -> Self {
        Self::ALL[i & 3]
    }

    pub fn x_bit(self) -> bool {
        matches!(self, PauliOp::X | PauliOp::Y)
    }

    pub fn z_bit(self) -> bool {
        matches!(self, PauliOp::Z | PauliOp::Y)
    }

    pub fn is_identity(self) -> bool {
        self == PauliOp::I
    }

    /// 2×2 matrix, row-major.
    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            PauliOp::I => [[l, o], [o, l]],
            PauliOp::X => [[o, l], [l, o]],
            PauliOp::Y => [[o, -i], [i, o]],
            PauliOp::Z => [[l, o], [o, -l]],
        }
    }
}

impl Mul for PauliOp {
    type Output = PauliOp;
    fn mul(self, rhs: PauliOp) -> PauliOp {
        PauliOp::from_bits(self.x_bit() ^ rhs.x_bit(), self.z_bit() ^ rhs.z_bit())
    }
}

impl fmt::Display for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PauliOp::I => "I",
            PauliOp::X => "X",
            PauliOp::Y => "Y",
            PauliOp::Z => "Z",
        };
        f.write_str(s)
    }
}
