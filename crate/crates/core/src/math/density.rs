use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::MathError;
use crate::math::statevector::rotated_ket;
use crate::math::{Angle8, StateVector};

/// Dense density matrix on `n` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    m: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn from_pure(psi: &StateVector) -> Self {
        let v = nalgebra::DVector::from_column_slice(psi.amplitudes());
        let m = &v * v.adjoint();
        DensityMatrix { n: psi.qubits(), m }
    }

    /// `I / 2ⁿ`.
    pub fn maximally_mixed(n: usize) -> Self {
        let d = 1usize << n;
        DensityMatrix {
            n,
            m: DMatrix::identity(d, d) * Complex64::new(1.0 / d as f64, 0.0),
        }
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn entry(&self, r: usize, c: usize) -> Complex64 {
        self.m[(r, c)]
    }

    pub fn trace(&self) -> Complex64 {
        self.m.trace()
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        // qubit ordering: `self` occupies the low bits
        DensityMatrix {
            n: self.n + other.n,
            m: other.m.kronecker(&self.m),
        }
    }

    /// Largest entrywise deviation `max |ρ_ij − σ_ij|`.
    pub fn max_deviation(&self, other: &DensityMatrix) -> f64 {
        (&self.m - &other.m).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (&self.m - self.m.adjoint()).iter().all(|z| z.norm() <= tol)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.m + self.m.adjoint()) * Complex64::new(0.5, 0.0);
        herm.symmetric_eigenvalues().iter().copied().collect()
    }

    /// Hermitian, unit trace and positive semidefinite within the given tolerances.
    pub fn is_valid(&self, tol_herm: f64, tol_psd: f64) -> bool {
        self.is_hermitian(tol_herm)
            && (self.trace() - Complex64::new(1.0, 0.0)).norm() <= tol_herm
            && self.eigenvalues().iter().all(|&l| l >= -tol_psd)
    }
}

/// `Σ wᵢ |θᵢ⟩⟨θᵢ|` with `|θ⟩ = (|0⟩ + e^{iθ}|1⟩)/√2`.
pub fn average_density(weighted: &[(Angle8, f64)]) -> Result<DensityMatrix, MathError> {
    let total: f64 = weighted.iter().map(|(_, w)| w).sum();
    if (total - 1.0).abs() > 1e-12 || weighted.iter().any(|(_, w)| *w < 0.0) {
        return Err(MathError::WeightSum(total));
    }
    let mut m = DMatrix::<Complex64>::zeros(2, 2);
    for &(theta, w) in weighted {
        let k = rotated_ket(theta);
        for r in 0..2 {
            for c in 0..2 {
                m[(r, c)] += k[r] * k[c].conj() * w;
            }
        }
    }
    Ok(DensityMatrix { n: 1, m })
}
