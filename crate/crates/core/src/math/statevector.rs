use num_complex::Complex64;
use rand::Rng;

use crate::error::MathError;
use crate::graph::Graph;
use crate::math::{Angle8, PauliOp};

/// Largest register the dense backend will allocate unless told otherwise.
pub const DEFAULT_QUBIT_CAP: usize = 24;

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Dense pure state on `n` qubits. Qubit `q` is bit `q` of the basis index.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

/// Operator order used when building `|C_Θ⟩`; both give the same vector
/// because `CZ` and `e^{-iZθ/2}` are simultaneously diagonal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorOrder {
    EntangleFirst,
    RotateFirst,
}

/// `(|0⟩ + e^{iθ}|1⟩)/√2`.
pub fn rotated_ket(theta: Angle8) -> [Complex64; 2] {
    [
        Complex64::new(SQRT_HALF, 0.0),
        Complex64::from_polar(SQRT_HALF, theta.radians()),
    ]
}

/// Bra of the measurement basis element selected by `outcome`:
/// outcome 0 ↔ `|0⟩ + e^{iδ}|1⟩`, outcome 1 ↔ `|0⟩ − e^{iδ}|1⟩`.
pub fn rotated_bra(delta: Angle8, outcome: u8) -> [Complex64; 2] {
    let sign = if outcome & 1 == 0 { 1.0 } else { -1.0 };
    [
        Complex64::new(SQRT_HALF, 0.0),
        Complex64::from_polar(sign * SQRT_HALF, -delta.radians()),
    ]
}

impl StateVector {
    pub fn zero(n: usize) -> Result<Self, MathError> {
        Self::zero_with_cap(n, DEFAULT_QUBIT_CAP)
    }

    pub fn zero_with_cap(n: usize, cap: usize) -> Result<Self, MathError> {
        if n > cap {
            return Err(MathError::QubitCap { requested: n, cap });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    /// `|+⟩^{⊗n}`.
    pub fn plus(n: usize) -> Result<Self, MathError> {
        let mut s = Self::zero(n)?;
        let a = Complex64::new((0.5f64).powi(n as i32).sqrt(), 0.0);
        s.amps.iter_mut().for_each(|x| *x = a);
        Ok(s)
    }

    /// Product state from per-qubit `[⟨0|ψ⟩, ⟨1|ψ⟩]` pairs (each renormalised).
    pub fn product(qubits: &[[Complex64; 2]]) -> Result<Self, MathError> {
        let n = qubits.len();
        if n > DEFAULT_QUBIT_CAP {
            return Err(MathError::QubitCap {
                requested: n,
                cap: DEFAULT_QUBIT_CAP,
            });
        }
        let mut amps = vec![Complex64::new(1.0, 0.0)];
        for (q, c) in qubits.iter().enumerate() {
            let norm = (c[0].norm_sqr() + c[1].norm_sqr()).sqrt();
            if norm == 0.0 {
                return Err(MathError::ZeroNorm);
            }
            let (c0, c1) = (c[0] / norm, c[1] / norm);
            let mut next = vec![Complex64::new(0.0, 0.0); amps.len() * 2];
            for (i, a) in amps.iter().enumerate() {
                next[i] = a * c0;
                next[i | (1 << q)] = a * c1;
            }
            amps = next;
        }
        Ok(StateVector { n, amps })
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self, MathError> {
        let len = amps.len();
        if !len.is_power_of_two() {
            return Err(MathError::BadLength(len));
        }
        let n = len.trailing_zeros() as usize;
        if n > DEFAULT_QUBIT_CAP {
            return Err(MathError::QubitCap {
                requested: n,
                cap: DEFAULT_QUBIT_CAP,
            });
        }
        let mut s = StateVector { n, amps };
        let norm = s.norm();
        if norm == 0.0 {
            return Err(MathError::ZeroNorm);
        }
        s.scale(1.0 / norm);
        Ok(s)
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn scale(&mut self, f: f64) {
        self.amps.iter_mut().for_each(|a| *a *= f);
    }

    fn check_qubit(&self, q: usize) -> Result<(), MathError> {
        if q >= self.n {
            Err(MathError::QubitIndex {
                qubit: q,
                qubits: self.n,
            })
        } else {
            Ok(())
        }
    }

    pub fn apply_cz(&mut self, a: usize, b: usize) -> Result<(), MathError> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        let mask = (1 << a) | (1 << b);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & mask == mask {
                *amp = -*amp;
            }
        }
        Ok(())
    }

    /// `e^{-iZθ/2}` on qubit `q`.
    pub fn apply_rz(&mut self, q: usize, theta: f64) -> Result<(), MathError> {
        self.check_qubit(q)?;
        let p0 = Complex64::from_polar(1.0, -theta / 2.0);
        let p1 = Complex64::from_polar(1.0, theta / 2.0);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            *amp *= if i >> q & 1 == 0 { p0 } else { p1 };
        }
        Ok(())
    }

    /// General 2×2 gate (row-major) on qubit `q`.
    pub fn apply_single(&mut self, q: usize, m: [[Complex64; 2]; 2]) -> Result<(), MathError> {
        self.check_qubit(q)?;
        let bit = 1 << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[i | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
        Ok(())
    }

    pub fn apply_pauli(&mut self, q: usize, p: PauliOp) -> Result<(), MathError> {
        if p.is_identity() {
            return self.check_qubit(q);
        }
        self.apply_single(q, p.matrix())
    }

    /// Probability of `outcome` when measuring qubit `q` in the
    /// `{|0⟩ ± e^{iδ}|1⟩}` basis.
    pub fn rotated_probability(&self, q: usize, delta: Angle8, outcome: u8) -> Result<f64, MathError> {
        Ok(self.contract(q, rotated_bra(delta, outcome))?.norm_sqr_total())
    }

    /// Contracts qubit `q` with `bra`, returning the unnormalised state on
    /// the remaining qubits (higher qubits shift down by one).
    pub fn contract(&self, q: usize, bra: [Complex64; 2]) -> Result<Unnormalized, MathError> {
        self.check_qubit(q)?;
        let low = (1usize << q) - 1;
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len() / 2];
        for (j, slot) in out.iter_mut().enumerate() {
            let i0 = (j & low) | ((j & !low) << 1);
            *slot = bra[0] * self.amps[i0] + bra[1] * self.amps[i0 | (1 << q)];
        }
        Ok(Unnormalized {
            n: self.n - 1,
            amps: out,
        })
    }

    /// Projects qubit `q` onto the rotated basis element, keeping it in the
    /// register; returns `None` for a zero-probability branch.
    pub fn project_rotated(
        &self,
        q: usize,
        delta: Angle8,
        outcome: u8,
    ) -> Result<Option<(f64, StateVector)>, MathError> {
        let reduced = self.contract(q, rotated_bra(delta, outcome))?;
        let prob = reduced.norm_sqr_total();
        if prob <= 1e-300 {
            return Ok(None);
        }
        let sign = if outcome & 1 == 0 { 1.0 } else { -1.0 };
        let ket = [
            Complex64::new(SQRT_HALF, 0.0),
            Complex64::from_polar(sign * SQRT_HALF, delta.radians()),
        ];
        let scale = 1.0 / prob.sqrt();
        let low = (1usize << q) - 1;
        let mut amps = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (j, r) in reduced.amps.iter().enumerate() {
            let i0 = (j & low) | ((j & !low) << 1);
            amps[i0] = ket[0] * r * scale;
            amps[i0 | (1 << q)] = ket[1] * r * scale;
        }
        Ok(Some((prob, StateVector { n: self.n, amps })))
    }

    /// Born-rule measurement in the `{|0⟩ ± e^{iδ}|1⟩}` basis with eager
    /// collapse. The measured qubit stays in the register in its post-measurement state.
    pub fn measure_rotated<R: Rng + ?Sized>(
        &self,
        q: usize,
        delta: Angle8,
        rng: &mut R,
    ) -> Result<(u8, StateVector), MathError> {
        let p0 = self.rotated_probability(q, delta, 0)?;
        let outcome = if rng.random::<f64>() < p0 { 0 } else { 1 };
        match self.project_rotated(q, delta, outcome)? {
            Some((_, s)) => Ok((outcome, s)),
            // p0 rounding: the sampled branch can only be empty if the other one has probability 1
            None => {
                let other = outcome ^ 1;
                let (_, s) = self.project_rotated(q, delta, other)?.ok_or(MathError::ZeroNorm)?;
                Ok((other, s))
            }
        }
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// `|⟨ψ|φ⟩|²`; global phase is irrelevant.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        if self.n != other.n {
            return 0.0;
        }
        self.inner(other).norm_sqr()
    }

    /// Equality up to global phase: `|⟨ψ|φ⟩| ≥ 1 − 10⁻¹⁰`.
    pub fn approx_eq_up_to_phase(&self, other: &StateVector) -> bool {
        self.n == other.n && self.inner(other).norm() >= 1.0 - 1e-10
    }
}

/// Result of contracting a qubit away; carries the branch weight in its norm.
#[derive(Clone, Debug)]
pub struct Unnormalized {
    n: usize,
    amps: Vec<Complex64>,
}

impl From<StateVector> for Unnormalized {
    fn from(s: StateVector) -> Self {
        Unnormalized { n: s.n, amps: s.amps }
    }
}

impl Unnormalized {
    pub fn norm_sqr_total(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn contract(&self, q: usize, bra: [Complex64; 2]) -> Result<Unnormalized, MathError> {
        StateVector {
            n: self.n,
            amps: self.amps.clone(),
        }
        .contract(q, bra)
    }

    /// Normalised state, or `None` if the branch has zero weight.
    pub fn normalized(self) -> Option<StateVector> {
        let p = self.norm_sqr_total();
        if p <= 1e-300 {
            return None;
        }
        let f = 1.0 / p.sqrt();
        Some(StateVector {
            n: self.n,
            amps: self.amps.into_iter().map(|a| a * f).collect(),
        })
    }
}

/// `(⊗ CZ)(⊗ e^{-iZθ/2})|+⟩^{⊗N}` for the given graph.
pub fn build_rotated_graph_state(graph: &Graph, thetas: &[Angle8]) -> Result<StateVector, MathError> {
    build_rotated_graph_state_ordered(graph, thetas, OperatorOrder::EntangleFirst)
}

pub fn build_rotated_graph_state_ordered(
    graph: &Graph,
    thetas: &[Angle8],
    order: OperatorOrder,
) -> Result<StateVector, MathError> {
    if thetas.len() != graph.qubits() {
        return Err(MathError::LengthMismatch {
            expected: graph.qubits(),
            got: thetas.len(),
        });
    }
    let mut state = StateVector::plus(graph.qubits())?;
    let rotate = |s: &mut StateVector| -> Result<(), MathError> {
        for (q, t) in thetas.iter().enumerate() {
            if t.k() != 0 {
                s.apply_rz(q, t.radians())?;
            }
        }
        Ok(())
    };
    let entangle = |s: &mut StateVector| -> Result<(), MathError> {
        for &(a, b) in graph.edges() {
            s.apply_cz(a, b)?;
        }
        Ok(())
    };
    match order {
        OperatorOrder::EntangleFirst => {
            entangle(&mut state)?;
            rotate(&mut state)?;
        }
        OperatorOrder::RotateFirst => {
            rotate(&mut state)?;
            entangle(&mut state)?;
        }
    }
    Ok(state)
}
