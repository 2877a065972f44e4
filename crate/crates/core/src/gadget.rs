//! Three-qubit chain gadgets: measuring a decoration chain at fixed angles
//! with feed-forward reproduces an X, Y, T or Z measurement of the
//! lattice-embedded qubit.
//!
//! The check is branch-exact. For every outcome triple we compare the
//! normalised post-measurement state of the environment against directly
//! measuring the undecorated host, and compare the branch weight against a
//! quarter of the reference outcome probability.

use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::MathError;
use crate::graph::Graph;
use crate::math::{rotated_bra, Angle8, PauliOp, StateVector, Unnormalized, DEFAULT_QUBIT_CAP};

/// Branch infidelity tolerance for the equivalence check.
pub const GADGET_TOLERANCE: f64 = 1e-9;

/// Branch weights below this are round-off and treated as impossible.
const EMPTY_BRANCH: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GadgetBasis {
    X,
    Y,
    T,
    Z,
}

impl GadgetBasis {
    pub const ALL: [GadgetBasis; 4] = [GadgetBasis::X, GadgetBasis::Y, GadgetBasis::T, GadgetBasis::Z];

    /// Chain angles `(φ₁, φ₂, φ₃)`.
    pub fn angles(self) -> [Angle8; 3] {
        match self {
            GadgetBasis::X => [Angle8::ZERO, Angle8::ZERO, Angle8::ZERO],
            GadgetBasis::Y => [Angle8::ZERO, Angle8::ZERO, Angle8::PI_2],
            GadgetBasis::T => [Angle8::ZERO, Angle8::ZERO, Angle8::PI_4],
            GadgetBasis::Z => [Angle8::PI_2, Angle8::PI_2, Angle8::PI_2],
        }
    }

    /// Bra of the reference single-qubit measurement. `T ≡ (X+Y)/√2` has
    /// eigenvectors `|0⟩ ± e^{iπ/4}|1⟩`.
    pub fn reference_bra(self, outcome: u8) -> [Complex64; 2] {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        match self {
            GadgetBasis::X => rotated_bra(Angle8::ZERO, outcome),
            GadgetBasis::Y => rotated_bra(Angle8::PI_2, outcome),
            GadgetBasis::T => rotated_bra(Angle8::PI_4, outcome),
            GadgetBasis::Z if outcome & 1 == 0 => [one, zero],
            GadgetBasis::Z => [zero, one],
        }
    }
}

impl fmt::Display for GadgetBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Which end of the chain carries the lattice adjacency.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChainOrientation {
    /// Chain position 1 is lattice-embedded and measured first.
    HostFirst,
    /// Pendant positions are measured first, the lattice-embedded qubit last.
    HostLast,
}

/// Byproduct `(Z^{s₁}, X^{s₂})` carried by the logical qubit when the last
/// chain qubit is measured.
pub fn chain_byproduct(s1: u8, s2: u8) -> (PauliOp, PauliOp) {
    (
        if s1 & 1 == 1 { PauliOp::Z } else { PauliOp::I },
        if s2 & 1 == 1 { PauliOp::X } else { PauliOp::I },
    )
}

/// Measurement angle compensating a `Z^a X^b` byproduct: `(−1)^b φ + aπ`.
pub fn adapted_angle(phi: Angle8, byproduct: (PauliOp, PauliOp)) -> Angle8 {
    let (z, x) = byproduct;
    phi.signed(u8::from(x.x_bit())) + Angle8::pi_times(u8::from(z.z_bit()))
}

#[derive(Clone, Debug, Serialize)]
pub struct BranchReport {
    pub outcomes: [u8; 3],
    pub probability: f64,
    pub reference_probability: f64,
    pub infidelity: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FidelityReport {
    pub basis: GadgetBasis,
    pub environment: usize,
    pub orientation: ChainOrientation,
    pub worst_infidelity: f64,
    pub worst_probability_error: f64,
    pub branches: Vec<BranchReport>,
}

impl FidelityReport {
    pub fn passes(&self) -> bool {
        self.worst_infidelity <= GADGET_TOLERANCE && self.worst_probability_error <= GADGET_TOLERANCE
    }
}

/// Random environment: `env` qubits all adjacent to the host, random edges
/// among themselves, and random local unitaries applied afterwards.
struct Environment {
    edges: Vec<(usize, usize)>,
    locals: Vec<[[Complex64; 2]; 2]>,
}

fn random_unitary<R: Rng + ?Sized>(rng: &mut R) -> [[Complex64; 2]; 2] {
    let (a, b, c) = (
        rng.random::<f64>() * std::f64::consts::TAU,
        rng.random::<f64>() * std::f64::consts::TAU,
        rng.random::<f64>(),
    );
    let (cos, sin) = (c.sqrt(), (1.0 - c).sqrt());
    let u = Complex64::from_polar(cos, a);
    let v = Complex64::from_polar(sin, b);
    [[u, -v.conj()], [v, u.conj()]]
}

impl Environment {
    fn sample<R: Rng + ?Sized>(env: usize, rng: &mut R) -> Self {
        let mut edges = Vec::new();
        for a in 0..env {
            for b in a + 1..env {
                if rng.random::<bool>() {
                    edges.push((a, b));
                }
            }
        }
        let locals = (0..env).map(|_| random_unitary(rng)).collect();
        Environment { edges, locals }
    }

    /// Graph state on env + host (`host = env`) plus the chain qubits above it.
    fn build(&self, env: usize, chain: &[(usize, usize)]) -> Result<StateVector, MathError> {
        let n = env + 1 + chain.len();
        let mut edges = self.edges.clone();
        edges.extend((0..env).map(|q| (q, env)));
        edges.extend_from_slice(chain);
        let g = Graph::new(n, edges).expect("gadget graph is simple");
        let mut s = StateVector::plus(n)?;
        for &(a, b) in g.edges() {
            s.apply_cz(a, b)?;
        }
        for (q, u) in self.locals.iter().enumerate() {
            s.apply_single(q, *u)?;
        }
        Ok(s)
    }
}

pub fn verify_chain_equivalence<R: Rng + ?Sized>(
    basis: GadgetBasis,
    environment: usize,
    rng: &mut R,
) -> Result<FidelityReport, MathError> {
    verify_chain_equivalence_oriented(basis, environment, ChainOrientation::HostFirst, rng)
}

pub fn verify_chain_equivalence_oriented<R: Rng + ?Sized>(
    basis: GadgetBasis,
    environment: usize,
    orientation: ChainOrientation,
    rng: &mut R,
) -> Result<FidelityReport, MathError> {
    if environment + 3 > DEFAULT_QUBIT_CAP {
        return Err(MathError::QubitCap {
            requested: environment + 3,
            cap: DEFAULT_QUBIT_CAP,
        });
    }
    let env = Environment::sample(environment, rng);
    let host = environment;
    let decorated = env.build(environment, &[(host, host + 1), (host + 1, host + 2)])?;
    let reference = env.build(environment, &[])?;

    // measurement order in register positions, by chain label 1, 2, 3
    let order = match orientation {
        ChainOrientation::HostFirst => [host, host + 1, host + 2],
        ChainOrientation::HostLast => [host + 2, host + 1, host],
    };
    let phis = basis.angles();

    let mut ref_branches = Vec::with_capacity(2);
    for s in 0..2u8 {
        let r = reference.contract(host, basis.reference_bra(s))?;
        let p = r.norm_sqr_total();
        ref_branches.push((p, r.normalized().filter(|_| p > EMPTY_BRANCH)));
    }

    let mut branches = Vec::with_capacity(8);
    let (mut worst_inf, mut worst_prob) = (0.0f64, 0.0f64);
    for s1 in 0..2u8 {
        for s2 in 0..2u8 {
            for s3 in 0..2u8 {
                let outcomes = [s1, s2, s3];
                // positions shift down as qubits are contracted away
                let mut removed: Vec<usize> = Vec::with_capacity(3);
                let mut state = Unnormalized::from(decorated.clone());
                let mut byproduct = (PauliOp::I, PauliOp::I);
                for k in 0..3 {
                    let delta = adapted_angle(phis[k], byproduct);
                    let target = order[k];
                    let pos = target - removed.iter().filter(|&&r| r < target).count();
                    state = state.contract(pos, rotated_bra(delta, outcomes[k]))?;
                    removed.push(target);
                    // linear-chain feed-forward: X^{s_k} Z^{x_k} on the next qubit
                    byproduct = (
                        if byproduct.1.x_bit() { PauliOp::Z } else { PauliOp::I },
                        if outcomes[k] == 1 { PauliOp::X } else { PauliOp::I },
                    );
                    if k == 1 {
                        debug_assert_eq!(byproduct, chain_byproduct(s1, s2));
                    }
                }
                let p = state.norm_sqr_total();
                let (p_ref, ref_state) = &ref_branches[s3 as usize];
                let expected = p_ref / 4.0;
                let infidelity = match (state.normalized().filter(|_| p > EMPTY_BRANCH), ref_state) {
                    (Some(a), Some(b)) => (1.0 - a.fidelity(b)).max(0.0),
                    (None, None) => 0.0,
                    _ => 1.0,
                };
                worst_inf = worst_inf.max(infidelity);
                worst_prob = worst_prob.max((p - expected).abs());
                branches.push(BranchReport {
                    outcomes,
                    probability: p,
                    reference_probability: *p_ref,
                    infidelity,
                });
            }
        }
    }
    Ok(FidelityReport {
        basis,
        environment,
        orientation,
        worst_infidelity: worst_inf,
        worst_probability_error: worst_prob,
        branches,
    })
}

/// Runs every basis against environments `0..=max_env`.
pub fn verify_all<R: Rng + ?Sized>(
    max_env: usize,
    orientation: ChainOrientation,
    rng: &mut R,
) -> Result<Vec<FidelityReport>, MathError> {
    let mut out = Vec::new();
    for basis in GadgetBasis::ALL {
        for env in 0..=max_env {
            out.push(verify_chain_equivalence_oriented(basis, env, orientation, rng)?);
        }
    }
    Ok(out)
}
