use std::collections::HashMap;

use rand::Rng;
use serde::Serialize;

use super::frame::PauliFrame;
use super::params::{ErrorRates, NoiseParams, CZ_ZZ_FRACTION};
use crate::error::NoiseError;
use crate::lattice::{CellKind, CzSchedule, Lattice, LatticeEdge, LATTICE_STEPS};
use crate::math::PauliOp;

/// Where an error was injected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EventKind {
    Preparation,
    Cz,
    Measurement,
}

/// One nontrivial Pauli drawn from a channel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ErrorEvent {
    pub kind: EventKind,
    pub a: (usize, PauliOp),
    pub b: Option<(usize, PauliOp)>,
    /// Index into `Lattice::lattice_edges` when the CZ is a lattice edge.
    pub edge: Option<usize>,
}

/// The decorated lattice's noisy circuit: preparation, scheduled CZs, measurement.
#[derive(Clone, Debug)]
pub struct NoiseCircuit {
    qubits: usize,
    lattice_edges: usize,
    cz: Vec<(usize, usize, Option<usize>)>,
}

impl NoiseCircuit {
    pub fn new(lattice: &Lattice, schedule: &CzSchedule) -> Result<Self, NoiseError> {
        if !lattice.is_decorated() {
            return Err(crate::error::LatticeError::NotDecorated.into());
        }
        let index: HashMap<LatticeEdge, usize> = lattice
            .lattice_edges()
            .iter()
            .enumerate()
            .map(|(i, e)| (*e, i))
            .collect();
        let cz = schedule
            .rounds()
            .iter()
            .flat_map(|r| {
                let lattice_round = r.step as usize <= LATTICE_STEPS;
                let index = &index;
                r.edges
                    .iter()
                    .map(move |e| (e.a, e.b, if lattice_round { index.get(e).copied() } else { None }))
            })
            .collect();
        Ok(NoiseCircuit {
            qubits: lattice.qubit_count(),
            lattice_edges: lattice.lattice_edges().len(),
            cz,
        })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn lattice_edges(&self) -> usize {
        self.lattice_edges
    }

    pub fn sample_events<R: Rng + ?Sized>(&self, params: &NoiseParams, rng: &mut R) -> Vec<ErrorEvent> {
        let mut out = Vec::new();
        let single = |kind, p: f64, rng: &mut R, out: &mut Vec<ErrorEvent>| {
            if p <= 0.0 {
                return;
            }
            for q in 0..self.qubits {
                if rng.random::<f64>() < p {
                    let pauli = PauliOp::from_index(rng.random_range(1..4));
                    out.push(ErrorEvent {
                        kind,
                        a: (q, pauli),
                        b: None,
                        edge: None,
                    });
                }
            }
        };
        single(EventKind::Preparation, params.p_prep, rng, &mut out);
        if params.p2 > 0.0 {
            for &(a, b, edge) in &self.cz {
                if rng.random::<f64>() < params.p2 {
                    let k = rng.random_range(1..16usize);
                    out.push(ErrorEvent {
                        kind: EventKind::Cz,
                        a: (a, PauliOp::from_index(k / 4)),
                        b: Some((b, PauliOp::from_index(k % 4))),
                        edge,
                    });
                }
            }
        }
        single(EventKind::Measurement, params.p_meas, rng, &mut out);
        out
    }

    pub fn sample<R: Rng + ?Sized>(&self, params: &NoiseParams, rng: &mut R) -> SampledErrors {
        SampledErrors::from_events(self.qubits, self.lattice_edges, &self.sample_events(params, rng))
    }
}

/// Errors of one shot, split by when they act.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampledErrors {
    /// Preparation and CZ errors, each recorded on the qubit it hits.
    pub creation: PauliFrame,
    /// Errors immediately before measurement.
    pub measurement: PauliFrame,
    /// Per lattice edge: the CZ error was in the `{Z,Y}⊗{Z,Y}` quadrant.
    pub zz_edges: Vec<bool>,
}

impl SampledErrors {
    pub fn clean(qubits: usize, lattice_edges: usize) -> Self {
        SampledErrors {
            creation: PauliFrame::new(qubits),
            measurement: PauliFrame::new(qubits),
            zz_edges: vec![false; lattice_edges],
        }
    }

    pub fn from_events(qubits: usize, lattice_edges: usize, events: &[ErrorEvent]) -> Self {
        let mut s = Self::clean(qubits, lattice_edges);
        for ev in events {
            let frame = if ev.kind == EventKind::Measurement {
                &mut s.measurement
            } else {
                &mut s.creation
            };
            frame.apply(ev.a.0, ev.a.1);
            if let Some((q, p)) = ev.b {
                frame.apply(q, p);
                if let Some(e) = ev.edge {
                    s.zz_edges[e] ^= ev.a.1.z_bit() && p.z_bit();
                }
            }
        }
        s
    }

    pub fn compose(&mut self, other: &SampledErrors) {
        self.creation ^= &other.creation;
        self.measurement ^= &other.measurement;
        for (a, b) in self.zz_edges.iter_mut().zip(&other.zz_edges) {
            *a ^= b;
        }
    }

    pub fn is_clean(&self) -> bool {
        self.creation.is_clean() && self.measurement.is_clean() && !self.zz_edges.iter().any(|&b| b)
    }
}

pub fn sample_errors<R: Rng + ?Sized>(
    lattice: &Lattice,
    schedule: &CzSchedule,
    params: &NoiseParams,
    rng: &mut R,
) -> Result<SampledErrors, NoiseError> {
    params.validate()?;
    Ok(NoiseCircuit::new(lattice, schedule)?.sample(params, rng))
}

/// Lattice CZs that suffer a correlated `Z⊗Z` event, each independently
/// with probability `4p₂/15`.
pub fn correlated_pairs<R: Rng + ?Sized>(schedule: &CzSchedule, params: &NoiseParams, rng: &mut R) -> Vec<LatticeEdge> {
    let q2 = CZ_ZZ_FRACTION * params.p2;
    if q2 <= 0.0 {
        return Vec::new();
    }
    schedule
        .lattice_rounds()
        .flat_map(|r| r.edges.iter().copied())
        .filter(|_| rng.random::<f64>() < q2)
        .collect()
}

/// Effective Z errors on the undecorated lattice used for decoding: every
/// face flips independently with `q₁`, and every lattice edge flips both
/// endpoints with `q₂`. Returned per site; only face sites matter for the
/// primal syndrome.
pub fn sample_effective_errors<R: Rng + ?Sized>(lattice: &Lattice, rates: &ErrorRates, rng: &mut R) -> Vec<bool> {
    let mut flips = vec![false; lattice.sites().len()];
    for (s, c) in lattice.sites().iter().enumerate() {
        if c.kind() == CellKind::Face && rng.random::<f64>() < rates.q1 {
            flips[s] = true;
        }
    }
    if rates.q2 > 0.0 {
        let site = |q: usize| {
            lattice
                .site_index(lattice.qubit_id(q).site)
                .expect("edge endpoints are sites")
        };
        for e in lattice.lattice_edges() {
            if rng.random::<f64>() < rates.q2 {
                flips[site(e.a)] ^= true;
                flips[site(e.b)] ^= true;
            }
        }
    }
    flips
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_rhg, cz_schedule, decorate, Boundary};
    use crate::noise::params::closed_form_rates;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup() -> (Lattice, CzSchedule) {
        let lat = decorate(&build_rhg([2, 2, 2], Boundary::Periodic).unwrap()).unwrap();
        let s = cz_schedule(&lat).unwrap();
        (lat, s)
    }

    #[test]
    fn zero_noise_is_clean() {
        let (lat, s) = setup();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(sample_errors(&lat, &s, &NoiseParams::zero(), &mut rng)
            .unwrap()
            .is_clean());
        assert!(correlated_pairs(&s, &NoiseParams::zero(), &mut rng).is_empty());
    }

    #[test]
    fn certain_preparation_noise() {
        let (lat, s) = setup();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let params = NoiseParams::new(1.0, 0.0, 0.0).unwrap();
        let mut counts = [0usize; 4];
        for _ in 0..200 {
            let e = sample_errors(&lat, &s, &params, &mut rng).unwrap();
            for q in 0..lat.qubit_count() {
                let p = e.creation.get(q);
                assert_ne!(p, PauliOp::I);
                counts[p as usize] += 1;
            }
        }
        let n = (200 * lat.qubit_count()) as f64;
        for &c in &counts[1..4] {
            assert!((c as f64 / n - 1.0 / 3.0).abs() < 5.0 * (2.0 / 9.0 / n).sqrt());
        }
    }

    #[test]
    fn events_compose_linearly() {
        let (lat, s) = setup();
        let c = NoiseCircuit::new(&lat, &s).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let params = NoiseParams::uniform(0.05).unwrap();
        for _ in 0..20 {
            let a = c.sample_events(&params, &mut rng);
            let b = c.sample_events(&params, &mut rng);
            let joint: Vec<_> = a.iter().chain(&b).copied().collect();
            let mut composed = SampledErrors::from_events(c.qubits(), c.lattice_edges(), &a);
            composed.compose(&SampledErrors::from_events(c.qubits(), c.lattice_edges(), &b));
            assert_eq!(
                composed,
                SampledErrors::from_events(c.qubits(), c.lattice_edges(), &joint)
            );
        }
    }

    #[test]
    fn correlated_pair_rate_and_independence() {
        let (lat, s) = setup();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let params = NoiseParams::new(0.0, 0.0, 0.3).unwrap();
        let q2 = 4.0 * 0.3 / 15.0;
        let (e0, e1) = (lat.lattice_edges()[0], lat.lattice_edges()[1]);
        let trials = 20_000;
        let mut table = [[0f64; 2]; 2];
        let mut total = 0usize;
        for _ in 0..trials {
            let ev = correlated_pairs(&s, &params, &mut rng);
            total += ev.len();
            table[ev.contains(&e0) as usize][ev.contains(&e1) as usize] += 1.0;
        }
        let n = (trials * lat.lattice_edges().len()) as f64;
        assert!((total as f64 / n - q2).abs() < 3.0 * (q2 * (1.0 - q2) / n).sqrt());
        // 2x2 chi-square independence, 1 dof, 1% critical value 6.635
        let t = trials as f64;
        let rows = [table[0][0] + table[0][1], table[1][0] + table[1][1]];
        let cols = [table[0][0] + table[1][0], table[0][1] + table[1][1]];
        let mut chi = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let e = rows[i] * cols[j] / t;
                chi += (table[i][j] - e).powi(2) / e;
            }
        }
        assert!(chi < 6.635, "chi {chi}");
    }

    #[test]
    fn effective_errors_touch_only_faces_without_q2() {
        let lat = build_rhg([3, 3, 3], Boundary::Periodic).unwrap();
        let mut rates = closed_form_rates(&NoiseParams::uniform(0.05).unwrap());
        rates.q2 = 0.0;
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let flips = sample_effective_errors(&lat, &rates, &mut rng);
        assert!(flips.iter().any(|&f| f));
        for (s, &f) in flips.iter().enumerate() {
            if f {
                assert_eq!(lat.sites()[s].kind(), CellKind::Face);
            }
        }
    }
}
