//! Monte-Carlo check of the first-order rate formulas on a periodic
//! decorated lattice.

use rayon::prelude::*;
use serde::Serialize;

use super::chain::propagate_chain;
use super::params::{closed_form_rates, NoiseParams};
use super::sampler::NoiseCircuit;
use crate::error::NoiseError;
use crate::lattice::{build_rhg, cz_schedule, decorate, Boundary, Lattice};
use crate::seed::rng_for;

/// Second-order allowance `C·p²` for comparing exact parities against
/// first-order formulas.
pub const SECOND_ORDER_C: f64 = 40.0;
const CHUNK: u64 = 4096;

#[derive(Clone, Debug, Serialize)]
pub struct RateCheck {
    pub name: &'static str,
    pub formula: f64,
    pub empirical: f64,
    pub sigma: f64,
    pub tolerance: f64,
}

impl RateCheck {
    fn new(name: &'static str, formula: f64, hits: u64, trials: u64, p: f64) -> Self {
        let n = trials as f64;
        let empirical = hits as f64 / n;
        let sigma = (formula * (1.0 - formula) / n).sqrt();
        RateCheck {
            name,
            formula,
            empirical,
            sigma,
            tolerance: (3.0 * sigma).max(SECOND_ORDER_C * p * p),
        }
    }

    pub fn deviation(&self) -> f64 {
        (self.empirical - self.formula).abs()
    }

    pub fn passes(&self) -> bool {
        self.deviation() <= self.tolerance
    }
}

#[derive(Clone, Copy, Default)]
struct Hits([u64; 5]);

/// Samples `trials` shots of the full noisy circuit on a 2×2×2 periodic
/// decorated lattice and tallies one bulk chain and one lattice CZ.
pub fn validate_rates(params: &NoiseParams, trials: u64, seed: u64) -> Result<Vec<RateCheck>, NoiseError> {
    params.validate()?;
    let lattice: Lattice = decorate(&build_rhg([2, 2, 2], Boundary::Periodic)?)?;
    let schedule = cz_schedule(&lattice)?;
    let circuit = NoiseCircuit::new(&lattice, &schedule)?;
    let site = 0;
    let chunks = trials.div_ceil(CHUNK);
    let hits = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = rng_for(seed, &[c]);
            let mut h = Hits::default();
            for _ in (c * CHUNK)..((c + 1) * CHUNK).min(trials) {
                let e = circuit.sample(params, &mut rng);
                h.0[0] += u64::from(e.creation.z(3 * site));
                h.0[1] += u64::from(e.creation.z(3 * site + 1));
                h.0[2] += u64::from(e.creation.z(3 * site + 2));
                h.0[3] += u64::from(propagate_chain(&e, &lattice)[site]);
                h.0[4] += u64::from(e.zz_edges[0]);
            }
            h
        })
        .reduce(Hits::default, |a, b| {
            let mut out = a;
            for (x, y) in out.0.iter_mut().zip(b.0) {
                *x += y;
            }
            out
        });
    let r = closed_form_rates(params);
    let p = params.max_rate();
    Ok(vec![
        RateCheck::new("lambda1", r.lambda1, hits.0[0], trials, p),
        RateCheck::new("lambda2", r.lambda2, hits.0[1], trials, p),
        RateCheck::new("lambda3", r.lambda3, hits.0[2], trials, p),
        RateCheck::new("lambda_total", r.lambda_total, hits.0[3], trials, p),
        RateCheck::new("q2", r.q2, hits.0[4], trials, p),
    ])
}
