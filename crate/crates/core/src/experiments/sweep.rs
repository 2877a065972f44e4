use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::stats::{wilson_interval, Z_95};
use crate::decoder::{Decoder, DecoderConfig, LogicalSurface};
use crate::error::ExperimentError;
use crate::lattice::{build_rhg, Boundary};
use crate::noise::{closed_form_rates, sample_effective_errors, ErrorRates, NoiseParams};
use crate::seed::{derive_seed, rng_for};

pub const MIN_TRIALS: u64 = 100;

/// Environment variable read for the worker count when none is given.
pub const WORKERS_ENV: &str = "BTMBQC_WORKERS";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    /// Label used in reports.
    pub scenario: String,
    /// `(cP, cM, c2)` with `pP = cP·p`, `pM = cM·p`, `p2 = c2·p`.
    pub multipliers: [f64; 3],
    pub p_values: Vec<f64>,
    pub sizes: Vec<usize>,
    pub trials: u64,
    pub seed: u64,
    #[serde(default)]
    pub decoder: DecoderConfig,
}

impl SweepConfig {
    /// `pP = pM = p2 = p`, sizes 3, 5, 7.
    pub fn bulk(seed: u64) -> Self {
        SweepConfig {
            scenario: "bulk".into(),
            multipliers: [1.0, 1.0, 1.0],
            p_values: vec![3.3e-3, 3.8e-3, 4.3e-3, 4.8e-3, 5.3e-3],
            sizes: vec![3, 5, 7],
            trials: 10_000,
            seed,
            decoder: DecoderConfig::default(),
        }
    }

    /// `pP = 10p`, `pM = p2 = p`.
    pub fn prep_dominated(seed: u64) -> Self {
        SweepConfig {
            scenario: "prep10".into(),
            multipliers: [10.0, 1.0, 1.0],
            p_values: vec![1.1e-3, 1.35e-3, 1.6e-3, 1.85e-3, 2.1e-3],
            ..Self::bulk(seed)
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |m: String| Err(ExperimentError::InvalidConfig(m));
        if self.trials < MIN_TRIALS {
            return bad(format!("trials must be at least {MIN_TRIALS}, got {}", self.trials));
        }
        if self.sizes.len() < 2 {
            return bad("at least two lattice sizes are needed".into());
        }
        if self.sizes.iter().any(|&l| l < 2) {
            return bad("lattice sizes must be at least 2".into());
        }
        if self.p_values.is_empty() {
            return bad("no p values".into());
        }
        for &p in &self.p_values {
            NoiseParams::scaled(p, self.multipliers)?;
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON encoding.
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(&json))
    }

    fn scenario_key(&self) -> u64 {
        derive_seed(0, &self.multipliers.map(f64::to_bits))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub p: f64,
    pub size: usize,
    pub trials: u64,
    pub failures: u64,
    pub rate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub config: SweepConfig,
    /// Ordered by `p`, then `L`.
    pub points: Vec<SweepPoint>,
    /// Effective rates fed to the decoder, one per `p`.
    pub rates: Vec<ErrorRates>,
}

/// Worker count: explicit value, else the environment variable, else rayon's default.
pub fn resolve_workers(explicit: Option<usize>) -> Option<usize> {
    explicit
        .or_else(|| std::env::var(WORKERS_ENV).ok().and_then(|v| v.parse().ok()))
        .filter(|&n| n > 0)
}

pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult, ExperimentError> {
    run_sweep_with_workers(config, resolve_workers(None))
}

/// Runs the sweep on a dedicated pool. Results do not depend on `workers`.
pub fn run_sweep_with_workers(config: &SweepConfig, workers: Option<usize>) -> Result<SweepResult, ExperimentError> {
    config.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| ExperimentError::InvalidConfig(e.to_string()))?;
    pool.install(|| sweep_inner(config))
}

fn sweep_inner(config: &SweepConfig) -> Result<SweepResult, ExperimentError> {
    let scenario = config.scenario_key();
    let lattices = config
        .sizes
        .iter()
        .map(|&l| build_rhg([l, l, l], Boundary::Periodic))
        .collect::<Result<Vec<_>, _>>()?;
    let mut points = Vec::new();
    let mut rates = Vec::new();
    for (pi, &p) in config.p_values.iter().enumerate() {
        let r = closed_form_rates(&NoiseParams::scaled(p, config.multipliers)?);
        for (&size, lattice) in config.sizes.iter().zip(&lattices) {
            let decoder = Decoder::with_config(lattice, config.decoder);
            let outcomes: Vec<Result<bool, ExperimentError>> = (0..config.trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = rng_for(config.seed, &[scenario, pi as u64, size as u64, t]);
                    let errors = sample_effective_errors(lattice, &r, &mut rng);
                    decoder
                        .fails(&errors, LogicalSurface::Any)
                        .map_err(|source| ExperimentError::Decoder {
                            p,
                            size,
                            trial: t,
                            source,
                        })
                })
                .collect();
            let mut failures = 0;
            for o in outcomes {
                failures += u64::from(o?);
            }
            let (ci_lo, ci_hi) = wilson_interval(failures, config.trials, Z_95);
            points.push(SweepPoint {
                p,
                size,
                trials: config.trials,
                failures,
                rate: failures as f64 / config.trials as f64,
                ci_lo,
                ci_hi,
            });
        }
        rates.push(r);
    }
    Ok(SweepResult {
        config: config.clone(),
        points,
        rates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mini(p_values: Vec<f64>, sizes: Vec<usize>) -> SweepConfig {
        SweepConfig {
            p_values,
            sizes,
            trials: 200,
            ..SweepConfig::bulk(11)
        }
    }

    #[test]
    fn zero_noise_never_fails() {
        let res = run_sweep(&mini(vec![0.0], vec![3, 5])).unwrap();
        assert!(
            res.points.iter().all(|p| p.failures == 0 && p.ci_lo == 0.0),
            "{:?}",
            res.points
        );
    }

    #[test]
    fn far_above_threshold_larger_is_worse() {
        // at p = 0.05 the homology class is random: 7/8 failure on both sizes
        let res = run_sweep(&SweepConfig {
            trials: 4000,
            ..mini(vec![0.05], vec![3, 5])
        })
        .unwrap();
        for pt in &res.points {
            assert!(pt.ci_lo <= 0.875 && 0.875 <= pt.ci_hi, "{pt:?}");
        }
        let res = run_sweep(&SweepConfig {
            trials: 4000,
            ..mini(vec![0.008], vec![3, 5])
        })
        .unwrap();
        assert!(res.points[1].ci_lo > res.points[0].ci_hi, "{:?}", res.points);
    }

    #[test]
    fn feeds_closed_form_rates() {
        let p = 4.3e-3;
        let res = run_sweep(&mini(vec![p], vec![2, 3])).unwrap();
        let want = closed_form_rates(&NoiseParams::uniform(p).unwrap());
        assert_eq!(res.rates[0], want);
        assert!((res.rates[0].q1 - 88.0 * p / 15.0).abs() < 1e-15);
        assert!((res.rates[0].q2 - 4.0 * p / 15.0).abs() < 1e-15);
    }

    #[test]
    fn validation() {
        assert!(mini(vec![0.01], vec![3]).validate().is_err());
        assert!(SweepConfig {
            trials: 10,
            ..SweepConfig::bulk(0)
        }
        .validate()
        .is_err());
        assert!(mini(vec![0.5], vec![3, 5]).validate().is_err() || mini(vec![2.0], vec![3, 5]).validate().is_err());
        SweepConfig::bulk(0).validate().unwrap();
    }

    #[test]
    fn hash_tracks_config() {
        let a = SweepConfig::bulk(1);
        assert_eq!(a.hash(), SweepConfig::bulk(1).hash());
        assert_ne!(a.hash(), SweepConfig::bulk(2).hash());
        assert_ne!(
            a.hash(),
            SweepConfig {
                trials: 10_001,
                ..a.clone()
            }
            .hash()
        );
        assert_eq!(a.hash().len(), 64);
    }

    #[test]
    fn independent_of_worker_count() {
        let cfg = mini(vec![0.01, 0.02], vec![2, 3]);
        let one = run_sweep_with_workers(&cfg, Some(1)).unwrap();
        let four = run_sweep_with_workers(&cfg, Some(4)).unwrap();
        assert_eq!(one, four);
    }

    #[test]
    fn monotone_in_size_well_below_threshold() {
        let cfg = SweepConfig {
            p_values: vec![1.4e-3],
            sizes: vec![3, 5, 7],
            trials: 20_000,
            ..SweepConfig::bulk(21)
        };
        let res = run_sweep(&cfg).unwrap();
        let rates: Vec<u64> = res.points.iter().map(|p| p.failures).collect();
        assert!(rates.windows(2).all(|w| w[1] <= w[0]), "{rates:?}");
    }
}
