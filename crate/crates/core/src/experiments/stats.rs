//! Binomial intervals and curve-crossing estimates.

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use super::sweep::{SweepPoint, SweepResult};
use crate::error::ExperimentError;
use crate::seed::rng_for;

/// Two-sided 95% standard-normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `failures` out of `trials` at quantile `z`.
pub fn wilson_interval(failures: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let phat = failures as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if failures == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if failures == trials {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (lo, hi)
}

/// One curve: size and `(p, rate)` samples sorted by `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct Curve {
    pub size: usize,
    pub points: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairCrossing {
    pub small: usize,
    pub large: usize,
    pub p: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub p_th: f64,
    /// 95% percentile interval from the bootstrap.
    pub ci: [f64; 2],
    pub pairs: Vec<PairCrossing>,
    pub bootstrap_replicates: usize,
    /// Replicates in which no crossing was bracketed.
    pub bootstrap_misses: usize,
}

/// Roots of `rate_large - rate_small` going from negative to positive,
/// by linear interpolation between neighbouring `p` values.
fn pair_roots(small: &Curve, large: &Curve) -> Vec<f64> {
    let diffs: Vec<(f64, f64)> = small
        .points
        .iter()
        .zip(&large.points)
        .map(|(&(p, a), &(_, b))| (p, b - a))
        .collect();
    let mut roots = Vec::new();
    for w in diffs.windows(2) {
        let ((p0, d0), (p1, d1)) = (w[0], w[1]);
        if (d0 < 0.0 && d1 >= 0.0) || (d0 <= 0.0 && d1 > 0.0) {
            roots.push(p0 + (p1 - p0) * (-d0) / (d1 - d0));
        }
    }
    roots
}

/// Mean of pairwise crossings; each size pair contributes the mean of its
/// bracketed roots. No extrapolation outside the sampled `p` range.
pub fn crossing_of_curves(curves: &[Curve]) -> Result<(f64, Vec<PairCrossing>), ExperimentError> {
    if curves.len() < 2 {
        return Err(ExperimentError::NoCrossing("need at least two sizes".into()));
    }
    let mut sorted: Vec<&Curve> = curves.iter().collect();
    sorted.sort_by_key(|c| c.size);
    let ps: Vec<f64> = sorted[0].points.iter().map(|x| x.0).collect();
    if ps.len() < 3 {
        return Err(ExperimentError::NoCrossing("need at least three p values".into()));
    }
    if sorted
        .iter()
        .any(|c| c.points.iter().map(|x| x.0).ne(ps.iter().copied()))
    {
        return Err(ExperimentError::NoCrossing(
            "curves sampled at different p values".into(),
        ));
    }
    let mut pairs = Vec::new();
    for i in 0..sorted.len() {
        for j in i + 1..sorted.len() {
            let roots = pair_roots(sorted[i], sorted[j]);
            if !roots.is_empty() {
                let p = roots.iter().sum::<f64>() / roots.len() as f64;
                pairs.push(PairCrossing {
                    small: sorted[i].size,
                    large: sorted[j].size,
                    p,
                });
            }
        }
    }
    if pairs.is_empty() {
        return Err(ExperimentError::NoCrossing(format!(
            "no sign change of the rate difference in p ∈ [{}, {}]",
            ps[0],
            ps[ps.len() - 1]
        )));
    }
    let p_th = pairs.iter().map(|c| c.p).sum::<f64>() / pairs.len() as f64;
    Ok((p_th, pairs))
}

fn curves_from(points: &[SweepPoint], rate: impl Fn(&SweepPoint) -> f64) -> Vec<Curve> {
    let mut sizes: Vec<usize> = points.iter().map(|p| p.size).collect();
    sizes.sort_unstable();
    sizes.dedup();
    sizes
        .into_iter()
        .map(|size| {
            let mut pts: Vec<(f64, f64)> = points
                .iter()
                .filter(|p| p.size == size)
                .map(|p| (p.p, rate(p)))
                .collect();
            pts.sort_by(|a, b| a.0.total_cmp(&b.0));
            Curve { size, points: pts }
        })
        .collect()
}

/// Number of bootstrap replicates used by [`crossing_point`].
pub const BOOTSTRAP_REPLICATES: usize = 400;

/// Crossing estimate with a parametric bootstrap CI: failure counts are
/// redrawn as `Binomial(trials, rate)` per point and the crossing recomputed.
pub fn crossing_point(result: &SweepResult) -> Result<Crossing, ExperimentError> {
    crossing_point_with(result, BOOTSTRAP_REPLICATES)
}

pub fn crossing_point_with(result: &SweepResult, replicates: usize) -> Result<Crossing, ExperimentError> {
    let (p_th, pairs) = crossing_of_curves(&curves_from(&result.points, |p| p.rate))?;
    let mut rng = rng_for(result.config.seed, &[u64::MAX]);
    let mut samples = Vec::with_capacity(replicates);
    let mut misses = 0;
    for _ in 0..replicates {
        let redrawn: Vec<SweepPoint> = result
            .points
            .iter()
            .map(|pt| SweepPoint {
                rate: resample(pt, &mut rng),
                ..pt.clone()
            })
            .collect();
        match crossing_of_curves(&curves_from(&redrawn, |p| p.rate)) {
            Ok((p, _)) => samples.push(p),
            Err(_) => misses += 1,
        }
    }
    let ci = if samples.is_empty() {
        [p_th, p_th]
    } else {
        samples.sort_by(f64::total_cmp);
        [quantile(&samples, 0.025), quantile(&samples, 0.975)]
    };
    Ok(Crossing {
        p_th,
        ci,
        pairs,
        bootstrap_replicates: replicates,
        bootstrap_misses: misses,
    })
}

fn resample<R: Rng>(pt: &SweepPoint, rng: &mut R) -> f64 {
    if pt.trials == 0 {
        return 0.0;
    }
    let draw = Binomial::new(pt.trials, pt.rate.clamp(0.0, 1.0))
        .expect("rate in [0, 1]")
        .sample(rng);
    draw as f64 / pt.trials as f64
}

/// Linear-interpolated quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn wilson_edges() {
        let (lo, hi) = wilson_interval(0, 100, Z_95);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.03 && hi < 0.04);
        let (lo, hi) = wilson_interval(100, 100, Z_95);
        assert!(lo > 0.96 && hi == 1.0);
        assert_eq!(wilson_interval(0, 0, Z_95), (0.0, 1.0));
    }

    #[test]
    fn wilson_coverage() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for &(rate, n) in &[(0.01, 2000u64), (0.2, 500), (0.5, 400)] {
            let dist = Binomial::new(n, rate).unwrap();
            let covered = (0..1000)
                .filter(|_| {
                    let (lo, hi) = wilson_interval(dist.sample(&mut rng), n, Z_95);
                    lo <= rate && rate <= hi
                })
                .count();
            assert!(covered >= 930, "rate {rate}: {covered}/1000");
        }
    }

    fn synthetic(c: f64) -> Vec<Curve> {
        [(3, 10.0), (5, 20.0), (7, 35.0)]
            .iter()
            .map(|&(size, a)| Curve {
                size,
                points: [0.002, 0.003, 0.0035, 0.0045, 0.005, 0.006]
                    .iter()
                    .map(|&p| (p, a * (p - c) + 0.1))
                    .collect(),
            })
            .collect()
    }

    #[test]
    fn synthetic_crossing() {
        let (p, pairs) = crossing_of_curves(&synthetic(0.004)).unwrap();
        assert!((p - 0.004).abs() < 1e-12);
        assert_eq!(pairs.len(), 3);
    }

    #[test]
    fn parallel_curves_have_no_crossing() {
        let curves: Vec<Curve> = [3usize, 5]
            .iter()
            .map(|&size| Curve {
                size,
                points: (1..5)
                    .map(|i| (i as f64 * 1e-3, i as f64 * 0.01 + size as f64 * 0.1))
                    .collect(),
            })
            .collect();
        assert!(matches!(
            crossing_of_curves(&curves),
            Err(ExperimentError::NoCrossing(_))
        ));
        assert!(matches!(
            crossing_of_curves(&curves[..1]),
            Err(ExperimentError::NoCrossing(_))
        ));
    }
}
