use serde::{Deserialize, Serialize};

use super::params::check_probability;
use crate::error::NoiseError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DistillKind {
    Y,
    T,
}

impl DistillKind {
    pub fn coefficient(self) -> f64 {
        match self {
            DistillKind::Y => 7.0,
            DistillKind::T => 35.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistillParams {
    pub kind: DistillKind,
    pub eps0: f64,
    pub eps_top: f64,
    pub levels: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistillTrace {
    pub params: DistillParams,
    /// `eps[0] = eps0`, then one entry per level.
    pub eps: Vec<f64>,
    pub threshold: Option<f64>,
    pub converges: bool,
}

/// `ε ↦ c ε³ + ε_top`.
pub fn distill_step(kind: DistillKind, eps: f64, eps_top: f64) -> f64 {
    kind.coefficient() * eps.powi(3) + eps_top
}

/// Unstable fixed point of the map, the largest input that still flows to the
/// small fixed point. `None` if the map has no fixed point (ε_top too large).
pub fn threshold(kind: DistillKind, eps_top: f64) -> Option<f64> {
    let c = kind.coefficient();
    let f = |e: f64| c * e.powi(3) - e + eps_top;
    // f has its local minimum at 1/√(3c) and increases beyond it
    let mut lo = (1.0 / (3.0 * c)).sqrt();
    if f(lo) > 0.0 {
        return None;
    }
    let mut hi = 1.0f64.max(lo);
    while f(hi) < 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Residual of the fixed-point cubic at `eps`.
pub fn fixed_point_residual(kind: DistillKind, eps: f64, eps_top: f64) -> f64 {
    (distill_step(kind, eps, eps_top) - eps).abs()
}

pub fn distill_recursion(params: DistillParams) -> Result<DistillTrace, NoiseError> {
    check_probability("eps0", params.eps0)?;
    check_probability("eps_top", params.eps_top)?;
    let mut eps = Vec::with_capacity(params.levels + 1);
    eps.push(params.eps0);
    for _ in 0..params.levels {
        let next = distill_step(params.kind, *eps.last().expect("nonempty"), params.eps_top);
        eps.push(next);
        if !next.is_finite() || next > 1.0 {
            break;
        }
    }
    let threshold = threshold(params.kind, params.eps_top);
    let converges = threshold.is_some_and(|t| params.eps0 < t);
    Ok(DistillTrace {
        params,
        eps,
        threshold,
        converges,
    })
}
