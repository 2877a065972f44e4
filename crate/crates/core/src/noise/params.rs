use serde::{Deserialize, Serialize};

use crate::error::NoiseError;

/// Depolarizing strengths for preparation, measurement and CZ, plus i.i.d. loss.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams {
    #[serde(rename = "pP")]
    pub p_prep: f64,
    #[serde(rename = "pM")]
    pub p_meas: f64,
    pub p2: f64,
    #[serde(default)]
    pub ploss: f64,
}

impl NoiseParams {
    pub fn new(p_prep: f64, p_meas: f64, p2: f64) -> Result<Self, NoiseError> {
        let p = NoiseParams {
            p_prep,
            p_meas,
            p2,
            ploss: 0.0,
        };
        p.validate()?;
        Ok(p)
    }

    /// `(pP, pM, p2) = (a·p, b·p, c·p)`.
    pub fn scaled(p: f64, [a, b, c]: [f64; 3]) -> Result<Self, NoiseError> {
        Self::new(a * p, b * p, c * p)
    }

    pub fn uniform(p: f64) -> Result<Self, NoiseError> {
        Self::new(p, p, p)
    }

    pub fn zero() -> Self {
        NoiseParams {
            p_prep: 0.0,
            p_meas: 0.0,
            p2: 0.0,
            ploss: 0.0,
        }
    }

    pub fn validate(&self) -> Result<(), NoiseError> {
        for (name, value) in [
            ("pP", self.p_prep),
            ("pM", self.p_meas),
            ("p2", self.p2),
            ("ploss", self.ploss),
        ] {
            check_probability(name, value)?;
        }
        Ok(())
    }

    pub fn max_rate(&self) -> f64 {
        self.p_prep.max(self.p_meas).max(self.p2)
    }
}

pub(crate) fn check_probability(name: &'static str, value: f64) -> Result<(), NoiseError> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(NoiseError::Probability { name, value })
    }
}

/// First-order error rates of the decorated lattice under [`NoiseParams`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorRates {
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
    pub lambda_total: f64,
    pub q1: f64,
    pub q2: f64,
    #[serde(rename = "lambda_Z")]
    pub lambda_z: f64,
    pub eps_inject: f64,
}

/// Z-component of a two-qubit depolarizing channel on one of its qubits:
/// 8 of the 15 nontrivial Paulis carry Z or Y there.
pub const CZ_Z_FRACTION: f64 = 8.0 / 15.0;
/// `{Z,Y}⊗{Z,Y}` quadrant: 4 of 15.
pub const CZ_ZZ_FRACTION: f64 = 4.0 / 15.0;
/// Z or Y out of X, Y, Z.
pub const SINGLE_Z_FRACTION: f64 = 2.0 / 3.0;

pub fn closed_form_rates(params: &NoiseParams) -> ErrorRates {
    let NoiseParams {
        p_prep: pp,
        p_meas: pm,
        p2,
        ..
    } = *params;
    let lambda1 = 32.0 * p2 / 15.0 + 8.0 * p2 / 15.0 + 2.0 * pp / 3.0;
    let lambda2 = 16.0 * p2 / 15.0 + 2.0 * pp / 3.0;
    let lambda3 = 8.0 * p2 / 15.0 + 2.0 * pp / 3.0;
    let lambda_total = lambda1 + lambda3 + 2.0 * (2.0 * pm / 3.0);
    ErrorRates {
        lambda1,
        lambda2,
        lambda3,
        lambda_total,
        q1: lambda_total,
        q2: 4.0 * p2 / 15.0,
        lambda_z: 2.0 * (2.0 * pm / 3.0) + 2.0 * (2.0 * pp / 3.0) + p2,
        eps_inject: 4.0 * p2 + 2.0 * p2 + 3.0 * (2.0 * pm / 3.0) + 3.0 * (2.0 * pp / 3.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_values_at_threshold() {
        let p = 4.3e-3;
        let r = closed_form_rates(&NoiseParams::uniform(p).unwrap());
        assert!((r.lambda_total - 88.0 * p / 15.0).abs() < 1e-15);
        assert!((r.lambda_total - 2.523e-2).abs() < 1e-5);
        assert!((r.q2 - 1.147e-3).abs() < 1e-6);
        assert!((r.lambda_z - 1.577e-2).abs() < 1e-5);
        assert!((r.eps_inject - 0.043).abs() < 1e-12);
        assert_eq!(r.q1, r.lambda_total);
    }

    #[test]
    fn rejects_bad_probabilities() {
        assert!(matches!(
            NoiseParams::new(1.5, 0.0, 0.0),
            Err(NoiseError::Probability { name: "pP", .. })
        ));
        assert!(NoiseParams::new(0.0, -0.1, 0.0).is_err());
        assert!(NoiseParams::new(0.0, 0.0, f64::NAN).is_err());
    }

    #[test]
    fn serde_names() {
        let s = serde_json::to_string(&closed_form_rates(&NoiseParams::zero())).unwrap();
        assert!(s.contains("\"lambda_Z\""));
        let p: NoiseParams = serde_json::from_str(r#"{"pP":0.1,"pM":0.2,"p2":0.3}"#).unwrap();
        assert_eq!(p.ploss, 0.0);
    }
}
