use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use super::{Family, KernelSpec};
use crate::error::{Error, Result};

/// Radial kernels written as K(x,y) = ∫₀^∞ e^{−t‖x−y‖²} dμ(t).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LaplaceRepresentation {
    Atomic { location: f64, mass: f64 },
    Density(LaplaceDensity),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum LaplaceDensity {
    /// 1/(2σ√π) · exp(−1/(4σ²t)) · t^{−3/2}
    ExpL2 { sigma: f64 },
    /// t^{β−1} e^{−t} / Γ(β)
    InverseMultiquadric { beta: f64 },
}

impl LaplaceDensity {
    pub fn eval(&self, t: f64) -> f64 {
        if !(t > 0.0) {
            return 0.0;
        }
        match *self {
            LaplaceDensity::ExpL2 { sigma } => {
                (-1.0 / (4.0 * sigma * sigma * t)).exp() / (2.0 * sigma * PI.sqrt() * t.powf(1.5))
            }
            LaplaceDensity::InverseMultiquadric { beta } => {
                ((beta - 1.0) * t.ln() - t - ln_gamma(beta)).exp()
            }
        }
    }
}

impl LaplaceRepresentation {
    pub(super) fn of(spec: &KernelSpec) -> Result<Self> {
        match *spec.family() {
            Family::Gaussian { gamma } => Ok(LaplaceRepresentation::Atomic {
                location: 1.0 / gamma,
                mass: 1.0,
            }),
            Family::ExpL2 { sigma } => Ok(LaplaceRepresentation::Density(LaplaceDensity::ExpL2 { sigma })),
            Family::InverseMultiquadric { beta } => Ok(LaplaceRepresentation::Density(
                LaplaceDensity::InverseMultiquadric { beta },
            )),
            _ => Err(Error::UnsupportedFamily(
                "Laplace representations exist for Gaussian, ℓ²-exponential and inverse multiquadric kernels".into(),
            )),
        }
    }

    /// ∫ e^{−t s} dμ(t), the kernel as a function of s = ‖x−y‖².
    pub fn transform(&self, s: f64) -> Result<f64> {
        match *self {
            LaplaceRepresentation::Atomic { location, mass } => Ok(mass * (-location * s).exp()),
            LaplaceRepresentation::Density(density) => {
                let cfg = crate::special::QuadratureConfig::default();
                // integrate in u = ln t
                let f = |u: f64| {
                    let t = u.exp();
                    density.eval(t) * (-t * s).exp() * t
                };
                let breaks: Vec<f64> = (-60..=60).map(|k| k as f64).collect();
                Ok(crate::special::integrate_breaks(f, &breaks, &cfg)?.value)
            }
        }
    }
}
