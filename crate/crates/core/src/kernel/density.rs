use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use super::{Family, KernelSpec};
use crate::error::{Error, Result};
use crate::special::{ln_bessel_k, ln_laplace_type_integral, ln_sinc_half_abs, QuadratureConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SupportKind {
    EverywherePositive,
    /// Supported on the closed box [−half_width, half_width]^d.
    CompactSupport { half_width: f64 },
    ZeroSet { description: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "order", rename_all = "snake_case")]
pub enum AsymptoticClass {
    GaussianDecay,
    /// e^{−c‖ξ‖} times a power, as for the inverse multiquadric.
    ExponentialDecay,
    /// Along the slowest direction the density decays like ‖ξ‖^{−order}.
    PolyDecay(f64),
    Compact,
    AnovaMixed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Base {
    Gaussian { gamma: f64 },
    ExpL1 { sigma: f64 },
    ExpL2 { sigma: f64 },
    Imq { beta: f64 },
    BSpline { p: u32 },
    Anova { tau: f64 },
    Sinc,
}

/// Bochner density of a translation-invariant kernel, K(x,y) = ∫ e^{i(x−y,ξ)} u(ξ) dξ,
/// as a nonnegative combination of catalog densities.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDensity {
    dim: usize,
    terms: Vec<(f64, Base)>,
    cfg: QuadratureConfig,
}

fn log_sum_exp(values: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = values.collect();
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

impl Base {
    fn ln_eval(&self, xi: &[f64], cfg: &QuadratureConfig) -> Result<f64> {
        let d = xi.len() as f64;
        let sq: f64 = xi.iter().map(|v| v * v).sum();
        Ok(match *self {
            Base::Gaussian { gamma } => {
                d * (gamma.sqrt() / (2.0 * PI.sqrt())).ln() - gamma * sq / 4.0
            }
            Base::ExpL1 { sigma } => {
                d * (sigma / PI).ln() - xi.iter().map(|v| (sigma * sigma * v * v).ln_1p()).sum::<f64>()
            }
            Base::ExpL2 { sigma } => {
                let h = (d + 1.0) / 2.0;
                ln_gamma(h) - h * PI.ln() + d * sigma.ln() - h * (sigma * sigma * sq).ln_1p()
            }
            Base::Imq { beta } => {
                let r = sq.sqrt();
                if r == 0.0 && beta <= d / 2.0 {
                    return Ok(f64::INFINITY);
                }
                -d * (2.0 * PI.sqrt()).ln() - ln_gamma(beta)
                    + ln_laplace_type_integral(beta, xi.len(), r, cfg)?
            }
            Base::BSpline { p } => {
                -d * (2.0 * PI).ln() + p as f64 * xi.iter().map(|t| ln_sinc_half_abs(*t)).sum::<f64>()
            }
            Base::Anova { tau } => {
                (tau.sqrt() / (2.0 * PI.sqrt())).ln()
                    + log_sum_exp(xi.iter().map(|t| -tau * t * t / 4.0))
            }
            Base::Sinc => {
                if xi.iter().all(|t| t.abs() <= PI) {
                    -d * (2.0 * PI).ln()
                } else {
                    f64::NEG_INFINITY
                }
            }
        })
    }

    fn is_zero_at(&self, xi: &[f64]) -> bool {
        match *self {
            Base::BSpline { .. } => xi.iter().any(|&t| on_bspline_lattice(t)),
            Base::Sinc => xi.iter().any(|t| t.abs() > PI),
            _ => false,
        }
    }

    fn is_radial(&self) -> bool {
        matches!(self, Base::Gaussian { .. } | Base::ExpL2 { .. } | Base::Imq { .. })
    }
}

/// t ∈ 2πℤ∖{0}, up to rounding of the argument.
fn on_bspline_lattice(t: f64) -> bool {
    let k = (t / (2.0 * PI)).round();
    k != 0.0 && (t - 2.0 * PI * k).abs() <= 1e-12 * t.abs().max(1.0)
}

impl SpectralDensity {
    pub(super) fn of(spec: &KernelSpec) -> Result<Self> {
        let mut terms = Vec::new();
        collect(spec, 1.0, &mut terms)?;
        Ok(Self {
            dim: spec.dim(),
            terms,
            cfg: QuadratureConfig::default(),
        })
    }

    pub fn with_config(mut self, cfg: QuadratureConfig) -> Result<Self> {
        cfg.validate()?;
        self.cfg = cfg;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn check(&self, xi: &[f64]) -> Result<()> {
        if xi.len() == self.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                got: xi.len(),
            })
        }
    }

    /// ln u(ξ); −∞ where u vanishes, +∞ at an integrable singularity.
    pub fn ln_eval(&self, xi: &[f64]) -> Result<f64> {
        self.check(xi)?;
        let mut logs = Vec::with_capacity(self.terms.len());
        for (w, b) in &self.terms {
            logs.push(w.ln() + b.ln_eval(xi, &self.cfg)?);
        }
        if logs.iter().any(|v| *v == f64::INFINITY) {
            return Ok(f64::INFINITY);
        }
        Ok(log_sum_exp(logs.into_iter()))
    }

    pub fn eval(&self, xi: &[f64]) -> Result<f64> {
        Ok(self.ln_eval(xi)?.exp())
    }

    /// ln of an upper envelope that has no zeros: for B-spline terms
    /// |sinc_{1/2}(t)| is replaced by min(1, 2/|t|).
    pub fn ln_envelope(&self, xi: &[f64]) -> Result<f64> {
        self.check(xi)?;
        let mut logs = Vec::with_capacity(self.terms.len());
        for (w, b) in &self.terms {
            let l = match *b {
                Base::BSpline { p } => {
                    -(xi.len() as f64) * (2.0 * PI).ln()
                        + p as f64 * xi.iter().map(|t| (2.0 / t.abs()).min(1.0).ln()).sum::<f64>()
                }
                _ => b.ln_eval(xi, &self.cfg)?,
            };
            logs.push(w.ln() + l);
        }
        if logs.iter().any(|v| *v == f64::INFINITY) {
            return Ok(f64::INFINITY);
        }
        Ok(log_sum_exp(logs.into_iter()))
    }

    /// Exact zero of the density (lattice zeros of B-splines, outside the
    /// sinc box), decided analytically rather than by thresholding.
    pub fn is_zero_at(&self, xi: &[f64]) -> bool {
        self.terms.iter().all(|(_, b)| b.is_zero_at(xi))
    }

    pub fn is_radial(&self) -> bool {
        !self.terms.is_empty() && self.terms.iter().all(|(_, b)| b.is_radial())
    }

    pub fn has_zeros(&self) -> bool {
        self.terms
            .iter()
            .all(|(_, b)| matches!(b, Base::BSpline { .. } | Base::Sinc))
    }

    /// Whether the density has the B-spline lattice zeros.
    pub fn has_lattice_zeros(&self) -> bool {
        self.terms
            .iter()
            .all(|(_, b)| matches!(b, Base::BSpline { .. }))
            && !self.terms.is_empty()
    }

    pub fn support_kind(&self) -> SupportKind {
        if self.terms.iter().all(|(_, b)| matches!(b, Base::Sinc)) && !self.terms.is_empty() {
            SupportKind::CompactSupport { half_width: PI }
        } else if self.has_zeros() {
            SupportKind::ZeroSet {
                description: "ξ with some coordinate in 2πℤ∖{0}".into(),
            }
        } else {
            SupportKind::EverywherePositive
        }
    }

    pub fn asymptotic_class(&self) -> AsymptoticClass {
        let d = self.dim as f64;
        let class = |b: &Base| match *b {
            Base::Gaussian { .. } => AsymptoticClass::GaussianDecay,
            Base::Imq { .. } => AsymptoticClass::ExponentialDecay,
            Base::ExpL1 { .. } => AsymptoticClass::PolyDecay(2.0),
            Base::ExpL2 { .. } => AsymptoticClass::PolyDecay(d + 1.0),
            Base::BSpline { p } => AsymptoticClass::PolyDecay(p as f64),
            Base::Anova { .. } => AsymptoticClass::AnovaMixed,
            Base::Sinc => AsymptoticClass::Compact,
        };
        let rank = |c: &AsymptoticClass| match *c {
            AsymptoticClass::Compact => (0, 0.0),
            AsymptoticClass::GaussianDecay => (1, 0.0),
            AsymptoticClass::ExponentialDecay => (2, 0.0),
            AsymptoticClass::PolyDecay(o) => (3, -o),
            AsymptoticClass::AnovaMixed => (4, 0.0),
        };
        // the slowest-decaying term dominates a sum
        self.terms
            .iter()
            .map(|(_, b)| class(b))
            .max_by(|a, b| rank(a).partial_cmp(&rank(b)).unwrap())
            .unwrap_or(AsymptoticClass::Compact)
    }

    /// The inverse multiquadric density through the Bessel form
    /// 2^{1−β} / ((2π)^{d/2} Γ(β)) · r^{β−d/2} K_{β−d/2}(r), for cross-checking.
    pub fn ln_eval_bessel(&self, xi: &[f64]) -> Result<f64> {
        self.check(xi)?;
        let [(w, Base::Imq { beta })] = self.terms[..] else {
            return Err(Error::UnsupportedFamily(
                "Bessel form exists for the inverse multiquadric only".into(),
            ));
        };
        let d = xi.len() as f64;
        let r = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
        if r == 0.0 {
            return Err(Error::Domain {
                function: "bessel form at the origin",
                value: 0.0,
            });
        }
        let nu = beta - d / 2.0;
        Ok(w.ln() + (1.0 - beta) * std::f64::consts::LN_2
            - d / 2.0 * (2.0 * PI).ln()
            - ln_gamma(beta)
            + nu * r.ln()
            + ln_bessel_k(nu, r, &self.cfg)?)
    }
}

fn collect(spec: &KernelSpec, weight: f64, out: &mut Vec<(f64, Base)>) -> Result<()> {
    let base = match spec.family() {
        Family::Gaussian { gamma } => Base::Gaussian { gamma: *gamma },
        Family::ExpL1 { sigma } => Base::ExpL1 { sigma: *sigma },
        Family::ExpL2 { sigma } => Base::ExpL2 { sigma: *sigma },
        Family::InverseMultiquadric { beta } => Base::Imq { beta: *beta },
        Family::BSpline { p } => Base::BSpline { p: *p },
        Family::Anova { tau } => Base::Anova { tau: *tau },
        Family::Sinc => Base::Sinc,
        Family::Sum(terms) => {
            for t in terms {
                collect(t, weight, out)?;
            }
            return Ok(());
        }
        Family::Scaled { c, inner } => return collect(inner, weight * c, out),
        other => {
            let name = match other {
                Family::HilbertSchmidt(_) => "Hilbert-Schmidt",
                Family::Product(..) => "product",
                Family::TensorProduct(..) => "tensor product",
                Family::ExpComposed(_) => "exponential composition",
                _ => "series composition",
            };
            return Err(Error::UnsupportedFamily(format!(
                "{name} kernels carry no spectral density"
            )));
        }
    };
    out.push((weight, base));
    Ok(())
}
