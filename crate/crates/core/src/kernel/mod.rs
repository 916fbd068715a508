//! Kernel catalog: symbolic specs, pointwise evaluation, Bochner densities and
//! Laplace-transform representations.

mod density;
mod laplace;
mod record;

pub use density::{AsymptoticClass, SpectralDensity, SupportKind};
pub use laplace::{LaplaceDensity, LaplaceRepresentation};
pub use record::{parse_mini, parse_spec_file, SpecRecord};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert_schmidt::{hs_eval, CoefficientSequence, FeatureSequence, IndexSet};

/// The seven translation-invariant families of the catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseFamily {
    BSpline,
    Gaussian,
    ExpL1,
    ExpL2,
    InverseMultiquadric,
    Anova,
    Sinc,
}

impl BaseFamily {
    /// Row/column order of the inclusion table.
    pub const TABLE: [BaseFamily; 6] = [
        BaseFamily::BSpline,
        BaseFamily::Gaussian,
        BaseFamily::ExpL1,
        BaseFamily::ExpL2,
        BaseFamily::InverseMultiquadric,
        BaseFamily::Anova,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            BaseFamily::BSpline => "B",
            BaseFamily::Gaussian => "G",
            BaseFamily::ExpL1 => "E",
            BaseFamily::ExpL2 => "ℰ",
            BaseFamily::InverseMultiquadric => "M",
            BaseFamily::Anova => "A",
            BaseFamily::Sinc => "sinc",
        }
    }
}

/// A Hilbert–Schmidt kernel: coefficients, features and the truncation used
/// for pointwise evaluation of infinite rules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HsKernel {
    pub coeffs: CoefficientSequence,
    pub features: FeatureSequence,
    pub truncation: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Gaussian { gamma: f64 },
    ExpL1 { sigma: f64 },
    /// exp(−‖x−y‖₂/σ)
    ExpL2 { sigma: f64 },
    InverseMultiquadric { beta: f64 },
    BSpline { p: u32 },
    Anova { tau: f64 },
    Sinc,
    HilbertSchmidt(HsKernel),
    Sum(Vec<KernelSpec>),
    Scaled { c: f64, inner: Box<KernelSpec> },
    Product(Box<KernelSpec>, Box<KernelSpec>),
    /// Factors act on the first `a.dim()` and the remaining coordinates.
    TensorProduct(Box<KernelSpec>, Box<KernelSpec>),
    ExpComposed(Box<KernelSpec>),
    /// Σ a_j K^j
    SeriesComposed { coeffs: Vec<f64>, inner: Box<KernelSpec> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpec {
    family: Family,
    dim: usize,
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must be positive, got {v}")))
    }
}

impl KernelSpec {
    pub fn new(family: Family, dim: usize) -> Result<Self> {
        let spec = Self { family, dim };
        spec.validate()?;
        Ok(spec)
    }

    pub fn gaussian(gamma: f64, dim: usize) -> Result<Self> {
        Self::new(Family::Gaussian { gamma }, dim)
    }

    pub fn expl1(sigma: f64, dim: usize) -> Result<Self> {
        Self::new(Family::ExpL1 { sigma }, dim)
    }

    pub fn expl2(sigma: f64, dim: usize) -> Result<Self> {
        Self::new(Family::ExpL2 { sigma }, dim)
    }

    pub fn inverse_multiquadric(beta: f64, dim: usize) -> Result<Self> {
        Self::new(Family::InverseMultiquadric { beta }, dim)
    }

    pub fn bspline(p: u32, dim: usize) -> Result<Self> {
        Self::new(Family::BSpline { p }, dim)
    }

    pub fn anova(tau: f64, dim: usize) -> Result<Self> {
        Self::new(Family::Anova { tau }, dim)
    }

    pub fn sinc(dim: usize) -> Result<Self> {
        Self::new(Family::Sinc, dim)
    }

    pub fn hilbert_schmidt(kernel: HsKernel, dim: usize) -> Result<Self> {
        Self::new(Family::HilbertSchmidt(kernel), dim)
    }

    pub fn sum(terms: Vec<KernelSpec>) -> Result<Self> {
        let dim = terms.first().map_or(1, |t| t.dim);
        Self::new(Family::Sum(terms), dim)
    }

    /// The zero kernel, an empty sum.
    pub fn zero(dim: usize) -> Self {
        Self {
            family: Family::Sum(Vec::new()),
            dim,
        }
    }

    pub fn scaled(c: f64, inner: KernelSpec) -> Result<Self> {
        let dim = inner.dim;
        Self::new(
            Family::Scaled {
                c,
                inner: Box::new(inner),
            },
            dim,
        )
    }

    pub fn product(a: KernelSpec, b: KernelSpec) -> Result<Self> {
        let dim = a.dim;
        Self::new(Family::Product(Box::new(a), Box::new(b)), dim)
    }

    pub fn tensor(a: KernelSpec, b: KernelSpec) -> Result<Self> {
        let dim = a.dim + b.dim;
        Self::new(Family::TensorProduct(Box::new(a), Box::new(b)), dim)
    }

    pub fn exp(inner: KernelSpec) -> Result<Self> {
        let dim = inner.dim;
        Self::new(Family::ExpComposed(Box::new(inner)), dim)
    }

    pub fn series(coeffs: Vec<f64>, inner: KernelSpec) -> Result<Self> {
        let dim = inner.dim;
        Self::new(
            Family::SeriesComposed {
                coeffs,
                inner: Box::new(inner),
            },
            dim,
        )
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn base_family(&self) -> Option<BaseFamily> {
        Some(match self.family {
            Family::Gaussian { .. } => BaseFamily::Gaussian,
            Family::ExpL1 { .. } => BaseFamily::ExpL1,
            Family::ExpL2 { .. } => BaseFamily::ExpL2,
            Family::InverseMultiquadric { .. } => BaseFamily::InverseMultiquadric,
            Family::BSpline { .. } => BaseFamily::BSpline,
            Family::Anova { .. } => BaseFamily::Anova,
            Family::Sinc => BaseFamily::Sinc,
            _ => return None,
        })
    }

    fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::invalid("dim", "dimension must be at least 1"));
        }
        let same_dim = |k: &KernelSpec| {
            if k.dim == self.dim {
                Ok(())
            } else {
                Err(Error::DimensionMismatch {
                    expected: self.dim,
                    got: k.dim,
                })
            }
        };
        match &self.family {
            Family::Gaussian { gamma } => positive("gamma", *gamma),
            Family::ExpL1 { sigma } | Family::ExpL2 { sigma } => positive("sigma", *sigma),
            Family::InverseMultiquadric { beta } => positive("beta", *beta),
            Family::Anova { tau } => positive("tau", *tau),
            Family::BSpline { p } => {
                if *p >= 2 && p % 2 == 0 {
                    Ok(())
                } else {
                    Err(Error::invalid("p", format!("must be even and at least 2, got {p}")))
                }
            }
            Family::Sinc => Ok(()),
            Family::HilbertSchmidt(hs) => {
                hs.features.validate()?;
                match (&hs.features, hs.coeffs.index_set()) {
                    (FeatureSequence::ComplexExponentials { frequencies: None }, IndexSet::Lattice { dim })
                        if dim != self.dim =>
                    {
                        Err(Error::DimensionMismatch {
                            expected: self.dim,
                            got: dim,
                        })
                    }
                    (FeatureSequence::ComplexExponentials { frequencies: None }, IndexSet::Naturals | IndexSet::Range { .. })
                        if self.dim != 1 =>
                    {
                        Err(Error::DimensionMismatch {
                            expected: 1,
                            got: self.dim,
                        })
                    }
                    _ => Ok(()),
                }
            }
            Family::Sum(terms) => terms.iter().try_for_each(same_dim),
            Family::Scaled { c, inner } => {
                positive("c", *c)?;
                same_dim(inner)
            }
            Family::Product(a, b) => {
                same_dim(a)?;
                same_dim(b)
            }
            Family::TensorProduct(a, b) => {
                if a.dim + b.dim == self.dim {
                    Ok(())
                } else {
                    Err(Error::DimensionMismatch {
                        expected: self.dim,
                        got: a.dim + b.dim,
                    })
                }
            }
            Family::ExpComposed(inner) => same_dim(inner),
            Family::SeriesComposed { coeffs, inner } => {
                if let Some((index, &value)) = coeffs.iter().enumerate().find(|(_, v)| !(**v >= 0.0)) {
                    return Err(Error::NegativeCoefficient { index, value });
                }
                same_dim(inner)
            }
        }
    }

    /// Whether K(x,y) is real for all x, y.
    pub fn is_real(&self) -> bool {
        match &self.family {
            Family::HilbertSchmidt(hs) => matches!(hs.features, FeatureSequence::Monomials),
            Family::Sum(t) => t.iter().all(|k| k.is_real()),
            Family::Scaled { inner, .. } | Family::ExpComposed(inner) | Family::SeriesComposed { inner, .. } => {
                inner.is_real()
            }
            Family::Product(a, b) | Family::TensorProduct(a, b) => a.is_real() && b.is_real(),
            _ => true,
        }
    }

    /// Spectral density is radial for these families (and sums/scalings of them).
    pub fn is_radial(&self) -> bool {
        match &self.family {
            Family::Gaussian { .. } | Family::ExpL2 { .. } | Family::InverseMultiquadric { .. } => true,
            Family::Sum(t) => !t.is_empty() && t.iter().all(|k| k.is_radial()),
            Family::Scaled { inner, .. } => inner.is_radial(),
            _ => false,
        }
    }

    fn check_points(&self, x: &[f64], y: &[f64]) -> Result<()> {
        for p in [x, y] {
            if p.len() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    got: p.len(),
                });
            }
        }
        Ok(())
    }

    /// K(x, y) for real-valued kernels.
    pub fn eval(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.check_points(x, y)?;
        if !self.is_real() {
            return Err(Error::UnsupportedFamily(
                "complex-valued kernel; use eval_complex".into(),
            ));
        }
        self.eval_real(x, y)
    }

    fn eval_real(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        let sq = || x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
        Ok(match &self.family {
            Family::Gaussian { gamma } => (-sq() / gamma).exp(),
            Family::ExpL1 { sigma } => {
                (-x.iter().zip(y).map(|(a, b)| (a - b).abs()).sum::<f64>() / sigma).exp()
            }
            Family::ExpL2 { sigma } => (-sq().sqrt() / sigma).exp(),
            Family::InverseMultiquadric { beta } => (1.0 + sq()).powf(-beta),
            Family::BSpline { p } => x
                .iter()
                .zip(y)
                .map(|(a, b)| centred_bspline(*p, a - b))
                .product(),
            Family::Anova { tau } => x
                .iter()
                .zip(y)
                .map(|(a, b)| (-(a - b) * (a - b) / tau).exp())
                .sum(),
            Family::Sinc => x
                .iter()
                .zip(y)
                .map(|(a, b)| {
                    let t = std::f64::consts::PI * (a - b);
                    if t.abs() < 1e-8 {
                        1.0 - t * t / 6.0
                    } else {
                        t.sin() / t
                    }
                })
                .product(),
            Family::HilbertSchmidt(hs) => hs_eval(&hs.coeffs, &hs.features, x, y, hs.truncation)?.value.re,
            Family::Sum(terms) => {
                let mut s = 0.0;
                for k in terms {
                    s += k.eval_real(x, y)?;
                }
                s
            }
            Family::Scaled { c, inner } => c * inner.eval_real(x, y)?,
            Family::Product(a, b) => a.eval_real(x, y)? * b.eval_real(x, y)?,
            Family::TensorProduct(a, b) => {
                let (xa, xb) = x.split_at(a.dim);
                let (ya, yb) = y.split_at(a.dim);
                a.eval_real(xa, ya)? * b.eval_real(xb, yb)?
            }
            Family::ExpComposed(inner) => inner.eval_real(x, y)?.exp(),
            Family::SeriesComposed { coeffs, inner } => {
                let k = inner.eval_real(x, y)?;
                coeffs.iter().rev().fold(0.0, |acc, a| acc * k + a)
            }
        })
    }

    /// K(x, y) for any kernel, including Hilbert–Schmidt kernels with complex
    /// exponential features.
    pub fn eval_complex(&self, x: &[f64], y: &[f64]) -> Result<Complex64> {
        self.check_points(x, y)?;
        self.eval_c(x, y)
    }

    fn eval_c(&self, x: &[f64], y: &[f64]) -> Result<Complex64> {
        if self.is_real() {
            return Ok(Complex64::new(self.eval_real(x, y)?, 0.0));
        }
        Ok(match &self.family {
            Family::HilbertSchmidt(hs) => hs_eval(&hs.coeffs, &hs.features, x, y, hs.truncation)?.value,
            Family::Sum(terms) => {
                let mut s = Complex64::new(0.0, 0.0);
                for k in terms {
                    s += k.eval_c(x, y)?;
                }
                s
            }
            Family::Scaled { c, inner } => inner.eval_c(x, y)? * c,
            Family::Product(a, b) => a.eval_c(x, y)? * b.eval_c(x, y)?,
            Family::TensorProduct(a, b) => {
                let (xa, xb) = x.split_at(a.dim);
                let (ya, yb) = y.split_at(a.dim);
                a.eval_c(xa, ya)? * b.eval_c(xb, yb)?
            }
            Family::ExpComposed(inner) => inner.eval_c(x, y)?.exp(),
            Family::SeriesComposed { coeffs, inner } => {
                let k = inner.eval_c(x, y)?;
                coeffs
                    .iter()
                    .rev()
                    .fold(Complex64::new(0.0, 0.0), |acc, a| acc * k + a)
            }
            _ => unreachable!("base families are real"),
        })
    }

    pub fn spectral_density(&self) -> Result<SpectralDensity> {
        SpectralDensity::of(self)
    }

    pub fn laplace_representation(&self) -> Result<LaplaceRepresentation> {
        LaplaceRepresentation::of(self)
    }

    pub fn to_record(&self) -> SpecRecord {
        SpecRecord::from_spec(self)
    }
}

/// Centred cardinal B-spline of order p (support [−p/2, p/2], unit integral),
/// evaluated with the Cox–de Boor recursion on uniform knots.
pub fn centred_bspline(p: u32, x: f64) -> f64 {
    let p = p as usize;
    let y = x + p as f64 / 2.0;
    if !(y > 0.0 && y < p as f64) {
        return 0.0;
    }
    // n[i] holds N_k(y − i), starting from the order-1 indicator functions
    let mut n = vec![0.0; p + 1];
    let cell = y.floor() as usize;
    n[cell] = 1.0;
    for k in 2..=p {
        let kf = k as f64;
        for i in 0..p {
            let t = y - i as f64;
            n[i] = (t * n[i] + (kf - t) * n[i + 1]) / (kf - 1.0);
        }
    }
    n[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn catalog_examples() {
        let g = KernelSpec::gaussian(1.0, 3).unwrap();
        assert_eq!(g.eval(&[0.1, 0.2, 0.3], &[0.1, 0.2, 0.3]).unwrap(), 1.0);
        let e = KernelSpec::expl1(1.0, 2).unwrap();
        assert!((e.eval(&[1.0, 0.0], &[0.0, 0.0]).unwrap() - (-1.0f64).exp()).abs() < 1e-16);
        let m = KernelSpec::inverse_multiquadric(2.0, 3).unwrap();
        assert_eq!(m.eval(&[1.0, 1.0, 1.0], &[0.0, 0.0, 0.0]).unwrap(), 1.0 / 16.0);
    }

    #[test]
    fn constructor_validation() {
        assert!(KernelSpec::gaussian(0.0, 1).is_err());
        assert!(KernelSpec::bspline(3, 1).is_err());
        assert!(KernelSpec::bspline(0, 1).is_err());
        assert!(KernelSpec::gaussian(1.0, 0).is_err());
        let a = KernelSpec::gaussian(1.0, 1).unwrap();
        let b = KernelSpec::gaussian(1.0, 2).unwrap();
        assert!(matches!(
            KernelSpec::sum(vec![a.clone(), b.clone()]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert_eq!(KernelSpec::tensor(a.clone(), b).unwrap().dim(), 3);
        assert!(matches!(
            KernelSpec::series(vec![1.0, -0.5], a),
            Err(Error::NegativeCoefficient { index: 1, .. })
        ));
    }

    #[test]
    fn dimension_mismatch() {
        let g = KernelSpec::gaussian(1.0, 2).unwrap();
        assert!(matches!(g.eval(&[0.0], &[0.0, 1.0]), Err(Error::DimensionMismatch { .. })));
    }

    /// (y)_+^{p-1} expansion of the cardinal B-spline, independent of Cox–de Boor.
    fn truncated_power_bspline(p: u32, x: f64) -> f64 {
        let y = x + p as f64 / 2.0;
        let mut s = 0.0;
        let mut binom = 1.0;
        for k in 0..=p {
            let t = y - k as f64;
            if t > 0.0 {
                s += if k % 2 == 0 { 1.0 } else { -1.0 } * binom * t.powi(p as i32 - 1);
            }
            binom = binom * (p - k) as f64 / (k + 1) as f64;
        }
        s / (1..p).map(|v| v as f64).product::<f64>()
    }

    #[test]
    fn bspline_values() {
        assert_eq!(centred_bspline(2, 0.0), 1.0);
        assert!((centred_bspline(4, 0.0) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(centred_bspline(4, 2.0), 0.0);
        for p in [2, 4, 6, 8] {
            let mut x = -5.0;
            while x < 5.0 {
                let a = centred_bspline(p, x);
                let b = truncated_power_bspline(p, x);
                assert!((a - b).abs() < 1e-12, "p={p} x={x}: {a} vs {b}");
                x += 0.173;
            }
        }
    }

    #[test]
    fn sinc_kernel_value() {
        let s = KernelSpec::sinc(1).unwrap();
        assert!((s.eval(&[0.5], &[0.0]).unwrap() - 2.0 / std::f64::consts::PI).abs() < 1e-15);
        assert_eq!(s.eval(&[1.0], &[0.0]).unwrap().abs() < 1e-15, true);
    }

    #[test]
    fn combinators() {
        let g1 = KernelSpec::gaussian(1.0, 1).unwrap();
        let g2 = KernelSpec::gaussian(2.0, 1).unwrap();
        let (x, y) = ([0.3], [-0.4]);
        let (a, b) = (g1.eval(&x, &y).unwrap(), g2.eval(&x, &y).unwrap());
        let sum = KernelSpec::sum(vec![g1.clone(), g2.clone()]).unwrap();
        assert!((sum.eval(&x, &y).unwrap() - (a + b)).abs() < 1e-15);
        let prod = KernelSpec::product(g1.clone(), g2.clone()).unwrap();
        assert!((prod.eval(&x, &y).unwrap() - a * b).abs() < 1e-15);
        let e = KernelSpec::exp(g1.clone()).unwrap();
        assert!((e.eval(&x, &y).unwrap() - a.exp()).abs() < 1e-15);
        let s = KernelSpec::series(vec![1.0, 1.0], g1.clone()).unwrap();
        assert!((s.eval(&x, &y).unwrap() - (1.0 + a)).abs() < 1e-15);
        let t = KernelSpec::tensor(g1, g2).unwrap();
        assert!((t.eval(&[0.3, 0.3], &[-0.4, -0.4]).unwrap() - a * b).abs() < 1e-15);
        assert_eq!(KernelSpec::zero(2).eval(&[1.0, 2.0], &[0.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn complex_hs_kernel_is_hermitian() {
        let hs = HsKernel {
            coeffs: CoefficientSequence::finite(vec![1.0, 0.5, 0.25]),
            features: FeatureSequence::ComplexExponentials {
                frequencies: Some(vec![vec![0.0], vec![1.0], vec![2.5]]),
            },
            truncation: 1,
        };
        let k = KernelSpec::hilbert_schmidt(hs, 1).unwrap();
        assert!(!k.is_real());
        assert!(k.eval(&[0.1], &[0.2]).is_err());
        let a = k.eval_complex(&[0.1], &[0.7]).unwrap();
        let b = k.eval_complex(&[0.7], &[0.1]).unwrap();
        assert!((a - b.conj()).norm() < 1e-15);
    }

    fn base_specs(d: usize) -> Vec<KernelSpec> {
        vec![
            KernelSpec::gaussian(0.7, d).unwrap(),
            KernelSpec::expl1(1.3, d).unwrap(),
            KernelSpec::expl2(0.8, d).unwrap(),
            KernelSpec::inverse_multiquadric(1.5, d).unwrap(),
            KernelSpec::bspline(4, d).unwrap(),
            KernelSpec::anova(1.1, d).unwrap(),
            KernelSpec::sinc(d).unwrap(),
        ]
    }

    proptest! {
        #[test]
        fn symmetry_and_translation_invariance(
            d in 1usize..4,
            x in prop::collection::vec(-3.0f64..3.0, 3),
            y in prop::collection::vec(-3.0f64..3.0, 3),
            a in prop::collection::vec(-10.0f64..10.0, 3),
        ) {
            let (x, y, a) = (&x[..d], &y[..d], &a[..d]);
            let xs: Vec<f64> = x.iter().zip(a).map(|(p, s)| p + s).collect();
            let ys: Vec<f64> = y.iter().zip(a).map(|(p, s)| p + s).collect();
            for k in base_specs(d) {
                let kxy = k.eval(x, y).unwrap();
                prop_assert!((kxy - k.eval(y, x).unwrap()).abs() <= 1e-13);
                prop_assert!((k.eval(&xs, &ys).unwrap() - kxy).abs() < 1e-9);
                prop_assert!(k.eval(x, x).unwrap() > 0.0);
            }
        }
    }
}
