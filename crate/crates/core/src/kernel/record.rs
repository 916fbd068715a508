use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Family, HsKernel, KernelSpec};
use crate::error::{Error, Result};
use crate::hilbert_schmidt::{CoefficientSequence, FeatureSequence};

/// Config-file form of a kernel spec. Children inherit `dim` when omitted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecRecord {
    pub family: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<SpecRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequence: Option<CoefficientSequence>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub features: Option<FeatureSequence>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
}

impl SpecRecord {
    fn named(family: &str, dim: usize) -> Self {
        Self {
            family: family.into(),
            params: BTreeMap::new(),
            dim: Some(dim),
            children: Vec::new(),
            coeffs: None,
            sequence: None,
            features: None,
            truncation: None,
        }
    }

    fn param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.into(), value);
        self
    }

    pub(super) fn from_spec(spec: &KernelSpec) -> Self {
        let d = spec.dim();
        match spec.family() {
            Family::Gaussian { gamma } => Self::named("gaussian", d).param("gamma", *gamma),
            Family::ExpL1 { sigma } => Self::named("expl1", d).param("sigma", *sigma),
            Family::ExpL2 { sigma } => Self::named("expl2", d).param("sigma", *sigma),
            Family::InverseMultiquadric { beta } => Self::named("imq", d).param("beta", *beta),
            Family::BSpline { p } => Self::named("bspline", d).param("p", *p as f64),
            Family::Anova { tau } => Self::named("anova", d).param("tau", *tau),
            Family::Sinc => Self::named("sinc", d),
            Family::HilbertSchmidt(hs) => Self {
                sequence: Some(hs.coeffs.clone()),
                features: Some(hs.features.clone()),
                truncation: Some(hs.truncation),
                ..Self::named("hilbert_schmidt", d)
            },
            Family::Sum(terms) => Self {
                children: terms.iter().map(Self::from_spec).collect(),
                ..Self::named("sum", d)
            },
            Family::Scaled { c, inner } => Self {
                children: vec![Self::from_spec(inner)],
                ..Self::named("scaled", d).param("c", *c)
            },
            Family::Product(a, b) => Self {
                children: vec![Self::from_spec(a), Self::from_spec(b)],
                ..Self::named("product", d)
            },
            Family::TensorProduct(a, b) => Self {
                children: vec![Self::from_spec(a), Self::from_spec(b)],
                ..Self::named("tensor", d)
            },
            Family::ExpComposed(inner) => Self {
                children: vec![Self::from_spec(inner)],
                ..Self::named("exp", d)
            },
            Family::SeriesComposed { coeffs, inner } => Self {
                children: vec![Self::from_spec(inner)],
                coeffs: Some(coeffs.clone()),
                ..Self::named("series", d)
            },
        }
    }

    /// Builds the spec; `path` locates this record inside a file for error messages.
    pub fn to_spec(&self, default_dim: Option<usize>) -> Result<KernelSpec> {
        self.build(default_dim, "$")
    }

    fn build(&self, default_dim: Option<usize>, path: &str) -> Result<KernelSpec> {
        let err = |message: String| Error::Parse {
            position: path.to_string(),
            message,
        };
        let dim = self.dim.or(default_dim);
        let need_dim = || dim.ok_or_else(|| err(format!("`{}` needs a dimension", self.family)));
        let get = |key: &str| {
            self.params
                .get(key)
                .copied()
                .ok_or_else(|| err(format!("`{}` needs parameter `{key}`", self.family)))
        };
        let child = |i: usize| -> Result<KernelSpec> {
            self.children
                .get(i)
                .ok_or_else(|| err(format!("`{}` needs child {i}", self.family)))?
                .build(dim, &format!("{path}.children[{i}]"))
        };
        let arity = |n: usize| {
            if self.children.len() == n {
                Ok(())
            } else {
                Err(err(format!(
                    "`{}` takes {n} children, got {}",
                    self.family,
                    self.children.len()
                )))
            }
        };
        let allowed: &[&str] = match canonical(&self.family) {
            Some("gaussian") => &["gamma"],
            Some("expl1") | Some("expl2") => &["sigma"],
            Some("imq") => &["beta"],
            Some("bspline") => &["p"],
            Some("anova") => &["tau"],
            Some("scaled") => &["c"],
            _ => &[],
        };
        if let Some(k) = self.params.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(err(format!("unknown parameter `{k}` for `{}`", self.family)));
        }
        let annotate = |e: Error| match e {
            Error::Parse { .. } => e,
            other if other.is_input_error() => err(other.to_string()),
            other => other,
        };
        let spec = match canonical(&self.family) {
            Some("gaussian") => KernelSpec::gaussian(get("gamma")?, need_dim()?),
            Some("expl1") => KernelSpec::expl1(get("sigma")?, need_dim()?),
            Some("expl2") => KernelSpec::expl2(get("sigma")?, need_dim()?),
            Some("imq") => KernelSpec::inverse_multiquadric(get("beta")?, need_dim()?),
            Some("bspline") => {
                let p = get("p")?;
                if p.fract() != 0.0 || p < 0.0 {
                    return Err(err(format!("`p` must be an even integer, got {p}")));
                }
                KernelSpec::bspline(p as u32, need_dim()?)
            }
            Some("anova") => KernelSpec::anova(get("tau")?, need_dim()?),
            Some("sinc") => KernelSpec::sinc(need_dim()?),
            Some("hilbert_schmidt") => {
                let coeffs = self
                    .sequence
                    .clone()
                    .ok_or_else(|| err("`hilbert_schmidt` needs a `sequence`".into()))?;
                let features = self
                    .features
                    .clone()
                    .ok_or_else(|| err("`hilbert_schmidt` needs `features`".into()))?;
                KernelSpec::hilbert_schmidt(
                    HsKernel {
                        coeffs,
                        features,
                        truncation: self.truncation.unwrap_or(64),
                    },
                    need_dim()?,
                )
            }
            Some("sum") => {
                let terms = (0..self.children.len()).map(child).collect::<Result<Vec<_>>>()?;
                if terms.is_empty() {
                    Ok(KernelSpec::zero(need_dim()?))
                } else {
                    KernelSpec::sum(terms)
                }
            }
            Some("scaled") => {
                arity(1)?;
                KernelSpec::scaled(get("c")?, child(0)?)
            }
            Some("product") => {
                arity(2)?;
                KernelSpec::product(child(0)?, child(1)?)
            }
            Some("tensor") => {
                arity(2)?;
                // children of a tensor product carry their own dimensions
                let a = self.children[0].build(None, &format!("{path}.children[0]"))?;
                let b = self.children[1].build(None, &format!("{path}.children[1]"))?;
                KernelSpec::tensor(a, b)
            }
            Some("exp") => {
                arity(1)?;
                KernelSpec::exp(child(0)?)
            }
            Some("series") => {
                arity(1)?;
                let coeffs = self
                    .coeffs
                    .clone()
                    .ok_or_else(|| err("`series` needs `coeffs`".into()))?;
                KernelSpec::series(coeffs, child(0)?)
            }
            _ => return Err(err(format!("unknown kernel family `{}`", self.family))),
        }
        .map_err(annotate)?;
        if let Some(d) = self.dim {
            if d != spec.dim() {
                return Err(err(format!("declared dim {d} but the kernel acts on dimension {}", spec.dim())));
            }
        }
        Ok(spec)
    }
}

fn canonical(name: &str) -> Option<&'static str> {
    Some(match name.to_ascii_lowercase().replace('-', "_").as_str() {
        "gaussian" | "gauss" => "gaussian",
        "expl1" | "exp_l1" | "laplace_l1" => "expl1",
        "expl2" | "exp_l2" => "expl2",
        "imq" | "inverse_multiquadric" | "multiquadric" => "imq",
        "bspline" | "b_spline" => "bspline",
        "anova" => "anova",
        "sinc" => "sinc",
        "hilbert_schmidt" | "hs" => "hilbert_schmidt",
        "sum" => "sum",
        "scaled" | "scale" => "scaled",
        "product" => "product",
        "tensor" | "tensor_product" => "tensor",
        "exp" | "exp_composed" => "exp",
        "series" | "series_composed" => "series",
        _ => return None,
    })
}

/// Parses the flag mini-language `family:key=val,key=val`, e.g.
/// `gaussian:gamma=2` or `sinc`.
pub fn parse_mini(text: &str, dim: usize) -> Result<KernelSpec> {
    let err = |pos: usize, message: String| Error::Parse {
        position: format!("column {}", pos + 1),
        message,
    };
    let text_trim = text.trim();
    let offset = text.len() - text.trim_start().len();
    let (family, rest) = match text_trim.split_once(':') {
        Some((f, r)) => (f, Some(r)),
        None => (text_trim, None),
    };
    if family.is_empty() {
        return Err(err(offset, "missing kernel family".into()));
    }
    let mut record = SpecRecord::named(family, dim);
    if canonical(family).is_none() {
        return Err(err(offset, format!("unknown kernel family `{family}`")));
    }
    if let Some(rest) = rest {
        let mut pos = offset + family.len() + 1;
        for item in rest.split(',') {
            let Some((key, value)) = item.split_once('=') else {
                return Err(err(pos, format!("expected key=value, got `{item}`")));
            };
            let key = key.trim();
            let key = match key {
                "sigma1" | "sigma2" | "sigma_1" | "sigma_2" => "sigma",
                k => k,
            };
            let v: f64 = value
                .trim()
                .parse()
                .map_err(|_| err(pos + item.find('=').unwrap() + 1, format!("`{value}` is not a number")))?;
            if record.params.insert(key.to_string(), v).is_some() {
                return Err(err(pos, format!("parameter `{key}` given twice")));
            }
            pos += item.len() + 1;
        }
    }
    record.build(Some(dim), "flag")
}

/// Parses a JSON spec record; `default_dim` fills in records without `dim`.
pub fn parse_spec_file(text: &str, default_dim: Option<usize>) -> Result<KernelSpec> {
    let record: SpecRecord = serde_json::from_str(text).map_err(|e| Error::Parse {
        position: format!("line {}, column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    record.to_spec(default_dim)
}
