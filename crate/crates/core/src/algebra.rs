//! Propagation of λ through sums, scalings, products, tensor products,
//! pointwise limits and power series of kernels.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert_schmidt::hs_inclusion;
use crate::inclusion::{decide, InclusionVerdict, Lambda, Method, Provenance, Relation};
use crate::kernel::{Family, KernelSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Exact,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaBound {
    pub kind: BoundKind,
    pub value: f64,
}

impl LambdaBound {
    pub fn of(v: &InclusionVerdict) -> Option<Self> {
        if !v.relation.holds() {
            return None;
        }
        match v.lambda {
            Lambda::Exact(value) => Some(Self {
                kind: BoundKind::Exact,
                value,
            }),
            Lambda::UpperBound(value) => Some(Self {
                kind: BoundKind::Upper,
                value,
            }),
            _ => None,
        }
    }

    /// Exact only if both are exact.
    pub fn join(self, other: Self, value: f64) -> Self {
        let kind = if self.kind == BoundKind::Exact && other.kind == BoundKind::Exact {
            BoundKind::Exact
        } else {
            BoundKind::Upper
        };
        Self { kind, value }
    }

    pub fn to_lambda(self) -> Lambda {
        match self.kind {
            BoundKind::Exact => Lambda::Exact(self.value),
            BoundKind::Upper => Lambda::UpperBound(self.value),
        }
    }
}

fn provenance_of(v: &InclusionVerdict) -> Provenance {
    v.provenance.clone().unwrap_or_else(|| {
        let rule = serde_json::to_value(v.method)
            .ok()
            .and_then(|m| m.as_str().map(String::from))
            .unwrap_or_default();
        Provenance::leaf(rule, v.lambda)
    })
}

fn propagated(rule: &str, lambda: Lambda, inputs: &[&InclusionVerdict]) -> InclusionVerdict {
    let relation = if lambda.value().is_some() {
        Relation::Included
    } else {
        Relation::Unknown
    };
    InclusionVerdict {
        relation,
        lambda,
        method: Method::Propagated,
        witness: None,
        provenance: Some(Provenance {
            rule: rule.into(),
            lambda,
            inputs: inputs.iter().map(|v| provenance_of(v)).collect(),
        }),
    }
}

fn binary(rule: &str, v1: &InclusionVerdict, v2: &InclusionVerdict, op: impl Fn(f64, f64) -> f64) -> InclusionVerdict {
    match (LambdaBound::of(v1), LambdaBound::of(v2)) {
        (Some(a), Some(b)) => propagated(rule, Lambda::UpperBound(op(a.value, b.value)), &[v1, v2]),
        _ => propagated(rule, Lambda::NotApplicable, &[v1, v2]),
    }
}

/// (K₁+K₂, G₁+G₂) from (K₁,G₁) and (K₂,G₂): λ ≤ max(λ₁, λ₂).
pub fn combine_sum(v1: &InclusionVerdict, v2: &InclusionVerdict) -> InclusionVerdict {
    binary("sum", v1, v2, f64::max)
}

/// (K₁+K₂, G) from (K₁,G) and (K₂,G): λ ≤ λ₁ + λ₂.
pub fn combine_sum_same_target(v1: &InclusionVerdict, v2: &InclusionVerdict) -> InclusionVerdict {
    binary("sum_same_target", v1, v2, |a, b| a + b)
}

/// (aK, bG) from (K,G): λ scales by a/b exactly, and the spaces do not change.
pub fn combine_scale(a: f64, b: f64, v: &InclusionVerdict) -> Result<InclusionVerdict> {
    for (name, x) in [("a", a), ("b", b)] {
        if !(x > 0.0 && x.is_finite()) {
            return Err(Error::invalid(name, format!("must be positive, got {x}")));
        }
    }
    let lambda = match v.lambda {
        Lambda::Exact(l) => Lambda::Exact(a / b * l),
        Lambda::UpperBound(l) => Lambda::UpperBound(a / b * l),
        other => other,
    };
    let mut out = propagated("scale", lambda, &[v]);
    out.relation = v.relation;
    out.witness = v.witness.clone();
    Ok(out)
}

/// (K₁K₂, G₁G₂): λ ≤ λ₁λ₂ by the Schur product theorem on the diagonal.
pub fn combine_product(v1: &InclusionVerdict, v2: &InclusionVerdict) -> InclusionVerdict {
    binary("product", v1, v2, |a, b| a * b)
}

/// (K₁⊗K₂, G₁⊗G₂) on the product space: λ ≤ λ₁λ₂.
pub fn combine_tensor(v1: &InclusionVerdict, v2: &InclusionVerdict) -> InclusionVerdict {
    binary("tensor", v1, v2, |a, b| a * b)
}

/// Verdicts for φ(K) against φ(λG) and against φ(G).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositionVerdicts {
    /// (φ(K), φ(λ(K,G)·G)), with the λ it was built from.
    pub scaled_target: InclusionVerdict,
    pub target_scale: Option<f64>,
    /// (φ(K), φ(G)); decided only when λ(K,G) ≤ 1.
    pub unscaled_target: InclusionVerdict,
}

fn compose(rule: &str, v: &InclusionVerdict) -> CompositionVerdicts {
    let Some(bound) = LambdaBound::of(v) else {
        return CompositionVerdicts {
            scaled_target: propagated(rule, Lambda::NotApplicable, &[v]),
            target_scale: None,
            unscaled_target: propagated(rule, Lambda::NotApplicable, &[v]),
        };
    };
    // partial sums satisfy K_n ≪ max_j λ^j G_n, which is 1 against λG
    let scaled_target = propagated(rule, Lambda::UpperBound(1.0), &[v]);
    let unscaled_target = if v.relation == Relation::Equal && bound.value == 1.0 {
        let mut e = propagated(rule, Lambda::UpperBound(1.0), &[v]);
        e.relation = Relation::Equal;
        e
    } else if bound.value <= 1.0 {
        propagated(rule, Lambda::UpperBound(1.0), &[v])
    } else {
        propagated(rule, Lambda::NotApplicable, &[v])
    };
    CompositionVerdicts {
        scaled_target,
        target_scale: Some(bound.value),
        unscaled_target,
    }
}

/// (e^K, e^{λG}) and, when λ ≤ 1, (e^K, e^G).
pub fn combine_exp(v: &InclusionVerdict) -> CompositionVerdicts {
    compose("exp", v)
}

/// φ(z) = Σ a_j z^j with a_j ≥ 0: (φ(K), φ(λG)) and, when λ ≤ 1, (φ(K), φ(G)).
pub fn combine_series(coeffs: &[f64], v: &InclusionVerdict) -> Result<CompositionVerdicts> {
    if let Some((index, &value)) = coeffs.iter().enumerate().find(|(_, c)| !(**c >= 0.0)) {
        return Err(Error::NegativeCoefficient { index, value });
    }
    Ok(compose("series", v))
}

/// λ values of (K_j, G_j) for a sequence converging pointwise to (K, G).
pub enum LambdaSequence<'a> {
    /// The whole sequence (or its supremum-attaining part).
    Finite(Vec<f64>),
    /// λ_j = term(j) for j ≥ 1, examined up to `horizon`.
    Generated {
        term: &'a dyn Fn(usize) -> f64,
        horizon: usize,
    },
}

/// Included with λ ≤ sup λ_j when the supremum is finite, otherwise Unknown.
pub fn combine_limit(verdicts: &[InclusionVerdict]) -> InclusionVerdict {
    let refs: Vec<&InclusionVerdict> = verdicts.iter().collect();
    let mut values = Vec::with_capacity(verdicts.len());
    for v in verdicts {
        match LambdaBound::of(v) {
            Some(b) => values.push(b.value),
            None => return propagated("limit", Lambda::NotApplicable, &refs),
        }
    }
    match values.iter().cloned().reduce(f64::max) {
        Some(sup) => propagated("limit", Lambda::UpperBound(sup), &refs),
        None => propagated("limit", Lambda::NotApplicable, &refs),
    }
}

pub fn combine_limit_sequence(seq: &LambdaSequence) -> InclusionVerdict {
    match seq {
        LambdaSequence::Finite(values) => {
            if values.is_empty() || values.iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
                return propagated("limit", Lambda::NotApplicable, &[]);
            }
            let sup = values.iter().cloned().fold(f64::MIN_POSITIVE, f64::max);
            propagated("limit", Lambda::UpperBound(sup), &[])
        }
        LambdaSequence::Generated { term, horizon } => {
            let n = (*horizon).max(16);
            let mut sup = f64::MIN_POSITIVE;
            for j in 1..=n {
                let v = term(j);
                if !(v >= 0.0 && v.is_finite()) {
                    return propagated("limit", Lambda::NotApplicable, &[]);
                }
                sup = sup.max(v);
            }
            // increments over the last two doublings: a shrinking geometric
            // tail has a finite limit, anything else is treated as unbounded
            let (a, b, c) = (term(n / 4), term(n / 2), term(n));
            let (d1, d2) = (b - a, c - b);
            if d2 > 0.0 {
                let r = d2 / d1;
                if !(d1 > 0.0) || r >= 1.0 || d2 / c.abs() > 0.01 {
                    return propagated("limit", Lambda::Unbounded, &[]);
                }
                sup = sup.max(c + d2 * r / (1.0 - r));
            }
            propagated("limit", Lambda::UpperBound(sup), &[])
        }
    }
}

/// Decides a pair of composite kernels by the algebra rules; pairs that no
/// rule reduces are Unknown.
pub(crate) fn reduce(k: &KernelSpec, g: &KernelSpec) -> Result<InclusionVerdict> {
    use Family::*;
    let unknown = || Ok(InclusionVerdict::unknown(Method::Propagated));
    match (k.family(), g.family()) {
        (Sum(ks), _) if ks.is_empty() => Ok(propagated("zero", Lambda::UpperBound(f64::MIN_POSITIVE), &[])),
        (Scaled { c: a, inner: ki }, Scaled { c: b, inner: gi }) => combine_scale(*a, *b, &decide(ki, gi)?),
        (Scaled { c: a, inner: ki }, _) => combine_scale(*a, 1.0, &decide(ki, g)?),
        (_, Scaled { c: b, inner: gi }) => combine_scale(1.0, *b, &decide(k, gi)?),
        (Sum(ks), Sum(gs)) if ks.len() == gs.len() => {
            let mut acc = decide(&ks[0], &gs[0])?;
            for (ki, gi) in ks.iter().zip(gs).skip(1) {
                acc = combine_sum(&acc, &decide(ki, gi)?);
            }
            Ok(acc)
        }
        (Sum(ks), _) => {
            let mut acc = decide(&ks[0], g)?;
            for ki in &ks[1..] {
                acc = combine_sum_same_target(&acc, &decide(ki, g)?);
            }
            Ok(acc)
        }
        (Product(k1, k2), Product(g1, g2)) => Ok(combine_product(&decide(k1, g1)?, &decide(k2, g2)?)),
        (TensorProduct(k1, k2), TensorProduct(g1, g2)) if k1.dim() == g1.dim() => {
            Ok(combine_tensor(&decide(k1, g1)?, &decide(k2, g2)?))
        }
        (ExpComposed(ki), ExpComposed(gi)) => Ok(combine_exp(&decide(ki, gi)?).unscaled_target),
        (SeriesComposed { coeffs: a, inner: ki }, SeriesComposed { coeffs: b, inner: gi }) if a == b => {
            Ok(combine_series(a, &decide(ki, gi)?)?.unscaled_target)
        }
        (HilbertSchmidt(a), HilbertSchmidt(b)) if a.features == b.features => Ok(hs_inclusion(&a.coeffs, &b.coeffs)),
        _ => unknown(),
    }
}
