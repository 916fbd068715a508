use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Included,
    NotIncluded,
    Equal,
    Unknown,
}

impl Relation {
    /// True for `Included` and `Equal`, i.e. H_K ⊆ H_G holds.
    pub fn holds(self) -> bool {
        matches!(self, Relation::Included | Relation::Equal)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Included => "⊆",
            Relation::NotIncluded => "⊄",
            Relation::Equal => "=",
            Relation::Unknown => "?",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Lambda {
    Exact(f64),
    UpperBound(f64),
    Unbounded,
    NotApplicable,
}

impl Lambda {
    pub fn value(&self) -> Option<f64> {
        match *self {
            Lambda::Exact(v) | Lambda::UpperBound(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Lambda::Exact(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    SymbolicTable,
    ClosedForm,
    NumericRatio,
    PsdEmpirical,
    /// Derived from other verdicts by the kernel algebra rules.
    Propagated,
}

/// JSON has no infinities; non-finite floats are written as the strings
/// "inf", "-inf" and "nan".
pub(crate) mod extended_float {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Number(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Number(v) => Ok(v),
            Repr::Text(t) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(serde::de::Error::custom(format!("not a number: {other}"))),
            },
        }
    }
}

/// Where a density ratio blows up, or which index breaks a coefficient bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A frequency at which u > 0 = v (ratio +∞), or where the ratio is already huge.
    Point {
        xi: Vec<f64>,
        #[serde(with = "extended_float")]
        ratio: f64,
    },
    /// A ray `t·direction` along which u/v grows without bound.
    Direction {
        direction: Vec<f64>,
        radius: f64,
        #[serde(with = "extended_float")]
        ratio: f64,
    },
    /// The ratio is unbounded near ξ = 0.
    Origin {
        radius: f64,
        #[serde(with = "extended_float")]
        ratio: f64,
    },
    /// Index of a coefficient sequence.
    Index { index: Vec<i64> },
}

/// Node of the rule tree that produced a propagated verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub rule: String,
    pub lambda: Lambda,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub inputs: Vec<Provenance>,
}

impl Provenance {
    pub fn leaf(rule: impl Into<String>, lambda: Lambda) -> Self {
        Self {
            rule: rule.into(),
            lambda,
            inputs: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InclusionVerdict {
    pub relation: Relation,
    pub lambda: Lambda,
    pub method: Method,
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

impl InclusionVerdict {
    pub fn included(lambda: Lambda, method: Method) -> Self {
        Self {
            relation: Relation::Included,
            lambda,
            method,
            witness: None,
            provenance: None,
        }
    }

    pub fn equal(lambda: Lambda, method: Method) -> Self {
        Self {
            relation: Relation::Equal,
            ..Self::included(lambda, method)
        }
    }

    pub fn not_included(method: Method, witness: Option<Witness>) -> Self {
        Self {
            relation: Relation::NotIncluded,
            lambda: Lambda::Unbounded,
            method,
            witness,
            provenance: None,
        }
    }

    pub fn unknown(method: Method) -> Self {
        Self {
            relation: Relation::Unknown,
            lambda: Lambda::NotApplicable,
            method,
            witness: None,
            provenance: None,
        }
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = Some(provenance);
        self
    }

    /// β(K,G) = √λ(K,G), the norm of the embedding, when λ is exact.
    pub fn beta(&self) -> Option<f64> {
        match self.lambda {
            Lambda::Exact(v) => Some(v.sqrt()),
            _ => None,
        }
    }

    /// Checks the structural invariants of a verdict.
    pub fn check(&self) -> Result<()> {
        let lambda_ok = match self.relation {
            Relation::Included | Relation::Equal => {
                matches!(self.lambda.value(), Some(v) if v > 0.0 && v.is_finite())
            }
            Relation::NotIncluded => {
                !(self.method == Method::NumericRatio && self.witness.is_none())
            }
            Relation::Unknown => true,
        };
        if lambda_ok {
            Ok(())
        } else {
            Err(Error::invalid(
                "verdict",
                format!("{:?} is inconsistent with {:?}", self.relation, self.lambda),
            ))
        }
    }

    pub fn to_record(&self) -> VerdictRecord {
        VerdictRecord {
            relation: self.relation,
            lambda: self.lambda,
            method: self.method,
            witness: self.witness.clone(),
            beta: self.beta(),
            provenance: self.provenance.clone(),
        }
    }
}

/// Serialized form of a verdict with the derived β = √λ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub relation: Relation,
    pub lambda: Lambda,
    pub method: Method,
    pub witness: Option<Witness>,
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

impl From<VerdictRecord> for InclusionVerdict {
    fn from(r: VerdictRecord) -> Self {
        Self {
            relation: r.relation,
            lambda: r.lambda,
            method: r.method,
            witness: r.witness,
            provenance: r.provenance,
        }
    }
}
