//! Kernels built from a nonnegative coefficient sequence and a feature
//! sequence, K_a(x,y) = Σ aₙ φₙ(x) conj(φₙ(y)), and their inclusion theory:
//! H_{K_a} ⊆ H_{K_b} iff supp a ⊆ supp b with λ = sup aₙ/bₙ.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::inclusion::{InclusionVerdict, Lambda, Method, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IndexSet {
    Naturals,
    /// Z^d, used by periodic kernels on [0, 2π]^d.
    Lattice { dim: usize },
    /// {0, …, n}.
    Range { n: usize },
}

impl IndexSet {
    fn dim(&self) -> usize {
        match self {
            IndexSet::Lattice { dim } => *dim,
            _ => 1,
        }
    }

    fn max_key(&self) -> Option<u64> {
        match self {
            IndexSet::Range { n } => Some(*n as u64),
            _ => None,
        }
    }
}

/// Named generators. All but `Binomial` and `InverseFactorial` are radial in
/// the index, r = ‖n‖.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Rule {
    /// e^{−γ r²}
    Gaussian { gamma: f64 },
    /// e^{−σ r}
    Exponential { sigma: f64 },
    /// (1 + r)^{−α}
    PolyDecay { alpha: f64 },
    /// C(q, n), the coefficients of (1 + z)^q
    Binomial { q: u32 },
    /// 1 / n!, the coefficients of e^z
    InverseFactorial,
}

impl Rule {
    fn ln_at(&self, r: f64) -> f64 {
        match *self {
            Rule::Gaussian { gamma } => -gamma * r * r,
            Rule::Exponential { sigma } => -sigma * r,
            Rule::PolyDecay { alpha } => -alpha * r.ln_1p(),
            Rule::Binomial { q } => {
                let q = q as f64;
                if r > q {
                    f64::NEG_INFINITY
                } else {
                    ln_gamma(q + 1.0) - ln_gamma(r + 1.0) - ln_gamma(q - r + 1.0)
                }
            }
            Rule::InverseFactorial => -ln_gamma(r + 1.0),
        }
    }

    fn validate(&self) -> Result<()> {
        let positive = |name, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::invalid(name, format!("must be positive, got {v}")))
            }
        };
        match *self {
            Rule::Gaussian { gamma } => positive("gamma", gamma),
            Rule::Exponential { sigma } => positive("sigma", sigma),
            Rule::PolyDecay { alpha } => positive("alpha", alpha),
            Rule::Binomial { .. } | Rule::InverseFactorial => Ok(()),
        }
    }

    fn is_one_dimensional(&self) -> bool {
        matches!(self, Rule::Binomial { .. } | Rule::InverseFactorial)
    }

    /// Coefficients of r² r¹ and ln(1+r) in ln a(r), for the radial rules.
    fn log_coefficients(&self) -> Option<[f64; 3]> {
        match *self {
            Rule::Gaussian { gamma } => Some([-gamma, 0.0, 0.0]),
            Rule::Exponential { sigma } => Some([0.0, -sigma, 0.0]),
            Rule::PolyDecay { alpha } => Some([0.0, 0.0, -alpha]),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoefficientSequence {
    /// a₀, a₁, … indexed by the naturals, zero beyond the list.
    Finite { values: Vec<f64> },
    Rule { rule: Rule, index_set: IndexSet },
}

impl CoefficientSequence {
    pub fn finite(values: Vec<f64>) -> Self {
        CoefficientSequence::Finite { values }
    }

    pub fn rule(rule: Rule, index_set: IndexSet) -> Result<Self> {
        rule.validate()?;
        if rule.is_one_dimensional() && matches!(index_set, IndexSet::Lattice { .. }) {
            return Err(Error::invalid(
                "index_set",
                "binomial and inverse-factorial rules are indexed by the naturals",
            ));
        }
        if let IndexSet::Lattice { dim: 0 } = index_set {
            return Err(Error::invalid("index_set", "lattice dimension must be positive"));
        }
        Ok(CoefficientSequence::Rule { rule, index_set })
    }

    pub fn index_set(&self) -> IndexSet {
        match self {
            CoefficientSequence::Finite { .. } => IndexSet::Naturals,
            CoefficientSequence::Rule { index_set, .. } => *index_set,
        }
    }

    /// Coefficient at index `n`.
    pub fn value(&self, n: &[i64]) -> f64 {
        match self {
            CoefficientSequence::Finite { values } => {
                if n.len() == 1 && n[0] >= 0 {
                    values.get(n[0] as usize).copied().unwrap_or(0.0)
                } else {
                    0.0
                }
            }
            CoefficientSequence::Rule { index_set, .. } => {
                if n.len() != index_set.dim() {
                    return 0.0;
                }
                let key = match index_set {
                    IndexSet::Lattice { .. } => n.iter().map(|&v| (v * v) as u64).sum(),
                    _ if n[0] < 0 => return 0.0,
                    _ => n[0] as u64,
                };
                self.ln_at_key(key).exp()
            }
        }
    }

    /// The sequence scaled by c > 0 (Finite only).
    pub fn scaled(&self, c: f64) -> Result<Self> {
        match self {
            CoefficientSequence::Finite { values } => Ok(CoefficientSequence::Finite {
                values: values.iter().map(|v| c * v).collect(),
            }),
            _ => Err(Error::UnsupportedFamily("scaling of rule-generated sequences".into())),
        }
    }

    // Indices are addressed by a key: n for the naturals, ‖n‖² on a lattice.
    fn radius(&self, key: u64) -> f64 {
        match self.index_set() {
            IndexSet::Lattice { .. } => (key as f64).sqrt(),
            _ => key as f64,
        }
    }

    fn ln_at_key(&self, key: u64) -> f64 {
        match self {
            CoefficientSequence::Finite { values } => match values.get(key as usize) {
                Some(&v) if v > 0.0 => v.ln(),
                Some(&v) if v < 0.0 => f64::NAN,
                _ => f64::NEG_INFINITY,
            },
            CoefficientSequence::Rule { rule, index_set } => {
                if index_set.max_key().is_some_and(|m| key > m) {
                    f64::NEG_INFINITY
                } else {
                    rule.ln_at(self.radius(key))
                }
            }
        }
    }

    /// Largest key that can carry a nonzero coefficient, `None` if unbounded.
    fn support_bound(&self) -> Option<u64> {
        match self {
            CoefficientSequence::Finite { values } => Some(values.len().saturating_sub(1) as u64),
            CoefficientSequence::Rule { rule, index_set } => {
                let by_rule = match rule {
                    Rule::Binomial { q } => Some(*q as u64),
                    _ => None,
                };
                match (by_rule, index_set.max_key()) {
                    (Some(a), Some(b)) => Some(a.min(b)),
                    (a, b) => a.or(b),
                }
            }
        }
    }

    fn has_negative(&self) -> bool {
        match self {
            CoefficientSequence::Finite { values } => values.iter().any(|v| *v < 0.0 || v.is_nan()),
            CoefficientSequence::Rule { .. } => false,
        }
    }
}

/// Features φₙ paired with the coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FeatureSequence {
    /// φₙ(x) = e^{i(tₙ,x)}. Without an explicit list the index itself is
    /// the frequency.
    ComplexExponentials {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        frequencies: Option<Vec<Vec<f64>>>,
    },
    /// φₙ(x)·conj(φₙ(y)) = (x,y)ⁿ.
    Monomials,
}

impl FeatureSequence {
    pub fn validate(&self) -> Result<()> {
        if let FeatureSequence::ComplexExponentials {
            frequencies: Some(list),
        } = self
        {
            for (i, a) in list.iter().enumerate() {
                for b in &list[i + 1..] {
                    if a == b {
                        return Err(Error::invalid("frequencies", "must be pairwise distinct"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Validity: a coefficient sequence defines a kernel iff every
/// coefficient is nonnegative.
pub fn hs_is_kernel(r: &CoefficientSequence) -> bool {
    match r {
        CoefficientSequence::Finite { values } => values.iter().all(|v| *v >= 0.0),
        CoefficientSequence::Rule { rule, .. } => rule.validate().is_ok(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HsValue {
    pub value: Complex64,
    /// Bound on the modulus of the omitted terms.
    pub tail_bound: f64,
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Sum of Σ_{m>start} w(m) with w decreasing eventually; stops once terms are
/// negligible. Errors if the terms stop shrinking.
fn sum_tail<F: Fn(u64) -> f64>(start: u64, ln_term: F) -> Result<f64> {
    let mut acc = 0.0f64;
    let mut prev = f64::INFINITY;
    let mut growing = 0;
    for m in start + 1..start + 1_000_001 {
        let lt = ln_term(m);
        if lt == f64::NEG_INFINITY {
            break;
        }
        let t = lt.exp();
        acc += t;
        if lt >= prev {
            growing += 1;
            if growing > 1000 {
                return Err(Error::Divergent("coefficient series does not converge".into()));
            }
        }
        prev = lt;
        if t < 1e-300 || (m > start + 10 && t < 1e-17 * acc) {
            return Ok(acc);
        }
    }
    if acc.is_finite() {
        Ok(acc)
    } else {
        Err(Error::Divergent("coefficient series does not converge".into()))
    }
}

/// K_a(x,y) = Σ aₙ φₙ(x) conj(φₙ(y)), truncated at `truncation` (‖n‖∞ for
/// lattice indices), with a bound on the omitted terms.
pub fn hs_eval(
    a: &CoefficientSequence,
    phi: &FeatureSequence,
    x: &[f64],
    y: &[f64],
    truncation: usize,
) -> Result<HsValue> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    if a.has_negative() {
        return Err(Error::NegativeCoefficient {
            index: match a {
                CoefficientSequence::Finite { values } => {
                    values.iter().position(|v| !(*v >= 0.0)).unwrap_or(0)
                }
                _ => 0,
            },
            value: f64::NAN,
        });
    }
    phi.validate()?;
    let index_set = a.index_set();
    let explicit = match phi {
        FeatureSequence::ComplexExponentials {
            frequencies: Some(list),
        } => Some(list),
        _ => None,
    };
    if let Some(list) = explicit {
        if let Some(f) = list.iter().find(|f| f.len() != x.len()) {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                got: f.len(),
            });
        }
    } else if matches!(phi, FeatureSequence::ComplexExponentials { .. }) && index_set.dim() != x.len() {
        return Err(Error::DimensionMismatch {
            expected: index_set.dim(),
            got: x.len(),
        });
    }
    if matches!(phi, FeatureSequence::Monomials) && matches!(index_set, IndexSet::Lattice { .. }) {
        return Err(Error::invalid("features", "monomial features need a natural index"));
    }
    let z = dot(x, y);
    let diff: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    let term = |n: &[i64], coeff: f64| -> Complex64 {
        match phi {
            FeatureSequence::Monomials => Complex64::new(coeff * z.powi(n[0] as i32), 0.0),
            FeatureSequence::ComplexExponentials { frequencies } => {
                let phase = match frequencies {
                    Some(list) => dot(&list[n[0] as usize], &diff),
                    None => n.iter().zip(&diff).map(|(&k, d)| k as f64 * d).sum(),
                };
                Complex64::from_polar(coeff, phase)
            }
        }
    };
    let mut value = Complex64::new(0.0, 0.0);
    let mut tail_bound = 0.0;
    match a {
        CoefficientSequence::Finite { values } => {
            if let Some(list) = explicit {
                if list.len() < values.len() {
                    return Err(Error::invalid(
                        "frequencies",
                        format!("need {} frequencies, got {}", values.len(), list.len()),
                    ));
                }
            }
            for (n, &c) in values.iter().enumerate() {
                if c != 0.0 {
                    value += term(&[n as i64], c);
                }
            }
        }
        CoefficientSequence::Rule { rule, index_set } => {
            if explicit.is_some() {
                return Err(Error::invalid(
                    "frequencies",
                    "rule-generated sequences use their index as the frequency",
                ));
            }
            let t = truncation.max(1) as i64;
            match index_set {
                IndexSet::Lattice { dim } => {
                    let mut n = vec![-t; *dim];
                    loop {
                        let c = a.value(&n);
                        if c > 0.0 {
                            value += term(&n, c);
                        }
                        // odometer over [-t, t]^d
                        let mut i = 0;
                        while i < *dim {
                            if n[i] < t {
                                n[i] += 1;
                                break;
                            }
                            n[i] = -t;
                            i += 1;
                        }
                        if i == *dim {
                            break;
                        }
                    }
                    let d = *dim as f64;
                    tail_bound = if let Rule::PolyDecay { alpha } = rule {
                        if *alpha <= d {
                            return Err(Error::Divergent(format!(
                                "polynomial decay needs alpha > {d} on Z^{dim}, got {alpha}"
                            )));
                        }
                        d * 2f64.powf(d) * (1.0 + t as f64).powf(d - alpha) / (alpha - d)
                    } else {
                        // shells ‖n‖∞ = m hold at most d 2^d (1+m)^{d-1} points with ‖n‖ ≥ m
                        sum_tail(t as u64, |m| {
                            let m = m as f64;
                            d.ln() + d * std::f64::consts::LN_2 + (d - 1.0) * m.ln_1p()
                                + rule.ln_at(m)
                        })?
                    };
                }
                _ => {
                    let last = match index_set.max_key() {
                        Some(n) => (n as i64).min(t),
                        None => t,
                    };
                    for n in 0..=last {
                        let c = a.value(&[n]);
                        if c > 0.0 {
                            value += term(&[n], c);
                        }
                    }
                    let w = match phi {
                        FeatureSequence::Monomials => z.abs(),
                        _ => 1.0,
                    };
                    let reaches = index_set.max_key().map_or(true, |n| n as i64 > last);
                    if reaches && w > 0.0 {
                        if let (Rule::PolyDecay { alpha }, true) = (rule, w == 1.0) {
                            if *alpha <= 1.0 {
                                return Err(Error::Divergent(format!(
                                    "polynomial decay needs alpha > 1, got {alpha}"
                                )));
                            }
                            tail_bound = (1.0 + last as f64).powf(1.0 - alpha) / (alpha - 1.0);
                        } else {
                            let lw = w.ln();
                            let cap = index_set.max_key();
                            tail_bound = sum_tail(last as u64, |m| {
                                if cap.is_some_and(|c| m > c) {
                                    f64::NEG_INFINITY
                                } else {
                                    rule.ln_at(m as f64) + m as f64 * lw
                                }
                            })?;
                        }
                    }
                }
            }
        }
    }
    Ok(HsValue { value, tail_bound })
}

/// Outcome of sup over an index set of num/den.
#[derive(Debug, Clone, PartialEq)]
enum SupRatio {
    Finite { ln_value: f64, at: Vec<i64> },
    /// num > 0 = den at this index.
    SupportViolation(Vec<i64>),
    Unbounded(Vec<i64>),
    Unknown(String),
}

const SCAN_LIMIT: u64 = 100_000;
const DIVERGENCE_FACTOR: f64 = 1e6;

fn is_sum_of_squares(k: u64, d: usize) -> bool {
    match d {
        0 => k == 0,
        1 => isqrt(k).pow(2) == k,
        2 => (0..=isqrt(k)).any(|a| is_sum_of_squares(k - a * a, 1)),
        3 => {
            // Legendre: k is a sum of three squares unless k = 4^a (8b + 7)
            let mut m = k;
            while m > 0 && m % 4 == 0 {
                m /= 4;
            }
            m % 8 != 7
        }
        _ => true,
    }
}

fn isqrt(k: u64) -> u64 {
    let mut r = (k as f64).sqrt() as u64;
    while r * r > k {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= k {
        r += 1;
    }
    r
}

/// A lattice point n ∈ Z^d with ‖n‖² = k.
fn lattice_point(k: u64, d: usize) -> Option<Vec<i64>> {
    fn search(k: u64, d: usize, out: &mut Vec<i64>) -> bool {
        if d == 1 {
            let r = isqrt(k);
            if r * r == k {
                out.push(r as i64);
                return true;
            }
            return false;
        }
        let mut a = isqrt(k);
        loop {
            out.push(a as i64);
            if is_sum_of_squares(k - a * a, d - 1) && search(k - a * a, d - 1, out) {
                return true;
            }
            out.pop();
            if a == 0 {
                return false;
            }
            a -= 1;
        }
    }
    let used = d.min(4);
    let mut out = Vec::with_capacity(d);
    if search(k, used, &mut out) {
        out.resize(d, 0);
        Some(out)
    } else {
        None
    }
}

fn key_index(index_set: IndexSet, key: u64) -> Vec<i64> {
    match index_set {
        IndexSet::Lattice { dim } => lattice_point(key, dim).expect("achievable key"),
        _ => vec![key as i64],
    }
}

fn key_achievable(index_set: IndexSet, key: u64) -> bool {
    match index_set {
        IndexSet::Lattice { dim } => is_sum_of_squares(key, dim),
        IndexSet::Range { n } => key <= n as u64,
        IndexSet::Naturals => true,
    }
}

fn same_index_set(a: IndexSet, b: IndexSet) -> bool {
    match (a, b) {
        (IndexSet::Lattice { dim: x }, IndexSet::Lattice { dim: y }) => x == y,
        (IndexSet::Lattice { .. }, _) | (_, IndexSet::Lattice { .. }) => false,
        _ => true,
    }
}

/// sup over keys of num/den. Keys with den = 0 < num are support violations
/// unless `skip_den_zero`, in which case they are ignored.
fn sup_ratio(num: &CoefficientSequence, den: &CoefficientSequence, skip_den_zero: bool) -> SupRatio {
    let (ia, ib) = (num.index_set(), den.index_set());
    if !same_index_set(ia, ib) {
        return SupRatio::Unknown("sequences live on different index sets".into());
    }
    let index_set = if matches!(num, CoefficientSequence::Finite { .. }) { ib } else { ia };
    let scan = |keys: &mut dyn Iterator<Item = u64>| -> SupRatio {
        let mut best: Option<(f64, u64)> = None;
        for key in keys {
            if !key_achievable(index_set, key) {
                continue;
            }
            let (ln, ld) = (num.ln_at_key(key), den.ln_at_key(key));
            if ln == f64::NEG_INFINITY {
                continue;
            }
            if ld == f64::NEG_INFINITY {
                if skip_den_zero {
                    continue;
                }
                return SupRatio::SupportViolation(key_index(index_set, key));
            }
            let h = ln - ld;
            if best.is_none_or(|(b, _)| h > b) {
                best = Some((h, key));
            }
        }
        match best {
            Some((h, key)) => SupRatio::Finite {
                ln_value: h,
                at: key_index(index_set, key),
            },
            None => SupRatio::Finite {
                ln_value: f64::NEG_INFINITY,
                at: key_index(index_set, 0),
            },
        }
    };
    match (num.support_bound(), den.support_bound()) {
        (Some(n), _) => scan(&mut (0..=n)),
        (None, Some(m)) => {
            if skip_den_zero {
                scan(&mut (0..=m))
            } else {
                match scan(&mut (0..=m)) {
                    SupRatio::Finite { .. } => {
                        let key = (m + 1..).find(|k| key_achievable(index_set, *k)).unwrap();
                        SupRatio::SupportViolation(key_index(index_set, key))
                    }
                    other => other,
                }
            }
        }
        (None, None) => sup_ratio_rules(num, den, index_set),
    }
}

fn sup_ratio_rules(num: &CoefficientSequence, den: &CoefficientSequence, index_set: IndexSet) -> SupRatio {
    let (CoefficientSequence::Rule { rule: ra, .. }, CoefficientSequence::Rule { rule: rb, .. }) = (num, den)
    else {
        unreachable!("finite sequences have bounded support")
    };
    let h = |key: u64| num.ln_at_key(key) - den.ln_at_key(key);
    let divergence_witness = || -> Vec<i64> {
        let target = h(0) + DIVERGENCE_FACTOR.ln();
        let mut m: u64 = 1;
        loop {
            let key = match index_set {
                IndexSet::Lattice { .. } => m * m,
                _ => m,
            };
            if h(key) > target || m > 1 << 40 {
                let mut idx = vec![0; index_set.dim()];
                idx[0] = m as i64;
                return idx;
            }
            m *= 2;
        }
    };
    if let (Some(ca), Some(cb)) = (ra.log_coefficients(), rb.log_coefficients()) {
        let c = [ca[0] - cb[0], ca[1] - cb[1], ca[2] - cb[2]];
        let leading = c.iter().copied().find(|v| *v != 0.0).unwrap_or(0.0);
        if leading > 0.0 {
            return SupRatio::Unbounded(divergence_witness());
        }
        // ln ratio is concave in r here; locate its maximiser and compare the
        // achievable radii on either side of it.
        let slope = |r: f64| 2.0 * c[0] * r + c[1] + c[2] / (1.0 + r);
        let r_star = if slope(0.0) <= 0.0 {
            0.0
        } else {
            let mut hi = 1.0;
            while slope(hi) > 0.0 {
                hi *= 2.0;
            }
            let mut lo = 0.0;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if slope(mid) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        };
        let target = match index_set {
            IndexSet::Lattice { .. } => r_star * r_star,
            _ => r_star,
        };
        let mut below = target.floor() as u64;
        while !key_achievable(index_set, below) {
            below -= 1;
        }
        let mut above = target.ceil() as u64;
        while !key_achievable(index_set, above) {
            above += 1;
        }
        let key = if h(above) > h(below) { above } else { below };
        return SupRatio::Finite {
            ln_value: h(key),
            at: key_index(index_set, key),
        };
    }
    // Generic fallback: scan and require an eventually monotone tail.
    let keys: Vec<u64> = (0..=SCAN_LIMIT).filter(|k| key_achievable(index_set, *k)).collect();
    let values: Vec<f64> = keys.iter().map(|k| h(*k)).collect();
    let (best_i, best) = values
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
    let tail = &values[values.len() * 9 / 10..];
    if tail.windows(2).all(|w| w[1] <= w[0]) {
        SupRatio::Finite {
            ln_value: best,
            at: key_index(index_set, keys[best_i]),
        }
    } else if tail.windows(2).all(|w| w[1] >= w[0]) && best - values[0] > DIVERGENCE_FACTOR.ln() {
        let i = values
            .iter()
            .position(|v| *v > values[0] + DIVERGENCE_FACTOR.ln())
            .unwrap();
        SupRatio::Unbounded(key_index(index_set, keys[i]))
    } else {
        SupRatio::Unknown(format!("ratio tail is not monotone within {SCAN_LIMIT} terms"))
    }
}

/// num/den at the maximising index, divided directly when both values are
/// representable so finite sequences give the exact quotient.
fn ratio_at(num: &CoefficientSequence, den: &CoefficientSequence, at: &[i64], ln_value: f64) -> f64 {
    let (x, y) = (num.value(at), den.value(at));
    let q = x / y;
    if x > 0.0 && y > 0.0 && q.is_finite() && q > 0.0 {
        q
    } else {
        ln_value.exp()
    }
}

/// λ(K_a, K_b) = sup{aₙ/bₙ : bₙ > 0}, provided supp a ⊆ supp b.
pub fn hs_inclusion(a: &CoefficientSequence, b: &CoefficientSequence) -> InclusionVerdict {
    if a.has_negative() || b.has_negative() {
        return InclusionVerdict::unknown(Method::ClosedForm);
    }
    match sup_ratio(a, b, false) {
        SupRatio::Finite { ln_value, .. } if ln_value == f64::NEG_INFINITY => {
            // the zero kernel embeds with every positive constant
            InclusionVerdict::included(Lambda::UpperBound(f64::MIN_POSITIVE), Method::ClosedForm)
        }
        SupRatio::Finite { ln_value, at } => {
            InclusionVerdict::included(Lambda::Exact(ratio_at(a, b, &at, ln_value)), Method::ClosedForm)
        }
        SupRatio::SupportViolation(index) | SupRatio::Unbounded(index) => {
            InclusionVerdict::not_included(Method::ClosedForm, Some(Witness::Index { index }))
        }
        SupRatio::Unknown(_) => InclusionVerdict::unknown(Method::ClosedForm),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquivNorm {
    pub holds: bool,
    /// inf{bₙ/aₙ : n ∈ supp a}
    pub alpha: Option<f64>,
    /// sup{bₙ/aₙ : n ∈ supp a}
    pub beta: Option<f64>,
}

/// a ≲ b: supp a ⊆ supp b and α aₙ ≤ bₙ ≤ β aₙ on supp a.
pub fn hs_equiv_norm(a: &CoefficientSequence, b: &CoefficientSequence) -> EquivNorm {
    let fail = EquivNorm {
        holds: false,
        alpha: None,
        beta: None,
    };
    if a.has_negative() || b.has_negative() {
        return fail;
    }
    let forward = sup_ratio(a, b, false);
    let zero = |r: &SupRatio| matches!(r, SupRatio::Finite { ln_value, .. } if *ln_value == f64::NEG_INFINITY);
    if zero(&forward) && zero(&sup_ratio(b, a, false)) {
        return EquivNorm {
            holds: true,
            alpha: Some(1.0),
            beta: Some(1.0),
        };
    }
    let alpha = match forward {
        SupRatio::Finite { ln_value, ref at } => Some(ratio_at(b, a, at, -ln_value)),
        SupRatio::SupportViolation(_) | SupRatio::Unbounded(_) => Some(0.0),
        SupRatio::Unknown(_) => None,
    };
    let beta = match sup_ratio(b, a, true) {
        SupRatio::Finite { ln_value, at } => Some(ratio_at(b, a, &at, ln_value)),
        SupRatio::Unbounded(_) => Some(f64::INFINITY),
        _ => None,
    };
    match (alpha, beta) {
        (Some(al), Some(be)) if al > 0.0 && al.is_finite() && be.is_finite() => EquivNorm {
            holds: true,
            alpha: Some(al),
            beta: Some(be),
        },
        _ => EquivNorm {
            holds: false,
            alpha,
            beta,
        },
    }
}

/// (1 + (x,y))^p as a Hilbert–Schmidt kernel.
pub fn polynomial_kernel(p: u32) -> (CoefficientSequence, FeatureSequence) {
    (
        CoefficientSequence::Rule {
            rule: Rule::Binomial { q: p },
            index_set: IndexSet::Naturals,
        },
        FeatureSequence::Monomials,
    )
}
