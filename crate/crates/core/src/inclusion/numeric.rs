use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::verdict::extended_float;
use super::{InclusionVerdict, Lambda, Method, Witness};
use crate::error::{Error, Result};
use crate::kernel::{KernelSpec, SpectralDensity};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GridConfig {
    pub r_min: f64,
    pub r_max: f64,
    /// Points per ray on the log-spaced radial grid.
    pub radial_points: usize,
    /// Half-open box [0, extent]^d for the tensor grid of non-radial pairs.
    pub tensor_extent: f64,
    /// Points per axis of the tensor grid; chosen from d when absent.
    pub tensor_points: Option<usize>,
    /// Relative slack added to the refined supremum.
    pub margin: f64,
    /// A per-decade increase of ln(u/v) larger than this, that does not slow
    /// down, counts as growth without bound.
    pub trend_increment: f64,
    pub trend_persistence: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            r_min: 1e-4,
            r_max: 1e3,
            radial_points: 4096,
            tensor_extent: 4.0 * PI,
            tensor_points: None,
            margin: 1e-3,
            trend_increment: 0.2,
            trend_persistence: 0.85,
        }
    }
}

impl GridConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.r_min > 0.0 && self.r_max > self.r_min * 1e3) {
            return Err(Error::invalid("grid", "need 0 < r_min and r_max ≥ 1000·r_min"));
        }
        if self.radial_points < 64 {
            return Err(Error::invalid("radial_points", "need at least 64 points"));
        }
        if !(self.tensor_extent > 0.0) || !(self.margin >= 0.0) {
            return Err(Error::invalid("grid", "extent must be positive and margin nonnegative"));
        }
        Ok(())
    }

    fn tensor_points_for(&self, d: usize) -> usize {
        self.tensor_points.unwrap_or(match d {
            1 => 0,
            2 => 65,
            3 => 21,
            _ => 9,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlowupKind {
    None,
    AtInfinity,
    AtOrigin,
    OnZeroSet,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioSample {
    pub point: Vec<f64>,
    #[serde(with = "extended_float")]
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioProfile {
    pub grid: Vec<RatioSample>,
    #[serde(with = "extended_float")]
    pub sup_estimate: f64,
    pub blowup_kind: BlowupKind,
}

struct Pair {
    u: SpectralDensity,
    v: SpectralDensity,
    with_zeros: bool,
}

impl Pair {
    /// ln(u/v) at ξ; `None` where both densities vanish or are both singular.
    fn ln_ratio(&self, xi: &[f64]) -> Result<Option<f64>> {
        if self.v.is_zero_at(xi) {
            return Ok(if self.u.is_zero_at(xi) {
                None
            } else {
                Some(f64::INFINITY)
            });
        }
        let lu = self.u.ln_eval(xi)?;
        if lu == f64::NEG_INFINITY {
            return Ok(Some(f64::NEG_INFINITY));
        }
        let lv = self.v.ln_eval(xi)?;
        Ok(match (lu == f64::INFINITY, lv == f64::INFINITY) {
            (true, true) => None,
            (true, false) => Some(f64::INFINITY),
            (false, true) => Some(f64::NEG_INFINITY),
            _ => Some(lu - lv),
        })
    }

    /// ln(u/v) with lattice zeros smoothed out, for trend detection.
    fn ln_trend(&self, xi: &[f64], exact: Option<f64>) -> Result<Option<f64>> {
        if !self.with_zeros {
            return Ok(exact);
        }
        let lu = self.u.ln_envelope(xi)?;
        let lv = self.v.ln_envelope(xi)?;
        if lv == f64::NEG_INFINITY || lu == f64::INFINITY || lv == f64::INFINITY {
            return Ok(exact);
        }
        Ok(Some(lu - lv))
    }
}

fn map_points<T: Send, F: Fn(&[f64]) -> Result<T> + Sync>(points: &[Vec<f64>], f: F) -> Result<Vec<T>> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        points.par_iter().map(|p| f(p)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        points.iter().map(|p| f(p)).collect()
    }
}

fn directions(d: usize, radial: bool) -> Vec<Vec<f64>> {
    if radial {
        let mut e = vec![0.0; d];
        e[0] = 1.0;
        return vec![e];
    }
    (1u32..(1 << d.min(16)))
        .map(|mask| {
            let n = (mask.count_ones() as f64).sqrt();
            (0..d).map(|j| if mask >> j & 1 == 1 { 1.0 / n } else { 0.0 }).collect()
        })
        .collect()
}

/// Maximiser of a unimodal function on [a, b] by golden-section search.
fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, iterations: usize) -> (f64, f64) {
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - phi * (b - a);
    let mut e = a + phi * (b - a);
    let (mut fc, mut fe) = (f(c), f(e));
    for _ in 0..iterations {
        if fc >= fe {
            b = e;
            e = c;
            fe = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + phi * (b - a);
            fe = f(e);
        }
    }
    if fc >= fe {
        (c, fc)
    } else {
        (e, fe)
    }
}

/// Largest finite value per decade of the radius, smallest decade first.
fn decade_maxima(radii: &[f64], values: &[Option<f64>], r_min: f64) -> Vec<(f64, usize)> {
    let r_max = radii[radii.len() - 1];
    let last = ((r_max / r_min).log10().ceil() as usize).max(1) - 1;
    let mut out: Vec<(f64, usize)> = Vec::new();
    let mut decade = usize::MAX;
    for (i, (r, v)) in radii.iter().zip(values).enumerate() {
        let k = ((r / r_min).log10().floor().max(0.0) as usize).min(last);
        if k != decade {
            out.push((f64::NEG_INFINITY, i));
            decade = k;
        }
        if let Some(v) = v {
            if v.is_finite() && *v > out.last().unwrap().0 {
                *out.last_mut().unwrap() = (*v, i);
            }
        }
    }
    out
}

/// Growth that persists over the last two steps of a sequence of decade maxima.
fn persistent_growth(m: &[f64], cfg: &GridConfig) -> bool {
    if m.len() < 3 {
        return false;
    }
    let n = m.len();
    let (d1, d2) = (m[n - 2] - m[n - 3], m[n - 1] - m[n - 2]);
    d2.is_finite() && d1.is_finite() && d2 > cfg.trend_increment && d2 >= cfg.trend_persistence * d1
}

/// Classifies the density ratio u/v of K and G on a structured grid.
pub fn decide_numeric(k: &KernelSpec, g: &KernelSpec, cfg: &GridConfig) -> Result<(InclusionVerdict, RatioProfile)> {
    cfg.validate()?;
    if k.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: k.dim(),
            got: g.dim(),
        });
    }
    let d = k.dim();
    let (u, v) = (k.spectral_density()?, g.spectral_density()?);
    let with_zeros = u.has_zeros() || v.has_zeros();
    let pair = Pair {
        with_zeros,
        u,
        v,
    };
    let n = cfg.radial_points;
    let radii: Vec<f64> = (0..n)
        .map(|i| cfg.r_min * (cfg.r_max / cfg.r_min).powf(i as f64 / (n - 1) as f64))
        .collect();
    let rays = directions(d, pair.u.is_radial() && pair.v.is_radial());

    let mut ray_points = Vec::with_capacity(rays.len() * n);
    for dir in &rays {
        for r in &radii {
            ray_points.push(dir.iter().map(|c| c * r).collect::<Vec<f64>>());
        }
    }
    let ray_values = map_points(&ray_points, |xi| {
        let exact = pair.ln_ratio(xi)?;
        Ok((exact, pair.ln_trend(xi, exact)?))
    })?;

    let mut extra: Vec<Vec<f64>> = vec![vec![0.0; d]];
    let m = if rays.len() > 1 { cfg.tensor_points_for(d) } else { 0 };
    if m >= 2 {
        let total = m.pow(d as u32);
        for idx in 1..total {
            let mut rest = idx;
            let mut p = Vec::with_capacity(d);
            for _ in 0..d {
                p.push(cfg.tensor_extent * (rest % m) as f64 / (m - 1) as f64);
                rest /= m;
            }
            extra.push(p);
        }
    }
    if matches!(pair.u.support_kind(), crate::kernel::SupportKind::CompactSupport { .. }) {
        extra.push(vec![PI; d]);
    }
    let mut probes: Vec<Vec<f64>> = Vec::new();
    if with_zeros {
        for dir in directions(d, false) {
            let scale = dir.iter().cloned().fold(0.0, f64::max);
            for eps in [0.0, 1e-2, 1e-4, 1e-6] {
                probes.push(dir.iter().map(|c| c / scale * (2.0 * PI + eps)).collect());
            }
        }
    }
    extra.extend(probes.iter().cloned());
    let extra_values = map_points(&extra, |xi| pair.ln_ratio(xi))?;

    let mut grid = Vec::with_capacity(ray_points.len() + extra.len());
    for (p, (e, _)) in ray_points.iter().zip(&ray_values) {
        if let Some(l) = e {
            grid.push(RatioSample {
                point: p.clone(),
                ratio: l.exp(),
            });
        }
    }
    for (p, e) in extra.iter().zip(&extra_values) {
        if let Some(l) = e {
            grid.push(RatioSample {
                point: p.clone(),
                ratio: l.exp(),
            });
        }
    }

    let profile = |sup: f64, kind: BlowupKind, grid: Vec<RatioSample>| RatioProfile {
        grid,
        sup_estimate: sup,
        blowup_kind: kind,
    };
    let all_values = ray_values.iter().map(|(e, _)| *e).chain(extra_values.iter().copied());
    let all_points = ray_points.iter().chain(extra.iter());

    // absolute continuity: u > 0 where v = 0
    let origin_index = ray_points.len();
    for (i, (p, val)) in all_points.clone().zip(all_values.clone()).enumerate() {
        if val == Some(f64::INFINITY) && i != origin_index && p.iter().any(|c| *c != 0.0) {
            let witness = Witness::Point {
                xi: p.clone(),
                ratio: f64::INFINITY,
            };
            return Ok((
                InclusionVerdict::not_included(Method::NumericRatio, Some(witness)),
                profile(f64::INFINITY, BlowupKind::OnZeroSet, grid),
            ));
        }
    }
    // ratio growing as ξ approaches a common zero
    let probe_values = &extra_values[extra.len() - probes.len()..];
    for (chunk, pts) in probe_values.chunks(4).zip(probes.chunks(4)) {
        let m: Vec<f64> = chunk[1..].iter().map(|v| v.unwrap_or(f64::NAN)).collect();
        if persistent_growth(&m, cfg) {
            let witness = Witness::Point {
                xi: pts[3].clone(),
                ratio: m[2].exp(),
            };
            return Ok((
                InclusionVerdict::not_included(Method::NumericRatio, Some(witness)),
                profile(f64::INFINITY, BlowupKind::OnZeroSet, grid),
            ));
        }
    }

    // origin
    let origin = extra_values[0];
    for ri in 0..rays.len() {
        let vals: Vec<Option<f64>> = ray_values[ri * n..(ri + 1) * n].iter().map(|(e, _)| *e).collect();
        let first = vals[0].unwrap_or(f64::NAN);
        let mut maxima: Vec<f64> = decade_maxima(&radii, &vals, cfg.r_min)
            .into_iter()
            .take(3)
            .map(|(m, _)| m)
            .collect();
        maxima.reverse();
        if origin == Some(f64::INFINITY) || persistent_growth(&maxima, cfg) {
            let witness = Witness::Origin {
                radius: radii[0],
                ratio: first.exp(),
            };
            return Ok((
                InclusionVerdict::not_included(Method::NumericRatio, Some(witness)),
                profile(f64::INFINITY, BlowupKind::AtOrigin, grid),
            ));
        }
    }

    // infinity
    for (ri, dir) in rays.iter().enumerate() {
        let slice = &ray_values[ri * n..(ri + 1) * n];
        let trend: Vec<Option<f64>> = slice.iter().map(|(_, t)| *t).collect();
        let maxima: Vec<f64> = decade_maxima(&radii, &trend, cfg.r_min).into_iter().map(|(m, _)| m).collect();
        if persistent_growth(&maxima, cfg) {
            // largest radius in the upper decades whose ratio is still representable
            let pick = (0..n)
                .rev()
                .filter(|&i| radii[i] >= 1.0)
                .find(|&i| matches!(slice[i].0, Some(l) if l.is_finite() && l < 700.0))
                .unwrap_or(n - 1);
            let witness = Witness::Direction {
                direction: dir.clone(),
                radius: radii[pick],
                ratio: slice[pick].0.unwrap_or(f64::NAN).exp(),
            };
            return Ok((
                InclusionVerdict::not_included(Method::NumericRatio, Some(witness)),
                profile(f64::INFINITY, BlowupKind::AtInfinity, grid),
            ));
        }
    }

    // bounded: refine the supremum
    let mut best = f64::NEG_INFINITY;
    let mut best_at = None;
    for (i, val) in all_values.enumerate() {
        if let Some(l) = val {
            if l.is_finite() && l > best {
                best = l;
                best_at = Some(i);
            }
        }
    }
    if let Some(i) = best_at.filter(|&i| i < origin_index) {
        let (ri, j) = (i / n, i % n);
        let dir = &rays[ri];
        let lo = radii[j.saturating_sub(1)].ln();
        let hi = radii[(j + 1).min(n - 1)].ln();
        let f = |s: f64| {
            let xi: Vec<f64> = dir.iter().map(|c| c * s.exp()).collect();
            match pair.ln_ratio(&xi) {
                Ok(Some(l)) if l.is_finite() => l,
                _ => f64::NEG_INFINITY,
            }
        };
        let (_, refined) = golden_max(f, lo, hi, 80);
        best = best.max(refined);
    }
    let sup = best.exp();
    let lambda = if sup > 0.0 {
        Lambda::UpperBound(sup * (1.0 + cfg.margin))
    } else {
        Lambda::UpperBound(f64::MIN_POSITIVE)
    };
    Ok((
        InclusionVerdict::included(lambda, Method::NumericRatio),
        profile(sup, BlowupKind::None, grid),
    ))
}
