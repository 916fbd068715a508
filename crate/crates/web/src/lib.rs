//! Browser bindings: ratio profiles, the inclusion table and PSD sweeps, each
//! returned as a JSON string.

use kernel_inclusion::inclusion::{decide, decide_numeric, reproduce_table, GridConfig, TableCell, TableParams, TableReport};
use kernel_inclusion::kernel::{parse_mini, BaseFamily};
use kernel_inclusion::psd::{certify, SamplerConfig};
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
struct Profile {
    relation: &'static str,
    lambda: Option<f64>,
    sup_estimate: Option<f64>,
    blowup: String,
    /// (‖ξ‖, u/v) for every finite sample.
    samples: Vec<(f64, f64)>,
}

#[derive(Serialize)]
struct Table {
    dim: usize,
    families: Vec<&'static str>,
    relations: Vec<Vec<&'static str>>,
    lambdas: Vec<Vec<Option<f64>>>,
    exact: Vec<Vec<bool>>,
    agrees: Vec<Vec<bool>>,
}

#[derive(Serialize)]
struct SweepPoint {
    lambda: f64,
    pass_fraction: f64,
    worst_relative_eigenvalue: f64,
}

#[derive(Serialize)]
struct Sweep {
    decided_lambda: Option<f64>,
    points: Vec<SweepPoint>,
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

pub fn ratio_profile_json(k: &str, g: &str, dim: usize) -> Result<String, String> {
    let k = parse_mini(k, dim).map_err(|e| e.to_string())?;
    let g = parse_mini(g, dim).map_err(|e| e.to_string())?;
    let (verdict, profile) = decide_numeric(&k, &g, &GridConfig::default()).map_err(|e| e.to_string())?;
    let mut samples: Vec<(f64, f64)> = profile
        .grid
        .iter()
        .filter(|s| s.ratio.is_finite())
        .map(|s| (s.point.iter().map(|x| x * x).sum::<f64>().sqrt(), s.ratio))
        .collect();
    samples.sort_by(|a, b| a.0.total_cmp(&b.0));
    let out = Profile {
        relation: verdict.relation.symbol(),
        lambda: verdict.lambda.value(),
        sup_estimate: finite(profile.sup_estimate),
        blowup: format!("{:?}", profile.blowup_kind),
        samples,
    };
    Ok(serde_json::to_string(&out).unwrap())
}

fn grid<T>(report: &TableReport, f: impl Fn(&TableCell) -> T) -> Vec<Vec<T>> {
    BaseFamily::TABLE
        .iter()
        .map(|r| BaseFamily::TABLE.iter().map(|c| f(report.cell(*r, *c).unwrap())).collect())
        .collect()
}

pub fn inclusion_table_json(dim: usize, params: &str) -> Result<String, String> {
    let params = TableParams::parse(params).map_err(|e| e.to_string())?;
    let report = reproduce_table(dim, &params).map_err(|e| e.to_string())?;
    let out = Table {
        dim,
        families: BaseFamily::TABLE.iter().map(|f| f.short_name()).collect(),
        relations: grid(&report, |c| c.verdict.relation.symbol()),
        lambdas: grid(&report, |c| c.verdict.lambda.value()),
        exact: grid(&report, |c| c.verdict.lambda.is_exact()),
        agrees: grid(&report, |c| c.check.agrees()),
    };
    Ok(serde_json::to_string(&out).unwrap())
}

pub fn certify_sweep_json(
    k: &str,
    g: &str,
    dim: usize,
    lambda_min: f64,
    lambda_max: f64,
    steps: usize,
    seed: u64,
) -> Result<String, String> {
    let k = parse_mini(k, dim).map_err(|e| e.to_string())?;
    let g = parse_mini(g, dim).map_err(|e| e.to_string())?;
    if !(lambda_min > 0.0 && lambda_max >= lambda_min) || steps == 0 {
        return Err("need 0 < lambda_min ≤ lambda_max and at least one step".into());
    }
    let cfg = SamplerConfig {
        n_points: 25,
        n_trials: 30,
        rng_seed: seed,
        ..SamplerConfig::default()
    };
    let mut points = Vec::with_capacity(steps);
    for i in 0..steps {
        let t = if steps == 1 { 0.0 } else { i as f64 / (steps - 1) as f64 };
        let lambda = lambda_min * (lambda_max / lambda_min).powf(t);
        let certs = certify(&k, &g, lambda, &cfg).map_err(|e| e.to_string())?;
        let passed = certs.iter().filter(|c| c.pass).count();
        points.push(SweepPoint {
            lambda,
            pass_fraction: passed as f64 / certs.len() as f64,
            worst_relative_eigenvalue: certs
                .iter()
                .map(|c| c.min_eigenvalue / c.scale.max(f64::MIN_POSITIVE))
                .fold(f64::INFINITY, f64::min),
        });
    }
    let decided_lambda = decide(&k, &g).ok().and_then(|v| v.lambda.value());
    Ok(serde_json::to_string(&Sweep { decided_lambda, points }).unwrap())
}

#[wasm_bindgen]
pub fn ratio_profile(k: &str, g: &str, dim: usize) -> Result<String, JsError> {
    ratio_profile_json(k, g, dim).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn inclusion_table(dim: usize, params: &str) -> Result<String, JsError> {
    inclusion_table_json(dim, params).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn certify_sweep(
    k: &str,
    g: &str,
    dim: usize,
    lambda_min: f64,
    lambda_max: f64,
    steps: usize,
    seed: u64,
) -> Result<String, JsError> {
    certify_sweep_json(k, g, dim, lambda_min, lambda_max, steps, seed).map_err(|e| JsError::new(&e))
}
