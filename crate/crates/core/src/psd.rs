//! Empirical evidence for K ≪ λG: the smallest eigenvalue of λG[x] − K[x]
//! on random point sets, and a local search for point sets where it is
//! negative.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::KernelSpec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SamplerConfig {
    pub n_points: usize,
    pub n_trials: usize,
    pub box_radius: f64,
    pub rng_seed: u64,
    /// Eigenvalues above −tolerance·scale count as nonnegative.
    pub tolerance: f64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            n_points: 40,
            n_trials: 200,
            box_radius: 5.0,
            rng_seed: 0,
            tolerance: 1e-9,
        }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_points < 2 {
            return Err(Error::invalid("n_points", "need at least two points"));
        }
        if !(self.box_radius > 0.0 && self.box_radius.is_finite()) {
            return Err(Error::invalid("box_radius", "must be positive"));
        }
        if !(self.tolerance >= 0.0) {
            return Err(Error::invalid("tolerance", "must be nonnegative"));
        }
        Ok(())
    }
}

pub const MIN_SEPARATION: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsdCertificate {
    pub points: Vec<Vec<f64>>,
    pub lambda_tested: f64,
    pub min_eigenvalue: f64,
    pub tolerance: f64,
    /// Largest diagonal entry of λG[x].
    pub scale: f64,
    pub pass: bool,
    /// Points redrawn because they fell within the minimum separation.
    pub resampled: usize,
}

/// A point set and a unit vector y with y*(λG[x] − K[x])y < 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationWitness {
    pub points: Vec<Vec<f64>>,
    pub y_re: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub y_im: Vec<f64>,
    pub quadratic_form: f64,
    pub lambda: f64,
    pub scale: f64,
}

fn check_pair(k: &KernelSpec, g: &KernelSpec, lambda: f64) -> Result<()> {
    if k.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: k.dim(),
            got: g.dim(),
        });
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::invalid("lambda", format!("must be positive, got {lambda}")));
    }
    Ok(())
}

/// K[x] for a real-valued kernel.
pub fn gram(k: &KernelSpec, points: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let n = points.len();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = k.eval(&points[i], &points[j])?;
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    Ok(m)
}

/// λG[x] − K[x], symmetrized; complex hermitian matrices are returned as
/// their real 2n×2n embedding [[Re, −Im], [Im, Re]], which has the same
/// eigenvalues, each twice.
fn assemble(k: &KernelSpec, g: &KernelSpec, lambda: f64, points: &[Vec<f64>]) -> Result<(DMatrix<f64>, f64)> {
    let n = points.len();
    let mut scale = 0.0f64;
    if k.is_real() && g.is_real() {
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let gv = lambda * g.eval(&points[i], &points[j])?;
                let v = gv - k.eval(&points[i], &points[j])?;
                if i == j {
                    scale = scale.max(gv);
                }
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        return Ok((m, scale));
    }
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in i..n {
            let gv = g.eval_complex(&points[i], &points[j])? * lambda;
            let v = gv - k.eval_complex(&points[i], &points[j])?;
            let (re, im) = if i == j {
                scale = scale.max(gv.re);
                (v.re, 0.0)
            } else {
                (v.re, v.im)
            };
            // Hermitian: entry (j, i) is the conjugate
            m[(i, j)] = re;
            m[(j, i)] = re;
            m[(n + i, n + j)] = re;
            m[(n + j, n + i)] = re;
            m[(n + i, j)] = im;
            m[(n + j, i)] = -im;
            m[(i, n + j)] = -im;
            m[(j, n + i)] = im;
        }
    }
    Ok((m, scale))
}

fn eigen(m: DMatrix<f64>) -> Result<SymmetricEigen<f64, nalgebra::Dyn>> {
    let n = m.nrows();
    SymmetricEigen::try_new(m, 1e-15, 1000 * n.max(1))
        .ok_or_else(|| Error::Eigen(format!("symmetric eigensolver did not converge on a {n}×{n} matrix")))
}

pub fn min_eigenvalue(m: &DMatrix<f64>) -> Result<f64> {
    let sym = (m + m.transpose()) * 0.5;
    Ok(eigen(sym)?.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min))
}

/// Smallest eigenvalue of the Hadamard product A∘B and max |diag| of it.
pub fn hadamard_min_eigenvalue(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<(f64, f64)> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            got: b.nrows(),
        });
    }
    let h = a.component_mul(b);
    let scale = h.diagonal().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok((min_eigenvalue(&h)?, scale))
}

fn min_eig_with_vector(m: DMatrix<f64>) -> Result<(f64, DVector<f64>)> {
    let e = eigen(m)?;
    let (idx, val) = e
        .eigenvalues
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, v)| if *v < acc.1 { (i, *v) } else { acc });
    Ok((val, e.eigenvectors.column(idx).into_owned()))
}

/// Certificate for a fixed point set.
pub fn certify_points(
    k: &KernelSpec,
    g: &KernelSpec,
    lambda: f64,
    points: &[Vec<f64>],
    tolerance: f64,
) -> Result<PsdCertificate> {
    check_pair(k, g, lambda)?;
    let (m, scale) = assemble(k, g, lambda, points)?;
    let min_eigenvalue = min_eigenvalue(&m)?;
    Ok(PsdCertificate {
        points: points.to_vec(),
        lambda_tested: lambda,
        min_eigenvalue,
        tolerance,
        scale,
        pass: min_eigenvalue >= -tolerance * scale,
        resampled: 0,
    })
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn far_enough(p: &[f64], points: &[Vec<f64>], skip: Option<usize>) -> bool {
    points.iter().enumerate().all(|(i, q)| {
        Some(i) == skip || p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt() > MIN_SEPARATION
    })
}

/// Uniform points in [−R, R]^d, pairwise farther apart than [`MIN_SEPARATION`].
pub fn sample_points(d: usize, cfg: &SamplerConfig, rng: &mut impl Rng) -> (Vec<Vec<f64>>, usize) {
    let mut points: Vec<Vec<f64>> = Vec::with_capacity(cfg.n_points);
    let mut resampled = 0;
    while points.len() < cfg.n_points {
        let p: Vec<f64> = (0..d).map(|_| rng.gen_range(-cfg.box_radius..=cfg.box_radius)).collect();
        if far_enough(&p, &points, None) {
            points.push(p);
        } else {
            resampled += 1;
        }
    }
    (points, resampled)
}

fn run_trials<T: Send, F: Fn(usize) -> Result<T> + Sync + Send>(n: usize, f: F) -> Result<Vec<T>> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// One certificate per trial; trial t draws its points from stream t of the
/// seeded generator, so the result does not depend on scheduling.
pub fn certify(k: &KernelSpec, g: &KernelSpec, lambda: f64, cfg: &SamplerConfig) -> Result<Vec<PsdCertificate>> {
    cfg.validate()?;
    check_pair(k, g, lambda)?;
    run_trials(cfg.n_trials, |t| {
        let mut rng = trial_rng(cfg.rng_seed, t);
        let (points, resampled) = sample_points(k.dim(), cfg, &mut rng);
        let mut c = certify_points(k, g, lambda, &points, cfg.tolerance)?;
        c.resampled = resampled;
        Ok(c)
    })
}

pub const FALSIFY_STEPS: usize = 500;

/// Searches for a point set on which λ_max·G − K is not PSD: the worst of
/// the random trials, then a coordinate-wise hill climb on the normalized
/// smallest eigenvalue.
pub fn falsify(k: &KernelSpec, g: &KernelSpec, lambda_max: f64, cfg: &SamplerConfig) -> Result<Option<ViolationWitness>> {
    cfg.validate()?;
    check_pair(k, g, lambda_max)?;
    let objective = |points: &[Vec<f64>]| -> Result<(f64, f64)> {
        let (m, scale) = assemble(k, g, lambda_max, points)?;
        let e = min_eigenvalue(&m)?;
        Ok((e, scale))
    };
    let normalized = |(e, s): (f64, f64)| if s > 0.0 { e / s } else { e };
    let trials = run_trials(cfg.n_trials.max(1), |t| {
        let mut rng = trial_rng(cfg.rng_seed, t);
        let (points, _) = sample_points(k.dim(), cfg, &mut rng);
        let value = normalized(objective(&points)?);
        Ok((value, points))
    })?;
    let (mut best, mut points) = trials
        .into_iter()
        .fold(None, |acc: Option<(f64, Vec<Vec<f64>>)>, (v, p)| match acc {
            Some((bv, _)) if bv <= v => acc,
            _ => Some((v, p)),
        })
        .expect("at least one trial");

    let mut rng = trial_rng(cfg.rng_seed ^ 0x5eed_f1a5, cfg.n_trials);
    let mut step = cfg.box_radius / 10.0;
    let mut rejections = 0;
    for _ in 0..FALSIFY_STEPS {
        if best < -cfg.tolerance {
            break;
        }
        let i = rng.gen_range(0..points.len());
        let j = rng.gen_range(0..k.dim());
        let mut candidate = points[i].clone();
        candidate[j] += rng.gen_range(-step..=step);
        if !far_enough(&candidate, &points, Some(i)) {
            continue;
        }
        let old = std::mem::replace(&mut points[i], candidate);
        let value = normalized(objective(&points)?);
        if value < best {
            best = value;
            rejections = 0;
        } else {
            points[i] = old;
            rejections += 1;
            if rejections >= 20 {
                step *= 0.9;
                rejections = 0;
            }
        }
    }
    if best >= -cfg.tolerance {
        return Ok(None);
    }
    let (m, scale) = assemble(k, g, lambda_max, &points)?;
    let (value, vec) = min_eig_with_vector(m)?;
    let n = points.len();
    let (y_re, y_im) = if vec.len() == n {
        (vec.iter().cloned().collect(), Vec::new())
    } else {
        (vec.rows(0, n).iter().cloned().collect(), vec.rows(n, n).iter().cloned().collect())
    };
    Ok(Some(ViolationWitness {
        points,
        y_re,
        y_im,
        quadratic_form: value,
        lambda: lambda_max,
        scale,
    }))
}
