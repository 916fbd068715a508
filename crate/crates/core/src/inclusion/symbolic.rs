use std::f64::consts::PI;

use statrs::function::gamma::{gamma, ln_gamma};

use super::{InclusionVerdict, Lambda, Method};
use crate::error::Result;
use crate::kernel::{Family, KernelSpec};
use crate::special::{ln_upper_gamma, QuadratureConfig};

pub(crate) enum Cell {
    Decided(InclusionVerdict),
    /// The table leaves this cell open at the given dimension.
    Numeric,
}

fn not_included() -> Cell {
    Cell::Decided(InclusionVerdict::not_included(Method::SymbolicTable, None))
}

fn bound(value: f64) -> Cell {
    Cell::Decided(InclusionVerdict::included(Lambda::UpperBound(value), Method::SymbolicTable))
}

fn exact(value: f64) -> Cell {
    Cell::Decided(InclusionVerdict::included(Lambda::Exact(value), Method::ClosedForm))
}

fn equal(value: f64) -> Cell {
    Cell::Decided(InclusionVerdict::equal(Lambda::Exact(value), Method::ClosedForm))
}

fn upper_gamma(a: f64, x: f64) -> Result<f64> {
    Ok(ln_upper_gamma(a, x, &QuadratureConfig::default())?.exp())
}

fn lower_gamma(a: f64, x: f64) -> f64 {
    statrs::function::gamma::gamma_li(a, x)
}

pub fn bspline_expl1_bound(d: usize, sigma: f64) -> f64 {
    (2.0 * (sigma + 1.0 / sigma)).powi(d as i32)
}

pub fn bspline_expl2_bound(d: usize, p: u32, sigma: f64) -> f64 {
    let df = d as f64;
    2f64.powf(p as f64 - df) / (sigma.powf(df) * PI.powf((df - 1.0) / 2.0))
        * (1.0 + sigma * sigma * df).powf((df + 1.0) / 2.0)
        / gamma((df + 1.0) / 2.0)
}

pub fn gaussian_expl1_bound(d: usize, gamma_: f64, sigma: f64) -> f64 {
    ((4.0 * sigma * sigma / gamma_).max(1.0) * (gamma_ * PI).sqrt() / (2.0 * sigma)).powi(d as i32)
}

pub fn gaussian_expl2_bound(d: usize, gamma_: f64, sigma: f64) -> f64 {
    let df = d as f64;
    ((2.0 * df + 2.0) * sigma * sigma / gamma_).max(1.0).powf((df + 1.0) / 2.0)
        * (gamma_.sqrt() / (2.0 * sigma)).powf(df)
        * PI.powf((df - 1.0) / 2.0)
        / gamma((df + 1.0) / 2.0)
}

/// sup g/m ≤ Γ(β) γ^{d/2} / Γ(β − d/2, 1/γ): the Laplace integral of m/g only
/// gains from e^{γ‖ξ‖²/4 − ‖ξ‖²/(4t)} ≥ 1 on t ≥ 1/γ.
pub fn gaussian_imq_bound(d: usize, gamma_: f64, beta: f64) -> Result<f64> {
    let df = d as f64;
    let ln = ln_gamma(beta) + 0.5 * df * gamma_.ln()
        - ln_upper_gamma(beta - df / 2.0, 1.0 / gamma_, &QuadratureConfig::default())?;
    Ok(ln.exp())
}

/// The Gaussian bound integrated against the Laplace measure
/// t^{β−1}e^{−t}/Γ(β) dt of the inverse multiquadric, with γ = 1/t.
pub fn imq_expl1_bound(d: usize, beta: f64, sigma: f64) -> Result<f64> {
    let df = d as f64;
    let a = beta - df / 2.0;
    let t0 = 1.0 / (4.0 * sigma * sigma);
    let inner = lower_gamma(a, t0) + (4.0 * sigma * sigma).powf(df) * upper_gamma(beta + df / 2.0, t0)?;
    Ok((PI.sqrt() / (2.0 * sigma)).powf(df) / gamma(beta) * inner)
}

pub fn imq_expl2_bound(d: usize, beta: f64, sigma: f64) -> Result<f64> {
    let df = d as f64;
    let a = beta - df / 2.0;
    let c = (2.0 * df + 2.0) * sigma * sigma;
    let t1 = 1.0 / c;
    let inner = lower_gamma(a, t1) + c.powf((df + 1.0) / 2.0) * upper_gamma(beta + 0.5, t1)?;
    Ok(PI.powf((df - 1.0) / 2.0) / gamma((df + 1.0) / 2.0) / (2.0 * sigma).powf(df) / gamma(beta) * inner)
}

/// m_{β₁}(0)/m_{β₂}(0); the ratio peaks at the origin when d/2 < β₁ < β₂.
pub fn imq_pair_lambda(d: usize, beta1: f64, beta2: f64) -> f64 {
    let h = d as f64 / 2.0;
    (ln_gamma(beta1 - h) + ln_gamma(beta2) - ln_gamma(beta1) - ln_gamma(beta2 - h)).exp()
}

pub fn gaussian_anova_lambda(d: usize, gamma_: f64, tau: f64) -> f64 {
    let df = d as f64;
    gamma_.sqrt().powf(df) / (df * tau.sqrt() * (2.0 * PI.sqrt()).powf(df - 1.0))
}

pub fn sinc_gaussian_lambda(d: usize, gamma_: f64) -> f64 {
    let df = d as f64;
    (df * gamma_ * PI * PI / 4.0).exp() / (gamma_ * PI).powf(df / 2.0)
}

pub fn sinc_anova_lambda(d: usize, tau: f64) -> f64 {
    let df = d as f64;
    PI.sqrt() * (tau * PI * PI / 4.0).exp() / (2f64.powf(df - 1.0) * PI.powf(df) * df * tau.sqrt())
}

pub(crate) fn table_cell(k: &KernelSpec, g: &KernelSpec) -> Result<Cell> {
    use Family::*;
    let d = k.dim();
    let df = d as f64;
    Ok(match (k.family(), g.family()) {
        (Sinc, Sinc) => equal(1.0),
        (Sinc, Gaussian { gamma }) => exact(sinc_gaussian_lambda(d, *gamma)),
        (Sinc, Anova { tau }) => exact(sinc_anova_lambda(d, *tau)),
        (Sinc, _) => {
            // the densities are coordinatewise decreasing, so v is smallest at the corner
            let v = g.spectral_density()?.eval(&vec![PI; d])?;
            exact((2.0 * PI).powf(-df) / v)
        }
        (_, Sinc) => not_included(),

        (BSpline { p: q }, BSpline { p }) => {
            if q >= p {
                exact(1.0)
            } else {
                not_included()
            }
        }
        (BSpline { .. }, ExpL1 { sigma }) => bound(bspline_expl1_bound(d, *sigma)),
        (BSpline { p }, ExpL2 { sigma }) => {
            if *p as usize >= d + 1 {
                bound(bspline_expl2_bound(d, *p, *sigma))
            } else {
                not_included()
            }
        }
        (BSpline { .. }, _) | (_, BSpline { .. }) => not_included(),

        (Gaussian { gamma: a }, Gaussian { gamma: b }) => {
            if a >= b {
                exact((a / b).powf(df / 2.0))
            } else {
                not_included()
            }
        }
        (Gaussian { gamma }, ExpL1 { sigma }) => bound(gaussian_expl1_bound(d, *gamma, *sigma)),
        (Gaussian { gamma }, ExpL2 { sigma }) => bound(gaussian_expl2_bound(d, *gamma, *sigma)),
        (Gaussian { gamma }, InverseMultiquadric { beta }) => bound(gaussian_imq_bound(d, *gamma, *beta)?),
        (Gaussian { .. }, Anova { .. }) if d == 1 => Cell::Numeric,
        (Gaussian { gamma }, Anova { tau }) => {
            if gamma >= tau {
                exact(gaussian_anova_lambda(d, *gamma, *tau))
            } else {
                not_included()
            }
        }
        (_, Gaussian { .. }) if !matches!(k.family(), Anova { .. }) => not_included(),

        (ExpL1 { sigma: a }, ExpL1 { sigma: b }) => equal((a.max(*b) / a.min(*b)).powf(df)),
        (ExpL2 { sigma: a }, ExpL2 { sigma: b }) => equal((a / b).powf(df).max(b / a)),
        (ExpL1 { .. }, ExpL2 { .. }) | (ExpL2 { .. }, ExpL1 { .. }) => {
            if d >= 2 {
                not_included()
            } else {
                Cell::Numeric
            }
        }
        (ExpL1 { .. } | ExpL2 { .. }, _) => not_included(),

        (InverseMultiquadric { beta }, ExpL1 { sigma }) => {
            if *beta > df / 2.0 {
                bound(imq_expl1_bound(d, *beta, *sigma)?)
            } else {
                not_included()
            }
        }
        (InverseMultiquadric { beta }, ExpL2 { sigma }) => {
            if *beta > df / 2.0 {
                bound(imq_expl2_bound(d, *beta, *sigma)?)
            } else {
                not_included()
            }
        }
        (InverseMultiquadric { beta: a }, InverseMultiquadric { beta: b }) => {
            if a == b {
                equal(1.0)
            } else if df / 2.0 < *a && a < b {
                exact(imq_pair_lambda(d, *a, *b))
            } else {
                not_included()
            }
        }
        (InverseMultiquadric { .. }, _) => not_included(),

        (Anova { tau: a }, Anova { tau: b }) => {
            if a >= b {
                exact((a / b).sqrt())
            } else {
                not_included()
            }
        }
        // at d = 1 the ANOVA kernel is a Gaussian, so these cells are not
        // settled by the multivariate argument
        (Anova { .. }, _) => {
            if d >= 2 {
                not_included()
            } else {
                Cell::Numeric
            }
        }
        (_, Anova { .. }) => not_included(),
        _ => Cell::Numeric,
    })
}
