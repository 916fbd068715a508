//! Deciding H_K ⊆ H_G for catalog kernels: a closed-form table, a numeric
//! density-ratio analyzer, and the cross-check between the two.

mod numeric;
mod symbolic;
mod verdict;

use serde::{Deserialize, Serialize};

pub use numeric::{decide_numeric, BlowupKind, GridConfig, RatioProfile, RatioSample};
pub use symbolic::{
    bspline_expl1_bound, bspline_expl2_bound, gaussian_anova_lambda, gaussian_expl1_bound, gaussian_expl2_bound,
    gaussian_imq_bound, imq_expl1_bound, imq_expl2_bound, imq_pair_lambda, sinc_anova_lambda, sinc_gaussian_lambda,
};
pub use verdict::{InclusionVerdict, Lambda, Method, Provenance, Relation, VerdictRecord, Witness};

use crate::error::{Error, Result};
use crate::kernel::{BaseFamily, KernelSpec};
use symbolic::Cell;

/// Decides H_K ⊆ H_G. Catalog pairs go through the closed-form table, cells
/// the table leaves open go to [`decide_numeric`], and combinators are
/// reduced with the kernel algebra rules.
pub fn decide(k: &KernelSpec, g: &KernelSpec) -> Result<InclusionVerdict> {
    if k.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: k.dim(),
            got: g.dim(),
        });
    }
    if k == g {
        return Ok(InclusionVerdict::equal(Lambda::Exact(1.0), Method::SymbolicTable));
    }
    match (k.base_family(), g.base_family()) {
        (Some(_), Some(_)) => match symbolic::table_cell(k, g)? {
            Cell::Decided(v) => Ok(v),
            Cell::Numeric => decide_open_cell(k, g),
        },
        _ => crate::algebra::reduce(k, g),
    }
}

fn decide_open_cell(k: &KernelSpec, g: &KernelSpec) -> Result<InclusionVerdict> {
    let cfg = GridConfig::default();
    let (forward, _) = decide_numeric(k, g, &cfg)?;
    if !forward.relation.holds() {
        return Ok(forward);
    }
    let (backward, _) = decide_numeric(g, k, &cfg)?;
    Ok(if backward.relation.holds() {
        InclusionVerdict {
            relation: Relation::Equal,
            ..forward
        }
    } else {
        forward
    })
}

/// Outcome of running both engines on one pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossValidation {
    pub symbolic: InclusionVerdict,
    pub numeric: InclusionVerdict,
    pub blowup_kind: BlowupKind,
    #[serde(with = "verdict::extended_float")]
    pub sup_estimate: f64,
    pub relation_agrees: bool,
    /// |sup − λ| / λ when the symbolic λ is exact.
    pub lambda_rel_error: Option<f64>,
    /// Whether the numeric supremum stays below a symbolic upper bound.
    pub bound_respected: Option<bool>,
}

impl CrossValidation {
    pub const LAMBDA_TOLERANCE: f64 = 0.02;

    pub fn agrees(&self) -> bool {
        self.relation_agrees
            && self.lambda_rel_error.is_none_or(|e| e <= Self::LAMBDA_TOLERANCE)
            && self.bound_respected != Some(false)
    }
}

fn compare(symbolic: InclusionVerdict, numeric: InclusionVerdict, profile: &RatioProfile) -> CrossValidation {
    let relation_agrees =
        symbolic.relation == Relation::Unknown || symbolic.relation.holds() == numeric.relation.holds();
    let both_hold = symbolic.relation.holds() && numeric.relation.holds();
    let lambda_rel_error = match symbolic.lambda {
        Lambda::Exact(l) if both_hold => Some((profile.sup_estimate - l).abs() / l),
        _ => None,
    };
    let bound_respected = match symbolic.lambda {
        Lambda::UpperBound(b) if both_hold => Some(profile.sup_estimate <= b * (1.0 + 1e-9)),
        _ => None,
    };
    CrossValidation {
        symbolic,
        numeric,
        blowup_kind: profile.blowup_kind,
        sup_estimate: profile.sup_estimate,
        relation_agrees,
        lambda_rel_error,
        bound_respected,
    }
}

/// Runs [`decide`] and [`decide_numeric`] and fails with
/// [`Error::Disagreement`] when their relations differ or an exact λ is
/// missed by more than 2%.
pub fn cross_validate(k: &KernelSpec, g: &KernelSpec) -> Result<CrossValidation> {
    let symbolic = decide(k, g)?;
    let (numeric, profile) = decide_numeric(k, g, &GridConfig::default())?;
    let report = compare(symbolic, numeric, &profile);
    if report.agrees() {
        Ok(report)
    } else {
        Err(Error::Disagreement {
            symbolic: Box::new(report.symbolic),
            numeric: Box::new(report.numeric),
        })
    }
}

/// Parameters of the six table families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TableParams {
    pub gamma: f64,
    pub sigma1: f64,
    pub sigma2: f64,
    pub beta: f64,
    pub p: u32,
    pub tau: f64,
}

impl Default for TableParams {
    fn default() -> Self {
        Self {
            gamma: 1.0,
            sigma1: 1.0,
            sigma2: 1.0,
            beta: 1.5,
            p: 4,
            tau: 1.0,
        }
    }
}

impl TableParams {
    /// Parses `gamma=1,sigma1=1,...`; unspecified keys keep their defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = Self::default();
        let mut seen = std::collections::BTreeSet::new();
        let mut column = 1;
        for item in text.split(',') {
            let position = format!("column {column}");
            column += item.chars().count() + 1;
            let item = item.trim();
            if item.is_empty() {
                continue;
            }
            let Some((key, value)) = item.split_once('=') else {
                return Err(Error::Parse {
                    position,
                    message: format!("expected key=value, got `{item}`"),
                });
            };
            let key = key.trim();
            if !seen.insert(key.to_string()) {
                return Err(Error::Parse {
                    position,
                    message: format!("duplicate parameter `{key}`"),
                });
            }
            let bad = |message: String| Error::Parse {
                position: position.clone(),
                message,
            };
            let value = value.trim();
            if key == "p" {
                out.p = value.parse().map_err(|_| bad(format!("`{value}` is not a nonnegative integer")))?;
                continue;
            }
            let v: f64 = value.parse().map_err(|_| bad(format!("`{value}` is not a number")))?;
            match key {
                "gamma" => out.gamma = v,
                "sigma1" => out.sigma1 = v,
                "sigma2" => out.sigma2 = v,
                "beta" => out.beta = v,
                "tau" => out.tau = v,
                other => return Err(bad(format!("unknown table parameter `{other}`"))),
            }
        }
        Ok(out)
    }

    pub fn kernel(&self, family: BaseFamily, d: usize) -> Result<KernelSpec> {
        match family {
            BaseFamily::BSpline => KernelSpec::bspline(self.p, d),
            BaseFamily::Gaussian => KernelSpec::gaussian(self.gamma, d),
            BaseFamily::ExpL1 => KernelSpec::expl1(self.sigma1, d),
            BaseFamily::ExpL2 => KernelSpec::expl2(self.sigma2, d),
            BaseFamily::InverseMultiquadric => KernelSpec::inverse_multiquadric(self.beta, d),
            BaseFamily::Anova => KernelSpec::anova(self.tau, d),
            BaseFamily::Sinc => KernelSpec::sinc(d),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableCell {
    pub row: BaseFamily,
    pub col: BaseFamily,
    pub verdict: InclusionVerdict,
    pub check: CrossValidation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    pub dim: usize,
    pub params: TableParams,
    /// Row-major over [`BaseFamily::TABLE`].
    pub cells: Vec<TableCell>,
}

impl TableReport {
    pub fn cell(&self, row: BaseFamily, col: BaseFamily) -> Option<&TableCell> {
        self.cells.iter().find(|c| c.row == row && c.col == col)
    }

    pub fn all_agree(&self) -> bool {
        self.cells.iter().all(|c| c.check.agrees())
    }

    /// The relation matrix with row family ⊆ column family symbols.
    pub fn render(&self) -> String {
        let mut out = String::from("H_K \\ H_G");
        for c in BaseFamily::TABLE {
            out.push_str(&format!("\t{}", c.short_name()));
        }
        out.push('\n');
        for r in BaseFamily::TABLE {
            out.push_str(r.short_name());
            for c in BaseFamily::TABLE {
                let cell = self.cell(r, c).expect("full table");
                let mark = if cell.check.agrees() { "" } else { "!" };
                out.push_str(&format!("\t{}{mark}", cell.verdict.relation.symbol()));
            }
            out.push('\n');
        }
        out
    }
}

/// The 6×6 inclusion table at dimension `d`, every cell cross-checked by the
/// numeric engine.
pub fn reproduce_table(d: usize, params: &TableParams) -> Result<TableReport> {
    if d == 0 {
        return Err(Error::invalid("dim", "dimension must be at least 1"));
    }
    let mut cells = Vec::with_capacity(36);
    for row in BaseFamily::TABLE {
        let k = params.kernel(row, d)?;
        for col in BaseFamily::TABLE {
            let g = params.kernel(col, d)?;
            let verdict = decide(&k, &g)?;
            let (numeric, profile) = decide_numeric(&k, &g, &GridConfig::default())?;
            let check = compare(verdict.clone(), numeric, &profile);
            cells.push(TableCell {
                row,
                col,
                verdict,
                check,
            });
        }
    }
    Ok(TableReport {
        dim: d,
        params: *params,
        cells,
    })
}
