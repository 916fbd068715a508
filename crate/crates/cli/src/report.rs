use clap::ValueEnum;
use kernel_inclusion::hilbert_schmidt::{CoefficientSequence, EquivNorm};
use kernel_inclusion::inclusion::{
    InclusionVerdict, Lambda, RatioProfile, Relation, TableParams, TableReport, VerdictRecord,
};
use kernel_inclusion::kernel::{KernelSpec, SpecRecord};
use kernel_inclusion::psd::{PsdCertificate, SamplerConfig, ViolationWitness};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Human-readable text.
    Text,
    /// One JSON object per line.
    Record,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecideRecord {
    pub command: String,
    pub dim: usize,
    pub k: SpecRecord,
    pub g: SpecRecord,
    pub verdict: VerdictRecord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileRecord {
    pub command: String,
    pub dim: usize,
    pub k: SpecRecord,
    pub g: SpecRecord,
    pub verdict: VerdictRecord,
    pub profile: RatioProfile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub min_eigenvalue: f64,
    pub scale: f64,
    pub pass: bool,
    pub resampled: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertifyRecord {
    pub command: String,
    pub dim: usize,
    pub k: SpecRecord,
    pub g: SpecRecord,
    pub lambda: f64,
    pub sampler: SamplerConfig,
    pub passed: usize,
    pub pass_fraction: f64,
    /// Smallest min_eigenvalue/scale over the trials.
    pub worst_relative_eigenvalue: f64,
    pub trials: Vec<TrialRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FalsifyRecord {
    pub command: String,
    pub dim: usize,
    pub k: SpecRecord,
    pub g: SpecRecord,
    pub lambda: f64,
    pub sampler: SamplerConfig,
    pub witness: Option<ViolationWitness>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HsRecord {
    pub command: String,
    pub a: CoefficientSequence,
    pub b: CoefficientSequence,
    pub verdict: VerdictRecord,
    pub equivalence: EquivNorm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableCellRecord {
    pub command: String,
    pub dim: usize,
    pub row: String,
    pub col: String,
    pub verdict: VerdictRecord,
    pub numeric_relation: Relation,
    pub sup_estimate: Option<f64>,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableSummaryRecord {
    pub command: String,
    pub dim: usize,
    pub params: TableParams,
    pub all_agree: bool,
}

pub struct Report {
    records: Vec<String>,
    text: String,
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("report records serialize")
}

fn number(v: f64) -> String {
    if v != 0.0 && !(1e-4..1e6).contains(&v.abs()) {
        format!("{v:.10e}")
    } else {
        format!("{v:.10}")
    }
}

fn describe_lambda(l: &Lambda) -> String {
    match l {
        Lambda::Exact(v) => format!("λ = {} (exact)", number(*v)),
        Lambda::UpperBound(v) => format!("λ ≤ {}", number(*v)),
        Lambda::Unbounded => "λ = ∞".into(),
        Lambda::NotApplicable => "λ not available".into(),
    }
}

fn describe(v: &InclusionVerdict) -> String {
    let mut s = format!(
        "relation: H_K {} H_G\n{}\nmethod: {}\n",
        v.relation.symbol(),
        describe_lambda(&v.lambda),
        serde_json::to_value(v.method).unwrap().as_str().unwrap_or("?")
    );
    if let Some(w) = &v.witness {
        s.push_str(&format!("witness: {}\n", json(w)));
    }
    if let Some(p) = &v.provenance {
        s.push_str(&format!("provenance: {}\n", json(p)));
    }
    s
}

impl Report {
    pub fn decide(k: &KernelSpec, g: &KernelSpec, v: &InclusionVerdict) -> Self {
        let rec = DecideRecord {
            command: "decide".into(),
            dim: k.dim(),
            k: k.to_record(),
            g: g.to_record(),
            verdict: v.to_record(),
        };
        Report {
            records: vec![json(&rec)],
            text: describe(v),
        }
    }

    pub fn ratio_profile(k: &KernelSpec, g: &KernelSpec, v: &InclusionVerdict, profile: RatioProfile) -> Self {
        let mut text = describe(v);
        text.push_str(&format!(
            "sup estimate: {:.10e}\nblowup: {:?}\nsamples: {}\n",
            profile.sup_estimate,
            profile.blowup_kind,
            profile.grid.len()
        ));
        let rec = ProfileRecord {
            command: "ratio-profile".into(),
            dim: k.dim(),
            k: k.to_record(),
            g: g.to_record(),
            verdict: v.to_record(),
            profile,
        };
        Report {
            records: vec![json(&rec)],
            text,
        }
    }

    pub fn certify(k: &KernelSpec, g: &KernelSpec, lambda: f64, cfg: &SamplerConfig, certs: &[PsdCertificate]) -> Self {
        let passed = certs.iter().filter(|c| c.pass).count();
        let worst = certs
            .iter()
            .map(|c| if c.scale > 0.0 { c.min_eigenvalue / c.scale } else { c.min_eigenvalue })
            .fold(f64::INFINITY, f64::min);
        let rec = CertifyRecord {
            command: "certify".into(),
            dim: k.dim(),
            k: k.to_record(),
            g: g.to_record(),
            lambda,
            sampler: *cfg,
            passed,
            pass_fraction: passed as f64 / certs.len().max(1) as f64,
            worst_relative_eigenvalue: worst,
            trials: certs
                .iter()
                .enumerate()
                .map(|(trial, c)| TrialRecord {
                    trial,
                    min_eigenvalue: c.min_eigenvalue,
                    scale: c.scale,
                    pass: c.pass,
                    resampled: c.resampled,
                })
                .collect(),
        };
        let text = format!(
            "λ tested: {lambda}\nPSD trials: {passed}/{} ({} points each, tolerance {:e}·scale)\nworst min eigenvalue / scale: {worst:.6e}\n",
            certs.len(),
            cfg.n_points,
            cfg.tolerance
        );
        Report {
            records: vec![json(&rec)],
            text,
        }
    }

    pub fn falsify(k: &KernelSpec, g: &KernelSpec, lambda: f64, cfg: &SamplerConfig, w: Option<ViolationWitness>) -> Self {
        let text = match &w {
            Some(w) => format!(
                "violation of K ≪ {lambda}·G found on {} points\ny*(λG − K)y = {:.6e} (scale {:.3e})\n",
                w.points.len(),
                w.quadratic_form,
                w.scale
            ),
            None => format!("no violation of K ≪ {lambda}·G found within the search budget\n"),
        };
        let rec = FalsifyRecord {
            command: "falsify".into(),
            dim: k.dim(),
            k: k.to_record(),
            g: g.to_record(),
            lambda,
            sampler: *cfg,
            witness: w,
        };
        Report {
            records: vec![json(&rec)],
            text,
        }
    }

    pub fn hs(a: &CoefficientSequence, b: &CoefficientSequence, v: &InclusionVerdict, e: &EquivNorm) -> Self {
        let mut text = describe(v);
        text.push_str(&match (e.holds, e.alpha, e.beta) {
            (true, Some(al), Some(be)) => format!("norm equivalence: yes, {al} a ≤ b ≤ {be} a on supp a\n"),
            _ => "norm equivalence: no\n".into(),
        });
        let rec = HsRecord {
            command: "hs".into(),
            a: a.clone(),
            b: b.clone(),
            verdict: v.to_record(),
            equivalence: *e,
        };
        Report {
            records: vec![json(&rec)],
            text,
        }
    }

    pub fn table(t: TableReport) -> Self {
        let mut records: Vec<String> = t
            .cells
            .iter()
            .map(|c| {
                json(&TableCellRecord {
                    command: "table".into(),
                    dim: t.dim,
                    row: c.row.short_name().into(),
                    col: c.col.short_name().into(),
                    verdict: c.verdict.to_record(),
                    numeric_relation: c.check.numeric.relation,
                    sup_estimate: Some(c.check.sup_estimate).filter(|v| v.is_finite()),
                    agrees: c.check.agrees(),
                })
            })
            .collect();
        records.push(json(&TableSummaryRecord {
            command: "table".into(),
            dim: t.dim,
            params: t.params,
            all_agree: t.all_agree(),
        }));
        let mut text = t.render();
        for c in &t.cells {
            if c.row != c.col && c.verdict.lambda.value().is_some() {
                text.push_str(&format!(
                    "{} {} {}: {}\n",
                    c.row.short_name(),
                    c.verdict.relation.symbol(),
                    c.col.short_name(),
                    describe_lambda(&c.verdict.lambda)
                ));
            }
        }
        if !t.all_agree() {
            text.push_str("cells marked ! disagree with the numeric engine\n");
        }
        Report { records, text }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Record => {
                let mut s = self.records.join("\n");
                s.push('\n');
                s
            }
        }
    }
}
