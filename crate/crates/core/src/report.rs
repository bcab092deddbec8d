//! Machine-readable report emission: JSON, TSV, and plain-text renderings of
//! verification reports, byte-stable for a fixed (config, seed, version).
//!
//! Matrices are serialized entry by entry (row-major) as coefficient vectors
//! over the prime field, and the tower moduli are echoed in the manifest, so
//! a report can be re-checked without access to this implementation's field
//! encoding.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cyclo::{coeff_pairs, CycloNumber};
use crate::error::Result;
use crate::verify::{Mode, STildeSelection, ThetaSelection, VerifyConfig, VerifyReport};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CycloJson {
    pub conductor: u64,
    /// coefficients of the reduced power-basis form, numerator/denominator
    pub coeffs: Vec<(i64, i64)>,
}

impl CycloJson {
    pub fn from_value(v: &CycloNumber) -> Self {
        CycloJson {
            conductor: v.conductor(),
            coeffs: coeff_pairs(v),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ConfigJson {
    pub mode: String,
    pub n: u8,
    pub q: u64,
    pub ell: u32,
    pub partitions: Option<Vec<Vec<u32>>>,
    pub theta_selection: String,
    pub s_selection: String,
    pub char_point_budget: u64,
    pub budget: u64,
    pub trials: u32,
    pub seed: u64,
    pub check_full_oracle: bool,
}

impl ConfigJson {
    fn from_config(cfg: &VerifyConfig) -> Self {
        ConfigJson {
            mode: match cfg.mode {
                Mode::Frobenius => "frobenius".into(),
                Mode::TransposeInverse => "transpose-inverse".into(),
            },
            n: cfg.n,
            q: cfg.q,
            ell: cfg.ell,
            partitions: cfg.partitions.clone(),
            theta_selection: match cfg.theta_selection {
                ThetaSelection::All => "all".into(),
                ThetaSelection::Sample { count, seed } => format!("sample({count},{seed})"),
            },
            s_selection: match &cfg.s_selection {
                STildeSelection::AllAdmissible => "all-admissible".into(),
                STildeSelection::Explicit(v) => format!("explicit({})", v.len()),
            },
            char_point_budget: cfg.char_point_budget,
            budget: cfg.budget,
            trials: cfg.trials,
            seed: cfg.seed,
            check_full_oracle: cfg.check_full_oracle,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ModulusJson {
    pub degree: u32,
    /// ascending coefficients over GF(p), monic leading term included
    pub coeffs: Vec<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ManifestJson {
    pub tool_version: String,
    pub kind: String,
    pub config: ConfigJson,
    pub p: u64,
    pub ambient_degree: u32,
    pub moduli: Vec<ModulusJson>,
    pub elements_scanned: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_micros: Option<BTreeMap<String, u64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CaseJson {
    /// row-major entries, each entry a coefficient vector over GF(p)
    pub s_tilde: Vec<Vec<u64>>,
    #[serde(rename = "torus_T")]
    pub torus_t: String,
    pub theta_exponents: Vec<u64>,
    #[serde(rename = "torus_S")]
    pub torus_s: String,
    pub lhs: CycloJson,
    pub rhs: CycloJson,
    #[serde(rename = "match")]
    pub matched: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_match: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub micros: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SummaryJson {
    pub total: u64,
    pub passed: u64,
    pub failed: u64,
    pub vacuous: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ReportJson {
    pub manifest: ManifestJson,
    pub vacuous: bool,
    pub expect_mismatch: bool,
    pub objective_met: bool,
    pub cases: Vec<CaseJson>,
    pub summary: SummaryJson,
}

fn code_to_digits(p: u64, m: u32, code: u64) -> Vec<u64> {
    let mut v = Vec::with_capacity(m as usize);
    let mut c = code;
    for _ in 0..m {
        v.push(c % p);
        c /= p;
    }
    v
}

/// Assemble the serializable form of a report.
pub fn report_to_json(
    report: &VerifyReport,
    cfg: &VerifyConfig,
    p: u64,
    ambient_degree: u32,
    moduli: Vec<ModulusJson>,
    timings_micros: Option<BTreeMap<String, u64>>,
) -> ReportJson {
    let cases = report
        .cases
        .iter()
        .map(|c| CaseJson {
            s_tilde: c
                .s_tilde
                .entries
                .iter()
                .map(|&code| code_to_digits(p, ambient_degree, code))
                .collect(),
            torus_t: c.torus_label.clone(),
            theta_exponents: c.theta_exps.clone(),
            torus_s: c.s_label.clone(),
            lhs: CycloJson::from_value(&c.lhs),
            rhs: CycloJson::from_value(&c.rhs),
            matched: c.matched,
            oracle_match: c.oracle_match,
            detail: c.detail.clone(),
            micros: c.micros,
        })
        .collect();
    ReportJson {
        manifest: ManifestJson {
            tool_version: TOOL_VERSION.to_string(),
            kind: report.kind.clone(),
            config: ConfigJson::from_config(cfg),
            p,
            ambient_degree,
            moduli,
            elements_scanned: report.elements_scanned,
            timings_micros,
        },
        vacuous: report.vacuous,
        expect_mismatch: report.expect_mismatch,
        objective_met: report.all_passed(),
        cases,
        summary: SummaryJson {
            total: report.summary.total,
            passed: report.summary.passed,
            failed: report.summary.failed,
            vacuous: report.summary.vacuous,
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Tsv,
    Text,
}

pub fn emit_report(report: &ReportJson, format: ReportFormat) -> Result<Vec<u8>> {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(report)
                .map_err(|e| crate::error::Error::Io(e.to_string()))?;
            s.push('\n');
            Ok(s.into_bytes())
        }
        ReportFormat::Tsv => Ok(emit_tsv(report).into_bytes()),
        ReportFormat::Text => Ok(emit_text(report).into_bytes()),
    }
}

fn cyclo_field(c: &CycloJson) -> String {
    let coeffs: Vec<String> = c
        .coeffs
        .iter()
        .map(|(n, d)| if *d == 1 { n.to_string() } else { format!("{n}/{d}") })
        .collect();
    format!("N{}[{}]", c.conductor, coeffs.join(","))
}

fn matrix_field(m: &[Vec<u64>], n_cols: usize) -> String {
    m.chunks(n_cols.max(1))
        .map(|row| {
            row.iter()
                .map(|entry| {
                    entry
                        .iter()
                        .map(|d| d.to_string())
                        .collect::<Vec<_>>()
                        .join(":")
                })
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect::<Vec<_>>()
        .join(";")
}

fn emit_tsv(report: &ReportJson) -> String {
    let mut out = String::new();
    out.push_str("kind\ts_tilde\ttorus_t\ttheta\ttorus_s\tlhs\trhs\tmatch\toracle_match\n");
    let n = (report.cases.first().map(|c| c.s_tilde.len()).unwrap_or(1) as f64).sqrt() as usize;
    for c in &report.cases {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            report.manifest.kind,
            matrix_field(&c.s_tilde, n),
            c.torus_t,
            c.theta_exponents
                .iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(","),
            c.torus_s,
            cyclo_field(&c.lhs),
            cyclo_field(&c.rhs),
            c.matched,
            c.oracle_match.map(|b| b.to_string()).unwrap_or_default(),
        ));
    }
    out.push_str(&format!(
        "# summary\ttotal={}\tpassed={}\tfailed={}\tvacuous={}\n",
        report.summary.total, report.summary.passed, report.summary.failed, report.vacuous
    ));
    out
}

fn emit_text(report: &ReportJson) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{} ({}) tool {}\n",
        report.manifest.kind, report.manifest.config.mode, report.manifest.tool_version
    ));
    out.push_str(&format!(
        "config: n={} q={} ell={}\n",
        report.manifest.config.n, report.manifest.config.q, report.manifest.config.ell
    ));
    if report.vacuous {
        out.push_str("result: VACUOUS (no admissible cases)\n");
        return out;
    }
    let n = (report.cases.first().map(|c| c.s_tilde.len()).unwrap_or(1) as f64).sqrt() as usize;
    for c in report.cases.iter() {
        let status = if c.matched { "ok" } else { "MISMATCH" };
        out.push_str(&format!(
            "  [{}] s~={} T={} theta=({}) S={} lhs={} rhs={}\n",
            status,
            matrix_field(&c.s_tilde, n),
            c.torus_t,
            c.theta_exponents
                .iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(","),
            c.torus_s,
            cyclo_field(&c.lhs),
            cyclo_field(&c.rhs),
        ));
    }
    out.push_str(&format!(
        "summary: total={} passed={} failed={}{}\n",
        report.summary.total,
        report.summary.passed,
        report.summary.failed,
        if report.expect_mismatch {
            format!(
                " (objective: find mismatches; met={})",
                report.objective_met
            )
        } else {
            String::new()
        }
    ));
    out
}

pub fn parse_report(bytes: &[u8]) -> Result<ReportJson> {
    serde_json::from_slice(bytes).map_err(|e| crate::error::Error::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{verify_theorem, VerifyConfig};

    fn sample_report() -> (ReportJson, VerifyConfig) {
        let cfg = VerifyConfig::frobenius(1, 2, 2);
        let report = verify_theorem(&cfg).unwrap();
        let ctx = cfg.build_context().unwrap();
        let moduli = ctx
            .tower
            .degrees()
            .iter()
            .map(|&d| ModulusJson {
                degree: d,
                coeffs: ctx.tower.modulus(d).unwrap(),
            })
            .collect();
        (
            report_to_json(&report, &cfg, ctx.tower.p(), ctx.ambient_degree, moduli, None),
            cfg,
        )
    }

    #[test]
    fn json_round_trip_is_structural_identity() {
        let (json, _) = sample_report();
        let bytes = emit_report(&json, ReportFormat::Json).unwrap();
        let parsed = parse_report(&bytes).unwrap();
        assert_eq!(parsed, json);
    }

    #[test]
    fn json_emission_is_byte_stable() {
        let (a, _) = sample_report();
        let (b, _) = sample_report();
        let ba = emit_report(&a, ReportFormat::Json).unwrap();
        let bb = emit_report(&b, ReportFormat::Json).unwrap();
        assert_eq!(ba, bb);
    }

    #[test]
    fn empty_case_list_is_flagged_vacuous() {
        let cfg = VerifyConfig::frobenius(1, 3, 2);
        let report = crate::verify::verify_vanishing(&cfg).unwrap();
        let json = report_to_json(&report, &cfg, 3, 2, vec![], None);
        assert!(json.vacuous);
        assert_eq!(json.summary.total, 0);
        assert_eq!(json.summary.passed, 0);
        assert_eq!(json.summary.failed, 0);
        let text = String::from_utf8(emit_report(&json, ReportFormat::Text).unwrap()).unwrap();
        assert!(text.contains("VACUOUS"));
    }

    #[test]
    fn tsv_has_one_row_per_case() {
        let (json, _) = sample_report();
        let tsv = String::from_utf8(emit_report(&json, ReportFormat::Tsv).unwrap()).unwrap();
        let lines: Vec<&str> = tsv.lines().collect();
        assert_eq!(lines.len(), 1 + json.cases.len() + 1);
        assert!(lines[0].starts_with("kind\t"));
    }
}
