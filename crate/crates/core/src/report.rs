//! Run configuration, the chi-specification mini-language, and report
//! rendering (JSON and CSV) with a stable schema.
//!
//! Reports are byte-identical across runs with the same configuration and
//! seeds; wall-clock timings are therefore opt-in.

use crate::gfield::{Field, FieldElement};
use crate::induce::{fit_c, Certificate, FitError, IdentityOutcome};
use crate::pbw::PChar;
use crate::rootsys::RootSystem;
use serde::Serialize;
use thiserror::Error;

pub const SCHEMA_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error, PartialEq, Eq)]
#[error("chi spec error at column {col}: {msg}")]
pub struct SpecParseError {
    pub col: usize,
    pub msg: String,
}

fn err(col: usize, msg: impl Into<String>) -> SpecParseError {
    SpecParseError { col, msg: msg.into() }
}

/// Parses a root written as a coefficient string like `a1+2a2`.
pub fn parse_root(rs: &RootSystem, s: &str) -> Option<usize> {
    let mut coeffs = vec![0i64; rs.rank];
    for term in s.split('+') {
        let term = term.trim();
        let at = term.find('a')?;
        let coeff: i64 = if at == 0 { 1 } else { term[..at].parse().ok()? };
        let idx: usize = term[at + 1..].parse().ok()?;
        if idx == 0 || idx > rs.rank {
            return None;
        }
        coeffs[idx - 1] += coeff;
    }
    rs.root_index(&coeffs)
}

/// The chi mini-language: `zero`, `levi:J=1,2` (standard Levi form with unit
/// values), or explicit `f[a1]=1;h1=2` assignments. Nonzero e-values are
/// rejected.
pub fn parse_chi_spec(field: &Field, rs: &RootSystem, spec: &str) -> Result<PChar, SpecParseError> {
    let spec = spec.trim();
    if spec.is_empty() || spec == "zero" {
        return Ok(PChar::zero(field, rs));
    }
    if let Some(rest) = spec.strip_prefix("levi:") {
        let rest = rest.trim();
        let body = rest
            .strip_prefix("J=")
            .or_else(|| rest.strip_prefix("j="))
            .ok_or_else(|| err(6, "expected levi:J=<indices>"))?;
        let mut j_set = Vec::new();
        if !body.trim().is_empty() {
            for part in body.split(',') {
                let idx: usize = part
                    .trim()
                    .parse()
                    .map_err(|_| err(spec.find(part).unwrap_or(0) + 1, "bad simple-root index"))?;
                if idx == 0 || idx > rs.rank {
                    return Err(err(
                        spec.find(part).unwrap_or(0) + 1,
                        format!("simple-root index {idx} out of range 1..={}", rs.rank),
                    ));
                }
                j_set.push(idx - 1);
            }
        }
        return Ok(PChar::standard_levi(field, rs, &j_set));
    }
    let mut chi = PChar::zero(field, rs);
    let mut offset = 0usize;
    for assign in spec.split(';') {
        let col = offset + 1;
        offset += assign.len() + 1;
        let assign = assign.trim();
        if assign.is_empty() {
            continue;
        }
        let eq = assign
            .find('=')
            .ok_or_else(|| err(col, "expected <target>=<value>"))?;
        let (target, value_str) = (assign[..eq].trim(), assign[eq + 1..].trim());
        let value = field
            .parse(value_str)
            .map_err(|_| err(col + eq + 1, format!("bad field element '{value_str}'")))?;
        if let Some(root_str) = target.strip_prefix("f[").and_then(|t| t.strip_suffix(']')) {
            let root = parse_root(rs, root_str)
                .ok_or_else(|| err(col + 2, format!("unknown root '{root_str}'")))?;
            chi.f_vals[root] = value;
        } else if let Some(root_str) = target.strip_prefix("e[").and_then(|t| t.strip_suffix(']')) {
            if !field.is_zero(&value) {
                return Err(err(
                    col,
                    format!("chi must vanish on the positive part: e[{root_str}] set nonzero"),
                ));
            }
        } else if let Some(idx_str) = target.strip_prefix('h') {
            let idx: usize = idx_str
                .parse()
                .map_err(|_| err(col, format!("bad coroot index '{idx_str}'")))?;
            if idx == 0 || idx > rs.rank {
                return Err(err(col, format!("coroot index {idx} out of range 1..={}", rs.rank)));
            }
            chi.h_vals[idx - 1] = value;
        } else {
            return Err(err(col, format!("unknown target '{target}'")));
        }
    }
    Ok(chi)
}

/// Canonical rendering of a p-character, inverse to [`parse_chi_spec`] up to
/// normalization.
pub fn render_chi_spec(field: &Field, rs: &RootSystem, chi: &PChar) -> String {
    if chi.is_zero(field) {
        return "zero".into();
    }
    // standard Levi form: unit values exactly on some simple roots, zero h
    let mut j_set = Vec::new();
    let mut levi_form = chi.h_vals.iter().all(|v| field.is_zero(v));
    if levi_form {
        for (root, v) in chi.f_vals.iter().enumerate() {
            if field.is_zero(v) {
                continue;
            }
            if rs.roots[root].height == 1 && *v == field.one() {
                j_set.push(rs.roots[root].coeffs.iter().position(|&c| c == 1).unwrap() + 1);
            } else {
                levi_form = false;
                break;
            }
        }
    }
    if levi_form && !j_set.is_empty() {
        j_set.sort_unstable();
        let parts: Vec<String> = j_set.iter().map(|j| j.to_string()).collect();
        return format!("levi:J={}", parts.join(","));
    }
    let mut parts = Vec::new();
    for (root, v) in chi.f_vals.iter().enumerate() {
        if !field.is_zero(v) {
            parts.push(format!("f[{}]={}", rs.display_root(root), field.display(v)));
        }
    }
    for (i, v) in chi.h_vals.iter().enumerate() {
        if !field.is_zero(v) {
            parts.push(format!("h{}={}", i + 1, field.display(v)));
        }
    }
    parts.join(";")
}

/// Echo of the resolved run configuration, embedded in every report.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct RunConfig {
    #[serde(rename = "type")]
    pub type_label: String,
    pub p: u64,
    pub m: usize,
    pub levi: Vec<usize>,
    pub chi: String,
    pub lambda: Option<Vec<String>>,
    pub sweep: bool,
    pub seed: u64,
    pub chop_seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateJson {
    pub lambda: Vec<String>,
    #[serde(rename = "R_direct")]
    pub r_direct: String,
    #[serde(rename = "R_factors")]
    pub r_factors: Vec<String>,
    pub simple: bool,
    pub witness_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Vec<String>>>,
    pub status: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub confirmed: usize,
    pub no_claim: usize,
    pub violations: usize,
    pub total: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub config: RunConfig,
    pub certificates: Vec<CertificateJson>,
    pub fitted_c: Option<String>,
    pub summary: Summary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chop_disagreements: Option<Vec<Vec<String>>>,
    pub version: String,
}

pub fn certificate_json(field: &Field, cert: &Certificate, emit_witness: bool) -> CertificateJson {
    let witness_dim = cert.witness.as_ref().map(|w| w.rows());
    let witness = if emit_witness {
        cert.witness.as_ref().map(|w| {
            (0..w.rows())
                .map(|i| (0..w.cols()).map(|j| field.display(&w.get(i, j))).collect())
                .collect()
        })
    } else {
        None
    };
    CertificateJson {
        lambda: cert.lambda.iter().map(|v| field.display(v)).collect(),
        r_direct: field.display(&cert.r_direct),
        r_factors: cert.r_factors.iter().map(|v| field.display(v)).collect(),
        simple: cert.simple,
        witness_dim,
        witness,
        status: cert.status.as_str().into(),
    }
}

/// Assembles the report; the fitted constant is included when some swept
/// point has nonvanishing scalar, and closed-formula inconsistency is a hard
/// error.
pub fn build_report(
    field: &Field,
    config: RunConfig,
    certs: &[Certificate],
    emit_witness: bool,
    wall_ms: Option<u64>,
) -> Result<Report, FitError> {
    let fitted_c = match fit_c(field, certs) {
        Ok(c) => Some(field.display(&c)),
        Err(FitError::NoNonvanishingPoint) => None,
        Err(e @ FitError::Inconsistent(_)) => return Err(e),
    };
    let confirmed = certs
        .iter()
        .filter(|c| c.status == crate::induce::TheoremStatus::Confirmed)
        .count();
    let violations = certs
        .iter()
        .filter(|c| c.status == crate::induce::TheoremStatus::Violation)
        .count();
    let no_claim = certs.len() - confirmed - violations;
    Ok(Report {
        config,
        certificates: certs
            .iter()
            .map(|c| certificate_json(field, c, emit_witness))
            .collect(),
        fitted_c,
        summary: Summary {
            confirmed,
            no_claim,
            violations,
            total: certs.len(),
            wall_ms,
        },
        chop_disagreements: None,
        version: SCHEMA_VERSION.into(),
    })
}

pub fn render_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

/// CSV columns: `lambda_1..lambda_l, R_direct, simple, status, witness_dim`.
pub fn render_csv(report: &Report) -> String {
    let rank = report
        .certificates
        .first()
        .map(|c| c.lambda.len())
        .unwrap_or(0);
    let mut out = String::new();
    for i in 1..=rank {
        out.push_str(&format!("lambda_{i},"));
    }
    out.push_str("R_direct,simple,status,witness_dim\n");
    for cert in &report.certificates {
        for v in &cert.lambda {
            out.push_str(v);
            out.push(',');
        }
        let wd = cert
            .witness_dim
            .map(|d| d.to_string())
            .unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{}\n",
            cert.r_direct, cert.simple, cert.status, wd
        ));
    }
    out
}

/// Plain-text rendering of the identity suite: one pass/fail line each.
pub fn render_identities(items: &[IdentityOutcome]) -> String {
    let mut out = String::new();
    for item in items {
        let mark = if !item.passed {
            "FAIL"
        } else if item.vacuous {
            "PASS (vacuous)"
        } else {
            "PASS"
        };
        out.push_str(&format!("{:32} {}\n", item.name, mark));
        if !item.detail.is_empty() && !item.passed {
            out.push_str(&format!("    {}\n", item.detail));
        }
    }
    out
}

/// Parses a weight given as comma-separated field-element strings.
pub fn parse_lambda(field: &Field, rank: usize, s: &str) -> Result<Vec<FieldElement>, SpecParseError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != rank {
        return Err(err(1, format!("expected {rank} comma-separated values, got {}", parts.len())));
    }
    parts
        .iter()
        .map(|part| {
            field
                .parse(part.trim())
                .map_err(|_| err(s.find(part).unwrap_or(0) + 1, format!("bad field element '{part}'")))
        })
        .collect()
}
