//! Output records (the JSON shapes) and their pretty renderings.

use std::fmt::Write;

use drinfeld_ext::json::{CertificateJson, MatrixJson, TModuleBody, TModuleJson};
use drinfeld_ext::verify::SuiteReport;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualOut {
    pub pi: TModuleJson,
    pub dual: TModuleJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BidualOut {
    pub module: TModuleJson,
    /// The c with `c Φ c^{-1}` monic, when `--normalize` rescaled the input.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub scale: Option<String>,
    pub xi: TModuleJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CarlitzOut {
    pub m: usize,
    pub n: usize,
    pub pi: TModuleJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReduceOut {
    pub kind: String,
    #[serde(flatten)]
    pub certificate: CertificateJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitOut {
    pub delta: drinfeld_ext::json::BiderivationJson,
    pub bound: usize,
    pub splits: bool,
    pub witness: Option<MatrixJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActOut {
    pub kind: String,
    pub b: String,
    #[serde(flatten)]
    pub certificate: CertificateJson,
}

fn phi_t(m: &TModuleJson) -> MatrixJson {
    match &m.body {
        TModuleBody::Matrix { phi_t, .. } => phi_t.clone(),
        TModuleBody::Drinfeld { drinfeld } => {
            let mut s = vec!["T".to_string()];
            s.extend(drinfeld.iter().enumerate().map(|(i, a)| format!("({a})*tau^{}", i + 1)));
            vec![vec![s.join(" + ")]]
        }
    }
}

fn matrix(out: &mut String, label: &str, rows: &MatrixJson) {
    let cols = rows.first().map_or(0, Vec::len);
    let widths: Vec<usize> =
        (0..cols).map(|j| rows.iter().map(|r| r[j].chars().count()).max().unwrap_or(0)).collect();
    let _ = writeln!(out, "{label}:");
    for row in rows {
        let cells: Vec<String> = row.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "  [ {} ]", cells.join(" | "));
    }
}

fn certificate(out: &mut String, c: &CertificateJson) {
    matrix(out, "input δ(t)", &c.input.delta_t);
    matrix(out, "reduced δ(t)", &c.reduced.delta_t);
    matrix(out, "witness U", &c.witness);
    let _ = writeln!(out, "check: {}", c.check);
}

pub fn dual(v: &DualOut) -> String {
    let mut out = String::new();
    matrix(&mut out, "Pi(t)", &phi_t(&v.pi));
    matrix(&mut out, "E^dual(t)", &phi_t(&v.dual));
    out
}

pub fn bidual(v: &BidualOut) -> String {
    let mut out = String::new();
    if let Some(c) = &v.scale {
        let _ = writeln!(out, "normalized by c = {c}");
        matrix(&mut out, "Phi(t)", &phi_t(&v.module));
    }
    matrix(&mut out, "Xi(t)", &phi_t(&v.xi));
    out
}

pub fn carlitz(v: &CarlitzOut) -> String {
    let mut out = String::new();
    matrix(&mut out, &format!("Pi(t) on Ext^1(C^⊗{}, C^⊗{})", v.m, v.n), &phi_t(&v.pi));
    out
}

pub fn reduce(v: &ReduceOut) -> String {
    let mut out = format!("kind: {}\n", v.kind);
    certificate(&mut out, &v.certificate);
    out
}

pub fn split(v: &SplitOut) -> String {
    let mut out = String::new();
    matrix(&mut out, "δ(t)", &v.delta.delta_t);
    let _ = writeln!(out, "bound: {}", v.bound);
    match &v.witness {
        Some(u) => matrix(&mut out, "splits with U", u),
        None => out.push_str("does not split\n"),
    }
    out
}

pub fn act(v: &ActOut) -> String {
    let mut out = format!("kind: {}\nb: {}\n", v.kind, v.b);
    certificate(&mut out, &v.certificate);
    out
}

pub fn verify(reports: &[SuiteReport]) -> String {
    let mut out = String::new();
    for r in reports {
        match &r.failure {
            None => {
                let _ = writeln!(out, "{:<14} ok      {} trials (seed {})", r.suite, r.trials, r.seed);
            }
            Some(f) => {
                let _ = writeln!(out, "{:<14} FAILED  trial {} of {} (seed {}): {}", r.suite, f.trial, r.trials, r.seed, f.message);
                let _ = writeln!(out, "  instance: {}", f.instance);
            }
        }
    }
    out
}
