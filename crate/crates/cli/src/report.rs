//! Serializable estimate and witness reports.

use std::fmt::Write;

use mixwidth_core::psi::{psi, PsiEstimate};
use mixwidth_core::witness::{best_witness_lower_bound, v_inclusion_scale};
use mixwidth_core::{Certificate, Instance, ReciprocalPoint};
use serde::{Deserialize, Serialize};

use crate::input::InstanceFile;
use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// A real number that serializes `+∞` as the string `"inf"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Finite(f64),
    Text(String),
}

impl Value {
    pub fn of(x: f64) -> Self {
        if x.is_finite() {
            Value::Finite(x)
        } else {
            Value::Text(if x > 0.0 { "inf" } else { "-inf" }.to_string())
        }
    }

    pub fn to_f64(&self) -> Option<f64> {
        match self {
            Value::Finite(x) => Some(*x),
            Value::Text(s) => s.parse().ok(),
        }
    }
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Value::Finite(x) => write!(f, "{x}"),
            Value::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointJson {
    pub p: String,
    pub theta: String,
}

impl From<&ReciprocalPoint> for PointJson {
    fn from(pt: &ReciprocalPoint) -> Self {
        Self {
            p: pt.p().render(),
            theta: pt.theta().render(),
        }
    }
}

/// Certificate with weights as exact `"a/b"` strings. For pairs `weight` is
/// the weight of the second ball.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CertificateJson {
    Single {
        balls: Vec<usize>,
    },
    Pair {
        balls: Vec<usize>,
        weight: String,
        point: PointJson,
    },
    Triple {
        balls: Vec<usize>,
        weights: Vec<String>,
        point: PointJson,
    },
}

impl From<&Certificate> for CertificateJson {
    fn from(c: &Certificate) -> Self {
        match c {
            Certificate::Single { alpha } => CertificateJson::Single { balls: vec![*alpha] },
            Certificate::Pair {
                alpha,
                beta,
                weight,
                point,
            } => CertificateJson::Pair {
                balls: vec![*alpha, *beta],
                weight: weight.render(),
                point: point.into(),
            },
            Certificate::Triple { indices, weights, point } => CertificateJson::Triple {
                balls: indices.to_vec(),
                weights: weights.iter().map(|w| w.render()).collect(),
                point: point.into(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentJson {
    pub index: usize,
    pub value: Value,
    pub certificate: Option<CertificateJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub schema_version: u32,
    pub instance: InstanceFile,
    pub psi: Value,
    pub argmin: Vec<usize>,
    /// `n = 0`, where `n^{-1/2}` is read as `+∞`.
    pub n_zero: bool,
    pub components: Vec<ComponentJson>,
}

impl EstimateReport {
    pub fn new(inst: &Instance, est: &PsiEstimate) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            instance: InstanceFile::from_instance(inst),
            psi: Value::of(est.value),
            argmin: est.ties.clone(),
            n_zero: est.n_is_zero,
            components: est
                .components
                .iter()
                .enumerate()
                .map(|(index, c)| ComponentJson {
                    index,
                    value: Value::of(c.value),
                    certificate: c.certificate.as_ref().map(CertificateJson::from),
                })
                .collect(),
        }
    }

    pub fn compute(inst: &Instance) -> Result<Self, CliError> {
        Ok(Self::new(inst, &psi(inst)?))
    }

    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let i = &self.instance;
        let _ = writeln!(out, "m = {}, k = {}, n = {}, q = {}, sigma = {}", i.m, i.k, i.n, text(&i.q), text(&i.sigma));
        for (a, b) in i.balls.iter().enumerate() {
            let _ = writeln!(out, "  ball {a}: p = {}, theta = {}, nu = {}", text(&b.p), text(&b.theta), b.nu);
        }
        let ties: Vec<String> = self.argmin.iter().map(|j| j.to_string()).collect();
        let _ = writeln!(out, "psi = {}  (argmin {{{}}})", self.psi, ties.join(", "));
        if self.n_zero {
            let _ = writeln!(out, "n = 0: diameter convention, n^(-1/2) = inf");
        }
        for c in &self.components {
            let _ = write!(out, "  psi_{} = {}", c.index, c.value);
            match &c.certificate {
                None => {}
                Some(CertificateJson::Single { balls }) => {
                    let _ = write!(out, "  ball {}", balls[0]);
                }
                Some(CertificateJson::Pair { balls, weight, point }) => {
                    let _ = write!(
                        out,
                        "  balls {}, {} weight {}  at p = {}, theta = {}",
                        balls[0], balls[1], weight, point.p, point.theta
                    );
                }
                Some(CertificateJson::Triple { balls, weights, point }) => {
                    let _ = write!(
                        out,
                        "  balls {:?} weights [{}]  at p = {}, theta = {}",
                        balls,
                        weights.join(", "),
                        point.p,
                        point.theta
                    );
                }
            }
            out.push('\n');
        }
        out
    }
}

fn text(e: &crate::input::ExponentText) -> String {
    match e {
        crate::input::ExponentText::Text(s) => s.clone(),
        crate::input::ExponentText::Integer(i) => i.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub schema_version: u32,
    pub instance: InstanceFile,
    pub r: u64,
    pub l: u64,
    /// Largest `t` with `t·V_{r,l} ⊂ M`.
    pub scale: f64,
    pub lower_bound: Value,
    pub psi: Value,
    pub ratio: Value,
}

impl WitnessReport {
    pub fn compute(inst: &Instance) -> Result<Self, CliError> {
        let w = best_witness_lower_bound(inst)?;
        let est = psi(inst)?;
        Ok(Self {
            schema_version: SCHEMA_VERSION,
            instance: InstanceFile::from_instance(inst),
            r: w.r,
            l: w.l,
            scale: v_inclusion_scale(inst.balls(), w.r, w.l),
            lower_bound: Value::of(w.value),
            psi: Value::of(est.value),
            ratio: Value::of(w.value / est.value),
        })
    }

    pub fn render_table(&self) -> String {
        format!(
            "witness V_(r,l) with r = {}, l = {}, scale t* = {}\nlower bound = {}\npsi = {}\nlower bound / psi = {}\n",
            self.r, self.l, self.scale, self.lower_bound, self.psi, self.ratio
        )
    }
}
