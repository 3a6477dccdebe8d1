//! JSON instance files:
//!
//! ```json
//! {"m": 4, "k": 4, "n": 4, "q": "2", "sigma": "2",
//!  "balls": [{"p": "inf", "theta": "2", "nu": 1}, {"p": "1", "theta": "2", "nu": 4}]}
//! ```
//!
//! Exponents are strings in the exponent grammar (`inf`, `a/b`, decimals,
//! integers); bare JSON integers are accepted too.

use std::path::Path;

use mixwidth_core::exponent::parse_exponent;
use mixwidth_core::{BallSpec, Dimensions, Exponent, Instance, TargetSpace};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExponentText {
    Text(String),
    Integer(u64),
}

impl ExponentText {
    fn as_text(&self) -> String {
        match self {
            ExponentText::Text(s) => s.clone(),
            ExponentText::Integer(i) => i.to_string(),
        }
    }
}

impl From<&Exponent> for ExponentText {
    fn from(e: &Exponent) -> Self {
        ExponentText::Text(e.render())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallFile {
    pub p: ExponentText,
    pub theta: ExponentText,
    pub nu: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub m: u64,
    pub k: u64,
    pub n: u64,
    pub q: ExponentText,
    pub sigma: ExponentText,
    pub balls: Vec<BallFile>,
}

fn field_exponent(field: &str, text: &ExponentText) -> Result<Exponent, CliError> {
    parse_exponent(&text.as_text()).map_err(|source| CliError::Field {
        field: field.to_string(),
        source,
    })
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn from_instance(inst: &Instance) -> Self {
        Self {
            m: inst.dims().m(),
            k: inst.dims().k(),
            n: inst.dims().n(),
            q: inst.q().into(),
            sigma: inst.sigma().into(),
            balls: inst
                .balls()
                .iter()
                .map(|b| BallFile {
                    p: b.p().into(),
                    theta: b.theta().into(),
                    nu: b.nu(),
                })
                .collect(),
        }
    }

    pub fn to_instance(&self) -> Result<Instance, CliError> {
        let q = field_exponent("q", &self.q)?;
        let sigma = field_exponent("sigma", &self.sigma)?;
        let mut balls = Vec::with_capacity(self.balls.len());
        for (i, b) in self.balls.iter().enumerate() {
            let p = field_exponent(&format!("balls[{i}].p"), &b.p)?;
            let theta = field_exponent(&format!("balls[{i}].theta"), &b.theta)?;
            let ball = BallSpec::new(p, theta, b.nu).map_err(|source| CliError::Field {
                field: format!("balls[{i}].nu"),
                source,
            })?;
            balls.push(ball);
        }
        let dims = Dimensions::new(self.m, self.k, self.n)?;
        let target = TargetSpace::new(q, sigma)?;
        Ok(Instance::new(dims, target, balls)?)
    }
}

pub fn load_instance(path: &Path) -> Result<Instance, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    InstanceFile::parse(&text)?.to_instance()
}

#[cfg(test)]
mod tests {
    use super::*;

    const WORKED: &str = r#"{"m": 4, "k": 4, "n": 4, "q": "2", "sigma": 2,
        "balls": [{"p": "inf", "theta": "2", "nu": 1}, {"p": "1", "theta": "2", "nu": 4}]}"#;

    #[test]
    fn parses_worked_instance() {
        let inst = InstanceFile::parse(WORKED).unwrap().to_instance().unwrap();
        assert_eq!(inst.balls().len(), 2);
        assert!(inst.balls()[0].p().is_infinite());
        assert_eq!(InstanceFile::from_instance(&inst).to_instance().unwrap(), inst);
    }

    #[test]
    fn names_the_bad_field() {
        let text = WORKED.replace(r#""theta": "2", "nu": 4"#, r#""theta": "1/0", "nu": 4"#);
        let err = InstanceFile::parse(&text).unwrap().to_instance().unwrap_err();
        assert!(err.to_string().contains("balls[1].theta"), "{err}");
        let text = WORKED.replace(r#""q": "2""#, r#""q": "0.5""#);
        let err = InstanceFile::parse(&text).unwrap().to_instance().unwrap_err();
        assert!(err.to_string().contains("field q"), "{err}");
    }

    #[test]
    fn json_errors_carry_line() {
        let err = InstanceFile::parse("{\n  \"m\": 4,\n  \"k\": x\n}").unwrap_err();
        match err {
            CliError::Json { line, .. } => assert_eq!(line, 3),
            other => panic!("{other}"),
        }
        assert!(InstanceFile::parse(r#"{"m":1,"k":1,"n":0,"q":"2","sigma":"2","balls":[],"extra":1}"#).is_err());
    }

    #[test]
    fn validation_errors_pass_through() {
        let text = WORKED.replace(r#""n": 4"#, r#""n": 9"#);
        let err = InstanceFile::parse(&text).unwrap().to_instance().unwrap_err();
        assert!(matches!(err, CliError::Core(mixwidth_core::Error::WidthIndexTooLarge { .. })));
    }
}
