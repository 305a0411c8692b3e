use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::ExperimentConfig;

pub const SCHEMA: &str = "welded-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    /// Must hold exactly; a failure fails the command.
    Hard,
    /// Passes within 3 sigma; fails the command only beyond 5 sigma.
    Statistical,
    /// Recorded, never fails.
    Info,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub kind: CheckKind,
    pub measured: f64,
    pub relation: Relation,
    pub bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    pub pass: bool,
    /// Whether this check fails the command.
    pub fatal: bool,
}

impl Check {
    fn build(name: &str, kind: CheckKind, measured: f64, relation: Relation, bound: f64, sigma: Option<f64>) -> Self {
        let slack = |k: f64| sigma.map_or(0.0, |s| k * s);
        let holds = |k: f64| match relation {
            Relation::AtMost => measured <= bound + slack(k),
            Relation::AtLeast => measured >= bound - slack(k),
        };
        let pass = holds(3.0);
        let fatal = match kind {
            CheckKind::Hard => !pass,
            CheckKind::Statistical => !holds(5.0),
            CheckKind::Info => false,
        };
        Self {
            name: name.into(),
            kind,
            measured,
            relation,
            bound,
            sigma,
            pass,
            fatal,
        }
    }

    pub fn at_most(name: &str, measured: f64, bound: f64) -> Self {
        Self::build(name, CheckKind::Hard, measured, Relation::AtMost, bound, None)
    }

    pub fn at_least(name: &str, measured: f64, bound: f64) -> Self {
        Self::build(name, CheckKind::Hard, measured, Relation::AtLeast, bound, None)
    }

    pub fn holds(name: &str, ok: bool) -> Self {
        Self::at_least(name, ok as u8 as f64, 1.0)
    }

    pub fn statistical(name: &str, measured: f64, bound: f64, sigma: f64) -> Self {
        Self::build(name, CheckKind::Statistical, measured, Relation::AtMost, bound, Some(sigma))
    }

    pub fn info(name: &str, measured: f64, relation: Relation, bound: f64) -> Self {
        Self::build(name, CheckKind::Info, measured, relation, bound, None)
    }

    pub fn prefixed(mut self, prefix: &str) -> Self {
        self.name = format!("{prefix}/{}", self.name);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub package: String,
    pub version: String,
    pub scalar: String,
}

impl Default for Environment {
    fn default() -> Self {
        Self {
            package: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            scalar: "f64".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub config: ExperimentConfig,
    pub checks: Vec<Check>,
    pub data: Value,
    pub environment: Environment,
}

impl Report {
    pub fn new(command: &str, config: &ExperimentConfig, checks: Vec<Check>, data: Value) -> Self {
        Self {
            schema: SCHEMA.into(),
            command: command.into(),
            config: config.clone(),
            checks,
            data,
            environment: Environment::default(),
        }
    }

    pub fn passed(&self) -> bool {
        !self.checks.iter().any(|c| c.fatal)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Side files written next to the report, as `(suffix, contents)`.
pub type Attachments = Vec<(String, String)>;
