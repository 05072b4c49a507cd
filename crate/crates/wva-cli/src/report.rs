//! Run report: every headline number a scenario produces, each labeled
//! with how it was obtained, plus enough provenance to rerun the job.
//!
//! The report serializes two ways: a TOML document (`run_report.toml`) and
//! a long-format CSV table (`long_table.csv`) with one row per quantity.

use std::path::Path;

use serde::Serialize;

use crate::config::ConfigEcho;
use crate::error::Result;
use crate::output;

/// How a reported number was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SourceLabel {
    /// Closed-form expression evaluated without series truncation.
    #[serde(rename = "analytic-exact")]
    AnalyticExact,
    /// First-order (weak-coupling) expression.
    #[serde(rename = "analytic-approx")]
    AnalyticApprox,
    /// Computed from the numerically evolved state, noiseless.
    #[serde(rename = "simulated")]
    Simulated,
    /// Estimated from synthetic photon counts.
    #[serde(rename = "fitted")]
    Fitted,
}

impl SourceLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            SourceLabel::AnalyticExact => "analytic-exact",
            SourceLabel::AnalyticApprox => "analytic-approx",
            SourceLabel::Simulated => "simulated",
            SourceLabel::Fitted => "fitted",
        }
    }
}

/// One labeled number. `sigma` is a one-standard-deviation uncertainty
/// where the estimator provides one, absent for deterministic values.
#[derive(Debug, Clone, Serialize)]
pub struct Quantity {
    pub scenario: String,
    pub name: String,
    pub source: SourceLabel,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub scenario: String,
    pub tool_version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub config: ConfigEcho,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub provenance: Provenance,
    pub quantities: Vec<Quantity>,
}

impl RunReport {
    pub fn new(echo: ConfigEcho) -> Self {
        RunReport {
            provenance: Provenance {
                scenario: echo.mode.clone(),
                tool_version: env!("CARGO_PKG_VERSION").into(),
                seed: echo.seed,
                config: echo,
            },
            quantities: Vec::new(),
        }
    }

    pub fn push(&mut self, name: impl Into<String>, source: SourceLabel, value: f64) {
        self.quantities.push(Quantity {
            scenario: self.provenance.scenario.clone(),
            name: name.into(),
            source,
            value,
            sigma: None,
        });
    }

    pub fn push_with_sigma(
        &mut self,
        name: impl Into<String>,
        source: SourceLabel,
        value: f64,
        sigma: f64,
    ) {
        self.quantities.push(Quantity {
            scenario: self.provenance.scenario.clone(),
            name: name.into(),
            source,
            value,
            sigma: Some(sigma),
        });
    }

    /// Writes the TOML report and the long-format CSV side by side.
    pub fn write(&self, out_dir: &Path) -> Result<()> {
        let toml_text = toml::to_string_pretty(self).map_err(|e| {
            crate::error::CliError::config(format!("cannot serialize run report: {e}"))
        })?;
        std::fs::write(out_dir.join("run_report.toml"), toml_text)?;

        let mut table = String::from("scenario,quantity,source,value,sigma\n");
        for q in &self.quantities {
            table.push_str(&format!(
                "{},{},{},{},{}\n",
                q.scenario,
                q.name,
                q.source.as_str(),
                output::fmt_f64(q.value),
                q.sigma.map(output::fmt_f64).unwrap_or_default()
            ));
        }
        std::fs::write(out_dir.join("long_table.csv"), table)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{ExperimentConfig, Mode};

    #[test]
    fn report_round_trips_through_toml() {
        let mut report = RunReport::new(ExperimentConfig::defaults(Mode::Validate).echo());
        report.push("probability", SourceLabel::AnalyticExact, 0.25);
        report.push_with_sigma("shift", SourceLabel::Fitted, 1.5, 0.1);
        let text = toml::to_string_pretty(&report).unwrap();
        assert!(text.contains("analytic-exact"));
        assert!(text.contains("tool_version"));
        let parsed: toml::Value = text.parse().unwrap();
        let quantities = parsed["quantities"].as_array().unwrap();
        assert_eq!(quantities.len(), 2);
        assert_eq!(quantities[1]["sigma"].as_float(), Some(0.1));
    }

    #[test]
    fn long_table_lists_one_row_per_quantity() {
        let dir = tempfile::tempdir().unwrap();
        let mut report = RunReport::new(ExperimentConfig::defaults(Mode::Validate).echo());
        report.push("probability", SourceLabel::Simulated, 0.5);
        report.write(dir.path()).unwrap();
        let table = std::fs::read_to_string(dir.path().join("long_table.csv")).unwrap();
        let mut lines = table.lines();
        assert_eq!(lines.next(), Some("scenario,quantity,source,value,sigma"));
        assert_eq!(lines.next(), Some("validate,probability,simulated,0.5,"));
        assert!(dir.path().join("run_report.toml").exists());
    }
}
