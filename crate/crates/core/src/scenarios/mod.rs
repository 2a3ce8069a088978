//! Reproducible analyses of dense coding, teleportation and their classical
//! analogues, each checked against the claim registry.

mod dense;
mod framework;
mod other;
mod registry;
mod teleport;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::infoloc::JointDistribution;
use crate::serial::{sig12, SCHEMA};

pub use dense::{dense_coding_report, DenseFramework};
pub use other::{capacity_check, classical_slips_report, dh_dense_coding_report, retrocausality_check, spin8_report};
pub use registry::{ClaimCheck, ClaimSpec, Comparison, Registry};
pub use teleport::{teleportation_report, TeleportStructure};

/// Scenario names accepted by [`run_scenario`], in report order.
pub const SCENARIOS: [&str; 12] = [
    "classical-slips",
    "spin8",
    "dense-coding-f1",
    "dense-coding-f2",
    "dense-coding-f3",
    "teleportation-unitary",
    "teleportation-computational",
    "teleportation-sx",
    "teleportation-contextual",
    "retrocausality",
    "dh-dense-coding",
    "capacity",
];

/// One row of a report's information table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MiEntry {
    pub time: String,
    pub m_variable: String,
    pub carrier: Vec<String>,
    pub carrier_dim: usize,
    pub n_variable: String,
    pub bits: f64,
    pub contains: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScenarioReport {
    pub schema: String,
    pub scenario: String,
    pub framework: String,
    pub mi_table: Vec<MiEntry>,
    pub checks: Vec<ClaimCheck>,
    pub sections: BTreeMap<String, serde_json::Value>,
}

impl ScenarioReport {
    pub fn new(scenario: &str, framework: &str) -> Self {
        Self {
            schema: SCHEMA.to_string(),
            scenario: scenario.to_string(),
            framework: framework.to_string(),
            mi_table: Vec::new(),
            checks: Vec::new(),
            sections: BTreeMap::new(),
        }
    }

    pub fn claim(&mut self, id: &str, observed: f64) -> Result<()> {
        self.checks.push(Registry::builtin().check(id, observed)?);
        Ok(())
    }

    pub fn claim_bool(&mut self, id: &str, observed: bool) -> Result<()> {
        self.claim(id, if observed { 1.0 } else { 0.0 })
    }

    /// Appends a table row and returns its mutual information.
    pub fn mi(
        &mut self,
        time: &str,
        m_variable: &str,
        carrier: &[&str],
        n_variable: &str,
        joint: &JointDistribution,
    ) -> f64 {
        let bits = joint.mutual_information();
        self.mi_table.push(MiEntry {
            time: time.to_string(),
            m_variable: m_variable.to_string(),
            carrier: carrier.iter().map(|s| s.to_string()).collect(),
            carrier_dim: 1 << carrier.len(),
            n_variable: n_variable.to_string(),
            bits,
            contains: joint.contains_information(),
        });
        bits
    }

    pub fn section(&mut self, name: &str, value: impl Serialize) -> Result<()> {
        self.sections.insert(name.to_string(), serde_json::to_value(value)?);
        Ok(())
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failed_ids(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.pass).map(|c| c.id.as_str()).collect()
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "== {} [{}]", self.scenario, self.framework);
        if !self.mi_table.is_empty() {
            let rows: Vec<[String; 5]> = self
                .mi_table
                .iter()
                .map(|r| [r.time.clone(), r.m_variable.clone(), r.carrier.join(","), r.n_variable.clone(), sig12(r.bits)])
                .collect();
            let header = ["time", "M", "carrier", "N", "bits"].map(String::from);
            let mut w = [0usize; 5];
            for row in std::iter::once(&header).chain(&rows) {
                for (k, cell) in row.iter().enumerate() {
                    w[k] = w[k].max(cell.chars().count());
                }
            }
            let line = |out: &mut String, row: &[String; 5], tail: &str| {
                let pad = |k: usize| " ".repeat(w[k] - row[k].chars().count());
                let _ = writeln!(
                    out,
                    "  {}{}  {}{}  {}{}  {}{}  {}{}  {tail}",
                    row[0], pad(0), row[1], pad(1), row[2], pad(2), row[3], pad(3), pad(4), row[4]
                );
            };
            line(&mut out, &header, "contains");
            for (row, r) in rows.iter().zip(&self.mi_table) {
                line(&mut out, row, if r.contains { "yes" } else { "no" });
            }
        }
        let idw = self.checks.iter().map(|c| c.id.len()).max().unwrap_or(0);
        for c in &self.checks {
            let _ = writeln!(
                out,
                "  {} {:<idw$}  observed {} {} {} (tol {:e})",
                if c.pass { "PASS" } else { "FAIL" },
                c.id,
                sig12(c.observed),
                c.comparison.symbol(),
                sig12(c.expected),
                c.tolerance
            );
        }
        out
    }
}

/// Runs one named scenario, or every scenario for `"all"`.
pub fn run_scenario(name: &str, config: &Config) -> Result<Vec<ScenarioReport>> {
    if name == "all" {
        let mut reports = Vec::with_capacity(SCENARIOS.len());
        for &n in &SCENARIOS[..SCENARIOS.len() - 1] {
            reports.push(run_single(n, config)?);
        }
        let capacity = capacity_check(&reports)?;
        reports.push(capacity);
        return Ok(reports);
    }
    if name == "capacity" {
        let mut reports = run_scenario("all", config)?;
        return Ok(vec![reports.pop().expect("capacity report is last")]);
    }
    Ok(vec![run_single(name, config)?])
}

fn run_single(name: &str, config: &Config) -> Result<ScenarioReport> {
    log::info!("running scenario {name}");
    match name {
        "classical-slips" => classical_slips_report(),
        "spin8" => spin8_report(),
        "dense-coding-f1" => dense_coding_report(DenseFramework::F1, config),
        "dense-coding-f2" => dense_coding_report(DenseFramework::F2, config),
        "dense-coding-f3" => dense_coding_report(DenseFramework::F3, config),
        "teleportation-unitary" => teleportation_report(TeleportStructure::UnitaryChannel, config),
        "teleportation-computational" => teleportation_report(TeleportStructure::ComputationalF, config),
        "teleportation-sx" => teleportation_report(TeleportStructure::SxF, config),
        "teleportation-contextual" => teleportation_report(TeleportStructure::Contextual, config),
        "retrocausality" => retrocausality_check(config),
        "dh-dense-coding" => dh_dense_coding_report(config),
        other => Err(Error::UnknownName { what: "scenario", name: other.to_string() }),
    }
}
