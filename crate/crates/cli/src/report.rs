//! Structured run reports: named checks with pass / expected-flag / fail
//! status, echoed configuration, and optional embedded matrices. Bodies are
//! deterministic for a fixed configuration (no timestamps).

use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    FlagExpected,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ConfigEcho {
    pub seed: u64,
    pub restarts: usize,
    pub grid: usize,
    pub paper_mode: bool,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub target: String,
    pub version: String,
    pub config: ConfigEcho,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub matrices: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub tables: BTreeMap<String, String>,
}

impl Report {
    pub fn new(target: &str, config: ConfigEcho) -> Self {
        Self {
            target: target.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            checks: Vec::new(),
            matrices: BTreeMap::new(),
            tables: BTreeMap::new(),
        }
    }

    fn record(&mut self, status: Status, name: &str, detail: &str) {
        let tag = match status {
            Status::Pass => "PASS",
            Status::FlagExpected => "FLAG-expected",
            Status::Fail => "FAIL",
        };
        println!("{tag} {name}: {detail}");
        self.checks.push(Check {
            name: name.to_string(),
            status,
            detail: detail.to_string(),
        });
    }

    pub fn pass(&mut self, name: &str, detail: &str) {
        self.record(Status::Pass, name, detail);
    }

    pub fn flag(&mut self, name: &str, detail: &str) {
        self.record(Status::FlagExpected, name, detail);
    }

    pub fn fail(&mut self, name: &str, detail: &str) {
        self.record(Status::Fail, name, detail);
    }

    /// Pass when the condition holds, fail otherwise.
    pub fn check(&mut self, condition: bool, name: &str, detail: &str) {
        if condition {
            self.pass(name, detail);
        } else {
            self.fail(name, detail);
        }
    }

    /// Expected-flag when the condition holds (the known defect reproduced),
    /// fail otherwise (a regression in the reproduction).
    pub fn check_flag(&mut self, condition: bool, name: &str, detail: &str) {
        if condition {
            self.flag(name, detail);
        } else {
            self.fail(name, &format!("expected flag did not reproduce: {detail}"));
        }
    }

    pub fn add_matrix(&mut self, name: &str, text: String) {
        self.matrices.insert(name.to_string(), text);
    }

    pub fn add_table(&mut self, name: &str, text: String) {
        self.tables.insert(name.to_string(), text);
    }

    pub fn all_ok(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }
}
