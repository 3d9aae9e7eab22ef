//! Check records and their JSON / markdown renderings. Timings are not part
//! of the report so that repeated runs give identical files.

use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub suite: String,
    pub id: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CheckRecord {
    pub fn new(suite: &str, id: impl Into<String>, passed: bool, witness: Option<String>) -> CheckRecord {
        CheckRecord {
            suite: suite.to_string(),
            id: id.into(),
            status: if passed { Status::Pass } else { Status::Fail },
            witness,
        }
    }

    pub fn skipped(suite: &str, id: impl Into<String>, reason: impl Into<String>) -> CheckRecord {
        CheckRecord { suite: suite.to_string(), id: id.into(), status: Status::Skipped, witness: Some(reason.into()) }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub version: u32,
    pub config: RunConfig,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

impl Report {
    pub fn new(config: RunConfig, checks: Vec<CheckRecord>) -> Report {
        let mut summary = Summary::default();
        for c in &checks {
            match c.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::Skipped => summary.skipped += 1,
            }
        }
        Report { version: crate::config::CONFIG_VERSION, config, checks, summary }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.fail == 0 && self.summary.skipped == 0
    }

    /// 0 all pass; 2 a check failed; 3 something was skipped (budget or a
    /// configuration the suite does not apply to).
    pub fn exit_code(&self) -> i32 {
        if self.summary.fail > 0 {
            2
        } else if self.summary.skipped > 0 {
            3
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_markdown(&self) -> String {
        let g = &self.config.group;
        let mut out = format!("# k1hecke report: {:?}({}, F_{})\n\n", g.kind, g.n, g.q);
        out.push_str("| suite | pass | fail | skipped |\n|---|---:|---:|---:|\n");
        let mut suites: Vec<&str> = Vec::new();
        for c in &self.checks {
            if !suites.contains(&c.suite.as_str()) {
                suites.push(&c.suite);
            }
        }
        for s in suites {
            let count = |st: Status| self.checks.iter().filter(|c| c.suite == s && c.status == st).count();
            out.push_str(&format!(
                "| {s} | {} | {} | {} |\n",
                count(Status::Pass),
                count(Status::Fail),
                count(Status::Skipped)
            ));
        }
        out.push_str(&format!(
            "| **total** | {} | {} | {} |\n",
            self.summary.pass, self.summary.fail, self.summary.skipped
        ));
        let bad: Vec<&CheckRecord> = self.checks.iter().filter(|c| c.status != Status::Pass).collect();
        if !bad.is_empty() {
            out.push_str("\n## Not passed\n\n");
            for c in bad {
                out.push_str(&format!(
                    "- `{}` {} ({:?}): {}\n",
                    c.suite,
                    c.id,
                    c.status,
                    c.witness.as_deref().unwrap_or("-")
                ));
            }
        }
        out
    }
}

/// A markdown table from a header and rows of cells.
fn cell(s: &str) -> String {
    s.replace('|', "\\|")
}

pub fn markdown_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let row = |cells: &mut dyn Iterator<Item = &str>| cells.map(cell).collect::<Vec<_>>().join(" | ");
    let mut out = format!("| {} |\n|", row(&mut header.iter().copied()));
    for _ in header {
        out.push_str("---|");
    }
    out.push('\n');
    for r in rows {
        out.push_str(&format!("| {} |\n", row(&mut r.iter().map(String::as_str))));
    }
    out
}
