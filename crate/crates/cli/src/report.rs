use std::collections::BTreeMap;
use std::fmt::Write as _;

use qlie::braid::{Check, CheckStatus};
use qlie::brst::SweepReport;
use qlie::scalar::ScalarMode;
use serde::Serialize;
use serde_json::Value;

/// Everything that determines a run. Worker count is left out so reports
/// do not depend on it.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub scalar_mode: ScalarMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi_cap: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_cap: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub height_cap: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub artifact: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    pub force: bool,
    pub gauge_check: bool,
    pub closed_form: bool,
    pub classical_limit: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AlgebraInfo {
    pub name: String,
    pub dim: usize,
    pub spec_hash: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub config: RunConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraInfo>,
    pub facts: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl Report {
    pub fn new(config: RunConfig) -> Self {
        Report { command: config.command, config, algebra: None, facts: BTreeMap::new(), checks: Vec::new(), passed: true }
    }

    pub fn fact(&mut self, key: &str, value: impl Into<Value>) {
        self.facts.insert(key.to_string(), value.into());
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    /// Append checks, skipping exact repeats of ones already present.
    pub fn checks(&mut self, cs: impl IntoIterator<Item = Check>) {
        for c in cs {
            if !self.checks.contains(&c) {
                self.checks.push(c);
            }
        }
    }

    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == CheckStatus::Fail)
    }

    pub fn finish(mut self) -> Self {
        self.passed = !self.failed();
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        match &self.algebra {
            Some(a) => writeln!(s, "qlie {}: {} (dim {}, spec {})", self.command, a.name, a.dim, &a.spec_hash[..16]),
            None => writeln!(s, "qlie {}", self.command),
        }
        .unwrap();
        for (k, v) in &self.facts {
            match v {
                Value::Array(rows) if rows.iter().all(Value::is_string) => {
                    writeln!(s, "  {k}:").unwrap();
                    for r in rows {
                        writeln!(s, "    {}", r.as_str().unwrap_or_default()).unwrap();
                    }
                }
                Value::String(t) => writeln!(s, "  {k}: {t}").unwrap(),
                other => writeln!(s, "  {k}: {other}").unwrap(),
            }
        }
        for c in &self.checks {
            let tag = match c.status {
                CheckStatus::Pass => "PASS",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Unsupported => "SKIP",
            };
            write!(s, "{tag} {}", c.name).unwrap();
            if let Some(w) = &c.witness {
                write!(s, " at {w:?}").unwrap();
            }
            if let Some(n) = &c.note {
                write!(s, ": {n}").unwrap();
            }
            s.push('\n');
        }
        let passed = self.checks.iter().filter(|c| c.passed()).count();
        let verdict = if self.failed() { "FAIL" } else { "PASS" };
        writeln!(s, "result: {verdict} ({passed}/{} checks)", self.checks.len()).unwrap();
        s
    }
}

pub fn note(mut c: Check, note: impl Into<String>) -> Check {
    c.note = Some(note.into());
    c
}

/// One check summarizing a basis sweep; the first failure is quoted.
pub fn sweep_check(name: &str, rep: &SweepReport, what: &str) -> Check {
    let scope = format!("{} elements with χ-degree ≤ {}, γ-degree ≤ {}", rep.checked, rep.chi_cap, rep.gamma_cap);
    if rep.passed() {
        return note(Check::from_witness(name, None), format!("{what} on {scope}"));
    }
    let detail = match rep.failures.first() {
        Some(f) => format!("{} failing of {scope}; first: {} ↦ {}", rep.failures.len(), f.element, f.residue),
        None => format!("d does not lower the γ-degree by one on {scope}"),
    };
    Check { name: name.into(), status: CheckStatus::Fail, witness: None, note: Some(detail) }
}

pub fn failure(name: &str, detail: impl Into<String>) -> Check {
    Check { name: name.into(), status: CheckStatus::Fail, witness: None, note: Some(detail.into()) }
}
