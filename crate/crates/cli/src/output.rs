//! Human-readable and canonical JSON renderings of a command outcome.

use serde_json::{json, Value};

use xmod2_core::{Coverage, Policy, Report, Status};

/// An error that stopped a command before its checks could run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub kind: String,
    pub message: String,
    pub witness: Option<Vec<String>>,
}

/// Everything a command produced: its checks, computed values, the sampling policy and any error.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Report,
    pub policy: Policy,
    pub error: Option<Failure>,
}

impl Outcome {
    pub fn new(report: Report, policy: Policy) -> Outcome {
        let mut report = report;
        report.sort();
        Outcome { report, policy, error: None }
    }

    pub fn failed(command: &str, policy: Policy, failure: Failure) -> Outcome {
        Outcome { report: Report::new(command), policy, error: Some(failure) }
    }

    pub fn passed(&self) -> bool {
        self.error.is_none() && self.report.passed()
    }

    pub fn status(&self) -> &'static str {
        match (&self.error, self.report.passed()) {
            (Some(_), _) => "error",
            (None, true) => "pass",
            (None, false) => "fail",
        }
    }

    pub fn to_json(&self) -> Value {
        let p = &self.policy;
        let mut v = json!({
            "command": self.report.command,
            "status": self.status(),
            "certificate": { "max_degree": p.max_degree, "samples": p.samples, "seed": p.seed },
            "checks": self.report.checks,
            "values": self.report.values,
        });
        if let Some(f) = &self.error {
            let mut e = json!({ "kind": f.kind, "message": f.message });
            if let Some(w) = &f.witness {
                e["witness"] = json!(w);
            }
            v["error"] = e;
        }
        v
    }

    /// Pretty JSON with sorted keys, ending in a single LF.
    pub fn canonical_json(&self) -> String {
        // serde_json's map is ordered by key, so every object comes out sorted
        let mut text = serde_json::to_string_pretty(&self.to_json()).expect("reports serialize");
        text.push('\n');
        text
    }

    pub fn human(&self) -> String {
        let p = &self.policy;
        let r = &self.report;
        let mut out = String::new();
        let total = r.checks.len();
        let failed = r.failures().count();
        out.push_str(&format!("{}: {} ({} checks, {} failed)\n", r.command, self.status().to_uppercase(), total, failed));
        if let Some(f) = &self.error {
            out.push_str(&format!("error: {}\n", f.message));
            if let Some(w) = &f.witness {
                out.push_str(&format!("  witness ({})\n", w.join(", ")));
            }
        }
        for v in &r.values {
            out.push_str(&format!("  {} = {}\n", v.name, v.value));
        }
        for c in &r.checks {
            let mark = match c.status {
                Status::Pass => "ok  ",
                Status::Fail => "FAIL",
                Status::Skipped => "skip",
            };
            let cover = match &c.certificate {
                Some(Coverage::Exhaustive) => ", exhaustive".to_string(),
                Some(Coverage::Sampled { .. }) => ", sampled".to_string(),
                None => String::new(),
            };
            out.push_str(&format!("  {mark} [{}] {} ({} cases{cover})\n", c.tag, c.name, c.cases));
            if let Some(w) = &c.witness {
                out.push_str(&format!("         witness ({})\n", w.join(", ")));
            }
            if let Some(d) = &c.detail {
                if c.status != Status::Pass {
                    out.push_str(&format!("         {d}\n"));
                }
            }
        }
        out.push_str(&format!("certificate: D={}, N={}, seed={}\n", p.max_degree, p.samples, p.seed));
        out
    }
}
