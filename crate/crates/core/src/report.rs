//! Check outcomes and reports shared by every validator.

use serde::Serialize;

use crate::algebra::Element;
use crate::error::Error;
use crate::sampling::Coverage;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    /// Axiom or lemma identifier the check verifies.
    pub tag: String,
    pub status: Status,
    /// Number of tuples evaluated.
    pub cases: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Coverage>,
}

impl Check {
    pub fn pass(name: impl Into<String>, tag: impl Into<String>, cases: usize, coverage: Option<Coverage>) -> Check {
        Check {
            name: name.into(),
            tag: tag.into(),
            status: Status::Pass,
            cases,
            witness: None,
            detail: None,
            certificate: coverage,
        }
    }

    pub fn fail(
        name: impl Into<String>,
        tag: impl Into<String>,
        witness: Vec<String>,
        detail: Option<String>,
        coverage: Option<Coverage>,
    ) -> Check {
        Check {
            name: name.into(),
            tag: tag.into(),
            status: Status::Fail,
            cases: 0,
            witness: Some(witness),
            detail,
            certificate: coverage,
        }
    }

    pub fn skipped(name: impl Into<String>, tag: impl Into<String>, reason: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            tag: tag.into(),
            status: Status::Skipped,
            cases: 0,
            witness: None,
            detail: Some(reason.into()),
            certificate: None,
        }
    }

    /// Turns an error into a failed check carrying its witness.
    pub fn from_error(name: impl Into<String>, err: &Error) -> Check {
        let tag = err.axiom().unwrap_or("error").to_string();
        let witness = err.witness().map(|w| w.to_vec()).unwrap_or_else(|| vec![err.to_string()]);
        Check::fail(name, tag, witness, Some(err.to_string()), None)
    }

    /// Compares two values and records the outcome.
    pub fn equal(name: impl Into<String>, tag: impl Into<String>, lhs: &Element, rhs: &Element, at: &[&Element]) -> Check {
        if lhs == rhs {
            Check::pass(name, tag, 1, None)
        } else {
            Check::fail(
                name,
                tag,
                at.iter().map(|e| e.to_string()).collect(),
                Some(format!("lhs = {lhs}, rhs = {rhs}")),
                None,
            )
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    pub fn to_error(&self) -> Option<Error> {
        (self.status == Status::Fail)
            .then(|| Error::violation(self.tag.clone(), self.witness.clone().unwrap_or_default()))
    }
}

/// Returns the first failing check as an error.
pub fn first_failure(checks: &[Check]) -> Result<(), Error> {
    match checks.iter().find_map(Check::to_error) {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

/// A computed value shown alongside the checks, e.g. `X(x²) = (0, b, 3b, -2b̂)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NamedValue {
    pub name: String,
    pub value: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    pub checks: Vec<Check>,
    pub values: Vec<NamedValue>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Report {
        Report { command: command.into(), ..Default::default() }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    /// Appends checks with `prefix/` prepended to their names.
    pub fn extend_prefixed(&mut self, prefix: &str, checks: impl IntoIterator<Item = Check>) {
        for mut c in checks {
            c.name = format!("{prefix}/{}", c.name);
            self.checks.push(c);
        }
    }

    pub fn value(&mut self, name: impl Into<String>, value: impl ToString) {
        self.values.push(NamedValue { name: name.into(), value: value.to_string() });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    /// Sorts checks by name; values keep their insertion order.
    pub fn sort(&mut self) {
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
    }
}
