//! Law-check reports shared by every harness in the crate.

use std::fmt;

/// How many violations a report keeps verbatim; further ones are only
/// counted.
pub const KEEP_VIOLATIONS: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub law: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub name: String,
    pub checked: usize,
    pub failures: usize,
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn new(name: impl Into<String>) -> Self {
        Report { name: name.into(), checked: 0, failures: 0, violations: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    /// Counts one check; records a violation when `ok` is false. The detail
    /// closure only runs on failure.
    pub fn record(&mut self, law: &str, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.fail(law, detail());
        }
    }

    pub fn fail(&mut self, law: &str, detail: String) {
        self.failures += 1;
        if self.violations.len() < KEEP_VIOLATIONS {
            self.violations.push(Violation { law: law.to_string(), detail });
        }
    }

    pub fn absorb(&mut self, other: Report) {
        self.checked += other.checked;
        self.failures += other.failures;
        for v in other.violations {
            if self.violations.len() < KEEP_VIOLATIONS {
                self.violations.push(v);
            }
        }
    }

    pub fn first_violation(&self) -> Option<&Violation> {
        self.violations.first()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            write!(f, "{}: pass ({} checks)", self.name, self.checked)
        } else {
            write!(f, "{}: FAIL ({} of {} checks)", self.name, self.failures, self.checked)?;
            for v in &self.violations {
                write!(f, "\n  [{}] {}", v.law, v.detail)?;
            }
            Ok(())
        }
    }
}
