use std::fmt;

pub const DEFAULT_REPORT_CAP: usize = 100;

/// One failed clause together with the tuple of labels witnessing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub clause: String,
    pub witness: Vec<String>,
}

impl Violation {
    pub fn new(clause: impl Into<String>, witness: Vec<String>) -> Self {
        Violation {
            clause: clause.into(),
            witness,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.clause, self.witness.join(", "))
    }
}

/// Ordered list of violations, truncated after `cap` entries.
///
/// The number of dropped entries is still counted so that a truncated report
/// never reads as clean.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    violations: Vec<Violation>,
    cap: usize,
    omitted: usize,
}

impl Default for ValidationReport {
    fn default() -> Self {
        ValidationReport::with_cap(DEFAULT_REPORT_CAP)
    }
}

impl ValidationReport {
    pub fn with_cap(cap: usize) -> Self {
        ValidationReport {
            violations: Vec::new(),
            cap,
            omitted: 0,
        }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn push(&mut self, clause: impl Into<String>, witness: Vec<String>) {
        self.push_violation(Violation::new(clause, witness));
    }

    pub fn push_violation(&mut self, violation: Violation) {
        if self.violations.len() < self.cap {
            self.violations.push(violation);
        } else {
            self.omitted += 1;
        }
    }

    /// Appends `other` with every clause prefixed by `prefix.`.
    pub fn absorb(&mut self, prefix: &str, other: ValidationReport) {
        for v in other.violations {
            self.push(format!("{prefix}.{}", v.clause), v.witness);
        }
        self.omitted += other.omitted;
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty() && self.omitted == 0
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }

    pub fn omitted(&self) -> usize {
        self.omitted
    }

    pub fn total(&self) -> usize {
        self.violations.len() + self.omitted
    }

    pub fn has_clause(&self, clause: &str) -> bool {
        self.violations.iter().any(|v| v.clause == clause)
    }

    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_clean() {
            return writeln!(f, "clean");
        }
        for v in &self.violations {
            writeln!(f, "violation {v}")?;
        }
        if self.omitted > 0 {
            writeln!(f, "... {} more violations omitted", self.omitted)?;
        }
        Ok(())
    }
}
