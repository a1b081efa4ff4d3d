//! Structured pass/fail certificates.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Where a check failed. Indices refer to basis elements in the fixed
/// monomial bases used throughout the crate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Basis { index: usize },
    Pair { first: usize, second: usize },
    Triple { i: usize, j: usize, k: usize },
    Tuple { indices: Vec<usize> },
    ShuffleIndex { i: usize, j: usize, basis: usize },
    ShuffleAtDegree { degree: usize, i: usize, j: usize, basis: usize },
    Entry { degree: usize, row: usize, col: usize },
    Degree { degree: usize },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Basis { index } => write!(f, "basis element {index}"),
            Witness::Pair { first, second } => write!(f, "basis pair ({first}, {second})"),
            Witness::Triple { i, j, k } => write!(f, "basis triple ({i}, {j}, {k})"),
            Witness::Tuple { indices } => write!(f, "basis tuple {indices:?}"),
            Witness::ShuffleIndex { i, j, basis } => {
                write!(f, "s_({i},{j}) nonzero on basis element {basis}")
            }
            Witness::ShuffleAtDegree { degree, i, j, basis } => {
                write!(f, "degree {degree}: s_({i},{j}) nonzero on basis element {basis}")
            }
            Witness::Entry { degree, row, col } => {
                write!(f, "degree {degree}, entry ({row}, {col})")
            }
            Witness::Degree { degree } => write!(f, "degree {degree}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub check: String,
    pub passed: bool,
    pub summary: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<Report>,
}

impl Report {
    pub fn pass(check: impl Into<String>, summary: impl Into<String>) -> Self {
        Self {
            check: check.into(),
            passed: true,
            summary: summary.into(),
            witness: None,
            notes: Vec::new(),
            children: Vec::new(),
        }
    }

    pub fn fail(check: impl Into<String>, summary: impl Into<String>, witness: Option<Witness>) -> Self {
        Self {
            check: check.into(),
            passed: false,
            summary: summary.into(),
            witness,
            notes: Vec::new(),
            children: Vec::new(),
        }
    }

    /// A parent report that passes iff every child passes.
    pub fn all(check: impl Into<String>, children: Vec<Report>) -> Self {
        let passed = children.iter().all(|c| c.passed);
        let failed = children.iter().filter(|c| !c.passed).count();
        let summary = if passed {
            format!("{} checks passed", children.len())
        } else {
            format!("{failed} of {} checks failed", children.len())
        };
        let witness = children.iter().find(|c| !c.passed).and_then(|c| c.witness.clone());
        Self {
            check: check.into(),
            passed,
            summary,
            witness,
            notes: Vec::new(),
            children,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn renamed(mut self, check: impl Into<String>) -> Self {
        self.check = check.into();
        self
    }

    /// First failing leaf, depth first.
    pub fn first_failure(&self) -> Option<&Report> {
        if self.passed {
            return None;
        }
        self.children
            .iter()
            .find_map(|c| c.first_failure())
            .or(Some(self))
    }

    fn write_indented(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        let pad = "  ".repeat(depth);
        let mark = if self.passed { "ok" } else { "FAIL" };
        write!(f, "{pad}[{mark}] {}: {}", self.check, self.summary)?;
        if let Some(w) = &self.witness {
            if self.children.is_empty() {
                write!(f, " (witness: {w})")?;
            }
        }
        writeln!(f)?;
        for n in &self.notes {
            writeln!(f, "{pad}    note: {n}")?;
        }
        for c in &self.children {
            c.write_indented(f, depth + 1)?;
        }
        Ok(())
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_indented(f, 0)
    }
}

/// A report together with the value it certifies (present only on pass).
#[derive(Clone, Debug)]
pub struct Verdict<T> {
    pub report: Report,
    pub value: Option<T>,
}

impl<T> Verdict<T> {
    pub fn passed(&self) -> bool {
        self.report.passed
    }

    pub fn into_value(self) -> Option<T> {
        self.value
    }
}
