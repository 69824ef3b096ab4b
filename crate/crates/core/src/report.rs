//! Check reports shared by every checker and emitted by the CLI.

use std::fmt;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One checked property: a law, a square family at a level, an axiom.
#[derive(Clone, Debug, Serialize)]
pub struct Entry {
    pub check: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub square: Option<String>,
    pub status: Status,
    /// Number of instances examined.
    pub cases: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub check: String,
    pub bound: Value,
    pub entries: Vec<Entry>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(check: impl Into<String>, bound: Value) -> Self {
        Self { check: check.into(), bound, entries: Vec::new(), notes: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.status == Status::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(|e| e.status == Status::Fail)
    }

    pub fn first_failure(&self) -> Option<&Entry> {
        self.failures().next()
    }

    pub fn push(&mut self, entry: Entry) {
        self.entries.push(entry);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Adds an entry built from a running [`Tally`].
    pub fn push_tally(&mut self, tally: Tally) {
        self.entries.push(tally.finish());
    }

    pub fn merge(&mut self, other: Report) {
        self.entries.extend(other.entries);
        self.notes.extend(other.notes);
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "check {} {}", self.check, self.bound)?;
        for e in &self.entries {
            let status = match e.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
            };
            write!(f, "  [{status}] {}", e.check)?;
            if let Some(l) = e.level {
                write!(f, " level={l}")?;
            }
            if let Some(s) = &e.square {
                write!(f, " square={s}")?;
            }
            write!(f, " cases={}", e.cases)?;
            if let Some(w) = &e.witness {
                write!(f, "\n      witness: {w}")?;
            }
            writeln!(f)?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}

/// Accumulates cases for one entry, keeping the first counterexample.
pub struct Tally {
    entry: Entry,
}

impl Tally {
    pub fn new(check: impl Into<String>) -> Self {
        Self {
            entry: Entry { check: check.into(), level: None, square: None, status: Status::Pass, cases: 0, witness: None },
        }
    }

    pub fn level(mut self, level: usize) -> Self {
        self.entry.level = Some(level);
        self
    }

    pub fn square(mut self, square: impl Into<String>) -> Self {
        self.entry.square = Some(square.into());
        self
    }

    /// Records one case; `witness` is only evaluated for the first failure.
    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        self.entry.cases += 1;
        if !ok && self.entry.status == Status::Pass {
            self.entry.status = Status::Fail;
            self.entry.witness = Some(witness());
        }
    }

    pub fn fail_with(&mut self, witness: Value) {
        self.record(false, || witness);
    }

    pub fn failed(&self) -> bool {
        self.entry.status == Status::Fail
    }

    pub fn finish(self) -> Entry {
        self.entry
    }
}
