//! Condition report types shared by the verifier and the CLI.

use std::cell::Cell;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Relative threshold separating definiteness from semidefiniteness.
pub const POSITIVITY_RTOL: f64 = 1e-9;

thread_local! {
    static RTOL: Cell<f64> = const { Cell::new(POSITIVITY_RTOL) };
}

/// Threshold in effect on the current thread.
pub fn positivity_rtol() -> f64 {
    RTOL.with(|t| t.get())
}

/// Run `f` with a different positivity threshold on this thread.
pub fn with_positivity_rtol<R>(rtol: f64, f: impl FnOnce() -> R) -> R {
    let prev = RTOL.with(|t| t.replace(rtol));
    let out = f();
    RTOL.with(|t| t.set(prev));
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ConditionName {
    A,
    A0,
    S,
    S1,
    S2,
    K,
    Kstar,
    R,
    C,
    Sstar1,
    Sstar2,
}

impl ConditionName {
    pub fn as_str(self) -> &'static str {
        match self {
            ConditionName::A => "A",
            ConditionName::A0 => "A0",
            ConditionName::S => "S",
            ConditionName::S1 => "S1",
            ConditionName::S2 => "S2",
            ConditionName::K => "K",
            ConditionName::Kstar => "Kstar",
            ConditionName::R => "R",
            ConditionName::C => "C",
            ConditionName::Sstar1 => "Sstar1",
            ConditionName::Sstar2 => "Sstar2",
        }
    }
}

impl fmt::Display for ConditionName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Strict (`> 0`) or semidefinite (`≥ 0`) positivity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Definiteness {
    Strict,
    Semi,
}

impl Definiteness {
    /// Decide a margin against `positivity_rtol() · scale`; returns the verdict
    /// and the absolute tolerance used.
    pub fn decide(self, margin: f64, scale: f64) -> (bool, f64) {
        let tol = positivity_rtol() * scale;
        let passed = match self {
            Definiteness::Strict => margin > tol,
            Definiteness::Semi => margin >= -tol,
        };
        (passed, tol)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionEntry {
    pub passed: bool,
    pub margin: f64,
    pub worst_omega: Option<Vec<f64>>,
    pub tolerance: f64,
    /// Passes over a sampled direction set are evidence, not proof.
    pub sampled: bool,
    pub details: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl ConditionEntry {
    pub fn new(passed: bool, margin: f64, tolerance: f64, details: impl Into<String>) -> Self {
        ConditionEntry {
            passed,
            margin,
            worst_omega: None,
            tolerance,
            sampled: false,
            details: details.into(),
            warnings: Vec::new(),
        }
    }

    pub fn at(mut self, omega: Option<Vec<f64>>) -> Self {
        self.sampled = true;
        self.worst_omega = omega;
        self
    }

    pub fn warn(mut self, w: impl Into<String>) -> Self {
        self.warnings.push(w.into());
        self
    }

    /// Label used in human-readable output.
    pub fn status(&self) -> &'static str {
        match (self.passed, self.sampled) {
            (true, true) => "pass (sampled-certified)",
            (true, false) => "pass",
            (false, _) => "FAIL",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub entries: BTreeMap<ConditionName, ConditionEntry>,
}

impl ConditionReport {
    pub fn insert(&mut self, name: ConditionName, entry: ConditionEntry) {
        self.entries.insert(name, entry);
    }

    pub fn get(&self, name: ConditionName) -> Option<&ConditionEntry> {
        self.entries.get(&name)
    }

    pub fn passed(&self, name: ConditionName) -> bool {
        self.get(name).is_some_and(|e| e.passed)
    }
}

/// Running minimum over sampled directions, keeping the first worst point in
/// index order so the result does not depend on scheduling.
#[derive(Debug, Clone)]
pub struct WorstCase {
    pub margin: f64,
    pub omega: Option<Vec<f64>>,
    pub scale: f64,
}

impl Default for WorstCase {
    fn default() -> Self {
        WorstCase { margin: f64::INFINITY, omega: None, scale: 0.0 }
    }
}

impl WorstCase {
    pub fn push(&mut self, margin: f64, omega: &[f64], scale: f64) {
        self.scale = self.scale.max(scale);
        if margin < self.margin {
            self.margin = margin;
            self.omega = Some(omega.to_vec());
        }
    }

    pub fn entry(&self, kind: Definiteness, details: impl Into<String>) -> ConditionEntry {
        let (passed, tol) = kind.decide(self.margin, self.scale);
        ConditionEntry::new(passed, self.margin, tol, details).at(self.omega.clone())
    }
}
