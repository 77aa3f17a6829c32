//! Structured results for energy bounds.

use alloc::vec::Vec;

/// A named scalar carried in a report.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Term {
    pub name: &'static str,
    pub value: f64,
}

/// A bound evaluated against a computed energy.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Comparison {
    pub energy: f64,
    /// `energy − bound` for lower bounds, `bound − energy` for upper bounds.
    pub margin: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum BoundKind {
    Lower,
    Upper,
}

/// Value of a bound together with its inputs, sub-terms and the hypotheses
/// it was derived under.
///
/// A report whose hypotheses fail still carries the value; `applicable` is
/// false and `violations` names what failed.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BoundReport {
    pub name: &'static str,
    pub kind: BoundKind,
    pub value: f64,
    pub applicable: bool,
    pub inputs: Vec<Term>,
    pub terms: Vec<Term>,
    pub violations: Vec<&'static str>,
    pub comparison: Option<Comparison>,
}

impl BoundReport {
    pub fn new(name: &'static str, kind: BoundKind, value: f64) -> Self {
        BoundReport {
            name,
            kind,
            value,
            applicable: true,
            inputs: Vec::new(),
            terms: Vec::new(),
            violations: Vec::new(),
            comparison: None,
        }
    }

    pub fn input(mut self, name: &'static str, value: f64) -> Self {
        self.inputs.push(Term { name, value });
        self
    }

    pub fn term(mut self, name: &'static str, value: f64) -> Self {
        self.terms.push(Term { name, value });
        self
    }

    /// Records a hypothesis; a false `ok` marks the report non-applicable.
    pub fn require(mut self, ok: bool, what: &'static str) -> Self {
        if !ok {
            self.applicable = false;
            self.violations.push(what);
        }
        self
    }

    pub fn compare_with(mut self, energy: f64) -> Self {
        let margin = match self.kind {
            BoundKind::Lower => energy - self.value,
            BoundKind::Upper => self.value - energy,
        };
        self.comparison = Some(Comparison { energy, margin, holds: margin >= 0.0 });
        self
    }

    pub fn get_term(&self, name: &str) -> Option<f64> {
        self.terms.iter().chain(&self.inputs).find(|t| t.name == name).map(|t| t.value)
    }
}
