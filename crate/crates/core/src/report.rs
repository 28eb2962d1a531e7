//! Rule-by-rule validation reports.
//!
//! Feasibility checks (fiber geometry, inscription plans) never fail with an
//! `Err`: every rule is evaluated and reported with its measured margin, so
//! a caller can see how close a passing design sits to its limits and which
//! rules a failing design breaks.

/// Outcome of one named rule.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleCheck {
    /// Stable machine-readable rule name, e.g. `single_core_addressability`.
    pub rule: String,
    pub pass: bool,
    /// Distance to the rule boundary in `unit`; negative when violated.
    pub margin: f64,
    pub unit: &'static str,
    /// Human-readable explanation with the measured values.
    pub detail: String,
}

/// Result of evaluating a full rule set.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub checks: Vec<RuleCheck>,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Checks that failed, in evaluation order.
    pub fn violations(&self) -> impl Iterator<Item = &RuleCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub(crate) fn push(&mut self, rule: &str, margin: f64, unit: &'static str, detail: String) {
        self.push_checked(rule, margin >= 0.0, margin, unit, detail);
    }

    /// Push with an explicit verdict, for rules whose boundary is strict.
    pub(crate) fn push_checked(
        &mut self,
        rule: &str,
        pass: bool,
        margin: f64,
        unit: &'static str,
        detail: String,
    ) {
        self.checks.push(RuleCheck {
            rule: rule.to_string(),
            pass,
            margin,
            unit,
            detail,
        });
    }

    /// Look up a check by rule name.
    pub fn check(&self, rule: &str) -> Option<&RuleCheck> {
        self.checks.iter().find(|c| c.rule == rule)
    }
}
