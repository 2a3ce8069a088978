use std::collections::BTreeSet;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const BUILTIN: &str = include_str!("../../data/claims.toml");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    Eq,
    AtMost,
    AtLeast,
}

impl Comparison {
    pub fn holds(self, observed: f64, expected: f64, tolerance: f64) -> bool {
        match self {
            Comparison::Eq => (observed - expected).abs() <= tolerance,
            Comparison::AtMost => observed <= expected + tolerance,
            Comparison::AtLeast => observed >= expected - tolerance,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Comparison::Eq => "==",
            Comparison::AtMost => "<=",
            Comparison::AtLeast => ">=",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClaimSpec {
    pub id: String,
    pub anchor: String,
    pub expected: f64,
    pub tolerance: f64,
    pub comparison: Comparison,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Registry {
    pub version: u32,
    #[serde(rename = "claim")]
    pub claims: Vec<ClaimSpec>,
}

/// One registry claim evaluated against an observation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClaimCheck {
    pub id: String,
    pub anchor: String,
    pub comparison: Comparison,
    pub expected: f64,
    pub tolerance: f64,
    pub observed: f64,
    pub pass: bool,
}

impl Registry {
    pub fn parse(text: &str) -> Result<Self> {
        let reg: Registry = toml::from_str(text).map_err(|e| Error::Registry(e.to_string()))?;
        let mut seen = BTreeSet::new();
        for c in &reg.claims {
            if !seen.insert(c.id.as_str()) {
                return Err(Error::Registry(format!("duplicate claim id `{}`", c.id)));
            }
            if c.anchor.trim().is_empty() {
                return Err(Error::Registry(format!("claim `{}` has no anchor", c.id)));
            }
            if !(c.tolerance >= 0.0) || !c.expected.is_finite() {
                return Err(Error::Registry(format!("claim `{}` has a bad expected value or tolerance", c.id)));
            }
        }
        Ok(reg)
    }

    /// The registry shipped with the crate.
    pub fn builtin() -> &'static Registry {
        static REG: OnceLock<Registry> = OnceLock::new();
        REG.get_or_init(|| Registry::parse(BUILTIN).expect("shipped claim registry parses"))
    }

    pub fn get(&self, id: &str) -> Option<&ClaimSpec> {
        self.claims.iter().find(|c| c.id == id)
    }

    pub fn check(&self, id: &str, observed: f64) -> Result<ClaimCheck> {
        let spec = self.get(id).ok_or_else(|| Error::Registry(format!("unknown claim id `{id}`")))?;
        Ok(ClaimCheck {
            id: spec.id.clone(),
            anchor: spec.anchor.clone(),
            comparison: spec.comparison,
            expected: spec.expected,
            tolerance: spec.tolerance,
            observed,
            pass: observed.is_finite() && spec.comparison.holds(observed, spec.expected, spec.tolerance),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_registry_parses() {
        let reg = Registry::builtin();
        assert_eq!(reg.version, 1);
        assert!(reg.claims.len() > 40);
    }

    #[test]
    fn comparisons() {
        assert!(Comparison::Eq.holds(1.0 + 1e-10, 1.0, 1e-9));
        assert!(!Comparison::Eq.holds(1.1, 1.0, 1e-9));
        assert!(Comparison::AtMost.holds(0.5e-10, 0.0, 1e-10));
        assert!(!Comparison::AtMost.holds(1e-3, 0.0, 1e-10));
        assert!(Comparison::AtLeast.holds(0.25, 0.1, 0.0));
    }

    #[test]
    fn nan_never_passes() {
        let c = Registry::builtin().check("capacity.excess_bits", f64::NAN).unwrap();
        assert!(!c.pass);
    }

    #[test]
    fn malformed_registries_are_rejected() {
        let dup = r#"
version = 1
[[claim]]
id = "x"
anchor = "y"
expected = 1.0
tolerance = 0.0
comparison = "eq"
[[claim]]
id = "x"
anchor = "y"
expected = 1.0
tolerance = 0.0
comparison = "eq"
"#;
        assert!(Registry::parse(dup).is_err());
        assert!(Registry::parse("version = 1\nclaim = []\nextra = 2").is_err());
        assert!(Registry::builtin().check("no.such.claim", 0.0).is_err());
    }
}
