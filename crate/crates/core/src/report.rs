//! Report values returned by validation-style operations. An empty report
//! means the property holds; otherwise every violated instance is listed.

use std::fmt;

use serde::Serialize;

use crate::horn::HornDescriptor;

/// One violated identity instance, naming the simplex and the identity.
#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub simplex: String,
    pub identity: String,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} ({})", self.simplex, self.identity, self.detail)
    }
}

/// Outcome of `validate_sset` / `validate_map`.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "ok");
        }
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Horns without any filler in the complex, per `check_fibrancy`.
#[derive(Debug, Clone, Default, Serialize)]
pub struct FibrancyReport {
    pub missing: Vec<HornDescriptor>,
}

impl FibrancyReport {
    pub fn is_fibrant(&self) -> bool {
        self.missing.is_empty()
    }
}

impl fmt::Display for FibrancyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.missing.is_empty() {
            write!(f, "fibrant at truncation")
        } else {
            writeln!(f, "{} horn(s) without filler:", self.missing.len())?;
            for h in &self.missing {
                writeln!(f, "  {h}")?;
            }
            Ok(())
        }
    }
}

/// One filler-preservation failure of a would-be algebraic morphism.
#[derive(Debug, Clone, Serialize)]
pub struct PreservationViolation {
    pub horn: HornDescriptor,
    pub expected: Option<String>,
    pub actual: String,
}

/// Outcome of `check_alg_morphism`.
#[derive(Debug, Clone, Default, Serialize)]
pub struct PreservationReport {
    pub violations: Vec<PreservationViolation>,
}

impl PreservationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for PreservationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "ok");
        }
        for v in &self.violations {
            writeln!(
                f,
                "horn {}: distinguished filler maps to `{}`, target table has {}",
                v.horn,
                v.actual,
                v.expected.as_deref().unwrap_or("no entry")
            )?;
        }
        Ok(())
    }
}

/// Defects found while assembling an algebraic complex.
#[derive(Debug, Clone, Default, Serialize)]
pub struct AlgDefects {
    /// Admitted horns without a table entry.
    pub missing: Vec<HornDescriptor>,
    /// Entries whose filler violates the face law.
    pub face_violations: Vec<Violation>,
    /// Entries for horns the mode does not admit.
    pub inadmissible: Vec<HornDescriptor>,
}

impl AlgDefects {
    pub fn is_empty(&self) -> bool {
        self.missing.is_empty() && self.face_violations.is_empty() && self.inadmissible.is_empty()
    }
}

impl fmt::Display for AlgDefects {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for h in &self.missing {
            writeln!(f, "missing entry for {h}")?;
        }
        for v in &self.face_violations {
            writeln!(f, "{v}")?;
        }
        for h in &self.inadmissible {
            writeln!(f, "entry for horn {h} not admitted by mode")?;
        }
        Ok(())
    }
}

/// Residue of a staged construction at its budget.
///
/// `untabulated` lists every admitted horn of the final complex without a
/// table entry; `unfillable` is the subset-like fibrancy view: horns for
/// which not even a candidate filler simplex exists. A construction with
/// empty `unfillable` is fibrant at truncation even though later stages
/// would still add distinguished fillers.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ResidueReport {
    pub untabulated: Vec<HornDescriptor>,
    pub unfillable: Vec<HornDescriptor>,
}

impl ResidueReport {
    pub fn complete(&self) -> bool {
        self.untabulated.is_empty()
    }

    pub fn fibrant(&self) -> bool {
        self.unfillable.is_empty()
    }
}

impl fmt::Display for ResidueReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "residue: {} horn(s) without table entry, {} without any filler",
            self.untabulated.len(),
            self.unfillable.len()
        )
    }
}
