//! Resource caps for the construction and solving pipelines.

/// Configurable size caps. All limits are inclusive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Caps {
    /// Maximum number of power variables `|X|^k` a saturated power may have.
    pub max_power_vars: u64,
    /// Maximum number of unknowns in a linear system handed to the solver.
    pub max_unknowns: u64,
    /// Maximum number of nonzero coefficients across all emitted equations.
    pub max_nonzeros: u64,
    /// Maximum number of assignments brute-force search may enumerate.
    pub max_assignments: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_power_vars: 100_000,
            max_unknowns: 200_000,
            max_nonzeros: 4_000_000,
            max_assignments: 10_000_000,
        }
    }
}

impl Caps {
    /// Parses overrides of the form `key=value,key=value`. Unknown keys are
    /// rejected so typos do not silently keep defaults.
    pub fn apply_overrides(&mut self, spec: &str) -> Result<(), String> {
        for part in spec.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, got {part:?}"))?;
            let value: u64 = value
                .trim()
                .parse()
                .map_err(|e| format!("bad value in {part:?}: {e}"))?;
            match key.trim() {
                "max_power_vars" => self.max_power_vars = value,
                "max_unknowns" => self.max_unknowns = value,
                "max_nonzeros" => self.max_nonzeros = value,
                "max_assignments" => self.max_assignments = value,
                other => return Err(format!("unknown cap {other:?}")),
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_parse() {
        let mut caps = Caps::default();
        caps.apply_overrides("max_power_vars=10, max_assignments=99").unwrap();
        assert_eq!(caps.max_power_vars, 10);
        assert_eq!(caps.max_assignments, 99);
        assert_eq!(caps.max_unknowns, Caps::default().max_unknowns);
        assert!(caps.apply_overrides("nope=3").is_err());
        assert!(caps.apply_overrides("max_unknowns").is_err());
    }
}
