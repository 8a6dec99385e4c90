use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Resource limits shared by the exhaustive procedures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Largest carrier for which `Con(A)` is enumerated.
    pub max_con_size: usize,
    /// Largest carrier for isomorphism / homomorphism search.
    pub max_iso_size: usize,
    /// Term evaluations allowed for a single universal sentence check.
    pub max_evals: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_con_size: 8,
            max_iso_size: 10,
            max_evals: 10_000_000,
        }
    }
}

impl Budget {
    /// Applies overrides of the form `con=8,iso=10,eval=10000000`.
    /// A bare integer sets the evaluation budget.
    pub fn with_overrides(mut self, spec: &str) -> Result<Budget> {
        for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let parse = |v: &str| -> Result<u64> {
                v.trim()
                    .parse::<u64>()
                    .ok()
                    .filter(|&x| x > 0)
                    .ok_or_else(|| Error::InvalidArgument(format!("bad budget value `{v}`")))
            };
            match part.split_once('=') {
                None => self.max_evals = parse(part)?,
                Some(("con", v)) => self.max_con_size = parse(v)? as usize,
                Some(("iso", v)) => self.max_iso_size = parse(v)? as usize,
                Some(("eval", v)) => self.max_evals = parse(v)?,
                Some((k, _)) => {
                    return Err(Error::InvalidArgument(format!("unknown budget key `{k}`")))
                }
            }
        }
        Ok(self)
    }

    pub(crate) fn check_con(&self, size: usize) -> Result<()> {
        if size > self.max_con_size {
            return Err(Error::Budget {
                what: "congruence enumeration carrier size".into(),
                needed: size as u128,
                limit: self.max_con_size as u128,
            });
        }
        Ok(())
    }

    pub(crate) fn check_iso(&self, size: usize) -> Result<()> {
        if size > self.max_iso_size {
            return Err(Error::Budget {
                what: "isomorphism search carrier size".into(),
                needed: size as u128,
                limit: self.max_iso_size as u128,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides() {
        let b = Budget::default().with_overrides("con=5, eval=100").unwrap();
        assert_eq!(b.max_con_size, 5);
        assert_eq!(b.max_evals, 100);
        assert_eq!(b.max_iso_size, 10);
        assert_eq!(Budget::default().with_overrides("42").unwrap().max_evals, 42);
        assert!(Budget::default().with_overrides("foo=1").is_err());
        assert!(Budget::default().with_overrides("con=0").is_err());
    }
}
