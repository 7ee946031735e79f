//! Known-results annotations for the bounds table.
//!
//! The dimension lists are literature snapshots, shipped as a versioned
//! data file rather than hard-coded match arms so they can grow without a
//! code change. Annotations are claims about published results, not
//! anything this tool verifies.

use serde::{Deserialize, Serialize};

/// Version tag required in the registry file.
pub const REGISTRY_VERSION: &str = "sicd-registry/1";

const REGISTRY_JSON: &str = include_str!("../data/known_results.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Registry {
    pub format: String,
    /// Dimensions with a known tight projective 3-design.
    pub tight_3_designs_known: Vec<usize>,
    /// Dimensions with an analytic SIC (tight 2-design) construction.
    pub sic_analytic_dims: Vec<usize>,
    /// SICs found numerically for every dimension up to this one.
    pub sic_numerical_max_dim: usize,
    /// Tight t-designs are known not to exist for d and t at or above
    /// these (jointly).
    pub tight_nonexistent_min_d: usize,
    pub tight_nonexistent_min_t: u32,
}

impl Registry {
    /// The bundled snapshot. Panics only if the shipped file is invalid,
    /// which the test suite rules out.
    pub fn bundled() -> Registry {
        let reg: Registry =
            serde_json::from_str(REGISTRY_JSON).expect("bundled registry parses");
        assert_eq!(reg.format, REGISTRY_VERSION, "bundled registry version");
        reg
    }

    /// Annotation column for one (d, t) cell of the bounds table.
    pub fn annotation(&self, d: usize, t: u32) -> &'static str {
        if t >= self.tight_nonexistent_min_t && d >= self.tight_nonexistent_min_d {
            return "tight design nonexistent (literature)";
        }
        match t {
            2 if self.sic_analytic_dims.contains(&d) => "SIC known (analytic)",
            2 if d <= self.sic_numerical_max_dim => "SIC known (numerical)",
            3 if self.tight_3_designs_known.contains(&d) => "tight 3-design known",
            _ => "",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_registry_round_trips() {
        let reg = Registry::bundled();
        let text = serde_json::to_string(&reg).unwrap();
        let back: Registry = serde_json::from_str(&text).unwrap();
        assert_eq!(reg, back);
    }

    #[test]
    fn annotations_match_the_literature_lists() {
        let reg = Registry::bundled();
        assert_eq!(reg.annotation(4, 3), "tight 3-design known");
        assert_eq!(reg.annotation(3, 3), "");
        assert_eq!(reg.annotation(3, 5), "tight design nonexistent (literature)");
        assert_eq!(reg.annotation(2, 5), "");
        assert_eq!(reg.annotation(19, 2), "SIC known (analytic)");
        assert_eq!(reg.annotation(17, 2), "SIC known (numerical)");
        assert_eq!(reg.annotation(68, 2), "");
        assert_eq!(reg.annotation(5, 1), "");
    }

    #[test]
    fn analytic_list_matches_the_stated_dimensions() {
        let reg = Registry::bundled();
        let mut expected: Vec<usize> = (2..=16).collect();
        expected.extend([19, 24, 28, 31, 35, 37, 43, 48]);
        assert_eq!(reg.sic_analytic_dims, expected);
        assert_eq!(reg.tight_3_designs_known, vec![2, 4, 6]);
    }
}
