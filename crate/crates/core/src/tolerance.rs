//! Numerical thresholds shared by every module.

use serde::{Deserialize, Serialize};

/// One record for all tolerances so a run can be reproduced from its report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Pairwise inner products of a basis must equal the Kronecker delta to this.
    pub orthonormality: f64,
    /// Slack below this (in absolute value) counts as equality.
    pub equality: f64,
    /// Relative pivot below which Gram-Schmidt declares rank deficiency.
    pub rank_pivot: f64,
    /// Residual allowed when testing subspace membership.
    pub membership: f64,
    /// Singular values below this span the relative null space.
    pub null_pivot: f64,
    /// Maximal spread of sampled angles for a point to count as slant.
    pub slant_deviation: f64,
    /// Number of random directions sampled by the slant probe.
    pub slant_samples: usize,
    /// Residual allowed when matching shape-operator normal forms.
    pub shape_form: f64,
    /// Seed for every internal sampling procedure (slant probe, plane search, classifiers).
    pub seed: u64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            orthonormality: 1e-10,
            equality: 1e-9,
            rank_pivot: 1e-12,
            membership: 1e-9,
            null_pivot: 1e-9,
            slant_deviation: 1e-6,
            slant_samples: 50,
            shape_form: 1e-8,
            seed: 0x5eed_cafe,
        }
    }
}

impl Tolerances {
    pub fn with_equality(mut self, eq: f64) -> Self {
        self.equality = eq;
        self
    }
}
