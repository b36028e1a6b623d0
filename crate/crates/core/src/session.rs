//! Tunable limits shared by every computation.

use crate::exactring::trunc::TruncPlan;

/// Caps and sampling parameters. `Session::default()` matches the command
/// line defaults.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Session {
    /// Largest truncation degree tried when no a-priori bound is known.
    pub trunc_cap: usize,
    /// Random samples per multiplicity computation; the minimum is kept.
    pub samples: usize,
    /// Also compute `e(I)` from the Hilbert function and require agreement.
    pub cross_check: bool,
    /// Maximum number of generator products formed by a power or product.
    pub max_products: usize,
    /// Largest exponent used by the mixed multiplicity difference scheme.
    pub mixed_cap: usize,
    /// Resampling budget for randomized certificates.
    pub retries: usize,
}

impl Default for Session {
    fn default() -> Self {
        Session { trunc_cap: 64, samples: 3, cross_check: false, max_products: 100_000, mixed_cap: 6, retries: 5 }
    }
}

impl Session {
    pub fn with_trunc_cap(mut self, cap: usize) -> Self {
        self.trunc_cap = cap;
        self
    }

    pub fn with_cross_check(mut self, on: bool) -> Self {
        self.cross_check = on;
        self
    }

    pub(crate) fn plan(&self, start: usize, bound: Option<usize>) -> TruncPlan {
        TruncPlan::new(start, self.trunc_cap).with_bound(bound)
    }
}
