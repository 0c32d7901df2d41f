//! Tally of runtime claim checks, keyed by claim id.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimCount {
    pub passed: u64,
    pub failed: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimLedger {
    pub claims: BTreeMap<String, ClaimCount>,
}

impl ClaimLedger {
    /// Records one check and returns `ok`.
    pub fn record(&mut self, id: &str, ok: bool) -> bool {
        let c = self.claims.entry(id.to_string()).or_default();
        if ok {
            c.passed += 1;
        } else {
            c.failed += 1;
        }
        ok
    }

    pub fn merge(&mut self, other: &ClaimLedger) {
        for (id, c) in &other.claims {
            let e = self.claims.entry(id.clone()).or_default();
            e.passed += c.passed;
            e.failed += c.failed;
        }
    }

    pub fn all_passed(&self) -> bool {
        self.claims.values().all(|c| c.failed == 0)
    }

    pub fn passed(&self, id: &str) -> u64 {
        self.claims.get(id).map_or(0, |c| c.passed)
    }
}
