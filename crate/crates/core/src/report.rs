//! Versioned, deterministic run reports. Wall time is kept out of the report
//! so that reruns with the same inputs and flags compare byte for byte.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::blocking::{blocking_number, BlockingError, SearchOptions};
use crate::claims::ClaimLedger;
use crate::generators::content_hash;
use crate::graph::{Graph, Partition, Vertex};

pub const REPORT_SCHEMA: &str = "blockpart.report/1";

/// Longest clean path found, with a witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockingMeasure {
    pub value: usize,
    pub exact: bool,
    pub witness: Vec<Vertex>,
    pub nodes_expanded: u64,
}

pub fn measure_blocking(
    g: &Graph,
    r: &Partition,
    opts: &SearchOptions,
) -> Result<BlockingMeasure, BlockingError> {
    let rep = blocking_number(g, r, opts)?;
    Ok(BlockingMeasure {
        value: rep.max_length_found,
        exact: rep.exhausted,
        witness: rep.witness,
        nodes_expanded: rep.nodes_expanded,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: String,
    pub command: String,
    pub status: String,
    /// SHA-256 of each input, by role.
    pub inputs: BTreeMap<String, String>,
    pub params: Value,
    pub width: Option<usize>,
    pub blocking_number: Option<BlockingMeasure>,
    pub claims: ClaimLedger,
    /// SHA-256 of each written artifact, by file name.
    pub outputs: BTreeMap<String, String>,
    pub details: Value,
}

impl RunReport {
    pub fn new(command: &str, params: Value) -> Self {
        RunReport {
            schema: REPORT_SCHEMA.to_string(),
            command: command.to_string(),
            status: "ok".to_string(),
            inputs: BTreeMap::new(),
            params,
            width: None,
            blocking_number: None,
            claims: ClaimLedger::default(),
            outputs: BTreeMap::new(),
            details: Value::Object(Default::default()),
        }
    }

    pub fn input<T: Serialize>(&mut self, role: &str, value: &T) {
        self.inputs.insert(role.to_string(), content_hash(value));
    }

    pub fn output<T: Serialize>(&mut self, name: &str, value: &T) {
        self.outputs.insert(name.to_string(), content_hash(value));
    }

    /// Sets `details[key]`.
    pub fn detail<T: Serialize>(&mut self, key: &str, value: T) {
        let v = serde_json::to_value(value).expect("serialisable");
        if let Value::Object(m) = &mut self.details {
            m.insert(key.to_string(), v);
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serialisable");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_round_trips_and_is_stable() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let mut r = RunReport::new("verify", serde_json::json!({"ell": 2}));
        r.input("graph", &g);
        r.detail("verdict", "holds");
        r.claims.record("x", true);
        let text = r.to_json();
        assert_eq!(text, r.clone().to_json());
        let back: RunReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.inputs["graph"].len(), 64);
    }

    #[test]
    fn measure_on_path() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let m = measure_blocking(&g, &Partition::singletons(4), &SearchOptions::default()).unwrap();
        assert_eq!(m.value, 3);
        assert!(m.exact);
    }
}
