//! Machine-readable run reports.
//!
//! Reports serialize through [`serde_json::Value`], whose maps are ordered, so
//! the emitted JSON has sorted keys and is byte-stable for a fixed input apart
//! from `timing_ms`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::finite::automorphisms::HypothesisCheck;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictEntry {
    pub value: Value,
    pub licensed_by: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: Vec<String>,
    pub hypotheses: Vec<HypothesisCheck>,
    pub certificates: BTreeMap<String, Value>,
    pub results: BTreeMap<String, Value>,
    pub verdicts: BTreeMap<String, VerdictEntry>,
    pub timing_ms: u64,
}

impl Report {
    pub fn new(command: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Report {
            command: command.into_iter().map(Into::into).collect(),
            ..Default::default()
        }
    }

    pub fn result(&mut self, key: &str, value: impl Serialize) {
        self.results.insert(key.into(), to_value(value));
    }

    pub fn certificate(&mut self, key: &str, value: impl Serialize) {
        self.certificates.insert(key.into(), to_value(value));
    }

    pub fn verdict(&mut self, key: &str, value: impl Serialize, licensed_by: Vec<String>) {
        self.verdicts.insert(
            key.into(),
            VerdictEntry {
                value: to_value(value),
                licensed_by,
            },
        );
    }

    /// Pretty JSON with sorted keys.
    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("report is serializable");
        serde_json::to_string_pretty(&v).expect("value is serializable")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

fn to_value(value: impl Serialize) -> Value {
    serde_json::to_value(value).expect("report fields are serializable")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new(["finite", "analyze"]);
        r.hypotheses.push(HypothesisCheck {
            condition: "3".into(),
            description: "stabilizers".into(),
            holds: true,
        });
        r.result("zeta", 3);
        r.result("alpha", Value::Null);
        r.certificate("witness", vec![1, 2, 3]);
        r.verdict("hopfian", true, vec!["condition 3".into()]);
        r.timing_ms = 12;
        r
    }

    #[test]
    fn round_trip() {
        let r = sample();
        assert_eq!(Report::from_json(&r.to_json()).unwrap(), r);
    }

    #[test]
    fn keys_are_sorted() {
        let json = sample().to_json();
        let pos = |k: &str| json.find(&format!("\"{k}\"")).unwrap();
        assert!(pos("certificates") < pos("command"));
        assert!(pos("command") < pos("hypotheses"));
        assert!(pos("alpha") < pos("zeta"));
        assert!(pos("results") < pos("timing_ms"));
        assert!(pos("timing_ms") < pos("verdicts"));
    }
}
