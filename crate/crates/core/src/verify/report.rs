use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

pub const REPORT_SCHEMA: &str = "mzn-report v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Certificate emitted by a verifier. `status` is `pass` iff every entry of
/// `expected` equals the entry of `computed` with the same key.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: String,
    pub theorem: String,
    pub n: usize,
    pub params: Map<String, Value>,
    pub expected: Map<String, Value>,
    pub computed: Map<String, Value>,
    pub witnesses: Map<String, Value>,
    pub status: Status,
    pub millis: u64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Keys whose expected and computed values differ.
    pub fn mismatches(&self) -> Vec<&str> {
        self.expected
            .iter()
            .filter(|(k, v)| self.computed.get(*k) != Some(*v))
            .map(|(k, _)| k.as_str())
            .collect()
    }

    /// The report with `millis` zeroed, for comparing runs.
    pub fn untimed(&self) -> Self {
        VerificationReport {
            millis: 0,
            ..self.clone()
        }
    }
}

pub(crate) struct ReportBuilder {
    theorem: String,
    n: usize,
    start: Instant,
    params: Map<String, Value>,
    expected: Map<String, Value>,
    computed: Map<String, Value>,
    witnesses: Map<String, Value>,
}

impl ReportBuilder {
    pub fn new(theorem: &str, n: usize) -> Self {
        ReportBuilder {
            theorem: theorem.to_string(),
            n,
            start: Instant::now(),
            params: Map::new(),
            expected: Map::new(),
            computed: Map::new(),
            witnesses: Map::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.params.insert(key.into(), to_value(value));
        self
    }

    pub fn check(&mut self, key: &str, expected: impl Serialize, computed: impl Serialize) -> &mut Self {
        self.expected.insert(key.into(), to_value(expected));
        self.computed.insert(key.into(), to_value(computed));
        self
    }

    pub fn witness(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.witnesses.insert(key.into(), to_value(value));
        self
    }

    pub fn finish(self) -> VerificationReport {
        let ok = self
            .expected
            .iter()
            .all(|(k, v)| self.computed.get(k) == Some(v));
        VerificationReport {
            schema: REPORT_SCHEMA.to_string(),
            theorem: self.theorem,
            n: self.n,
            params: self.params,
            expected: self.expected,
            computed: self.computed,
            witnesses: self.witnesses,
            status: if ok { Status::Pass } else { Status::Fail },
            millis: self.start.elapsed().as_millis() as u64,
        }
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_tracks_every_check() {
        let mut b = ReportBuilder::new("demo", 5);
        b.param("i", 5).check("dim", 1, 1).witness("basis", vec!["1/2"]);
        let r = b.finish();
        assert!(r.passed());
        assert!(r.mismatches().is_empty());

        let mut b = ReportBuilder::new("demo", 5);
        b.check("dim", 1, 1).check("rank", 4, 3);
        let r = b.finish();
        assert!(!r.passed());
        assert_eq!(r.mismatches(), vec!["rank"]);
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["status"], "fail");
        assert_eq!(json["schema"], REPORT_SCHEMA);
        for key in ["theorem", "n", "params", "expected", "computed", "witnesses", "status", "millis"] {
            assert!(json.get(key).is_some(), "{key}");
        }
    }
}
