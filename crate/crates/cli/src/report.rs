//! Solve and structure reports, as text or JSON.

use std::collections::BTreeMap;
use std::fmt::Write;

use ntu_core::pipeline::{Status, Trace};
use serde::Serialize;

use crate::verify::{Verdict, VerifyReport};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceReport {
    pub steps: Vec<String>,
    pub counters: BTreeMap<String, u64>,
}

impl TraceReport {
    pub fn from_trace(t: &Trace) -> Self {
        let s = &t.stats;
        let m = &t.mcipp;
        let counters = [
            ("components", s.components),
            ("components_enumerated", s.direct),
            ("decomposition_trees", s.trees),
            ("max_tree_nodes", s.max_tree_nodes),
            ("sum_dp_nodes", s.dp.nodes),
            ("tame_children", s.dp.tame),
            ("wild_children", s.dp.wild),
            ("gadgets_verified", s.dp.gadgets_verified),
            ("gadgets_skipped", s.dp.gadgets_skipped),
            ("sum_dp_local_solutions", s.dp.local_solutions),
            ("sum_dp_entries", s.dp.entries),
            ("td_nodes", m.nodes as u64),
            ("td_guesses", m.guesses),
            ("td_pattern_rejections", m.pattern_rejected),
            ("td_pattern_fallbacks", m.pattern_fallbacks),
            ("td_local_solves", m.ldcp_solves),
            ("td_local_cache_hits", m.ldcp_cache_hits),
            ("td_entries", m.entries),
            ("td_compliance_checks", m.compliance_checks),
            ("td_outside_box", m.outside_box),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
        TraceReport { steps: t.steps.clone(), counters }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveReport {
    pub kind: String,
    pub status: String,
    pub value: Option<i64>,
    pub solution: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<TraceReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerifyReport>,
}

impl SolveReport {
    pub fn new(kind: &str, status: &Status) -> Self {
        let (value, solution) = match status {
            Status::Optimal { value, x } => (Some(*value), Some(x.clone())),
            _ => (None, None),
        };
        SolveReport { kind: kind.into(), status: status.label().into(), value, solution, trace: None, verification: None }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "kind: {}", self.kind).unwrap();
        writeln!(s, "status: {}", self.status).unwrap();
        if let Some(v) = self.value {
            writeln!(s, "value: {v}").unwrap();
        }
        if let Some(x) = &self.solution {
            writeln!(s, "solution: {x:?}").unwrap();
        }
        if let Some(t) = &self.trace {
            writeln!(s, "trace:").unwrap();
            for step in &t.steps {
                writeln!(s, "  {step}").unwrap();
            }
            for (k, v) in t.counters.iter().filter(|(_, v)| **v > 0) {
                writeln!(s, "  {k}: {v}").unwrap();
            }
        }
        if let Some(r) = &self.verification {
            let verdict = match r.verdict {
                Verdict::Pass => "pass",
                Verdict::Fail => "FAIL",
                Verdict::Unverified => "unverified",
            };
            writeln!(s, "verification: {verdict} ({})", r.message).unwrap();
            if let Some(st) = &r.oracle_status {
                writeln!(s, "  oracle: {st}{}", r.oracle_value.map(|v| format!(", value {v}")).unwrap_or_default()).unwrap();
            }
            for c in &r.checks {
                writeln!(s, "  {}: {} ({})", c.name, if c.passed { "ok" } else { "violated" }, c.detail).unwrap();
            }
            if let Some(w) = &r.witness {
                writeln!(s, "  witness: {w:?}").unwrap();
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Property {
    pub property: String,
    pub value: String,
    pub module: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub kind: String,
    pub properties: Vec<Property>,
}

impl StructureReport {
    pub fn push(&mut self, property: &str, value: impl ToString, module: &str) {
        self.properties.push(Property { property: property.into(), value: value.to_string(), module: module.into() });
    }

    pub fn get(&self, property: &str) -> Option<&str> {
        self.properties.iter().find(|p| p.property == property).map(|p| p.value.as_str())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("kind: {}\n", self.kind);
        for p in &self.properties {
            writeln!(s, "{}: {} [{}]", p.property, p.value, p.module).unwrap();
        }
        s
    }
}
