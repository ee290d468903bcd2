//! Report values and their text and JSON renderings.
//!
//! JSON output carries no timing so that identical runs give identical
//! bytes; the text rendering shows the elapsed time.

use std::fmt::Write as _;
use std::time::Duration;

use ck_core::cohomology::CocycleTable;
use ck_core::conformal::CheckReport;
use ck_core::derivation::DerivationTable;
use ck_core::module::{ActionRule, ActionTable, ClassificationResult};
use serde::Serialize;
use serde_json::{json, Map, Value};

pub const SCHEMA: u32 = 1;

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct ConfigEcho {
    pub algebra: String,
    pub window: String,
    pub deg_bound: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degrees: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct ItemJson {
    pub label: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct CheckJson {
    pub name: String,
    pub total: usize,
    pub failed: usize,
    pub items: Vec<ItemJson>,
}

impl CheckJson {
    pub fn from_report(r: &CheckReport) -> Self {
        let items: Vec<ItemJson> = r
            .items
            .iter()
            .map(|i| ItemJson {
                label: i.label.clone(),
                passed: i.passed,
                residual: (!i.passed).then(|| i.residual.clone()),
            })
            .collect();
        CheckJson { name: r.name.clone(), total: items.len(), failed: items.iter().filter(|i| !i.passed).count(), items }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct DegreeJson {
    pub c: i64,
    pub solution_dim: usize,
    pub inner_dim: usize,
    pub outer_dim: usize,
    pub representatives: Vec<Value>,
    /// Whether the representatives pass the derivation law.
    pub representatives_checked: bool,
    /// Whether `d_vec({c: 1})` lies in the inner span; absent when it is not
    /// a derivation of the algebra.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_vec_inner: Option<bool>,
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct SumJson {
    pub sum: i64,
    pub cocycle_dim: usize,
    pub coboundary_dim: usize,
    pub dim: usize,
    pub representatives: Vec<Value>,
    pub representatives_checked: bool,
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct StageJson {
    pub name: String,
    pub unknowns: usize,
    pub equations: usize,
    pub solution_dim: usize,
    pub outcome: String,
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct ClassificationJson {
    pub algebra: String,
    pub base: String,
    pub settled: bool,
    pub round_trip: bool,
    pub forced: Map<String, Value>,
    pub free: Vec<String>,
    pub verdict: String,
    pub stages: Vec<StageJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normal_form: Option<Value>,
}

impl ClassificationJson {
    pub fn from_result(r: &ClassificationResult) -> Self {
        ClassificationJson {
            algebra: r.algebra.clone(),
            base: r.base.clone(),
            settled: r.settled,
            round_trip: r.round_trip,
            forced: r.forced.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect(),
            free: r.free.clone(),
            verdict: r.verdict.clone(),
            stages: r
                .stages
                .iter()
                .map(|s| StageJson {
                    name: s.name.clone(),
                    unknowns: s.unknowns,
                    equations: s.equations,
                    solution_dim: s.solution_dim,
                    outcome: s.outcome.clone(),
                })
                .collect(),
            normal_form: r.normal_form.as_ref().map(table_json),
        }
    }
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct OpeJsonReport {
    pub index_pairs: usize,
    pub differences: Vec<String>,
    pub table: Value,
}

#[derive(Serialize, Debug, Clone, PartialEq)]
#[serde(untagged)]
pub enum Body {
    Verify { checks: Vec<CheckJson> },
    Derivations { degrees: Vec<DegreeJson> },
    Cohomology { sums: Vec<SumJson> },
    Modules {
        checks: Vec<CheckJson>,
        #[serde(skip_serializing_if = "Option::is_none")]
        classification: Option<ClassificationJson>,
    },
    Ope(OpeJsonReport),
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub config: ConfigEcho,
    pub passed: bool,
    pub result: Body,
    #[serde(skip)]
    pub elapsed: Option<Duration>,
}

/// `{"L@0": [{"family": "M", "index": 0, "poly": "1"}], ...}` with zero
/// values left out.
pub fn derivation_json(d: &DerivationTable) -> Value {
    let mut m = Map::new();
    for (k, v) in d.entries() {
        if v.is_zero() {
            continue;
        }
        let terms: Vec<Value> = v
            .terms()
            .map(|(t, p)| json!({"family": t.family.as_str(), "index": t.index, "poly": p.to_string()}))
            .collect();
        m.insert(k.to_string(), Value::Array(terms));
    }
    Value::Object(m)
}

pub fn cocycle_json(t: &CocycleTable) -> Value {
    Value::Array(
        t.entries()
            .filter(|(_, p)| !p.is_zero())
            .map(|((a, b), p)| json!({"left": a.to_string(), "right": b.to_string(), "poly": p.to_string()}))
            .collect(),
    )
}

pub fn table_json(t: &ActionTable) -> Value {
    let rules: Vec<Value> = t
        .rules()
        .map(|(f, r)| match r {
            ActionRule::Template { text, .. } => json!({"family": f.as_str(), "poly": text}),
            ActionRule::Pattern { pattern, b } => {
                json!({"family": f.as_str(), "pattern": pattern.to_string(), "b": b.to_string()})
            }
            ActionRule::Explicit(map) => {
                let values: Vec<Value> =
                    map.iter().map(|((i, m), p)| json!({"i": i, "m": m, "poly": p.to_string()})).collect();
                json!({"family": f.as_str(), "values": values})
            }
            ActionRule::Zero => json!({"family": f.as_str(), "poly": "0"}),
        })
        .collect();
    let subs: Vec<Value> =
        t.substitutions().iter().map(|(v, p)| json!({"var": v.name(), "value": p.to_string()})).collect();
    json!({"graded": t.is_graded(), "units": t.units(), "rules": rules, "substitutions": subs})
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let c = &self.config;
        let _ = write!(out, "ck {} --algebra {} --window {} --deg-bound {}", self.command, c.algebra, c.window, c.deg_bound);
        if let Some(d) = &c.degrees {
            let _ = write!(out, " --degrees {}", d);
        }
        if let Some(f) = &c.family {
            let _ = write!(out, " ({})", f);
        }
        out.push('\n');
        match &self.result {
            Body::Verify { checks } | Body::Modules { checks, .. } => {
                for ch in checks {
                    let _ = writeln!(out, "{:<9}{} ({} items, {} failed)", status(ch.passed()), ch.name, ch.total, ch.failed);
                    for i in ch.items.iter().filter(|i| !i.passed) {
                        let _ = writeln!(out, "    {}: {}", i.label, i.residual.as_deref().unwrap_or("?"));
                    }
                }
            }
            _ => {}
        }
        match &self.result {
            Body::Derivations { degrees } => {
                for d in degrees {
                    let _ = writeln!(
                        out,
                        "c = {:>2}: solutions {}, inner {}, outer {}{}",
                        d.c,
                        d.solution_dim,
                        d.inner_dim,
                        d.outer_dim,
                        match d.d_vec_inner {
                            Some(true) => ", d_vec inner",
                            Some(false) => ", d_vec outer",
                            None => "",
                        }
                    );
                    for r in &d.representatives {
                        let _ = writeln!(out, "    {}", compact(r));
                    }
                }
            }
            Body::Cohomology { sums } => {
                for s in sums {
                    let _ = writeln!(
                        out,
                        "s = {:>2}: cocycles {}, coboundaries {}, H2 {}",
                        s.sum, s.cocycle_dim, s.coboundary_dim, s.dim
                    );
                    for r in &s.representatives {
                        let _ = writeln!(out, "    {}", compact(r));
                    }
                }
            }
            Body::Modules { classification: Some(cl), .. } => {
                for st in &cl.stages {
                    let _ = writeln!(
                        out,
                        "stage {}: {} unknowns, {} equations, dim {}: {}",
                        st.name, st.unknowns, st.equations, st.solution_dim, st.outcome
                    );
                }
                let _ = writeln!(out, "verdict: {}", cl.verdict);
                let _ = writeln!(out, "round trip: {}", if cl.round_trip { "pass" } else { "fail" });
            }
            Body::Ope(o) => {
                let _ = writeln!(out, "{} index pairs translated", o.index_pairs);
                for d in &o.differences {
                    let _ = writeln!(out, "    {}", d);
                }
            }
            _ => {}
        }
        let _ = write!(out, "{}", status(self.passed));
        if let Some(t) = self.elapsed {
            let _ = write!(out, " in {:.2}s", t.as_secs_f64());
        }
        out.push('\n');
        out
    }
}

fn status(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn compact(v: &Value) -> String {
    serde_json::to_string(v).expect("value serialises")
}
