//! JSON and text reports. Objects keep insertion order, so output bytes
//! depend only on the input.

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use snc_core::blowup::{ChartTree, TransformEvent};
use snc_core::geom::{LocalReport, Mode, StratumKey, Triple, Verdict};
use snc_core::hilbert::HsFunction;
use snc_core::pipeline::{RunCertificate, Verification};
use snc_core::poly::format_q;
use snc_core::{Ideal, Q};

use crate::format::ideal_text;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

pub fn digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub struct Report {
    pub command: &'static str,
    pub input_digest: String,
    pub mode: Mode,
    pub results: Vec<Value>,
    pub certificate: Option<Value>,
}

impl Report {
    pub fn to_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), json!(self.command));
        m.insert("input_digest".into(), json!(self.input_digest));
        m.insert("mode".into(), json!(mode_name(self.mode)));
        m.insert("results".into(), Value::Array(self.results.clone()));
        if let Some(c) = &self.certificate {
            m.insert("certificate".into(), c.clone());
        }
        m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        Value::Object(m)
    }

    pub fn render(&self, format: OutputFormat) -> String {
        let v = self.to_value();
        match format {
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
                s.push('\n');
                s
            }
            OutputFormat::Text => {
                let mut s = String::new();
                text_lines(&v, 0, &mut s);
                s
            }
        }
    }
}

fn text_lines(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                if is_scalar(x) {
                    out.push_str(&format!("{pad}{k}: {}\n", scalar(x)));
                } else {
                    out.push_str(&format!("{pad}{k}:\n"));
                    text_lines(x, indent + 1, out);
                }
            }
        }
        Value::Array(a) if a.iter().all(is_scalar) => {
            let items: Vec<String> = a.iter().map(scalar).collect();
            out.push_str(&format!("{pad}[{}]\n", items.join(", ")));
        }
        Value::Array(a) => {
            for x in a {
                if is_scalar(x) {
                    out.push_str(&format!("{pad}- {}\n", scalar(x)));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    text_lines(x, indent + 1, out);
                }
            }
        }
        x => out.push_str(&format!("{pad}{}\n", scalar(x))),
    }
}

fn is_scalar(v: &Value) -> bool {
    match v {
        Value::Array(a) => a.iter().all(|x| !x.is_array() && !x.is_object()),
        Value::Object(_) => false,
        _ => true,
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "undecided".into(),
        Value::Array(a) => format!("[{}]", a.iter().map(scalar).collect::<Vec<_>>().join(", ")),
        x => x.to_string(),
    }
}

pub fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Arrangement => "arrangement",
        Mode::General => "general",
    }
}

pub fn q_json(c: &Q) -> Value {
    json!(format_q(c))
}

pub fn point_json(p: &[Q]) -> Value {
    Value::Array(p.iter().map(q_json).collect())
}

pub fn ideal_json(i: &Ideal) -> Value {
    Value::Array(i.generators().iter().map(|g| json!(g.to_string())).collect())
}

/// `true`, `false`, or `null` when undecided.
pub fn verdict_json(v: &Verdict) -> Value {
    match v {
        Verdict::True => json!(true),
        Verdict::False(_) => json!(false),
        Verdict::Undecided(_) => Value::Null,
    }
}

pub fn stratum_json(k: &StratumKey) -> Value {
    json!({ "e": k.e, "c": k.c, "q": k.q })
}

pub fn local_report_json(r: &LocalReport, names: &[String]) -> Value {
    let mut reasons = Map::new();
    for (k, v) in [("variety", &r.stable_snc.variety), ("pair", &r.stable_snc.pair), ("triple", &r.stable_snc.triple)] {
        if let Some(why) = v.reason() {
            reasons.insert(k.into(), json!(why));
        }
    }
    let components: Vec<Value> = r
        .components
        .iter()
        .map(|&(i, smooth, dim)| json!({ "component": names.get(i).cloned().unwrap_or_else(|| format!("X{}", i + 1)), "smooth": smooth, "dim": dim }))
        .collect();
    json!({
        "point": point_json(&r.point),
        "kappa": r.kappa,
        "e": r.e,
        "components": components,
        "snc": verdict_json(&r.snc),
        "stable_snc": {
            "variety": verdict_json(&r.stable_snc.variety),
            "pair": verdict_json(&r.stable_snc.pair),
            "triple": verdict_json(&r.stable_snc.triple),
        },
        "reasons": Value::Object(reasons),
        "stratum": r.stratum.as_ref().map(stratum_json),
        "iota": [r.iota.0, r.iota.1],
        "caveats": r.caveats,
    })
}

pub fn hs_json(h: &HsFunction) -> Value {
    json!({
        "values": h.values,
        "polynomial": h.polynomial.as_ref().map(|p| p.iter().map(q_json).collect::<Vec<_>>()),
        "stabilization": h.stabilization,
        "exact": h.exact,
    })
}

pub fn triple_json(t: &Triple) -> Value {
    let parts: Vec<Value> = t
        .d
        .parts
        .iter()
        .map(|p| json!({ "coefficient": q_json(&p.coefficient), "ideal": ideal_text(&p.ideal), "host": p.host + 1 }))
        .collect();
    json!({
        "components": t.x.components.iter().map(ideal_text).collect::<Vec<_>>(),
        "divisor": parts,
        "boundary": t.e.components.iter().map(|h| ideal_text(&h.ideal)).collect::<Vec<_>>(),
    })
}

pub fn event_json(e: &TransformEvent) -> Value {
    match e {
        TransformEvent::ComponentConsumed(i) => json!({ "component_consumed": i + 1 }),
        TransformEvent::DivisorPartRemoved(k) => json!({ "divisor_part_removed": k + 1 }),
    }
}

fn tree_node_json(tree: &ChartTree, idx: usize) -> Value {
    let node = &tree.nodes[idx];
    let mut m = Map::new();
    m.insert("node".into(), json!(idx));
    m.insert("path".into(), json!(tree.path_string(idx)));
    m.insert("year".into(), json!(node.year));
    if let Some(c) = &node.chart {
        m.insert("chart".into(), json!(c.label()));
        m.insert("exceptional".into(), json!(c.exceptional.to_string()));
    }
    m.insert("triple".into(), triple_json(&node.triple));
    if !node.events.is_empty() {
        m.insert("events".into(), Value::Array(node.events.iter().map(event_json).collect()));
    }
    if let Some(c) = &node.center {
        m.insert("center".into(), ideal_json(c));
    }
    m.insert("children".into(), Value::Array(node.children.iter().map(|&k| tree_node_json(tree, k)).collect()));
    Value::Object(m)
}

pub fn tree_json(tree: &ChartTree) -> Value {
    tree_node_json(tree, 0)
}

pub fn verification_json(v: &Verification) -> Value {
    match v {
        Verification::Accepted => json!({ "accepted": true }),
        Verification::Rejected { reason, witness } => {
            json!({ "accepted": false, "reason": reason, "witness": witness.as_ref().map(|p| point_json(p)) })
        }
    }
}

pub fn certificate_json(cert: &RunCertificate, check: &Verification) -> Value {
    let steps: Vec<Value> = cert
        .steps
        .iter()
        .map(|s| {
            json!({
                "node": s.node,
                "path": s.path,
                "year": s.year,
                "center": ideal_json(&s.center),
                "step": s.tag.label(),
                "evidence": s.evidence.iter().map(|(p, v)| json!({ "point": point_json(p), "reason": v.reason() })).collect::<Vec<_>>(),
            })
        })
        .collect();
    let leaves: Vec<Value> = cert
        .leaf_verdicts
        .iter()
        .map(|(idx, v, w)| {
            json!({
                "node": idx,
                "path": cert.tree.path_string(*idx),
                "stable_snc": verdict_json(v),
                "reason": v.reason(),
                "witness": w.as_ref().map(|p| point_json(p)),
            })
        })
        .collect();
    let hs: Vec<Value> = cert
        .hs_checks
        .iter()
        .map(|h| json!({ "node": h.node, "point": point_json(&h.point), "stratum": stratum_json(&h.key), "equal": h.equal }))
        .collect();
    json!({
        "accepted": cert.accepted,
        "verification": verification_json(check),
        "steps": steps,
        "leaves": leaves,
        "hs_checks": hs,
        "tree": tree_json(&cert.tree),
    })
}
