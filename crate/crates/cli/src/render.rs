//! Human-readable and JSON views of results.

use std::collections::BTreeMap;

use glpwb::bits;
use glpwb::construction::{CheckReport, OrdinalModel};
use glpwb::finitetop::FiniteSpace;
use glpwb::kripke::{JTree, KripkeModel};
use serde_json::{json, Value};

pub fn set(mask: u64) -> String {
    let items: Vec<String> = bits::members(mask).map(|x| x.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

pub fn worlds(t: &JTree, mask: u64) -> Vec<String> {
    bits::members(mask).map(|w| t.name(w).to_string()).collect()
}

pub fn space_json(s: &FiniteSpace) -> Value {
    serde_json::to_value(s.to_raw()).expect("plain data")
}

pub fn space_text(s: &FiniteSpace) -> String {
    let opens: Vec<String> = s.opens().iter().map(|&o| set(o)).collect();
    format!("{} points, opens {}", s.size(), opens.join(" "))
}

pub fn frame_text(t: &JTree) -> Vec<String> {
    let mut out = vec![format!("worlds: {}", worlds(t, t.full()).join(" "))];
    for k in 0..=t.n() {
        let edges: Vec<String> = (0..t.size())
            .flat_map(|x| bits::members(t.successors(k, x)).map(move |y| (x, y)))
            .map(|(x, y)| format!("{}->{}", t.name(x), t.name(y)))
            .collect();
        if !edges.is_empty() {
            out.push(format!("R{k}: {}", edges.join(" ")));
        }
    }
    out
}

pub fn model_json(m: &KripkeModel, world: usize) -> Value {
    let t = &m.frame;
    let valuation: BTreeMap<&str, Vec<String>> = m
        .valuation
        .iter()
        .map(|(k, v)| (k.as_str(), worlds(t, *v)))
        .collect();
    json!({
        "frame": t.to_raw(),
        "valuation": valuation,
        "world": t.name(world),
    })
}

pub fn model_text(m: &KripkeModel, world: usize) -> Vec<String> {
    let t = &m.frame;
    let mut out = vec![format!("refuted at {}", t.name(world))];
    out.extend(frame_text(t));
    for (k, v) in &m.valuation {
        out.push(format!("{k}: {{{}}}", worlds(t, *v).join(",")));
    }
    out
}

pub struct Checks {
    pub rank_height: CheckReport,
    pub suitability: CheckReport,
    pub local_structure: CheckReport,
}

impl Checks {
    pub fn all_ok(&self) -> bool {
        self.rank_height.is_ok() && self.suitability.is_ok() && self.local_structure.is_ok()
    }

    pub fn json(&self) -> Value {
        json!({
            "rank_height": self.rank_height,
            "suitability": self.suitability,
            "local_structure": self.local_structure,
        })
    }

    pub fn text(&self) -> Vec<String> {
        [
            ("rank-height", &self.rank_height),
            ("suitability", &self.suitability),
            ("local structure", &self.local_structure),
        ]
        .into_iter()
        .map(|(name, r)| {
            let status = if r.is_ok() { "ok" } else { "FAILED" };
            let mut line = format!("{name}: {status} ({} checked)", r.checked);
            if let Some(f) = r.failures.first() {
                line.push_str(&format!("; first failure at {}: {}", f.alpha, f.detail));
            }
            line
        })
        .collect()
    }
}

pub fn ordinal_model_text(m: &OrdinalModel) -> Vec<String> {
    let t = m.tree();
    let mut out = vec![format!("lambda = {}", m.lambda())];
    if let Ok(w) = m.witnesses() {
        for (node, alpha) in w {
            out.push(format!("f({alpha}) = {}", t.name(node)));
        }
    }
    out
}
