//! JSON views of recipes and models; ordinals use the text syntax.

use serde_json::{json, Map, Value};

use super::{ConstructionError, OrdinalModel, Recipe};
use crate::kripke::JTree;

impl Recipe {
    /// Tagged nested objects, worlds by name.
    pub fn to_json(&self, t: &JTree) -> Value {
        let name = |w: &usize| Value::String(t.name(*w).to_string());
        match self {
            Recipe::Single { root } => json!({"kind": "single", "root": name(root), "lambda": "1"}),
            Recipe::Sum { parts, lambda } => json!({
                "kind": "sum",
                "lambda": lambda.to_string(),
                "parts": parts.iter().map(|p| p.to_json(t)).collect::<Vec<_>>(),
            }),
            Recipe::GlIter {
                parts,
                root,
                lambda,
            } => {
                let items = match parts.as_ref() {
                    Recipe::Sum { parts, .. } => parts.iter().map(|p| p.to_json(t)).collect(),
                    other => vec![other.to_json(t)],
                };
                json!({
                    "kind": "gliter",
                    "root": name(root),
                    "kappa": parts.lambda().to_string(),
                    "lambda": lambda.to_string(),
                    "parts": items,
                })
            }
            Recipe::Lift {
                inner,
                root,
                shifted,
                lambda,
            } => json!({
                "kind": "lift",
                "root": name(root),
                "shifted": shifted,
                "lambda": lambda.to_string(),
                "inner": inner.to_json(t),
            }),
            Recipe::DProd { x, y, root, lambda } => json!({
                "kind": "dprod",
                "root": name(root),
                "kappa": x.lambda().to_string(),
                "lambda": lambda.to_string(),
                "x": x.to_json(t),
                "y": y.to_json(t),
            }),
        }
    }
}

impl OrdinalModel {
    /// `{"n", "lambda", "frame", "recipe", "witnesses"}`.
    pub fn to_json(&self) -> Result<Value, ConstructionError> {
        let t = self.tree();
        let witnesses: Map<String, Value> = self
            .witnesses()?
            .into_iter()
            .map(|(w, a)| (t.name(w).to_string(), Value::String(a.to_string())))
            .collect();
        Ok(json!({
            "n": self.n(),
            "lambda": self.lambda().to_string(),
            "frame": serde_json::to_value(t.to_raw()).expect("plain data"),
            "recipe": self.recipe().to_json(t),
            "witnesses": witnesses,
        }))
    }
}
