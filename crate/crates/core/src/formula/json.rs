//! Tagged JSON form: `{"op":"box","n":0,"arg":{...}}` and friends.

use serde_json::{json, Value};
use thiserror::Error;

use super::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JsonFormulaError {
    #[error("expected a JSON object with an \"op\" field")]
    NotAnObject,
    #[error("unknown op {0:?}")]
    UnknownOp(String),
    #[error("op {op:?} is missing field {field:?}")]
    MissingField { op: String, field: &'static str },
}

pub(super) fn to_value(f: &Formula) -> Value {
    match f {
        Formula::Bottom => json!({"op": "bot"}),
        Formula::Var(name) => json!({"op": "var", "name": name}),
        Formula::Not(a) => json!({"op": "not", "arg": to_value(a)}),
        Formula::And(a, b) => json!({"op": "and", "left": to_value(a), "right": to_value(b)}),
        Formula::Or(a, b) => json!({"op": "or", "left": to_value(a), "right": to_value(b)}),
        Formula::Implies(a, b) => {
            json!({"op": "implies", "left": to_value(a), "right": to_value(b)})
        }
        Formula::Box(n, a) => json!({"op": "box", "n": n, "arg": to_value(a)}),
        Formula::Diamond(n, a) => json!({"op": "diamond", "n": n, "arg": to_value(a)}),
    }
}

pub(super) fn from_value(v: &Value) -> Result<Formula, JsonFormulaError> {
    let obj = v.as_object().ok_or(JsonFormulaError::NotAnObject)?;
    let op = obj
        .get("op")
        .and_then(Value::as_str)
        .ok_or(JsonFormulaError::NotAnObject)?;
    let field = |name: &'static str| {
        obj.get(name).ok_or(JsonFormulaError::MissingField {
            op: op.to_string(),
            field: name,
        })
    };
    let sub = |name: &'static str| field(name).and_then(from_value);
    let index = || {
        field("n")?
            .as_u64()
            .map(|n| n as usize)
            .ok_or(JsonFormulaError::MissingField {
                op: op.to_string(),
                field: "n",
            })
    };
    Ok(match op {
        "bot" => Formula::Bottom,
        "var" => Formula::Var(
            field("name")?
                .as_str()
                .ok_or(JsonFormulaError::MissingField {
                    op: op.to_string(),
                    field: "name",
                })?
                .to_string(),
        ),
        "not" => Formula::not(sub("arg")?),
        "and" => Formula::and(sub("left")?, sub("right")?),
        "or" => Formula::or(sub("left")?, sub("right")?),
        "implies" => Formula::implies(sub("left")?, sub("right")?),
        "box" => Formula::boxed(index()?, sub("arg")?),
        "diamond" => Formula::diamond(index()?, sub("arg")?),
        other => return Err(JsonFormulaError::UnknownOp(other.to_string())),
    })
}
