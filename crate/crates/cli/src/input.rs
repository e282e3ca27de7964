//! Argument decoding: `@path` indirection, formulas, ordinals, frames and
//! spaces.

use std::collections::BTreeMap;
use std::fs;

use glpwb::bits;
use glpwb::finitetop::{DeltaOperator, FiniteSpace, PolySpace, RawDelta, RawPolySpace, RawSpace};
use glpwb::formula::{parse, Formula};
use glpwb::kripke::{JTree, RawFrame};
use glpwb::ordinal::{self, Ordinal, OrdinalError};

use crate::CliError;

/// The argument itself, or the contents of the file after a leading `@`.
pub fn text(arg: &str) -> Result<String, CliError> {
    match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path)
            .map(|s| s.trim().to_string())
            .map_err(|e| CliError::Usage(format!("cannot read {path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

pub fn formula(arg: &str) -> Result<Formula, CliError> {
    let src = text(arg)?;
    parse(&src).map_err(|e| CliError::Usage(format!("bad formula: {e}")))
}

pub fn ord(arg: &str) -> Result<Ordinal, CliError> {
    let src = text(arg)?;
    ordinal::parse(&src).map_err(|e| match e {
        OrdinalError::Syntax { .. } => CliError::Usage(format!("bad ordinal {src:?}: {e}")),
        // resource limits hit while normalizing
        other => CliError::Failed(format!("ordinal {src:?}: {other}")),
    })
}

fn json<T: serde::de::DeserializeOwned>(arg: &str, what: &str) -> Result<T, CliError> {
    let src = text(arg)?;
    serde_json::from_str(&src).map_err(|e| CliError::Usage(format!("bad {what} JSON: {e}")))
}

pub fn frame(arg: &str) -> Result<JTree, CliError> {
    let raw: RawFrame = json(arg, "frame")?;
    JTree::from_raw(&raw).map_err(|e| CliError::Usage(format!("bad frame: {e}")))
}

/// A space as JSON `{"size", "opens"}` or one of `left:K`, `discrete:K`,
/// `indiscrete:K`, `sierpinski`.
pub fn space(arg: &str) -> Result<FiniteSpace, CliError> {
    let src = text(arg)?;
    let named = |prefix: &str| -> Option<Result<usize, CliError>> {
        src.strip_prefix(prefix).map(|k| {
            k.parse()
                .map_err(|_| CliError::Usage(format!("bad size in {src:?}")))
                .and_then(|k: usize| {
                    if k > 64 {
                        Err(CliError::Usage(format!(
                            "{k} points exceed the 64-point limit"
                        )))
                    } else {
                        Ok(k)
                    }
                })
        })
    };
    if let Some(k) = named("left:") {
        return Ok(FiniteSpace::left(k?));
    }
    if let Some(k) = named("discrete:") {
        return Ok(FiniteSpace::discrete(k?));
    }
    if let Some(k) = named("indiscrete:") {
        return Ok(FiniteSpace::indiscrete(k?));
    }
    if src == "sierpinski" {
        return Ok(FiniteSpace::sierpinski());
    }
    let raw: RawSpace = json(&src, "space")?;
    FiniteSpace::from_raw(&raw).map_err(|e| CliError::Usage(format!("bad space: {e}")))
}

pub fn polyspace(arg: &str) -> Result<PolySpace, CliError> {
    let raw: RawPolySpace = json(arg, "polyspace")?;
    PolySpace::from_raw(&raw).map_err(|e| CliError::Usage(format!("bad polyspace: {e}")))
}

pub fn delta(arg: &str) -> Result<DeltaOperator, CliError> {
    let raw: RawDelta = json(arg, "operator")?;
    DeltaOperator::from_raw(&raw).map_err(|e| CliError::Usage(format!("bad operator: {e}")))
}

/// `{"p": [0, 2], ...}` over a carrier of `size` points.
pub fn valuation(arg: &str, size: usize) -> Result<BTreeMap<String, u64>, CliError> {
    let raw: BTreeMap<String, Vec<usize>> = json(arg, "valuation")?;
    raw.into_iter()
        .map(|(k, v)| match v.iter().find(|&&x| x >= size) {
            Some(x) => Err(CliError::Usage(format!(
                "point {x} of {k} is outside the carrier"
            ))),
            None => Ok((k, bits::from_slice(&v))),
        })
        .collect()
}
