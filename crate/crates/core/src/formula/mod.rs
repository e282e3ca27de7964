//! Formulas of the polymodal language with modalities `[0]`, `[1]`, ...
//! and the `M` / `M⁺` translation that reduces GLP to J.

pub mod compiled;
mod json;
mod parse;
mod random;

use std::collections::HashSet;
use std::fmt;

pub use parse::{parse, ParseError};
pub use random::random_formula;

/// A polymodal formula. `Diamond(n, f)` abbreviates `¬[n]¬f`; both node
/// kinds are kept so that printing preserves what was written.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Bottom,
    Var(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Box(usize, Box<Formula>),
    Diamond(usize, Box<Formula>),
}

impl Formula {
    pub fn var(name: impl Into<String>) -> Formula {
        Formula::Var(name.into())
    }

    /// The constant `true`, encoded as `¬⊥`.
    pub fn top() -> Formula {
        Formula::Not(Box::new(Formula::Bottom))
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn boxed(n: usize, f: Formula) -> Formula {
        Formula::Box(n, Box::new(f))
    }

    pub fn diamond(n: usize, f: Formula) -> Formula {
        Formula::Diamond(n, Box::new(f))
    }

    /// Left-nested conjunction; the empty conjunction is `true`.
    pub fn conjunction(parts: impl IntoIterator<Item = Formula>) -> Formula {
        parts
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or_else(Formula::top)
    }

    pub fn is_top(&self) -> bool {
        matches!(self, Formula::Not(inner) if **inner == Formula::Bottom)
    }

    /// Immediate children, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Bottom | Formula::Var(_) => vec![],
            Formula::Not(a) | Formula::Box(_, a) | Formula::Diamond(_, a) => vec![a],
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => vec![a, b],
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        1 + self
            .children()
            .into_iter()
            .map(Formula::size)
            .sum::<usize>()
    }

    /// Largest modal index occurring in the formula, boxes and diamonds alike.
    pub fn max_modality(&self) -> Option<usize> {
        let own = match self {
            Formula::Box(n, _) | Formula::Diamond(n, _) => Some(*n),
            _ => None,
        };
        self.children()
            .into_iter()
            .filter_map(Formula::max_modality)
            .chain(own)
            .max()
    }

    /// Variable names in order of first occurrence.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        if let Formula::Var(name) = self {
            if !out.contains(name) {
                out.push(name.clone());
            }
        }
        for c in self.children() {
            c.collect_vars(out);
        }
    }

    /// Distinct subformulas, each listed after its own subformulas.
    pub fn subformulas(&self) -> Vec<Formula> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        self.collect_post(&mut seen, &mut out);
        out
    }

    fn collect_post(&self, seen: &mut HashSet<Formula>, out: &mut Vec<Formula>) {
        for c in self.children() {
            c.collect_post(seen, out);
        }
        if seen.insert(self.clone()) {
            out.push(self.clone());
        }
    }

    /// Replaces every `⟨n⟩f` by its definition `¬[n]¬f`.
    pub fn expand_diamonds(&self) -> Formula {
        match self {
            Formula::Bottom | Formula::Var(_) => self.clone(),
            Formula::Not(a) => Formula::not(a.expand_diamonds()),
            Formula::And(a, b) => Formula::and(a.expand_diamonds(), b.expand_diamonds()),
            Formula::Or(a, b) => Formula::or(a.expand_diamonds(), b.expand_diamonds()),
            Formula::Implies(a, b) => Formula::implies(a.expand_diamonds(), b.expand_diamonds()),
            Formula::Box(n, a) => Formula::boxed(*n, a.expand_diamonds()),
            Formula::Diamond(n, a) => {
                Formula::not(Formula::boxed(*n, Formula::not(a.expand_diamonds())))
            }
        }
    }

    /// All distinct subformulas of the shape `[m]ψ`, diamonds read as
    /// `¬[m]¬ψ`. Order: pre-order, left to right, first occurrence wins.
    pub fn box_subformulas(&self) -> Vec<(usize, Formula)> {
        fn walk(f: &Formula, out: &mut Vec<(usize, Formula)>) {
            if let Formula::Box(m, body) = f {
                let entry = (*m, (**body).clone());
                if !out.contains(&entry) {
                    out.push(entry);
                }
            }
            for c in f.children() {
                walk(c, out);
            }
        }
        let mut out = Vec::new();
        walk(&self.expand_diamonds(), &mut out);
        out
    }

    /// The index `n` used by `M` and `M⁺`: the largest `m` among the box
    /// subformulas, or 0 when there are none.
    pub fn reduction_depth(&self) -> usize {
        self.box_subformulas()
            .iter()
            .map(|(m, _)| *m)
            .max()
            .unwrap_or(0)
    }

    /// `M(φ)`: the conjunction of `[mᵢ]ψᵢ → [k]ψᵢ` over the box
    /// subformulas `[mᵢ]ψᵢ` and all `mᵢ < k ≤ n`.
    pub fn m_formula(&self) -> Formula {
        let boxes = self.box_subformulas();
        let n = self.reduction_depth();
        let mut parts = Vec::new();
        for (m, body) in &boxes {
            for k in m + 1..=n {
                parts.push(Formula::implies(
                    Formula::boxed(*m, body.clone()),
                    Formula::boxed(k, body.clone()),
                ));
            }
        }
        Formula::conjunction(parts)
    }

    /// `M⁺(φ) = M(φ) ∧ [0]M(φ) ∧ … ∧ [n]M(φ)`.
    pub fn m_plus(&self) -> Formula {
        let m = self.m_formula();
        let n = self.reduction_depth();
        let mut out = m.clone();
        for k in 0..=n {
            out = Formula::and(out, Formula::boxed(k, m.clone()));
        }
        out
    }

    /// `M⁺(φ) → φ`, the J-formula equivalent to GLP-provability of `φ`.
    pub fn glp_to_j(&self) -> Formula {
        Formula::implies(self.m_plus(), self.clone())
    }

    pub fn to_json(&self) -> serde_json::Value {
        json::to_value(self)
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Formula, json::JsonFormulaError> {
        json::from_value(value)
    }
}

pub use json::JsonFormulaError;

// Binding strength used by the printer: larger binds tighter.
fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Implies(..) => 1,
        Formula::Or(..) => 2,
        Formula::And(..) => 3,
        _ => 4,
    }
}

fn write_at(f: &Formula, min_prec: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let paren = precedence(f) < min_prec;
    if paren {
        out.write_str("(")?;
    }
    match f {
        Formula::Bottom => out.write_str("false")?,
        _ if f.is_top() => out.write_str("true")?,
        Formula::Var(name) => out.write_str(name)?,
        Formula::Not(a) => {
            out.write_str("~")?;
            write_at(a, 4, out)?;
        }
        Formula::Box(n, a) => {
            write!(out, "[{n}]")?;
            write_at(a, 4, out)?;
        }
        Formula::Diamond(n, a) => {
            write!(out, "<{n}>")?;
            write_at(a, 4, out)?;
        }
        Formula::And(a, b) => {
            write_at(a, 3, out)?;
            out.write_str(" & ")?;
            write_at(b, 4, out)?;
        }
        Formula::Or(a, b) => {
            write_at(a, 2, out)?;
            out.write_str(" | ")?;
            write_at(b, 3, out)?;
        }
        Formula::Implies(a, b) => {
            write_at(a, 2, out)?;
            out.write_str(" -> ")?;
            write_at(b, 1, out)?;
        }
    }
    if paren {
        out.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_at(self, 0, f)
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn max_modality_examples() {
        assert_eq!(p("[0]p -> [2]p").max_modality(), Some(2));
        assert_eq!(p("p | ~q").max_modality(), None);
        assert_eq!(p("<3>false").max_modality(), Some(3));
    }

    #[test]
    fn box_subformulas_examples() {
        assert_eq!(
            p("[0]p -> [2]p").box_subformulas(),
            vec![(0, p("p")), (2, p("p"))]
        );
        assert!(p("p").box_subformulas().is_empty());
        assert_eq!(
            p("[1][0]p").box_subformulas(),
            vec![(1, p("[0]p")), (0, p("p"))]
        );
    }

    #[test]
    fn diamonds_contribute_their_definitional_box() {
        assert_eq!(p("<1>q").box_subformulas(), vec![(1, p("~q"))]);
        // same box reached twice is listed once
        assert_eq!(p("[0]p & [0]p").box_subformulas().len(), 1);
    }

    #[test]
    fn m_formula_examples() {
        assert_eq!(
            p("[0]p -> [2]p").m_formula(),
            p("([0]p -> [1]p) & ([0]p -> [2]p)")
        );
        assert_eq!(p("[1]q").m_formula(), Formula::top());
        assert_eq!(p("p").m_formula(), Formula::top());
    }

    #[test]
    fn m_plus_examples() {
        assert_eq!(p("[1]q").m_plus(), p("true & [0]true & [1]true"));
        assert_eq!(p("p").m_plus(), p("true & [0]true"));
        let m = p("([0]p -> [1]p) & ([0]p -> [2]p)");
        let expected = Formula::and(
            Formula::and(
                Formula::and(
                    Formula::and(m.clone(), Formula::boxed(0, m.clone())),
                    Formula::boxed(1, m.clone()),
                ),
                Formula::boxed(2, m.clone()),
            ),
            Formula::boxed(3, m.clone()),
        );
        // n = 2, so the conjunction stops at [2]
        assert_ne!(p("[0]p -> [2]p").m_plus(), expected);
        let expected = Formula::and(
            Formula::and(
                Formula::and(m.clone(), Formula::boxed(0, m.clone())),
                Formula::boxed(1, m.clone()),
            ),
            Formula::boxed(2, m),
        );
        assert_eq!(p("[0]p -> [2]p").m_plus(), expected);
    }

    #[test]
    fn printer_uses_minimal_parentheses() {
        assert_eq!(p("(p -> q) -> r").to_string(), "(p -> q) -> r");
        assert_eq!(p("p -> q -> r").to_string(), "p -> q -> r");
        assert_eq!(p("p & (q | r)").to_string(), "p & (q | r)");
        assert_eq!(p("~[0](p & q)").to_string(), "~[0](p & q)");
        assert_eq!(p("p | (q | r)").to_string(), "p | (q | r)");
        assert_eq!(p("p | q | r").to_string(), "p | q | r");
    }
}
