//! A fixed regression corpus: instances of the GLP and J axiom schemata
//! over a small body vocabulary, and a few non-theorems.

use crate::formula::{parse, Formula};

/// Bodies of nesting depth at most 2 over `p`, `q` with modalities `≤ 2`.
pub const BODIES: &[&str] = &[
    "p",
    "q",
    "false",
    "~p",
    "p & q",
    "p | q",
    "p -> q",
    "[0]p",
    "[1]p",
    "[2]p",
    "<0>p",
    "<1>p",
    "<2>p",
    "[0]~p",
    "[1](p & q)",
    "[2](p -> q)",
    "<0>[1]p",
    "[1]<0>q",
    "[0][2]p",
    "~[1]p",
    "p & [0]q",
    "[2]p | <1>q",
    "<2>~q",
    "[0]p -> [1]q",
    "<1>(p | q)",
];

/// Second arguments for the two-body schemata.
const PARTNERS: &[&str] = &["p", "q", "false", "~p", "[0]q", "<1>p"];

/// Non-theorems of GLP.
pub const NON_THEOREMS: &[&str] = &[
    "[1]p -> [0]p",
    "[0]false",
    "<0>true",
    "[1]false -> [0]false",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub schema: &'static str,
    pub formula: Formula,
}

fn f(text: &str) -> Formula {
    parse(text).expect("corpus entries parse")
}

pub fn bodies() -> Vec<Formula> {
    BODIES.iter().map(|b| f(b)).collect()
}

pub fn non_theorems() -> Vec<Formula> {
    NON_THEOREMS.iter().map(|b| f(b)).collect()
}

/// Axiom instances with modalities up to 2: tautologies (a few fixed
/// propositional shapes), K, Löb, `[m]a → [n]a` ("monotone"),
/// `<m>a → [n]<m>a` ("negative"), `[m]a → [m][n]a` for `m < n`
/// ("box-inner") and `[m]a → [n][m]a` for `m ≤ n` ("box-outer"). All but
/// "monotone" hold in J as well.
pub fn axiom_instances() -> Vec<Instance> {
    use Formula as F;
    let bodies = bodies();
    let partners: Vec<Formula> = PARTNERS.iter().map(|b| f(b)).collect();
    let mut out = Vec::new();
    let mut push = |schema, formula| out.push(Instance { schema, formula });
    let bx = |n, x: &Formula| F::boxed(n, x.clone());
    let dia = |n, x: &Formula| F::diamond(n, x.clone());
    let imp = |a: Formula, b: Formula| F::implies(a, b);
    for a in &bodies {
        push("tautology", imp(a.clone(), a.clone()));
        push("tautology", F::or(a.clone(), F::not(a.clone())));
        for b in &partners {
            push("tautology", imp(F::and(a.clone(), b.clone()), a.clone()));
            push("tautology", imp(a.clone(), imp(b.clone(), a.clone())));
            push(
                "tautology",
                imp(
                    imp(a.clone(), b.clone()),
                    imp(F::not(b.clone()), F::not(a.clone())),
                ),
            );
        }
    }
    for n in 0..=2 {
        for a in &bodies {
            for b in &partners {
                push(
                    "K",
                    imp(bx(n, &imp(a.clone(), b.clone())), imp(bx(n, a), bx(n, b))),
                );
            }
            push("Lob", imp(bx(n, &imp(bx(n, a), a.clone())), bx(n, a)));
        }
    }
    for m in 0..=2 {
        for n in 0..=2 {
            for a in &bodies {
                if m < n {
                    push("monotone", imp(bx(m, a), bx(n, a)));
                    push("negative", imp(dia(m, a), bx(n, &dia(m, a))));
                    push("box-inner", imp(bx(m, a), bx(m, &bx(n, a))));
                }
                if n >= m {
                    push("box-outer", imp(bx(m, a), bx(n, &bx(m, a))));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape() {
        assert_eq!(BODIES.len(), 25);
        assert!(bodies()
            .iter()
            .all(|b| b.max_modality().is_none_or(|m| m <= 2)));
        let all = axiom_instances();
        assert_eq!(
            all.len(),
            25 * (2 + 3 * 6) + 3 * 25 * (6 + 1) + 3 * 25 * 3 + 6 * 25
        );
        assert!(all
            .iter()
            .all(|i| i.formula.max_modality().is_none_or(|m| m <= 2)));
    }
}
