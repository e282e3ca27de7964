//! Formulas flattened into a subformula DAG for repeated evaluation over
//! bitset carriers.

use std::collections::HashMap;

use super::Formula;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Node {
    Bottom,
    Var(usize),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Implies(usize, usize),
    Box(usize, usize),
    Diamond(usize, usize),
}

/// Distinct subformulas in dependency order; the last node is the root.
#[derive(Clone, Debug)]
pub struct Compiled {
    pub nodes: Vec<Node>,
    pub subformulas: Vec<Formula>,
    pub vars: Vec<String>,
}

impl Compiled {
    pub fn new(f: &Formula) -> Compiled {
        let mut c = Compiled {
            nodes: Vec::new(),
            subformulas: Vec::new(),
            vars: Vec::new(),
        };
        let mut index = HashMap::new();
        c.add(f, &mut index);
        c
    }

    fn add(&mut self, f: &Formula, index: &mut HashMap<Formula, usize>) -> usize {
        if let Some(&i) = index.get(f) {
            return i;
        }
        let node = match f {
            Formula::Bottom => Node::Bottom,
            Formula::Var(name) => {
                let v = match self.vars.iter().position(|x| x == name) {
                    Some(v) => v,
                    None => {
                        self.vars.push(name.clone());
                        self.vars.len() - 1
                    }
                };
                Node::Var(v)
            }
            Formula::Not(a) => Node::Not(self.add(a, index)),
            Formula::And(a, b) => {
                let (a, b) = (self.add(a, index), self.add(b, index));
                Node::And(a, b)
            }
            Formula::Or(a, b) => {
                let (a, b) = (self.add(a, index), self.add(b, index));
                Node::Or(a, b)
            }
            Formula::Implies(a, b) => {
                let (a, b) = (self.add(a, index), self.add(b, index));
                Node::Implies(a, b)
            }
            Formula::Box(n, a) => Node::Box(*n, self.add(a, index)),
            Formula::Diamond(n, a) => Node::Diamond(*n, self.add(a, index)),
        };
        self.nodes.push(node);
        self.subformulas.push(f.clone());
        index.insert(f.clone(), self.nodes.len() - 1);
        self.nodes.len() - 1
    }

    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Truth sets of every node. `valuation[v]` is the extension of
    /// `vars[v]`, and `diamond(n, A)` must return `δₙ(A)` within `full`;
    /// boxes are evaluated as `full ∖ δₙ(full ∖ A)`.
    pub fn eval(
        &self,
        full: u64,
        valuation: &[u64],
        diamond: impl Fn(usize, u64) -> u64,
    ) -> Vec<u64> {
        let mut out: Vec<u64> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let v = match *node {
                Node::Bottom => 0,
                Node::Var(i) => valuation[i] & full,
                Node::Not(a) => full & !out[a],
                Node::And(a, b) => out[a] & out[b],
                Node::Or(a, b) => out[a] | out[b],
                Node::Implies(a, b) => full & (!out[a] | out[b]),
                Node::Box(n, a) => full & !diamond(n, full & !out[a]),
                Node::Diamond(n, a) => diamond(n, out[a]),
            };
            out.push(v);
        }
        out
    }
}
