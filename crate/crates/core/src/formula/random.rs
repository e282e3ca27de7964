//! Random formulas for sweeps and property tests.

use rand::Rng;

use super::Formula;

/// A random formula with at most `max_nodes` AST nodes, modal indices up
/// to `max_modality`, over the given variables.
pub fn random_formula<R: Rng + ?Sized>(
    rng: &mut R,
    max_nodes: usize,
    max_modality: usize,
    vars: &[&str],
) -> Formula {
    let budget = rng.gen_range(1..=max_nodes.max(1));
    grow(rng, budget, max_modality, vars)
}

fn grow<R: Rng + ?Sized>(rng: &mut R, budget: usize, top: usize, vars: &[&str]) -> Formula {
    if budget == 1 {
        return if vars.is_empty() || rng.gen_ratio(1, 6) {
            Formula::Bottom
        } else {
            Formula::var(vars[rng.gen_range(0..vars.len())])
        };
    }
    if budget == 2 || rng.gen_bool(0.5) {
        let inner = grow(rng, budget - 1, top, vars);
        return match rng.gen_range(0..3) {
            0 => Formula::not(inner),
            1 => Formula::boxed(rng.gen_range(0..=top), inner),
            _ => Formula::diamond(rng.gen_range(0..=top), inner),
        };
    }
    let left = rng.gen_range(1..budget - 1);
    let a = grow(rng, left, top, vars);
    let b = grow(rng, budget - 1 - left, top, vars);
    match rng.gen_range(0..3) {
        0 => Formula::and(a, b),
        1 => Formula::or(a, b),
        _ => Formula::implies(a, b),
    }
}
