//! The d-product `X ⊗_d Y` and its polytopological version.
//!
//! Points of `Z` are laid out as the copies `X_y` for isolated `y` of `Y`
//! (ascending `y`, and `x` ascending inside each copy), followed by one
//! point per limit point of `Y` (ascending).

use super::{plus_topology, FiniteSpace, PolySpace, TopError};
use crate::bits;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DProduct {
    pub space: FiniteSpace,
    /// `π₀`, defined on `Z₀` only.
    pub pi0: Vec<Option<usize>>,
    /// `π₁`, total.
    pub pi1: Vec<usize>,
    /// Isolated points of `Y`, in copy order.
    pub iso: Vec<usize>,
    /// Limit points `dY`, in the order of `Z₁`.
    pub limits: Vec<usize>,
    x_size: usize,
}

impl DProduct {
    /// `Z₀` as a mask.
    pub fn z0(&self) -> u64 {
        bits::full(self.x_size * self.iso.len())
    }

    /// `Z₁` as a mask.
    pub fn z1(&self) -> u64 {
        self.space.full() & !self.z0()
    }

    /// `i_y(a)` for the `j`-th isolated point of `Y`.
    pub fn copy_of(&self, j: usize, a: u64) -> u64 {
        a << (j * self.x_size)
    }

    /// `π₁⁻¹(b)`.
    pub fn pi1_preimage(&self, b: u64) -> u64 {
        self.pi1
            .iter()
            .enumerate()
            .filter(|(_, &y)| bits::contains(b, y))
            .fold(0, |acc, (z, _)| acc | bits::singleton(z))
    }

    /// Embeds a subset of `dY` (in the subspace's own numbering) into `Z₁`.
    fn z1_part(&self, a: u64) -> u64 {
        let offset = self.x_size * self.iso.len();
        a << offset
    }
}

fn layout(x: &FiniteSpace, y: &FiniteSpace) -> Result<DProduct, TopError> {
    let dy = y.d(y.full());
    let iso = bits::to_vec(y.full() & !dy);
    let limits = bits::to_vec(dy);
    let size = x.size() * iso.len() + limits.len();
    if size > bits::MAX_POINTS {
        return Err(TopError::TooLarge(size));
    }
    let mut pi0 = Vec::with_capacity(size);
    let mut pi1 = Vec::with_capacity(size);
    for &yi in &iso {
        for xi in 0..x.size() {
            pi0.push(Some(xi));
            pi1.push(yi);
        }
    }
    for &yl in &limits {
        pi0.push(None);
        pi1.push(yl);
    }
    Ok(DProduct {
        space: FiniteSpace::discrete(0),
        pi0,
        pi1,
        iso,
        limits,
        x_size: x.size(),
    })
}

/// `X ⊗_d Y`: generated by the copies `i_y(V)`, `V` open in `X`, and the
/// preimages `π₁⁻¹(U)`, `U` open in `Y`.
pub fn d_product(x: &FiniteSpace, y: &FiniteSpace) -> Result<DProduct, TopError> {
    let mut p = layout(x, y)?;
    let mut gens = Vec::new();
    for j in 0..p.iso.len() {
        gens.extend(x.opens().iter().map(|&v| p.copy_of(j, v)));
    }
    gens.extend(y.opens().iter().map(|&u| p.pi1_preimage(u)));
    p.space = FiniteSpace::generated(p.pi1.len(), gens);
    Ok(p)
}

/// `(X⁺ × iso(Y)) ⊔ (dY)⁺` on the carrier of `X ⊗_d Y`.
pub fn prod_plus_target(x: &FiniteSpace, y: &FiniteSpace) -> Result<FiniteSpace, TopError> {
    let p = layout(x, y)?;
    let xp = plus_topology(x);
    let dyp = plus_topology(&y.subspace(y.d(y.full())));
    let mut gens = Vec::new();
    for j in 0..p.iso.len() {
        gens.extend(xp.opens().iter().map(|&v| p.copy_of(j, v)));
    }
    gens.extend(dyp.opens().iter().map(|&u| p.z1_part(u)));
    gens.push(p.z0());
    gens.push(p.z1());
    Ok(FiniteSpace::generated(p.pi1.len(), gens))
}

/// GLP d-product: `θ₀` is the d-product of `τ₀` and `σ₀`; for `i ≥ 1`,
/// `θᵢ` is the sum of `τᵢ` on each copy and `σᵢ` restricted to `dY`,
/// where `iso(Y)` and `dY` refer to `σ₀`.
pub fn glp_d_product(p: &PolySpace, q: &PolySpace) -> Result<PolySpace, TopError> {
    if p.topologies().len() != q.topologies().len() {
        return Err(TopError::ArityMismatch(
            p.topologies().len(),
            q.topologies().len(),
        ));
    }
    let base = d_product(&p.topologies()[0], &q.topologies()[0])?;
    let mut thetas = vec![base.space.clone()];
    let y0 = &q.topologies()[0];
    let dy = y0.d(y0.full());
    for i in 1..p.topologies().len() {
        let (tau, sigma) = (&p.topologies()[i], &q.topologies()[i]);
        let mut gens = Vec::new();
        for j in 0..base.iso.len() {
            gens.extend(tau.opens().iter().map(|&u| base.copy_of(j, u)));
        }
        gens.extend(sigma.opens().iter().map(|&v| base.pi1_preimage(v & dy)));
        gens.push(base.z0());
        thetas.push(FiniteSpace::generated(base.space.size(), gens));
    }
    PolySpace::new(thetas)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_left_factor() {
        let p = d_product(&FiniteSpace::discrete(1), &FiniteSpace::sierpinski()).unwrap();
        assert_eq!(p.space, FiniteSpace::sierpinski());
        assert_eq!(p.pi0, vec![Some(0), None]);
        assert_eq!(p.pi1, vec![0, 1]);
    }

    #[test]
    fn ordinal_product_shape() {
        // Sierpiński has one isolated and one limit point: 2·1 + 1 points
        let s = FiniteSpace::sierpinski();
        let p = d_product(&s, &s).unwrap();
        assert_eq!(p.space.size(), 3);
        assert_eq!(p.space.ranks().unwrap(), vec![0, 1, 2]);
        let l = FiniteSpace::left(3);
        let p = d_product(&s, &l).unwrap();
        assert_eq!(p.space.size(), 2 + 2);
        assert_eq!(p.space.ranks().unwrap(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn glp_product_of_points_and_discrete() {
        let point = PolySpace::new(vec![FiniteSpace::discrete(1); 3]).unwrap();
        let prod = glp_d_product(&point, &point).unwrap();
        assert_eq!(prod.size(), 1);
        let d = PolySpace::new(vec![FiniteSpace::discrete(2); 2]).unwrap();
        let prod = glp_d_product(&d, &d).unwrap();
        assert!(prod
            .topologies()
            .iter()
            .all(|t| *t == FiniteSpace::discrete(4)));
        assert!(glp_d_product(&point, &d).is_err());
    }
}
