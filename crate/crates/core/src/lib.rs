//! Workbench for the polymodal provability logic GLP.
//!
//! * [`formula`]: syntax, parsing and the `M⁺` reduction from GLP to J.
//! * [`ordinal`]: Cantor normal form arithmetic below ε₀.
//! * [`kripke`]: tree-like J-frames, model checking and countermodel search.
//! * [`finitetop`]: derived sets, ranks, d-maps, ℓ-extensions, `τ⁺`,
//!   GLP-spaces, Magari frames and d-products on finite carriers.
//! * [`construction`]: compiles a finite J-tree into an ordinal countermodel
//!   on `[1, λ]` with `λ < ε₀`.

pub mod bits;
pub mod construction;
pub mod corpus;
pub mod finitetop;
pub mod formula;
pub mod kripke;
pub mod ordinal;
pub mod selftest;

pub use formula::Formula;
pub use ordinal::Ordinal;
