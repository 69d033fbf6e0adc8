//! Chain-level Hochschild and cyclic calculus for finite-rank curved A∞ algebras.
//!
//! Everything is exact and finitary: the coefficient ring is K[t]/(t^M), optionally with an even
//! Laurent variable `e`, and chains are polynomial in `u^{±1}`. Signs follow the shifted-degree
//! Koszul convention with `|a|' = |a| − 1`.

pub mod algebra;
pub mod chain;
pub mod cochain;
pub mod harness;
pub mod ring;
pub mod samples;

pub use algebra::{AInftyAlgebra, EulerGrading, Pairing, TableCheck};
pub use chain::{Chain, ChainKey};
pub use cochain::{Cochain, TableCochain};
pub use ring::{Lin, Mono, RingElem, Vector};
