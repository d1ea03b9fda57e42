//! Exact calculator for the tautological ring of moduli spaces of stable
//! pointed curves at small genus, with a verification suite for the
//! intersection theory of loci of marked Weierstrass points on genus-2
//! curves, and the blown-up-plane test-family computation.
//!
//! All arithmetic is exact rational; there is no floating point anywhere.

pub mod canon;
pub mod class;
pub mod enumerate;
pub mod equality;
pub mod error;
pub mod expr;
pub mod formulas;
pub mod generators;
pub mod graph;
pub mod integrate;
pub mod mult;
pub mod par;
pub mod rat;
pub mod report;
pub mod space;
pub mod stratum;
pub mod testfamily;
pub mod witten;

pub use error::{Error, Result};
pub use rat::Rat;
pub use space::MarkedSpace;
